//! Problem data: diffusion laws, boundary conditions, scheme parameters.

use crate::mesh::DualTreatment;

/// Nonlinear diffusivity `a(u) >= 0` with its antiderivative `A`, `A' = a`.
///
/// The antiderivative must be supplied explicitly (exactly, not numerically)
/// because the flux `a^ = [A(u)]/[u]` and the auxiliary weak form both work
/// with `A` directly.
#[derive(Clone, Copy)]
pub struct DiffusionModel {
    a: fn(f64) -> f64,
    antideriv: fn(f64) -> f64,
    unit: bool,
}

impl DiffusionModel {
    /// Constant diffusivity `a(u) = 1`, `A(u) = u` (the heat equation).
    pub const fn unit() -> Self {
        Self {
            a: |_| 1.0,
            antideriv: |u| u,
            unit: true,
        }
    }

    pub const fn new(a: fn(f64) -> f64, antideriv: fn(f64) -> f64) -> Self {
        Self {
            a,
            antideriv,
            unit: false,
        }
    }

    #[inline]
    pub fn a(&self, u: f64) -> f64 {
        if self.unit {
            1.0
        } else {
            (self.a)(u)
        }
    }

    #[inline]
    pub fn antideriv(&self, u: f64) -> f64 {
        if self.unit {
            u
        } else {
            (self.antideriv)(u)
        }
    }
}

impl std::fmt::Debug for DiffusionModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.unit {
            write!(f, "DiffusionModel(unit)")
        } else {
            write!(f, "DiffusionModel(custom)")
        }
    }
}

/// Direction-wise diffusion pair for 2D problems: `p = A(u)_x`, `q = B(u)_y`.
#[derive(Debug, Clone, Copy)]
pub struct DiffusionModel2D {
    pub x: DiffusionModel,
    pub y: DiffusionModel,
}

impl DiffusionModel2D {
    pub const fn unit() -> Self {
        Self {
            x: DiffusionModel::unit(),
            y: DiffusionModel::unit(),
        }
    }
}

/// Boundary condition for the diffusion problem.
///
/// Neumann is homogeneous (`u_x = 0` at both ends): the boundary flux terms
/// of the scheme vanish and the auxiliary solve uses the interior trace at
/// the boundary. Dirichlet uses the boundary data as the exterior trace in
/// jumps and in the `a^` flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundarySpec {
    Periodic,
    Neumann,
    Dirichlet { left: f64, right: f64 },
}

impl BoundarySpec {
    pub const fn dirichlet_zero() -> Self {
        BoundarySpec::Dirichlet {
            left: 0.0,
            right: 0.0,
        }
    }

    /// Periodic boundaries pair with the periodic dual treatment only, and
    /// non-periodic boundaries with the L/C treatments only.
    pub fn compatible_with(&self, treatment: DualTreatment) -> bool {
        match self {
            BoundarySpec::Periodic => treatment == DualTreatment::Periodic,
            _ => treatment != DualTreatment::Periodic,
        }
    }
}

/// Parameters of the spatial discretization.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    /// Polynomial degree `k`.
    pub degree: usize,
    /// Dual-point offset in x.
    pub xi0: f64,
    /// Dual-point offset in y (2D only).
    pub eta0: f64,
    /// Penalty coefficient, `alpha >= 0`.
    pub alpha: f64,
    /// Boundary treatment of the dual mesh(es).
    pub treatment: DualTreatment,
    /// Gauss points per direction for the scheme integrals.
    pub volume_quad: usize,
    /// Gauss points per direction for error norms.
    pub error_quad: usize,
    /// Optional per-interface penalty override (length `n_cells + 1`).
    pub alpha_override: Option<Vec<f64>>,
}

impl SchemeConfig {
    /// Defaults: `2(k+1)` volume points (exact for the linear-case
    /// integrands) and `k+3` error points.
    pub fn new(degree: usize, xi0: f64, alpha: f64, treatment: DualTreatment) -> Self {
        Self {
            degree,
            xi0,
            eta0: 0.0,
            alpha,
            treatment,
            volume_quad: 2 * (degree + 1),
            error_quad: degree + 3,
            alpha_override: None,
        }
    }

    pub fn with_eta0(mut self, eta0: f64) -> Self {
        self.eta0 = eta0;
        self
    }

    /// Penalty coefficient at interface `i` (override wins when present).
    pub fn alpha_at(&self, i: usize) -> f64 {
        match &self.alpha_override {
            Some(v) => v[i],
            None => self.alpha,
        }
    }
}
