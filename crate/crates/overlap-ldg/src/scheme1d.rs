//! The 1D spatial discretization on overlapping meshes.
//!
//! The semi-discrete scheme solves, per dual cell,
//!
//! ```text
//! int_P p_h w dx = -int_P A(u_h) w_x dx + A(u_h(x~_i)) w^-_i - A(u_h(x~_{i-1})) w^+_{i-1}
//! ```
//!
//! and then per primitive cell
//!
//! ```text
//! int_I (u_h)_t v dx = -int_I a(u_h) p_h v_x dx
//!                      + a^_{i+1/2} p^_{i+1/2} v^-_{i+1/2} - a^_{i-1/2} p^_{i-1/2} v^+_{i-1/2}
//! ```
//!
//! with the chord-slope flux `a^ = [A(u_h)]/[u_h]` and the penalty flux
//! `p^ = p_h(x_{i-1/2}) + (alpha/dx~)[u_h]`. `p_h` is single-valued at the
//! primitive interfaces because they lie strictly inside dual cells.
//!
//! Boundary conventions: homogeneous Neumann drops the boundary flux terms
//! of the u-equation and uses the interior trace of `A(u_h)` in the p-solve;
//! Dirichlet uses the boundary datum as the exterior trace (in the jump, in
//! `a^`, and as `A(g)` in the p-solve) with the penalty active at the
//! boundary interfaces.

use std::sync::atomic::{AtomicBool, Ordering};

use thiserror::Error;

use crate::basis::PolyBasis;
use crate::field::DGField;
use crate::mesh::{DualMesh1D, DualTreatment, Mesh1D};
use crate::model::{BoundarySpec, DiffusionModel, SchemeConfig};
use crate::overlap::{InterfaceNotInterior, Overlap1D};
use crate::quadrature::gauss_rule;

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error("dual mesh was not built from the given primitive mesh")]
    IncompatibleMeshes,
    #[error("boundary condition is incompatible with the {0:?} dual treatment")]
    IncompatibleBoundary(DualTreatment),
    #[error("scheme config asks for {0:?} treatment but the dual mesh uses {1:?}")]
    TreatmentMismatch(DualTreatment, DualTreatment),
    #[error("penalty coefficient must be nonnegative, got {0}")]
    NegativeAlpha(f64),
    #[error("alpha override needs one entry per interface ({expected}), got {got}")]
    AlphaOverrideLength { expected: usize, got: usize },
    #[error(transparent)]
    InterfaceNotInterior(#[from] InterfaceNotInterior),
    #[error("coefficient vector has {got} entries, expected {expected}")]
    FieldSize { expected: usize, got: usize },
}

/// Chord-slope diffusion flux `a^ = (A(u+) - A(u-)) / (u+ - u-)`.
///
/// For nearly continuous traces the ratio is 0/0; below a relative jump of
/// 1e-12 the analytic limit `a((u+ + u-)/2)` is used instead.
pub fn flux_a_hat(u_minus: f64, u_plus: f64, model: &DiffusionModel) -> f64 {
    let jump = u_plus - u_minus;
    let eps = 1e-12 * u_minus.abs().max(u_plus.abs()).max(1.0);
    if jump.abs() > eps {
        (model.antideriv(u_plus) - model.antideriv(u_minus)) / jump
    } else {
        model.a(0.5 * (u_minus + u_plus))
    }
}

/// Penalty flux `p^ = p + (alpha / dx~) [u]`.
pub fn flux_p_hat(p_value: f64, jump_u: f64, alpha: f64, dx_tilde: f64) -> f64 {
    p_value + alpha / dx_tilde * jump_u
}

/// Both sides of the discrete energy identity, see
/// [`LdgOperator1D::energy_identity`].
#[derive(Debug, Clone, Copy)]
pub struct EnergyIdentity {
    /// `H_u(u_h, p_h, u_h)`.
    pub h_u: f64,
    /// `H_p(u_h, p_h)` (equals the squared L2 norm of `p_h`).
    pub h_p: f64,
    /// `sum a^ (alpha / dx~) [u]^2` over the active interfaces.
    pub penalty_sum: f64,
    /// `|h_u + h_p + penalty_sum|`; zero up to rounding for the scheme.
    pub defect: f64,
    /// Magnitude scale for relative comparisons.
    pub scale: f64,
}

/// End of a dual cell as seen by the p-solve boundary terms.
struct DualEnd {
    prim: usize,
    /// Basis values at the evaluation point, unused for a Dirichlet end.
    phi: Vec<f64>,
    /// Dirichlet boundary datum, when this end is a non-periodic domain end.
    dirichlet: Option<f64>,
}

struct IfaceData {
    dual: usize,
    dual_len: f64,
    alpha: f64,
    /// Dual basis values at the interface point.
    phi_dual: Vec<f64>,
}

/// Assembled 1D LDG operator: precomputes the common refinement of the two
/// meshes and all basis tables, so each application is a pure contraction.
pub struct LdgOperator1D {
    mesh: Mesh1D,
    dual: DualMesh1D,
    model: DiffusionModel,
    bc: BoundarySpec,
    degree: usize,
    modes: usize,
    nq: usize,
    /// `(prim, dual)` per segment; tables share the segment ordering.
    seg_cells: Vec<(u32, u32)>,
    /// Per node: `[w, phi_prim, dphi_prim, phi_dual, dphi_dual]` blocks.
    seg_tab: Vec<f64>,
    by_prim: Vec<Vec<u32>>,
    by_dual: Vec<Vec<u32>>,
    ifaces: Vec<IfaceData>,
    ends: Vec<[DualEnd; 2]>,
    inv_mass_prim: Vec<f64>,
    inv_mass_dual: Vec<f64>,
    mass_prim: Vec<f64>,
    mass_dual: Vec<f64>,
    trace_minus: Vec<f64>,
    trace_plus: Vec<f64>,
    negative_a: AtomicBool,
}

impl LdgOperator1D {
    pub fn new(
        mesh: &Mesh1D,
        dual: &DualMesh1D,
        model: DiffusionModel,
        bc: BoundarySpec,
        config: &SchemeConfig,
    ) -> Result<Self, SchemeError> {
        if !dual.is_dual_of(mesh) {
            return Err(SchemeError::IncompatibleMeshes);
        }
        if config.treatment != dual.treatment() {
            return Err(SchemeError::TreatmentMismatch(
                config.treatment,
                dual.treatment(),
            ));
        }
        if !bc.compatible_with(dual.treatment()) {
            return Err(SchemeError::IncompatibleBoundary(dual.treatment()));
        }
        if config.alpha < 0.0 {
            return Err(SchemeError::NegativeAlpha(config.alpha));
        }
        let n = mesh.n_cells();
        if let Some(v) = &config.alpha_override {
            if v.len() != n + 1 {
                return Err(SchemeError::AlphaOverrideLength {
                    expected: n + 1,
                    got: v.len(),
                });
            }
            if let Some(&bad) = v.iter().find(|&&a| a < 0.0) {
                return Err(SchemeError::NegativeAlpha(bad));
            }
        }

        let overlap = Overlap1D::build(mesh, dual)?;
        let degree = config.degree;
        let modes = degree + 1;
        let basis = PolyBasis::new(degree);
        let quad = gauss_rule(config.volume_quad.max(degree + 1));
        let nq = quad.len();

        let block = 1 + 4 * modes;
        let mut seg_tab = vec![0.0; overlap.segments.len() * nq * block];
        let mut seg_cells = Vec::with_capacity(overlap.segments.len());
        for (s, seg) in overlap.segments.iter().enumerate() {
            seg_cells.push((seg.prim as u32, seg.dual as u32));
            let mid = 0.5 * (seg.lo + seg.hi);
            let half = 0.5 * (seg.hi - seg.lo);
            let dprim = 2.0 / mesh.cell_len(seg.prim);
            let ddual = 2.0 / dual.cell_len(seg.dual);
            for q in 0..nq {
                let x = mid + half * quad.nodes[q];
                let base = (s * nq + q) * block;
                let tab = &mut seg_tab[base..base + block];
                tab[0] = quad.weights[q] * half;
                let xi_p = mesh.to_ref(seg.prim, x);
                let xi_d = dual.to_ref(seg.dual, x + seg.dual_offset);
                basis.eval_all(xi_p, &mut tab[1..1 + modes]);
                basis.eval_deriv_all(xi_p, &mut tab[1 + modes..1 + 2 * modes]);
                basis.eval_all(xi_d, &mut tab[1 + 2 * modes..1 + 3 * modes]);
                basis.eval_deriv_all(xi_d, &mut tab[1 + 3 * modes..1 + 4 * modes]);
                for m in 0..modes {
                    tab[1 + modes + m] *= dprim;
                    tab[1 + 3 * modes + m] *= ddual;
                }
            }
        }

        let mut ifaces = Vec::with_capacity(n + 1);
        for (i, geom) in overlap.interfaces.iter().enumerate() {
            let mut phi_dual = vec![0.0; modes];
            let xi = dual.to_ref(geom.dual, geom.x + geom.dual_offset);
            basis.eval_all(xi, &mut phi_dual);
            ifaces.push(IfaceData {
                dual: geom.dual,
                dual_len: geom.dual_len,
                alpha: config.alpha_at(i),
                phi_dual,
            });
        }

        let (a, b) = mesh.domain();
        let length = mesh.length();
        let mut ends = Vec::with_capacity(dual.n_cells());
        for j in 0..dual.n_cells() {
            let (lo, hi) = dual.cell_unrolled(j);
            let mut make_end = |xe: f64, left_of_domain: bool| -> DualEnd {
                if dual.treatment() != DualTreatment::Periodic && (xe == a || xe == b) {
                    return match bc {
                        BoundarySpec::Neumann => {
                            let (prim, xi) = if xe == a { (0, -1.0) } else { (n - 1, 1.0) };
                            let mut phi = vec![0.0; modes];
                            basis.eval_all(xi, &mut phi);
                            DualEnd {
                                prim,
                                phi,
                                dirichlet: None,
                            }
                        }
                        BoundarySpec::Dirichlet { left, right } => DualEnd {
                            prim: 0,
                            phi: vec![0.0; modes],
                            dirichlet: Some(if xe == a { left } else { right }),
                        },
                        BoundarySpec::Periodic => unreachable!(),
                    };
                }
                // A dual point; unwrap the periodic wrap cell's left end.
                let xp = if left_of_domain { xe + length } else { xe };
                let prim = mesh.locate(xp);
                let mut phi = vec![0.0; modes];
                basis.eval_all(mesh.to_ref(prim, xp), &mut phi);
                DualEnd {
                    prim,
                    phi,
                    dirichlet: None,
                }
            };
            let left = make_end(lo, lo < a);
            let right = make_end(hi, false);
            ends.push([left, right]);
        }

        let inv_mass_prim = (0..n).map(|i| 2.0 / mesh.cell_len(i)).collect();
        let mass_prim = (0..n).map(|i| 0.5 * mesh.cell_len(i)).collect();
        let inv_mass_dual = (0..dual.n_cells()).map(|j| 2.0 / dual.cell_len(j)).collect();
        let mass_dual = (0..dual.n_cells()).map(|j| 0.5 * dual.cell_len(j)).collect();

        let mut trace_minus = vec![0.0; modes];
        let mut trace_plus = vec![0.0; modes];
        basis.eval_all(-1.0, &mut trace_minus);
        basis.eval_all(1.0, &mut trace_plus);

        Ok(Self {
            mesh: mesh.clone(),
            dual: dual.clone(),
            model,
            bc,
            degree,
            modes,
            nq,
            seg_cells,
            seg_tab,
            by_prim: overlap.by_prim,
            by_dual: overlap.by_dual,
            ifaces,
            ends,
            inv_mass_prim,
            inv_mass_dual,
            mass_prim,
            mass_dual,
            trace_minus,
            trace_plus,
            negative_a: AtomicBool::new(false),
        })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn dual(&self) -> &DualMesh1D {
        &self.dual
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_dof_u(&self) -> usize {
        self.mesh.n_cells() * self.modes
    }

    pub fn n_dof_p(&self) -> usize {
        self.dual.n_cells() * self.modes
    }

    /// True if `a(u_h)` was negative at any quadrature point so far.
    pub fn negative_diffusivity_seen(&self) -> bool {
        self.negative_a.load(Ordering::Relaxed)
    }

    #[inline]
    fn dot(x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Weak-form right-hand side of the p-equation (before the mass solve).
    fn weak_p_into(&self, u: &[f64], out: &mut [f64]) {
        let modes = self.modes;
        let block = 1 + 4 * modes;
        out.fill(0.0);
        for j in 0..self.dual.n_cells() {
            let acc = &mut out[j * modes..(j + 1) * modes];
            for &s in &self.by_dual[j] {
                let s = s as usize;
                let prim = self.seg_cells[s].0 as usize;
                let uc = &u[prim * modes..(prim + 1) * modes];
                for q in 0..self.nq {
                    let tab = &self.seg_tab[(s * self.nq + q) * block..];
                    let u_q = Self::dot(&tab[1..1 + modes], uc);
                    let w_a = tab[0] * self.model.antideriv(u_q);
                    let dpd = &tab[1 + 3 * modes..1 + 4 * modes];
                    for m in 0..modes {
                        acc[m] -= w_a * dpd[m];
                    }
                }
            }
            let [left, right] = &self.ends[j];
            let a_left = self.model.antideriv(self.end_value(left, u));
            let a_right = self.model.antideriv(self.end_value(right, u));
            for m in 0..modes {
                acc[m] += a_right * self.trace_plus[m] - a_left * self.trace_minus[m];
            }
        }
    }

    fn end_value(&self, end: &DualEnd, u: &[f64]) -> f64 {
        match end.dirichlet {
            Some(g) => g,
            None => Self::dot(
                &end.phi,
                &u[end.prim * self.modes..(end.prim + 1) * self.modes],
            ),
        }
    }

    /// Solve the auxiliary weak form for `p_h` on the dual mesh.
    pub fn solve_p_into(&self, u: &[f64], p: &mut [f64]) {
        debug_assert_eq!(u.len(), self.n_dof_u());
        debug_assert_eq!(p.len(), self.n_dof_p());
        self.weak_p_into(u, p);
        for j in 0..self.dual.n_cells() {
            let inv = self.inv_mass_dual[j];
            for c in &mut p[j * self.modes..(j + 1) * self.modes] {
                *c *= inv;
            }
        }
    }

    pub fn solve_p(&self, u: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; self.n_dof_p()];
        self.solve_p_into(u, &mut p);
        p
    }

    /// One-sided traces `(u^-, u^+)` of `u_h` at interface `i`, with the
    /// boundary-condition conventions filled in at the domain ends.
    fn iface_traces(&self, i: usize, u: &[f64]) -> (f64, f64) {
        let n = self.mesh.n_cells();
        let modes = self.modes;
        let trace_r = |c: usize| Self::dot(&self.trace_plus, &u[c * modes..(c + 1) * modes]);
        let trace_l = |c: usize| Self::dot(&self.trace_minus, &u[c * modes..(c + 1) * modes]);
        match self.bc {
            BoundarySpec::Periodic => {
                if i == 0 || i == n {
                    (trace_r(n - 1), trace_l(0))
                } else {
                    (trace_r(i - 1), trace_l(i))
                }
            }
            BoundarySpec::Neumann => {
                // Zero-jump convention: exterior trace mirrors the interior.
                if i == 0 {
                    let v = trace_l(0);
                    (v, v)
                } else if i == n {
                    let v = trace_r(n - 1);
                    (v, v)
                } else {
                    (trace_r(i - 1), trace_l(i))
                }
            }
            BoundarySpec::Dirichlet { left, right } => {
                if i == 0 {
                    (left, trace_l(0))
                } else if i == n {
                    (trace_r(n - 1), right)
                } else {
                    (trace_r(i - 1), trace_l(i))
                }
            }
        }
    }

    /// Numerical flux `a^ p^` at every interface. Neumann boundary fluxes
    /// vanish; the periodic seam flux is computed once and reused.
    fn interface_fluxes(&self, u: &[f64], p: &[f64], flux: &mut [f64]) {
        let n = self.mesh.n_cells();
        let modes = self.modes;
        for i in 0..=n {
            if self.bc == BoundarySpec::Neumann && (i == 0 || i == n) {
                flux[i] = 0.0;
                continue;
            }
            if self.bc == BoundarySpec::Periodic && i == n {
                flux[n] = flux[0];
                continue;
            }
            let (um, up) = self.iface_traces(i, u);
            let ahat = flux_a_hat(um, up, &self.model);
            let f = &self.ifaces[i];
            let pval = Self::dot(&f.phi_dual, &p[f.dual * modes..(f.dual + 1) * modes]);
            flux[i] = ahat * flux_p_hat(pval, up - um, f.alpha, f.dual_len);
        }
    }

    /// Weak-form right-hand side of the u-equation (before the mass solve).
    fn weak_u_into(&self, u: &[f64], p: &[f64], out: &mut [f64]) {
        let modes = self.modes;
        let block = 1 + 4 * modes;
        let n = self.mesh.n_cells();
        let mut flux = vec![0.0; n + 1];
        self.interface_fluxes(u, p, &mut flux);
        out.fill(0.0);
        let mut negative = false;
        for i in 0..n {
            let acc = &mut out[i * modes..(i + 1) * modes];
            let uc = &u[i * modes..(i + 1) * modes];
            for &s in &self.by_prim[i] {
                let s = s as usize;
                let dual = self.seg_cells[s].1 as usize;
                let pc = &p[dual * modes..(dual + 1) * modes];
                for q in 0..self.nq {
                    let tab = &self.seg_tab[(s * self.nq + q) * block..];
                    let u_q = Self::dot(&tab[1..1 + modes], uc);
                    let p_q = Self::dot(&tab[1 + 2 * modes..1 + 3 * modes], pc);
                    let a_q = self.model.a(u_q);
                    negative |= a_q < 0.0;
                    let w_ap = tab[0] * a_q * p_q;
                    let dpp = &tab[1 + modes..1 + 2 * modes];
                    for m in 0..modes {
                        acc[m] -= w_ap * dpp[m];
                    }
                }
            }
            for m in 0..modes {
                acc[m] += flux[i + 1] * self.trace_plus[m] - flux[i] * self.trace_minus[m];
            }
        }
        if negative {
            self.negative_a.store(true, Ordering::Relaxed);
        }
    }

    /// Time-derivative coefficients of `u_h` given a freshly solved `p_h`.
    pub fn residual_into(&self, u: &[f64], p: &[f64], out: &mut [f64]) {
        self.weak_u_into(u, p, out);
        for i in 0..self.mesh.n_cells() {
            let inv = self.inv_mass_prim[i];
            for c in &mut out[i * self.modes..(i + 1) * self.modes] {
                *c *= inv;
            }
        }
    }

    /// Full spatial operator: solve for `p_h`, then the u-residual.
    pub fn apply(&self, u: &[f64], dudt: &mut [f64]) {
        let p = self.solve_p(u);
        self.residual_into(u, &p, dudt);
    }

    /// Squared L2 norm of a coefficient vector on the primitive mesh.
    pub fn norm_sq_u(&self, u: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.mesh.n_cells() {
            let m = self.mass_prim[i];
            for c in &u[i * self.modes..(i + 1) * self.modes] {
                total += m * c * c;
            }
        }
        total
    }

    /// Squared L2 norm of a coefficient vector on the dual mesh.
    pub fn norm_sq_p(&self, p: &[f64]) -> f64 {
        let mut total = 0.0;
        for j in 0..self.dual.n_cells() {
            let m = self.mass_dual[j];
            for c in &p[j * self.modes..(j + 1) * self.modes] {
                total += m * c * c;
            }
        }
        total
    }

    /// Penalty dissipation `sum a^ (alpha/dx~) [u]^2` over the interfaces
    /// active for the boundary condition (interior for Neumann, all for
    /// Dirichlet, seam counted once for periodic).
    fn penalty_sum(&self, u: &[f64]) -> f64 {
        let n = self.mesh.n_cells();
        let range: Box<dyn Iterator<Item = usize>> = match self.bc {
            BoundarySpec::Periodic => Box::new(0..n),
            BoundarySpec::Neumann => Box::new(1..n),
            BoundarySpec::Dirichlet { .. } => Box::new(0..=n),
        };
        let mut total = 0.0;
        for i in range {
            let (um, up) = self.iface_traces(i, u);
            let jump = up - um;
            let ahat = flux_a_hat(um, up, &self.model);
            let f = &self.ifaces[i];
            total += ahat * f.alpha / f.dual_len * jump * jump;
        }
        total
    }

    /// Evaluate the discrete energy identity
    /// `H_u(u_h, p_h, u_h) + H_p(u_h, p_h) + sum a^ (alpha/dx~)[u_h]^2 = 0`.
    ///
    /// Both `H` values are assembled from the weak forms (not from the
    /// telescoped closed form), so the defect measures the structural
    /// cancellation of the scheme down to rounding.
    pub fn energy_identity(&self, u: &[f64]) -> EnergyIdentity {
        let p = self.solve_p(u);
        let mut weak = vec![0.0; self.n_dof_p()];
        self.weak_p_into(u, &mut weak);
        let h_p = Self::dot(&weak, &p);
        let mut weak_u = vec![0.0; self.n_dof_u()];
        self.weak_u_into(u, &p, &mut weak_u);
        let h_u = Self::dot(&weak_u, u);
        let penalty_sum = self.penalty_sum(u);
        let defect = (h_u + h_p + penalty_sum).abs();
        let scale = 1.0_f64.max(h_u.abs()).max(h_p.abs()).max(penalty_sum.abs());
        EnergyIdentity {
            h_u,
            h_p,
            penalty_sum,
            defect,
            scale,
        }
    }

    /// Semi-discrete energy rate `1/2 d/dt ||u_h||^2 + ||p_h||^2`, which the
    /// stability result bounds by zero for `a >= 0`, `alpha >= 0`.
    pub fn energy_rate(&self, u: &[f64]) -> f64 {
        let p = self.solve_p(u);
        let mut weak_u = vec![0.0; self.n_dof_u()];
        self.weak_u_into(u, &p, &mut weak_u);
        Self::dot(&weak_u, u) + self.norm_sq_p(&p)
    }
}

fn check_field(field: &DGField, degree: usize, cells: usize) -> Result<(), SchemeError> {
    let expected = cells * (degree + 1);
    if field.degree() != degree || field.coeffs().len() != expected {
        return Err(SchemeError::FieldSize {
            expected,
            got: field.coeffs().len(),
        });
    }
    Ok(())
}

/// One-shot auxiliary solve; see [`LdgOperator1D::solve_p`].
pub fn solve_p(
    u: &DGField,
    mesh: &Mesh1D,
    dual: &DualMesh1D,
    model: DiffusionModel,
    bc: BoundarySpec,
    config: &SchemeConfig,
) -> Result<DGField, SchemeError> {
    let op = LdgOperator1D::new(mesh, dual, model, bc, config)?;
    check_field(u, config.degree, mesh.n_cells())?;
    Ok(DGField::from_coeffs_1d(
        config.degree,
        dual.n_cells(),
        op.solve_p(u.coeffs()),
    ))
}

/// One-shot residual evaluation; `p` must come from [`solve_p`] on `u`.
pub fn residual_u(
    u: &DGField,
    p: &DGField,
    mesh: &Mesh1D,
    dual: &DualMesh1D,
    model: DiffusionModel,
    bc: BoundarySpec,
    config: &SchemeConfig,
) -> Result<DGField, SchemeError> {
    let op = LdgOperator1D::new(mesh, dual, model, bc, config)?;
    check_field(u, config.degree, mesh.n_cells())?;
    check_field(p, config.degree, dual.n_cells())?;
    let mut out = vec![0.0; op.n_dof_u()];
    op.residual_into(u.coeffs(), p.coeffs(), &mut out);
    Ok(DGField::from_coeffs_1d(config.degree, mesh.n_cells(), out))
}

/// One-shot energy-identity check; see [`LdgOperator1D::energy_identity`].
pub fn energy_identity_check(
    u: &DGField,
    mesh: &Mesh1D,
    dual: &DualMesh1D,
    model: DiffusionModel,
    bc: BoundarySpec,
    config: &SchemeConfig,
) -> Result<EnergyIdentity, SchemeError> {
    let op = LdgOperator1D::new(mesh, dual, model, bc, config)?;
    check_field(u, config.degree, mesh.n_cells())?;
    Ok(op.energy_identity(u.coeffs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{l2_error_dual, observed_orders};
    use crate::field::l2_project;
    use std::f64::consts::PI;

    fn op(
        n: usize,
        k: usize,
        xi0: f64,
        alpha: f64,
        treatment: DualTreatment,
        bc: BoundarySpec,
        model: DiffusionModel,
    ) -> LdgOperator1D {
        let mesh = Mesh1D::uniform(0.0, 2.0 * PI, n).unwrap();
        let dual = DualMesh1D::build(&mesh, xi0, treatment).unwrap();
        let config = SchemeConfig::new(k, xi0, alpha, treatment);
        LdgOperator1D::new(&mesh, &dual, model, bc, &config).unwrap()
    }

    #[test]
    fn flux_a_hat_linear_case() {
        let m = DiffusionModel::unit();
        assert_eq!(flux_a_hat(-0.3, 2.0, &m), 1.0);
        assert_eq!(flux_a_hat(5.0, 5.0, &m), 1.0);
    }

    #[test]
    fn flux_a_hat_quadratic_case() {
        // a(u) = u^2, A(u) = u^3/3: chord slope (27/3 - 0)/3 = 3.
        let m = DiffusionModel::new(|u| u * u, |u| u * u * u / 3.0);
        assert!((flux_a_hat(0.0, 3.0, &m) - 3.0).abs() < 1e-14);
        // Equal traces fall back to the analytic limit a(2) = 4.
        assert!((flux_a_hat(2.0, 2.0, &m) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn flux_a_hat_symmetric_and_continuous() {
        let m = DiffusionModel::new(|u| u * u + 1.0, |u| u * u * u / 3.0 + u);
        for &(x, y) in &[(0.3, -1.2), (2.0, 2.5), (-0.7, -0.7)] {
            assert_eq!(flux_a_hat(x, y, &m), flux_a_hat(y, x, &m));
        }
        // Continuity across the small-jump branch.
        let u = 0.8;
        let limit = flux_a_hat(u, u, &m);
        for &j in &[1e-9, 1e-10, 1e-11, 1e-13] {
            let v = flux_a_hat(u, u + j, &m);
            assert!((v - limit).abs() < 1e-8, "jump {j}: {v} vs {limit}");
        }
    }

    #[test]
    fn flux_p_hat_values() {
        assert_eq!(flux_p_hat(0.7, 0.4, 0.0, 0.1), 0.7);
        assert!((flux_p_hat(0.5, 0.2, 1.0, 0.1) - 2.5).abs() < 1e-14);
        assert_eq!(flux_p_hat(0.9, 0.0, 3.0, 0.25), 0.9);
    }

    #[test]
    fn constant_field_gives_zero_p_and_residual() {
        for &t in &[DualTreatment::LMesh, DualTreatment::CMesh] {
            let op = op(8, 1, 0.0, 1.0, t, BoundarySpec::Neumann, DiffusionModel::unit());
            let u = l2_project(op.mesh(), 1, 4, |_| 2.5);
            let p = op.solve_p(u.coeffs());
            assert!(p.iter().all(|c| c.abs() < 1e-13));
            let mut dudt = vec![0.0; op.n_dof_u()];
            op.apply(u.coeffs(), &mut dudt);
            assert!(dudt.iter().all(|c| c.abs() < 1e-12));
        }
    }

    #[test]
    fn k0_p_solve_matches_trace_difference() {
        // Hand-derived k = 0 weak form: p = (u(x~_i) - u(x~_{i-1})) / dx~.
        let mesh = Mesh1D::uniform(0.0, 2.0 * PI, 6).unwrap();
        let dual = DualMesh1D::build(&mesh, 0.3, DualTreatment::LMesh).unwrap();
        let config = SchemeConfig::new(0, 0.3, 0.0, DualTreatment::LMesh);
        let op = LdgOperator1D::new(&mesh, &dual, DiffusionModel::unit(), BoundarySpec::Neumann, &config)
            .unwrap();
        let u = l2_project(&mesh, 0, 3, f64::sin);
        let p = op.solve_p(u.coeffs());
        let uf = DGField::from_coeffs_1d(0, 6, u.coeffs().to_vec());
        let points = dual.points();
        for j in 1..dual.n_cells() - 1 {
            let ul = uf.eval_at(&mesh, points[j - 1], None).unwrap();
            let ur = uf.eval_at(&mesh, points[j], None).unwrap();
            let expected = (ur - ul) / dual.cell_len(j);
            let got = p[j] / 2.0_f64.sqrt();
            assert!((got - expected).abs() < 1e-13, "cell {j}: {got} vs {expected}");
        }
    }

    #[test]
    fn p_approximates_derivative_periodic() {
        // u = sin x projected; p should converge to cos x at order k+1.
        for k in [1usize, 2] {
            let mut errors = Vec::new();
            let ns = [10usize, 20, 40];
            for &n in &ns {
                let mesh = Mesh1D::uniform(0.0, 2.0 * PI, n).unwrap();
                let dual = DualMesh1D::build(&mesh, 0.0, DualTreatment::Periodic).unwrap();
                let config = SchemeConfig::new(k, 0.0, 0.0, DualTreatment::Periodic);
                let op = LdgOperator1D::new(
                    &mesh,
                    &dual,
                    DiffusionModel::unit(),
                    BoundarySpec::Periodic,
                    &config,
                )
                .unwrap();
                let u = l2_project(&mesh, k, 2 * (k + 1), f64::sin);
                let p = DGField::from_coeffs_1d(k, dual.n_cells(), op.solve_p(u.coeffs()));
                errors.push(l2_error_dual(&p, &dual, k + 3, f64::cos));
            }
            let orders = observed_orders(&errors, &ns);
            let last = orders[2].unwrap();
            assert!(
                (last - (k as f64 + 1.0)).abs() < 0.25,
                "k={k}: order {last}, errors {errors:?}"
            );
        }
    }

    #[test]
    fn energy_identity_zero_penalty() {
        let op = op(
            12,
            1,
            0.0,
            0.0,
            DualTreatment::LMesh,
            BoundarySpec::Neumann,
            DiffusionModel::unit(),
        );
        let u = l2_project(op.mesh(), 1, 4, f64::cos);
        let id = op.energy_identity(u.coeffs());
        assert_eq!(id.penalty_sum, 0.0);
        assert!(id.defect < 1e-12 * id.scale, "defect {}", id.defect);
    }

    #[test]
    fn energy_identity_with_penalty_matches_trace_sum() {
        let op = op(
            12,
            2,
            0.0,
            1.0,
            DualTreatment::LMesh,
            BoundarySpec::Neumann,
            DiffusionModel::unit(),
        );
        let u = l2_project(op.mesh(), 2, 6, |x| (2.0 * x).sin() + 0.3 * x.cos());
        let id = op.energy_identity(u.coeffs());
        // Independent evaluation of the dissipation sum from traces.
        let uf = DGField::from_coeffs_1d(2, 12, u.coeffs().to_vec());
        let mut sum = 0.0;
        for i in 1..12 {
            let um = uf.trace_right(i - 1);
            let up = uf.trace_left(i);
            let jump = up - um;
            let dxt = op.ifaces[i].dual_len;
            sum += 1.0 / dxt * jump * jump; // a^ = 1 for the unit model
        }
        assert!((id.h_u + id.h_p + sum).abs() < 1e-12 * id.scale);
        assert!((id.penalty_sum - sum).abs() < 1e-12 * id.scale.max(sum));
    }

    #[test]
    fn energy_identity_dirichlet_includes_boundary() {
        let op = op(
            9,
            1,
            0.0,
            1.0,
            DualTreatment::CMesh,
            BoundarySpec::dirichlet_zero(),
            DiffusionModel::unit(),
        );
        // sin x vanishes at the ends but its projection's traces do not,
        // so the boundary interfaces contribute.
        let u = l2_project(op.mesh(), 1, 4, f64::sin);
        let id = op.energy_identity(u.coeffs());
        assert!(id.penalty_sum > 0.0);
        assert!(id.defect < 1e-12 * id.scale, "defect {}", id.defect);
    }

    #[test]
    fn dissipation_nonpositive_for_smooth_data() {
        for &alpha in &[0.0, 1.0] {
            for &t in &[DualTreatment::LMesh, DualTreatment::CMesh] {
                let op = op(10, 1, 0.2, alpha, t, BoundarySpec::Neumann, DiffusionModel::unit());
                let u = l2_project(op.mesh(), 1, 4, f64::cos);
                let rate = op.energy_rate(u.coeffs());
                assert!(rate <= 1e-12, "alpha={alpha} {t:?}: rate {rate}");
            }
        }
    }

    #[test]
    fn residual_consistency_rate() {
        // Feeding the projection of a smooth periodic solution, the residual
        // approaches u_xx at rate >= k.
        let k = 2;
        let ns = [16usize, 32, 64];
        let mut errors = Vec::new();
        for &n in &ns {
            let mesh = Mesh1D::uniform(0.0, 2.0 * PI, n).unwrap();
            let dual = DualMesh1D::build(&mesh, 0.0, DualTreatment::Periodic).unwrap();
            let config = SchemeConfig::new(k, 0.0, 0.0, DualTreatment::Periodic);
            let op = LdgOperator1D::new(
                &mesh,
                &dual,
                DiffusionModel::unit(),
                BoundarySpec::Periodic,
                &config,
            )
            .unwrap();
            let u = l2_project(&mesh, k, 2 * (k + 1), f64::sin);
            let mut dudt = vec![0.0; op.n_dof_u()];
            op.apply(u.coeffs(), &mut dudt);
            let r = DGField::from_coeffs_1d(k, n, dudt);
            // u_t = u_xx = -sin x.
            errors.push(crate::analysis::l2_error(&r, &mesh, k + 3, |x| -x.sin()));
        }
        let orders = observed_orders(&errors, &ns);
        let last = orders[2].unwrap();
        assert!(last >= k as f64 - 0.3, "order {last}, errors {errors:?}");
    }

    #[test]
    fn constructor_rejects_invalid_combinations() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 4).unwrap();
        let other = Mesh1D::uniform(0.0, 1.0, 5).unwrap();
        let dual = DualMesh1D::build(&mesh, 0.0, DualTreatment::LMesh).unwrap();
        let config = SchemeConfig::new(1, 0.0, 0.0, DualTreatment::LMesh);
        assert_eq!(
            LdgOperator1D::new(&other, &dual, DiffusionModel::unit(), BoundarySpec::Neumann, &config)
                .err(),
            Some(SchemeError::IncompatibleMeshes)
        );
        assert!(matches!(
            LdgOperator1D::new(&mesh, &dual, DiffusionModel::unit(), BoundarySpec::Periodic, &config),
            Err(SchemeError::IncompatibleBoundary(_))
        ));
        let mut bad = config.clone();
        bad.alpha = -0.5;
        assert!(matches!(
            LdgOperator1D::new(&mesh, &dual, DiffusionModel::unit(), BoundarySpec::Neumann, &bad),
            Err(SchemeError::NegativeAlpha(_))
        ));
        let mut bad = config.clone();
        bad.alpha_override = Some(vec![0.0; 3]);
        assert!(matches!(
            LdgOperator1D::new(&mesh, &dual, DiffusionModel::unit(), BoundarySpec::Neumann, &bad),
            Err(SchemeError::AlphaOverrideLength { .. })
        ));
    }
}
