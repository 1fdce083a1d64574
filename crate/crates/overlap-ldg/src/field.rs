//! Piecewise-polynomial fields stored as modal coefficients.
//!
//! Coefficients are cell-major: `coeffs[cell * modes + mode]`. In 1D there
//! are `k + 1` modes per cell; in 2D the tensor basis has `(k + 1)^2` modes
//! indexed `my * (k + 1) + mx`.

use thiserror::Error;

use crate::basis::PolyBasis;
use crate::mesh::{DualMesh1D, Mesh1D};
use crate::quadrature::gauss_rule;

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("point {0} lies on a cell interface; a side flag is required")]
    AmbiguousInterface(f64),
    #[error("point {0} is outside the field's domain")]
    OutOfDomain(f64),
}

/// Which one-sided trace to take at a cell interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Limit from the left (the `-` trace).
    Minus,
    /// Limit from the right (the `+` trace).
    Plus,
}

/// Modal coefficients of a piecewise-polynomial function on some mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct DGField {
    degree: usize,
    n_cells: usize,
    modes: usize,
    coeffs: Vec<f64>,
}

impl DGField {
    pub fn zeros_1d(degree: usize, n_cells: usize) -> Self {
        let modes = degree + 1;
        Self {
            degree,
            n_cells,
            modes,
            coeffs: vec![0.0; n_cells * modes],
        }
    }

    pub fn zeros_2d(degree: usize, n_cells: usize) -> Self {
        let modes = (degree + 1) * (degree + 1);
        Self {
            degree,
            n_cells,
            modes,
            coeffs: vec![0.0; n_cells * modes],
        }
    }

    pub fn from_coeffs_1d(degree: usize, n_cells: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), n_cells * (degree + 1));
        Self {
            degree,
            n_cells,
            modes: degree + 1,
            coeffs,
        }
    }

    pub fn from_coeffs_2d(degree: usize, n_cells: usize, coeffs: Vec<f64>) -> Self {
        let modes = (degree + 1) * (degree + 1);
        assert_eq!(coeffs.len(), n_cells * modes);
        Self {
            degree,
            n_cells,
            modes,
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        &self.coeffs[i * self.modes..(i + 1) * self.modes]
    }

    pub fn cell_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.coeffs[i * self.modes..(i + 1) * self.modes]
    }

    /// Evaluate within cell `i` at reference coordinate `xi` (1D layout).
    pub fn eval_ref(&self, i: usize, xi: f64) -> f64 {
        PolyBasis::new(self.degree).eval(self.cell(i), xi)
    }

    /// Evaluate within cell `i` at reference coordinates `(xi, eta)` (2D layout).
    pub fn eval_ref_2d(&self, i: usize, xi: f64, eta: f64) -> f64 {
        let k1 = self.degree + 1;
        let basis = PolyBasis::new(self.degree);
        let mut vx = [0.0; 16];
        let mut vy = [0.0; 16];
        basis.eval_all(xi, &mut vx[..k1]);
        basis.eval_all(eta, &mut vy[..k1]);
        let c = self.cell(i);
        let mut total = 0.0;
        for my in 0..k1 {
            let mut row = 0.0;
            for mx in 0..k1 {
                row += c[my * k1 + mx] * vx[mx];
            }
            total += row * vy[my];
        }
        total
    }

    /// Evaluate a 1D field on `mesh` at a physical point.
    ///
    /// Exactly at an interior interface coordinate the two one-sided limits
    /// differ in general, so a [`Side`] flag is required there.
    pub fn eval_at(&self, mesh: &Mesh1D, x: f64, side: Option<Side>) -> Result<f64, FieldError> {
        let (a, b) = mesh.domain();
        if x < a || x > b {
            return Err(FieldError::OutOfDomain(x));
        }
        let n = mesh.n_cells();
        let on_interior_interface = (1..n).find(|&i| mesh.interface(i) == x);
        let cell = match (on_interior_interface, side) {
            (Some(i), Some(Side::Minus)) => i - 1,
            (Some(i), Some(Side::Plus)) => i,
            (Some(_), None) => return Err(FieldError::AmbiguousInterface(x)),
            (None, _) => mesh.locate(x),
        };
        Ok(self.eval_ref(cell, mesh.to_ref(cell, x)))
    }

    /// One-sided trace at the left end of cell `i` (reference -1).
    pub fn trace_left(&self, i: usize) -> f64 {
        self.eval_ref(i, -1.0)
    }

    /// One-sided trace at the right end of cell `i` (reference +1).
    pub fn trace_right(&self, i: usize) -> f64 {
        self.eval_ref(i, 1.0)
    }
}

/// L2-project `f` onto degree-`k` polynomials per cell of a primitive mesh.
///
/// Uses `quad_points` Gauss points per cell (at least `k + 1`); the result
/// satisfies the per-cell orthogonality residual to quadrature precision.
pub fn l2_project(mesh: &Mesh1D, k: usize, quad_points: usize, f: impl Fn(f64) -> f64) -> DGField {
    let quad = gauss_rule(quad_points.max(k + 1));
    let basis = PolyBasis::new(k);
    let table = basis.tabulate(&quad.nodes);
    let modes = k + 1;
    let mut field = DGField::zeros_1d(k, mesh.n_cells());
    for i in 0..mesh.n_cells() {
        let c = field.cell_mut(i);
        for (q, &w) in quad.weights.iter().enumerate() {
            let x = mesh.from_ref(i, quad.nodes[q]);
            let fv = w * f(x);
            for m in 0..modes {
                c[m] += fv * table[q * modes + m];
            }
        }
        // Reference mass is the identity: coefficients are the weighted sums.
    }
    field
}

/// L2-project `f` onto a dual mesh (handles the periodic wrap cell).
pub fn l2_project_dual(
    dual: &DualMesh1D,
    k: usize,
    quad_points: usize,
    f: impl Fn(f64) -> f64,
) -> DGField {
    let quad = gauss_rule(quad_points.max(k + 1));
    let basis = PolyBasis::new(k);
    let modes = k + 1;
    let mut field = DGField::zeros_1d(k, dual.n_cells());
    let mut vals = vec![0.0; modes];
    for j in 0..dual.n_cells() {
        let (lo, hi) = dual.cell_unrolled(j);
        let cell_half = 0.5 * (hi - lo);
        for (plo, phi, offset) in dual.physical_pieces(j) {
            let mid = 0.5 * (plo + phi);
            let half = 0.5 * (phi - plo);
            for (q, &w) in quad.weights.iter().enumerate() {
                let x = mid + half * quad.nodes[q];
                let xi = dual.to_ref(j, x + offset);
                basis.eval_all(xi, &mut vals);
                // Scale by the piece jacobian relative to the cell jacobian.
                let fv = w * (half / cell_half) * f(x);
                let c = field.cell_mut(j);
                for m in 0..modes {
                    c[m] += fv * vals[m];
                }
            }
        }
    }
    field
}

/// L2-project `f(x, y)` onto the tensor space on a primitive 2D mesh.
///
/// Cells are indexed row-major, `cell = jy * nx + ix`.
pub fn l2_project_2d(
    mesh_x: &Mesh1D,
    mesh_y: &Mesh1D,
    k: usize,
    quad_points: usize,
    f: impl Fn(f64, f64) -> f64,
) -> DGField {
    let quad = gauss_rule(quad_points.max(k + 1));
    let basis = PolyBasis::new(k);
    let table = basis.tabulate(&quad.nodes);
    let k1 = k + 1;
    let nx = mesh_x.n_cells();
    let ny = mesh_y.n_cells();
    let mut field = DGField::zeros_2d(k, nx * ny);
    for jy in 0..ny {
        for ix in 0..nx {
            let c = field.cell_mut(jy * nx + ix);
            for (qy, &wy) in quad.weights.iter().enumerate() {
                let y = mesh_y.from_ref(jy, quad.nodes[qy]);
                for (qx, &wx) in quad.weights.iter().enumerate() {
                    let x = mesh_x.from_ref(ix, quad.nodes[qx]);
                    let fv = wx * wy * 0.25 * f(x, y);
                    for my in 0..k1 {
                        let fy = fv * table[qy * k1 + my];
                        for mx in 0..k1 {
                            c[my * k1 + mx] += fy * table[qx * k1 + mx];
                        }
                    }
                }
            }
        }
    }
    // The reference tensor mass is identity / 4; the 0.25 factor above folds
    // the inverse in, so nothing else to do.
    field
}
