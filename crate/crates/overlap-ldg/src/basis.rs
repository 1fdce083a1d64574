//! Orthonormal Legendre basis on the reference cell [-1, 1].
//!
//! The modes are `phi_m(xi) = sqrt(m + 1/2) * P_m(xi)` so that
//! `int_{-1}^{1} phi_i phi_j dxi = delta_ij`. On a physical cell of length
//! `h` the mass matrix is therefore diagonal with every entry equal to
//! `h/2`, and all local solves reduce to a scalar division.

/// Basis functions of degree up to `degree` (so `degree + 1` modes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyBasis {
    pub degree: usize,
}

impl PolyBasis {
    pub fn new(degree: usize) -> Self {
        Self { degree }
    }

    pub fn n_modes(&self) -> usize {
        self.degree + 1
    }

    /// Values of all modes at `xi`; `out` must have `degree + 1` entries.
    pub fn eval_all(&self, xi: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.n_modes());
        let mut p_prev = 1.0;
        out[0] = norm(0);
        if self.degree == 0 {
            return;
        }
        let mut p = xi;
        out[1] = norm(1) * p;
        for m in 1..self.degree {
            let mf = m as f64;
            let p_next = ((2.0 * mf + 1.0) * xi * p - mf * p_prev) / (mf + 1.0);
            p_prev = p;
            p = p_next;
            out[m + 1] = norm(m + 1) * p;
        }
    }

    /// Reference derivatives `d phi_m / d xi` at `xi`.
    pub fn eval_deriv_all(&self, xi: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.n_modes());
        let mut p_prev = 1.0;
        let mut dp_prev = 0.0;
        out[0] = 0.0;
        if self.degree == 0 {
            return;
        }
        let mut p = xi;
        let mut dp = 1.0;
        out[1] = norm(1) * dp;
        for m in 1..self.degree {
            let mf = m as f64;
            let p_next = ((2.0 * mf + 1.0) * xi * p - mf * p_prev) / (mf + 1.0);
            let dp_next = dp_prev + (2.0 * mf + 1.0) * p;
            p_prev = p;
            p = p_next;
            dp_prev = dp;
            dp = dp_next;
            out[m + 1] = norm(m + 1) * dp;
        }
    }

    /// Modal sum `sum_m coeffs[m] phi_m(xi)`.
    pub fn eval(&self, coeffs: &[f64], xi: f64) -> f64 {
        debug_assert_eq!(coeffs.len(), self.n_modes());
        let mut vals = [0.0; 16];
        let vals = &mut vals[..self.n_modes()];
        self.eval_all(xi, vals);
        coeffs.iter().zip(vals.iter()).map(|(c, v)| c * v).sum()
    }

    /// Tabulate values at `points`, row-major `[point][mode]`.
    pub fn tabulate(&self, points: &[f64]) -> Vec<f64> {
        let m = self.n_modes();
        let mut table = vec![0.0; points.len() * m];
        for (i, &xi) in points.iter().enumerate() {
            self.eval_all(xi, &mut table[i * m..(i + 1) * m]);
        }
        table
    }

    /// Tabulate reference derivatives at `points`, row-major `[point][mode]`.
    pub fn tabulate_deriv(&self, points: &[f64]) -> Vec<f64> {
        let m = self.n_modes();
        let mut table = vec![0.0; points.len() * m];
        for (i, &xi) in points.iter().enumerate() {
            self.eval_deriv_all(xi, &mut table[i * m..(i + 1) * m]);
        }
        table
    }
}

#[inline]
fn norm(m: usize) -> f64 {
    (m as f64 + 0.5).sqrt()
}

/// Diagonal mass matrix for the orthonormal basis on a 1D cell of length
/// `len`: every one of the `degree + 1` entries is `len / 2`.
pub fn mass_matrix_1d(degree: usize, len: f64) -> Vec<f64> {
    vec![0.5 * len; degree + 1]
}

/// Diagonal mass matrix for the tensor basis on a rectangle of area `area`:
/// every one of the `(degree + 1)^2` entries is `area / 4`.
pub fn mass_matrix_2d(degree: usize, area: f64) -> Vec<f64> {
    vec![0.25 * area; (degree + 1) * (degree + 1)]
}
