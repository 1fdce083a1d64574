//! Error norms against exact solutions and observed convergence orders.

use crate::basis::PolyBasis;
use crate::field::DGField;
use crate::mesh::{DualMesh1D, Mesh1D};
use crate::quadrature::gauss_rule;

/// L2 norm of `field - exact` over a primitive 1D mesh.
///
/// `quad_points` should be at least `k + 3` to avoid sampling the error at
/// its own superconvergence points.
pub fn l2_error(
    field: &DGField,
    mesh: &Mesh1D,
    quad_points: usize,
    exact: impl Fn(f64) -> f64,
) -> f64 {
    let quad = gauss_rule(quad_points.max(field.degree() + 3));
    let basis = PolyBasis::new(field.degree());
    let table = basis.tabulate(&quad.nodes);
    let modes = field.modes();
    let mut total = 0.0;
    for i in 0..mesh.n_cells() {
        let c = field.cell(i);
        let half = 0.5 * mesh.cell_len(i);
        for (q, &w) in quad.weights.iter().enumerate() {
            let x = mesh.from_ref(i, quad.nodes[q]);
            let mut uh = 0.0;
            for m in 0..modes {
                uh += c[m] * table[q * modes + m];
            }
            let d = uh - exact(x);
            total += w * half * d * d;
        }
    }
    total.sqrt()
}

/// L2 norm of `field - exact` over a dual 1D mesh.
pub fn l2_error_dual(
    field: &DGField,
    dual: &DualMesh1D,
    quad_points: usize,
    exact: impl Fn(f64) -> f64,
) -> f64 {
    let quad = gauss_rule(quad_points.max(field.degree() + 3));
    let basis = PolyBasis::new(field.degree());
    let mut total = 0.0;
    for j in 0..dual.n_cells() {
        for (plo, phi, offset) in dual.physical_pieces(j) {
            let mid = 0.5 * (plo + phi);
            let half = 0.5 * (phi - plo);
            for (q, &w) in quad.weights.iter().enumerate() {
                let x = mid + half * quad.nodes[q];
                let uh = basis.eval(field.cell(j), dual.to_ref(j, x + offset));
                let d = uh - exact(x);
                total += w * half * d * d;
            }
        }
    }
    total.sqrt()
}

/// L2 norm of `field - exact` over a primitive 2D mesh (row-major cells).
pub fn l2_error_2d(
    field: &DGField,
    mesh_x: &Mesh1D,
    mesh_y: &Mesh1D,
    quad_points: usize,
    exact: impl Fn(f64, f64) -> f64,
) -> f64 {
    let quad = gauss_rule(quad_points.max(field.degree() + 3));
    let basis = PolyBasis::new(field.degree());
    let table = basis.tabulate(&quad.nodes);
    let k1 = field.degree() + 1;
    let nx = mesh_x.n_cells();
    let mut total = 0.0;
    let mut row = vec![0.0; k1];
    for jy in 0..mesh_y.n_cells() {
        let hy = 0.5 * mesh_y.cell_len(jy);
        for ix in 0..nx {
            let hx = 0.5 * mesh_x.cell_len(ix);
            let c = field.cell(jy * nx + ix);
            for (qx, &wx) in quad.weights.iter().enumerate() {
                let x = mesh_x.from_ref(ix, quad.nodes[qx]);
                // Contract the x-direction first.
                for (my, r) in row.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for mx in 0..k1 {
                        s += c[my * k1 + mx] * table[qx * k1 + mx];
                    }
                    *r = s;
                }
                for (qy, &wy) in quad.weights.iter().enumerate() {
                    let y = mesh_y.from_ref(jy, quad.nodes[qy]);
                    let mut uh = 0.0;
                    for my in 0..k1 {
                        uh += row[my] * table[qy * k1 + my];
                    }
                    let d = uh - exact(x, y);
                    total += wx * wy * hx * hy * d * d;
                }
            }
        }
    }
    total.sqrt()
}

/// Max-norm of `field - exact` sampled at the error quadrature nodes and
/// the cell endpoints of a primitive 1D mesh.
pub fn linf_error(
    field: &DGField,
    mesh: &Mesh1D,
    quad_points: usize,
    exact: impl Fn(f64) -> f64,
) -> f64 {
    let quad = gauss_rule(quad_points.max(field.degree() + 3));
    let mut points: Vec<f64> = quad.nodes.clone();
    points.push(-1.0);
    points.push(1.0);
    let mut worst: f64 = 0.0;
    for i in 0..mesh.n_cells() {
        for &xi in &points {
            let x = mesh.from_ref(i, xi);
            worst = worst.max((field.eval_ref(i, xi) - exact(x)).abs());
        }
    }
    worst
}

/// Observed convergence orders from successive refinements:
/// `order_i = log(e_{i-1} / e_i) / log(n_i / n_{i-1})`.
///
/// The first entry is `None` (no coarser level to compare against). The
/// formula handles non-doubling `n` sequences through the log ratio; `n`
/// must be the per-direction cell count.
pub fn observed_orders(errors: &[f64], ns: &[usize]) -> Vec<Option<f64>> {
    assert_eq!(errors.len(), ns.len());
    let mut orders = vec![None; errors.len()];
    for i in 1..errors.len() {
        let ratio = errors[i - 1] / errors[i];
        let refine = ns[i] as f64 / ns[i - 1] as f64;
        orders[i] = Some(ratio.ln() / refine.ln());
    }
    orders
}
