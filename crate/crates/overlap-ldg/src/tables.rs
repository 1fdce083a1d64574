//! Precomputed per-axis basis tables for the LDG operators.
//!
//! For one (primitive mesh, dual mesh) pair this bakes the common-refinement
//! segments, quadrature weights, basis values/derivatives on both meshes,
//! interface geometry, and the dual-cell end evaluations into flat tables,
//! so operator application is a pure contraction against coefficients.

use crate::basis::PolyBasis;
use crate::mesh::{DualMesh1D, DualTreatment, Mesh1D};
use crate::model::BoundarySpec;
use crate::overlap::Overlap1D;
use crate::quadrature::{gauss_rule, QuadRule};
use crate::scheme1d::SchemeError;

/// End of a dual cell as seen by the auxiliary-solve boundary terms.
pub(crate) struct DualEnd {
    pub prim: usize,
    /// Basis values at the evaluation point; unused for a Dirichlet end.
    pub phi: Vec<f64>,
    /// Dirichlet boundary datum when this end is a non-periodic domain end.
    pub dirichlet: Option<f64>,
}

pub(crate) struct IfaceData {
    pub dual: usize,
    pub dual_len: f64,
    pub alpha: f64,
    /// Dual basis values at the interface point.
    pub phi_dual: Vec<f64>,
}

pub(crate) struct AxisTables {
    pub nq: usize,
    pub modes: usize,
    /// Node stride in `seg_tab`: `[w, phi_prim, dphi_prim, phi_dual, dphi_dual]`.
    pub block: usize,
    pub quad: QuadRule,
    /// `(prim, dual)` cell per segment.
    pub seg_cells: Vec<(u32, u32)>,
    pub seg_tab: Vec<f64>,
    pub by_prim: Vec<Vec<u32>>,
    pub by_dual: Vec<Vec<u32>>,
    pub ifaces: Vec<IfaceData>,
    pub ends: Vec<[DualEnd; 2]>,
    pub inv_mass_prim: Vec<f64>,
    pub inv_mass_dual: Vec<f64>,
    pub mass_prim: Vec<f64>,
    pub mass_dual: Vec<f64>,
    pub trace_minus: Vec<f64>,
    pub trace_plus: Vec<f64>,
}

impl AxisTables {
    pub fn build(
        mesh: &Mesh1D,
        dual: &DualMesh1D,
        bc: BoundarySpec,
        degree: usize,
        quad_points: usize,
        alpha_at: &dyn Fn(usize) -> f64,
    ) -> Result<Self, SchemeError> {
        let overlap = Overlap1D::build(mesh, dual)?;
        let n = mesh.n_cells();
        let modes = degree + 1;
        let basis = PolyBasis::new(degree);
        let quad = gauss_rule(quad_points.max(degree + 1));
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
                alpha: alpha_at(i),
                phi_dual,
            });
        }

        let (a, b) = mesh.domain();
        let length = mesh.length();
        let mut ends = Vec::with_capacity(dual.n_cells());
        for j in 0..dual.n_cells() {
            let (lo, hi) = dual.cell_unrolled(j);
            let make_end = |xe: f64, left_of_domain: bool| -> DualEnd {
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
        let inv_mass_dual = (0..dual.n_cells())
            .map(|j| 2.0 / dual.cell_len(j))
            .collect();
        let mass_dual = (0..dual.n_cells())
            .map(|j| 0.5 * dual.cell_len(j))
            .collect();

        let mut trace_minus = vec![0.0; modes];
        let mut trace_plus = vec![0.0; modes];
        basis.eval_all(-1.0, &mut trace_minus);
        basis.eval_all(1.0, &mut trace_plus);

        Ok(Self {
            nq,
            modes,
            block,
            quad,
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
        })
    }

    #[inline]
    pub fn node_tab(&self, seg: usize, q: usize) -> &[f64] {
        let base = (seg * self.nq + q) * self.block;
        &self.seg_tab[base..base + self.block]
    }
}
