//! Common refinement of a primitive mesh and its dual.
//!
//! Every volume integral in the scheme runs over segments on which both the
//! primitive-mesh polynomial and the dual-mesh polynomial are smooth, so the
//! domain is cut at the union of primitive and dual interfaces. Each segment
//! knows the primitive cell and dual cell it belongs to; for the periodic
//! wrap cell it also carries the offset that maps physical coordinates into
//! the dual cell's unrolled frame.

use crate::mesh::{DualMesh1D, DualTreatment, Mesh1D};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    /// Physical bounds.
    pub lo: f64,
    pub hi: f64,
    pub prim: usize,
    pub dual: usize,
    /// Add to a physical coordinate before mapping into the dual cell.
    pub dual_offset: f64,
}

/// Where a primitive interface sits inside the dual mesh.
#[derive(Debug, Clone, Copy)]
pub(crate) struct InterfaceGeom {
    pub x: f64,
    pub dual: usize,
    pub dual_offset: f64,
    /// Length of the dual cell containing the interface (the penalty scale).
    pub dual_len: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Overlap1D {
    pub segments: Vec<Segment>,
    /// Segment indices per primitive cell.
    pub by_prim: Vec<Vec<u32>>,
    /// Segment indices per dual cell.
    pub by_dual: Vec<Vec<u32>>,
    /// Geometry for every primitive interface `0..=n`. For the periodic
    /// treatment entries 0 and n describe the same seam from both sides.
    pub interfaces: Vec<InterfaceGeom>,
}

/// Scheme-level precondition: every interior primitive interface must lie
/// strictly inside a dual cell so the auxiliary variable is single-valued
/// there.
#[derive(Debug, thiserror::Error, PartialEq)]
#[error("primitive interface at x = {0} is not strictly interior to a dual cell")]
pub struct InterfaceNotInterior(pub f64);

impl Overlap1D {
    pub fn build(mesh: &Mesh1D, dual: &DualMesh1D) -> Result<Self, InterfaceNotInterior> {
        let n = mesh.n_cells();
        let mut segments = Vec::with_capacity(2 * n + 2);
        for j in 0..dual.n_cells() {
            for (plo, phi, offset) in dual.physical_pieces(j) {
                // Split the physical piece at primitive interfaces.
                let first = mesh.interfaces().partition_point(|&v| v <= plo);
                let mut lo = plo;
                for idx in first..=n {
                    let x = mesh.interface(idx);
                    if x >= phi {
                        break;
                    }
                    segments.push(Segment {
                        lo,
                        hi: x,
                        prim: idx - 1,
                        dual: j,
                        dual_offset: offset,
                    });
                    lo = x;
                }
                if phi > lo {
                    segments.push(Segment {
                        lo,
                        hi: phi,
                        prim: mesh.locate(0.5 * (lo + phi)),
                        dual: j,
                        dual_offset: offset,
                    });
                }
            }
        }

        let mut by_prim = vec![Vec::new(); n];
        let mut by_dual = vec![Vec::new(); dual.n_cells()];
        for (s, seg) in segments.iter().enumerate() {
            by_prim[seg.prim].push(s as u32);
            by_dual[seg.dual].push(s as u32);
        }

        let length = mesh.length();
        let mut interfaces = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let x = mesh.interface(i);
            let geom = match dual.treatment() {
                DualTreatment::Periodic if i == 0 || i == n => {
                    let offset = if i == 0 { 0.0 } else { -length };
                    let j = 0;
                    let (lo, hi) = dual.cell_unrolled(j);
                    let xu = x + offset;
                    if !(lo < xu && xu < hi) {
                        return Err(InterfaceNotInterior(x));
                    }
                    InterfaceGeom {
                        x,
                        dual: j,
                        dual_offset: offset,
                        dual_len: hi - lo,
                    }
                }
                _ => {
                    let j = dual.locate_unrolled(x);
                    let (lo, hi) = dual.cell_unrolled(j);
                    // Interior interfaces must be strictly interior; the two
                    // domain endpoints coincide with dual-cell ends and are
                    // evaluated one-sidedly from the touching cell.
                    if i > 0 && i < n && !(lo < x && x < hi) {
                        return Err(InterfaceNotInterior(x));
                    }
                    InterfaceGeom {
                        x,
                        dual: j,
                        dual_offset: 0.0,
                        dual_len: hi - lo,
                    }
                }
            };
            interfaces.push(geom);
        }

        Ok(Self {
            segments,
            by_prim,
            by_dual,
            interfaces,
        })
    }
}
