//! Primitive 1D/2D meshes and their shifted dual meshes.
//!
//! The dual mesh is built from one point per primitive cell,
//! `x~_i = x_i + (dx_i / 2) * xi0` with `xi0 in [-1, 1]`, so that for
//! `xi0 in (-1, 1)` every interior primitive interface falls strictly
//! inside a dual cell. Three boundary treatments exist:
//!
//! - `Periodic`: the two partial cells at the domain ends are identified,
//!   giving N dual cells (the wrap cell is handled in unrolled coordinates
//!   left of the domain start);
//! - `LMesh`: the two small boundary cells `[a, x~_1]` and `[x~_N, b]` are
//!   kept, giving N + 1 dual cells;
//! - `CMesh`: the boundary cells are merged into their neighbours,
//!   `[a, x~_2]` and `[x~_{N-1}, b]`, giving N - 1 dual cells.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("mesh needs at least 2 cells, got {0}")]
    TooFewCells(usize),
    #[error("domain interval [{0}, {1}] is empty or inverted")]
    EmptyInterval(f64, f64),
    #[error("interface coordinates must be finite and strictly increasing")]
    NotIncreasing,
    #[error("dual-point offset xi0 must lie in [-1, 1], got {0}")]
    Xi0OutOfRange(f64),
    #[error(
        "xi0 = {0} puts dual points on primitive interfaces, which degenerates \
         the {1:?} boundary treatment"
    )]
    DegenerateDual(f64, DualTreatment),
}

/// How the dual mesh treats the domain boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualTreatment {
    /// Wrap the two partial end cells into one (periodic problems only).
    Periodic,
    /// Leave the two small boundary cells in place (N + 1 dual cells).
    LMesh,
    /// Combine each boundary cell with its neighbour (N - 1 dual cells).
    CMesh,
}

impl std::fmt::Display for DualTreatment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DualTreatment::Periodic => write!(f, "periodic"),
            DualTreatment::LMesh => write!(f, "L"),
            DualTreatment::CMesh => write!(f, "C"),
        }
    }
}

/// Partition of an interval into cells `I_i = [x_{i-1/2}, x_{i+1/2}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    interfaces: Vec<f64>,
}

impl Mesh1D {
    /// Uniform partition of `[a, b]` into `n >= 2` cells.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self, MeshError> {
        if n < 2 {
            return Err(MeshError::TooFewCells(n));
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(MeshError::EmptyInterval(a, b));
        }
        let h = (b - a) / n as f64;
        let mut interfaces: Vec<f64> = (0..=n).map(|i| a + i as f64 * h).collect();
        // Land the last interface exactly on the right endpoint.
        interfaces[n] = b;
        Ok(Self { interfaces })
    }

    /// Partition from an explicit, strictly increasing interface list.
    pub fn from_interfaces(interfaces: Vec<f64>) -> Result<Self, MeshError> {
        if interfaces.len() < 3 {
            return Err(MeshError::TooFewCells(interfaces.len().saturating_sub(1)));
        }
        if interfaces.iter().any(|x| !x.is_finite())
            || interfaces.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(MeshError::NotIncreasing);
        }
        Ok(Self { interfaces })
    }

    pub fn n_cells(&self) -> usize {
        self.interfaces.len() - 1
    }

    /// Interface coordinate `x_{i+1/2}` for `i in 0..=n_cells`.
    pub fn interface(&self, i: usize) -> f64 {
        self.interfaces[i]
    }

    pub fn interfaces(&self) -> &[f64] {
        &self.interfaces
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.interfaces[i], self.interfaces[i + 1])
    }

    pub fn cell_len(&self, i: usize) -> f64 {
        self.interfaces[i + 1] - self.interfaces[i]
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        0.5 * (self.interfaces[i] + self.interfaces[i + 1])
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.interfaces[0], *self.interfaces.last().unwrap())
    }

    pub fn length(&self) -> f64 {
        let (a, b) = self.domain();
        b - a
    }

    /// Largest cell length (the mesh parameter).
    pub fn max_cell_len(&self) -> f64 {
        (0..self.n_cells())
            .map(|i| self.cell_len(i))
            .fold(0.0, f64::max)
    }

    pub fn min_cell_len(&self) -> f64 {
        (0..self.n_cells())
            .map(|i| self.cell_len(i))
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the cell containing `x` (clamped to the domain).
    pub fn locate(&self, x: f64) -> usize {
        let n = self.n_cells();
        let idx = self.interfaces.partition_point(|&v| v <= x);
        idx.saturating_sub(1).min(n - 1)
    }

    /// Reference coordinate of `x` within cell `i`.
    pub fn to_ref(&self, i: usize, x: f64) -> f64 {
        let (lo, hi) = self.cell(i);
        2.0 * (x - lo) / (hi - lo) - 1.0
    }

    /// Physical coordinate of reference `xi` within cell `i`.
    pub fn from_ref(&self, i: usize, xi: f64) -> f64 {
        let (lo, hi) = self.cell(i);
        0.5 * (lo + hi) + 0.5 * (hi - lo) * xi
    }
}

/// Dual mesh built from one shifted point per primitive cell.
///
/// Cell bounds are stored in "unrolled" coordinates: for the periodic
/// treatment cell 0 is `[x~_N - L, x~_1]`, which physically wraps around
/// the domain seam. [`DualMesh1D::physical_pieces`] exposes the physical
/// sub-intervals of a cell together with the offset that maps them back to
/// unrolled (reference) coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMesh1D {
    primitive: Mesh1D,
    points: Vec<f64>,
    interfaces: Vec<f64>,
    treatment: DualTreatment,
    xi0: f64,
}

impl DualMesh1D {
    /// Build the dual mesh with all dual points shifted by the same `xi0`.
    pub fn build(mesh: &Mesh1D, xi0: f64, treatment: DualTreatment) -> Result<Self, MeshError> {
        Self::build_varying(mesh, |_| xi0, treatment).map(|mut d| {
            d.xi0 = xi0;
            d
        })
    }

    /// Build the dual mesh with a per-cell offset `xi0(i)`.
    pub fn build_varying(
        mesh: &Mesh1D,
        xi0: impl Fn(usize) -> f64,
        treatment: DualTreatment,
    ) -> Result<Self, MeshError> {
        let n = mesh.n_cells();
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            let xi = xi0(i);
            if !(-1.0..=1.0).contains(&xi) {
                return Err(MeshError::Xi0OutOfRange(xi));
            }
            if xi.abs() == 1.0 && treatment != DualTreatment::Periodic {
                return Err(MeshError::DegenerateDual(xi, treatment));
            }
            points.push(mesh.cell_center(i) + 0.5 * mesh.cell_len(i) * xi);
        }
        let (a, b) = mesh.domain();
        let interfaces = match treatment {
            DualTreatment::Periodic => {
                let mut v = Vec::with_capacity(n + 1);
                v.push(points[n - 1] - mesh.length());
                v.extend_from_slice(&points);
                v
            }
            DualTreatment::LMesh => {
                let mut v = Vec::with_capacity(n + 2);
                v.push(a);
                v.extend_from_slice(&points);
                v.push(b);
                v
            }
            DualTreatment::CMesh => {
                let mut v = Vec::with_capacity(n);
                v.push(a);
                v.extend_from_slice(&points[1..n - 1]);
                v.push(b);
                v
            }
        };
        if interfaces.windows(2).any(|w| w[1] <= w[0]) {
            return Err(MeshError::DegenerateDual(xi0(0), treatment));
        }
        Ok(Self {
            primitive: mesh.clone(),
            points,
            interfaces,
            treatment,
            xi0: f64::NAN,
        })
    }

    pub fn primitive(&self) -> &Mesh1D {
        &self.primitive
    }

    pub fn treatment(&self) -> DualTreatment {
        self.treatment
    }

    /// Constant construction offset, NaN if built with a per-cell offset.
    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    /// Dual points `x~_i`, one per primitive cell.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n_cells(&self) -> usize {
        self.interfaces.len() - 1
    }

    /// Cell bounds in unrolled coordinates.
    pub fn cell_unrolled(&self, j: usize) -> (f64, f64) {
        (self.interfaces[j], self.interfaces[j + 1])
    }

    pub fn cell_len(&self, j: usize) -> f64 {
        self.interfaces[j + 1] - self.interfaces[j]
    }

    pub fn max_cell_len(&self) -> f64 {
        (0..self.n_cells())
            .map(|j| self.cell_len(j))
            .fold(0.0, f64::max)
    }

    /// Reference coordinate within cell `j` of an unrolled coordinate.
    pub fn to_ref(&self, j: usize, x_unrolled: f64) -> f64 {
        let (lo, hi) = self.cell_unrolled(j);
        2.0 * (x_unrolled - lo) / (hi - lo) - 1.0
    }

    /// Physical sub-intervals `(lo, hi, offset)` of dual cell `j`, where
    /// `x + offset` maps a physical point back to unrolled coordinates.
    /// Only the periodic wrap cell has two pieces.
    pub fn physical_pieces(&self, j: usize) -> Vec<(f64, f64, f64)> {
        let (lo, hi) = self.cell_unrolled(j);
        let (a, _) = self.primitive.domain();
        if self.treatment == DualTreatment::Periodic && j == 0 {
            let len = self.primitive.length();
            vec![(lo + len, a + len, -len), (a, hi, 0.0)]
        } else {
            vec![(lo, hi, 0.0)]
        }
    }

    /// Dual cell containing unrolled coordinate `x` (clamped).
    pub fn locate_unrolled(&self, x: f64) -> usize {
        let m = self.n_cells();
        let idx = self.interfaces.partition_point(|&v| v <= x);
        idx.saturating_sub(1).min(m - 1)
    }

    /// True when this dual mesh was built from `mesh`.
    pub fn is_dual_of(&self, mesh: &Mesh1D) -> bool {
        self.primitive == *mesh
    }
}

/// Tensor-product 2D mesh: a primitive rectangle decomposition together
/// with the dual meshes in each direction. P-cells are `dual_x x prim_y`,
/// Q-cells are `prim_x x dual_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D {
    pub x: Mesh1D,
    pub y: Mesh1D,
    pub dual_x: DualMesh1D,
    pub dual_y: DualMesh1D,
}

impl Mesh2D {
    pub fn build(
        domain_x: (f64, f64),
        domain_y: (f64, f64),
        nx: usize,
        ny: usize,
        xi0: f64,
        eta0: f64,
        treatment_x: DualTreatment,
        treatment_y: DualTreatment,
    ) -> Result<Self, MeshError> {
        let x = Mesh1D::uniform(domain_x.0, domain_x.1, nx)?;
        let y = Mesh1D::uniform(domain_y.0, domain_y.1, ny)?;
        let dual_x = DualMesh1D::build(&x, xi0, treatment_x)?;
        let dual_y = DualMesh1D::build(&y, eta0, treatment_y)?;
        Ok(Self { x, y, dual_x, dual_y })
    }

    pub fn n_cells(&self) -> usize {
        self.x.n_cells() * self.y.n_cells()
    }

    /// P-mesh cell counts `(along x, along y)`.
    pub fn p_cells(&self) -> (usize, usize) {
        (self.dual_x.n_cells(), self.y.n_cells())
    }

    /// Q-mesh cell counts `(along x, along y)`.
    pub fn q_cells(&self) -> (usize, usize) {
        (self.x.n_cells(), self.dual_y.n_cells())
    }

    /// Largest cell extent over both directions.
    pub fn h(&self) -> f64 {
        self.x.max_cell_len().max(self.y.max_cell_len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn uniform_interfaces() {
        let mesh = Mesh1D::uniform(0.0, 2.0 * PI, 4).unwrap();
        let want = [0.0, PI / 2.0, PI, 1.5 * PI, 2.0 * PI];
        for (got, want) in mesh.interfaces().iter().zip(want) {
            assert!((got - want).abs() < 1e-15);
        }
        let mesh = Mesh1D::uniform(0.0, 1.0, 10).unwrap();
        for i in 0..10 {
            assert!((mesh.cell_len(i) - 0.1).abs() < 1e-15);
        }
    }

    #[test]
    fn explicit_interfaces_max_len() {
        let mesh = Mesh1D::from_interfaces(vec![0.0, 0.3, 1.0]).unwrap();
        assert_eq!(mesh.n_cells(), 2);
        assert!((mesh.max_cell_len() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(Mesh1D::uniform(0.0, 1.0, 1).unwrap_err(), MeshError::TooFewCells(1));
        assert_eq!(
            Mesh1D::uniform(1.0, 1.0, 4).unwrap_err(),
            MeshError::EmptyInterval(1.0, 1.0)
        );
        assert_eq!(
            Mesh1D::from_interfaces(vec![0.0, 0.5, 0.5, 1.0]).unwrap_err(),
            MeshError::NotIncreasing
        );
    }

    #[test]
    fn midpoint_lmesh_on_four_cells() {
        let mesh = Mesh1D::uniform(0.0, 2.0 * PI, 4).unwrap();
        let dual = DualMesh1D::build(&mesh, 0.0, DualTreatment::LMesh).unwrap();
        let want = [PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0, 7.0 * PI / 4.0];
        for (got, want) in dual.points().iter().zip(want) {
            assert!((got - want).abs() < 1e-14);
        }
        assert_eq!(dual.n_cells(), 5);
        assert!((dual.cell_len(0) - PI / 4.0).abs() < 1e-14);
        assert!((dual.cell_len(4) - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn midpoint_cmesh_on_four_cells() {
        let mesh = Mesh1D::uniform(0.0, 2.0 * PI, 4).unwrap();
        let dual = DualMesh1D::build(&mesh, 0.0, DualTreatment::CMesh).unwrap();
        assert_eq!(dual.n_cells(), 3);
        let bounds: Vec<_> = (0..3).map(|j| dual.cell_unrolled(j)).collect();
        assert!((bounds[0].0 - 0.0).abs() < 1e-14);
        assert!((bounds[0].1 - 3.0 * PI / 4.0).abs() < 1e-14);
        assert!((bounds[1].1 - 5.0 * PI / 4.0).abs() < 1e-14);
        assert!((bounds[2].1 - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn dual_points_against_direct_formula() {
        // Independent arithmetic: x~_i = x_i + (sqrt(3)/6) dx_i for xi0 = sqrt(3)/3.
        let xi0 = 3.0_f64.sqrt() / 3.0;
        let mesh = Mesh1D::from_interfaces(vec![0.0, 0.2, 0.5, 0.9, 1.4]).unwrap();
        let dual = DualMesh1D::build(&mesh, xi0, DualTreatment::LMesh).unwrap();
        for i in 0..4 {
            let (lo, hi) = mesh.cell(i);
            let direct = 0.5 * (lo + hi) + 3.0_f64.sqrt() / 6.0 * (hi - lo);
            assert!((dual.points()[i] - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn dual_degenerate_and_range_errors() {
        let mesh = Mesh1D::uniform(0.0, 1.0, 4).unwrap();
        assert!(matches!(
            DualMesh1D::build(&mesh, 1.5, DualTreatment::LMesh),
            Err(MeshError::Xi0OutOfRange(_))
        ));
        assert!(matches!(
            DualMesh1D::build(&mesh, 1.0, DualTreatment::LMesh),
            Err(MeshError::DegenerateDual(..))
        ));
        assert!(matches!(
            DualMesh1D::build(&mesh, -1.0, DualTreatment::CMesh),
            Err(MeshError::DegenerateDual(..))
        ));
        // Periodic tolerates xi0 = 1: the dual is a shifted copy of the mesh.
        assert!(DualMesh1D::build(&mesh, 1.0, DualTreatment::Periodic).is_ok());
    }

    #[test]
    fn periodic_wrap_cell() {
        let mesh = Mesh1D::uniform(0.0, 2.0 * PI, 4).unwrap();
        let dual = DualMesh1D::build(&mesh, 0.0, DualTreatment::Periodic).unwrap();
        assert_eq!(dual.n_cells(), 4);
        let (lo, hi) = dual.cell_unrolled(0);
        assert!((lo - (7.0 * PI / 4.0 - 2.0 * PI)).abs() < 1e-14);
        assert!((hi - PI / 4.0).abs() < 1e-14);
        let pieces = dual.physical_pieces(0);
        assert_eq!(pieces.len(), 2);
        assert!((pieces[0].0 - 7.0 * PI / 4.0).abs() < 1e-14);
        assert!((pieces[0].2 + 2.0 * PI).abs() < 1e-14);
        assert!((pieces[1].0 - 0.0).abs() < 1e-14);
        assert!((pieces[1].1 - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn mesh2d_counts() {
        let m = Mesh2D::build(
            (0.0, 1.0),
            (0.0, 1.0),
            4,
            4,
            0.0,
            0.0,
            DualTreatment::LMesh,
            DualTreatment::LMesh,
        )
        .unwrap();
        assert_eq!(m.p_cells(), (5, 4));
        assert_eq!(m.q_cells(), (4, 5));

        let m = Mesh2D::build(
            (0.0, 2.0 * PI),
            (0.0, 2.0 * PI),
            8,
            8,
            0.0,
            0.0,
            DualTreatment::LMesh,
            DualTreatment::LMesh,
        )
        .unwrap();
        assert_eq!(m.n_cells(), 64);
    }

    #[test]
    fn mesh2d_quarter_shift() {
        let m = Mesh2D::build(
            (0.0, 1.0),
            (0.0, 1.0),
            4,
            4,
            0.5,
            0.0,
            DualTreatment::LMesh,
            DualTreatment::LMesh,
        )
        .unwrap();
        for i in 0..4 {
            let direct = m.x.cell_center(i) + m.x.cell_len(i) / 4.0;
            assert!((m.dual_x.points()[i] - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn dual_cells_tile_the_domain() {
        for &treatment in &[DualTreatment::Periodic, DualTreatment::LMesh, DualTreatment::CMesh] {
            let mesh = Mesh1D::from_interfaces(vec![0.0, 0.13, 0.4, 0.55, 0.92, 1.0]).unwrap();
            let dual = DualMesh1D::build(&mesh, 0.3, treatment).unwrap();
            let total: f64 = (0..dual.n_cells()).map(|j| dual.cell_len(j)).sum();
            assert!((total - mesh.length()).abs() < 1e-13);
            // Adjacent cells share interfaces exactly by construction.
            for j in 0..dual.n_cells() - 1 {
                assert_eq!(dual.cell_unrolled(j).1, dual.cell_unrolled(j + 1).0);
            }
        }
    }

    #[test]
    fn interior_interfaces_strictly_inside_dual_cells() {
        let mesh = Mesh1D::from_interfaces(vec![0.0, 0.2, 0.35, 0.7, 1.0]).unwrap();
        for &xi0 in &[-0.9, -0.3, 0.0, 0.4, 0.99] {
            for &treatment in &[DualTreatment::LMesh, DualTreatment::CMesh] {
                let dual = DualMesh1D::build(&mesh, xi0, treatment).unwrap();
                for i in 1..mesh.n_cells() {
                    let x = mesh.interface(i);
                    let j = dual.locate_unrolled(x);
                    let (lo, hi) = dual.cell_unrolled(j);
                    assert!(lo < x && x < hi, "xi0={xi0} {treatment:?}: interface {x}");
                }
            }
        }
    }
}
