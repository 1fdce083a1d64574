//! Local discontinuous Galerkin (LDG) method for diffusion equations on
//! overlapping meshes.
//!
//! The primary variable `u` lives on a primitive mesh while the auxiliary
//! variable `p` (and `q` in 2D) lives on a dual mesh whose interfaces fall
//! strictly inside the primitive cells, so `p` is single-valued at the
//! primitive interfaces. Periodic, Neumann, and Dirichlet boundary
//! conditions are supported; the non-periodic cases come in two flavours of
//! boundary treatment for the dual mesh (L-mesh keeps the small boundary
//! cells, C-mesh merges them into their neighbours).
//!
//! The crate provides:
//! - mesh construction ([`mesh`]),
//! - orthonormal Legendre bases, Gauss quadrature, and L2 projection
//!   ([`basis`], [`quadrature`], [`field`]),
//! - the 1D and 2D spatial discretizations ([`scheme1d`], [`scheme2d`]),
//! - SSP-RK3 time integration with energy/blow-up monitoring ([`timestep`]),
//! - error norms and observed convergence orders ([`analysis`]),
//! - built-in test problems and a study/CFL-scan harness used by the
//!   `overlap-ldg` binary ([`problems`], [`study`], [`config`]).

pub mod analysis;
pub mod basis;
pub mod config;
pub mod field;
pub mod mesh;
pub mod model;
mod overlap;
pub mod problems;
pub mod quadrature;
pub mod scheme1d;
pub mod scheme2d;
pub mod study;
pub mod timestep;

pub use analysis::{l2_error, l2_error_2d, l2_error_dual, observed_orders};
pub use field::DGField;
pub use mesh::{DualMesh1D, DualTreatment, Mesh1D, Mesh2D, MeshError};
pub use model::{BoundarySpec, DiffusionModel, DiffusionModel2D, SchemeConfig};
pub use quadrature::{gauss_rule, QuadRule};
pub use scheme1d::{flux_a_hat, flux_p_hat, LdgOperator1D, SchemeError};
pub use scheme2d::LdgOperator2D;
pub use timestep::{integrate, ssp_rk3_step, RunTrace, StepRule, TimeConfig};
