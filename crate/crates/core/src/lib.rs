//! Numerical laboratory for the non-isothermal Ginzburg-Landau model of
//! superfluidity on a rectangle.
//!
//! The state `z = (psi, A, u)` lives on collocated nodes of a [`Grid2D`].
//! Difference operators in [`ops`] satisfy summation by parts exactly, which
//! makes the discrete Lyapunov functional in [`functionals`] decay along the
//! flow in [`dynamics`] up to time-discretization error.

pub mod boundary;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod init;
pub mod io;
pub mod ops;
pub mod params;
pub mod run;
pub mod solver;
pub mod splitting;
pub mod state;
pub mod stationary;
pub mod terms;

pub use boundary::BoundaryData;
pub use dynamics::{IntegratorConfig, Scheme, TrajectoryRecord};
pub use error::{GlsfError, Result};
pub use field::{ComplexField, ScalarField, VectorField};
pub use grid::Grid2D;
pub use params::{derive_params, PhysicalParams};
pub use state::{State, StateDot};
