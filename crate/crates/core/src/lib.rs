//! Homotopy-analysis solvers for the integral form of the Von Kármán
//! equations of a circular plate under uniform pressure.
//!
//! Unknowns are power series in `y = r^2 / R^2` ([`PolySeries`]); the kernel
//! operators act on them in closed form ([`kernel`]). Two solvers are built
//! on the shared deformation machinery in [`ham`]: one for a prescribed load
//! ([`given_load`]) and one for a prescribed central deflection
//! ([`given_deflection`]). The classical interpolation iteration lives in
//! [`interp`] as a baseline.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod given_deflection;
pub mod given_load;
pub mod ham;
pub mod interp;
pub mod kernel;
pub mod output;
pub mod polyseries;
pub mod report;
pub mod scalar;
pub mod tables;

pub use error::{PlateError, Result};
pub use given_deflection::{
    empirical_c0_a, initial_guess_a, solve_given_a, solve_given_a_in, GivenDeflectionProblem,
};
pub use given_load::{
    empirical_c0_q, initial_guess_q, solve_given_q, solve_given_q_in, GivenLoadProblem,
};
pub use ham::{residual_err, Forcing, HomotopyState, ResidualReport};
pub use kernel::{apply_g, apply_k, load_forcing, BoundaryKind, BoundarySpec};
pub use polyseries::PolySeries;
pub use report::{Record, RunReport, SolveMode, Status, StopRule};
pub use scalar::{DoubleDouble, Precision, Real};
