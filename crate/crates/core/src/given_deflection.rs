//! Solver for a prescribed central deflection `W(0) = a`.
//!
//! The load is unknown and carried as its own series `Q_0, Q_1, ...`; each
//! `Q_{k-1}` is fixed by requiring `int_0^1 phi_k(e)/e de = 0`, so every
//! partial sum keeps `int_0^1 phi(e)/e de = -a`.

use serde::{Deserialize, Serialize};

use crate::error::{PlateError, Result};
use crate::ham::{run_iterate, run_series, Forcing, HomotopyState};
use crate::kernel::{load_forcing, BoundarySpec};
use crate::polyseries::PolySeries;
use crate::report::{ConfigEcho, ProblemKind, RunReport, SolveMode, StopRule, DEFAULT_GRID_K};
use crate::scalar::{DoubleDouble, Precision, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GivenDeflectionProblem {
    pub a: f64,
    pub boundary: BoundarySpec,
    pub c1: f64,
    pub c2: f64,
    pub mode: SolveMode,
    pub stop: StopRule,
    pub grid_k: usize,
}

impl GivenDeflectionProblem {
    pub fn new(a: f64, c0: f64, mode: SolveMode) -> Self {
        Self {
            a,
            boundary: BoundarySpec::clamped(),
            c1: c0,
            c2: c0,
            mode,
            stop: StopRule::default(),
            grid_k: DEFAULT_GRID_K,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() {
            return Err(PlateError::Config(format!(
                "deflection a = {} is not finite",
                self.a
            )));
        }
        if self.c1 == 0.0 || self.c2 == 0.0 || !self.c1.is_finite() || !self.c2.is_finite() {
            return Err(PlateError::Config(
                "c1 and c2 must be finite and nonzero".into(),
            ));
        }
        if 2.0 * self.boundary.lambda + 1.0 <= 0.0 {
            return Err(PlateError::Domain(
                "given-deflection mode needs 2 lambda + 1 > 0".into(),
            ));
        }
        if let SolveMode::Iterate { m, n } = self.mode {
            if m == 0 || n == 0 {
                return Err(PlateError::Config("M and N must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// `phi0 = -2a/(2 lambda + 1) ((lambda + 1) y - y^2)`, `S0 = 0`.
pub fn initial_guess_a<T: Real>(a: f64, b: &BoundarySpec) -> (PolySeries<T>, PolySeries<T>) {
    // load_forcing is half the bracket
    let factor = T::from_f64(-4.0 * a) / (T::from_f64(2.0 * b.lambda) + T::ONE);
    (load_forcing::<T>(b).scale(factor), PolySeries::zero())
}

/// Advisory flag attached to an empirical `c0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum C0Validity {
    InRange,
    /// The non-iterative formula was fitted for `a <= 5` only.
    OutOfRange,
}

/// Empirical optimum of `c0`: `-11/(11 + a^2)` for plain series (fitted for
/// `a <= 5`), `-25/(25 + a^2)` for the iterated solver.
pub fn empirical_c0_a(a: f64, iterated: bool) -> (f64, C0Validity) {
    if iterated {
        (-25.0 / (25.0 + a * a), C0Validity::InRange)
    } else {
        let validity = if a <= 5.0 {
            C0Validity::InRange
        } else {
            C0Validity::OutOfRange
        };
        (-11.0 / (11.0 + a * a), validity)
    }
}

pub fn solve_given_a_with<T: Real>(
    p: &GivenDeflectionProblem,
    precision: Precision,
) -> Result<RunReport> {
    p.validate()?;
    let b = &p.boundary;
    let (phi0, s0) = initial_guess_a::<T>(p.a, b);
    let state = HomotopyState::new(
        phi0,
        s0,
        Forcing::GivenDeflection(T::from_f64(p.a)),
        T::from_f64(p.c1),
        T::from_f64(p.c2),
    )?;
    let config = ConfigEcho {
        problem: ProblemKind::GivenDeflection,
        value: p.a,
        boundary: *b,
        c1: p.c1,
        c2: p.c2,
        mode: p.mode,
        stop: p.stop,
        grid_k: p.grid_k,
        precision,
    };
    match p.mode {
        SolveMode::Series { order } => run_series(state, order, b, &p.stop, p.grid_k, config),
        SolveMode::Iterate { m, n } => run_iterate(state, m, n, b, &p.stop, p.grid_k, config),
    }
}

pub fn solve_given_a(p: &GivenDeflectionProblem) -> Result<RunReport> {
    solve_given_a_in(p, Precision::Double)
}

pub fn solve_given_a_in(p: &GivenDeflectionProblem, precision: Precision) -> Result<RunReport> {
    match precision {
        Precision::Double => solve_given_a_with::<f64>(p, precision),
        Precision::Extended => solve_given_a_with::<DoubleDouble>(p, precision),
    }
}
