//! Solver for a prescribed dimensionless load `Q`.

use serde::{Deserialize, Serialize};

use crate::error::{PlateError, Result};
use crate::ham::{run_iterate, run_series, Forcing, HomotopyState};
use crate::kernel::{load_forcing, BoundarySpec};
use crate::polyseries::PolySeries;
use crate::report::{ConfigEcho, ProblemKind, RunReport, SolveMode, StopRule, DEFAULT_GRID_K};
use crate::scalar::{DoubleDouble, Precision, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GivenLoadProblem {
    pub q: f64,
    pub boundary: BoundarySpec,
    pub c1: f64,
    pub c2: f64,
    pub mode: SolveMode,
    pub stop: StopRule,
    pub grid_k: usize,
}

impl GivenLoadProblem {
    /// Clamped plate, `c1 = c2 = c0`, default stopping rule and grid.
    pub fn new(q: f64, c0: f64, mode: SolveMode) -> Self {
        Self {
            q,
            boundary: BoundarySpec::clamped(),
            c1: c0,
            c2: c0,
            mode,
            stop: StopRule::default(),
            grid_k: DEFAULT_GRID_K,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.q.is_finite() {
            return Err(PlateError::Config(format!(
                "load Q = {} is not finite",
                self.q
            )));
        }
        if self.c1 == 0.0 || self.c2 == 0.0 || !self.c1.is_finite() || !self.c2.is_finite() {
            return Err(PlateError::Config(
                "c1 and c2 must be finite and nonzero".into(),
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

/// `phi0 = Q c0 ((lambda + 1) y - y^2) / 2`, `S0 = 0`.
pub fn initial_guess_q<T: Real>(
    q: f64,
    c0: f64,
    b: &BoundarySpec,
) -> (PolySeries<T>, PolySeries<T>) {
    let phi0 = load_forcing::<T>(b).scale(T::from_f64(q) * T::from_f64(c0));
    (phi0, PolySeries::zero())
}

/// Empirical optimum of `c0`: `-13/(13 + Q^2)` for plain series,
/// `-23/(Q + 23)` for the iterated solver.
pub fn empirical_c0_q(q: f64, iterated: bool) -> f64 {
    if iterated {
        -23.0 / (q + 23.0)
    } else {
        -13.0 / (13.0 + q * q)
    }
}

pub fn solve_given_q_with<T: Real>(
    p: &GivenLoadProblem,
    precision: Precision,
) -> Result<RunReport> {
    p.validate()?;
    let b = &p.boundary;
    // the initial guess uses c1, the multiplier of the first operator
    let (phi0, s0) = initial_guess_q::<T>(p.q, p.c1, b);
    let state = HomotopyState::new(
        phi0,
        s0,
        Forcing::GivenLoad(T::from_f64(p.q)),
        T::from_f64(p.c1),
        T::from_f64(p.c2),
    )?;
    let config = ConfigEcho {
        problem: ProblemKind::GivenLoad,
        value: p.q,
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

pub fn solve_given_q(p: &GivenLoadProblem) -> Result<RunReport> {
    solve_given_q_in(p, Precision::Double)
}

pub fn solve_given_q_in(p: &GivenLoadProblem, precision: Precision) -> Result<RunReport> {
    match precision {
        Precision::Double => solve_given_q_with::<f64>(p, precision),
        Precision::Extended => solve_given_q_with::<DoubleDouble>(p, precision),
    }
}
