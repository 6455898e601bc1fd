//! Run reports shared by both solver modes.

use serde::{Deserialize, Serialize};

use crate::kernel::BoundarySpec;
use crate::scalar::Precision;

/// Default residual tolerance of the stopping rule.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default cap on outer iterations.
pub const DEFAULT_MAX_ITER: usize = 500;
/// Residual above which a run is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e8;
/// Default residual grid size (`K + 1` points on `[0, 1]`).
pub const DEFAULT_GRID_K: usize = 100;
/// Default truncation order of the iterated solvers.
pub const DEFAULT_TRUNCATION: usize = 100;
/// Default order cap of the non-iterative solvers.
pub const DEFAULT_SERIES_ORDER: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIter,
    Diverged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIter => "max_iter",
            Status::Diverged => "diverged",
        }
    }
}

/// How the homotopy series is used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveMode {
    /// Partial sums of one homotopy series up to `order`.
    Series { order: usize },
    /// `m`th-order iteration with deformation terms truncated at degree `n`.
    Iterate { m: usize, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub tol: f64,
    pub max_iter: usize,
    pub divergence: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            divergence: DIVERGENCE_THRESHOLD,
        }
    }
}

impl StopRule {
    pub fn diverged(&self, err: f64) -> bool {
        !err.is_finite() || err > self.divergence
    }

    pub fn classify(&self, err: f64) -> Status {
        if self.diverged(err) {
            Status::Diverged
        } else if err <= self.tol {
            Status::Converged
        } else {
            Status::MaxIter
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    GivenLoad,
    GivenDeflection,
}

/// Echo of the configuration a report was produced with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub problem: ProblemKind,
    /// `Q` for a given load, `a` for a given central deflection.
    pub value: f64,
    pub boundary: BoundarySpec,
    pub c1: f64,
    pub c2: f64,
    pub mode: SolveMode,
    pub stop: StopRule,
    pub grid_k: usize,
    pub precision: Precision,
}

/// One row of the convergence history.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    /// Outer iteration (0 for the initial guess and for series runs).
    pub iteration: usize,
    /// Approximation order (series runs) or iteration order `M`.
    pub order: usize,
    pub err: f64,
    pub q: f64,
    pub w0_over_h: f64,
    /// Elapsed wall time since the start of the run.
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub records: Vec<Record>,
    /// Coefficients of the final `phi` approximation, lowest degree first.
    pub phi: Vec<f64>,
    /// Coefficients of the final `S` approximation.
    pub s: Vec<f64>,
    pub status: Status,
}

impl RunReport {
    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }

    pub fn final_err(&self) -> f64 {
        self.last().map_or(f64::NAN, |r| r.err)
    }

    pub fn final_q(&self) -> f64 {
        self.last().map_or(f64::NAN, |r| r.q)
    }

    pub fn final_w0_over_h(&self) -> f64 {
        self.last().map_or(f64::NAN, |r| r.w0_over_h)
    }

    /// Record of a given iteration (iterated runs) or order (series runs).
    pub fn at_iteration(&self, iteration: usize) -> Option<&Record> {
        self.records.iter().find(|r| r.iteration == iteration)
    }

    pub fn at_order(&self, order: usize) -> Option<&Record> {
        self.records
            .iter()
            .find(|r| r.iteration == 0 && r.order == order)
    }

    /// First iteration whose residual is at or below `level`.
    pub fn iterations_to(&self, level: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.err <= level)
            .map(|r| r.iteration)
    }

    /// Replace measured wall times with zero for byte-stable output.
    pub fn strip_timing(&mut self) {
        for r in &mut self.records {
            r.wall_ms = 0.0;
        }
    }
}
