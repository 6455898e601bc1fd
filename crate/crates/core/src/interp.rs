//! Interpolation (relaxed fixed-point) iteration for the integral equations,
//! kept as an independent baseline for the homotopy solvers.
//!
//! ```text
//! psi_n       = 1/2 G[vartheta_n^2 / e^2]
//! vartheta_n+1 = (1 - theta) vartheta_n - theta Q L - theta K[vartheta_n psi_n / e^2]
//! ```
//!
//! This loop deliberately does not go through [`crate::ham`].

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{PlateError, Result};
use crate::ham::{central_w_over_h, residual_err, Forcing, HomotopyState};
use crate::kernel::{apply_g, apply_k, load_forcing, BoundarySpec};
use crate::polyseries::PolySeries;
use crate::report::{Record, Status, StopRule, DEFAULT_GRID_K};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct InterpState<T: Real = f64> {
    /// Current slope iterate.
    pub vartheta: PolySeries<T>,
    /// Membrane iterate of the last step; `None` before the first step.
    pub psi: Option<PolySeries<T>>,
    pub theta: T,
    pub q: T,
    pub boundary: BoundarySpec,
    pub iteration: usize,
    pub truncation: Option<usize>,
}

/// `vartheta_1 = -theta Q ((lambda + 1) y - y^2) / 2`.
pub fn interp_init<T: Real>(
    q: f64,
    theta: f64,
    b: &BoundarySpec,
    truncation: Option<usize>,
) -> Result<InterpState<T>> {
    if theta == 0.0 || !theta.is_finite() {
        return Err(PlateError::Config(
            "interpolation parameter must be nonzero".into(),
        ));
    }
    let (q, theta) = (T::from_f64(q), T::from_f64(theta));
    Ok(InterpState {
        vartheta: load_forcing::<T>(b).scale(-theta * q),
        psi: None,
        theta,
        q,
        boundary: *b,
        iteration: 1,
        truncation,
    })
}

fn cut<T: Real>(f: PolySeries<T>, truncation: Option<usize>) -> PolySeries<T> {
    match truncation {
        Some(n) => f.truncate(n),
        None => f,
    }
}

/// One interpolation step: compute `psi_n` from `vartheta_n`, then `vartheta_{n+1}`.
pub fn interp_step<T: Real>(s: &InterpState<T>) -> Result<InterpState<T>> {
    let b = &s.boundary;
    let v = &s.vartheta;
    let half = T::from_f64(0.5);

    let psi = cut(
        apply_g(&v.multiply(v).divide_by_y_squared()?, b).scale(half),
        s.truncation,
    );

    let mut next = v.scale(T::ONE - s.theta);
    next.add_scaled(&load_forcing(b), -s.theta * s.q);
    next.add_scaled(
        &apply_k(&v.multiply(&psi).divide_by_y_squared()?, b),
        -s.theta,
    );
    let next = cut(next, s.truncation);

    if !next.max_abs_coeff().is_finite() {
        return Err(PlateError::Domain(format!(
            "interpolation iterate overflowed at step {}",
            s.iteration
        )));
    }
    Ok(InterpState {
        vartheta: next,
        psi: Some(psi),
        iteration: s.iteration + 1,
        ..s.clone()
    })
}

/// Result of a baseline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpRun {
    pub records: Vec<Record>,
    pub status: Status,
}

impl InterpRun {
    pub fn iterations_to(&self, level: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.err <= level)
            .map(|r| r.iteration)
    }
}

/// Run the baseline from its initial guess, scoring each step with the
/// residual of the current `(vartheta, psi)` pair.
pub fn run_interp<T: Real>(
    q: f64,
    theta: f64,
    b: &BoundarySpec,
    truncation: Option<usize>,
    stop: &StopRule,
    grid_k: usize,
) -> Result<InterpRun> {
    let start = Instant::now();
    let mut state = interp_init::<T>(q, theta, b, truncation)?;
    let mut records = Vec::new();
    let mut status = Status::MaxIter;
    for iteration in 1..=stop.max_iter {
        state = match interp_step(&state) {
            Ok(s) => s,
            Err(PlateError::Domain(_)) => {
                status = Status::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        let psi = state.psi.as_ref().expect("set by interp_step");
        let res = residual_err(&state.vartheta, psi, state.q, b, grid_k, false)?;
        records.push(Record {
            iteration,
            order: 1,
            err: res.err,
            q,
            w0_over_h: central_w_over_h(&state.vartheta, b.nu)?,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        status = stop.classify(res.err);
        if status != Status::MaxIter {
            break;
        }
    }
    Ok(InterpRun { records, status })
}

fn sup_on_grid<T: Real>(f: &PolySeries<T>, points: usize) -> f64 {
    (0..points)
        .map(|i| {
            f.horner(T::from_usize(i) / T::from_usize(points - 1))
                .to_f64()
                .abs()
        })
        .fold(0.0, f64::max)
}

fn relative_gap<T: Real>(a: &PolySeries<T>, b: &PolySeries<T>) -> f64 {
    let diff = a - b;
    let scale = sup_on_grid(b, 101);
    let gap = sup_on_grid(&diff, 101);
    if gap == 0.0 {
        0.0
    } else {
        gap / scale.max(f64::MIN_POSITIVE)
    }
}

/// Largest relative sup-norm gap (101-point grid) between the interpolation
/// iterates and first-order homotopy iterates with `c1 = -theta`, `c2 = -1`
/// and the membrane variable updated first.
pub fn equivalence_check(
    q: f64,
    theta: f64,
    n_iters: usize,
    truncation: usize,
    b: &BoundarySpec,
) -> Result<f64> {
    if n_iters == 0 {
        return Err(PlateError::Config(
            "equivalence check needs at least one iteration".into(),
        ));
    }
    let mut interp = interp_init::<f64>(q, theta, b, Some(truncation))?;
    let phi0 = load_forcing::<f64>(b).scale(-q * theta);
    let mut ham = HomotopyState::new(
        phi0,
        PolySeries::zero(),
        Forcing::GivenLoad(q),
        -theta,
        -1.0,
    )?
    .with_truncation(truncation);

    let mut worst = relative_gap(&interp.vartheta, &ham.phi_terms()[0]);
    for _ in 0..n_iters {
        interp = interp_step(&interp)?;
        ham = ham.staggered_first_order(b)?;
        let psi = interp.psi.as_ref().expect("set by interp_step");
        worst = worst
            .max(relative_gap(&interp.vartheta, &ham.phi_terms()[0]))
            .max(relative_gap(psi, &ham.s_terms()[0]));
    }
    Ok(worst)
}

/// Baseline run with the default residual grid.
pub fn run_interp_default(
    q: f64,
    theta: f64,
    truncation: usize,
    stop: &StopRule,
) -> Result<InterpRun> {
    run_interp::<f64>(
        q,
        theta,
        &BoundarySpec::clamped(),
        Some(truncation),
        stop,
        DEFAULT_GRID_K,
    )
}
