//! Order-by-order homotopy machinery shared by the given-load and
//! given-deflection solvers.
//!
//! The homotopy series in the embedding parameter is never evaluated away
//! from its two ends; only the Taylor coefficients `phi_k`, `S_k` (and the
//! load terms `Q_k` in given-deflection mode) are stored. Each order solves
//!
//! ```text
//! phi_k = chi_k phi_{k-1} + c1 delta1_{k-1}
//! S_k   = chi_k S_{k-1}   + c2 delta2_{k-1}
//! ```
//!
//! with `chi_1 = 0` and `chi_k = 1` for `k >= 2`.

use std::time::Instant;

use crate::diagnostics::w_over_h;
use crate::error::{PlateError, Result};
use crate::kernel::{
    apply_g, apply_g_truncated, apply_k, apply_k_truncated, load_forcing, BoundarySpec,
};
use crate::polyseries::PolySeries;
use crate::report::{ConfigEcho, Record, RunReport, Status, StopRule};
use crate::scalar::Real;

/// What fixes the load term of the first governing equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Forcing<T: Real = f64> {
    /// Prescribed dimensionless load `Q`.
    GivenLoad(T),
    /// Prescribed central deflection `W(0) = a`; the load is solved for.
    GivenDeflection(T),
}

/// `chi_k` of the deformation recurrence.
pub fn chi<T: Real>(k: usize) -> T {
    if k <= 1 {
        T::ZERO
    } else {
        T::ONE
    }
}

/// Tolerance on `|int phi/e + a|` for the restriction guard.
pub const RESTRICTION_TOL: f64 = 1e-10;

/// Taylor coefficients of one homotopy pass.
#[derive(Clone, Debug)]
pub struct HomotopyState<T: Real = f64> {
    phi: Vec<PolySeries<T>>,
    s: Vec<PolySeries<T>>,
    /// `Q_0, Q_1, ...` (given-deflection mode only).
    q_terms: Vec<T>,
    forcing: Forcing<T>,
    c1: T,
    c2: T,
    truncation: Option<usize>,
}

impl<T: Real> HomotopyState<T> {
    pub fn new(
        phi0: PolySeries<T>,
        s0: PolySeries<T>,
        forcing: Forcing<T>,
        c1: T,
        c2: T,
    ) -> Result<Self> {
        if c1.is_zero() || c2.is_zero() {
            return Err(PlateError::Config(
                "convergence-control parameters must be nonzero".into(),
            ));
        }
        for (name, series) in [("phi0", &phi0), ("S0", &s0)] {
            if series.valuation() == Some(0) {
                return Err(PlateError::Valuation {
                    op: if name == "phi0" {
                        "initial phi"
                    } else {
                        "initial S"
                    },
                    required: 1,
                    found: 0,
                });
            }
        }
        let state = Self {
            phi: vec![phi0],
            s: vec![s0],
            q_terms: Vec::new(),
            forcing,
            c1,
            c2,
            truncation: None,
        };
        state.check_restriction()?;
        Ok(state)
    }

    /// Truncate every deformation term to degree `order`.
    pub fn with_truncation(mut self, order: usize) -> Self {
        self.truncation = Some(order);
        self
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn forcing(&self) -> Forcing<T> {
        self.forcing
    }

    pub fn c1(&self) -> T {
        self.c1
    }

    pub fn c2(&self) -> T {
        self.c2
    }

    /// Highest order computed so far.
    pub fn order(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi_terms(&self) -> &[PolySeries<T>] {
        &self.phi
    }

    pub fn s_terms(&self) -> &[PolySeries<T>] {
        &self.s
    }

    pub fn q_terms(&self) -> &[T] {
        &self.q_terms
    }

    pub fn phi_sum(&self) -> PolySeries<T> {
        self.phi.iter().cloned().sum()
    }

    pub fn s_sum(&self) -> PolySeries<T> {
        self.s.iter().cloned().sum()
    }

    /// `Q` in given-load mode, `sum_k Q_k` over the terms computed so far otherwise.
    pub fn load_estimate(&self) -> T {
        match self.forcing {
            Forcing::GivenLoad(q) => q,
            Forcing::GivenDeflection(_) => self.q_terms.iter().copied().sum(),
        }
    }

    fn check_restriction(&self) -> Result<()> {
        if let Forcing::GivenDeflection(a) = self.forcing {
            let defect = (self.phi_sum().unit_weighted_integral()? + a)
                .abs()
                .to_f64();
            if defect > RESTRICTION_TOL * (1.0 + a.abs().to_f64()) {
                return Err(PlateError::Domain(format!(
                    "restriction int phi/e = -a violated by {defect:e}"
                )));
            }
        }
        Ok(())
    }

    fn require_orders(&self, k: usize) -> Result<()> {
        if k == 0 || self.phi.len() < k {
            return Err(PlateError::Sequencing(format!(
                "order {k} needs terms 0..{} but only 0..{} are present",
                k.saturating_sub(1),
                self.order()
            )));
        }
        Ok(())
    }

    fn trunc(&self, f: PolySeries<T>) -> PolySeries<T> {
        match self.truncation {
            Some(n) => f.truncate(n),
            None => f,
        }
    }

    fn k_image(&self, f: &PolySeries<T>, b: &BoundarySpec) -> PolySeries<T> {
        match self.truncation {
            Some(n) => apply_k_truncated(f, b, n),
            None => apply_k(f, b),
        }
    }

    fn g_image(&self, f: &PolySeries<T>, b: &BoundarySpec) -> PolySeries<T> {
        match self.truncation {
            Some(n) => apply_g_truncated(f, b, n),
            None => apply_g(f, b),
        }
    }

    /// `sum_{i<k} a_i b_{k-1-i} / y^2`
    fn cauchy_term(a: &[PolySeries<T>], b: &[PolySeries<T>], k: usize) -> Result<PolySeries<T>> {
        let mut acc = PolySeries::zero();
        for i in 0..k {
            let prod = a[i].multiply(&b[k - 1 - i]);
            acc.add_scaled(&prod, T::ONE);
        }
        acc.divide_by_y_squared()
    }

    /// `delta1_{k-1}` without its load term.
    fn delta1_base(&self, k: usize, b: &BoundarySpec) -> Result<PolySeries<T>> {
        self.require_orders(k)?;
        let integrand = Self::cauchy_term(&self.phi, &self.s, k)?;
        let mut base = self.k_image(&integrand, b);
        base.add_scaled(&self.trunc(self.phi[k - 1].clone()), T::ONE);
        Ok(base)
    }

    fn load_term(&self, k: usize) -> Result<T> {
        match self.forcing {
            Forcing::GivenLoad(q) => Ok((T::ONE - chi::<T>(k)) * q),
            Forcing::GivenDeflection(_) => self.q_terms.get(k - 1).copied().ok_or_else(|| {
                PlateError::Sequencing(format!("Q_{} has not been solved for", k - 1))
            }),
        }
    }

    /// `delta1_{k-1}`, the `(k-1)`th homotopy-derivative of the first operator.
    pub fn delta1(&self, k: usize, b: &BoundarySpec) -> Result<PolySeries<T>> {
        let mut d = self.delta1_base(k, b)?;
        d.add_scaled(&load_forcing(b), self.load_term(k)?);
        Ok(d)
    }

    /// `delta2_{k-1}`, the `(k-1)`th homotopy-derivative of the second operator.
    pub fn delta2(&self, k: usize, b: &BoundarySpec) -> Result<PolySeries<T>> {
        self.require_orders(k)?;
        let integrand = Self::cauchy_term(&self.phi, &self.phi, k)?;
        let mut d = self.trunc(self.s[k - 1].clone());
        d.add_scaled(&self.g_image(&integrand, b), T::from_f64(-0.5));
        Ok(d)
    }

    /// Load term `Q_{k-1}` that makes `int_0^1 delta1_{k-1}(e)/e de` vanish.
    pub fn solve_qk(&self, k: usize, b: &BoundarySpec) -> Result<T> {
        let base = self.delta1_base(k, b)?;
        let weight = T::from_f64(b.lambda) * T::from_f64(0.5) + T::from_f64(0.25);
        if weight.is_zero() {
            return Err(PlateError::Domain("2 lambda + 1 must be nonzero".into()));
        }
        Ok(-base.unit_weighted_integral()? / weight)
    }

    /// Compute `phi_k`, `S_k` (solving `Q_{k-1}` first in given-deflection mode)
    /// and append them to the state.
    pub fn high_order_step(
        &mut self,
        k: usize,
        b: &BoundarySpec,
    ) -> Result<(PolySeries<T>, PolySeries<T>)> {
        if k != self.phi.len() {
            return Err(PlateError::Sequencing(format!(
                "next order is {}, not {k}",
                self.phi.len()
            )));
        }
        if matches!(self.forcing, Forcing::GivenDeflection(_)) && self.q_terms.len() < k {
            let qk = self.solve_qk(k, b)?;
            self.q_terms.push(qk);
        }
        let d1 = self.delta1(k, b)?;
        let d2 = self.delta2(k, b)?;
        let chi_k = chi::<T>(k);

        let mut phi_k = self.phi[k - 1].scale(chi_k);
        phi_k.add_scaled(&d1, self.c1);
        let mut s_k = self.s[k - 1].scale(chi_k);
        s_k.add_scaled(&d2, self.c2);

        self.phi.push(phi_k.clone());
        self.s.push(s_k.clone());
        Ok((phi_k, s_k))
    }

    /// One `m`th-order iteration: run orders `1..=m` and restart from the
    /// partial sums. In given-deflection mode the returned load is
    /// `Q_0 + ... + Q_m` of this pass.
    pub fn mth_order_iterate(&self, m: usize, n: usize, b: &BoundarySpec) -> Result<Pass<T>> {
        if m == 0 || n == 0 {
            return Err(PlateError::Config(
                "iteration order and truncation order must be >= 1".into(),
            ));
        }
        if self.order() != 0 {
            return Err(PlateError::Sequencing(
                "iteration must start from a fresh state".into(),
            ));
        }
        let mut work = self.clone();
        work.truncation = Some(n);
        for k in 1..=m {
            work.high_order_step(k, b)?;
        }
        if matches!(work.forcing, Forcing::GivenDeflection(_)) {
            let q_next = work.solve_qk(m + 1, b)?;
            work.q_terms.push(q_next);
        }
        let load = work.load_estimate();
        let next = Self {
            phi: vec![work.phi_sum().truncate(n)],
            s: vec![work.s_sum().truncate(n)],
            q_terms: Vec::new(),
            forcing: work.forcing,
            c1: work.c1,
            c2: work.c2,
            truncation: Some(n),
        };
        next.check_restriction()?;
        Ok(Pass { next, load })
    }

    /// First-order update with the membrane variable advanced first:
    /// `S* = S0 + c2 delta2_0`, then `phi* = phi0 + c1 delta1_0` using `S*`.
    pub fn staggered_first_order(&self, b: &BoundarySpec) -> Result<Self> {
        if self.order() != 0 {
            return Err(PlateError::Sequencing(
                "staggered update needs a fresh state".into(),
            ));
        }
        if matches!(self.forcing, Forcing::GivenDeflection(_)) {
            return Err(PlateError::Config(
                "staggered update is defined for a given load".into(),
            ));
        }
        let mut s_star = self.s[0].clone();
        s_star.add_scaled(&self.delta2(1, b)?, self.c2);
        let s_star = self.trunc(s_star);

        let mut mid = self.clone();
        mid.s = vec![s_star.clone()];
        let mut phi_star = self.phi[0].clone();
        phi_star.add_scaled(&mid.delta1(1, b)?, self.c1);
        let phi_star = self.trunc(phi_star);

        Ok(Self {
            phi: vec![phi_star],
            s: vec![s_star],
            ..mid
        })
    }
}

/// Result of one outer iteration.
#[derive(Clone, Debug)]
pub struct Pass<T: Real = f64> {
    pub next: HomotopyState<T>,
    /// Load estimate carried by the pass.
    pub load: T,
}

/// Discrete residual of both governing equations.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub err: f64,
    pub grid_size: usize,
    /// `(y_i, N1(y_i), N2(y_i))` when requested.
    pub per_point: Option<Vec<(f64, f64, f64)>>,
}

/// The two governing-equation residuals as polynomials.
pub fn residual_polys<T: Real>(
    phi: &PolySeries<T>,
    s: &PolySeries<T>,
    q: T,
    b: &BoundarySpec,
) -> Result<(PolySeries<T>, PolySeries<T>)> {
    let mut n1 = phi.clone();
    n1.add_scaled(&apply_k(&phi.multiply(s).divide_by_y_squared()?, b), T::ONE);
    n1.add_scaled(&load_forcing(b), q);
    let mut n2 = s.clone();
    n2.add_scaled(
        &apply_g(&phi.multiply(phi).divide_by_y_squared()?, b),
        T::from_f64(-0.5),
    );
    Ok((n1, n2))
}

/// Mean of `N1^2 + N2^2` over `y_i = i/K`, `i = 0..=K`.
pub fn residual_err<T: Real>(
    phi: &PolySeries<T>,
    s: &PolySeries<T>,
    q: T,
    b: &BoundarySpec,
    grid_k: usize,
    keep_points: bool,
) -> Result<ResidualReport> {
    if grid_k == 0 {
        return Err(PlateError::Config("residual grid needs K >= 1".into()));
    }
    for series in [phi, s] {
        if series.valuation() == Some(0) {
            return Err(PlateError::Valuation {
                op: "residual_err",
                required: 1,
                found: 0,
            });
        }
    }
    let (n1, n2) = residual_polys(phi, s, q, b)?;
    let kk = T::from_usize(grid_k);
    let mut total = T::ZERO;
    let mut points = keep_points.then(|| Vec::with_capacity(grid_k + 1));
    for i in 0..=grid_k {
        let y = T::from_usize(i) / kk;
        let r1 = n1.horner(y);
        let r2 = n2.horner(y);
        total += r1 * r1 + r2 * r2;
        if let Some(points) = points.as_mut() {
            points.push((y.to_f64(), r1.to_f64(), r2.to_f64()));
        }
    }
    Ok(ResidualReport {
        err: (total / T::from_usize(grid_k + 1)).to_f64(),
        grid_size: grid_k,
        per_point: points,
    })
}

/// `w(0)/h` of a slope series.
pub fn central_w_over_h<T: Real>(phi: &PolySeries<T>, nu: f64) -> Result<f64> {
    let w = phi.deflection_from_phi()?;
    Ok(w_over_h(w.coeff(0).to_f64(), nu))
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn final_report<T: Real>(
    config: ConfigEcho,
    records: Vec<Record>,
    phi: &PolySeries<T>,
    s: &PolySeries<T>,
    status: Status,
) -> RunReport {
    RunReport {
        config,
        records,
        phi: phi.to_f64_vec(),
        s: s.to_f64_vec(),
        status,
    }
}

/// Non-iterative run: partial sums of orders `0..=order`, one record each.
pub(crate) fn run_series<T: Real>(
    mut state: HomotopyState<T>,
    order: usize,
    b: &BoundarySpec,
    stop: &StopRule,
    grid_k: usize,
    config: ConfigEcho,
) -> Result<RunReport> {
    let start = Instant::now();
    let deflection_mode = matches!(state.forcing, Forcing::GivenDeflection(_));
    let mut records = Vec::with_capacity(order + 1);
    let mut phi_sum = state.phi[0].clone();
    let mut s_sum = state.s[0].clone();
    let mut status = Status::MaxIter;

    for n in 0..=order {
        if n > 0 {
            let (phi_n, s_n) = state.high_order_step(n, b)?;
            phi_sum.add_scaled(&phi_n, T::ONE);
            s_sum.add_scaled(&s_n, T::ONE);
        }
        if deflection_mode {
            // Q_n of the nth-order approximation comes from the next restriction
            let qn = state.solve_qk(n + 1, b)?;
            state.q_terms.push(qn);
        }
        let load = state.load_estimate();
        let res = residual_err(&phi_sum, &s_sum, load, b, grid_k, false)?;
        records.push(Record {
            iteration: 0,
            order: n,
            err: res.err,
            q: load.to_f64(),
            w0_over_h: central_w_over_h(&phi_sum, b.nu)?,
            wall_ms: elapsed_ms(start),
        });
        status = stop.classify(res.err);
        if status == Status::Diverged {
            break;
        }
    }
    Ok(final_report(config, records, &phi_sum, &s_sum, status))
}

/// Iterated run: restart from the `m`th-order partial sums until the stopping rule fires.
pub(crate) fn run_iterate<T: Real>(
    state: HomotopyState<T>,
    m: usize,
    n: usize,
    b: &BoundarySpec,
    stop: &StopRule,
    grid_k: usize,
    config: ConfigEcho,
) -> Result<RunReport> {
    let start = Instant::now();
    let mut state = state.with_truncation(n);
    let mut load = match state.forcing {
        Forcing::GivenLoad(q) => q,
        Forcing::GivenDeflection(_) => state.solve_qk(1, b)?,
    };
    let mut records = Vec::new();
    let res = residual_err(&state.phi[0], &state.s[0], load, b, grid_k, false)?;
    records.push(Record {
        iteration: 0,
        order: m,
        err: res.err,
        q: load.to_f64(),
        w0_over_h: central_w_over_h(&state.phi[0], b.nu)?,
        wall_ms: elapsed_ms(start),
    });
    let mut status = stop.classify(res.err);
    let mut iteration = 0;
    while status == Status::MaxIter && iteration < stop.max_iter {
        iteration += 1;
        let pass = state.mth_order_iterate(m, n, b)?;
        state = pass.next;
        load = pass.load;
        let res = residual_err(&state.phi[0], &state.s[0], load, b, grid_k, false)?;
        records.push(Record {
            iteration,
            order: m,
            err: res.err,
            q: load.to_f64(),
            w0_over_h: central_w_over_h(&state.phi[0], b.nu)?,
            wall_ms: elapsed_ms(start),
        });
        status = stop.classify(res.err);
    }
    Ok(final_report(
        config,
        records,
        &state.phi[0],
        &state.s[0],
        status,
    ))
}
