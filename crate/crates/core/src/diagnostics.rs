//! Unit conversions, deflection curves, `c0` sweeps and iteration-order
//! comparisons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PlateError, Result};
use crate::given_deflection::{solve_given_a, GivenDeflectionProblem};
use crate::given_load::{solve_given_q, GivenLoadProblem};
use crate::interp::run_interp;
use crate::kernel::BoundarySpec;
use crate::polyseries::PolySeries;
use crate::report::{RunReport, SolveMode, Status, StopRule};
use crate::scalar::Real;

/// `sqrt(3 (1 - nu^2))`, the scale between `W` and `w/h`.
pub fn deflection_scale(nu: f64) -> f64 {
    (3.0 * (1.0 - nu * nu)).sqrt()
}

/// `|W0| / sqrt(3 (1 - nu^2))`
pub fn w_over_h(w0: f64, nu: f64) -> f64 {
    w0.abs() / deflection_scale(nu)
}

/// Plate in physical units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalPlate {
    /// Young's modulus.
    pub e: f64,
    pub nu: f64,
    /// Radius.
    pub radius: f64,
    /// Thickness.
    pub h: f64,
    /// Uniform pressure.
    pub p: f64,
}

impl PhysicalPlate {
    pub fn validate(&self) -> Result<()> {
        if !(self.e > 0.0 && self.radius > 0.0 && self.h > 0.0) {
            return Err(PlateError::Domain(
                "E, radius and thickness must be positive".into(),
            ));
        }
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(PlateError::Domain(format!(
                "Poisson ratio {} outside (0, 0.5)",
                self.nu
            )));
        }
        if self.h >= self.radius {
            return Err(PlateError::Domain(
                "thickness must be smaller than the radius".into(),
            ));
        }
        if !self.p.is_finite() {
            return Err(PlateError::Domain("pressure must be finite".into()));
        }
        Ok(())
    }

    /// Radial coordinate of the dimensionless position `y = r^2 / R^2`.
    pub fn radius_at(&self, y: f64) -> f64 {
        self.radius * y.sqrt()
    }

    /// Radial membrane force from the dimensionless `S(y)`.
    pub fn membrane_force(&self, s: f64, y: f64) -> f64 {
        s * self.e * self.h.powi(3) / (3.0 * (1.0 - self.nu * self.nu) * self.radius.powi(2) * y)
    }
}

/// Dimensionless load `Q = 3(1-nu^2) sqrt(3(1-nu^2)) R^4 p / (4 E h^4)`.
pub fn to_dimensionless(pp: &PhysicalPlate) -> Result<f64> {
    pp.validate()?;
    let c = 3.0 * (1.0 - pp.nu * pp.nu);
    Ok(c * c.sqrt() * pp.radius.powi(4) * pp.p / (4.0 * pp.e * pp.h.powi(4)))
}

/// One row of a deflection curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub y: f64,
    #[serde(rename = "r_over_Ra")]
    pub r_over_ra: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub w_over_h: f64,
}

/// Deflection sampled uniformly in `y` with both endpoints.
pub fn deflection_curve<T: Real>(
    phi: &PolySeries<T>,
    samples: usize,
    nu: f64,
) -> Result<Vec<CurvePoint>> {
    if samples < 2 {
        return Err(PlateError::Config(
            "a curve needs at least 2 samples".into(),
        ));
    }
    let w = phi.deflection_from_phi()?;
    let last = T::from_usize(samples - 1);
    let scale = deflection_scale(nu);
    Ok((0..samples)
        .map(|i| {
            let y = T::from_usize(i) / last;
            let wy = w.horner(y).to_f64();
            let y = y.to_f64();
            CurvePoint {
                y,
                r_over_ra: y.sqrt(),
                w: wy,
                w_over_h: wy.abs() / scale,
            }
        })
        .collect())
}

/// Which problem a sweep or comparison runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ProblemSpec {
    GivenLoad(f64),
    GivenDeflection(f64),
}

impl ProblemSpec {
    fn solve(
        &self,
        b: &BoundarySpec,
        c1: f64,
        c2: f64,
        mode: SolveMode,
        stop: StopRule,
        grid_k: usize,
    ) -> Result<RunReport> {
        match *self {
            ProblemSpec::GivenLoad(q) => solve_given_q(&GivenLoadProblem {
                q,
                boundary: *b,
                c1,
                c2,
                mode,
                stop,
                grid_k,
            }),
            ProblemSpec::GivenDeflection(a) => solve_given_a(&GivenDeflectionProblem {
                a,
                boundary: *b,
                c1,
                c2,
                mode,
                stop,
                grid_k,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c0: f64,
    pub err: f64,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// `c0` of the smallest finite residual (earliest in grid order on ties).
    pub argmin: Option<f64>,
}

/// Residual of the `order`th-order series approximation for each `c0`.
pub fn sweep_c0(
    problem: ProblemSpec,
    b: &BoundarySpec,
    c0_grid: &[f64],
    order: usize,
    grid_k: usize,
) -> Result<SweepTable> {
    if c0_grid.is_empty() {
        return Err(PlateError::Config("c0 grid is empty".into()));
    }
    if let Some(bad) = c0_grid.iter().find(|&&c| !(c > -2.0 && c < 0.0)) {
        return Err(PlateError::Config(format!("c0 = {bad} outside (-2, 0)")));
    }
    let stop = StopRule::default();
    let rows = c0_grid
        .par_iter()
        .map(|&c0| {
            let report = problem.solve(b, c0, c0, SolveMode::Series { order }, stop, grid_k)?;
            let err = report.final_err();
            Ok(SweepRow {
                c0,
                err,
                status: if stop.diverged(err) {
                    Status::Diverged
                } else {
                    report.status
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let argmin = rows
        .iter()
        .filter(|r| r.err.is_finite())
        .fold(None::<&SweepRow>, |best, r| match best {
            Some(b) if b.err < r.err || (b.err == r.err && b.c0 <= r.c0) => Some(b),
            _ => Some(r),
        })
        .map(|r| r.c0);
    Ok(SweepTable { rows, argmin })
}

/// Evenly spaced grid from `start` to `end` inclusive, rounded to 12 decimals.
pub fn c0_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step).round() as i64;
    (0..=n.max(0))
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderRow {
    pub m: usize,
    pub iteration: usize,
    pub err: f64,
    pub cumulative_wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderComparison {
    pub rows: Vec<OrderRow>,
    /// Final status of each run, in `M` order.
    pub statuses: Vec<(usize, Status)>,
}

impl OrderComparison {
    /// Iterations run `M` needs to reach `level`.
    pub fn iterations_to(&self, m: usize, level: f64) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.m == m && r.err <= level)
            .map(|r| r.iteration)
    }
}

/// One iterated run per iteration order in `m_set`, sharing `c0`, `N` and the stopping rule.
pub fn compare_orders(
    problem: ProblemSpec,
    b: &BoundarySpec,
    m_set: &[usize],
    n: usize,
    c0: f64,
    stop: StopRule,
    grid_k: usize,
) -> Result<OrderComparison> {
    if m_set.contains(&0) {
        return Err(PlateError::Config("iteration orders must be >= 1".into()));
    }
    let runs = m_set
        .par_iter()
        .map(|&m| {
            problem
                .solve(b, c0, c0, SolveMode::Iterate { m, n }, stop, grid_k)
                .map(|r| (m, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut statuses = Vec::new();
    for (m, report) in runs {
        statuses.push((m, report.status));
        rows.extend(report.records.iter().map(|r| OrderRow {
            m,
            iteration: r.iteration,
            err: r.err,
            cumulative_wall_ms: r.wall_ms,
        }));
    }
    Ok(OrderComparison { rows, statuses })
}

/// Residual histories of the homotopy solvers and the interpolation baseline
/// on the same plate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineComparison {
    pub ham_given_a: RunReport,
    pub ham_given_q: RunReport,
    pub baseline: crate::interp::InterpRun,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineSetup {
    pub a: f64,
    pub c0_a: f64,
    pub q: f64,
    pub c0_q: f64,
    pub theta: f64,
    pub m: usize,
    pub n: usize,
}

impl Default for BaselineSetup {
    fn default() -> Self {
        Self {
            a: 5.0,
            c0_a: -0.5,
            q: 132.2,
            c0_q: -0.15,
            theta: 0.1,
            m: 5,
            n: 100,
        }
    }
}

pub fn compare_baseline(
    setup: &BaselineSetup,
    b: &BoundarySpec,
    stop: StopRule,
    grid_k: usize,
) -> Result<BaselineComparison> {
    let mode = SolveMode::Iterate {
        m: setup.m,
        n: setup.n,
    };
    let ham_given_a = ProblemSpec::GivenDeflection(setup.a)
        .solve(b, setup.c0_a, setup.c0_a, mode, stop, grid_k)?;
    let ham_given_q =
        ProblemSpec::GivenLoad(setup.q).solve(b, setup.c0_q, setup.c0_q, mode, stop, grid_k)?;
    let baseline = run_interp::<f64>(setup.q, setup.theta, b, Some(setup.n), &stop, grid_k)?;
    Ok(BaselineComparison {
        ham_given_a,
        ham_given_q,
        baseline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plate(p: f64) -> PhysicalPlate {
        PhysicalPlate {
            e: 2.0e11,
            nu: 0.3,
            radius: 0.5,
            h: 0.005,
            p,
        }
    }

    #[test]
    fn dimensionless_load() {
        assert_eq!(to_dimensionless(&plate(0.0)).unwrap(), 0.0);
        // prefactor 3(1-nu^2)^{3/2} sqrt(3)... evaluated a second way
        let pp = PhysicalPlate {
            e: 1.0,
            nu: 0.3,
            radius: 1.0,
            h: 0.5,
            p: 1.0 / 16.0,
        };
        let q = to_dimensionless(&pp).unwrap();
        let alt = (3.0_f64 * 0.91).powf(1.5) / 4.0;
        assert!((q - alt).abs() < 1e-15);
        assert!((alt - 4.511_f64 / 4.0).abs() < 1e-3);

        let base = to_dimensionless(&plate(1.0e4)).unwrap();
        let scaled = to_dimensionless(&plate(3.0e4)).unwrap();
        assert!((scaled - 3.0 * base).abs() <= 1e-15 * scaled);

        let mut bad = plate(1.0);
        bad.h = 1.0;
        assert!(to_dimensionless(&bad).is_err());
        bad = plate(1.0);
        bad.nu = 0.6;
        assert!(to_dimensionless(&bad).is_err());
        bad = plate(1.0);
        bad.e = 0.0;
        assert!(to_dimensionless(&bad).is_err());
    }

    #[test]
    fn w_over_h_values() {
        assert!((w_over_h(5.0, 0.3) - 3.026).abs() < 1e-3);
        assert!((w_over_h(5.0, 0.3) - 3.0).abs() < 0.05);
        assert_eq!(w_over_h(0.0, 0.3), 0.0);
        assert!((w_over_h(10.08, 0.3) - 6.1).abs() < 0.01);
        assert_eq!(w_over_h(-2.0, 0.3), w_over_h(2.0, 0.3));
    }

    #[test]
    fn curve_shape() {
        let zero = deflection_curve(&PolySeries::<f64>::zero(), 5, 0.3).unwrap();
        assert!(zero.iter().all(|p| p.w == 0.0 && p.w_over_h == 0.0));
        let phi = PolySeries::<f64>::from_f64_slice(&[0.0, -3.0, 3.0]);
        let curve = deflection_curve(&phi, 11, 0.3).unwrap();
        assert_eq!(curve.len(), 11);
        assert_eq!(curve.last().unwrap().w, 0.0);
        assert_eq!(curve[0].y, 0.0);
        assert_eq!(curve[10].y, 1.0);
        assert!((curve[4].r_over_ra - 0.4f64.sqrt()).abs() < 1e-15);
        let center = phi.deflection_from_phi().unwrap().coeff(0);
        assert_eq!(curve[0].w_over_h, w_over_h(center, 0.3));
        assert!(deflection_curve(&phi, 1, 0.3).is_err());
    }

    #[test]
    fn single_point_sweep() {
        let t = sweep_c0(
            ProblemSpec::GivenLoad(2.0),
            &BoundarySpec::clamped(),
            &[-0.7],
            5,
            100,
        )
        .unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.argmin, Some(-0.7));
        assert!(sweep_c0(
            ProblemSpec::GivenLoad(2.0),
            &BoundarySpec::clamped(),
            &[],
            5,
            100
        )
        .is_err());
        assert!(sweep_c0(
            ProblemSpec::GivenLoad(2.0),
            &BoundarySpec::clamped(),
            &[0.5],
            5,
            100
        )
        .is_err());
    }

    #[test]
    fn sweep_argmin_ignores_grid_order() {
        let b = BoundarySpec::clamped();
        let grid = c0_grid(-1.0, -0.1, 0.1);
        assert_eq!(grid.len(), 10);
        let mut rev = grid.clone();
        rev.reverse();
        let a = sweep_c0(ProblemSpec::GivenLoad(3.0), &b, &grid, 8, 100).unwrap();
        let r = sweep_c0(ProblemSpec::GivenLoad(3.0), &b, &rev, 8, 100).unwrap();
        assert_eq!(a.argmin, r.argmin);
        assert_eq!(a.rows[0].c0, grid[0]);
    }

    #[test]
    fn single_order_comparison() {
        let stop = StopRule {
            max_iter: 5,
            ..StopRule::default()
        };
        let c = compare_orders(
            ProblemSpec::GivenLoad(10.0),
            &BoundarySpec::clamped(),
            &[1],
            40,
            -0.5,
            stop,
            100,
        )
        .unwrap();
        assert_eq!(c.statuses.len(), 1);
        assert!(c.rows.iter().all(|r| r.m == 1));
        assert!(compare_orders(
            ProblemSpec::GivenLoad(10.0),
            &BoundarySpec::clamped(),
            &[0],
            40,
            -0.5,
            stop,
            100
        )
        .is_err());
    }
}
