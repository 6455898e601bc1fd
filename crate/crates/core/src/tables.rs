//! Reference runs for the clamped plate (`nu = 0.3`), one table each.

use serde::Serialize;

use crate::error::{PlateError, Result};
use crate::given_deflection::{empirical_c0_a, solve_given_a_in, GivenDeflectionProblem};
use crate::given_load::{empirical_c0_q, solve_given_q_in, GivenLoadProblem};
use crate::report::{RunReport, SolveMode, StopRule};
use crate::scalar::Precision;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub title: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

const ITERATED: SolveMode = SolveMode::Iterate { m: 5, n: 100 };

fn fixed_run(max_iter: usize) -> StopRule {
    StopRule {
        tol: 0.0,
        max_iter,
        ..StopRule::default()
    }
}

fn pick(
    report: &RunReport,
    iteration: Option<usize>,
    order: Option<usize>,
) -> Result<&crate::report::Record> {
    let found = match (iteration, order) {
        (Some(i), _) => report.at_iteration(i),
        (None, Some(o)) => report.at_order(o),
        (None, None) => report.last(),
    };
    found.ok_or_else(|| PlateError::Domain("run stopped before the requested row".into()))
}

/// Residual and `w(0)/h` against series order, `Q = 5`, `c0 = -0.35`.
pub fn table1(precision: Precision) -> Result<Table> {
    let report = solve_given_q_in(
        &GivenLoadProblem::new(5.0, -0.35, SolveMode::Series { order: 50 }),
        precision,
    )?;
    let rows = [10, 20, 30, 40, 50]
        .into_iter()
        .map(|o| pick(&report, None, Some(o)).map(|r| vec![o as f64, r.err, r.w0_over_h]))
        .collect::<Result<_>>()?;
    Ok(Table {
        name: "table1".into(),
        title: "Q = 5, series, c0 = -0.35".into(),
        header: vec!["order", "err", "w0_over_h"],
        rows,
    })
}

/// `w(0)/h` for `Q = 1..5`, series order 50 with the empirical `c0`.
pub fn table2(precision: Precision) -> Result<Table> {
    let rows = (1..=5)
        .map(|q| {
            let q = q as f64;
            let c0 = empirical_c0_q(q, false);
            let report = solve_given_q_in(
                &GivenLoadProblem::new(q, c0, SolveMode::Series { order: 50 }),
                precision,
            )?;
            Ok(vec![q, c0, report.final_err(), report.final_w0_over_h()])
        })
        .collect::<Result<_>>()?;
    Ok(Table {
        name: "table2".into(),
        title: "series solutions, c0 = -13/(13 + Q^2)".into(),
        header: vec!["q", "c0", "err", "w0_over_h"],
        rows,
    })
}

/// Residual against iteration, `Q = 1000`, `M = 5`, `N = 100`, `c0 = -0.02`.
pub fn table3(precision: Precision) -> Result<Table> {
    let mut p = GivenLoadProblem::new(1000.0, -0.02, ITERATED);
    p.stop = fixed_run(100);
    let report = solve_given_q_in(&p, precision)?;
    let rows = [20, 40, 60, 80, 100]
        .into_iter()
        .map(|i| pick(&report, Some(i), None).map(|r| vec![i as f64, r.err, r.w0_over_h]))
        .collect::<Result<_>>()?;
    Ok(Table {
        name: "table3".into(),
        title: "Q = 1000, M = 5, N = 100, c0 = -0.02".into(),
        header: vec!["iteration", "err", "w0_over_h"],
        rows,
    })
}

/// `w(0)/h` for `Q = 200..1000`, iterated with `c0 = -23/(Q + 23)`.
pub fn table4(precision: Precision) -> Result<Table> {
    let rows = [200.0, 400.0, 600.0, 800.0, 1000.0]
        .into_iter()
        .map(|q| {
            let c0 = empirical_c0_q(q, true);
            let report = solve_given_q_in(&GivenLoadProblem::new(q, c0, ITERATED), precision)?;
            Ok(vec![
                q,
                c0,
                (report.records.len() - 1) as f64,
                report.final_err(),
                report.final_w0_over_h(),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(Table {
        name: "table4".into(),
        title: "iterated solutions, c0 = -23/(Q + 23)".into(),
        header: vec!["q", "c0", "iterations", "err", "w0_over_h"],
        rows,
    })
}

/// Residual and load against iteration, `a = 5`, `M = 5`, `N = 100`, `c0 = -0.5`.
pub fn table5(precision: Precision) -> Result<Table> {
    let mut p = GivenDeflectionProblem::new(5.0, -0.5, ITERATED);
    p.stop = fixed_run(10);
    let report = solve_given_a_in(&p, precision)?;
    let rows = [2, 4, 6, 8, 10]
        .into_iter()
        .map(|i| pick(&report, Some(i), None).map(|r| vec![i as f64, r.err, r.q]))
        .collect::<Result<_>>()?;
    Ok(Table {
        name: "table5".into(),
        title: "a = 5, M = 5, N = 100, c0 = -0.5".into(),
        header: vec!["iteration", "err", "q"],
        rows,
    })
}

/// Load for `a = 1..5`, series order 100 with `c0 = -11/(11 + a^2)`.
pub fn table6(precision: Precision) -> Result<Table> {
    let rows = (1..=5)
        .map(|a| {
            let a = a as f64;
            let (c0, _) = empirical_c0_a(a, false);
            let report = solve_given_a_in(
                &GivenDeflectionProblem::new(a, c0, SolveMode::Series { order: 100 }),
                precision,
            )?;
            Ok(vec![a, c0, report.final_err(), report.final_q()])
        })
        .collect::<Result<_>>()?;
    Ok(Table {
        name: "table6".into(),
        title: "series solutions, c0 = -11/(11 + a^2)".into(),
        header: vec!["a", "c0", "err", "q"],
        rows,
    })
}

/// Load for `a = 5..30`, iterated with `c0 = -25/(25 + a^2)`.
pub fn table7(precision: Precision) -> Result<Table> {
    let rows = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
        .into_iter()
        .map(|a| {
            let (c0, _) = empirical_c0_a(a, true);
            let report =
                solve_given_a_in(&GivenDeflectionProblem::new(a, c0, ITERATED), precision)?;
            Ok(vec![
                a,
                c0,
                (report.records.len() - 1) as f64,
                report.final_err(),
                report.final_q(),
                report.final_w0_over_h(),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(Table {
        name: "table7".into(),
        title: "iterated solutions, c0 = -25/(25 + a^2)".into(),
        header: vec!["a", "c0", "iterations", "err", "q", "w0_over_h"],
        rows,
    })
}

pub fn all_tables(precision: Precision) -> Result<Vec<Table>> {
    [table1, table2, table3, table4, table5, table6, table7]
        .into_iter()
        .map(|f| f(precision))
        .collect()
}
