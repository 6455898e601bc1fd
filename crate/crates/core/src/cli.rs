//! Command-line front end.
//!
//! Exit codes: 0 for a converged or order-capped run, 1 for usage and I/O
//! errors, 2 when a solve diverged.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::diagnostics::{
    c0_grid, compare_baseline, compare_orders, deflection_curve, sweep_c0, BaselineSetup,
    ProblemSpec,
};
use crate::error::{PlateError, Result};
use crate::given_deflection::{
    empirical_c0_a, solve_given_a_in, C0Validity, GivenDeflectionProblem,
};
use crate::given_load::{empirical_c0_q, solve_given_q_in, GivenLoadProblem};
use crate::kernel::{BoundaryKind, BoundarySpec};
use crate::output::{self, Format};
use crate::report::{
    RunReport, SolveMode, Status, StopRule, DEFAULT_GRID_K, DEFAULT_MAX_ITER, DEFAULT_SERIES_ORDER,
    DEFAULT_TOL, DEFAULT_TRUNCATION,
};
use crate::scalar::Precision;
use crate::tables;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;

/// Environment variable naming the default output directory of `tables`.
pub const OUT_DIR_ENV: &str = "PLATE_HAM_OUT_DIR";

const DEFAULT_NU: f64 = 0.3;
const DEFAULT_M: usize = 5;
const DEFAULT_SWEEP_ORDER: usize = 10;
const DEFAULT_SAMPLES: usize = 21;

#[derive(Parser, Debug)]
#[command(
    name = "plate-ham",
    version,
    about = "Large-deflection circular plate solver (homotopy analysis)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for a prescribed load Q.
    SolveQ(CommonArgs),
    /// Solve for a prescribed central deflection a.
    SolveA(CommonArgs),
    /// Series residual as a function of c0.
    SweepC0(SweepArgs),
    /// Iterated runs for several iteration orders M.
    CompareOrders(CompareArgs),
    /// Homotopy solvers against the interpolation iteration.
    CompareBaseline(BaselineArgs),
    /// Deflection curve of a converged solution.
    Curve(CurveArgs),
    /// Reproduce the seven reference tables as CSV files.
    Tables(TablesArgs),
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Dimensionless load.
    #[arg(long = "Q", allow_hyphen_values = true)]
    q: Option<f64>,
    /// Dimensionless central deflection.
    #[arg(long = "a", allow_hyphen_values = true)]
    a: Option<f64>,
    /// Convergence-control parameter, a number or "auto".
    #[arg(long, allow_hyphen_values = true)]
    c0: Option<C0Arg>,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<f64>,
    /// Series order (non-iterative mode).
    #[arg(long)]
    order: Option<usize>,
    /// Use the M-th order iteration.
    #[arg(long)]
    iterate: bool,
    #[arg(long = "M")]
    m: Option<usize>,
    /// Truncation degree of the iteration (default 100).
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// clamped | moveable | simple | hinged
    #[arg(long)]
    boundary: Option<BoundaryKind>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long = "grid-K")]
    grid_k: Option<usize>,
    /// double | extended
    #[arg(long)]
    precision: Option<Precision>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json (default: from the --out extension, else csv)
    #[arg(long)]
    format: Option<Format>,
    /// Keep measured wall times in the output files.
    #[arg(long)]
    timing: bool,
    /// JSON file with default values for these flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long = "c0-from", allow_hyphen_values = true, default_value_t = -1.0)]
    c0_from: f64,
    #[arg(long = "c0-to", allow_hyphen_values = true, default_value_t = -0.05)]
    c0_to: f64,
    #[arg(long = "c0-step", default_value_t = 0.05)]
    c0_step: f64,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated iteration orders.
    #[arg(long = "M-set", value_delimiter = ',', default_value = "1,2,3,4,5")]
    m_set: Vec<usize>,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Relaxation parameter of the interpolation iteration.
    #[arg(long, default_value_t = 0.1)]
    theta: f64,
    #[arg(long = "c0-a", allow_hyphen_values = true, default_value_t = -0.5)]
    c0_a: f64,
    #[arg(long = "c0-q", allow_hyphen_values = true, default_value_t = -0.15)]
    c0_q: f64,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum C0Arg {
    Auto,
    Value(f64),
}

impl FromStr for C0Arg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(C0Arg::Auto);
        }
        s.parse()
            .map(C0Arg::Value)
            .map_err(|_| format!("invalid c0 '{s}' (expected a number or 'auto')"))
    }
}

impl<'de> Deserialize<'de> for C0Arg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(C0Arg::Value(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn de_from_str<'de, D, T>(d: D) -> std::result::Result<Option<T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: FromStr<Err = String>,
{
    Option::<String>::deserialize(d)?
        .map(|s| s.parse().map_err(serde::de::Error::custom))
        .transpose()
}

/// Config-file keys, spelled like the flags.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "Q")]
    q: Option<f64>,
    a: Option<f64>,
    c0: Option<C0Arg>,
    c1: Option<f64>,
    c2: Option<f64>,
    order: Option<usize>,
    iterate: Option<bool>,
    #[serde(rename = "M")]
    m: Option<usize>,
    #[serde(rename = "N")]
    n: Option<usize>,
    tol: Option<f64>,
    #[serde(rename = "max-iter")]
    max_iter: Option<usize>,
    #[serde(default, deserialize_with = "de_from_str")]
    boundary: Option<BoundaryKind>,
    nu: Option<f64>,
    #[serde(rename = "grid-K")]
    grid_k: Option<usize>,
    #[serde(default, deserialize_with = "de_from_str")]
    precision: Option<Precision>,
    out: Option<PathBuf>,
    #[serde(default, deserialize_with = "de_from_str")]
    format: Option<Format>,
    timing: Option<bool>,
}

/// Flags merged over the config file.
#[derive(Debug)]
struct Settings {
    q: Option<f64>,
    a: Option<f64>,
    c0: C0Arg,
    c1: Option<f64>,
    c2: Option<f64>,
    order: Option<usize>,
    iterate: bool,
    m: usize,
    n: usize,
    stop: StopRule,
    boundary: BoundarySpec,
    grid_k: usize,
    precision: Precision,
    out: Option<PathBuf>,
    format: Option<Format>,
    timing: bool,
}

impl Settings {
    fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    PlateError::Config(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| {
                    PlateError::Config(format!("bad config {}: {e}", path.display()))
                })?
            }
            None => FileConfig::default(),
        };
        let boundary = BoundarySpec::new(
            args.boundary
                .or(file.boundary)
                .unwrap_or(BoundaryKind::Clamped),
            args.nu.or(file.nu).unwrap_or(DEFAULT_NU),
        )?;
        Ok(Self {
            q: args.q.or(file.q),
            a: args.a.or(file.a),
            c0: args.c0.or(file.c0).unwrap_or(C0Arg::Auto),
            c1: args.c1.or(file.c1),
            c2: args.c2.or(file.c2),
            order: args.order.or(file.order),
            iterate: args.iterate || file.iterate.unwrap_or(false),
            m: args.m.or(file.m).unwrap_or(DEFAULT_M),
            n: args.n.or(file.n).unwrap_or(DEFAULT_TRUNCATION),
            stop: StopRule {
                tol: args.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
                max_iter: args.max_iter.or(file.max_iter).unwrap_or(DEFAULT_MAX_ITER),
                ..StopRule::default()
            },
            boundary,
            grid_k: args.grid_k.or(file.grid_k).unwrap_or(DEFAULT_GRID_K),
            precision: args
                .precision
                .or(file.precision)
                .unwrap_or(Precision::Double),
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format),
            timing: args.timing || file.timing.unwrap_or(false),
        })
    }

    fn mode(&self) -> SolveMode {
        if self.iterate {
            SolveMode::Iterate {
                m: self.m,
                n: self.n,
            }
        } else {
            SolveMode::Series {
                order: self.order.unwrap_or(DEFAULT_SERIES_ORDER),
            }
        }
    }

    fn format(&self) -> Format {
        self.format.unwrap_or_else(|| match &self.out {
            Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
            _ => Format::Csv,
        })
    }

    fn require_q(&self) -> Result<f64> {
        self.q
            .ok_or_else(|| PlateError::Config("--Q is required".into()))
    }

    fn require_a(&self) -> Result<f64> {
        self.a
            .ok_or_else(|| PlateError::Config("--a is required".into()))
    }

    /// Exactly one of `--Q` / `--a`.
    fn problem(&self) -> Result<ProblemSpec> {
        match (self.q, self.a) {
            (Some(q), None) => Ok(ProblemSpec::GivenLoad(q)),
            (None, Some(a)) => Ok(ProblemSpec::GivenDeflection(a)),
            _ => Err(PlateError::Config("give exactly one of --Q and --a".into())),
        }
    }

    fn c0_for(&self, problem: ProblemSpec, iterated: bool) -> f64 {
        match (self.c0, problem) {
            (C0Arg::Value(v), _) => v,
            (C0Arg::Auto, ProblemSpec::GivenLoad(q)) => empirical_c0_q(q, iterated),
            (C0Arg::Auto, ProblemSpec::GivenDeflection(a)) => {
                let (c0, validity) = empirical_c0_a(a, iterated);
                if validity == C0Validity::OutOfRange {
                    eprintln!("warning: empirical c0 for series mode was fitted for a <= 5");
                }
                c0
            }
        }
    }

    fn pair_for(&self, problem: ProblemSpec) -> (f64, f64) {
        let c0 = self.c0_for(problem, self.iterate);
        (self.c1.unwrap_or(c0), self.c2.unwrap_or(c0))
    }
}

fn solve(settings: &Settings, problem: ProblemSpec) -> Result<RunReport> {
    let (c1, c2) = settings.pair_for(problem);
    let mut report = match problem {
        ProblemSpec::GivenLoad(q) => solve_given_q_in(
            &GivenLoadProblem {
                q,
                boundary: settings.boundary,
                c1,
                c2,
                mode: settings.mode(),
                stop: settings.stop,
                grid_k: settings.grid_k,
            },
            settings.precision,
        )?,
        ProblemSpec::GivenDeflection(a) => solve_given_a_in(
            &GivenDeflectionProblem {
                a,
                boundary: settings.boundary,
                c1,
                c2,
                mode: settings.mode(),
                stop: settings.stop,
                grid_k: settings.grid_k,
            },
            settings.precision,
        )?,
    };
    if !settings.timing {
        report.strip_timing();
    }
    Ok(report)
}

fn summarize(report: &RunReport) {
    let steps = report
        .records
        .last()
        .map_or(0, |r| match report.config.mode {
            SolveMode::Series { .. } => r.order,
            SolveMode::Iterate { .. } => r.iteration,
        });
    let label = match report.config.mode {
        SolveMode::Series { .. } => "order",
        SolveMode::Iterate { .. } => "iterations",
    };
    println!("status      {}", report.status.as_str());
    println!("{label:<11} {steps}");
    println!("c1, c2      {}, {}", report.config.c1, report.config.c2);
    println!("err         {:e}", report.final_err());
    println!("Q           {}", report.final_q());
    println!("w0_over_h   {}", report.final_w0_over_h());
}

fn exit_for(status: Status) -> i32 {
    if status == Status::Diverged {
        EXIT_DIVERGED
    } else {
        EXIT_OK
    }
}

fn cmd_solve(args: &CommonArgs, given_load: bool) -> Result<i32> {
    let s = Settings::resolve(args)?;
    let problem = if given_load {
        ProblemSpec::GivenLoad(s.require_q()?)
    } else {
        ProblemSpec::GivenDeflection(s.require_a()?)
    };
    let report = solve(&s, problem)?;
    if let Some(path) = &s.out {
        output::emit_report(&report, s.format(), path)?;
    }
    summarize(&report);
    Ok(exit_for(report.status))
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let s = Settings::resolve(&args.common)?;
    let problem = s.problem()?;
    if args.c0_step.is_nan() || args.c0_step <= 0.0 {
        return Err(PlateError::Config("--c0-step must be positive".into()));
    }
    let grid = c0_grid(args.c0_from, args.c0_to, args.c0_step);
    let order = s.order.unwrap_or(DEFAULT_SWEEP_ORDER);
    let table = sweep_c0(problem, &s.boundary, &grid, order, s.grid_k)?;
    if let Some(path) = &s.out {
        let mut out = output::create(path)?;
        match s.format() {
            Format::Csv => output::write_sweep_csv(&mut out, &table)?,
            Format::Json => output::write_json(&mut out, &table)?,
        }
    }
    println!("points      {}", table.rows.len());
    println!("order       {order}");
    match table.argmin {
        Some(c0) => println!("argmin c0   {c0}"),
        None => println!("argmin c0   none"),
    }
    Ok(EXIT_OK)
}

fn cmd_compare_orders(args: &CompareArgs) -> Result<i32> {
    let s = Settings::resolve(&args.common)?;
    let problem = s.problem()?;
    let c0 = s.c0_for(problem, true);
    let mut table = compare_orders(problem, &s.boundary, &args.m_set, s.n, c0, s.stop, s.grid_k)?;
    if !s.timing {
        table
            .rows
            .iter_mut()
            .for_each(|r| r.cumulative_wall_ms = 0.0);
    }
    if let Some(path) = &s.out {
        let mut out = output::create(path)?;
        match s.format() {
            Format::Csv => output::write_orders_csv(&mut out, &table)?,
            Format::Json => output::write_json(&mut out, &table)?,
        }
    }
    println!("c0          {c0}");
    for &(m, status) in &table.statuses {
        match table.iterations_to(m, s.stop.tol) {
            Some(i) => println!("M = {m:<3} {:<10} {i} iterations to tol", status.as_str()),
            None => println!("M = {m:<3} {:<10} tol not reached", status.as_str()),
        }
    }
    Ok(EXIT_OK)
}

fn cmd_compare_baseline(args: &BaselineArgs) -> Result<i32> {
    let s = Settings::resolve(&args.common)?;
    let defaults = BaselineSetup::default();
    let setup = BaselineSetup {
        a: s.a.unwrap_or(defaults.a),
        c0_a: args.c0_a,
        q: s.q.unwrap_or(defaults.q),
        c0_q: args.c0_q,
        theta: args.theta,
        m: s.m,
        n: s.n,
    };
    let mut cmp = compare_baseline(&setup, &s.boundary, s.stop, s.grid_k)?;
    if !s.timing {
        cmp.ham_given_a.strip_timing();
        cmp.ham_given_q.strip_timing();
        cmp.baseline
            .records
            .iter_mut()
            .for_each(|r| r.wall_ms = 0.0);
    }
    if let Some(path) = &s.out {
        let mut out = output::create(path)?;
        match s.format() {
            Format::Csv => output::write_baseline_csv(&mut out, &cmp)?,
            Format::Json => output::write_json(&mut out, &cmp)?,
        }
    }
    let show = |name: &str, status: Status, reached: Option<usize>| match reached {
        Some(i) => println!("{name:<14} {:<10} {i} iterations to tol", status.as_str()),
        None => println!("{name:<14} {:<10} tol not reached", status.as_str()),
    };
    let tol = s.stop.tol;
    show(
        "ham_given_a",
        cmp.ham_given_a.status,
        cmp.ham_given_a.iterations_to(tol),
    );
    show(
        "ham_given_q",
        cmp.ham_given_q.status,
        cmp.ham_given_q.iterations_to(tol),
    );
    show(
        "interpolation",
        cmp.baseline.status,
        cmp.baseline.iterations_to(tol),
    );
    Ok(EXIT_OK)
}

fn cmd_curve(args: &CurveArgs) -> Result<i32> {
    let s = Settings::resolve(&args.common)?;
    if args.samples < 2 {
        return Err(PlateError::Config("--samples must be >= 2".into()));
    }
    let report = solve(&s, s.problem()?)?;
    let phi = crate::polyseries::PolySeries::new(report.phi.clone());
    let curve = deflection_curve(&phi, args.samples, s.boundary.nu)?;
    if let Some(path) = &s.out {
        let mut out = output::create(path)?;
        match s.format() {
            Format::Csv => output::write_curve_csv(&mut out, &curve)?,
            Format::Json => output::write_json(&mut out, &curve)?,
        }
    }
    summarize(&report);
    Ok(exit_for(report.status))
}

fn cmd_tables(args: &TablesArgs) -> Result<i32> {
    let s = Settings::resolve(&args.common)?;
    let dir = s
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("tables"));
    fs::create_dir_all(&dir).map_err(|e| {
        PlateError::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", dir.display()),
        ))
    })?;
    // the extended-precision option matters only for the table 5 residual floor
    let builders: [fn(Precision) -> Result<tables::Table>; 7] = [
        tables::table1,
        tables::table2,
        tables::table3,
        tables::table4,
        tables::table5,
        tables::table6,
        tables::table7,
    ];
    let format = s.format.unwrap_or(Format::Csv);
    for (i, build) in builders.iter().enumerate() {
        let precision = if i == 4 {
            s.precision
        } else {
            Precision::Double
        };
        let table = build(precision)?;
        write_table(&dir, &table, format)?;
        print_table(&table);
    }
    Ok(EXIT_OK)
}

fn write_table(dir: &Path, table: &tables::Table, format: Format) -> Result<()> {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut out = output::create(&dir.join(format!("{}.{ext}", table.name)))?;
    match format {
        Format::Csv => output::write_table_csv(&mut out, table),
        Format::Json => output::write_json(&mut out, table),
    }
}

fn print_table(table: &tables::Table) {
    println!("{}: {}", table.name, table.title);
    println!(
        "  {}",
        table
            .header
            .iter()
            .map(|h| format!("{h:>12}"))
            .collect::<String>()
    );
    for row in &table.rows {
        let cells: String = row
            .iter()
            .map(|v| {
                if *v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e5) {
                    format!("{v:>12.3e}")
                } else {
                    format!("{v:>12.4}")
                }
            })
            .collect();
        println!("  {cells}");
    }
}

/// Parse `argv` (program name first), run one subcommand, return the exit code.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::SolveQ(a) => cmd_solve(a, true),
        Command::SolveA(a) => cmd_solve(a, false),
        Command::SweepC0(a) => cmd_sweep(a),
        Command::CompareOrders(a) => cmd_compare_orders(a),
        Command::CompareBaseline(a) => cmd_compare_baseline(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Tables(a) => cmd_tables(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
