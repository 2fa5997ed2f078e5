//! `valab` command line: Berg and kernel tables, verification suites.
//!
//! Defaults:
//!
//! | flag     | default | used by        |
//! |----------|---------|----------------|
//! | --grid   | 201     | berg, kernel   |
//! | --kmax   | 80      | kernel         |
//! | --nmc    | 100000  | verify         |
//! | --seed   | 1       | verify         |
//! | --format | csv / json (verify) | all |
//!
//! Exit codes: 0 success, 1 verification failure or numeric error, 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use valab::berg::{berg_derivs, berg_ode_residual, BergFunction};
use valab::kernel::{
    rho, rho_closed_form, rho_ode_residual, rho_positivity_certificate, rho_spectral, KernelProfile, KernelRoute,
    PositivityReport,
};
use valab::suites::{run_suite, suite_names, SuiteConfig};
use valab::Error;

const DEFAULT_GRID: usize = 201;
const DEFAULT_KMAX: usize = 80;
const DEFAULT_SEED: u64 = 1;
/// Berg and kernel grids span [−T_EDGE, T_EDGE].
const T_EDGE: f64 = 0.99;
/// Route discrepancies are reported on |t| ≤ ROUTE_EDGE.
const ROUTE_EDGE: f64 = 0.9;

#[derive(Parser)]
#[command(name = "valab", version, about = "Berg functions, Lefschetz kernels and valuation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate g_j, g_j', g_j'' and the ODE residual.
    Berg {
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Tabulate ρ_{n,i} along all routes; writes a JSON sidecar.
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: usize,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(long)]
        suite: String,
        /// Ambient dimension, for suites that take one.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = valab::flags::DEFAULT_NMC)]
        nmc: usize,
        #[arg(long, env = "VALAB_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Replaces the suite's deterministic tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Contract(_) | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            Error::Numeric(_) => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// A table of named float columns.
#[derive(Serialize)]
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct KernelSidecar {
    n: usize,
    i: usize,
    kmax: usize,
    /// ρ(−1) and lim (1−t²)^{(n−2)/2} ρ(t) at t → 1.
    limits: Limits,
    positivity: PositivityReport,
    route_discrepancy: RouteGap,
}

#[derive(Serialize)]
struct Limits {
    minus_one: f64,
    plus_one_scaled: f64,
}

#[derive(Serialize)]
struct RouteGap {
    t_max: f64,
    closed_form: f64,
    spectral: f64,
}

#[derive(Serialize)]
struct KernelJson<'a> {
    table: &'a Table,
    sidecar: &'a KernelSidecar,
}

fn grid(m: usize, edge: f64) -> Vec<f64> {
    (0..m).map(|k| -edge + 2.0 * edge * k as f64 / (m - 1) as f64).collect()
}

fn fmt(v: f64) -> String {
    format!("{v:?}")
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::Runtime(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Runtime(e.to_string()))
}

fn json_text<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Runtime(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit_table(t: &Table, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let text = match format {
        Format::Csv => csv_text(&t.columns, &t.rows.iter().map(|r| r.iter().map(|&v| fmt(v)).collect()).collect::<Vec<_>>())?,
        Format::Json => json_text(t)?,
    };
    write_out(out, &text)
}

fn check_grid(m: usize) -> Result<(), Failure> {
    if m < 2 {
        return Err(Failure::Usage(format!("--grid needs at least 2 points, got {m}")));
    }
    Ok(())
}

fn cmd_berg(j: usize, a: &TableArgs) -> Result<bool, Failure> {
    BergFunction::new(j)?;
    check_grid(a.grid)?;
    let mut rows = Vec::with_capacity(a.grid);
    for t in grid(a.grid, T_EDGE) {
        let d = berg_derivs(j, t, 2)?;
        rows.push(vec![t, d[0], d[1], d[2], berg_ode_residual(j, t)?]);
    }
    let t = Table { columns: vec!["t", "g", "g'", "g''", "ode_residual"], rows };
    emit_table(&t, a.format, a.out.as_deref())?;
    Ok(true)
}

fn cmd_kernel(n: usize, i: usize, kmax: usize, a: &TableArgs) -> Result<bool, Failure> {
    KernelProfile::new(n, i, KernelRoute::Recursion)?;
    check_grid(a.grid)?;
    if kmax == 0 {
        return Err(Failure::Usage("--kmax must be positive".into()));
    }
    let mut rows = Vec::with_capacity(a.grid);
    for t in grid(a.grid, T_EDGE) {
        rows.push(vec![t, rho(n, i, t, 0)?, rho_closed_form(n, i, t)?, rho_spectral(n, i, t, kmax)?, rho_ode_residual(n, i, t)?]);
    }
    let (mut closed, mut spectral) = (0.0f64, 0.0f64);
    for t in grid(181, ROUTE_EDGE) {
        let r = rho(n, i, t, 0)?;
        closed = closed.max((r - rho_closed_form(n, i, t)?).abs());
        spectral = spectral.max((r - rho_spectral(n, i, t, kmax)?).abs());
    }
    let positivity = rho_positivity_certificate(n, i, 10_000)?;
    let sidecar = KernelSidecar {
        n,
        i,
        kmax,
        limits: Limits { minus_one: positivity.endpoint_limits.0, plus_one_scaled: positivity.endpoint_limits.1 },
        positivity,
        route_discrepancy: RouteGap { t_max: ROUTE_EDGE, closed_form: closed, spectral },
    };
    let table = Table { columns: vec!["t", "rho_recursion", "rho_closed", "rho_spectral", "ode_residual"], rows };
    match a.format {
        Format::Json => write_out(a.out.as_deref(), &json_text(&KernelJson { table: &table, sidecar: &sidecar })?)?,
        Format::Csv => {
            emit_table(&table, Format::Csv, a.out.as_deref())?;
            let side = json_text(&sidecar)?;
            match &a.out {
                Some(p) => fs::write(sidecar_path(p), side)?,
                None => io::stderr().lock().write_all(side.as_bytes())?,
            }
        }
    }
    Ok(true)
}

/// `table.csv` → `table.csv.json`.
fn sidecar_path(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn cmd_verify(suite: &str, cfg: SuiteConfig, format: Format, out: Option<&Path>) -> Result<bool, Failure> {
    if !suite_names().contains(&suite) {
        return Err(Failure::Usage(format!("unknown suite '{suite}'; known: {}", suite_names().join(", "))));
    }
    if cfg.n_mc == 0 {
        return Err(Failure::Usage("--nmc must be positive".into()));
    }
    let report = run_suite(suite, &cfg)?;
    let text = match format {
        Format::Json => json_text(&report)?,
        Format::Csv => csv_text(
            &["name", "lhs", "rhs", "sigma", "abs_err", "rel_err", "pass"],
            &report
                .cases
                .iter()
                .map(|c| vec![c.name.clone(), fmt(c.lhs), fmt(c.rhs), fmt(c.sigma), fmt(c.abs_err), fmt(c.rel_err), c.pass.to_string()])
                .collect::<Vec<_>>(),
        )?,
    };
    write_out(out, &text)?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Berg { j, table } => cmd_berg(*j, table),
        Command::Kernel { n, i, kmax, table } => cmd_kernel(*n, *i, *kmax, table),
        Command::Verify { suite, n, nmc, seed, tol, out, format } => {
            cmd_verify(suite, SuiteConfig { n: *n, n_mc: *nmc, seed: *seed, tol: *tol }, *format, out.as_deref())
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
