//! Command-line front end: option parsing, the flat config file, and the
//! subcommands. The `hlob` binary only forwards to [`run`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::crossprod::{self, CrossAlgebra, CrossError, PlaneKind};
use crate::hopf::uh::UhLetter;
use crate::report::{CheckResult, Report, Status};
use crate::scalar::Scalar;
use crate::spectral::{self, Controls, PropagatorQuery, Sector, SectorValues, SpectralError};
use crate::state::{self, StateError, Table};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config {path}:{line}: {msg}")]
    Config { path: String, line: usize, msg: String },
    #[error("cannot read config {path}: {source}")]
    ConfigFile { path: String, source: io::Error },
    #[error("invalid value for {key}: {value}")]
    Value { key: String, value: String },
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Cross(#[from] CrossError),
}

impl CliError {
    fn value(key: &str, value: impl Into<String>) -> Self {
        CliError::Value { key: key.into(), value: value.into() }
    }

    /// Bad input is a usage error; anything else is a failed run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::ConfigFile { .. } | CliError::Value { .. } => EXIT_USAGE,
            CliError::Spectral(SpectralError::Domain(..) | SpectralError::Sector(_)) => EXIT_USAGE,
            _ => EXIT_FAIL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        <Format as ValueEnum>::from_str(s, true).map_err(|_| CliError::value("format", s))
    }
}

/// Deformation parameter: symbolic for the exact suites, or a number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum HValue {
    Symbolic,
    Numeric(f64),
}

impl HValue {
    pub fn numeric_or(self, default: f64) -> f64 {
        match self {
            HValue::Symbolic => default,
            HValue::Numeric(h) => h,
        }
    }
}

impl FromStr for HValue {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        if s.eq_ignore_ascii_case("symbolic") {
            return Ok(HValue::Symbolic);
        }
        match s.parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(HValue::Numeric(h)),
            _ => Err(CliError::value("h", s)),
        }
    }
}

fn parse_table(s: &str) -> Result<Table, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "standard" => Ok(Table::Standard),
        "consistent" => Ok(Table::Consistent),
        _ => Err(CliError::value("table", s)),
    }
}

/// Effective settings after merging defaults, the config file and flags.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub h: HValue,
    pub order: u32,
    /// Overrides every numeric tolerance when set.
    pub tol: Option<f64>,
    /// Per-suite tolerances, keyed `suite` or `suite.check`.
    pub suite_tol: BTreeMap<String, f64>,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub table: Table,
    pub samples: usize,
    pub words: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            h: HValue::Symbolic,
            order: 8,
            tol: None,
            suite_tol: BTreeMap::new(),
            seed: 42,
            format: Format::Text,
            out: None,
            table: Table::Standard,
            samples: 20,
            words: 1000,
        }
    }
}

impl RunConfig {
    /// Tolerance for `key` (`suite.check`), falling back to `suite`, then to
    /// `default`. `--tol` wins over both.
    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        if let Some(t) = self.tol {
            return t;
        }
        let suite = key.split('.').next().unwrap_or(key);
        self.suite_tol.get(key).or_else(|| self.suite_tol.get(suite)).copied().unwrap_or(default)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let num = |v: &str| v.parse::<f64>().ok().filter(|t| t.is_finite() && *t >= 0.0);
        match key {
            "h" => self.h = value.parse()?,
            "order" => self.order = value.parse().map_err(|_| CliError::value(key, value))?,
            "tol" => self.tol = Some(num(value).ok_or_else(|| CliError::value(key, value))?),
            "seed" => self.seed = value.parse().map_err(|_| CliError::value(key, value))?,
            "format" => self.format = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value)),
            "table" => self.table = parse_table(value)?,
            "samples" => self.samples = value.parse().map_err(|_| CliError::value(key, value))?,
            "words" => self.words = value.parse().map_err(|_| CliError::value(key, value))?,
            k if k.starts_with("tol.") => {
                let t = num(value).ok_or_else(|| CliError::value(key, value))?;
                self.suite_tol.insert(k["tol.".len()..].to_string(), t);
            }
            _ => return Err(CliError::value("config key", key)),
        }
        Ok(())
    }

    /// Apply a flat `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigFile { path: path.display().to_string(), source })?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::Config { path: origin.to_string(), line: i + 1, msg };
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            self.set(k.trim(), v.trim()).map_err(|e| err(e.to_string()))?;
        }
        Ok(())
    }

    fn apply_flags(&mut self, g: &GlobalFlags) -> Result<(), CliError> {
        if let Some(h) = &g.h {
            self.h = h.parse()?;
        }
        if let Some(o) = g.order {
            self.order = o;
        }
        if let Some(t) = g.tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::value("tol", t.to_string()));
            }
            self.tol = Some(t);
        }
        if let Some(s) = g.seed {
            self.seed = s;
        }
        if let Some(f) = g.format {
            self.format = f;
        }
        if let Some(o) = &g.out {
            self.out = Some(o.clone());
        }
        if let Some(t) = &g.table {
            self.table = parse_table(t)?;
        }
        if let Some(s) = g.samples {
            self.samples = s;
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "hlob", version, about = "Exact and numeric checks for the h-deformed Lobachevsky plane")]
struct Cli {
    #[command(flatten)]
    global: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalFlags {
    /// Flat key = value file; flags win over it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Deformation parameter: "symbolic" or a positive number [default: symbolic;
    /// numeric commands then use their own default]
    #[arg(long, global = true)]
    h: Option<String>,
    /// Series truncation order [default: 8]
    #[arg(long, global = true)]
    order: Option<u32>,
    /// Overrides every numeric tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for sampled words and test functions [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format [default: text]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cross-product rule table: standard or consistent [default: standard]
    #[arg(long, global = true)]
    table: Option<String>,
    /// Number of sampled test functions [default: 20]
    #[arg(long, global = true)]
    samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Replace one base rule by a wrong one (exercises the failure path)
        #[arg(long, hide = true)]
        corrupt_rule: bool,
    },
    /// Propagators over a grid of point pairs (comma-separated lists)
    Propagator {
        #[arg(long, default_value = "all")]
        sector: SectorArg,
        #[arg(long, default_value = "1")]
        dx: String,
        #[arg(long, default_value = "1")]
        y: String,
        #[arg(long, default_value = "2")]
        yprime: String,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
    },
    /// Equal-distance scan: the extended propagator must not vary, sector 0 must
    Invariance {
        #[arg(long, default_value_t = 1.5)]
        coshd: f64,
        #[arg(long, default_value_t = 5)]
        pairs: usize,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
    },
    /// Deformed and undeformed modes on a grid
    Modes {
        #[arg(long, default_value_t = 0.3)]
        k: f64,
        #[arg(long, default_value_t = 2.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0)]
        sector: u8,
        /// "default" or "x0:x1:nx,y0:y1:ny"
        #[arg(long, default_value = "default")]
        grid: String,
    },
    /// Invariant state of sampled test functions, closed form against quadrature
    Integrate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Hopf,
    Crossprod,
    Series,
    Calculus,
    State,
    Spectral,
    /// Every suite except spectral
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SectorArg {
    One(Sector),
    All,
}

impl FromStr for SectorArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            Ok(SectorArg::All)
        } else {
            s.parse::<Sector>().map(SectorArg::One).map_err(|e| e.to_string())
        }
    }
}

impl SectorArg {
    fn sectors(self) -> Vec<Sector> {
        match self {
            SectorArg::One(s) => vec![s],
            SectorArg::All => vec![Sector::Zero, Sector::One, Sector::Extended],
        }
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &cli.global.config {
        cfg.apply_file(p)?;
    }
    cfg.apply_flags(&cli.global)?;
    match cli.command {
        Command::Verify { suite, corrupt_rule } => {
            let rep = verify(suite, &cfg, corrupt_rule)?;
            emit_report(&rep, &cfg)?;
            Ok(if rep.all_passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Propagator { sector, dx, y, yprime, mu } => {
            cmd_propagator(&cfg, sector, &parse_list("dx", &dx)?, &parse_list("y", &y)?, &parse_list("yprime", &yprime)?, mu)
        }
        Command::Invariance { coshd, pairs, mu } => cmd_invariance(&cfg, coshd, pairs, mu),
        Command::Modes { k, kappa, sector, grid } => cmd_modes(&cfg, k, kappa, sector, &grid),
        Command::Integrate => cmd_integrate(&cfg),
    }
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| CliError::value(key, s)))
        .collect()
}

fn cross_algebra(cfg: &RunConfig, corrupt: bool) -> Result<CrossAlgebra, CliError> {
    let (mut rules, quarter) = match cfg.table {
        Table::Standard => (crossprod::derive_base_rules()?, Scalar::ratio(1, 4)),
        Table::Consistent => (crossprod::derive_consistent_base_rules()?, Scalar::zero()),
    };
    if corrupt {
        let wrong = rules.get(UhLetter::Jp, PlaneKind::X).expect("J+ rule on x").scale(&Scalar::int(2));
        rules.set(UhLetter::Jp, PlaneKind::X, wrong);
    }
    Ok(CrossAlgebra::with_relations(rules, quarter))
}

const STATE_HS: [f64; 3] = [0.05, 0.1, 0.5];

/// Run one suite, or all of them.
pub fn verify(suite: Suite, cfg: &RunConfig, corrupt_rule: bool) -> Result<Report, CliError> {
    let mut rep = Report::new();
    let needs_cross = matches!(suite, Suite::Algebra | Suite::Crossprod | Suite::All);
    let alg = if needs_cross { Some(cross_algebra(cfg, corrupt_rule)?) } else { None };
    let run = |s: Suite| suite == s || (suite == Suite::All && s != Suite::Spectral);
    if run(Suite::Algebra) {
        rep.extend(crate::hopf::rmatrix::rmatrix_checks());
        rep.extend(crossprod::verify_confluence(alg.as_ref().expect("built"), cfg.words, 6, cfg.seed));
    }
    if run(Suite::Hopf) {
        rep.extend(crate::hopf::hopf_suite());
    }
    if run(Suite::Crossprod) {
        rep.extend(crossprod::crossprod_suite(alg.as_ref().expect("built")));
    }
    if run(Suite::Series) {
        rep.extend(crate::series::series_suite(cfg.order));
    }
    if run(Suite::Calculus) {
        rep.extend(crate::calculus::calculus_suite(5));
    }
    if run(Suite::State) {
        let hs = match cfg.h {
            HValue::Symbolic => STATE_HS.to_vec(),
            HValue::Numeric(h) => vec![h],
        };
        let tol = state::SuiteTolerances {
            quadrature: cfg.tolerance("state.quadrature", 1e-10),
            invariance: cfg.tolerance("state.invariance", 1e-9),
            stokes: cfg.tolerance("state.stokes", 1e-9),
            symmetry: cfg.tolerance("state.symmetry", 1e-8),
        };
        rep.extend(state::state_suite_with(&hs, cfg.samples, cfg.seed, cfg.table, &tol)?);
    }
    if run(Suite::Spectral) {
        let packets = [spectral::Packet::new(3.0, 0.5), spectral::Packet::new(7.0, 0.5)];
        rep.extend(spectral::orthonormality_check(&packets, cfg.tolerance("spectral.orthonormality", 1e-4))?);
        let tol = spectral::SuiteTolerances {
            additivity: cfg.tolerance("spectral.additivity", 1e-10),
            invariance: cfg.tolerance("spectral.invariance", 1e-5),
            residual: cfg.tolerance("spectral.residual", 1e-3),
            h_independence: cfg.tolerance("spectral.h_independence", 1e-8),
            symmetry: cfg.tolerance("spectral.symmetry", 1e-8),
        };
        rep.extend(spectral::propagator_suite(&Controls::default(), &tol)?);
    }
    Ok(rep)
}

fn open_out(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Write a report in the configured format.
pub fn emit_report(rep: &Report, cfg: &RunConfig) -> Result<(), CliError> {
    let mut out = open_out(cfg)?;
    write_report(rep, cfg.format, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_report<W: Write>(rep: &Report, format: Format, out: &mut W) -> Result<(), CliError> {
    match format {
        Format::Text => write!(out, "{rep}")?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rep)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["suite", "check", "status", "max_error", "witness"])?;
            for r in rep.results() {
                let status = if r.passed() { "pass" } else { "fail" };
                let err = format!("{:e}", r.max_error);
                w.write_record([r.suite.as_str(), r.check.as_str(), status, err.as_str(), r.witness.as_deref().unwrap_or("")])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PropagatorRow {
    sector: &'static str,
    dx: f64,
    y: f64,
    yprime: f64,
    mu: f64,
    h: f64,
    value: Option<f64>,
    value_im: Option<f64>,
    est_error: Option<f64>,
    error: Option<String>,
}

fn propagator_rows(results: &[(PropagatorQuery, Result<SectorValues, SpectralError>)], sectors: &[Sector]) -> Vec<PropagatorRow> {
    let mut rows = Vec::new();
    for (q, r) in results {
        for &s in sectors {
            let (value, value_im, est_error, error) = match r {
                Ok(v) => (Some(v.get(s).re), Some(v.get(s).im), Some(v.error(s)), None),
                Err(e) => (None, None, None, Some(e.to_string())),
            };
            rows.push(PropagatorRow { sector: s.label(), dx: q.dx, y: q.y, yprime: q.yp, mu: q.mu, h: q.h, value, value_im, est_error, error });
        }
    }
    rows
}

fn write_rows<T: Serialize>(rows: &[T], header: &[&str], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
        Format::Csv | Format::Text => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut *out);
            w.write_record(header)?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

const PROPAGATOR_HEADER: [&str; 10] = ["sector", "dx", "y", "yprime", "mu", "h", "value", "value_im", "est_error", "error"];

fn cmd_propagator(cfg: &RunConfig, sector: SectorArg, dxs: &[f64], ys: &[f64], yps: &[f64], mu: f64) -> Result<i32, CliError> {
    let h = cfg.h.numeric_or(0.1);
    let ctl = Controls::default();
    let mut results = Vec::new();
    for &dx in dxs {
        for &y in ys {
            for &yp in yps {
                let q = PropagatorQuery::new(dx, y, yp, mu, h);
                results.push((q, spectral::propagator_all(&q, &ctl)));
            }
        }
    }
    let rows = propagator_rows(&results, &sector.sectors());
    let mut out = open_out(cfg)?;
    write_rows(&rows, &PROPAGATOR_HEADER, cfg.format, &mut out)?;
    out.flush()?;
    // per-row errors are annotated; only a grid with no usable row fails
    Ok(if results.iter().any(|(_, r)| r.is_ok()) { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_invariance(cfg: &RunConfig, coshd: f64, pairs: usize, mu: f64) -> Result<i32, CliError> {
    if !(coshd > 1.0 && coshd.is_finite()) {
        return Err(CliError::value("coshd", coshd.to_string()));
    }
    if pairs < 2 {
        return Err(CliError::value("pairs", pairs.to_string()));
    }
    let h = cfg.h.numeric_or(0.5);
    let tol = cfg.tolerance("spectral.invariance", 1e-5);
    let scan = spectral::invariance_scan(coshd, pairs, mu, h, &Controls::default())?;
    let mut rep = Report::new();
    let ext = scan.spread(Sector::Extended);
    rep.numeric("spectral", format!("extended propagator spread at cosh d = {coshd} ({pairs} pairs)"), ext, tol, None);
    let s0 = scan.spread(Sector::Zero);
    let floor = 10.0 * tol;
    rep.push(CheckResult {
        suite: "spectral".into(),
        check: format!("sector-0 propagator spread at cosh d = {coshd} exceeds {floor:e}"),
        status: if s0 > floor { Status::Pass } else { Status::Fail },
        max_error: s0,
        witness: (s0 <= floor).then(|| format!("spread {s0:e} is within {floor:e}")),
    });
    let mut out = open_out(cfg)?;
    if cfg.format == Format::Csv {
        let results: Vec<_> = scan.queries.iter().copied().zip(scan.values.iter().copied().map(Ok)).collect();
        let rows = propagator_rows(&results, &[Sector::Zero, Sector::One, Sector::Extended]);
        write_rows(&rows, &PROPAGATOR_HEADER, Format::Csv, &mut out)?;
    } else {
        write_report(&rep, cfg.format, &mut out)?;
    }
    out.flush()?;
    Ok(if rep.all_passed() { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct ModeRow {
    x: f64,
    y: f64,
    re: f64,
    im: f64,
    classical_re: f64,
    classical_im: f64,
}

fn parse_axis(s: &str) -> Option<(f64, f64, usize)> {
    let mut it = s.split(':');
    let a = it.next()?.trim().parse().ok()?;
    let b = it.next()?.trim().parse().ok()?;
    let n: usize = it.next()?.trim().parse().ok()?;
    (it.next().is_none() && n >= 1).then_some((a, b, n))
}

fn axis_points((a, b, n): (f64, f64, usize)) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn cmd_modes(cfg: &RunConfig, k: f64, kappa: f64, sector: u8, grid: &str) -> Result<i32, CliError> {
    let h = cfg.h.numeric_or(0.1);
    let (xs, ys) = if grid == "default" {
        (axis_points((-2.0, 2.0, 5)), axis_points((0.25, 4.0, 6)))
    } else {
        let (gx, gy) = grid.split_once(',').ok_or_else(|| CliError::value("grid", grid))?;
        let ax = parse_axis(gx).ok_or_else(|| CliError::value("grid", grid))?;
        let ay = parse_axis(gy).ok_or_else(|| CliError::value("grid", grid))?;
        (axis_points(ax), axis_points(ay))
    };
    let params = spectral::ModeParams::new(k, sector, kappa, h)?;
    let mut rows = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let v = spectral::mode(&params, x, y)?;
            let c = spectral::classical_mode(k, kappa, x, y)?;
            rows.push(ModeRow { x, y, re: v.re, im: v.im, classical_re: c.re, classical_im: c.im });
        }
    }
    let mut out = open_out(cfg)?;
    write_rows(&rows, &["x", "y", "re", "im", "classical_re", "classical_im"], cfg.format, &mut out)?;
    out.flush()?;
    Ok(EXIT_PASS)
}

fn cmd_integrate(cfg: &RunConfig) -> Result<i32, CliError> {
    let family = state::random_family(cfg.samples, cfg.seed);
    let rows = state::quadrature_comparisons(&family)?;
    let rep = state::summarize(&rows, cfg.tolerance("state.quadrature", 1e-10));
    let mut out = open_out(cfg)?;
    if cfg.format == Format::Csv {
        state::write_csv(&rows, &mut out)?;
    } else {
        write_report(&rep, cfg.format, &mut out)?;
    }
    out.flush()?;
    Ok(if rep.all_passed() { EXIT_PASS } else { EXIT_FAIL })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_and_flags() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\nseed = 7\ntol.state = 1e-6\nformat=json\n", "test").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.tolerance("state.stokes", 1.0), 1e-6);
        assert_eq!(cfg.tolerance("spectral.residual", 1e-3), 1e-3);
        cfg.tol = Some(0.5);
        assert_eq!(cfg.tolerance("state.stokes", 1.0), 0.5);
    }

    #[test]
    fn config_errors_name_the_line() {
        let mut cfg = RunConfig::default();
        let e = cfg.apply_text("seed = 1\nbogus\n", "f").unwrap_err();
        assert!(matches!(e, CliError::Config { line: 2, .. }), "{e}");
        assert_eq!(e.exit_code(), EXIT_USAGE);
        assert!(cfg.apply_text("colour = red", "f").is_err());
        assert!(cfg.apply_text("h = -1", "f").is_err());
    }

    #[test]
    fn h_values() {
        assert_eq!("symbolic".parse::<HValue>().unwrap(), HValue::Symbolic);
        assert_eq!("0.25".parse::<HValue>().unwrap(), HValue::Numeric(0.25));
        assert!("0".parse::<HValue>().is_err());
    }

    #[test]
    fn grid_axes() {
        assert_eq!(axis_points(parse_axis("0:1:3").unwrap()), vec![0.0, 0.5, 1.0]);
        assert!(parse_axis("0:1").is_none());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["hlob", "verify", "nonsense"]), EXIT_USAGE);
        assert_eq!(run(["hlob", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["hlob", "--format", "json", "modes", "--kappa=-1"]), EXIT_USAGE);
    }
}
