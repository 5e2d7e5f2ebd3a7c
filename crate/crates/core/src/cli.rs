//! Command-line front end: bounds, scans, the parametrized curve, state
//! samples and the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analytic::{self, Analytic};
use crate::catalog::{catalog_list, DivergenceSpec, Family};
use crate::engine::{self, ConvexBound, LambdaGrid};
use crate::error::Error;
use crate::quantum::{self, RenyiVariant};
use crate::verify::{self, Check, SuiteConfig, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "pinsker", version, about = "Optimal Pinsker-type bounds between divergences and the trace distance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the divergence families.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Convex bound B(T) at one trace distance.
    Bound(BoundArgs),
    /// Optimal linear bound L(lambda) at one slope or over a slope range.
    Linear(LinearArgs),
    /// Convex bound over a range of trace distances.
    Scan(ScanArgs),
    /// Parametrized relative-entropy curve (t, T, D) on a log grid.
    Curve(CurveArgs),
    /// Sampled (T, D) points from random state pairs.
    Sample(SampleArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Petz,
    Sandwiched,
}

impl From<Variant> for RenyiVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Petz => RenyiVariant::Petz,
            Variant::Sandwiched => RenyiVariant::Sandwiched,
        }
    }
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    /// Family name, as listed by `catalog`.
    #[arg(long)]
    pub divergence: String,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

impl DivergenceArgs {
    fn spec(&self) -> Result<DivergenceSpec, CliError> {
        let family = Family::from_name(&self.divergence)
            .ok_or_else(|| CliError::Usage(format!("unknown divergence '{}'", self.divergence)))?;
        Ok(DivergenceSpec::from_parts(family, self.alpha, self.epsilon)?)
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub divergence: DivergenceArgs,
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct LinearArgs {
    #[command(flatten)]
    pub divergence: DivergenceArgs,
    /// Single slope; overrides the range flags.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 101)]
    pub lambda_steps: usize,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub divergence: DivergenceArgs,
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 0.99)]
    pub t_max: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 1e-4)]
    pub t_min: f64,
    #[arg(long, default_value_t = 50.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub divergence: DivergenceArgs,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Quantum extension for Rényi-type families.
    #[arg(long, value_enum, default_value_t = Variant::Sandwiched)]
    pub variant: Variant,
    /// Jointly diagonal pairs instead of Ginibre pairs.
    #[arg(long)]
    pub diagonal: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated families, `name` or `name:parameter`, e.g.
    /// `max,renyi:1.5,smoothed-max:0.2`.
    #[arg(long)]
    pub families: Option<String>,
    /// Comma-separated checks: scatter, dpi, consistency, smoothing.
    #[arg(long)]
    pub checks: Option<String>,
    /// Comma-separated dimensions.
    #[arg(long)]
    pub dims: Option<String>,
    /// Pairs per dimension.
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replaces every tolerance with this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub t_steps: Option<usize>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_steps: Option<usize>,
    /// Also write the full report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Format of the file written with `--out`.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot serialize output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Library(_) => 2,
            CliError::Io { .. } | CliError::Json(_) | CliError::Csv(_) => 3,
        }
    }
}

/// Floats with 17 significant digits, `inf` for infinities.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = if v == 0.0 { 0 } else { v.abs().log10().floor() as i32 };
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, v)
    } else {
        format!("{v:.16e}")
    }
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(fmt_f64(v)))
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("records are UTF-8"))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, path: Option<&Path>, contents: &str) -> Result<(), CliError> {
        match path {
            Some(p) => write_atomic(p, contents),
            None => self
                .out
                .write_all(contents.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
        }
    }

    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.err, "{msg}");
    }
}

fn method_name(analytic: bool) -> &'static str {
    if analytic {
        "analytic"
    } else {
        "numeric"
    }
}

fn table(format: Format, header: &[&str], rows: Vec<Vec<f64>>, extra: Value) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let records: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(header.iter().zip(r).map(|(h, v)| (h.to_string(), num(*v))).collect()))
                .collect();
            let mut doc = extra;
            doc["rows"] = Value::Array(records);
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv | Format::Text => {
            let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| fmt_f64(*v)).collect()).collect();
            csv(header, &rows)
        }
    }
}

fn cmd_catalog(format: Format, io: &mut Io) -> Result<(), CliError> {
    let entries = catalog_list();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&entries)? + "\n",
        Format::Csv => {
            let rows = entries
                .iter()
                .map(|e| {
                    let analytic = serde_json::to_value(e.analytic)?.as_str().unwrap_or_default().to_string();
                    Ok(vec![e.name.into(), e.parameters.join(" "), analytic, e.note.into()])
                })
                .collect::<Result<Vec<Vec<String>>, CliError>>()?;
            csv(&["name", "parameters", "analytic", "note"], &rows)?
        }
        Format::Text => entries
            .iter()
            .map(|e| {
                let params = if e.parameters.is_empty() { "-".to_string() } else { e.parameters.join(", ") };
                format!("{:<14} {:<9} {}\n{:<25}{}\n", e.name, params, e.title, "", e.note)
            })
            .collect(),
    };
    io.emit(None, &text)
}

fn cmd_bound(args: &BoundArgs, io: &mut Io) -> Result<(), CliError> {
    let spec = args.divergence.spec()?;
    let t = args.t;
    if !(0.0..=1.0).contains(&t) {
        return Err(CliError::Usage(format!("--t must lie in [0, 1], got {t}")));
    }
    let closed = analytic::convex_bound_analytic(&spec, t)?;
    let (value, used_analytic) = match (args.method, closed) {
        (Method::Analytic, Analytic::NotAvailable) => {
            return Err(CliError::Usage(format!("{spec} has no closed form at T = {t}; use --method numeric")))
        }
        (Method::Analytic | Method::Auto, Analytic::Value(v)) => (v, true),
        _ => (engine::pointwise_bound(&spec, t)?, false),
    };
    let method = method_name(used_analytic);
    let text = match args.format {
        Format::Text => format!("{}\nmethod: {method}\n", fmt_f64(value)),
        Format::Csv => csv(&["T", "bound", "method"], &[vec![fmt_f64(t), fmt_f64(value), method.into()]])?,
        Format::Json => {
            serde_json::to_string_pretty(
                &json!({"divergence": spec, "T": num(t), "bound": num(value), "method": method}),
            )? + "\n"
        }
    };
    io.emit(None, &text)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect()
}

/// One row `lambda, L, r*, s*`. For the smoothed max divergence the
/// minimizer columns are those of the unsmoothed max divergence.
fn linear_row(
    spec: &DivergenceSpec,
    lambda: f64,
    analytic: bool,
    base: Option<&ConvexBound>,
) -> Result<Vec<f64>, CliError> {
    let smoothed = match spec.canonical() {
        DivergenceSpec::SmoothedMax { epsilon } => Some(epsilon),
        _ => None,
    };
    let minimizer_spec = if smoothed.is_some() { DivergenceSpec::Max } else { *spec };
    let (value, pair) = if analytic {
        let v = analytic::linear_bound_analytic(spec, lambda)?.value().expect("availability checked").value;
        let p = analytic::linear_bound_analytic(&minimizer_spec, lambda)?.value().and_then(|p| p.minimizer);
        (v, p)
    } else {
        let m = engine::linear_bound_numeric(&minimizer_spec, lambda)?;
        let v = match (smoothed, base) {
            (Some(epsilon), Some(base)) => engine::smooth_linear(base, epsilon, lambda)?,
            _ => m.value,
        };
        (v, Some(m.pair))
    };
    let (r, s) = pair.map_or((f64::NAN, f64::NAN), |p| (p.r(), p.s()));
    Ok(vec![lambda, value, r, s])
}

fn cmd_linear(args: &LinearArgs, io: &mut Io) -> Result<(), CliError> {
    let spec = args.divergence.spec()?;
    let lambdas = match args.lambda {
        Some(l) => vec![l],
        None => {
            if !(args.lambda_min >= 0.0 && args.lambda_min < args.lambda_max) || args.lambda_steps < 2 {
                return Err(CliError::Usage("need 0 <= --lambda-min < --lambda-max and --lambda-steps >= 2".into()));
            }
            linspace(args.lambda_min, args.lambda_max, args.lambda_steps)
        }
    };
    if let Some(bad) = lambdas.iter().find(|l| !(**l >= 0.0) || l.is_infinite()) {
        return Err(CliError::Usage(format!("slopes must be finite and nonnegative, got {bad}")));
    }
    let available = lambdas
        .iter()
        .map(|&l| Ok(analytic::linear_bound_analytic(&spec, l)?.is_available()))
        .collect::<Result<Vec<bool>, CliError>>()?
        .into_iter()
        .all(|a| a);
    let use_analytic = match args.method {
        Method::Analytic if !available => {
            return Err(CliError::Usage(format!(
                "{spec} has no closed-form linear bound on this range; use --method numeric"
            )))
        }
        Method::Analytic => true,
        Method::Numeric => false,
        Method::Auto => available,
    };
    let base = match (use_analytic, spec.canonical()) {
        (false, DivergenceSpec::SmoothedMax { .. }) => Some(engine::numeric_convex_bound(&DivergenceSpec::Max)?),
        _ => None,
    };
    let rows =
        lambdas.iter().map(|&l| linear_row(&spec, l, use_analytic, base.as_ref())).collect::<Result<Vec<_>, _>>()?;
    let method = method_name(use_analytic);
    io.note(&format!("method: {method}"));
    let text =
        table(args.format, &["lambda", "L", "r_star", "s_star"], rows, json!({"divergence": spec, "method": method}))?;
    io.emit(args.out.as_deref(), &text)
}

/// Scan values, all from one method.
pub fn scan_values(spec: &DivergenceSpec, ts: &[f64], method: Method) -> Result<(Vec<f64>, &'static str), CliError> {
    let closed: Vec<Analytic<f64>> =
        ts.iter().map(|&t| analytic::convex_bound_analytic(spec, t)).collect::<Result<_, _>>()?;
    let available = closed.iter().all(Analytic::is_available);
    let use_analytic = match method {
        Method::Analytic if !available => {
            return Err(CliError::Usage(format!("{spec} has no closed form on the whole scan; use --method numeric")))
        }
        Method::Analytic => true,
        Method::Numeric => false,
        Method::Auto => available,
    };
    if use_analytic {
        return Ok((closed.into_iter().map(|c| c.value().expect("checked")).collect(), "analytic"));
    }
    let chain = engine::numeric_convex_bound(spec)?;
    let values = ts
        .iter()
        .map(|&t| if t >= 1.0 { engine::pointwise_bound(spec, t) } else { Ok(chain.eval(t)) })
        .collect::<Result<Vec<f64>, Error>>()?;
    Ok((values, "numeric"))
}

fn cmd_scan(args: &ScanArgs, io: &mut Io) -> Result<(), CliError> {
    let spec = args.divergence.spec()?;
    if !(0.0 <= args.t_min && args.t_min < args.t_max && args.t_max <= 1.0) {
        return Err(CliError::Usage("need 0 <= --t-min < --t-max <= 1".into()));
    }
    if args.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    let ts = linspace(args.t_min, args.t_max, args.steps);
    let (values, method) = scan_values(&spec, &ts, args.method)?;
    io.note(&format!("method: {method}"));
    let rows = ts.iter().zip(&values).map(|(t, b)| vec![*t, *b]).collect();
    let text = table(args.format, &["T", "bound"], rows, json!({"divergence": spec, "method": method}))?;
    io.emit(args.out.as_deref(), &text)
}

fn cmd_curve(args: &CurveArgs, io: &mut Io) -> Result<(), CliError> {
    if !(args.t_min > 0.0 && args.t_min < args.t_max && args.t_max.is_finite()) || args.steps < 2 {
        return Err(CliError::Usage("need 0 < --t-min < --t-max and --steps >= 2".into()));
    }
    let (a, b) = (args.t_min.ln(), args.t_max.ln());
    let last = args.steps - 1;
    let rows = linspace(a, b, args.steps)
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            let t = match k {
                0 => args.t_min,
                k if k == last => args.t_max,
                _ => x.exp(),
            };
            let p = analytic::umegaki_parametrized(t);
            vec![p.t, p.t_dist, p.d]
        })
        .collect();
    let text = table(args.format, &["t", "T", "D"], rows, json!({"divergence": DivergenceSpec::Umegaki}))?;
    io.emit(args.out.as_deref(), &text)
}

fn cmd_sample(args: &SampleArgs, io: &mut Io) -> Result<(), CliError> {
    let spec = args.divergence.spec()?;
    if args.dim < 2 || args.n == 0 {
        return Err(CliError::Usage("need --dim >= 2 and --n >= 1".into()));
    }
    let samples = quantum::scatter(&spec, args.variant.into(), args.dim, args.n, args.seed, args.diagonal)?;
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&samples)? + "\n",
        _ => {
            let rows: Vec<Vec<String>> = samples.iter().map(|s| vec![fmt_f64(s.t), fmt_f64(s.d.value())]).collect();
            csv(&["T", "D"], &rows)?
        }
    };
    io.emit(args.out.as_deref(), &text)
}

/// `name` or `name:parameter`; the parameter is `alpha`, or `epsilon` for the
/// smoothed max divergence.
pub fn parse_family(s: &str) -> Result<DivergenceSpec, CliError> {
    let (name, param) = match s.split_once(':') {
        Some((n, p)) => {
            let v = p.parse::<f64>().map_err(|_| CliError::Usage(format!("bad parameter in '{s}'")))?;
            (n, Some(v))
        }
        None => (s, None),
    };
    let family =
        Family::from_name(name.trim()).ok_or_else(|| CliError::Usage(format!("unknown divergence '{name}'")))?;
    let (alpha, epsilon) = if family == Family::SmoothedMax { (None, param) } else { (param, None) };
    Ok(DivergenceSpec::from_parts(family, alpha, epsilon)?)
}

fn split_list<T>(s: &str, parse: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(parse).collect()
}

fn suite_config(args: &VerifyArgs) -> Result<SuiteConfig, CliError> {
    let mut cfg = SuiteConfig { seed: args.seed, ..SuiteConfig::default() };
    if let Some(f) = &args.families {
        cfg.families = split_list(f, parse_family)?;
    }
    if let Some(c) = &args.checks {
        cfg.checks =
            split_list(c, |x| Check::from_name(x).ok_or_else(|| CliError::Usage(format!("unknown check '{x}'"))))?;
    }
    if let Some(d) = &args.dims {
        cfg.dims = split_list(d, |x| x.parse().map_err(|_| CliError::Usage(format!("bad dimension '{x}'"))))?;
    }
    if let Some(p) = args.pairs {
        cfg.pairs_per_dim = p;
    }
    if let Some(tol) = args.tol {
        cfg.tolerances = Tolerances::uniform(tol);
    }
    if let Some(n) = args.t_steps {
        cfg.t_grid_size = n;
    }
    if args.lambda_min.is_some() || args.lambda_max.is_some() || args.lambda_steps.is_some() {
        let LambdaGrid::Geometric { min, max, n } = LambdaGrid::default() else { unreachable!() };
        cfg.lambda_grid = LambdaGrid::Geometric {
            min: args.lambda_min.unwrap_or(min),
            max: args.lambda_max.unwrap_or(max),
            n: args.lambda_steps.unwrap_or(n),
        };
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

#[derive(Serialize)]
struct FailureLine<'a> {
    item: String,
    counterexample: Option<&'a verify::Counterexample>,
}

fn cmd_verify(args: &VerifyArgs, io: &mut Io) -> Result<i32, CliError> {
    let cfg = suite_config(args)?;
    let report = verify::run_suite(&cfg)?;
    io.emit(None, &report.to_text())?;
    if let Some(path) = &args.out {
        let text = match args.format {
            Format::Json => serde_json::to_string_pretty(&report)? + "\n",
            Format::Text => report.to_text(),
            Format::Csv => {
                let rows: Vec<Vec<String>> = report
                    .sections
                    .iter()
                    .flat_map(|s| &s.items)
                    .map(|i| {
                        vec![
                            i.item.check.name().to_string(),
                            i.label.clone(),
                            i.evaluated.to_string(),
                            i.violations.to_string(),
                            fmt_f64(i.worst_margin),
                            fmt_f64(i.item.tolerance),
                            (if i.passed { "pass" } else { "fail" }).to_string(),
                        ]
                    })
                    .collect();
                csv(&["check", "item", "evaluated", "violations", "worst_margin", "tolerance", "status"], &rows)?
            }
        };
        write_atomic(path, &text)?;
    }
    if report.passed {
        return Ok(0);
    }
    for f in report.failures() {
        let line = FailureLine { item: f.label.clone(), counterexample: f.counterexample.as_ref() };
        io.note(&format!("failed: {}", serde_json::to_string(&line)?));
    }
    Ok(1)
}

/// Runs one command; returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut io = Io { out, err };
    let result = match &cli.command {
        Command::Catalog { format } => cmd_catalog(*format, &mut io).map(|_| 0),
        Command::Bound(a) => cmd_bound(a, &mut io).map(|_| 0),
        Command::Linear(a) => cmd_linear(a, &mut io).map(|_| 0),
        Command::Scan(a) => cmd_scan(a, &mut io).map(|_| 0),
        Command::Curve(a) => cmd_curve(a, &mut io).map(|_| 0),
        Command::Sample(a) => cmd_sample(a, &mut io).map(|_| 0),
        Command::Verify(a) => cmd_verify(a, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            io.note(&format!("error: {e}"));
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and runs. Usage errors exit with 2.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["pinsker"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000");
        assert_eq!(fmt_f64(0.1), "0.10000000000000001");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(1e-7), "9.9999999999999995e-8");
        for v in [0.3, 2.0f64.sqrt(), 123456.789, 1e-300, 6.02e23] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn bound_examples() {
        let (code, out, _) = run_args(&["bound", "--divergence", "max", "--t", "0.5"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("1.0000000000000000\nmethod: analytic"), "{out}");
        let (_, out, _) = run_args(&["bound", "--divergence", "smoothed-max", "--epsilon", "0.2", "--t", "0.1"]);
        assert!(out.starts_with("0.0000000000000000"), "{out}");
        let (_, out, _) = run_args(&["bound", "--divergence", "max", "--t", "1"]);
        assert!(out.starts_with("inf"), "{out}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["bound", "--divergence", "nope", "--t", "0.5"]).0, 2);
        assert_eq!(run_args(&["bound", "--divergence", "max", "--t", "1.5"]).0, 2);
        assert_eq!(run_args(&["bound", "--divergence", "renyi", "--t", "0.5"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["linear", "--divergence", "smoothed-max", "--epsilon", "0.2", "--lambda", "100"]).0, 2);
    }

    #[test]
    fn parse_family_forms() {
        assert_eq!(parse_family("max").unwrap(), DivergenceSpec::Max);
        assert_eq!(parse_family("renyi:1.5").unwrap(), DivergenceSpec::Renyi { alpha: 1.5 });
        assert_eq!(parse_family("smoothed-max:0.2").unwrap(), DivergenceSpec::SmoothedMax { epsilon: 0.2 });
        assert!(parse_family("renyi").is_err());
        assert!(parse_family("renyi:x").is_err());
    }
}
