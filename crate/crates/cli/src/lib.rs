//! Command-line front end: parses flags, runs checks and harness suites, and
//! writes JSON or CSV reports.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use weylcover::checker::{fiber, run_conditions, sample_regular_point, ConditionOptions, ConditionReport, FiberReport};
use weylcover::harness::{density_histogram, verify_integration_all, IntegrationVerdict, HistogramComparison, TestFunction};
use weylcover::numeric::{DenseMatrix, RngStream};
use weylcover::registry::{Catalog, EnsembleClass, EnsembleInstance};
use weylcover::{Error, Tolerances};

/// Environment variable capping the worker count; `0` or unset means automatic.
pub const THREADS_ENV: &str = "WEYLCOVER_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "weylcover", version, about = "Covering-map and integration-formula checks for matrix ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the instance catalog.
    List(Flags),
    /// Run every condition check on random regular probes.
    Verify(Flags),
    /// Enumerate the fiber over `--point` or a seeded random regular point.
    Fiber(Flags),
    /// Compare both sides of the integration formula for each test function.
    Integrate(Flags),
    /// Histogram the canonical slice point against its expected density.
    Density(Flags),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::List(_) => "list",
            Command::Verify(_) => "verify",
            Command::Fiber(_) => "fiber",
            Command::Integrate(_) => "integrate",
            Command::Density(_) => "density",
        }
    }

    fn flags(&self) -> &Flags {
        match self {
            Command::List(f) | Command::Verify(f) | Command::Fiber(f) | Command::Integrate(f) | Command::Density(f) => f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Instance ids, repeatable or comma-separated. Parentheses are optional.
    #[arg(long = "instance", value_delimiter = ',')]
    pub instances: Vec<String>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub probes: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    /// Threshold override as `name=value`, e.g. `structural=1e-9`.
    #[arg(long = "tol", value_parser = parse_override)]
    pub tol: Vec<(String, String)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Matrix JSON file for `fiber`.
    #[arg(long)]
    pub point: Option<PathBuf>,
    /// Omit the generation time so identical runs give identical bytes.
    #[arg(long)]
    pub no_timestamp: bool,
}

fn parse_override(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected name=value, got `{s}`"))
}

/// The resolved configuration, embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub instances: Vec<String>,
    pub seed: u64,
    pub probes: usize,
    pub samples: usize,
    pub bins: usize,
    pub tolerances: Tolerances,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorEntry {
    pub instance_id: String,
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct Report<T> {
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub results: Vec<T>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<ErrorEntry>,
    pub pass: bool,
}

/// Exit code and report bytes of a finished command.
struct Outcome {
    code: i32,
    bytes: Vec<u8>,
}

/// A failure that ends the run before a report is written.
#[derive(Debug)]
struct Abort {
    code: i32,
    message: String,
}

impl Abort {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        Self { code: exit_code(&e), message: e.to_string() }
    }
}

/// Exit code for an error that escapes a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_numerical() => EXIT_NUMERICAL,
        Error::UnknownInstance(_)
        | Error::Parse(_)
        | Error::Shape(_)
        | Error::NotEligible(..)
        | Error::InsufficientSamples(_)
        | Error::NotSelfAdjoint(_)
        | Error::NotUnitary(_)
        | Error::NotPositiveDefinite(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn is_numerical_kind(kind: &str) -> bool {
    matches!(kind, "NoConvergence" | "RejectionOverflow")
}

/// Worker count from [`THREADS_ENV`]; `None` means automatic.
pub fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(format!("{THREADS_ENV} must be a nonnegative integer, got `{v}`")),
        },
    }
}

/// Entry point for the binary: reads the process arguments and environment.
pub fn main_entry() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    let threads = match threads_from_env() {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    run_with(&args, Catalog::shared(), threads, &mut stdout, &mut stderr)
}

/// Parses `args` (including the program name) and runs the command against
/// `catalog` on a pool of `threads` workers.
pub fn run_with(
    args: &[String],
    catalog: &Catalog,
    threads: Option<usize>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_PASS { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker pool: {e}");
            return EXIT_NUMERICAL;
        }
    };
    let flags = cli.command.flags();
    match pool.install(|| dispatch(&cli.command, catalog)).and_then(|o| emit(flags, &o.bytes, stdout).map(|_| o.code)) {
        Ok(code) => code,
        Err(a) => {
            let _ = writeln!(stderr, "error: {}", a.message);
            a.code
        }
    }
}

fn dispatch(command: &Command, catalog: &Catalog) -> Result<Outcome, Abort> {
    let flags = command.flags();
    let mut tolerances = Tolerances::default();
    for (k, v) in &flags.tol {
        tolerances.set(k, v)?;
    }
    if let Command::List(_) = command {
        return list(catalog, flags);
    }
    let instances = resolve(command, catalog, flags)?;
    let config = RunConfig {
        command: command.name(),
        instances: instances.iter().map(|i| i.id.clone()).collect(),
        seed: flags.seed,
        probes: flags.probes,
        samples: flags.samples,
        bins: flags.bins,
        tolerances,
        format: flags.format,
        out: flags.out.clone(),
        point: flags.point.clone(),
    };
    match command {
        Command::Verify(_) => verify(&instances, config, flags),
        Command::Fiber(_) => fiber_cmd(&instances, config, flags),
        Command::Integrate(_) => integrate(&instances, config, flags),
        Command::Density(_) => density(&instances, config, flags),
        Command::List(_) => unreachable!(),
    }
}

/// Instances named on the command line, or the command's default set.
fn resolve<'a>(command: &Command, catalog: &'a Catalog, flags: &Flags) -> Result<Vec<&'a EnsembleInstance>, Abort> {
    if !flags.instances.is_empty() {
        return flags.instances.iter().map(|id| catalog.lookup(id).map_err(Abort::from)).collect();
    }
    Ok(match command {
        Command::Fiber(_) => return Err(Abort::usage("fiber needs exactly one --instance")),
        Command::Integrate(_) => catalog.iter().filter(|i| i.harness_eligible).collect(),
        Command::Density(_) => catalog.iter().filter(|i| i.harness_eligible && i.histogram_layout().is_some()).collect(),
        _ => catalog.iter().collect(),
    })
}

fn emit(flags: &Flags, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Abort> {
    match &flags.out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Abort { code: EXIT_USAGE, message: format!("cannot write {}: {e}", path.display()) }),
        None => stdout
            .write_all(bytes)
            .map_err(|e| Abort { code: EXIT_USAGE, message: format!("cannot write report: {e}") }),
    }
}

fn timestamp(flags: &Flags) -> Option<u64> {
    if flags.no_timestamp {
        None
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(value).expect("reports serialize");
    s.push(b'\n');
    s
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<Vec<u8>, Abort> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Abort { code: EXIT_USAGE, message: e.to_string() })?;
    }
    w.into_inner().map_err(|e| Abort { code: EXIT_USAGE, message: e.to_string() })
}

fn json_only(flags: &Flags, command: &str) -> Result<(), Abort> {
    if flags.format == Format::Csv {
        return Err(Abort::usage(format!("{command} reports are nested; only --format json is supported")));
    }
    Ok(())
}

#[derive(Serialize)]
struct CatalogRow<'a> {
    id: &'a str,
    class: EnsembleClass,
    n: usize,
    branch: String,
    group_dim: usize,
    ambient_dim: usize,
    slice_dim: usize,
    stabilizer_dim: usize,
    d: usize,
    beta: Option<u32>,
    harness_eligible: bool,
}

fn list(catalog: &Catalog, flags: &Flags) -> Result<Outcome, Abort> {
    let rows: Vec<_> = if flags.instances.is_empty() {
        catalog.iter().map(|i| i.summary()).collect()
    } else {
        flags
            .instances
            .iter()
            .map(|id| catalog.lookup(id).map(|i| i.summary()))
            .collect::<weylcover::Result<_>>()?
    };
    let bytes = match flags.format {
        Format::Json => json_bytes(&rows),
        Format::Csv => csv_bytes(rows.iter().map(|r| CatalogRow {
            id: &r.id,
            class: r.class,
            n: r.n,
            branch: r.branch.map(|b| format!("{b:?}").to_lowercase()).unwrap_or_default(),
            group_dim: r.group_dim,
            ambient_dim: r.ambient_dim,
            slice_dim: r.slice_dim,
            stabilizer_dim: r.stabilizer_dim,
            d: r.d,
            beta: r.beta,
            harness_eligible: r.harness_eligible,
        }))?,
    };
    Ok(Outcome { code: EXIT_PASS, bytes })
}

fn verify(instances: &[&EnsembleInstance], config: RunConfig, flags: &Flags) -> Result<Outcome, Abort> {
    json_only(flags, "verify")?;
    let opts = ConditionOptions::default();
    let results: Vec<ConditionReport> =
        instances.iter().map(|i| run_conditions(i, flags.probes, flags.seed, &opts, &config.tolerances)).collect();
    let numerical = results.iter().any(|r| r.errors.iter().any(|e| is_numerical_kind(e.kind)));
    let pass = results.iter().all(|r| r.pass);
    let report = Report { generated_unix: timestamp(flags), config, results, errors: Vec::new(), pass };
    let code = if numerical {
        EXIT_NUMERICAL
    } else if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    Ok(Outcome { code, bytes: json_bytes(&report) })
}

fn fiber_cmd(instances: &[&EnsembleInstance], config: RunConfig, flags: &Flags) -> Result<Outcome, Abort> {
    json_only(flags, "fiber")?;
    let [instance] = instances else {
        return Err(Abort::usage("fiber needs exactly one --instance"));
    };
    let tol = &config.tolerances;
    let x = match &flags.point {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Abort::usage(format!("cannot read {}: {e}", path.display())))?;
            DenseMatrix::from_json(&text)?
        }
        None => sample_regular_point(instance, &mut RngStream::new(flags.seed, 0), tol)?,
    };
    let (results, errors): (Vec<FiberReport>, Vec<ErrorEntry>) = match fiber(instance, &x, tol) {
        Ok(r) => (vec![r], Vec::new()),
        Err(Error::FiberDefect(r)) => {
            let e = ErrorEntry { instance_id: instance.id.clone(), kind: "FiberDefect", message: r.summary() };
            (vec![*r], vec![e])
        }
        Err(e) => return Err(e.into()),
    };
    let pass = errors.is_empty();
    let report = Report { generated_unix: timestamp(flags), config, results, errors, pass };
    Ok(Outcome { code: if pass { EXIT_PASS } else { EXIT_FAIL }, bytes: json_bytes(&report) })
}

#[derive(Serialize)]
struct EstimateRow<'a> {
    instance_id: &'a str,
    f_id: TestFunction,
    lhs_mean: f64,
    lhs_std_error: f64,
    rhs_mean: f64,
    rhs_std_error: f64,
    samples: usize,
    gap: f64,
    combined_se: f64,
    pass: bool,
}

fn require_eligible(instances: &[&EnsembleInstance], command: &str) -> Result<(), Abort> {
    match instances.iter().find(|i| !i.harness_eligible) {
        Some(i) => Err(Abort::usage(format!("{command}: `{}` is not harness-eligible (noncompact group)", i.id))),
        None => Ok(()),
    }
}

fn integrate(instances: &[&EnsembleInstance], config: RunConfig, flags: &Flags) -> Result<Outcome, Abort> {
    require_eligible(instances, "integrate")?;
    let mut results: Vec<IntegrationVerdict> = Vec::new();
    for i in instances {
        results.extend(verify_integration_all(i, &TestFunction::registry_for(i), flags.samples, flags.seed, &config.tolerances)?);
    }
    let pass = results.iter().all(|v| v.pass);
    let bytes = match flags.format {
        Format::Json => json_bytes(&Report { generated_unix: timestamp(flags), config, results, errors: Vec::new(), pass }),
        Format::Csv => csv_bytes(results.iter().map(|v| EstimateRow {
            instance_id: &v.instance_id,
            f_id: v.f_id,
            lhs_mean: v.lhs.mean,
            lhs_std_error: v.lhs.std_error,
            rhs_mean: v.rhs.mean,
            rhs_std_error: v.rhs.std_error,
            samples: v.lhs.samples,
            gap: v.gap,
            combined_se: v.combined_se,
            pass: v.pass,
        }))?,
    };
    Ok(Outcome { code: if pass { EXIT_PASS } else { EXIT_FAIL }, bytes })
}

#[derive(Serialize)]
struct BinRow {
    bin_left: f64,
    bin_right: f64,
    observed: u64,
    expected: f64,
}

fn density(instances: &[&EnsembleInstance], config: RunConfig, flags: &Flags) -> Result<Outcome, Abort> {
    require_eligible(instances, "density")?;
    if flags.format == Format::Csv && instances.len() != 1 {
        return Err(Abort::usage("density --format csv needs exactly one --instance"));
    }
    if flags.bins < 2 {
        return Err(Abort::usage("density needs at least 2 bins"));
    }
    let results: Vec<HistogramComparison> = instances
        .iter()
        .map(|i| density_histogram(i, flags.samples, flags.bins, flags.seed, &config.tolerances))
        .collect::<weylcover::Result<_>>()?;
    let pass = results.iter().all(|h| h.pass);
    let bytes = match flags.format {
        Format::Json => json_bytes(&Report { generated_unix: timestamp(flags), config, results, errors: Vec::new(), pass }),
        Format::Csv => csv_bytes(results[0].rows().into_iter().map(|(bin_left, bin_right, observed, expected)| BinRow {
            bin_left,
            bin_right,
            observed,
            expected,
        }))?,
    };
    Ok(Outcome { code: if pass { EXIT_PASS } else { EXIT_FAIL }, bytes })
}
