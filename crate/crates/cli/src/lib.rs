//! Argument types and output records for the `heatwg` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use heatwg::coeff::q_to_f64;
use heatwg::heat::{bm_moment_tensor, expm_moment_tensor};
use heatwg::mc_oracle::{empirical_moment, SimConfig};
use heatwg::verify::{run_suite, Report, Suite, VerifyOptions};
use heatwg::weingarten::haar_moment;
use heatwg::{Error, GroupFamily, GroupSpec, MomentTensor, Q};

#[derive(Parser, Debug)]
#[command(name = "heatwg", version, about = "Moments of Brownian motion and Haar measure on O(N), Sp(N), U(N)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a moment tensor E[G^{⊗n} ⊗ Ḡ^{⊗m}] or selected entries.
    Moment(MomentArgs),
    /// Run a verification suite and report every check.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Brauer-algebra formula
    Formula,
    /// dense exponential of the Casimir matrix
    Expm,
    /// Monte Carlo estimate
    Mc,
}

#[derive(Args, Debug)]
pub struct MomentArgs {
    /// O, Sp or U
    #[arg(long)]
    pub group: String,
    #[arg(long = "N")]
    pub big_n: usize,
    #[arg(long)]
    pub n: usize,
    /// conjugated factors (unitary group only)
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, conflicts_with = "haar", required_unless_present = "haar")]
    pub t: Option<f64>,
    /// Haar moment (t = ∞), exact rationals
    #[arg(long)]
    pub haar: bool,
    /// Entry as "i1.i2|j1.j2" (or "i1.i2,j1.j2"), 1-based; repeatable
    #[arg(long = "entry")]
    pub entries: Vec<String>,
    #[arg(long, value_enum, default_value_t = Method::Formula)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1.0 / 512.0)]
    pub step: f64,
    /// Monte Carlo worker threads; results depend on the count through summation order
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub theorem_tol: f64,
    #[arg(long, default_value_t = 40.0)]
    pub haar_time: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub haar_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub quadrature_tol: f64,
    #[arg(long, default_value_t = 200_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1.0 / 512.0)]
    pub step: f64,
    #[arg(long, default_value_t = 4.0)]
    pub mc_sigmas: f64,
    #[arg(long, default_value_t = 0.01)]
    pub mc_abs_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub spectral_slack: f64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(s) => f.write_str(s),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses "i1.i2|j1.j2" or "i1.i2,j1.j2".
pub fn parse_entry(s: &str) -> Result<(Vec<usize>, Vec<usize>), CliError> {
    let bad = || CliError::Usage(format!("malformed entry {s:?}, expected i1.i2|j1.j2"));
    let (a, b) = s.split_once('|').or_else(|| s.split_once(',')).ok_or_else(bad)?;
    let tuple = |t: &str| -> Result<Vec<usize>, CliError> {
        t.trim().split('.').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
    };
    Ok((tuple(a)?, tuple(b)?))
}

pub fn format_entry(i: &[usize], j: &[usize]) -> String {
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".");
    format!("{}|{}", join(i), join(j))
}

/// One output row.
#[derive(Clone, Debug)]
pub struct OutputRecord {
    pub group: GroupSpec,
    pub n: usize,
    pub m: usize,
    pub t: Option<f64>,
    pub entry: String,
    pub value: f64,
    pub exact: Option<String>,
    pub method: &'static str,
    pub stderr: Option<f64>,
}

/// 17 significant digits.
pub fn decimal(v: f64) -> String {
    format!("{v:.16e}")
}

impl OutputRecord {
    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("group".into(), json!(self.group.family.to_string()));
        o.insert("N".into(), json!(self.group.n));
        o.insert("n".into(), json!(self.n));
        o.insert("m".into(), json!(self.m));
        o.insert("t".into(), self.t.map_or(Value::Null, |t| json!(t)));
        o.insert("entry".into(), json!(self.entry));
        o.insert("value".into(), json!(self.value));
        o.insert("decimal".into(), json!(decimal(self.value)));
        if let Some(e) = &self.exact {
            o.insert("exact".into(), json!(e));
        }
        o.insert("method".into(), json!(self.method));
        if let Some(s) = self.stderr {
            o.insert("stderr".into(), json!(s));
        }
        Value::Object(o)
    }

    pub const CSV_HEADER: &'static str = "group,N,n,m,t,entry,value,exact,method,stderr";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.group.family,
            self.group.n,
            self.n,
            self.m,
            self.t.map_or(String::from("inf"), |t| t.to_string()),
            self.entry,
            decimal(self.value),
            self.exact.as_deref().unwrap_or(""),
            self.method,
            self.stderr.map_or(String::new(), decimal)
        )
    }
}

enum Values {
    Float(MomentTensor<f64>, Option<MomentTensor<f64>>),
    Exact(MomentTensor<Q>),
}

fn selected(t: &MomentTensor<f64>, entries: &[(Vec<usize>, Vec<usize>)]) -> Result<Vec<(usize, usize)>, CliError> {
    if entries.is_empty() {
        let s = t.side();
        return Ok((0..s).flat_map(|r| (0..s).map(move |c| (r, c))).collect());
    }
    entries
        .iter()
        .map(|(i, j)| Ok((t.flat_index(i)?, t.flat_index(j)?)))
        .collect()
}

pub fn moment_records(a: &MomentArgs) -> Result<Vec<OutputRecord>, CliError> {
    let family: GroupFamily = a.group.parse()?;
    let g = GroupSpec::new(family, a.big_n)?;
    g.check_degrees(a.n, a.m)?;
    let entries = a.entries.iter().map(|s| parse_entry(s)).collect::<Result<Vec<_>, _>>()?;
    for (i, j) in &entries {
        if i.len() != a.n + a.m || j.len() != a.n + a.m {
            return Err(CliError::Usage(format!(
                "entry tuples need {} indices, got {} and {}",
                a.n + a.m,
                i.len(),
                j.len()
            )));
        }
    }
    let (values, method) = if a.haar {
        (Values::Exact(haar_moment(&g, a.n, a.m)?), "haar")
    } else {
        let t = a.t.ok_or_else(|| CliError::Usage("either --t or --haar is required".into()))?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(CliError::Usage(format!("t must be a finite non-negative number, got {t}")));
        }
        match a.method {
            Method::Formula => (Values::Float(bm_moment_tensor(&g, a.n, a.m, t)?, None), "formula"),
            Method::Expm => (Values::Float(expm_moment_tensor(&g, a.n, a.m, t)?, None), "expm-oracle"),
            Method::Mc => {
                let cfg = SimConfig::new(a.paths, a.step, t, a.seed)?.with_threads(a.threads);
                let e = empirical_moment(&g, a.n, a.m, &cfg)?;
                (Values::Float(e.mean, Some(e.stderr)), "mc")
            }
        }
    };
    let float_view = match &values {
        Values::Float(v, _) => v.clone(),
        Values::Exact(q) => q.to_f64(),
    };
    let mut out = Vec::new();
    for (r, c) in selected(&float_view, &entries)? {
        let entry = format_entry(&float_view.multi_index(r), &float_view.multi_index(c));
        let (value, exact, stderr) = match &values {
            Values::Float(v, se) => (v.matrix()[(r, c)], None, se.as_ref().map(|s| s.matrix()[(r, c)])),
            Values::Exact(q) => {
                let x = &q.matrix()[(r, c)];
                (q_to_f64(x), Some(x.to_string()), None)
            }
        };
        out.push(OutputRecord {
            group: g,
            n: a.n,
            m: a.m,
            t: if a.haar { None } else { a.t },
            entry,
            value,
            exact,
            method,
            stderr,
        });
    }
    Ok(out)
}

pub fn render_records(records: &[OutputRecord], format: Format) -> String {
    match format {
        Format::Json => {
            let v = json!({ "records": records.iter().map(|r| r.to_json()).collect::<Vec<_>>() });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from(OutputRecord::CSV_HEADER);
            s.push('\n');
            for r in records {
                let _ = writeln!(s, "{}", r.to_csv());
            }
            s
        }
    }
}

pub fn verify_options(a: &VerifyArgs) -> VerifyOptions {
    VerifyOptions {
        seed: a.seed,
        theorem_tol: a.theorem_tol,
        haar_time: a.haar_time,
        haar_tol: a.haar_tol,
        quadrature_tol: a.quadrature_tol,
        mc_paths: a.paths,
        mc_step: a.step,
        mc_sigmas: a.mc_sigmas,
        mc_abs_tol: a.mc_abs_tol,
        spectral_slack: a.spectral_slack,
        threads: a.threads,
    }
}

/// Timing is left out so the report is a function of the flags alone.
pub fn report_json(r: &Report, seed: u64) -> Value {
    json!({
        "suite": r.suite.name(),
        "seed": seed,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "deviation": c.deviation,
            "tolerance": c.tolerance,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command; the returned code is the process exit status.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Moment(a) => {
            let records = moment_records(&a)?;
            emit(&a.out, &render_records(&records, a.format))?;
            Ok(0)
        }
        Command::Verify(a) => {
            let suite: Suite = a.suite.parse()?;
            let report = run_suite(suite, &verify_options(&a))?;
            let text = serde_json::to_string_pretty(&report_json(&report, a.seed)).expect("serializable") + "\n";
            emit(&a.out, &text)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}
