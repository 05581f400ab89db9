//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 a verification
//! check failed.

pub mod config;
pub mod format;

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::criteria::{self, classify, Classification, EquationKind, ProblemInstance, Verdict};
use crate::quadrature::{fit_rate, IJKind};
use crate::rational::{self, Rational};
use crate::stability::{
    self, check_stability, hardy_corollary_check, hardy_lemma_check, RadialGrid, Smooth,
    StabilityVerdict,
};
use crate::weights::{GFactor, RadialFunction, WeightFamily};
use crate::witness::{self, Regime, Witness};

use format::{fmt_g, to_json, Check, Report, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

const MAX_SWEEP_POINTS: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "liouville",
    version,
    about = "Classify, construct and verify stable solutions of weighted semilinear equations",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one instance
    Classify(ClassifyArgs),
    /// Classify a one- or two-axis grid of instances
    Sweep(SweepArgs),
    /// Build the explicit witness and check its residual
    Witness(WitnessArgs),
    /// Run the truncation ladder of the stability eigenproblem
    Stability(StabilityArgs),
    /// Check the weighted Hardy inequalities on random bumps
    Hardy(HardyArgs),
    /// Fit the growth rate of an annulus quantity
    Rates(RatesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Equation: G, L or M
    #[arg(long, default_value = "G")]
    eq: String,
    /// Exponent p (L: p > 1, M: p > 0)
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Dimension N (may be fractional)
    #[arg(long = "N", allow_hyphen_values = true)]
    #[serde(rename = "N")]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    alpha: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    beta: String,
    /// Output file (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Worker threads for sweeps (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `key = value` file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write a gnuplot script (`<out>.gp`, or standard error)
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// `lo:hi:step`
    #[arg(long = "N-range", allow_hyphen_values = true)]
    #[serde(rename = "N_range")]
    n_range: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_range: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta_range: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p_range: Option<String>,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct WitnessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Fail (exit 2) unless the residual contract holds
    #[arg(long)]
    verify: bool,
    /// Build the exact growth pair even off the existence side
    #[arg(long)]
    pair: bool,
    #[arg(long, default_value_t = 200)]
    radii: usize,
    #[arg(long, default_value_t = 1e-3)]
    r_lo: f64,
    #[arg(long, default_value_t = 1e3)]
    r_hi: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct StabilityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Comma-separated truncation radii
    #[arg(long, default_value = "10,100,1000")]
    ladder: String,
    /// Use the exact growth pair; the expected verdict then follows `classify`
    #[arg(long)]
    pair: bool,
    /// Include the minimizing function in JSON output
    #[arg(long)]
    minimizer: bool,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct HardyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// Power-weight form with parameters alpha and t
    #[arg(long, conflicts_with = "lemma")]
    corollary: bool,
    /// General form with E = (1+r²)^m and exponent tau
    #[arg(long)]
    lemma: bool,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// Exponent m of E = (1+r²)^m
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    e_power: f64,
    /// Number of random bump test functions
    #[arg(long, default_value_t = 100)]
    bumps: usize,
    #[arg(long, default_value_t = 10.0)]
    r_max: f64,
    #[arg(long, default_value_t = 2000)]
    elements: usize,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
struct RatesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
    /// IG, JG, IL, JL, IM or JM
    #[arg(long)]
    kind: String,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    /// Smallest radius R0 of the sequence R0·2^k
    #[arg(long, default_value_t = 16.0)]
    r0: f64,
    #[arg(long, default_value_t = 6)]
    kmax: u32,
    /// Allowed |fitted − predicted| slope difference
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
}

#[derive(Debug)]
struct Usage(String);

impl From<crate::Error> for Usage {
    fn from(e: crate::Error) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<Report, Usage>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let args = match config::expand_config(args) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let outcome = std::panic::catch_unwind(|| execute(&cli.command));
    match outcome {
        Ok(Ok((report, common))) => match emit(&report, &common) {
            Ok(()) if report.passed() => EXIT_OK,
            Ok(()) => EXIT_CHECK_FAILED,
            Err(msg) => {
                eprintln!("error: {msg}");
                EXIT_USAGE
            }
        },
        Ok(Err(Usage(msg))) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(_) => {
            eprintln!("error: internal failure while evaluating the request");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: &Command) -> std::result::Result<(Report, Common), Usage> {
    let (report, common) = match cmd {
        Command::Classify(a) => (cmd_classify(a)?, &a.common),
        Command::Sweep(a) => (cmd_sweep(a)?, &a.common),
        Command::Witness(a) => (cmd_witness(a)?, &a.common),
        Command::Stability(a) => (cmd_stability(a)?, &a.common),
        Command::Hardy(a) => (cmd_hardy(a)?, &a.common),
        Command::Rates(a) => (cmd_rates(a)?, &a.common),
    };
    Ok((report, common.clone()))
}

fn emit(report: &Report, common: &Common) -> std::result::Result<(), String> {
    let body = match common.format {
        OutputFormat::Csv => report.table.to_csv(),
        OutputFormat::Json => report.to_json(),
    };
    match &common.out {
        Some(path) => std::fs::write(path, &body)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{body}"),
    }
    if common.format == OutputFormat::Csv {
        eprint!("{}", report.check_lines());
    }
    if common.gnuplot {
        if let Some(script) = &report.gnuplot {
            let data = common
                .out
                .as_deref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "data.csv".into());
            let script = script.replace("{data}", &data);
            match &common.out {
                Some(path) => {
                    let gp = gnuplot_path(path);
                    std::fs::write(&gp, script)
                        .map_err(|e| format!("cannot write {}: {e}", gp.display()))?;
                }
                None => eprint!("{script}"),
            }
        }
    }
    Ok(())
}

fn gnuplot_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".gp");
    PathBuf::from(s)
}

fn config_of<T: Serialize>(args: &T, command: &str) -> Map<String, Value> {
    let mut map = match format::to_json(args) {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    map.insert("command".into(), Value::String(command.into()));
    map
}

fn number(s: &str, what: &str) -> std::result::Result<Rational, Usage> {
    rational::parse_rational(s).map_err(|_| Usage(format!("--{what}: not a finite number: {s:?}")))
}

fn equation(c: &Common) -> std::result::Result<EquationKind, Usage> {
    let p = c.p.as_deref().map(|s| number(s, "p")).transpose()?;
    Ok(EquationKind::from_tag(&c.eq, p)?)
}

fn instance(c: &Common) -> std::result::Result<ProblemInstance, Usage> {
    let n = c
        .n
        .as_deref()
        .ok_or_else(|| Usage("--N is required".into()))?;
    Ok(ProblemInstance::new(
        equation(c)?,
        number(n, "N")?,
        number(&c.alpha, "alpha")?,
        number(&c.beta, "beta")?,
    )?)
}

fn q(x: &Rational) -> String {
    fmt_g(rational::to_f64(x))
}

fn qj(x: &Rational) -> Value {
    format::round_json(json!(rational::to_f64(x)))
}

/// One-line description of a witness without commas.
pub fn witness_summary(w: &Witness) -> String {
    let u = match w.u {
        RadialFunction::Zero => "u=0".to_string(),
        RadialFunction::Constant { c } => format!("u={}", fmt_g(c)),
        RadialFunction::LogPower { k } => format!("u=-{}*ln(1+r^2)", fmt_g(k)),
        RadialFunction::Power { m } => format!("u=(1+r^2)^{}", fmt_g(m)),
    };
    let g = match (&w.g, w.g.linear_form()) {
        (_, Some((a, b))) => format!("g={}*(N{}{}*s)", fmt_g(a), if b < 0.0 { "" } else { "+" }, fmt_g(b)),
        (GFactor::Constant { epsilon }, _) => format!("g={}", fmt_g(*epsilon)),
        _ => "g=1".to_string(),
    };
    let regime = match w.regime {
        Regime::Growth => "growth",
        Regime::Flat => "flat",
    };
    format!("{regime} {} {u} {g}", w.role.name())
}

/// A classified instance as written by `classify` and `sweep`.
#[derive(Clone, Debug)]
pub struct RegionRecord {
    pub inst: ProblemInstance,
    pub classification: Classification,
}

impl RegionRecord {
    pub fn new(inst: ProblemInstance) -> Self {
        let classification = classify(&inst);
        Self {
            inst,
            classification,
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.classification.verdict()
    }

    pub fn certificate_field(&self) -> String {
        self.classification.certificate_t().map(q).unwrap_or_default()
    }

    pub fn threshold_field(&self) -> String {
        fmt_g(self.inst.threshold().to_f64())
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("N".into(), qj(&self.inst.n));
        m.insert("alpha".into(), qj(&self.inst.alpha));
        m.insert("beta".into(), qj(&self.inst.beta));
        m.insert("eq".into(), json!(self.inst.eq.tag()));
        m.insert("p".into(), self.inst.eq.p().map(qj).unwrap_or(Value::Null));
        m.insert("verdict".into(), json!(self.verdict().as_str()));
        let th = self.inst.threshold();
        m.insert("threshold".into(), format::round_json(json!(th.to_f64())));
        m.insert("threshold_exact".into(), json!(th.to_string()));
        m.insert("position".into(), to_json(&criteria::position(&self.inst)));
        match &self.classification {
            Classification::Nonexistence(c) => {
                m.insert("certificate_basis".into(), to_json(&c.basis));
                m.insert("certificate_t".into(), c.t.as_ref().map(qj).unwrap_or(Value::Null));
                m.insert(
                    "certificate_t_exact".into(),
                    c.t.as_ref().map(|t| json!(t.to_string())).unwrap_or(Value::Null),
                );
                m.insert("growth_exponent".into(), qj(&c.exponent));
            }
            Classification::Existence(w) => {
                m.insert("certificate_t".into(), Value::Null);
                m.insert("witness".into(), to_json(w.as_ref()));
                m.insert("witness_summary".into(), json!(witness_summary(w)));
            }
            Classification::Undetermined(reason) => {
                m.insert("certificate_t".into(), Value::Null);
                m.insert("reason".into(), to_json(reason));
            }
        }
        Value::Object(m)
    }
}

fn cmd_classify(a: &ClassifyArgs) -> CmdResult {
    let inst = instance(&a.common)?;
    let rec = RegionRecord::new(inst);
    let mut table = Table::new([
        "N", "alpha", "beta", "p", "verdict", "certificate_t", "threshold", "witness",
    ]);
    let witness = match &rec.classification {
        Classification::Existence(w) => witness_summary(w),
        _ => String::new(),
    };
    table.push(vec![
        q(&rec.inst.n),
        q(&rec.inst.alpha),
        q(&rec.inst.beta),
        rec.inst.eq.p().map(q).unwrap_or_default(),
        rec.verdict().as_str().into(),
        rec.certificate_field(),
        rec.threshold_field(),
        witness,
    ]);
    Ok(Report {
        config: config_of(a, "classify"),
        results: rec.to_json(),
        checks: Vec::new(),
        table,
        gnuplot: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Axis {
    N,
    Alpha,
    Beta,
    P,
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Self::N => "N",
            Self::Alpha => "alpha",
            Self::Beta => "beta",
            Self::P => "p",
        }
    }
}

/// Inclusive `lo:hi:step` range of exact rationals.
fn parse_range(s: &str, what: &str) -> std::result::Result<Vec<Rational>, Usage> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Usage(format!("--{what}: expected lo:hi:step, got {s:?}")));
    }
    let lo = number(parts[0], what)?;
    let hi = number(parts[1], what)?;
    let step = number(parts[2], what)?;
    if step <= rational::int(0) {
        return Err(Usage(format!("--{what}: step must be positive")));
    }
    if lo > hi {
        return Err(Usage(format!("--{what}: empty range {s:?}")));
    }
    let count = rational::floor(&((&hi - &lo) / &step));
    let count: usize = count
        .try_into()
        .ok()
        .filter(|c: &usize| *c < MAX_SWEEP_POINTS)
        .ok_or_else(|| Usage(format!("--{what}: too many points")))?;
    Ok((0..=count)
        .map(|k| &lo + &step * rational::int(k as i64))
        .collect())
}

fn cmd_sweep(a: &SweepArgs) -> CmdResult {
    let c = &a.common;
    let mut axes = Vec::new();
    for (axis, range) in [
        (Axis::N, &a.n_range),
        (Axis::Alpha, &a.alpha_range),
        (Axis::Beta, &a.beta_range),
        (Axis::P, &a.p_range),
    ] {
        if let Some(r) = range {
            let flag = format!("{}-range", axis.name());
            axes.push((axis, parse_range(r, &flag)?));
        }
    }
    if axes.is_empty() || axes.len() > 2 {
        return Err(Usage("sweep needs one or two of --N-range, --alpha-range, --beta-range, --p-range".into()));
    }
    let base_n = c.n.as_deref().map(|s| number(s, "N")).transpose()?;
    let base_alpha = number(&c.alpha, "alpha")?;
    let base_beta = number(&c.beta, "beta")?;
    let base_p = c.p.as_deref().map(|s| number(s, "p")).transpose()?;

    let mut points: Vec<Vec<Rational>> = vec![Vec::new()];
    for (_, values) in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut row = prefix.clone();
                    row.push(v.clone());
                    row
                })
            })
            .collect();
        if points.len() > MAX_SWEEP_POINTS {
            return Err(Usage("sweep grid has too many points".into()));
        }
    }
    let build = |row: &[Rational]| -> std::result::Result<ProblemInstance, Usage> {
        let (mut n, mut alpha, mut beta, mut p) =
            (base_n.clone(), base_alpha.clone(), base_beta.clone(), base_p.clone());
        for ((axis, _), v) in axes.iter().zip(row) {
            match axis {
                Axis::N => n = Some(v.clone()),
                Axis::Alpha => alpha = v.clone(),
                Axis::Beta => beta = v.clone(),
                Axis::P => p = Some(v.clone()),
            }
        }
        let n = n.ok_or_else(|| Usage("--N or --N-range is required".into()))?;
        let eq = EquationKind::from_tag(&c.eq, p)?;
        Ok(ProblemInstance::new(eq, n, alpha, beta)?)
    };
    let instances = points
        .iter()
        .map(|row| build(row))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let jobs = c
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(Usage("--jobs must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Usage(format!("cannot start worker pool: {e}")))?;
    let records: Vec<RegionRecord> =
        pool.install(|| instances.into_par_iter().map(RegionRecord::new).collect());

    let mut header: Vec<String> = axes.iter().map(|(ax, _)| ax.name().to_string()).collect();
    header.extend(["verdict", "threshold", "certificate_t"].map(String::from));
    let mut table = Table::new(header);
    for (row, rec) in points.iter().zip(&records) {
        let mut fields: Vec<String> = row.iter().map(q).collect();
        fields.push(rec.verdict().as_str().into());
        fields.push(rec.threshold_field());
        fields.push(rec.certificate_field());
        table.push(fields);
    }
    let gnuplot = Some(sweep_gnuplot(&axes.iter().map(|(a, _)| a.name()).collect::<Vec<_>>()));
    Ok(Report {
        config: config_of(a, "sweep"),
        results: Value::Array(records.iter().map(RegionRecord::to_json).collect()),
        checks: Vec::new(),
        table,
        gnuplot,
    })
}

fn sweep_gnuplot(axes: &[&str]) -> String {
    let mut s = String::from("set datafile separator ','\nset key outside\n");
    if let [x, y] = axes {
        s += &format!("set xlabel '{x}'\nset ylabel '{y}'\n");
        let series: Vec<String> = [("NONEXIST", 7), ("UNDET", 1), ("EXIST", 5)]
            .iter()
            .enumerate()
            .map(|(i, (v, pt))| {
                let src = if i == 0 { "'{data}'" } else { "''" };
                format!("{src} every ::1 using 1:(strcol(3) eq '{v}' ? $2 : 1/0) title '{v}' with points pt {pt}")
            })
            .collect();
        s += &format!("plot {}\n", series.join(", \\\n     "));
    } else {
        let x = axes.first().copied().unwrap_or("axis");
        s += &format!(
            "set xlabel '{x}'\nset ytics ('NONEXIST' -1, 'UNDET' 0, 'EXIST' 1)\n\
             plot '{{data}}' every ::1 using 1:(strcol(2) eq 'EXIST' ? 1 : strcol(2) eq 'NONEXIST' ? -1 : 0) \
             title 'verdict' with linespoints\n"
        );
    }
    s
}

fn witness_for(c: &Common, pair: bool) -> std::result::Result<(ProblemInstance, Witness), Usage> {
    let inst = instance(c)?;
    let wit = if pair {
        witness::exact_pair(&inst)?
    } else {
        witness::construct_witness(&inst)?
    };
    Ok((inst, wit))
}

fn cmd_witness(a: &WitnessArgs) -> CmdResult {
    let (_, wit) = witness_for(&a.common, a.pair)?;
    if !(a.r_lo > 0.0 && a.r_hi > a.r_lo && a.radii >= 2) {
        return Err(Usage("need 0 < r-lo < r-hi and at least 2 radii".into()));
    }
    let mut table = Table::new(["r", "lhs", "rhs", "residual", "relative"]);
    let mut rows = Vec::new();
    let mut max_rel = 0.0f64;
    let mut contract = true;
    for r in witness::log_radii(a.r_lo, a.r_hi, a.radii) {
        let res = wit.residual(r)?;
        max_rel = max_rel.max(res.relative());
        contract &= wit.satisfies_contract(&res, a.tol);
        table.push(vec![
            fmt_g(r),
            fmt_g(res.lhs),
            fmt_g(res.rhs),
            fmt_g(res.value),
            fmt_g(res.relative()),
        ]);
        rows.push(res);
    }
    let pos = wit.g_positivity();
    let mut checks = Vec::new();
    if a.verify {
        checks.push(if wit.expected_exact {
            Check::new("max_relative_residual", contract, json!(max_rel), json!(a.tol))
        } else {
            Check::new("residual_sign", contract, json!(contract), json!(wit.role.name()))
        });
        checks.push(Check::new("g_positive", pos.positive, json!(pos.infimum), json!(0.0)));
    }
    Ok(Report {
        config: config_of(a, "witness"),
        results: json!({
            "witness": to_json(&wit),
            "summary": witness_summary(&wit),
            "max_relative_residual": max_rel,
            "g_infimum": pos.infimum,
            "residuals": to_json(&rows),
        }),
        checks,
        table,
        gnuplot: None,
    })
}

fn parse_ladder(s: &str) -> std::result::Result<Vec<f64>, Usage> {
    let ladder: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Usage(format!("--ladder: expected comma-separated radii, got {s:?}")))?;
    if ladder.is_empty() || ladder.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Usage("--ladder: radii must be positive and finite".into()));
    }
    Ok(ladder)
}

/// The `t` whose Hardy coefficient should dominate the witness potential.
fn domination_t(wit: &Witness) -> f64 {
    match (&wit.regime, &wit.epsilon) {
        (Regime::Flat, Some(e)) => e.t_used,
        _ => 0.5 * (wit.n - 2.0),
    }
}

fn cmd_stability(a: &StabilityArgs) -> CmdResult {
    let ladder = parse_ladder(&a.ladder)?;
    let (inst, wit) = witness_for(&a.common, a.pair)?;
    let report = check_stability(&wit, &ladder)?;
    let expected = if a.pair {
        match classify(&inst).verdict() {
            Verdict::Nonexist => Some(StabilityVerdict::UnstableCertificate),
            Verdict::Exist => Some(StabilityVerdict::StableEvidence),
            Verdict::Undet => None,
        }
    } else {
        Some(StabilityVerdict::StableEvidence)
    };
    let mut checks = Vec::new();
    if let Some(exp) = expected {
        checks.push(Check::new(
            "verdict",
            report.verdict == exp,
            to_json(&report.verdict),
            to_json(&exp),
        ));
    }
    let r_top = ladder.iter().copied().fold(0.0, f64::max);
    let t = domination_t(&wit);
    let grid = RadialGrid::graded(wit.n, r_top)?;
    let dominated = stability::pointwise_domination_check(&wit, t, &grid);
    if expected == Some(StabilityVerdict::StableEvidence) {
        checks.push(Check::new("hardy_domination", dominated, json!(dominated), json!(t)));
    }
    let verdict = to_json(&report.verdict);
    let verdict_str = verdict.as_str().unwrap_or_default().to_string();
    let mut table = Table::new([
        "r_max", "lambda_min", "lambda_coarse", "mesh_size", "refinements", "verdict",
    ]);
    for r in &report.rungs {
        table.push(vec![
            fmt_g(r.r_max),
            fmt_g(r.lambda_min),
            fmt_g(r.lambda_coarse),
            r.mesh_size.to_string(),
            r.refinements.to_string(),
            verdict_str.clone(),
        ]);
    }
    let mut results = json!({
        "witness": to_json(&wit),
        "rungs": to_json(&report.rungs),
        "verdict": verdict,
        "hardy_domination": dominated,
        "domination_t": t,
    });
    if a.minimizer {
        results["minimizer"] = to_json(&report.minimizer);
    }
    Ok(Report {
        config: config_of(a, "stability"),
        results: format::round_json(results),
        checks,
        table,
        gnuplot: Some(
            "set datafile separator ','\nset logscale x\nset xlabel 'r_max'\nset ylabel 'lambda_min'\n\
             plot '{data}' every ::1 using 1:2 title 'fine' with linespoints, \
             '' every ::1 using 1:3 title 'coarse' with linespoints\n"
                .into(),
        ),
    })
}

/// `(1 − ((r−c)/w)²)³` scaled by `amp`, supported on `|r − c| < w`.
pub fn bump(c: f64, w: f64, amp: f64) -> impl Fn(f64) -> (f64, f64) {
    move |r: f64| {
        let x = (r - c) / w;
        if x.abs() >= 1.0 {
            (0.0, 0.0)
        } else {
            let b = 1.0 - x * x;
            (amp * b * b * b, -6.0 * amp * x * b * b / w)
        }
    }
}

fn cmd_hardy(a: &HardyArgs) -> CmdResult {
    let c = &a.common;
    let n = rational::to_f64(&number(
        c.n.as_deref().ok_or_else(|| Usage("--N is required".into()))?,
        "N",
    )?);
    let alpha = rational::to_f64(&number(&c.alpha, "alpha")?);
    if a.corollary == a.lemma {
        return Err(Usage("choose exactly one of --corollary or --lemma".into()));
    }
    if !(a.r_max > 0.0 && a.r_max.is_finite()) {
        return Err(Usage("--r-max must be positive".into()));
    }
    let grid = RadialGrid::uniform(n, a.r_max, a.elements)?;
    let (t, tau) = if a.corollary {
        (Some(a.t.ok_or_else(|| Usage("--corollary needs --t".into()))?), None)
    } else {
        (None, Some(a.tau.ok_or_else(|| Usage("--lemma needs --tau".into()))?))
    };
    let e = RadialFunction::Power { m: a.e_power };
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut table = Table::new(["bump", "center", "width", "lhs", "rhs", "holds"]);
    let mut rows = Vec::new();
    let mut violations = 0usize;
    for i in 0..a.bumps {
        let center = rng.gen_range(0.0..0.8 * a.r_max);
        let w_hi = (0.5 * a.r_max).min(0.95 * a.r_max - center);
        let width = rng.gen_range(0.05 * a.r_max..w_hi.max(0.05 * a.r_max + 1e-9));
        let amp = rng.gen_range(0.5..2.0);
        let phi = Smooth(bump(center, width, amp));
        let check = match (t, tau) {
            (Some(t), _) => hardy_corollary_check(alpha, t, &phi, &grid),
            (_, Some(tau)) => hardy_lemma_check(&e, tau, &phi, &grid)?,
            _ => unreachable!(),
        };
        violations += usize::from(!check.holds);
        table.push(vec![
            i.to_string(),
            fmt_g(center),
            fmt_g(width),
            fmt_g(check.lhs),
            fmt_g(check.rhs),
            check.holds.to_string(),
        ]);
        rows.push(json!({"center": center, "width": width, "amplitude": amp, "lhs": check.lhs, "rhs": check.rhs, "holds": check.holds}));
    }
    Ok(Report {
        config: config_of(a, "hardy"),
        results: format::round_json(json!({
            "form": if a.corollary { "corollary" } else { "lemma" },
            "violations": violations,
            "checks": rows,
        })),
        checks: vec![Check::new("violations", violations == 0, json!(violations), json!(0))],
        table,
        gnuplot: None,
    })
}

fn cmd_rates(a: &RatesArgs) -> CmdResult {
    let c = &a.common;
    let p = c.p.as_deref().map(|s| number(s, "p")).transpose()?;
    let kind = IJKind::parse(&a.kind, p)?;
    let n = rational::to_f64(&number(
        c.n.as_deref().ok_or_else(|| Usage("--N is required".into()))?,
        "N",
    )?);
    let w = WeightFamily::new(
        rational::to_f64(&number(&c.alpha, "alpha")?),
        rational::to_f64(&number(&c.beta, "beta")?),
        GFactor::One,
    );
    if !(a.r0 > 0.0) || a.kmax < 1 {
        return Err(Usage("need --r0 > 0 and --kmax >= 1".into()));
    }
    let rep = fit_rate(&kind, &w, n, a.t, a.r0, a.kmax)?;
    let mut table = Table::new(["R", "value"]);
    for (r, v) in rep.radii.iter().zip(&rep.values) {
        table.push(vec![fmt_g(*r), fmt_g(*v)]);
    }
    let checks = match rep.slope_error() {
        Some(err) => vec![Check::new("slope", err <= a.tol, json!(err), json!(a.tol))],
        None => Vec::new(),
    };
    Ok(Report {
        config: config_of(a, "rates"),
        results: format::round_json(json!({
            "report": to_json(&rep),
            "degenerate": rep.degenerate(),
        })),
        checks,
        table,
        gnuplot: Some(
            "set datafile separator ','\nset logscale xy\nset xlabel 'R'\nset ylabel 'value'\n\
             plot '{data}' every ::1 using 1:2 title 'quantity' with linespoints\n"
                .into(),
        ),
    })
}
