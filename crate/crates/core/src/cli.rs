//! The `hardy-verify` command line.
//!
//! Exit codes: `0` when every checked claim holds, `1` when a claim in its
//! proven range fails (the diagnostic names the claim), `2` for input errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::copson::{copson_identity_residual, copson_report, lemma_report, Lemma};
use crate::error::Error;
use crate::gamma::{
    basis_expansion_error, dual_bound, dual_bound_sequence, gamma_norm, inclusion_diagnostic,
    parallelogram_defect, witness_pair, InclusionKind,
};
use crate::inequality::{
    classical_hardy_report, copson_general_report, hardy_identity_residual, hardy_report, InequalityReport, TOL,
};
use crate::io::{load_sequence, load_space_config, load_value_table, parse_rule, write_rows, ReportRow};
use crate::optimality::{remainder_sweep, ProbeKind};
use crate::weights::{improvement_margin, WeightFamily};

#[derive(Debug, Parser)]
#[command(name = "hardy-verify", version, about = "Check improved discrete Hardy and Copson inequalities numerically")]
pub struct Cli {
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a weight family against its classical comparator.
    Weights(WeightsArgs),
    /// Evaluate an inequality report for one input sequence.
    Verify(VerifyArgs),
    /// Check the remainder identity for one input sequence.
    Identity(IdentityArgs),
    /// Evaluate the optimality remainder at a list of cutoffs.
    Optimality(OptimalityArgs),
    /// Scan the Copson lemma margins over a grid of exponents.
    Lemmas(LemmasArgs),
    /// Sequence space diagnostics.
    Space(SpaceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Keller,
    G,
    LambdaG,
    Power,
    Fischer,
    Copson,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Rule for `g` (families `g` and `lambda-g`).
    #[arg(long, default_value = "sqrt")]
    pub g: String,
    /// Rule for `lambda` (family `lambda-g`).
    #[arg(long, default_value = "const:1")]
    pub lambda: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.5)]
    pub c: f64,
    /// Index range `A:B`, both ends included.
    #[arg(long, default_value = "1:100")]
    pub n_range: String,
    /// Check claimed values from a CSV with columns `n,value` instead of
    /// computing them.
    #[arg(long)]
    pub check: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Hardy,
    Copson,
    Classical,
    CopsonGeneral,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub target: VerifyTarget,
    /// Sequence file (JSON or CSV). `hardy` and `copson` read the partial
    /// sums `A`, the others read `a`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "const:1")]
    pub lambda: String,
    #[arg(long, default_value = "sqrt")]
    pub g: String,
    #[arg(long, default_value = "const:1")]
    pub q: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.5)]
    pub c: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityTarget {
    Hardy,
    Copson,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[arg(value_enum)]
    pub target: IdentityTarget,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "const:1")]
    pub lambda: String,
    #[arg(long, default_value = "sqrt")]
    pub g: String,
    #[arg(long, default_value_t = 1.5)]
    pub c: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimalityArgs {
    #[arg(value_enum)]
    pub target: IdentityTarget,
    /// Comma-separated cutoffs.
    #[arg(long = "N-list", default_value = "10,100,1000")]
    pub n_list: String,
    #[arg(long, default_value = "const:1")]
    pub lambda: String,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LemmasArgs {
    /// Exponent grid `LO:HI:STEP`.
    #[arg(long, default_value = "1.1:2:0.1")]
    pub c_grid: String,
    #[arg(long, default_value_t = 100_000)]
    pub n_max: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceOp {
    Norm,
    Dual,
    Basis,
    Parallelogram,
    Inclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InclusionArg {
    LpInWp,
    LinfInGamma,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(value_enum)]
    pub op: SpaceOp,
    /// Space configuration JSON: `{"p": .., "gamma": rule, "q": rule}`.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Second sequence for `parallelogram`.
    #[arg(long)]
    pub input2: Option<PathBuf>,
    /// Rule generating the dual test sequence.
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Comma-separated horizons for `inclusion`.
    #[arg(long, default_value = "10,100,1000,10000")]
    pub horizons: String,
    #[arg(long, value_enum, default_value_t = InclusionArg::LpInWp)]
    pub kind: InclusionArg,
    #[arg(long)]
    pub out: PathBuf,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report_path: Option<PathBuf>,
    /// Summary lines for standard output.
    pub lines: Vec<String>,
    /// Diagnostics for standard error.
    pub diagnostics: Vec<String>,
}

impl RunOutcome {
    fn failure(code: i32, msg: String) -> Self {
        Self {
            exit_code: code,
            report_path: None,
            lines: Vec::new(),
            diagnostics: vec![msg],
        }
    }
}

struct Done {
    report_path: Option<PathBuf>,
    lines: Vec<String>,
    violations: Vec<String>,
}

impl Done {
    fn new(report_path: Option<&Path>) -> Self {
        Self {
            report_path: report_path.map(Path::to_path_buf),
            lines: Vec::new(),
            violations: Vec::new(),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn parse_and_dispatch<I, T>(argv: I) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                RunOutcome {
                    exit_code: 0,
                    report_path: None,
                    lines: vec![text],
                    diagnostics: Vec::new(),
                }
            } else {
                RunOutcome::failure(2, text)
            };
        }
    };
    if cli.threads == 0 {
        return RunOutcome::failure(2, "error: --threads must be at least 1".into());
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => return RunOutcome::failure(2, format!("error: {e}")),
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(done) => {
            let exit_code = if done.violations.is_empty() { 0 } else { 1 };
            RunOutcome {
                exit_code,
                report_path: done.report_path,
                lines: done.lines,
                diagnostics: done.violations.into_iter().map(|v| format!("violation: {v}")).collect(),
            }
        }
        Err(e) => RunOutcome::failure(2, format!("error: {e}")),
    }
}

/// Entry point for the binary: runs with the process arguments, prints the
/// outcome and returns the exit code.
pub fn run() -> i32 {
    let outcome = parse_and_dispatch(std::env::args_os());
    for line in &outcome.lines {
        println!("{}", line.trim_end());
    }
    for line in &outcome.diagnostics {
        eprintln!("{}", line.trim_end());
    }
    outcome.exit_code
}

fn dispatch(cmd: &Command) -> Result<Done, Error> {
    match cmd {
        Command::Weights(a) => weights(a),
        Command::Verify(a) => verify(a),
        Command::Identity(a) => identity(a),
        Command::Optimality(a) => optimality(a),
        Command::Lemmas(a) => lemmas(a),
        Command::Space(a) => space(a),
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::Parse(format!("bad range `{s}`, expected A:B with 1 <= A <= B"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad list entry `{t}` in `{s}`"))))
        .collect()
}

/// Grid points `lo + i step` up to `hi`, rounded to 12 decimals so that
/// `1.1:2:0.1` yields exactly 1.1, 1.2, ..., 2.
fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::Parse(format!("bad grid `{s}`, expected LO:HI:STEP"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else { return Err(bad()) };
    if step.is_nan() || step <= 0.0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

#[derive(Serialize)]
struct WeightRow {
    n: usize,
    value: f64,
    classical_bound: f64,
    margin: f64,
    proven: bool,
    reference: &'static str,
}

fn family(a: &WeightsArgs) -> Result<WeightFamily, Error> {
    let f = match a.family {
        FamilyArg::Keller => WeightFamily::Keller,
        FamilyArg::G => WeightFamily::GWeight(parse_rule(&a.g)?),
        FamilyArg::LambdaG => WeightFamily::LambdaG {
            lambda: parse_rule(&a.lambda)?,
            g: parse_rule(&a.g)?,
        },
        FamilyArg::Power => WeightFamily::Power {
            alpha: a.alpha,
            beta: a.beta,
        },
        FamilyArg::Fischer => WeightFamily::Fischer { p: a.p },
        FamilyArg::Copson => WeightFamily::Copson { c: a.c },
    };
    f.validate()?;
    Ok(f)
}

fn weights(a: &WeightsArgs) -> Result<Done, Error> {
    let fam = family(a)?;
    let reference = fam.reference();
    let mut done = Done::new(Some(&a.out));
    let rows: Vec<WeightRow> = match &a.check {
        None => {
            let (lo, hi) = parse_range(&a.n_range)?;
            (lo..=hi)
                .map(|n| {
                    let w = improvement_margin(&fam, n)?;
                    Ok(WeightRow {
                        n,
                        value: w.value,
                        classical_bound: w.classical_bound,
                        margin: w.margin,
                        proven: w.proven,
                        reference,
                    })
                })
                .collect::<Result<_, Error>>()?
        }
        Some(path) => load_value_table(path)?
            .into_iter()
            .map(|(n, value)| {
                let w = improvement_margin(&fam, n)?;
                Ok(WeightRow {
                    n,
                    value,
                    classical_bound: w.classical_bound,
                    margin: value - w.classical_bound,
                    proven: w.proven,
                    reference,
                })
            })
            .collect::<Result<_, Error>>()?,
    };
    write_rows(&a.out, &rows)?;
    let bad: Vec<&WeightRow> = rows
        .iter()
        .filter(|r| r.proven && (r.margin.is_nan() || r.margin < -TOL * r.classical_bound.abs()))
        .collect();
    if let Some(first) = bad.first() {
        done.violations.push(format!(
            "{reference}: value {} does not exceed the bound {} at n = {} ({} rows fail)",
            first.value,
            first.classical_bound,
            first.n,
            bad.len()
        ));
    }
    let min = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    done.lines.push(format!(
        "{} rows of the {} weight written to {}; smallest margin {min:e}",
        rows.len(),
        fam.name(),
        a.out.display()
    ));
    Ok(done)
}

fn report_line(r: &InequalityReport) -> String {
    format!(
        "lhs = {:e}, weighted = {:e}, remainder = {:e}, classical = {:e}, margin = {:e}{}",
        r.lhs,
        r.weighted_sum,
        r.remainder,
        r.classical_sum,
        r.margin,
        match r.flags.labels().as_str() {
            "" => String::new(),
            l => format!(" [{l}]"),
        }
    )
}

fn verify(a: &VerifyArgs) -> Result<Done, Error> {
    let seq = load_sequence(&a.input)?;
    let report = match a.target {
        VerifyTarget::Hardy => hardy_report(&seq, &parse_rule(&a.lambda)?, &parse_rule(&a.g)?)?,
        VerifyTarget::Copson => copson_report(&seq, a.c)?,
        VerifyTarget::Classical => classical_hardy_report(&seq, a.p)?,
        VerifyTarget::CopsonGeneral => copson_general_report(&seq, &parse_rule(&a.q)?, a.p, a.c)?,
    };
    if let Some(out) = &a.out {
        write_rows(out, &[ReportRow::from(&report)])?;
    }
    let mut done = Done::new(a.out.as_deref());
    done.lines.push(report_line(&report));
    if !report.passes() {
        done.violations.push(format!(
            "{}: remainder {:e}, margin {:e}",
            report.reference, report.remainder, report.margin
        ));
    }
    Ok(done)
}

#[derive(Serialize)]
struct IdentityRow {
    residual: f64,
    scale: f64,
    tolerance: f64,
    reference: String,
}

fn identity(a: &IdentityArgs) -> Result<Done, Error> {
    let seq = load_sequence(&a.input)?;
    let (residual, report) = match a.target {
        IdentityTarget::Hardy => {
            let (lambda, g) = (parse_rule(&a.lambda)?, parse_rule(&a.g)?);
            (hardy_identity_residual(&seq, &lambda, &g)?, hardy_report(&seq, &lambda, &g)?)
        }
        IdentityTarget::Copson => (copson_identity_residual(&seq, a.c)?, copson_report(&seq, a.c)?),
    };
    let scale = report.lhs.abs().max(report.weighted_sum.abs()).max(1.0);
    let tolerance = TOL * scale;
    let mut done = Done::new(a.out.as_deref());
    if let Some(out) = &a.out {
        write_rows(
            out,
            &[IdentityRow {
                residual,
                scale,
                tolerance,
                reference: report.reference.clone(),
            }],
        )?;
    }
    done.lines
        .push(format!("residual = {residual:e}, scale = {scale:e}, tolerance = {tolerance:e}"));
    if residual.is_nan() || residual > tolerance {
        done.violations.push(format!(
            "remainder identity for the {}: residual {residual:e} exceeds {tolerance:e}",
            report.reference
        ));
    }
    Ok(done)
}

#[derive(Serialize)]
struct ProbeRow {
    #[serde(rename = "N")]
    n_cut: u64,
    remainder: f64,
    paper_bound: f64,
    ratio: f64,
    window_sum: f64,
    bound_claimed: bool,
    within_bound: bool,
    reference: &'static str,
}

fn optimality(a: &OptimalityArgs) -> Result<Done, Error> {
    let kind = match a.target {
        IdentityTarget::Hardy => ProbeKind::Hardy {
            lambda: parse_rule(&a.lambda)?,
            beta: a.beta,
        },
        IdentityTarget::Copson => ProbeKind::Copson,
    };
    let list: Vec<u64> = parse_list(&a.n_list)?;
    let probes = remainder_sweep(&kind, &list)?;
    let reference = kind.reference();
    let rows: Vec<ProbeRow> = probes
        .iter()
        .map(|p| ProbeRow {
            n_cut: p.n_cut,
            remainder: p.remainder,
            paper_bound: p.paper_bound,
            ratio: p.ratio,
            window_sum: p.window_sum,
            bound_claimed: p.bound_claimed,
            within_bound: p.within_bound(),
            reference,
        })
        .collect();
    write_rows(&a.out, &rows)?;
    let mut done = Done::new(Some(&a.out));
    for p in &probes {
        done.lines.push(format!(
            "N = {}: remainder = {:.6e}, bound = {:.6e}, ratio = {:.4}",
            p.n_cut, p.remainder, p.paper_bound, p.ratio
        ));
        if p.failed() {
            done.violations.push(format!(
                "{reference}: remainder {:.6e} exceeds {:.6e} at N = {}",
                p.remainder, p.paper_bound, p.n_cut
            ));
        }
    }
    Ok(done)
}

#[derive(Serialize)]
struct LemmaRow {
    c: f64,
    lemma_id: &'static str,
    min_margin: f64,
    argmin_n: u64,
    first_violation_n: Option<u64>,
    first_violation_margin: Option<f64>,
    proven: bool,
}

fn lemmas(a: &LemmasArgs) -> Result<Done, Error> {
    let grid = parse_grid(&a.c_grid)?;
    let mut rows = Vec::new();
    let mut done = Done::new(Some(&a.out));
    for c in grid {
        let report = lemma_report(c, a.n_max)?;
        for lemma in Lemma::ALL {
            let s = report.scan(lemma);
            rows.push(LemmaRow {
                c,
                lemma_id: lemma.id(),
                min_margin: s.min_margin,
                argmin_n: s.argmin_n,
                first_violation_n: s.first_violation_n,
                first_violation_margin: s.first_violation_margin,
                proven: s.proven,
            });
            if s.failed() {
                done.violations.push(format!(
                    "{} (c = {c}) fails at n = {}",
                    lemma.statement(),
                    s.first_violation_n.unwrap_or(s.argmin_n)
                ));
            }
        }
    }
    write_rows(&a.out, &rows)?;
    let violated = rows.iter().filter(|r| r.first_violation_n.is_some()).count();
    done.lines.push(format!(
        "{} lemma scans up to n = {}; {violated} with a violation",
        rows.len(),
        a.n_max
    ));
    Ok(done)
}

fn need<'a>(p: &'a Option<PathBuf>, what: &str) -> Result<&'a Path, Error> {
    p.as_deref().ok_or_else(|| Error::Parse(format!("`space {what}` needs --input")))
}

#[derive(Serialize)]
struct NormRow {
    norm: f64,
    pth_power_lo: f64,
    pth_power_hi: f64,
    exact: bool,
}

#[derive(Serialize)]
struct BasisRow {
    n: usize,
    error: f64,
    error_hi: f64,
}

#[derive(Serialize)]
struct DefectRow {
    defect: f64,
    p: f64,
}

fn space(a: &SpaceArgs) -> Result<Done, Error> {
    let cfg = load_space_config(&a.config)?;
    let mut done = Done::new(Some(&a.out));
    match a.op {
        SpaceOp::Norm => {
            let x = load_sequence(need(&a.input, "norm")?)?;
            let v = gamma_norm(&x, &cfg)?;
            let b = v.bracket(cfg.p);
            write_rows(
                &a.out,
                &[NormRow {
                    norm: v.norm,
                    pth_power_lo: v.pth_power.lo,
                    pth_power_hi: v.pth_power.hi,
                    exact: v.is_exact(),
                }],
            )?;
            done.lines.push(format!("norm = {:e} in [{:e}, {:e}]", v.norm, b.lo, b.hi));
        }
        SpaceOp::Dual => {
            let horizon = a.horizon.unwrap_or(1000);
            let report = match (&a.b, &a.input) {
                (Some(rule), None) => {
                    let b = parse_rule(rule)?;
                    b.check_domain(horizon + 1)?;
                    dual_bound(|n| Complex64::new(b.value(n), 0.0), &cfg, horizon)?
                }
                (None, Some(path)) => dual_bound_sequence(&load_sequence(path)?, &cfg, horizon)?,
                _ => return Err(Error::Parse("`space dual` needs exactly one of --b and --input".into())),
            };
            write_rows(&a.out, std::slice::from_ref(&report))?;
            done.lines.push(format!(
                "sup R_n = {:e} at n = {} (horizon {}), tail slope {:.3}, {:?}",
                report.sup_value, report.argmax_n, report.horizon, report.slope, report.trend
            ));
        }
        SpaceOp::Basis => {
            let x = load_sequence(need(&a.input, "basis")?)?;
            let horizon = a.horizon.unwrap_or(x.support_end() + 1);
            let rows: Vec<BasisRow> = (0..=horizon)
                .map(|n| {
                    let e = basis_expansion_error(&x, &cfg, n)?;
                    Ok(BasisRow {
                        n,
                        error: e.norm,
                        error_hi: e.bracket(cfg.p).hi,
                    })
                })
                .collect::<Result<_, Error>>()?;
            write_rows(&a.out, &rows)?;
            let last = rows.last().map_or(0.0, |r| r.error);
            done.lines.push(format!("expansion error after {horizon} terms = {last:e}"));
        }
        SpaceOp::Parallelogram => {
            let (x, y) = match (&a.input, &a.input2) {
                (Some(x), Some(y)) => (load_sequence(x)?, load_sequence(y)?),
                (None, None) => witness_pair(&cfg)?,
                _ => return Err(Error::Parse("`space parallelogram` needs both inputs or neither".into())),
            };
            let defect = parallelogram_defect(&x, &y, &cfg)?;
            write_rows(&a.out, &[DefectRow { defect, p: cfg.p }])?;
            done.lines.push(format!("parallelogram defect = {defect:e}"));
        }
        SpaceOp::Inclusion => {
            let kind = match a.kind {
                InclusionArg::LpInWp => InclusionKind::LpInWp,
                InclusionArg::LinfInGamma => InclusionKind::LinfInGamma,
            };
            let horizons: Vec<usize> = parse_list(&a.horizons)?;
            let report = inclusion_diagnostic(kind, &cfg, &horizons)?;
            write_rows(&a.out, &report.rows)?;
            for r in &report.rows {
                done.lines.push(format!(
                    "horizon {}: space norm = {:e}, comparison = {:e}",
                    r.horizon, r.gamma_norm, r.comparison
                ));
            }
            if kind == InclusionKind::LinfInGamma {
                if let Some(bad) = report.rows.iter().find(|r| r.gamma_norm > r.comparison * (1.0 + TOL)) {
                    done.violations.push(format!(
                        "bounded sequences embed with norm at most sup|x| (sum Q_n^p gamma_n)^(1/p): {:e} > {:e} at horizon {}",
                        bad.gamma_norm, bad.comparison, bad.horizon
                    ));
                }
            }
        }
    }
    Ok(done)
}
