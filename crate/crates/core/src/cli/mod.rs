//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verified claim failed, 2 domain or precondition
//! error, 64 usage or parse error, 74 I/O error. No configuration file or
//! environment variable is consulted.

pub mod figures;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::bound_chain::{lemma2_bound, rho, theorem_margin};
use crate::camp_paulson::camp_paulson_cdf;
use crate::exact::{
    cdf, parse_rational, pmf, tail_at_or_above_mean, tail_at_or_below_mean, BinomialParams,
    ExactProbability, TrialCount,
};
use crate::format;
use crate::harness::{run_claim, CertificateReport, ClaimId, SweepConfig};
use crate::margin::Margin;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Parser)]
#[command(
    name = "binotail",
    version,
    about = "Exact binomial tails, the Camp-Paulson approximation, and certificates for P[X >= E[X]] > 1/4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one probability or bound
    Eval {
        #[command(subcommand)]
        what: EvalCmd,
    },
    /// Run certification sweeps (claim ids or `all`)
    Verify(VerifyArgs),
    /// Write CSV series for the figures
    Figure {
        #[command(subcommand)]
        figure: FigureCmd,
    },
}

#[derive(Debug, Args)]
struct TrialsArg {
    /// Number of trials
    #[arg(short = 'm', allow_negative_numbers = true)]
    m: i64,
}

#[derive(Debug, Args)]
struct ProbArg {
    /// Success probability, as `a/b` or an exact decimal
    #[arg(short = 'p', allow_hyphen_values = true)]
    p: String,
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct IndexedArgs {
    #[command(flatten)]
    m: TrialsArg,
    #[command(flatten)]
    p: ProbArg,
    #[arg(short = 'k', allow_negative_numbers = true)]
    k: i64,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct MeanArgs {
    #[command(flatten)]
    m: TrialsArg,
    #[command(flatten)]
    p: ProbArg,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct CampPaulsonArgs {
    #[command(flatten)]
    m: TrialsArg,
    #[command(flatten)]
    p: ProbArg,
    #[arg(short = 'j', allow_negative_numbers = true)]
    j: i64,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    m: TrialsArg,
    #[arg(short = 'k', allow_negative_numbers = true)]
    k: i64,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct RhoArgs {
    #[command(flatten)]
    m: TrialsArg,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Subcommand)]
enum EvalCmd {
    /// P[X = k]
    Pmf(IndexedArgs),
    /// P[X <= k]
    Cdf(IndexedArgs),
    /// F(m,p) = P[X >= mp]
    TailAboveMean(MeanArgs),
    /// G(m,p) = P[X <= mp]
    TailBelowMean(MeanArgs),
    /// Camp-Paulson estimate of P[X <= j] with its error bound
    CampPaulson(CampPaulsonArgs),
    /// Camp-Paulson bound on P[X <= k] under B(m, k/m)
    Lemma2(GridArgs),
    /// rho(m) = P[X <= 1] under B(m, 1/m)
    Rho(RhoArgs),
    /// F(m,p) - 1/4 (requires p > 1/m)
    TheoremMargin(MeanArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Claim ids such as THEOREM_MAIN, or `all`
    #[arg(required = true)]
    claims: Vec<String>,
    #[arg(long, default_value_t = SweepConfig::default().max_m)]
    max_m: u32,
    /// Largest denominator of the rational p grid
    #[arg(long, default_value_t = SweepConfig::default().p_denominator_limit)]
    denom: u32,
    /// Interior sample points per interval (k/m, (k+1)/m]
    #[arg(long, default_value_t = SweepConfig::default().grid_points_per_interval)]
    grid: u32,
    #[arg(long, default_value_t = SweepConfig::default().seed)]
    seed: u64,
    /// Worker threads (0 = one per core); reports do not depend on it
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Debug, Subcommand)]
enum FigureCmd {
    /// One CSV per (m, p) with columns k,probability
    PmfPanels {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Panel as `m:p`, e.g. `20:1/10`; repeatable
        #[arg(long = "panel")]
        panels: Vec<String>,
    },
    /// F(m,p) against p for several m
    TailCurves {
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated trial counts
        #[arg(long = "m", value_delimiter = ',', default_values_t = [2u32, 3, 4, 5, 6, 7, 8])]
        trials: Vec<u32>,
        /// Spacing of the uniform p grid
        #[arg(long, default_value = "1/1000")]
        step: String,
        /// Also sample k/m + 1e-9 right of every jump
        #[arg(long)]
        jump_points: bool,
    },
    /// Exact grid CDFs next to the Camp-Paulson bound
    GridVsBound {
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated trial counts
        #[arg(long = "m", value_delimiter = ',', default_values_t = [2u32, 22, 42, 62, 72])]
        trials: Vec<u32>,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Precondition(_) => EXIT_DOMAIN,
            Error::Parse(_) | Error::UnknownClaim(_) => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("cannot write {}: {e}", path.display()),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Eval { what } => cmd_eval(what, out),
        Command::Verify(args) => cmd_verify(args, out, err),
        Command::Figure { figure } => cmd_figure(figure, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn trials(m: i64) -> Result<TrialCount, Failure> {
    Ok(TrialCount::try_from(m)?)
}

fn probability(p: &str) -> Result<ExactProbability, Failure> {
    Ok(p.parse::<ExactProbability>()?)
}

/// A named output value.
enum Field {
    Int(i64),
    Exact(BigRational),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Field {
    fn json(&self) -> Value {
        match self {
            Field::Int(v) => json!(v),
            Field::Exact(q) => json!(format::rational(q)),
            Field::Real(x) => json!(format::real(*x)),
            Field::Bool(b) => json!(b),
            Field::Text(s) => json!(s),
        }
    }

    fn text(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Exact(q) => format::rational(q),
            Field::Real(x) => format::real(*x),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
        }
    }
}

struct EvalOutput {
    plain: String,
    fields: Vec<(&'static str, Field)>,
}

impl EvalOutput {
    fn render(&self, fmt: OutputFormat) -> String {
        match fmt {
            OutputFormat::Plain => format!("{}\n", self.plain),
            OutputFormat::Json => {
                let mut map = Map::new();
                for (k, v) in &self.fields {
                    map.insert((*k).to_string(), v.json());
                }
                format!("{}\n", Value::Object(map))
            }
            OutputFormat::Csv => {
                let header: Vec<&str> = self.fields.iter().map(|(k, _)| *k).collect();
                let row: Vec<String> = self
                    .fields
                    .iter()
                    .map(|(_, v)| csv_field(&v.text()))
                    .collect();
                format!("{}\n{}\n", header.join(","), row.join(","))
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn exact_output(op: &str, params: Vec<(&'static str, Field)>, value: &BigRational) -> EvalOutput {
    let mut fields = vec![("op", Field::Text(op.to_string()))];
    fields.extend(params);
    fields.push(("value", Field::Exact(value.clone())));
    fields.push(("decimal", Field::Real(crate::exact::rational_to_f64(value))));
    EvalOutput {
        plain: format::exact_with_decimal(value),
        fields,
    }
}

fn cmd_eval(what: EvalCmd, out: &mut dyn Write) -> Result<i32, Failure> {
    let (output, fmt) = match what {
        EvalCmd::Pmf(a) => {
            let params = BinomialParams::new(trials(a.m.m)?, probability(&a.p.p)?);
            let v = pmf(&params, a.k)?;
            (
                exact_output("pmf", indexed_fields(&params, "k", a.k), v.value()),
                a.format.format,
            )
        }
        EvalCmd::Cdf(a) => {
            let params = BinomialParams::new(trials(a.m.m)?, probability(&a.p.p)?);
            let v = cdf(&params, a.k)?;
            (
                exact_output("cdf", indexed_fields(&params, "k", a.k), v.value()),
                a.format.format,
            )
        }
        EvalCmd::TailAboveMean(a) => {
            let params = BinomialParams::new(trials(a.m.m)?, probability(&a.p.p)?);
            let t = tail_at_or_above_mean(&params);
            let mut o = exact_output("tail-above-mean", mean_fields(&params), t.value.value());
            o.fields
                .push(("threshold_index", Field::Int(t.threshold_index.into())));
            (o, a.format.format)
        }
        EvalCmd::TailBelowMean(a) => {
            let params = BinomialParams::new(trials(a.m.m)?, probability(&a.p.p)?);
            let t = tail_at_or_below_mean(&params);
            let mut o = exact_output("tail-below-mean", mean_fields(&params), t.value.value());
            o.fields
                .push(("threshold_index", Field::Int(t.threshold_index.into())));
            (o, a.format.format)
        }
        EvalCmd::CampPaulson(a) => {
            let m = trials(a.m.m)?;
            let p = probability(&a.p.p)?;
            let r = camp_paulson_cdf(m, &p, a.j)?;
            let o = EvalOutput {
                plain: format!(
                    "{} +/- {}",
                    format::real(r.estimate),
                    format::real(r.error_bound)
                ),
                fields: vec![
                    ("op", Field::Text("camp-paulson".into())),
                    ("m", Field::Int(m.get().into())),
                    ("p", Field::Exact(p.value().clone())),
                    ("j", Field::Int(a.j)),
                    ("estimate", Field::Real(r.estimate)),
                    ("error_bound", Field::Real(r.error_bound)),
                ],
            };
            (o, a.format.format)
        }
        EvalCmd::Lemma2(a) => {
            let m = trials(a.m.m)?;
            let v = lemma2_bound(m, a.k)?;
            let o = EvalOutput {
                plain: format::real(v),
                fields: vec![
                    ("op", Field::Text("lemma2".into())),
                    ("m", Field::Int(m.get().into())),
                    ("k", Field::Int(a.k)),
                    ("value", Field::Real(v)),
                ],
            };
            (o, a.format.format)
        }
        EvalCmd::Rho(a) => {
            let m = trials(a.m.m)?;
            let v = rho(m)?;
            let o = exact_output("rho", vec![("m", Field::Int(m.get().into()))], v.value());
            (o, a.format.format)
        }
        EvalCmd::TheoremMargin(a) => {
            let m = trials(a.m.m)?;
            let p = probability(&a.p.p)?;
            let r = theorem_margin(m, &p)?;
            let Margin::Exact(q) = &r.margin else {
                unreachable!("theorem margins are exact")
            };
            let mut o = exact_output(
                "theorem-margin",
                vec![
                    ("m", Field::Int(m.get().into())),
                    ("p", Field::Exact(p.value().clone())),
                ],
                q,
            );
            o.plain = format!("{} holds={}", o.plain, r.holds);
            o.fields.push(("holds", Field::Bool(r.holds)));
            (o, a.format.format)
        }
    };
    write_out(out, &output.render(fmt))?;
    Ok(EXIT_OK)
}

fn indexed_fields(
    params: &BinomialParams,
    name: &'static str,
    k: i64,
) -> Vec<(&'static str, Field)> {
    let mut f = mean_fields(params);
    f.push((name, Field::Int(k)));
    f
}

fn mean_fields(params: &BinomialParams) -> Vec<(&'static str, Field)> {
    vec![
        ("m", Field::Int(params.trials().get().into())),
        ("p", Field::Exact(params.probability().value().clone())),
    ]
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: EXIT_IO,
        message: format!("cannot write output: {e}"),
    })
}

fn parse_claims(names: &[String]) -> Result<Vec<ClaimId>, Failure> {
    let mut claims = Vec::new();
    for name in names {
        if name.eq_ignore_ascii_case("all") {
            claims.extend(ClaimId::ALL);
        } else {
            claims.push(name.parse::<ClaimId>()?);
        }
    }
    claims.dedup();
    Ok(claims)
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let claims = parse_claims(&args.claims)?;
    let config =
        SweepConfig::new(args.max_m, args.denom, args.grid, args.seed).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        })?;

    let mut reports = Vec::with_capacity(claims.len());
    for claim in claims {
        let report = pool.install(|| run_claim(claim, &config))?;
        if args.format.format == OutputFormat::Plain {
            let _ = writeln!(err, "{} finished in {:.2?}", report.claim, report.elapsed);
        }
        reports.push(report);
    }

    write_out(out, &render_reports(&reports, args.format.format))?;
    let mut code = EXIT_OK;
    for r in reports.iter().filter(|r| !r.pass) {
        code = EXIT_VERIFY_FAILED;
        let _ = writeln!(err, "FAIL {}: {}", r.claim, r.claim.statement());
        if let (Some(m), Some(w)) = (&r.worst_margin, &r.worst_witness) {
            let _ = writeln!(err, "  worst margin {} at {w}", plain_margin(m));
        }
        for w in &r.failures {
            let _ = writeln!(err, "  failed at {w}");
        }
    }
    Ok(code)
}

/// Renders reports: JSON lines, a CSV table, or one PASS/FAIL line per claim.
pub fn render_reports(reports: &[CertificateReport], fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Json => crate::harness::reports_to_json_lines(reports),
        OutputFormat::Csv => {
            let mut s = String::from(
                "claim,pass,strict,checked_count,failure_count,flagged_count,worst_margin,worst_witness\n",
            );
            for r in reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.claim,
                    r.pass,
                    r.strict,
                    r.checked_count,
                    r.failure_count,
                    r.flagged_count,
                    r.worst_margin
                        .as_ref()
                        .map(ToString::to_string)
                        .unwrap_or_default(),
                    csv_field(
                        &r.worst_witness
                            .as_ref()
                            .map(ToString::to_string)
                            .unwrap_or_default()
                    ),
                ));
            }
            s
        }
        OutputFormat::Plain => {
            let mut s = String::new();
            for r in reports {
                let verdict = if r.pass { "PASS" } else { "FAIL" };
                let worst = match (&r.worst_margin, &r.worst_witness) {
                    (Some(m), Some(w)) => format!("worst_margin={} at {w}", plain_margin(m)),
                    _ => "empty domain".to_string(),
                };
                s.push_str(&format!(
                    "{verdict} {} checked={} {worst}",
                    r.claim, r.checked_count
                ));
                if r.flagged_count > 0 {
                    s.push_str(&format!(" flagged={}", r.flagged_count));
                }
                s.push('\n');
            }
            s
        }
    }
}

/// Short exact margins print as `a/b (decimal)`; long ones as a decimal only.
fn plain_margin(m: &Margin) -> String {
    match m {
        Margin::Exact(q) if format::rational(q).len() <= 40 => format::exact_with_decimal(q),
        Margin::Exact(q) => format!("~{}", format::real(crate::exact::rational_to_f64(q))),
        Margin::Approx(x) => format::real(*x),
    }
}

fn trial_list(ms: &[u32]) -> Result<Vec<TrialCount>, Failure> {
    ms.iter().map(|&m| Ok(TrialCount::new(m)?)).collect()
}

fn parse_panel(spec: &str) -> Result<BinomialParams, Failure> {
    let (m, p) = spec.split_once(':').ok_or_else(|| Failure {
        code: EXIT_USAGE,
        message: format!("panel `{spec}` is not of the form m:p"),
    })?;
    let m: i64 = m.trim().parse().map_err(|_| Failure {
        code: EXIT_USAGE,
        message: format!("bad trial count in panel `{spec}`"),
    })?;
    Ok(BinomialParams::new(trials(m)?, probability(p)?))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, contents),
        None => write_out(out, contents),
    }
}

fn cmd_figure(figure: FigureCmd, out: &mut dyn Write) -> Result<i32, Failure> {
    match figure {
        FigureCmd::PmfPanels { out: dir, panels } => {
            let panels = if panels.is_empty() {
                figures::default_pmf_panels()
            } else {
                panels
                    .iter()
                    .map(|s| parse_panel(s))
                    .collect::<Result<_, _>>()?
            };
            fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
            for params in &panels {
                let path = dir.join(figures::pmf_panel_file_name(params));
                write_file(&path, &figures::pmf_panel_csv(params))?;
                write_out(out, &format!("{}\n", path.display()))?;
            }
        }
        FigureCmd::TailCurves {
            out: path,
            trials,
            step,
            jump_points,
        } => {
            let step = parse_rational(&step)?;
            let rows = figures::tail_curves(&trial_list(&trials)?, &step, jump_points)?;
            emit(out, path.as_deref(), &figures::tail_curves_csv(&rows))?;
        }
        FigureCmd::GridVsBound { out: path, trials } => {
            let rows = figures::grid_vs_bound(&trial_list(&trials)?)?;
            emit(out, path.as_deref(), &figures::grid_vs_bound_csv(&rows))?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["binotail"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_examples() {
        let (code, out, _) = run_args(&["eval", "tail-above-mean", "-m", "2", "-p", "3/5"]);
        assert_eq!((code, out.as_str()), (0, "9/25 (0.36)\n"));
        let (code, out, _) = run_args(&["eval", "rho", "-m", "2"]);
        assert_eq!((code, out.as_str()), (0, "3/4 (0.75)\n"));
        let (code, _, err) = run_args(&["eval", "theorem-margin", "-m", "2", "-p", "1/2"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("p > 1/m"), "{err}");
    }

    #[test]
    fn eval_decimal_input_is_exact() {
        let (code, out, _) = run_args(&["eval", "tail-above-mean", "-m", "2", "-p", "0.6"]);
        assert_eq!((code, out.as_str()), (0, "9/25 (0.36)\n"));
    }

    #[test]
    fn eval_formats() {
        let (_, out, _) = run_args(&[
            "eval", "cdf", "-m", "2", "-p", "1/2", "-k", "1", "--format", "json",
        ]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], "3/4");
        assert_eq!(v["decimal"], "0.75");
        let (_, out, _) = run_args(&[
            "eval", "pmf", "-m", "2", "-p", "1/2", "-k", "1", "--format", "csv",
        ]);
        assert_eq!(out, "op,m,p,k,value,decimal\npmf,2,1/2,1,1/2,0.5\n");
    }

    #[test]
    fn eval_errors_map_to_exit_codes() {
        assert_eq!(
            run_args(&["eval", "pmf", "-m", "2", "-p", "x", "-k", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["eval", "pmf", "-m", "2", "-p", "3/2", "-k", "1"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(
            run_args(&["eval", "pmf", "-m", "2", "-p", "1/2", "-k", "3"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(
            run_args(&["eval", "pmf", "-m", "0", "-p", "1/2", "-k", "0"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(run_args(&["eval", "pmf", "-m", "two"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["eval", "lemma2", "-m", "3", "-k", "3"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn verify_unknown_claim_is_usage_error() {
        let (code, _, err) = run_args(&["verify", "BOGUS"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("BOGUS"));
    }

    #[test]
    fn verify_small_theorem_sweep() {
        let (code, out, _) = run_args(&["verify", "THEOREM_MAIN", "--max-m", "8", "--denom", "64"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("PASS THEOREM_MAIN"), "{out}");
        // closest Farey fraction above 1/2: F(2, 32/63) - 1/4 = 127/15876
        assert!(
            out.contains("worst_margin=127/15876 (0.00799949609473419) at m=2, p=32/63"),
            "{out}"
        );
    }

    #[test]
    fn unwritable_figure_path() {
        let (code, _, _) = run_args(&[
            "figure",
            "grid-vs-bound",
            "--out",
            "/nonexistent-dir/sub/grid.csv",
        ]);
        assert_eq!(code, EXIT_IO);
    }
}
