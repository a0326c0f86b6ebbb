//! The `otf` command line: build and persist structures, run the property
//! suites, answer queries.
//!
//! Exit codes: 0 success, 1 property violation, 2 usage or parse error,
//! 3 precision exhausted, 4 unsupported construction.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use otf_core::contraction::{check_contraction, check_orbit_bounds, ChiStructure, ContractionError};
use otf_core::hahn::{parse_hahn, HahnElement, HahnError};
use otf_core::levelindex::checks::{check_axioms, check_derivative, check_growth, Report};
use otf_core::levelindex::{slog, tr_eval, LevelIndex, LiError, Num, Precision};
use otf_core::ordertype::{parse_ordertype, OrderTypeExpr};
use otf_core::rational::{parse_rational, Rational};
use otf_core::transexp::{
    build_phi, check_growth_encoding, exists_transexp, parse_pterm, pterm_compare, tl_apply, PhiMap, PhiMode, TransexpError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "otf", version, about = "Workbench for ordered transexponential fields")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    /// Seed for builds and suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 30)]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The real transexponential.
    #[command(subcommand)]
    Tr(TrCommand),
    /// Contractions with prescribed rank.
    #[command(subcommand)]
    Rank(RankCommand),
    /// Does a field with this principal exponential rank admit a transexponential?
    Exists {
        #[arg(long)]
        delta: String,
    },
    /// Skeleton synthesis of left transexponentials.
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Subcommand, Debug)]
enum TrCommand {
    /// T(x) in level-index form.
    Eval {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// slog of exp^m(r), or of its reciprocal.
    Slog {
        m: u32,
        r: String,
        #[arg(long)]
        reciprocal: bool,
    },
    /// Run a verification suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Axioms,
    Growth,
    Derivative,
}

#[derive(Args, Debug)]
struct ChiQuery {
    #[arg(long)]
    chi: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    element: String,
}

#[derive(Subcommand, Debug)]
enum RankCommand {
    /// Build χ for a rank and write it out.
    Build {
        #[arg(long)]
        delta: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// χ(g).
    Apply(ChiQuery),
    /// The class of g, as an element of the rank.
    Class(ChiQuery),
    /// ζ(vg(g)) = vg(χ(g)).
    Shift(ChiQuery),
    /// Contraction axioms and orbit bounds on samples.
    Check {
        #[arg(long)]
        chi: PathBuf,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SynthCommand {
    /// Build φ over a stored χ.
    Phi {
        #[arg(long)]
        chi: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// T_L(a + b) as a term.
    Tl {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Order of two terms.
    Compare {
        #[arg(long)]
        phi: PathBuf,
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Class of X_T(g).
    Xt {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// Growth encoding on samples.
    Check {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Generic,
    Growth,
    Nogrowth,
}

impl From<ModeArg> for PhiMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Generic => PhiMode::Generic,
            ModeArg::Growth => PhiMode::Growth,
            ModeArg::Nogrowth => PhiMode::NoGrowth,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: m.to_string() }
    }
}

impl From<LiError> for Failure {
    fn from(e: LiError) -> Self {
        let code = match e {
            LiError::Domain(_) => EXIT_USAGE,
            LiError::PrecisionExhausted(_) => EXIT_PRECISION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<TransexpError> for Failure {
    fn from(e: TransexpError) -> Self {
        let code = match e {
            TransexpError::Unsupported { .. } => EXIT_UNSUPPORTED,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ContractionError> for Failure {
    fn from(e: ContractionError) -> Self {
        Failure::usage(e)
    }
}

impl From<HahnError> for Failure {
    fn from(e: HahnError) -> Self {
        Failure::usage(e)
    }
}

/// A command's answer: text and JSON renderings plus exit code.
struct Answer {
    code: i32,
    text: String,
    json: Value,
}

impl Answer {
    fn ok(text: String, json: Value) -> Self {
        Answer { code: EXIT_OK, text, json }
    }
}

/// Runs one command line. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let emit = cli.emit;
    match dispatch(cli) {
        Ok(a) => {
            let stdout = match emit {
                Emit::Text => a.text,
                Emit::Json => serde_json::to_string_pretty(&a.json).expect("json") + "\n",
            };
            Outcome { code: a.code, stdout, stderr: String::new() }
        }
        Err(f) => {
            let stdout = match emit {
                Emit::Json => serde_json::to_string_pretty(&json!({ "error": f.message, "code": f.code })).expect("json") + "\n",
                Emit::Text => String::new(),
            };
            Outcome { code: f.code, stdout, stderr: format!("error: {}\n", f.message) }
        }
    }
}

fn dispatch(cli: Cli) -> Result<Answer, Failure> {
    let prec = Precision::new(cli.precision);
    let seed = cli.seed;
    match cli.command {
        Command::Tr(c) => tr(c, prec, seed),
        Command::Rank(c) => rank(c, seed),
        Command::Exists { delta } => exists(&delta),
        Command::Synth(c) => synth(c, seed),
    }
}

fn rational_arg(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(Failure::usage)
}

fn ordertype_arg(s: &str) -> Result<OrderTypeExpr, Failure> {
    parse_ordertype(s).map_err(Failure::usage)
}

fn eta() -> Arc<OrderTypeExpr> {
    Arc::new(OrderTypeExpr::Eta)
}

fn hahn_arg(s: &str) -> Result<HahnElement, Failure> {
    Ok(parse_hahn(&eta(), s)?)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("json") + "\n";
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn li_json(x: &LevelIndex, digits: usize) -> Value {
    let mut v = x.to_json(digits);
    let approx = x.to_f64();
    if approx.is_finite() {
        v["approx"] = json!(approx);
    }
    v
}

fn tr(c: TrCommand, prec: Precision, seed: u64) -> Result<Answer, Failure> {
    let digits = prec.digits as usize;
    match c {
        TrCommand::Eval { x } => {
            let q = rational_arg(&x)?;
            let t = tr_eval(&q);
            let approx = t.to_f64();
            let mut text = format!("T({q}) = {t}");
            if approx.is_finite() {
                text += &format!(" ~ {approx:e}");
            }
            Ok(Answer::ok(text + "\n", json!({ "x": q.to_string(), "value": li_json(&t, digits) })))
        }
        TrCommand::Slog { m, r, reciprocal } => {
            let r = rational_arg(&r)?;
            if r < Rational::from_integer(0.into()) || r >= Rational::from_integer(1.into()) {
                return Err(Failure::usage(format!("index {r} is not in [0, 1)")));
            }
            let x = LevelIndex { reciprocal, level: m, index: Num::Exact(r) };
            let s = slog(&x, prec)?;
            let shown = match &s {
                Num::Exact(q) => q.to_string(),
                Num::Approx(_) => s.to_decimal(digits),
            };
            Ok(Answer::ok(format!("slog({x}) = {shown}\n"), json!({ "input": li_json(&x, digits), "slog": shown, "exact": s.is_exact() })))
        }
        TrCommand::Check { suite, samples } => {
            let rep = match suite {
                Suite::Axioms => check_axioms(samples, seed, prec),
                Suite::Growth => check_growth(5, 20, seed, prec),
                Suite::Derivative => {
                    let mut pts = vec![0.25, 1.5, 2.5];
                    pts.extend((0..samples.min(300)).map(|i| 0.01 + 2.98 * i as f64 / samples.min(300) as f64));
                    check_derivative(&pts, 1e-5, 1e-4)
                }
            };
            Ok(report_answer(&rep))
        }
    }
}

fn report_answer(rep: &Report) -> Answer {
    let code = if !rep.failures.is_empty() {
        EXIT_VIOLATION
    } else if !rep.precision_exhausted.is_empty() {
        EXIT_PRECISION
    } else {
        EXIT_OK
    };
    let seed = rep.seed.map_or(String::new(), |s| format!(" seed={s}"));
    let mut text = format!(
        "suite {}{seed}: {} checks, {} failures, {} undecided\n",
        rep.suite,
        rep.checks,
        rep.failures.len(),
        rep.precision_exhausted.len()
    );
    for f in &rep.failures {
        text += &format!("FAIL {}: {}\n", f.check, f.witness);
    }
    for p in &rep.precision_exhausted {
        text += &format!("UNDECIDED {p}\n");
    }
    Answer { code, text, json: serde_json::to_value(rep).expect("report") }
}

fn load_chi(path: &Path) -> Result<ChiStructure, Failure> {
    Ok(ChiStructure::from_json(&read_json(path)?)?)
}

fn rank(c: RankCommand, seed: u64) -> Result<Answer, Failure> {
    match c {
        RankCommand::Build { delta, out } => {
            let d = ordertype_arg(&delta)?;
            let chi = ChiStructure::new(d.clone(), seed)?;
            write_json(&out, &chi.to_json())?;
            Ok(Answer::ok(
                format!("built chi for {d} seed={seed} -> {}\n", out.display()),
                json!({ "delta": d.to_string(), "seed": seed, "out": out.display().to_string() }),
            ))
        }
        RankCommand::Apply(q) => chi_query(q, "apply"),
        RankCommand::Class(q) => chi_query(q, "class"),
        RankCommand::Shift(q) => chi_query(q, "shift"),
        RankCommand::Check { chi, samples } => {
            let mut c = load_chi(&chi)?;
            let contraction = check_contraction(&mut c, samples, seed)?;
            let orbit = check_orbit_bounds(&mut c, samples, 10, seed)?;
            write_json(&chi, &c.to_json())?;
            let passed = contraction.passed() && orbit.passed();
            let mut text = format!(
                "contraction seed={seed}: {} checks, {} violations\norbit bounds seed={seed}: {} checks, {} violations\n",
                contraction.checks,
                contraction.violations.len(),
                orbit.checks,
                orbit.violations.len()
            );
            for v in contraction.violations.iter().chain(&orbit.violations) {
                text += &format!("FAIL {:?}: {}\n", v.kind, v.witness);
            }
            Ok(Answer {
                code: if passed { EXIT_OK } else { EXIT_VIOLATION },
                text,
                json: json!({ "contraction": contraction, "orbit_bounds": orbit, "passed": passed }),
            })
        }
    }
}

fn chi_query(q: ChiQuery, op: &str) -> Result<Answer, Failure> {
    let mut chi = load_chi(&q.chi)?;
    let g = hahn_arg(&q.element)?;
    let out = match op {
        "apply" => chi.chi_apply(&g)?.to_string(),
        "class" => chi.class_of(&g)?.to_string(),
        _ => {
            let v = g.vg()?.as_rat().cloned().ok_or_else(|| Failure::usage("rational exponent expected"))?;
            if g.signum() != std::cmp::Ordering::Less {
                return Err(ContractionError::NotNegative(g.to_string()).into());
            }
            chi.shift(&v)?.to_string()
        }
    };
    write_json(&q.chi, &chi.to_json())?;
    Ok(Answer::ok(format!("{out}\n"), json!({ "op": op, "element": g.to_string(), "result": out })))
}

fn exists(delta: &str) -> Result<Answer, Failure> {
    let d = ordertype_arg(delta)?;
    let (text, v) = match exists_transexp(&d) {
        Ok(()) => ("yes".to_string(), json!({ "delta": d.to_string(), "exists": true })),
        Err(reason) => (format!("no: {reason}"), json!({ "delta": d.to_string(), "exists": false, "reason": reason })),
    };
    Ok(Answer::ok(text + "\n", v))
}

fn load_phi(path: &Path) -> Result<PhiMap, Failure> {
    Ok(PhiMap::from_json(&read_json(path)?)?)
}

fn synth(c: SynthCommand, seed: u64) -> Result<Answer, Failure> {
    match c {
        SynthCommand::Phi { chi, mode, out } => {
            let chi = load_chi(&chi)?;
            let phi = build_phi(chi, mode.into(), seed)?;
            write_json(&out, &phi.to_json())?;
            let chain: Vec<Value> = phi.chain().iter().map(|(k, b)| json!([k, b.to_string()])).collect();
            Ok(Answer::ok(
                format!("built phi mode={} seed={seed} -> {}\n", phi.mode().name(), out.display()),
                json!({ "mode": phi.mode(), "seed": seed, "chain": chain, "out": out.display().to_string() }),
            ))
        }
        SynthCommand::Tl { phi: path, a, b } => {
            let mut phi = load_phi(&path)?;
            let a = hahn_arg(&a)?;
            let b = rational_arg(&b)?;
            let term = tl_apply(&a, &b)?;
            let pos = phi.phi(&a)?;
            let class = phi.position_class(&pos)?;
            write_json(&path, &phi.to_json())?;
            Ok(Answer::ok(
                format!("{term}\nphi class {class} at position {pos}\n"),
                json!({ "term": term.to_string(), "k": term.k, "t": term.t.to_string(), "phi_position": pos.to_string(), "phi_class": class.to_string() }),
            ))
        }
        SynthCommand::Compare { phi: path, p, q } => {
            let mut phi = load_phi(&path)?;
            let (p, q) = (parse_pterm(&eta(), &p)?, parse_pterm(&eta(), &q)?);
            let o = pterm_compare(&mut phi, &p, &q)?;
            write_json(&path, &phi.to_json())?;
            let word = match o {
                std::cmp::Ordering::Less => "LT",
                std::cmp::Ordering::Equal => "EQ",
                std::cmp::Ordering::Greater => "GT",
            };
            Ok(Answer::ok(format!("{word}\n"), json!({ "p": p.to_string(), "q": q.to_string(), "order": word })))
        }
        SynthCommand::Xt { phi: path, g } => {
            let mut phi = load_phi(&path)?;
            let g = hahn_arg(&g)?;
            let xt = phi.xt_class(&g)?;
            let class = phi.chi_mut().class_of(&g)?;
            let above = phi.class_cmp(&xt, &class)? == std::cmp::Ordering::Greater;
            write_json(&path, &phi.to_json())?;
            Ok(Answer::ok(
                format!("[g] = {class}\n[X_T(g)] = {xt}\n"),
                json!({ "g": g.to_string(), "class": class.to_string(), "xt_class": xt.to_string(), "above": above }),
            ))
        }
        SynthCommand::Check { phi: path, samples } => {
            let mut phi = load_phi(&path)?;
            let rep = check_growth_encoding(&mut phi, samples, seed)?;
            write_json(&path, &phi.to_json())?;
            let mut text = format!(
                "growth encoding mode={} seed={seed}: {} samples, {} violations\n",
                rep.mode.name(),
                rep.samples,
                rep.violations.len()
            );
            for v in &rep.violations {
                text += &format!("FAIL g={} [g]={} [X_T(g)]={}\n", v.g, v.class, v.xt_class);
            }
            Ok(Answer {
                code: if rep.passed() { EXIT_OK } else { EXIT_VIOLATION },
                text,
                json: serde_json::to_value(&rep).expect("report"),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn otf(args: &[&str]) -> Outcome {
        run(std::iter::once("otf").chain(args.iter().copied()))
    }

    #[test]
    fn exists_examples() {
        assert_eq!(otf(&["exists", "--delta", "eta"]), Outcome { code: 0, stdout: "yes\n".into(), stderr: String::new() });
        assert_eq!(otf(&["exists", "--delta", "3"]).stdout, "no: not dense\n");
    }

    #[test]
    fn parse_errors_exit_2() {
        assert_eq!(otf(&["exists", "--delta", "eta +"]).code, EXIT_USAGE);
        assert_eq!(otf(&["tr", "eval", "1/0"]).code, EXIT_USAGE);
        assert_eq!(otf(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(otf(&["tr", "slog", "2", "3/2"]).code, EXIT_USAGE);
    }

    #[test]
    fn tr_eval_negative() {
        let o = otf(&["tr", "eval", "-7/2"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.starts_with("T(-7/2) = 1/E^4(1/2)"), "{}", o.stdout);
    }

    #[test]
    fn slog_examples() {
        assert_eq!(otf(&["tr", "slog", "3", "0"]).stdout, "slog(E^3(0)) = 2\n");
        assert_eq!(otf(&["tr", "slog", "3", "0", "--reciprocal"]).stdout, "slog(1/E^3(0)) = -2\n");
    }

    #[test]
    fn json_emit() {
        let o = otf(&["--emit", "json", "tr", "eval", "2"]);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["value"]["level"], 3);
        assert_eq!(v["value"]["index"]["exact"], "0");
    }

    #[test]
    fn help_is_success() {
        assert_eq!(otf(&["--help"]).code, 0);
    }
}
