//! Command-line front end for `gepnerkit`.
//!
//! [`dispatch`] parses an argument vector, runs one subcommand and returns the
//! process exit code: 0 when every check passes, 1 when a check fails, 2 for
//! malformed input or usage errors.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gepnerkit::bginequality::{classical_bg, rank2_certificate, strong_bg_verdict};
use gepnerkit::charges::{
    evaluate, gepner_eigen_check, monodromy_matrix, rewrite_equivalence_check, zb_th,
};
use gepnerkit::periods::{aspinwall_check, build_series, gepner_limit_check};
use gepnerkit::rational::{parse_rational, to_string as q_string};
use gepnerkit::surface::{clifford_verdict, pushforward_chb, r2_clifford_certificate, zg_prime};
use gepnerkit::tilt::{classify_tilt, hn_sort, lemma_property_check, HnPiece, LabeledClass};
use gepnerkit::{ChernVector, CycloNumber, Error, Outcome, ProofTrace, SurfaceClass, Verdict, Q};
use serde::Serialize;
use serde_json::{json, Value as Json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const PRECISION_ENV: &str = "GEPNERKIT_PRECISION";
const DEFAULT_PRECISION: u32 = 256;
const DEFAULT_TERMS: usize = 250;
const BOX_DIGITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Md,
}

#[derive(Debug, Parser)]
#[command(name = "gepnerkit", version, about = "Exact checks for Gepner-point stability on the quintic 3-fold")]
struct Cli {
    /// Working precision in bits [default: 256, or $GEPNERKIT_PRECISION]
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Number of series terms
    #[arg(long, global = true, default_value_t = DEFAULT_TERMS)]
    terms: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate Z_G†, Z_{B,tH} or the surface charge Z_G'†
    Charge(ChargeArgs),
    /// Check Z_G†∘M = α·Z_G† and M⁵ = I
    MonodromyCheck,
    /// Evaluate a truncated period series
    Periods(PeriodsArgs),
    /// Compare Σ Φ_i·ch_i(O(m)) with Aspinwall's polynomials
    AspinwallCheck {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-3,-2,-1,0,1,2,3")]
        m: Vec<i64>,
    },
    /// Classical and strengthened Bogomolov–Gieseker checks
    BgCheck {
        /// Chern vector as inline JSON or a path to a JSON file
        #[arg(long)]
        ch: String,
    },
    /// Rank-two case analysis for a given c₂·H
    Rank2Certificate {
        #[arg(long, allow_hyphen_values = true)]
        c2h: i64,
    },
    /// Decide dh/R > 5/8 + c/b for a coherent system
    CliffordCheck(SurfaceArgs),
    /// Clifford-bound case analysis for R = 2
    CliffordCertificate {
        #[arg(long, allow_hyphen_values = true)]
        dh: i64,
    },
    /// Sort pieces by decreasing slope
    Hn {
        #[arg(long)]
        input: String,
        #[arg(long)]
        strict: bool,
    },
    /// Classify declared classes and check charge positivity on the heart
    HeartCheck {
        #[arg(long)]
        input: String,
    },
    /// Run every identity check and certificate
    VerifyAll,
}

#[derive(Debug, Args)]
struct ChargeArgs {
    /// Chern vector (v0, v1, v2, v3) as inline JSON or a path to a JSON file
    #[arg(long, conflicts_with_all = ["big_r", "r", "dh", "n"])]
    ch: Option<String>,
    /// Also evaluate Z_{B,tH} at this t > 0
    #[arg(long, requires = "ch")]
    t: Option<String>,
    #[arg(long = "R")]
    big_r: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    dh: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    #[arg(long = "R")]
    big_r: u64,
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    #[arg(long, allow_hyphen_values = true)]
    dh: i64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    n: String,
}

#[derive(Debug, Args)]
struct PeriodsArgs {
    #[arg(long)]
    j: i64,
    /// ψ as RE,IM (rationals or decimals)
    #[arg(long, allow_hyphen_values = true)]
    psi: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub terms: usize,
    pub format: Format,
}

impl RunConfig {
    fn resolve(cli: &Cli) -> Result<Self, String> {
        let precision_bits = match cli.precision_bits {
            Some(p) => p,
            None => match std::env::var(PRECISION_ENV) {
                Ok(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| format!("{PRECISION_ENV}={s:?} is not a bit count"))?,
                Err(_) => DEFAULT_PRECISION,
            },
        };
        if precision_bits < 32 {
            return Err(format!("precision must be at least 32 bits, got {precision_bits}"));
        }
        if cli.terms < 5 {
            return Err(format!("need at least 5 terms, got {}", cli.terms));
        }
        Ok(Self { precision_bits, terms: cli.terms, format: cli.format })
    }
}

/// Failure of a subcommand before any verdict was reached.
#[derive(Debug)]
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError(format!("invalid JSON: {e}"))
    }
}

type CmdResult = Result<(String, i32), InputError>;

fn read_json(arg: &str) -> Result<Json, InputError> {
    let t = arg.trim_start();
    let text = if t.starts_with('[') || t.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| InputError(format!("cannot read {arg}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn json_rational(v: &Json) -> Result<Q, InputError> {
    match v {
        Json::String(s) => Ok(parse_rational(s)?),
        Json::Number(n) => Ok(parse_rational(&n.to_string())?),
        other => Err(InputError(format!("expected a rational, got {other}"))),
    }
}

/// Accepts `[v0, v1, v2, v3]` or `{"ch": [...]}`, entries as strings or numbers.
fn parse_chern(arg: &str) -> Result<ChernVector, InputError> {
    let v = read_json(arg)?;
    let arr = match &v {
        Json::Array(a) => a,
        Json::Object(o) => match o.get("ch") {
            Some(Json::Array(a)) => a,
            _ => return Err(InputError("expected an object with a \"ch\" array".into())),
        },
        _ => return Err(InputError("expected a 4-element array".into())),
    };
    if arr.len() != 4 {
        return Err(InputError(format!("a Chern vector has 4 entries, got {}", arr.len())));
    }
    let mut out: [Q; 4] = Default::default();
    for (slot, x) in out.iter_mut().zip(arr) {
        *slot = json_rational(x)?;
    }
    Ok(ChernVector::from_array(out))
}

fn cyclo_json(x: &CycloNumber, bits: u32) -> Result<Json, InputError> {
    let b = x.embed(bits)?;
    Ok(json!({
        "exact": x,
        "display": x.to_zeta_string(),
        "box": b.to_decimal(BOX_DIGITS),
    }))
}

fn ch_json(c: &ChernVector) -> Json {
    json!(c.coords().iter().map(q_string).collect::<Vec<_>>())
}

fn exit_for(v: Verdict) -> i32 {
    if v.is_pass() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable report")
}

fn cmd_charge(a: &ChargeArgs, cfg: &RunConfig) -> CmdResult {
    let bits = cfg.precision_bits;
    if let Some(ch) = &a.ch {
        let c = parse_chern(ch)?;
        let z = evaluate(&c);
        let mut out = json!({ "ch": ch_json(&c), "zg_dagger": cyclo_json(&z, bits)? });
        if let Some(t) = &a.t {
            let t = parse_rational(t)?;
            out["zb_th"] = serde_json::to_value(zb_th(&c, &t)?)?;
            out["t"] = json!(q_string(&t));
        }
        return Ok((to_json(&out), EXIT_OK));
    }
    let (Some(big_r), Some(r), Some(dh)) = (a.big_r, a.r, a.dh) else {
        return Err(InputError("give either --ch or all of --R, --r, --dh (and optionally --n)".into()));
    };
    let n = parse_rational(a.n.as_deref().unwrap_or("0"))?;
    let s = SurfaceClass::new(big_r, r, dh, n)?;
    let out = json!({
        "surface": s,
        "ch_b": ch_json(&pushforward_chb(&s)),
        "zg_prime": cyclo_json(&zg_prime(&s), bits)?,
    });
    Ok((to_json(&out), EXIT_OK))
}

fn cmd_monodromy(cfg: &RunConfig) -> CmdResult {
    let m = monodromy_matrix();
    let eigen = gepner_eigen_check();
    let order5 = m.pow(5).is_identity();
    let poly: Vec<String> = m.char_poly().iter().map(q_string).collect();
    let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(q_string).collect()).collect();
    let code = if eigen && order5 { EXIT_OK } else { EXIT_FAIL };
    let text = match cfg.format {
        Format::Json => to_json(&json!({
            "matrix": rows,
            "char_poly": poly,
            "eigen_check": Verdict::from_bool(eigen),
            "order_five": Verdict::from_bool(order5),
        })),
        Format::Md => format!(
            "| check | result |\n|---|---|\n| Z∘M = α·Z | {} |\n| M⁵ = I | {} |\n",
            Verdict::from_bool(eigen).label(),
            Verdict::from_bool(order5).label()
        ),
    };
    Ok((text, code))
}

fn cmd_periods(a: &PeriodsArgs, cfg: &RunConfig) -> CmdResult {
    let (re, im) = a
        .psi
        .split_once(',')
        .ok_or_else(|| InputError(format!("--psi expects RE,IM, got {:?}", a.psi)))?;
    let (re, im) = (parse_rational(re.trim())?, parse_rational(im.trim())?);
    let s = build_series(a.j, cfg.terms, cfg.precision_bits)?;
    let v = s.eval(&re, &im)?;
    let digits = (cfg.precision_bits as usize * 3 / 10).max(8);
    let out = json!({
        "j": a.j,
        "psi": { "re": q_string(&re), "im": q_string(&im) },
        "terms": cfg.terms,
        "precision_bits": cfg.precision_bits,
        "value": {
            "re": gepnerkit::hp::format_float(&v.value.re, digits),
            "im": gepnerkit::hp::format_float(&v.value.im, digits),
        },
        "error_bound": gepnerkit::hp::format_float(&v.error_bound, 6),
    });
    Ok((to_json(&out), EXIT_OK))
}

fn cmd_aspinwall(ms: &[i64]) -> CmdResult {
    let ok = aspinwall_check(ms);
    let out = json!({ "m": ms, "verdict": Verdict::from_bool(ok) });
    Ok((to_json(&out), exit_for(Verdict::from_bool(ok))))
}

fn cmd_bg(ch: &str) -> CmdResult {
    let c = parse_chern(ch)?;
    let classical = classical_bg(&c)?;
    let mut verdict = classical.verdict;
    let mut out = json!({ "ch": ch_json(&c), "classical": classical });
    match strong_bg_verdict(&c) {
        Ok(strong) => {
            if !strong.verdict.is_pass() {
                verdict = Verdict::Fail;
            }
            out["strong"] = serde_json::to_value(&strong)?;
        }
        Err(e) => out["strong"] = json!({ "applicable": false, "reason": e.to_string() }),
    }
    out["verdict"] = serde_json::to_value(verdict)?;
    Ok((to_json(&out), exit_for(verdict)))
}

fn trace_result(t: ProofTrace, format: Format) -> CmdResult {
    let code = exit_for(t.overall);
    Ok((report(std::slice::from_ref(&t), format), code))
}

fn cmd_clifford(a: &SurfaceArgs) -> CmdResult {
    let s = SurfaceClass::new(a.big_r, a.r, a.dh, parse_rational(&a.n)?)?;
    let r = clifford_verdict(&s)?;
    let code = exit_for(r.verdict);
    Ok((to_json(&json!({ "surface": s, "report": r })), code))
}

fn cmd_hn(input: &str, strict: bool) -> CmdResult {
    let pieces: Vec<HnPiece> = serde_json::from_value(read_json(input)?)?;
    let r = hn_sort(&pieces, strict)?;
    let code = exit_for(r.verdict);
    Ok((to_json(&r), code))
}

fn cmd_heart(input: &str, format: Format) -> CmdResult {
    let classes: Vec<LabeledClass> = serde_json::from_value(read_json(input)?)?;
    let trace = lemma_property_check(&classes)?;
    let code = exit_for(trace.overall);
    let text = match format {
        Format::Json => {
            let classes: Vec<Json> = classes
                .iter()
                .map(|c| json!({ "class": c, "tilt": classify_tilt(c).label() }))
                .collect();
            to_json(&json!({ "classes": classes, "trace": trace }))
        }
        Format::Md => {
            let mut s = String::from("| piece | tilt class |\n|---|---|\n");
            for (k, c) in classes.iter().enumerate() {
                s.push_str(&format!("| {k} | {} |\n", classify_tilt(c).label()));
            }
            s.push('\n');
            s.push_str(&trace.to_markdown());
            s
        }
    };
    Ok((text, code))
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteRow {
    pub check: String,
    pub expected: String,
    pub result: String,
    pub ok: bool,
}

fn row(check: &str, expected: &str, result: String) -> SuiteRow {
    SuiteRow { ok: expected == result, check: check.into(), expected: expected.into(), result }
}

fn pass_label(b: bool) -> String {
    Verdict::from_bool(b).label().to_string()
}

fn outcome_label(t: gepnerkit::Result<ProofTrace>) -> String {
    match t {
        Ok(t) if t.replay().unwrap_or(false) => t.outcome.label().to_string(),
        Ok(_) => "REPLAY-MISMATCH".into(),
        Err(e) => format!("ERROR: {e}"),
    }
}

/// Every identity check and certificate, evaluated concurrently.
pub fn verify_all_rows(cfg: &RunConfig) -> Vec<SuiteRow> {
    let bits = cfg.precision_bits;
    let terms = cfg.terms;
    type Job<'a> = Box<dyn Fn() -> SuiteRow + Send + Sync + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| row("eigen-check", "PASS", pass_label(gepner_eigen_check()))),
        Box::new(|| row("M^5 = I", "PASS", pass_label(monodromy_matrix().pow(5).is_identity()))),
        Box::new(|| row("aspinwall", "PASS", pass_label(aspinwall_check(&[-3, -2, -1, 0, 1, 2, 3])))),
        Box::new(|| row("gepner-limit", "PASS", pass_label(gepner_limit_check()))),
        Box::new(|| {
            let basis = [ChernVector::structure_sheaf(), ChernVector::point(), ChernVector::line_bundle(2)];
            row("rewrite-form", "PASS", pass_label(basis.iter().all(rewrite_equivalence_check)))
        }),
        Box::new(move || {
            let ok = build_series(0, terms, bits).map(|s| s.pf_residual_vanishes()).unwrap_or(false);
            row("pf-recursion", "PASS", pass_label(ok))
        }),
        Box::new(|| {
            let jardim = ChernVector::from_fracs([(4, 1), (-2, 1), (-1, 1), (-1, 3)]);
            let r = strong_bg_verdict(&jardim).map(|r| r.verdict.label().to_string());
            row("jardim strong-bg", "PASS", r.unwrap_or_else(|e| format!("ERROR: {e}")))
        }),
        Box::new(|| row("rank-2 c2H=2", "EXCLUDED", outcome_label(rank2_certificate(2)))),
        Box::new(|| row("rank-2 c2H=3", "CONSISTENT", outcome_label(rank2_certificate(3)))),
        Box::new(|| row("clifford dh=2", "EXCLUDED", outcome_label(r2_clifford_certificate(2)))),
        Box::new(|| row("clifford dh=3", "CONSISTENT", outcome_label(r2_clifford_certificate(3)))),
    ];
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs.iter().map(|j| s.spawn(j)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| row("panic", "PASS", "PANIC".into())))
            .collect()
    })
}

fn cmd_verify_all(cfg: &RunConfig) -> CmdResult {
    let rows = verify_all_rows(cfg);
    let all = rows.iter().all(|r| r.ok);
    let text = match cfg.format {
        Format::Json => to_json(&json!({ "rows": rows, "overall": Verdict::from_bool(all) })),
        Format::Md => {
            let mut s = String::from("| check | expected | result | status |\n|---|---|---|---|\n");
            for r in &rows {
                let status = if r.ok { "PASS" } else { "FAIL" };
                s.push_str(&format!("| {} | {} | {} | {status} |\n", r.check, r.expected, r.result));
            }
            s.push_str(&format!("\nOverall: {}\n", Verdict::from_bool(all).label()));
            s
        }
    };
    Ok((text, if all { EXIT_OK } else { EXIT_FAIL }))
}

/// Serializes traces: a JSON array, or markdown with a summary table followed
/// by each trace. An empty list gives an empty report.
pub fn report(traces: &[ProofTrace], format: Format) -> String {
    if traces.is_empty() {
        return String::new();
    }
    match format {
        Format::Json => to_json(&traces),
        Format::Md => {
            let mut s = String::from("| trace | verdict | outcome |\n|---|---|---|\n");
            for t in traces {
                s.push_str(&format!("| {} | {} | {} |\n", t.title, t.overall.label(), t.outcome.label()));
            }
            for t in traces {
                s.push('\n');
                s.push_str(&t.to_markdown());
                s.push('\n');
            }
            s.trim_end().to_string()
        }
    }
}

/// Exit code for a batch of traces: 1 if any failed.
pub fn report_exit_code(traces: &[ProofTrace]) -> i32 {
    if traces.iter().all(|t| t.passes() && t.outcome != Outcome::Inconclusive) {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let cfg = match RunConfig::resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let result = match &cli.command {
        Command::Charge(a) => cmd_charge(a, &cfg),
        Command::MonodromyCheck => cmd_monodromy(&cfg),
        Command::Periods(a) => cmd_periods(a, &cfg),
        Command::AspinwallCheck { m } => cmd_aspinwall(m),
        Command::BgCheck { ch } => cmd_bg(ch),
        Command::Rank2Certificate { c2h } => rank2_certificate(*c2h)
            .map_err(InputError::from)
            .and_then(|t| trace_result(t, cfg.format)),
        Command::CliffordCheck(a) => cmd_clifford(a),
        Command::CliffordCertificate { dh } => r2_clifford_certificate(*dh)
            .map_err(InputError::from)
            .and_then(|t| trace_result(t, cfg.format)),
        Command::Hn { input, strict } => cmd_hn(input, *strict),
        Command::HeartCheck { input } => cmd_heart(input, cfg.format),
        Command::VerifyAll => cmd_verify_all(&cfg),
    };
    match result {
        Ok((text, code)) => {
            if !text.is_empty() {
                let _ = writeln!(out, "{text}");
            }
            code
        }
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}
