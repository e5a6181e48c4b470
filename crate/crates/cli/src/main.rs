//! `telesum`: telescoping certificates, derived identities and their numeric checks.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use telesum_core::corpus::{builtin, parse_corpus, verify_record, IdentityRecord, RecordResult};
use telesum_core::numeric::verify::VerifyOptions;
use telesum_core::parse::{parse_series, parse_term, ParseError};
use telesum_core::pipeline::PipelineError;
use telesum_core::proof::{check_proof, prove, CheckReport, ProofJson};
use telesum_core::ratfunc::RatFunc;
use telesum_core::symbol::Var;
use telesum_core::telescoper::{gosper, verify_certificate, verify_gosper, wz_certificate, zeilberger, Recurrence};

const PARSE: u8 = 2;
const TELESCOPING: u8 = 3;
const ASYMPTOTICS: u8 = 4;
const NUMERIC: u8 = 5;
const OTHER: u8 = 1;

#[derive(Parser)]
#[command(name = "telesum", version, about = "Telescoping certificates and identities for hypergeometric series")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct NumericOpts {
    /// Target decimal digits.
    #[arg(long, env = "TELESUM_PRECISION", default_value_t = 40)]
    digits: u32,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-25)]
    tol: f64,
}

impl NumericOpts {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            digits: self.digits,
            tol: self.tol,
            samples: self.samples,
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Indefinite summation of a term in k.
    Gosper {
        /// Term in the grammar, or @FILE.
        #[arg(long)]
        term: String,
    },
    /// Recurrence in n for a term in n and k.
    Zeilberger {
        #[arg(long)]
        term: String,
        /// Largest order tried.
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// WZ certificate R with G = R F.
    Wz {
        #[arg(long)]
        term: String,
    },
    /// Derive an identity by shifting one parameter by n.
    Prove {
        #[arg(long)]
        series: String,
        #[arg(long)]
        shift: String,
        #[arg(long)]
        no_verify: bool,
        #[command(flatten)]
        numeric: NumericOpts,
    },
    /// Verify a corpus file (or `builtin`) or re-check a proof document.
    Verify {
        #[arg(long, conflicts_with = "proof")]
        corpus: Option<String>,
        #[arg(long)]
        proof: Option<String>,
        #[command(flatten)]
        numeric: NumericOpts,
    },
    /// Verify every bundled identity.
    Corpus {
        #[command(flatten)]
        numeric: NumericOpts,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(PARSE, format!("parse error: {e}"))
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match e.stage {
            "input" => PARSE,
            "zeilberger" | "normalize" => TELESCOPING,
            _ => ASYMPTOTICS,
        };
        Failure::new(code, e.to_string())
    }
}

/// Output document plus the exit code it implies.
struct Outcome {
    json: serde_json::Value,
    text: String,
    code: u8,
}

fn read_arg(s: &str) -> Result<String, Failure> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|t| t.trim().to_string())
            .map_err(|e| Failure::new(OTHER, format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable output")
}

fn run_gosper(term: &str) -> Result<Outcome, Failure> {
    let t = parse_term(&read_arg(term)?)?;
    let r = t.shift_quotient(Var::K);
    let res = gosper(&r);
    let cert = res.certificate.as_ref();
    let verified = cert.is_some_and(|c| verify_gosper(&r, c));
    let json = json!({
        "term": t.to_string(),
        "summable": res.summable,
        "certificate": cert.map(|c| c.to_string()),
        "antidifference": cert.map(|c| format!("({c})*{t}")),
        "verified": verified,
    });
    let text = match cert {
        Some(c) => format!("summable: sum_k t(k) telescopes with G(k) = ({c}) * t(k)\nverified: {verified}\n"),
        None => format!("not Gosper-summable: {t}\n"),
    };
    let code = if res.summable && verified { 0 } else { TELESCOPING };
    Ok(Outcome { json, text, code })
}

fn run_zeilberger(term: &str, order: usize) -> Result<Outcome, Failure> {
    let t = parse_term(&read_arg(term)?)?;
    let rec = zeilberger(&t, order).map_err(|e| Failure::new(TELESCOPING, e.to_string()))?;
    let verified = verify_certificate(&t, &rec);
    let coeffs: Vec<String> = rec.coeffs.iter().map(|c| c.to_string()).collect();
    let json = json!({
        "term": t.to_string(),
        "order": rec.order(),
        "coeffs": coeffs,
        "certificate": rec.certificate.to_string(),
        "verified": verified,
    });
    let mut text = format!("order {}\n", rec.order());
    for (j, c) in coeffs.iter().enumerate() {
        let _ = writeln!(text, "  c{j} = {c}");
    }
    let _ = writeln!(text, "certificate R = {}\nverified: {verified}", rec.certificate);
    Ok(Outcome { json, text, code: if verified { 0 } else { TELESCOPING } })
}

fn run_wz(term: &str) -> Result<Outcome, Failure> {
    let f = parse_term(&read_arg(term)?)?;
    let cert = wz_certificate(&f).map_err(|e| Failure::new(TELESCOPING, e.to_string()))?;
    let pure = Recurrence { coeffs: vec![-RatFunc::one(), RatFunc::one()], certificate: cert.clone() };
    let verified = verify_certificate(&f, &pure);
    let json = json!({ "term": f.to_string(), "certificate": cert.to_string(), "verified": verified });
    let text = format!("WZ certificate R = {cert}\nverified: {verified}\n");
    Ok(Outcome { json, text, code: if verified { 0 } else { TELESCOPING } })
}

fn proof_text(p: &ProofJson) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Input: {} (shift {} by n, {} route)", p.input, p.shift, p.strategy);
    let _ = writeln!(s, "Family: F0(n,k) = {}", p.recurrence.term);
    for (i, step) in p.trace.iter().enumerate() {
        let _ = writeln!(s, "{:>2}. [{}] {}", i + 1, step.rule, step.detail);
        if !step.consumed.is_empty() {
            let _ = writeln!(s, "      using {}", step.consumed.join(", "));
        }
    }
    let _ = writeln!(s, "Result:");
    let lhs: Vec<String> = p.identity.lhs.iter().map(|t| format!("({}) * {}", t.coefficient, t.series)).collect();
    let _ = writeln!(s, "  {}\n  = {}", lhs.join("\n  + "), p.identity.rhs);
    if !p.constraints.is_empty() {
        let _ = writeln!(s, "  for {}", p.constraints.join(", "));
    }
    for r in &p.numeric_checks {
        let _ = writeln!(
            s,
            "Numeric check: {} points at {} digits, max relative error {:.3e}: {}",
            r.points.len(),
            r.digits,
            r.max_rel_error,
            if r.passed { "pass" } else { "FAIL" }
        );
    }
    s
}

fn run_prove(series: &str, shift: &str, no_verify: bool, numeric: &NumericOpts) -> Result<Outcome, Failure> {
    let spec = parse_series(&read_arg(series)?)?;
    let v = Var::param(shift).map_err(|e| Failure::new(PARSE, e.to_string()))?;
    let opts = numeric.options();
    let proof = prove(&spec, v, (!no_verify).then_some(&opts))?;
    let ok = proof.numeric_checks.iter().all(|r| r.passed);
    Ok(Outcome {
        text: proof_text(&proof),
        json: to_value(&proof),
        code: if ok { 0 } else { NUMERIC },
    })
}

fn corpus_outcome(records: &[IdentityRecord], opts: &VerifyOptions) -> Result<Outcome, Failure> {
    let mut results: Vec<RecordResult> = Vec::new();
    for rec in records {
        results.push(verify_record(rec, opts).map_err(|e| Failure::new(PARSE, format!("{}: {e}", rec.id)))?);
    }
    let passed = results.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &results {
        let exact = r.exact.as_ref().map(|e| format!(", exact for {} in {:?}", e.param, e.agreed)).unwrap_or_default();
        let _ = writeln!(
            text,
            "{:<28} {}  ({} points, max relative error {:.3e}{exact})",
            r.id,
            if r.passed { "pass" } else { "FAIL" },
            r.report.points.len(),
            r.report.max_rel_error
        );
        if let Some(f) = &r.report.failure {
            let _ = writeln!(text, "    {f}");
        }
    }
    Ok(Outcome {
        json: json!({ "passed": passed, "results": to_value(&results) }),
        text,
        code: if passed { 0 } else { NUMERIC },
    })
}

fn check_outcome(report: CheckReport) -> Outcome {
    let mut text = String::new();
    for c in &report.checks {
        let _ = writeln!(text, "{:<16} {}  {}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
    let failed = report.checks.iter().find(|c| !c.passed).map(|c| c.name.as_str());
    let code = match failed {
        None => 0,
        Some("family" | "recurrence" | "prefactor-ratio" | "soundness") => TELESCOPING,
        Some("boundary" | "step" | "step-series" | "identity" | "exact-check") => ASYMPTOTICS,
        Some(f) if f.starts_with("numeric") => NUMERIC,
        Some(_) => PARSE,
    };
    Outcome { json: to_value(&report), text, code }
}

fn run_verify(corpus: Option<&str>, proof: Option<&str>, numeric: &NumericOpts) -> Result<Outcome, Failure> {
    let opts = numeric.options();
    match (corpus, proof) {
        (Some("builtin"), None) => corpus_outcome(&builtin(), &opts),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::new(OTHER, format!("{path}: {e}")))?;
            let records = parse_corpus(&text).map_err(|e| Failure::new(PARSE, e.to_string()))?;
            corpus_outcome(&records, &opts)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::new(OTHER, format!("{path}: {e}")))?;
            let doc = ProofJson::from_json(&text).map_err(|e| Failure::new(PARSE, e.to_string()))?;
            Ok(check_outcome(check_proof(&doc)))
        }
        _ => Err(Failure::new(OTHER, "verify needs --corpus or --proof")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.verb {
        Verb::Gosper { term } => run_gosper(term),
        Verb::Zeilberger { term, order } => run_zeilberger(term, *order),
        Verb::Wz { term } => run_wz(term),
        Verb::Prove { series, shift, no_verify, numeric } => run_prove(series, shift, *no_verify, numeric),
        Verb::Verify { corpus, proof, numeric } => run_verify(corpus.as_deref(), proof.as_deref(), numeric),
        Verb::Corpus { numeric } => corpus_outcome(&builtin(), &numeric.options()),
    };
    match outcome {
        Ok(o) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&o.json).expect("json")),
                Format::Text => print!("{}", o.text),
            }
            ExitCode::from(o.code)
        }
        Err(f) => {
            match cli.format {
                Format::Json => println!("{}", json!({ "error": f.message, "exit_code": f.code })),
                Format::Text => eprintln!("error: {}", f.message),
            }
            ExitCode::from(f.code)
        }
    }
}
