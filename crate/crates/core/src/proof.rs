//! Proof documents and a checker that works from the document alone.
//!
//! Every symbolic payload is a string in the text grammar. The checker parses
//! them back and re-establishes each claim: the recurrence certificate, the
//! prefactor ratio, the soundness of the normalized pair, the boundary terms
//! and step, the assembled identity, and finally the stored numeric reports.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{boundary_limits, Constraint};
use crate::corpus::{exact_check, CorpusError, ExactCheck, IdentityJson};
use crate::gamma::GammaQuotient;
use crate::hyperterm::term_from_series;
use crate::linarg::LinArg;
use crate::numeric::verify::{verify_identity, VerificationReport, VerifyOptions};
use crate::parse::{parse_gamma_quotient, parse_ratfunc, parse_series, parse_term, ParseError};
use crate::pipeline::{derive_identity, prefactor_term, step_as_series, Derivation, IdentityStatement, ProofStep, Strategy};
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::telescoper::{verify_certificate, Recurrence};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceJson {
    /// The summand `t(n,k)` the recurrence annihilates.
    pub term: String,
    pub order: usize,
    pub coeffs: Vec<String>,
    pub certificate: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryJson {
    pub value_at_0: String,
    pub limit_at_inf: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofJson {
    pub input: String,
    pub shift: String,
    pub strategy: Strategy,
    pub recurrence: RecurrenceJson,
    /// `G_cert` of the normalized pair, `G = G_cert · F`.
    pub certificate: String,
    /// `λ(n)` with `F = λ t`.
    pub prefactor: String,
    pub step_term: String,
    pub boundary: BoundaryJson,
    pub constraints: Vec<String>,
    pub identity: IdentityJson,
    pub trace: Vec<ProofStep>,
    pub numeric_checks: Vec<VerificationReport>,
}

impl ProofJson {
    pub fn from_derivation(d: &Derivation) -> Self {
        let rec = &d.recurrence;
        ProofJson {
            input: d.input.to_string(),
            shift: d.shift.name(),
            strategy: d.strategy,
            recurrence: RecurrenceJson {
                term: d.family.to_string(),
                order: rec.order(),
                coeffs: rec.coeffs.iter().map(|c| c.to_string()).collect(),
                certificate: rec.certificate.to_string(),
            },
            certificate: d.normalized.certificate.to_string(),
            prefactor: d.normalized.prefactor.to_string(),
            step_term: d.sum.step.to_string(),
            boundary: BoundaryJson {
                value_at_0: d.sum.boundary.value_at_0.to_string(),
                limit_at_inf: d.sum.boundary.limit_at_inf.to_string(),
            },
            constraints: d.identity.constraints.iter().map(|c| c.to_string()).collect(),
            identity: IdentityJson::from_statement(&d.identity),
            trace: d.identity.trace.steps.clone(),
            numeric_checks: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proof serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CorpusError> {
        serde_json::from_str(s).map_err(|e| CorpusError::Json(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<CheckItem>,
    pub passed: bool,
}

struct Checker {
    items: Vec<CheckItem>,
}

impl Checker {
    fn record(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.items.push(CheckItem { name: name.into(), passed, detail: detail.into() });
        passed
    }

    fn parsed<T>(&mut self, name: &str, r: Result<T, ParseError>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.record(name, false, format!("unparsable: {e}"));
                None
            }
        }
    }
}

fn same_identity(a: &IdentityStatement, b: &IdentityStatement) -> Result<(), String> {
    if a.lhs.len() != b.lhs.len() {
        return Err(format!("{} left-hand terms instead of {}", a.lhs.len(), b.lhs.len()));
    }
    for (i, ((ca, sa), (cb, sb))) in a.lhs.iter().zip(&b.lhs).enumerate() {
        if sa != sb {
            return Err(format!("series {i}: {sa} vs {sb}"));
        }
        if !ca.equivalent(cb) {
            return Err(format!("coefficient {i}: {ca} vs {cb}"));
        }
    }
    if !a.rhs.equivalent(&b.rhs) {
        return Err(format!("right side: {} vs {}", a.rhs, b.rhs));
    }
    let mut ca: Vec<String> = a.constraints.iter().map(|c| c.to_string()).collect();
    let mut cb: Vec<String> = b.constraints.iter().map(|c| c.to_string()).collect();
    ca.sort();
    cb.sort();
    if ca != cb {
        return Err(format!("constraints {ca:?} vs {cb:?}"));
    }
    Ok(())
}

/// Re-checks `proof`. Stored numeric reports are recomputed with their own
/// seed, precision and tolerance and must match exactly.
pub fn check_proof(proof: &ProofJson) -> CheckReport {
    let mut c = Checker { items: Vec::new() };
    run_checks(proof, &mut c);
    let passed = !c.items.is_empty() && c.items.iter().all(|i| i.passed);
    CheckReport { checks: c.items, passed }
}

fn run_checks(proof: &ProofJson, c: &mut Checker) -> Option<()> {
    let input = c.parsed("input", parse_series(&proof.input))?;
    let shift = match Var::param(&proof.shift) {
        Ok(v) => v,
        Err(e) => {
            c.record("input", false, e.to_string());
            return None;
        }
    };
    // The family is rebuilt from the input rather than trusted.
    let image = match proof.strategy {
        Strategy::Terminating => LinArg::n(),
        _ => &LinArg::param(shift) + &LinArg::n(),
    };
    let family = match term_from_series(&input.substitute(shift, &image)) {
        Ok(t) => t,
        Err(e) => {
            c.record("family", false, e.to_string());
            return None;
        }
    };
    let stated = c.parsed("recurrence.term", parse_term(&proof.recurrence.term))?;
    let same_family =
        stated.shift_quotient(Var::K) == family.shift_quotient(Var::K) && stated.n_shift_ratio(1) == family.n_shift_ratio(1);
    c.record("family", same_family, format!("{input} with {shift} -> {image}"));

    let coeffs = proof
        .recurrence
        .coeffs
        .iter()
        .map(|s| parse_ratfunc(s))
        .collect::<Result<Vec<_>, _>>();
    let coeffs = c.parsed("recurrence.coeffs", coeffs)?;
    let rcert = c.parsed("recurrence.certificate", parse_ratfunc(&proof.recurrence.certificate))?;
    let rec = Recurrence { coeffs, certificate: rcert };
    let order_ok = rec.order() == proof.recurrence.order;
    c.record(
        "recurrence",
        order_ok && verify_certificate(&family, &rec),
        format!("order {}", rec.order()),
    );

    let lambda = c.parsed("prefactor", parse_gamma_quotient(&proof.prefactor))?;
    if rec.order() == 1 {
        let want = -(&rec.coeffs[1] / &rec.coeffs[0]);
        c.record("prefactor-ratio", lambda.shift_ratio_n() == want, format!("lambda(n+1)/lambda(n) = {want}"));
    } else {
        c.record("prefactor-ratio", false, "only first-order recurrences are normalized");
        return None;
    }

    let g_cert = c.parsed("certificate", parse_ratfunc(&proof.certificate))?;
    let Some(lambda_term) = prefactor_term(&lambda) else {
        c.record("soundness", false, "prefactor is not a product of n-Pochhammers");
        return None;
    };
    let f = family.mul(&lambda_term);
    let pure = Recurrence { coeffs: vec![-RatFunc::one(), RatFunc::one()], certificate: g_cert.clone() };
    c.record("soundness", verify_certificate(&f, &pure), "F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k)");

    let constraints = proof
        .constraints
        .iter()
        .map(|s| Constraint::parse(s).ok_or(s))
        .collect::<Result<Vec<_>, _>>();
    let constraints = match constraints {
        Ok(cs) => cs,
        Err(s) => {
            c.record("constraints", false, format!("unparsable constraint {s:?}"));
            return None;
        }
    };

    let step = c.parsed("step_term", parse_gamma_quotient(&proof.step_term))?;
    let stated_id = match proof.identity.to_statement() {
        Ok(id) => id,
        Err(e) => {
            c.record("identity", false, e.to_string());
            return None;
        }
    };
    match proof.strategy {
        Strategy::Terminating => {
            let r0 = g_cert.substitute_rational(Var::K, &Q::from_integer(0.into()));
            c.record("boundary", r0.is_some_and(|r| r.is_zero()), "G(n,0) = 0");
            let check = ExactCheck { param: proof.shift.clone(), max: 5 };
            let ok = exact_check(&stated_id, &check).map(|r| r.passed).unwrap_or(false);
            c.record("exact-check", ok, format!("{} = 0..5", proof.shift));
        }
        _ => {
            let boundary = match boundary_limits(&f, &g_cert, &constraints) {
                Ok(b) => b,
                Err(e) => {
                    c.record("boundary", false, e.to_string());
                    return None;
                }
            };
            let stated0 = c.parsed("boundary.value_at_0", parse_gamma_quotient(&proof.boundary.value_at_0))?;
            let ok = boundary.value_at_0.equivalent(&stated0) && boundary.limit_at_inf.to_string() == proof.boundary.limit_at_inf;
            c.record("boundary", ok, format!("G(n,0) = {}, lim_k = {}", boundary.value_at_0, boundary.limit_at_inf));
            let recomputed = match &boundary.limit_at_inf {
                crate::asymptotics::Limit::Zero(_) => GammaQuotient::from_ratfunc(-RatFunc::one()).mul(&boundary.value_at_0),
                crate::asymptotics::Limit::Finite(g) if boundary.value_at_0.is_zero() => g.clone(),
                _ => GammaQuotient::zero(),
            };
            let step_ok = recomputed.equivalent(&step);
            c.record("step", step_ok, format!("step(n) = {step}"));
            if !step.is_zero() {
                let lambda0 = lambda.at_n(0);
                let ok = match step_as_series(&step) {
                    Ok((coef, spec)) => stated_id.lhs.get(1).is_some_and(|(b, s)| *s == spec && b.equivalent(&lambda0.mul(&coef))),
                    Err(_) => false,
                };
                c.record("step-series", ok, "second series is the partial-sum limit of the step");
            }
        }
    }

    // The limit rules are replayed by re-running the derivation from the input.
    match derive_identity(&input, shift) {
        Ok(d) => {
            let r = same_identity(&stated_id, &d.identity);
            let strategy_ok = d.strategy == proof.strategy;
            c.record(
                "identity",
                r.is_ok() && strategy_ok,
                r.err().unwrap_or_else(|| format!("re-derived by the {} route", d.strategy)),
            );
        }
        Err(e) => {
            c.record("identity", false, e.to_string());
        }
    }

    for (i, stored) in proof.numeric_checks.iter().enumerate() {
        let opts = VerifyOptions {
            digits: stored.digits,
            tol: stored.tol,
            samples: stored.samples,
            seed: stored.seed,
            ..Default::default()
        };
        let fresh = verify_identity(&stated_id, &opts);
        let ok = fresh.passed && fresh == *stored;
        c.record(
            &format!("numeric[{i}]"),
            ok,
            format!("{} points, max relative error {:e}", fresh.points.len(), fresh.max_rel_error),
        );
    }
    Some(())
}

/// Derives, optionally verifies numerically, and packages a proof.
pub fn prove(input: &crate::hyperterm::SeriesSpec, shift: Var, verify: Option<&VerifyOptions>) -> Result<ProofJson, crate::pipeline::PipelineError> {
    let d = derive_identity(input, shift)?;
    let mut proof = ProofJson::from_derivation(&d);
    if let Some(opts) = verify {
        proof.numeric_checks.push(verify_identity(&d.identity, opts));
    }
    Ok(proof)
}
