//! Stored identities in the text grammar, and their verification.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::Constraint;
use crate::linarg::LinArg;
use crate::numeric::verify::{verify_identity, VerificationReport, VerifyOptions};
use crate::parse::{parse_gamma_quotient, parse_series, ParseError};
use crate::pipeline::{terminating_sum_equals, IdentityStatement, ProofTrace};
use crate::symbol::Var;

const BUILTIN: &str = include_str!("../data/corpus.json");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{field}: {error}")]
    Parse { field: String, error: ParseError },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhsTerm {
    pub coefficient: String,
    pub series: String,
}

/// An [`IdentityStatement`] in printed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityJson {
    pub lhs: Vec<LhsTerm>,
    pub rhs: String,
    pub constraints: Vec<String>,
}

impl IdentityJson {
    pub fn from_statement(id: &IdentityStatement) -> Self {
        IdentityJson {
            lhs: id
                .lhs
                .iter()
                .map(|(c, s)| LhsTerm { coefficient: c.to_string(), series: s.to_string() })
                .collect(),
            rhs: id.rhs.to_string(),
            constraints: id.constraints.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_statement(&self) -> Result<IdentityStatement, CorpusError> {
        let parse_err = |field: String| move |error| CorpusError::Parse { field: field.clone(), error };
        let mut lhs = Vec::new();
        for (i, t) in self.lhs.iter().enumerate() {
            let c = parse_gamma_quotient(&t.coefficient).map_err(parse_err(format!("lhs[{i}].coefficient")))?;
            let s = parse_series(&t.series).map_err(parse_err(format!("lhs[{i}].series")))?;
            lhs.push((c, s));
        }
        let rhs = parse_gamma_quotient(&self.rhs).map_err(parse_err("rhs".into()))?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint::parse(c).ok_or_else(|| CorpusError::Invalid(format!("constraint {c:?}"))))
            .collect::<Result<_, _>>()?;
        Ok(IdentityStatement { lhs, rhs, constraints, trace: ProofTrace::default() })
    }
}

/// Exact check of a terminating identity for `param = 0..=max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub param: String,
    pub max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub source: String,
    #[serde(flatten)]
    pub identity: IdentityJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_check: Option<ExactCheck>,
}

pub fn parse_corpus(json: &str) -> Result<Vec<IdentityRecord>, CorpusError> {
    serde_json::from_str(json).map_err(|e| CorpusError::Json(e.to_string()))
}

pub fn builtin() -> Vec<IdentityRecord> {
    parse_corpus(BUILTIN).expect("bundled corpus parses")
}

pub fn builtin_record(id: &str) -> Option<IdentityRecord> {
    builtin().into_iter().find(|r| r.id == id)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub param: String,
    /// Values of the parameter at which both sides agree exactly.
    pub agreed: Vec<u32>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordResult {
    pub id: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactResult>,
    pub report: VerificationReport,
    pub passed: bool,
}

/// Substitutes `param = 0..=max` and compares each terminating sum with the
/// right side in exact arithmetic. Only single-series identities qualify.
pub fn exact_check(id: &IdentityStatement, check: &ExactCheck) -> Result<ExactResult, CorpusError> {
    let v = Var::param(&check.param).map_err(|e| CorpusError::Invalid(e.to_string()))?;
    let [(coef, spec)] = id.lhs.as_slice() else {
        return Err(CorpusError::Invalid("exact check needs a single left-hand series".into()));
    };
    if !coef.is_one() {
        return Err(CorpusError::Invalid("exact check needs a unit coefficient".into()));
    }
    let mut agreed = Vec::new();
    for m in 0..=check.max {
        let value = LinArg::int(m as i64);
        if terminating_sum_equals(&spec.substitute(v, &value), &id.rhs.substitute_param(v, &value)) {
            agreed.push(m);
        }
    }
    let passed = agreed.len() == check.max as usize + 1;
    Ok(ExactResult { param: check.param.clone(), agreed, passed })
}

pub fn verify_record(rec: &IdentityRecord, opts: &VerifyOptions) -> Result<RecordResult, CorpusError> {
    let id = rec.identity.to_statement()?;
    let exact = rec.exact_check.as_ref().map(|c| exact_check(&id, c)).transpose()?;
    let report = verify_identity(&id, opts);
    let passed = report.passed && exact.as_ref().is_none_or(|e| e.passed);
    Ok(RecordResult { id: rec.id.clone(), source: rec.source.clone(), exact, report, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses_and_round_trips() {
        for rec in builtin() {
            let id = rec.identity.to_statement().unwrap();
            let again = IdentityJson::from_statement(&id).to_statement().unwrap();
            assert_eq!(id.lhs, again.lhs, "{}", rec.id);
            assert_eq!(id.rhs, again.rhs, "{}", rec.id);
            assert_eq!(id.constraints, again.constraints, "{}", rec.id);
        }
    }

    #[test]
    fn terminating_entry_is_exact() {
        let rec = builtin_record("terminating-saalschutz").unwrap();
        let id = rec.identity.to_statement().unwrap();
        let r = exact_check(&id, rec.exact_check.as_ref().unwrap()).unwrap();
        assert_eq!(r.agreed, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn perturbed_terminating_entry_is_caught() {
        let mut rec = builtin_record("terminating-saalschutz").unwrap();
        rec.identity.rhs = rec.identity.rhs.replace("Gamma(e)", "Gamma(e+1)");
        let id = rec.identity.to_statement().unwrap();
        let r = exact_check(&id, rec.exact_check.as_ref().unwrap()).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn malformed_records_are_refused() {
        assert!(matches!(parse_corpus("[{\"id\": 1}]"), Err(CorpusError::Json(_))));
        let mut rec = builtin_record("gauss").unwrap();
        rec.identity.rhs = "Gamma(c".into();
        assert!(matches!(rec.identity.to_statement(), Err(CorpusError::Parse { .. })));
    }
}
