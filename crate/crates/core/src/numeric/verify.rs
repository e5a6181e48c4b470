//! Sampled high-precision comparison of both sides of an identity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::complex::{bits_for_digits, BigComplex};
use super::sample::{sample_points, SamplePoint, SamplerConfig};
use super::series::{pfq1_eval, Point};
use super::{gamma_quotient_eval, NumericError};
use crate::gamma::GammaQuotient;
use crate::hyperterm::SeriesSpec;
use crate::pipeline::IdentityStatement;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Target decimal digits; evaluation runs 20 digits higher.
    pub digits: u32,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub sampler: SamplerConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            digits: 40,
            tol: 1e-25,
            samples: 20,
            seed: 42,
            sampler: SamplerConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PointReport {
    pub index: usize,
    pub params: BTreeMap<String, String>,
    pub margin: f64,
    pub lhs: String,
    pub rhs: String,
    pub abs_error: f64,
    pub rel_error: f64,
    /// Directly summed terms per left-hand series.
    pub truncation: Vec<usize>,
    /// Tail error estimate per left-hand series.
    pub tail_estimate: Vec<f64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub identity: String,
    pub digits: u32,
    pub tol: f64,
    pub seed: u64,
    pub samples: usize,
    pub points: Vec<PointReport>,
    pub worst_index: Option<usize>,
    pub max_rel_error: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

/// `Σ coefficient · series` at `point`, with the truncation index and tail
/// estimate of each series (zero where the coefficient vanishes).
pub fn lhs_eval(lhs: &[(GammaQuotient, SeriesSpec)], point: &Point, p: usize) -> Result<(BigComplex, Vec<usize>, Vec<f64>), NumericError> {
    let mut acc = BigComplex::zero(p);
    let mut truncation = Vec::new();
    let mut tails = Vec::new();
    for (coef, spec) in lhs {
        let c = gamma_quotient_eval(coef, point, p)?;
        if c.is_zero() {
            truncation.push(0);
            tails.push(0.0);
            continue;
        }
        let s = pfq1_eval(spec, point, p)?;
        truncation.push(s.truncation);
        tails.push(s.tail_estimate.max(s.doubling_change));
        acc = acc.add(&c.mul(&s.value, p), p);
    }
    Ok((acc, truncation, tails))
}

/// Both sides at one point, with per-series diagnostics.
pub fn evaluate_sides(id: &IdentityStatement, point: &Point, p: usize) -> Result<(BigComplex, BigComplex, Vec<usize>, Vec<f64>), NumericError> {
    let (lhs, truncation, tails) = lhs_eval(&id.lhs, point, p)?;
    let rhs = gamma_quotient_eval(&id.rhs, point, p)?;
    Ok((lhs, rhs, truncation, tails))
}

fn check_point(id: &IdentityStatement, index: usize, sp: &SamplePoint, opts: &VerifyOptions) -> PointReport {
    let p = bits_for_digits(opts.digits + 20);
    let base = PointReport {
        index,
        params: sp.point.describe(),
        margin: sp.margin,
        lhs: String::new(),
        rhs: String::new(),
        abs_error: f64::INFINITY,
        rel_error: f64::INFINITY,
        truncation: Vec::new(),
        tail_estimate: Vec::new(),
        passed: false,
        error: None,
    };
    match evaluate_sides(id, &sp.point, p) {
        Ok((lhs, rhs, truncation, tail_estimate)) => {
            let abs_error = lhs.sub(&rhs, p).abs_f64();
            let rel_error = abs_error / rhs.abs_f64().max(1.0);
            let digits = opts.digits as usize + 5;
            PointReport {
                lhs: lhs.to_string_digits(digits),
                rhs: rhs.to_string_digits(digits),
                abs_error,
                rel_error,
                truncation,
                tail_estimate,
                passed: rel_error < opts.tol,
                ..base
            }
        }
        Err(e) => PointReport { error: Some(e.to_string()), ..base },
    }
}

fn assemble(id: &IdentityStatement, opts: &VerifyOptions, points: Vec<PointReport>) -> VerificationReport {
    let (worst_index, max_rel_error) = points
        .iter()
        .map(|r| (r.index, r.rel_error))
        .fold((None, 0.0), |(wi, wm), (i, e)| if wi.is_none() || e > wm || e.is_nan() { (Some(i), e) } else { (wi, wm) });
    let passed = !points.is_empty() && points.iter().all(|r| r.passed);
    let failure = if passed {
        None
    } else if let Some(r) = points.iter().find(|r| r.error.is_some()) {
        Some(format!("point {}: {}", r.index, r.error.as_deref().unwrap_or("")))
    } else {
        worst_index.map(|i| format!("point {i}: relative error {max_rel_error:e} exceeds {:e}", opts.tol))
    };
    VerificationReport {
        identity: id.to_string(),
        digits: opts.digits,
        tol: opts.tol,
        seed: opts.seed,
        samples: opts.samples,
        points,
        worst_index,
        max_rel_error,
        passed,
        failure,
    }
}

fn sampler_failure(id: &IdentityStatement, opts: &VerifyOptions, e: NumericError) -> VerificationReport {
    let mut r = assemble(id, opts, Vec::new());
    r.failure = Some(e.to_string());
    r
}

/// Checks one point at a time on the calling thread.
pub fn verify_identity_sequential(id: &IdentityStatement, opts: &VerifyOptions) -> VerificationReport {
    let points = match sample_points(id, opts.samples, opts.seed, &opts.sampler) {
        Ok(p) => p,
        Err(e) => return sampler_failure(id, opts, e),
    };
    let reports = points.iter().enumerate().map(|(i, sp)| check_point(id, i, sp, opts)).collect();
    assemble(id, opts, reports)
}

/// Points are checked in parallel when the `parallel` feature is on; the
/// report is identical to [`verify_identity_sequential`].
pub fn verify_identity(id: &IdentityStatement, opts: &VerifyOptions) -> VerificationReport {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let points = match sample_points(id, opts.samples, opts.seed, &opts.sampler) {
            Ok(p) => p,
            Err(e) => return sampler_failure(id, opts, e),
        };
        let reports = points.par_iter().enumerate().map(|(i, sp)| check_point(id, i, sp, opts)).collect();
        assemble(id, opts, reports)
    }
    #[cfg(not(feature = "parallel"))]
    verify_identity_sequential(id, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::Constraint;
    use crate::gamma::GammaQuotient;
    use crate::parse::{parse_gamma_quotient, parse_series};
    use crate::pipeline::ProofTrace;

    fn gauss(rhs: &str) -> IdentityStatement {
        IdentityStatement {
            lhs: vec![(GammaQuotient::one(), parse_series("pFq([a,b],[c],1)").unwrap())],
            rhs: parse_gamma_quotient(rhs).unwrap(),
            constraints: vec![Constraint::parse("Re(c - a - b) > 0").unwrap()],
            trace: ProofTrace::default(),
        }
    }

    fn quick() -> VerifyOptions {
        VerifyOptions { digits: 30, tol: 1e-20, samples: 4, ..Default::default() }
    }

    #[test]
    fn true_identity_passes() {
        let r = verify_identity(&gauss("Gamma(c)*Gamma(c-a-b)/(Gamma(c-a)*Gamma(c-b))"), &quick());
        assert!(r.passed, "{r:?}");
        assert_eq!(r.points.len(), 4);
    }

    #[test]
    fn false_identity_fails_with_worst_point() {
        let r = verify_identity(&gauss("Gamma(c)*Gamma(c-a-b)/(Gamma(c-a)*Gamma(c-b+1))"), &quick());
        assert!(!r.passed);
        assert!(r.worst_index.is_some());
        assert!(r.failure.unwrap().contains("exceeds"));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let id = gauss("Gamma(c)*Gamma(c-a-b)/(Gamma(c-a)*Gamma(c-b))");
        assert_eq!(verify_identity(&id, &quick()), verify_identity_sequential(&id, &quick()));
    }
}
