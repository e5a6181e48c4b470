//! Convergence of a parametrised family towards a limiting value.

use serde::{Deserialize, Serialize};

use super::complex::{BigComplex, ComplexQ};
use super::series::Point;
use super::verify::lhs_eval;
use super::{gamma_quotient_eval, NumericError};
use crate::gamma::GammaQuotient;
use crate::hyperterm::SeriesSpec;
use crate::symbol::Var;
use crate::Q;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProbeReport {
    pub n_values: Vec<u64>,
    pub errors: Vec<f64>,
    /// Observed decay orders `−Δlog e / Δlog n` between consecutive `n`.
    pub orders: Vec<f64>,
    pub monotone: bool,
    pub tolerance: f64,
    pub passed: bool,
}

/// `|family(n) − target|` over `n_values`; passes when the error shrinks at
/// every step (or is already zero) and ends below `tol`.
pub fn limit_probe(
    family: impl Fn(u64) -> Result<BigComplex, NumericError>,
    target: &BigComplex,
    n_values: &[u64],
    tol: f64,
    p: usize,
) -> Result<ProbeReport, NumericError> {
    let mut errors = Vec::with_capacity(n_values.len());
    for &n in n_values {
        errors.push(family(n)?.sub(target, p).abs_f64());
    }
    let orders = errors
        .windows(2)
        .zip(n_values.windows(2))
        .map(|(e, n)| -(e[1] / e[0]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect();
    let monotone = errors.windows(2).all(|e| e[1] < e[0] || e[1] == 0.0);
    let passed = monotone && errors.last().is_some_and(|e| *e < tol);
    Ok(ProbeReport {
        n_values: n_values.to_vec(),
        errors,
        orders,
        monotone,
        tolerance: tol,
        passed,
    })
}

pub enum ProbeTarget {
    Series(Vec<(GammaQuotient, SeriesSpec)>),
    Closed(GammaQuotient),
}

/// [`limit_probe`] for `Σ coefficient · series` depending on `n`, at a fixed
/// parameter point.
pub fn family_probe(
    family: &[(GammaQuotient, SeriesSpec)],
    target: &ProbeTarget,
    point: &Point,
    n_values: &[u64],
    tol: f64,
    p: usize,
) -> Result<ProbeReport, NumericError> {
    let t = match target {
        ProbeTarget::Series(lhs) => lhs_eval(lhs, point, p)?.0,
        ProbeTarget::Closed(g) => gamma_quotient_eval(g, point, p)?,
    };
    let at = |n: u64| {
        let pt = point.clone().with(Var::N, ComplexQ::real(Q::from_integer(n.into())));
        Ok(lhs_eval(family, &pt, p)?.0)
    };
    limit_probe(at, &t, n_values, tol, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_family_has_zero_error() {
        let p = 128;
        let t = BigComplex::from_i64(3, p);
        let r = limit_probe(|_| Ok(BigComplex::from_i64(3, p)), &t, &[10, 100, 1000], 1e-30, p).unwrap();
        assert!(r.errors.iter().all(|e| *e == 0.0));
        assert!(r.passed);
    }

    #[test]
    fn reciprocal_decay_has_order_one() {
        let p = 128;
        let t = BigComplex::one(p);
        let f = |n: u64| Ok(BigComplex::one(p).add(&BigComplex::from_i64(1, p).div_i64(n as i64, p), p));
        let r = limit_probe(f, &t, &[10, 100, 1000], 2e-3, p).unwrap();
        assert!(r.monotone && r.passed);
        assert!(r.orders.iter().all(|o| (o - 1.0).abs() < 1e-9));
        let strict = limit_probe(f, &t, &[10, 100, 1000], 1e-4, p).unwrap();
        assert!(!strict.passed);
    }
}
