//! Multiprecision evaluation and sampled verification of identities.

pub mod complex;
pub mod probe;
pub mod sample;
pub mod series;
pub mod special;
pub mod verify;

use thiserror::Error;

use crate::gamma::GammaQuotient;
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use complex::{BigComplex, ComplexQ};
use series::Point;
use special::{gamma_eval, rgamma_eval};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("invalid value: {0}")]
    Invalid(String),
    #[error("no value for parameter {0}")]
    MissingParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("sampler exhausted: {0}")]
    Sampler(String),
}

fn poly_eval(poly: &MultiPoly, point: &Point, p: usize) -> Result<BigComplex, NumericError> {
    let mut acc = BigComplex::zero(p);
    for (mono, c) in poly.terms() {
        let mut t = BigComplex::from_q(c, &crate::Q::from_integer(0.into()), p);
        for (v, e) in mono.pairs() {
            let x = value_of(point, *v)?;
            t = t.mul(&x.to_big(p).powi(*e as i64, p), p);
        }
        acc = acc.add(&t, p);
    }
    Ok(acc)
}

fn value_of(point: &Point, v: Var) -> Result<&ComplexQ, NumericError> {
    point.values.get(&v).ok_or_else(|| NumericError::MissingParameter(v.name()))
}

pub fn ratfunc_eval(r: &RatFunc, point: &Point, p: usize) -> Result<BigComplex, NumericError> {
    let den = poly_eval(r.den(), point, p)?;
    if den.is_zero() {
        return Err(NumericError::Pole(format!("denominator of {r}")));
    }
    Ok(poly_eval(r.num(), point, p)?.div(&den, p))
}

/// Value of `g` at `point`; `n` must be bound when `g` carries a power.
pub fn gamma_quotient_eval(g: &GammaQuotient, point: &Point, p: usize) -> Result<BigComplex, NumericError> {
    if g.is_zero() {
        return Ok(BigComplex::zero(p));
    }
    let mut acc = ratfunc_eval(g.prefactor(), point, p)?;
    if !g.power().is_one() {
        let n = value_of(point, Var::N)?;
        let base = ratfunc_eval(g.power(), point, p)?;
        acc = acc.mul(&base.pow(&n.to_big(p), p), p);
    }
    for a in g.numer() {
        acc = acc.mul(&gamma_eval(&point.eval(a)?.to_big(p), p)?, p);
    }
    for a in g.denom() {
        let r = rgamma_eval(&point.eval(a)?.to_big(p), p)?;
        if r.is_zero() {
            return Ok(BigComplex::zero(p));
        }
        acc = acc.mul(&r, p);
    }
    let pi = BigComplex::pi(p);
    for z in g.reflections() {
        let zq = point.eval(z)?;
        if zq.im == crate::Q::from_integer(0.into()) && zq.re.is_integer() {
            return Err(NumericError::Pole(format!("pi/sin(pi*{z})")));
        }
        let s = pi.mul(&zq.to_big(p), p).sin(p);
        acc = acc.mul(&pi.div(&s, p), p);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_gamma_quotient;
    use complex::bits_for_digits;

    #[test]
    fn gamma_quotient_with_reflection() {
        let p = bits_for_digits(40);
        // Γ(a)Γ(1−a) = π/sin(πa)
        let g = parse_gamma_quotient("Gamma(a)*Gamma(1-a)").unwrap();
        let h = parse_gamma_quotient("pi/sin(pi*a)").unwrap();
        let pt = Point::from_reals(&[("a", 0.3)]);
        let x = gamma_quotient_eval(&g, &pt, p).unwrap();
        let y = gamma_quotient_eval(&h, &pt, p).unwrap();
        assert!(x.sub(&y, p).abs_f64() < 1e-38);
    }

    #[test]
    fn reciprocal_pole_gives_zero() {
        let p = bits_for_digits(30);
        let g = parse_gamma_quotient("Gamma(a)/Gamma(a-b)").unwrap();
        let pt = Point::from_reals(&[("a", 0.5), ("b", 2.5)]);
        assert!(gamma_quotient_eval(&g, &pt, p).unwrap().is_zero());
        let pt = Point::from_reals(&[("a", -1.0), ("b", 0.5)]);
        assert!(matches!(gamma_quotient_eval(&g, &pt, p), Err(NumericError::Pole(_))));
    }

    #[test]
    fn missing_parameter_is_reported() {
        let g = parse_gamma_quotient("Gamma(a+b)").unwrap();
        let pt = Point::from_reals(&[("a", 0.5)]);
        assert_eq!(
            gamma_quotient_eval(&g, &pt, 128).unwrap_err(),
            NumericError::MissingParameter("b".into())
        );
    }
}
