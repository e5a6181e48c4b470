//! Gamma function by Stirling's series after an upward shift, with reflection
//! for the left half-plane.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::complex::{from_q, BigComplex};
use super::NumericError;
use crate::Q;

static BERNOULLI: Mutex<Vec<Q>> = Mutex::new(Vec::new());

/// `B_0, …, B_n` (with `B_1 = −1/2`), cached across calls.
///
/// Even indices come from the tangent numbers `T_j`, which an integer-only
/// triangle produces: `B_2j = (−1)^(j−1) 2j T_j / (4^j (4^j − 1))`.
pub fn bernoulli(n: usize) -> Vec<Q> {
    let mut cache = BERNOULLI.lock().expect("bernoulli cache");
    if cache.len() <= n {
        let m = (n + 1).max(2 * cache.len()).max(64);
        let half = m / 2 + 1;
        let mut t: Vec<BigInt> = vec![BigInt::zero(); half + 1];
        t[1] = BigInt::one();
        for k in 2..=half {
            t[k] = &t[k - 1] * BigInt::from(k - 1);
        }
        for k in 2..=half {
            for j in k..=half {
                t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
            }
        }
        let mut out = vec![Q::zero(); m + 1];
        out[0] = Q::one();
        out[1] = Q::new((-1).into(), 2.into());
        for j in 1..half {
            if 2 * j > m {
                break;
            }
            let four = BigInt::from(4).pow(j as u32);
            let sign = if j % 2 == 1 { 1 } else { -1 };
            out[2 * j] = Q::new(&t[j] * BigInt::from(sign * 2 * j as i64), &four * (&four - 1));
        }
        *cache = out;
    }
    cache[..=n].to_vec()
}

/// Digits of working precision implied by `p` bits.
fn digits_of(p: usize) -> f64 {
    p as f64 / std::f64::consts::LOG2_10
}

/// Distance below which a nonpositive integer counts as a pole hit.
fn pole_tolerance(p: usize) -> f64 {
    10f64.powf(-digits_of(p) / 2.0)
}

/// `ln Γ(w)` by Stirling's series, for `Re w` large enough that the series
/// reaches `2^−p` before diverging.
fn ln_gamma_stirling(w: &BigComplex, p: usize) -> BigComplex {
    let half = BigComplex::from_q(&Q::new(1.into(), 2.into()), &Q::zero(), p);
    let two_pi = BigComplex::pi(p).mul(&BigComplex::from_i64(2, p), p);
    let ln_w = w.ln(p);
    let mut acc = w
        .sub(&half, p)
        .mul(&ln_w, p)
        .sub(w, p)
        .add(&two_pi.ln(p).mul(&half, p), p);
    let w2inv = w.mul(w, p).recip(p);
    let mut wpow = w.recip(p);
    let eps = 2f64.powi(-(p as i32));
    let scale = acc.abs_f64().max(1.0);
    let max_terms = (digits_of(p) * 1.5) as usize + 20;
    let bern = bernoulli(2 * max_terms + 2);
    let mut prev = f64::INFINITY;
    for j in 1..=max_terms {
        let b = &bern[2 * j];
        let c = b / Q::from_integer(BigInt::from((2 * j) * (2 * j - 1)));
        let term = wpow.mul_real(&from_q(&c, p), p);
        let mag = term.abs_f64();
        if mag > prev {
            break;
        }
        acc = acc.add(&term, p);
        if mag < eps * scale {
            break;
        }
        prev = mag;
        wpow = wpow.mul(&w2inv, p);
    }
    acc
}

/// `Γ(z)` to about `p` bits.
pub fn gamma_eval(z: &BigComplex, p: usize) -> Result<BigComplex, NumericError> {
    let re = z.re_f64();
    let im = z.im_f64();
    if !re.is_finite() || !im.is_finite() {
        return Err(NumericError::Invalid(format!("Gamma argument {z}")));
    }
    let nearest = re.round();
    if nearest <= 0.0 && (re - nearest).hypot(im) < pole_tolerance(p) {
        return Err(NumericError::Pole(format!("Gamma({z})")));
    }
    let wp = p + 32;
    if re < 0.5 {
        // Γ(z) = π / (sin(πz) Γ(1 − z))
        let pi = BigComplex::pi(wp);
        let one_minus = BigComplex::one(wp).sub(z, wp);
        let g = gamma_eval(&one_minus, wp)?;
        let s = pi.mul(z, wp).sin(wp);
        return Ok(pi.div(&s.mul(&g, wp), wp));
    }
    // Stirling error near e^{−2π N}; shift until Re(w) ≥ N.
    let n_min = (0.37 * (digits_of(wp) + 10.0)).ceil();
    let shift = if re < n_min { (n_min - re).ceil() as i64 } else { 0 };
    let w = z.add_i64(shift, wp);
    let mut g = ln_gamma_stirling(&w, wp).exp(wp);
    if shift > 0 {
        let mut prod = BigComplex::one(wp);
        for i in 0..shift {
            prod = prod.mul(&z.add_i64(i, wp), wp);
        }
        g = g.div(&prod, wp);
    }
    Ok(g)
}

/// `1/Γ(z)`, zero at the poles.
pub fn rgamma_eval(z: &BigComplex, p: usize) -> Result<BigComplex, NumericError> {
    match gamma_eval(z, p) {
        Ok(g) => Ok(g.recip(p)),
        Err(NumericError::Pole(_)) => Ok(BigComplex::zero(p)),
        Err(e) => Err(e),
    }
}

/// `(x)_m` by direct product.
pub fn rising_eval(x: &BigComplex, m: u64, p: usize) -> BigComplex {
    let mut acc = BigComplex::one(p);
    for i in 0..m {
        acc = acc.mul(&x.add_i64(i as i64, p), p);
    }
    acc
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::complex::bits_for_digits;
    use astro_float::BigFloat;

    fn real(x: f64, p: usize) -> BigComplex {
        BigComplex::real(BigFloat::from_f64(x, p), p)
    }

    fn p() -> usize {
        bits_for_digits(50)
    }

    fn rel(a: &BigComplex, b: &BigComplex) -> f64 {
        a.sub(b, p()).abs_f64() / b.abs_f64().max(1e-300)
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(20);
        assert_eq!(b[2], Q::new(1.into(), 6.into()));
        assert_eq!(b[4], Q::new((-1).into(), 30.into()));
        assert_eq!(b[12], Q::new((-691).into(), 2730.into()));
        assert!(b[7].is_zero());
        assert_eq!(b[1], Q::new((-1).into(), 2.into()));
        assert_eq!(b[20], Q::new((-174611).into(), 330.into()));
    }

    #[test]
    fn factorial_values() {
        let g1 = gamma_eval(&BigComplex::one(p()), p()).unwrap();
        assert!(rel(&g1, &BigComplex::one(p())) < 1e-48);
        let g5 = gamma_eval(&BigComplex::from_i64(5, p()), p()).unwrap();
        assert!(rel(&g5, &BigComplex::from_i64(24, p())) < 1e-48);
    }

    #[test]
    fn half_squared_is_pi() {
        let g = gamma_eval(&real(0.5, p()), p()).unwrap();
        assert!(rel(&g.mul(&g, p()), &BigComplex::pi(p())) < 1e-48);
    }

    #[test]
    fn reflection_self_check() {
        let (a, b) = (real(0.3, p()), BigComplex::one(p()).sub(&real(0.3, p()), p()));
        let lhs = gamma_eval(&a, p()).unwrap().mul(&gamma_eval(&b, p()).unwrap(), p());
        let pi = BigComplex::pi(p());
        let rhs = pi.div(&pi.mul(&a, p()).sin(p()), p());
        assert!(rel(&lhs, &rhs) < 1e-45);
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(gamma_eval(&BigComplex::from_i64(-2, p()), p()), Err(NumericError::Pole(_))));
        assert!(rgamma_eval(&BigComplex::from_i64(0, p()), p()).unwrap().is_zero());
    }

    #[test]
    fn complex_recurrence() {
        let z = BigComplex::from_f64(-1.7, 0.4, p());
        let g = gamma_eval(&z, p()).unwrap();
        let g1 = gamma_eval(&z.add_i64(1, p()), p()).unwrap();
        assert!(rel(&g1, &z.mul(&g, p())) < 1e-45);
    }
}
