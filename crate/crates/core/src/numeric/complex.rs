//! Complex numbers over `astro_float::BigFloat` with explicit precision.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::{One, Signed, Zero};

use crate::Q;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision in bits for `digits` decimal digits plus a word of guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
}

/// `x` as an `f64`, saturating outside the `f64` range.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((m, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *m.last().unwrap_or(&0) as f64 / 2f64.powi(64);
    let v = top * 2f64.powi(e.clamp(-1100, 1100));
    if sign.is_negative() {
        -v
    } else {
        v
    }
}

pub fn from_q(q: &Q, p: usize) -> BigFloat {
    if q.is_zero() {
        return BigFloat::from_i64(0, p);
    }
    let parse = |s: String| with_consts(|cc| BigFloat::parse(&s, Radix::Dec, p, RM, cc));
    let num = parse(q.numer().to_string());
    if q.denom().is_one() {
        return num;
    }
    num.div(&parse(q.denom().to_string()), p, RM)
}

#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Self::from_i64(0, p)
    }

    pub fn one(p: usize) -> Self {
        Self::from_i64(1, p)
    }

    pub fn from_i64(v: i64, p: usize) -> Self {
        BigComplex::new(BigFloat::from_i64(v, p), BigFloat::from_i64(0, p))
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        BigComplex::new(BigFloat::from_f64(re, p), BigFloat::from_f64(im, p))
    }

    pub fn from_q(re: &Q, im: &Q, p: usize) -> Self {
        BigComplex::new(from_q(re, p), from_q(im, p))
    }

    pub fn real(x: BigFloat, p: usize) -> Self {
        BigComplex::new(x, BigFloat::from_i64(0, p))
    }

    pub fn pi(p: usize) -> Self {
        Self::real(with_consts(|cc| cc.pi(p, RM)), p)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        BigComplex::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM))
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        BigComplex::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM))
    }

    pub fn neg(&self) -> Self {
        BigComplex::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        BigComplex::new(re, im)
    }

    pub fn mul_real(&self, x: &BigFloat, p: usize) -> Self {
        BigComplex::new(self.re.mul(x, p, RM), self.im.mul(x, p, RM))
    }

    pub fn add_i64(&self, v: i64, p: usize) -> Self {
        BigComplex::new(self.re.add(&BigFloat::from_i64(v, p), p, RM), self.im.clone())
    }

    pub fn div_i64(&self, v: i64, p: usize) -> Self {
        let d = BigFloat::from_i64(v, p);
        BigComplex::new(self.re.div(&d, p, RM), self.im.div(&d, p, RM))
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        self.norm_sqr(p).sqrt(p, RM)
    }

    pub fn abs_f64(&self) -> f64 {
        to_f64(&self.re).hypot(to_f64(&self.im))
    }

    pub fn recip(&self, p: usize) -> Self {
        let d = self.norm_sqr(p);
        BigComplex::new(self.re.div(&d, p, RM), self.im.neg().div(&d, p, RM))
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        self.mul(&o.recip(p), p)
    }

    pub fn exp(&self, p: usize) -> Self {
        with_consts(|cc| {
            let r = self.re.exp(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            BigComplex::new(r.mul(&c, p, RM), r.mul(&s, p, RM))
        })
    }

    /// Principal logarithm.
    pub fn ln(&self, p: usize) -> Self {
        let arg = self.arg(p);
        let m = with_consts(|cc| self.norm_sqr(p).ln(p, RM, cc));
        BigComplex::new(m.div(&BigFloat::from_i64(2, p), p, RM), arg)
    }

    /// Principal argument in `(−π, π]`.
    pub fn arg(&self, p: usize) -> BigFloat {
        with_consts(|cc| {
            let pi = cc.pi(p, RM);
            if self.re.is_zero() {
                let half = pi.div(&BigFloat::from_i64(2, p), p, RM);
                return if self.im.is_negative() { half.neg() } else { half };
            }
            let a = self.im.div(&self.re, p, RM).atan(p, RM, cc);
            if self.re.is_positive() {
                a
            } else if self.im.is_negative() {
                a.sub(&pi, p, RM)
            } else {
                a.add(&pi, p, RM)
            }
        })
    }

    pub fn sin(&self, p: usize) -> Self {
        with_consts(|cc| {
            let re = self.re.sin(p, RM, cc).mul(&self.im.cosh(p, RM, cc), p, RM);
            let im = self.re.cos(p, RM, cc).mul(&self.im.sinh(p, RM, cc), p, RM);
            BigComplex::new(re, im)
        })
    }

    /// `self^w` on the principal branch.
    pub fn pow(&self, w: &Self, p: usize) -> Self {
        if self.is_zero() {
            return Self::zero(p);
        }
        self.ln(p).mul(w, p).exp(p)
    }

    pub fn powi(&self, e: i64, p: usize) -> Self {
        let mut base = if e < 0 { self.recip(p) } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            base = base.mul(&base, p);
            e >>= 1;
        }
        acc
    }

    pub fn re_f64(&self) -> f64 {
        to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        to_f64(&self.im)
    }

    /// Decimal rendering with `digits` significant digits per part.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let fmt_part = |x: &BigFloat| -> String {
            if x.is_zero() {
                return "0".into();
            }
            let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8;
            let mut y = x.clone();
            y.set_precision(bits.max(64), RM).ok();
            with_consts(|cc| y.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "nan".into())
        };
        if self.im.is_zero() {
            fmt_part(&self.re)
        } else if self.im.is_negative() {
            format!("{} - {}i", fmt_part(&self.re), fmt_part(&self.im.neg()))
        } else {
            format!("{} + {}i", fmt_part(&self.re), fmt_part(&self.im))
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_digits(20))
    }
}

/// Exact complex rational, used for sampled parameter values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComplexQ {
    pub re: Q,
    pub im: Q,
}

impl ComplexQ {
    pub fn real(re: Q) -> Self {
        ComplexQ { re, im: Q::zero() }
    }

    pub fn to_big(&self, p: usize) -> BigComplex {
        BigComplex::from_q(&self.re, &self.im, p)
    }

    pub fn re_f64(&self) -> f64 {
        q_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        q_to_f64(&self.im)
    }

    /// Distance to the nearest point of `{0, −1, −2, …}`.
    pub fn pole_distance(&self) -> f64 {
        let re = self.re_f64();
        let im = self.im_f64();
        let nearest = re.round().min(0.0);
        (re - nearest).hypot(im)
    }

    pub fn is_nonpositive_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer() && !self.re.is_positive()
    }
}

impl fmt::Display for ComplexQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "-" } else { "+" }, self.im.abs())
        }
    }
}

pub fn q_to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 256;

    fn close(a: &BigComplex, b: &BigComplex, tol: f64) -> bool {
        a.sub(b, P).abs_f64() <= tol * b.abs_f64().max(1.0)
    }

    #[test]
    fn exp_of_log_is_identity() {
        let z = BigComplex::from_f64(-1.25, 0.75, P);
        assert!(close(&z.ln(P).exp(P), &z, 1e-70));
    }

    #[test]
    fn euler_identity() {
        let i_pi = BigComplex::new(BigFloat::from_i64(0, P), BigComplex::pi(P).re);
        assert!(close(&i_pi.exp(P), &BigComplex::from_i64(-1, P), 1e-70));
    }

    #[test]
    fn rational_conversion() {
        let q = Q::new(1.into(), 3.into());
        let x = BigComplex::from_q(&q, &Q::zero(), P).mul(&BigComplex::from_i64(3, P), P);
        assert!(close(&x, &BigComplex::one(P), 1e-70));
        assert!((to_f64(&from_q(&Q::new((-7).into(), 4.into()), P)) + 1.75).abs() < 1e-15);
    }

    #[test]
    fn pole_distance_ignores_positive_integers() {
        let z = ComplexQ::real(Q::from_integer(3.into()));
        assert!((z.pole_distance() - 3.0).abs() < 1e-12);
        let w = ComplexQ::real(Q::new((-19).into(), 10.into()));
        assert!((w.pole_distance() - 0.1).abs() < 1e-12);
    }
}
