//! Rational functions over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::poly::{is_single_group, poly_gcd, MultiPoly};
use crate::symbol::Var;
use crate::Q;

/// `num / den` with coprime parts and a denominator whose lexicographic
/// leading coefficient is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.try_div(&g).unwrap(), den.try_div(&g).unwrap())
        };
        Self::from_coprime(num, den)
    }

    /// Skips the gcd; callers guarantee the parts are coprime.
    fn from_coprime(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn int(c: i64) -> Self {
        Self::from_poly(MultiPoly::int(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        vs.extend(self.den.variables());
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero");
        Self::from_coprime(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> RatFunc {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let e = e.unsigned_abs();
        RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
    }

    /// Replaces `v` by `v + shift`.
    pub fn shift(&self, v: Var, shift: i64) -> RatFunc {
        if shift == 0 || !self.contains_var(v) {
            return self.clone();
        }
        // A shift preserves coprimality.
        Self::from_coprime(self.num.shift(v, shift), self.den.shift(v, shift))
    }

    /// Replaces `v` by the polynomial `value`.
    pub fn substitute_poly(&self, v: Var, value: &MultiPoly) -> RatFunc {
        RatFunc::new(self.num.substitute(v, value), self.den.substitute(v, value))
    }

    /// Replaces `v` by the rational function `value`.
    pub fn substitute(&self, v: Var, value: &RatFunc) -> Option<RatFunc> {
        if value.den.is_one() {
            let r = self.substitute_poly(v, &value.num);
            return (!r.den.is_zero()).then_some(r);
        }
        let homog = |p: &MultiPoly| -> (MultiPoly, u32) {
            let d = p.degree_in(v);
            let coeffs = p.coeffs_in(v);
            let mut acc = MultiPoly::zero();
            for (i, c) in coeffs.iter().enumerate() {
                let t = &(c * &value.num.pow(i as u32)) * &value.den.pow(d - i as u32);
                acc = &acc + &t;
            }
            (acc, d)
        };
        let (n, dn) = homog(&self.num);
        let (d, dd) = homog(&self.den);
        if d.is_zero() {
            return None;
        }
        let (n, d) = if dn >= dd {
            (n, &d * &value.den.pow(dn - dd))
        } else {
            (&n * &value.den.pow(dd - dn), d)
        };
        Some(RatFunc::new(n, d))
    }

    pub fn substitute_rational(&self, v: Var, value: &Q) -> Option<RatFunc> {
        let d = self.den.substitute_rational(v, value);
        if d.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.num.substitute_rational(v, value), d))
    }

    /// Exact value with every variable bound; `None` at a pole or unbound variable.
    pub fn eval(&self, point: &dyn Fn(Var) -> Option<Q>) -> Option<Q> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point)? / d)
    }

    pub fn to_expanded_string(&self) -> String {
        if self.den.is_one() {
            return self.num.to_string();
        }
        format!("({})/({})", self.num, self.den)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    /// Factored canonical form, parseable by the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.to_factored_string();
        if self.den.is_one() {
            return f.write_str(&n);
        }
        let n = if self.num.len() > 1 && !n.contains('(') {
            format!("({n})")
        } else {
            n
        };
        let d = self.den.to_factored_string();
        let simple = self.den.len() == 1 && !d.contains('*') && !d.contains('^') && !d.contains('/');
        if simple || is_single_group(&d) {
            write!(f, "{n}/{d}")
        } else {
            write!(f, "{n}/({d})")
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        let g = poly_gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::from_coprime(num, &self.den * &rhs.den);
        }
        let b1 = self.den.try_div(&g).unwrap();
        let d1 = rhs.den.try_div(&g).unwrap();
        let t = &(&self.num * &d1) + &(&rhs.num * &b1);
        if t.is_zero() {
            return RatFunc::zero();
        }
        let g2 = poly_gcd(&t, &g);
        let den = &b1 * &rhs.den;
        if g2.is_one() {
            RatFunc::from_coprime(t, den)
        } else {
            RatFunc::from_coprime(t.try_div(&g2).unwrap(), den.try_div(&g2).unwrap())
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let a = self.num.try_div(&g1).unwrap();
        let d = rhs.den.try_div(&g1).unwrap();
        let c = rhs.num.try_div(&g2).unwrap();
        let b = self.den.try_div(&g2).unwrap();
        RatFunc::from_coprime(&a * &c, &b * &d)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &'a RatFunc) -> RatFunc {
        self * &rhs.inv()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::test_util::lin;

    fn rf(n: MultiPoly, d: MultiPoly) -> RatFunc {
        RatFunc::new(n, d)
    }

    #[test]
    fn normalizes_denominator() {
        let r = rf(lin(&[("k", 2)], 0), lin(&[("c", 2), ("n", 2)], 0));
        assert_eq!(r.den(), &lin(&[("c", 1), ("n", 1)], 0));
        assert_eq!(r.num(), &lin(&[("k", 1)], 0));
    }

    #[test]
    fn sum_cancels() {
        // 1/(k(k+1)) = 1/k - 1/(k+1)
        let k = lin(&[("k", 1)], 0);
        let k1 = lin(&[("k", 1)], 1);
        let lhs = &rf(MultiPoly::one(), k.clone()) - &rf(MultiPoly::one(), k1.clone());
        assert_eq!(lhs, rf(MultiPoly::one(), &k * &k1));
    }

    #[test]
    fn substitute_rational_function() {
        let k = RatFunc::var(Var::K);
        let r = &k / &(&k + &RatFunc::one());
        // k -> 1/k gives 1/(k+1)
        let s = r.substitute(Var::K, &k.inv()).unwrap();
        assert_eq!(s, (&k + &RatFunc::one()).inv());
    }

    #[test]
    fn display_is_factored() {
        let r = rf(lin(&[("k", 1)], 0), lin(&[("c", 1), ("n", 1), ("a", -1), ("b", -1)], 0));
        assert_eq!(r.to_string(), "-k/(a + b - c - n)");
    }
}
