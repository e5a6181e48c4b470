//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in descending lexicographic order, where the
//! variable order is that of [`Var`]: parameters first, then `n`, then `k`.
//! No zero coefficients are stored.

mod display;
mod factor;
mod gcd;
mod resultant;
mod roots;

pub(crate) use display::is_single_group;
pub use factor::{linear_factors, Factorization};
pub use gcd::{content_in, lcm, poly_gcd};
pub use resultant::{dispersion, dispersion_by_resultant, resultant};
pub use roots::rational_roots;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::symbol::Var;
use crate::Q;

/// Exponent vector in sparse form: variables ascending, exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Removes variable `v`, returning its exponent and the remaining monomial.
    pub fn split_off(&self, v: Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|p| {
                if p.0 == v {
                    e = p.1;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (e, Monomial(rest))
    }
}

impl Ord for Monomial {
    /// Lexicographic: the smallest variable is the most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Q)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Q::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        MultiPoly {
            terms: vec![(Monomial::var(v, 1), Q::one())],
        }
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(terms: I) -> Self {
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.get_mut(&m) {
                Some(acc) => *acc += c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The constant value, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        if self.terms.is_empty() {
            Some(Q::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Q {
        self.terms.first().map_or_else(Q::zero, |t| t.1.clone())
    }

    /// Variables that occur with positive degree, ascending.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.pairs().iter().map(|p| p.0))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.degree_in(v) > 0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        // Multiplying by a monomial preserves the term order.
        MultiPoly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients with respect to `v`, indexed by degree.
    pub fn coeffs_in(&self, v: Var) -> Vec<MultiPoly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Q)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|ts| {
                // Removing a variable keeps the relative order of the remaining terms.
                MultiPoly { terms: ts }
            })
            .collect()
    }

    /// Inverse of [`MultiPoly::coeffs_in`].
    pub fn from_coeffs_in(v: Var, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(v, i as u32);
            for (t, a) in &c.terms {
                terms.push((t.mul(&m), a.clone()));
            }
        }
        MultiPoly::from_terms(terms)
    }

    /// Leading coefficient with respect to `v` (a polynomial free of `v`).
    pub fn lead_coeff_in(&self, v: Var) -> MultiPoly {
        let d = self.degree_in(v);
        let terms: Vec<(Monomial, Q)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree_in(v) == d)
            .map(|(m, c)| (m.split_off(v).1, c.clone()))
            .collect();
        MultiPoly { terms }
    }

    /// Replaces `v` by the polynomial `value`.
    pub fn substitute(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Replaces `v` by `v + shift`.
    pub fn shift(&self, v: Var, shift: i64) -> MultiPoly {
        if shift == 0 {
            return self.clone();
        }
        self.substitute(v, &(&MultiPoly::var(v) + &MultiPoly::int(shift)))
    }

    pub fn substitute_rational(&self, v: Var, value: &Q) -> MultiPoly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let mut pows: Vec<Q> = vec![Q::one()];
        let terms = self.terms.iter().map(|(m, c)| {
            let (e, rest) = m.split_off(v);
            while pows.len() <= e as usize {
                let next = pows.last().unwrap() * value;
                pows.push(next);
            }
            (rest, c * &pows[e as usize])
        });
        MultiPoly::from_terms(terms.collect::<Vec<_>>())
    }

    /// Evaluates with every variable bound in `point`; unbound variables are an error.
    pub fn eval(&self, point: &dyn Fn(Var) -> Option<Q>) -> Option<Q> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                let x = point(v)?;
                t *= num_traits::pow(x, e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn try_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        for v in divisor.variables() {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let (lm, lc) = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quotient: Vec<(Monomial, Q)> = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let qm = m.div(&lm)?;
            let qc = &c / &lc;
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quotient.push((qm, qc));
        }
        // Quotient terms were produced in descending order.
        Some(MultiPoly { terms: quotient })
    }

    /// Makes the lexicographically leading coefficient equal to one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => MultiPoly::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Rational content: positive `c` with `self / c` having coprime integer coefficients.
    pub fn rational_content(&self) -> Q {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Q::one();
        }
        Q::new(num, den)
    }

    /// Integer-coefficient primitive form with positive leading coefficient.
    pub fn primitive(&self) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let mut c = self.rational_content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let (e, rest) = m.split_off(v);
            (e > 0).then(|| {
                (
                    rest.mul(&Monomial::var(v, e - 1)),
                    c * Q::from_integer(BigInt::from(e)),
                )
            })
        });
        MultiPoly::from_terms(terms.collect::<Vec<_>>())
    }

    /// Univariate coefficient list (low to high) when `v` is the only variable.
    pub fn to_univariate(&self, v: Var) -> Option<Vec<Q>> {
        let coeffs = self.coeffs_in(v);
        coeffs.iter().map(|c| c.as_constant()).collect()
    }

    pub fn from_univariate(v: Var, coeffs: &[Q]) -> MultiPoly {
        MultiPoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(v, i as u32), c.clone()))
                .collect::<Vec<_>>(),
        )
    }
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let o = a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn merge(a: &MultiPoly, b: &MultiPoly, negate_b: bool) -> MultiPoly {
    let (x, y) = (&a.terms, &b.terms);
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            Ordering::Greater => {
                out.push(x[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&y[j].1 } else { y[j].1.clone() };
                out.push((y[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &x[i].1 - &y[j].1 } else { &x[i].1 + &y[j].1 };
                if !c.is_zero() {
                    out.push((x[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(x[i..].iter().cloned());
    for t in &y[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0.clone(), c));
    }
    MultiPoly { terms: out }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        merge(self, rhs, false)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        merge(self, rhs, true)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_monomial(m, c);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_monomial(m, c);
        }
        let mut map: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match map.get_mut(&m) {
                    Some(acc) => *acc += c,
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        MultiPoly {
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;

    /// Builds `Σ coeff * vars` quickly: `lin(&[("a", 1), ("n", 1)], 1)` = a + n + 1.
    pub fn lin(parts: &[(&str, i64)], constant: i64) -> MultiPoly {
        let mut p = MultiPoly::int(constant);
        for &(name, c) in parts {
            let v = match name {
                "n" => Var::N,
                "k" => Var::K,
                other => Var::p(other),
            };
            p = &p + &MultiPoly::var(v).scale(&Q::from_integer(c.into()));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::test_util::lin;
    use super::*;

    #[test]
    fn lex_order_puts_params_first() {
        let a = Monomial::var(Var::p("a"), 1);
        let k2 = Monomial::var(Var::K, 2);
        assert!(a > k2);
        let n = Monomial::var(Var::N, 1);
        assert!(n > k2);
    }

    #[test]
    fn division_is_exact_or_none() {
        let p = &lin(&[("k", 1)], 1) * &lin(&[("a", 1), ("k", 1)], 0);
        let q = p.try_div(&lin(&[("k", 1)], 1)).unwrap();
        assert_eq!(q, lin(&[("a", 1), ("k", 1)], 0));
        assert!(p.try_div(&lin(&[("k", 1)], 2)).is_none());
    }

    #[test]
    fn substitution_shift() {
        let p = &lin(&[("k", 1)], 0) * &lin(&[("k", 1)], 0);
        let s = p.shift(Var::K, 1);
        assert_eq!(s, &(&p + &lin(&[("k", 2)], 0)) + &MultiPoly::one());
    }
}
