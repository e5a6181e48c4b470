//! Affine arguments `Σ c_i p_i + c + α n + β k` of Pochhammer and Gamma factors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::MultiPoly;
use crate::symbol::Var;
use crate::Q;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinArg {
    /// Parameter coefficients, no zero entries.
    params: BTreeMap<Var, Q>,
    constant: Q,
    n: i64,
    k: i64,
}

impl LinArg {
    pub fn constant(c: Q) -> Self {
        LinArg {
            constant: c,
            ..Default::default()
        }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Q::from_integer(c.into()))
    }

    pub fn param(v: Var) -> Self {
        let mut params = BTreeMap::new();
        params.insert(v, Q::one());
        LinArg {
            params,
            ..Default::default()
        }
    }

    pub fn n() -> Self {
        LinArg {
            n: 1,
            ..Default::default()
        }
    }

    pub fn k() -> Self {
        LinArg {
            k: 1,
            ..Default::default()
        }
    }

    pub fn new(params: impl IntoIterator<Item = (Var, Q)>, constant: Q, n: i64, k: i64) -> Self {
        let mut map = BTreeMap::new();
        for (v, c) in params {
            assert!(v.is_param() || v.is_aux(), "shift variable in parameter part");
            *map.entry(v).or_insert_with(Q::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        LinArg {
            params: map,
            constant,
            n,
            k,
        }
    }

    /// The affine form from a polynomial of total degree ≤ 1 with integer `n`, `k` coefficients.
    pub fn from_poly(p: &MultiPoly) -> Option<Self> {
        if p.total_degree() > 1 {
            return None;
        }
        let mut out = LinArg::default();
        for (m, c) in p.terms() {
            match m.pairs() {
                [] => out.constant = c.clone(),
                [(v, 1)] if *v == Var::N => out.n = integer(c)?,
                [(v, 1)] if *v == Var::K => out.k = integer(c)?,
                [(v, 1)] => {
                    out.params.insert(*v, c.clone());
                }
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn to_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::constant(self.constant.clone());
        for (v, c) in &self.params {
            p = &p + &MultiPoly::var(*v).scale(c);
        }
        if self.n != 0 {
            p = &p + &MultiPoly::var(Var::N).scale(&Q::from_integer(self.n.into()));
        }
        if self.k != 0 {
            p = &p + &MultiPoly::var(Var::K).scale(&Q::from_integer(self.k.into()));
        }
        p
    }

    pub fn params(&self) -> &BTreeMap<Var, Q> {
        &self.params
    }

    pub fn constant_part(&self) -> &Q {
        &self.constant
    }

    pub fn n_coeff(&self) -> i64 {
        self.n
    }

    pub fn k_coeff(&self) -> i64 {
        self.k
    }

    pub fn coeff(&self, v: Var) -> Q {
        if v == Var::N {
            Q::from_integer(self.n.into())
        } else if v == Var::K {
            Q::from_integer(self.k.into())
        } else {
            self.params.get(&v).cloned().unwrap_or_else(Q::zero)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.params.is_empty() && self.constant.is_zero() && self.n == 0 && self.k == 0
    }

    /// Free of parameters, `n` and `k`.
    pub fn as_constant(&self) -> Option<&Q> {
        (self.params.is_empty() && self.n == 0 && self.k == 0).then_some(&self.constant)
    }

    pub fn is_param_only(&self) -> bool {
        self.n == 0 && self.k == 0
    }

    pub fn depends_on(&self, v: Var) -> bool {
        !self.coeff(v).is_zero()
    }

    pub fn with_n(&self, n: i64) -> Self {
        LinArg { n, ..self.clone() }
    }

    pub fn with_k(&self, k: i64) -> Self {
        LinArg { k, ..self.clone() }
    }

    /// Without the `n` and `k` terms.
    pub fn param_part(&self) -> Self {
        LinArg {
            n: 0,
            k: 0,
            ..self.clone()
        }
    }

    pub fn add_const(&self, c: &Q) -> Self {
        LinArg {
            constant: &self.constant + c,
            ..self.clone()
        }
    }

    pub fn add_int(&self, c: i64) -> Self {
        self.add_const(&Q::from_integer(c.into()))
    }

    pub fn scale(&self, c: i64) -> Self {
        let q = Q::from_integer(c.into());
        LinArg::new(
            self.params.iter().map(|(v, x)| (*v, x * &q)),
            &self.constant * &q,
            self.n * c,
            self.k * c,
        )
    }

    /// Replaces `n` by `n + s`.
    pub fn shift_n(&self, s: i64) -> Self {
        self.add_int(self.n * s)
    }

    pub fn shift_k(&self, s: i64) -> Self {
        self.add_int(self.k * s)
    }

    /// Sets `n` and `k` to integers.
    pub fn at(&self, n: i64, k: i64) -> Self {
        LinArg {
            n: 0,
            k: 0,
            ..self.add_int(self.n * n + self.k * k)
        }
    }

    /// Replaces parameter `v` by the affine form `value`.
    pub fn substitute(&self, v: Var, value: &LinArg) -> Self {
        let c = self.coeff(v);
        if c.is_zero() {
            return self.clone();
        }
        let ci = c.to_integer();
        let mut rest = self.clone();
        rest.params.remove(&v);
        let mut scaled = LinArg::new(
            value.params.iter().map(|(w, x)| (*w, x * &c)),
            &value.constant * &c,
            0,
            0,
        );
        if c.is_integer() {
            let ci = ci.to_i64().expect("small coefficient");
            scaled.n = value.n * ci;
            scaled.k = value.k * ci;
        } else {
            assert!(value.n == 0 && value.k == 0, "fractional multiple of a shift variable");
        }
        &rest + &scaled
    }

    /// Value at a rational parameter point; `None` when a symbol is unbound.
    pub fn eval(&self, point: &dyn Fn(Var) -> Option<Q>) -> Option<Q> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.params {
            acc += c * point(*v)?;
        }
        if self.n != 0 {
            acc += Q::from_integer(self.n.into()) * point(Var::N)?;
        }
        if self.k != 0 {
            acc += Q::from_integer(self.k.into()) * point(Var::K)?;
        }
        Some(acc)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.params.keys().copied().collect();
        if self.n != 0 {
            v.push(Var::N);
        }
        if self.k != 0 {
            v.push(Var::K);
        }
        v
    }

    /// `self - other` when it is an integer constant.
    pub fn int_difference(&self, other: &LinArg) -> Option<i64> {
        let d = self - other;
        d.as_constant().and_then(integer)
    }

    /// Nonpositive integer constant `-m`, returned as `m`.
    pub fn nonpositive_integer(&self) -> Option<u64> {
        let c = self.as_constant()?;
        if c.is_integer() && !c.is_positive() {
            (-c).to_integer().to_u64()
        } else {
            None
        }
    }
}

fn integer(c: &Q) -> Option<i64> {
    if c.is_integer() {
        c.to_integer().to_i64()
    } else {
        None
    }
}

impl<'a> Add<&'a LinArg> for &'a LinArg {
    type Output = LinArg;
    fn add(self, rhs: &'a LinArg) -> LinArg {
        LinArg::new(
            self.params.iter().chain(rhs.params.iter()).map(|(v, c)| (*v, c.clone())),
            &self.constant + &rhs.constant,
            self.n + rhs.n,
            self.k + rhs.k,
        )
    }
}

impl<'a> Sub<&'a LinArg> for &'a LinArg {
    type Output = LinArg;
    fn sub(self, rhs: &'a LinArg) -> LinArg {
        self + &(-rhs)
    }
}

impl Neg for &LinArg {
    type Output = LinArg;
    fn neg(self) -> LinArg {
        LinArg::new(
            self.params.iter().map(|(v, c)| (*v, -c)),
            -&self.constant,
            -self.n,
            -self.k,
        )
    }
}

impl fmt::Display for LinArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for LinArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for LinArg {
    fn from(c: i64) -> Self {
        LinArg::int(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_printing() {
        let a = LinArg::param(Var::p("a"));
        let e = LinArg::param(Var::p("e"));
        let x = &(&(&a - &e) + &LinArg::n()).add_int(1) + &LinArg::k();
        assert_eq!(x.to_string(), "a - e + n + k + 1");
        assert_eq!(LinArg::from_poly(&x.to_poly()), Some(x.clone()));
        assert_eq!(x.at(2, 3).to_string(), "a - e + 6");
    }

    #[test]
    fn substitution_by_shifted_parameter() {
        let c = Var::p("c");
        let x = &LinArg::param(c).scale(2) + &LinArg::int(1);
        let y = x.substitute(c, &(&LinArg::param(c) + &LinArg::n()));
        assert_eq!(y.to_string(), "2*c + 2*n + 1");
    }

    #[test]
    fn integer_differences() {
        let a = LinArg::param(Var::p("a"));
        assert_eq!(a.add_int(3).int_difference(&a), Some(3));
        assert_eq!(a.int_difference(&LinArg::param(Var::p("b"))), None);
        assert_eq!(LinArg::int(-4).nonpositive_integer(), Some(4));
    }
}
