//! Proper hypergeometric terms in `(n, k)`.

use std::fmt;

use num_traits::One;

use crate::linarg::LinArg;
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::Q;

/// Shift variable a Pochhammer symbol or power runs over.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Index {
    N,
    K,
}

impl Index {
    pub fn var(self) -> Var {
        match self {
            Index::N => Var::N,
            Index::K => Var::K,
        }
    }

    pub fn of(v: Var) -> Option<Index> {
        match v {
            Var::N => Some(Index::N),
            Var::K => Some(Index::K),
            _ => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Index::N => "n",
            Index::K => "k",
        })
    }
}

/// `(arg)_index`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Poch {
    pub arg: LinArg,
    pub index: Index,
}

impl Poch {
    pub fn new(arg: LinArg, index: Index) -> Self {
        Poch { arg, index }
    }

    pub fn k(arg: LinArg) -> Self {
        Poch::new(arg, Index::K)
    }

    pub fn n(arg: LinArg) -> Self {
        Poch::new(arg, Index::N)
    }

    /// `arg + index` as an affine form: the Gamma argument of the numerator.
    pub fn top(&self) -> LinArg {
        match self.index {
            Index::N => self.arg.with_n(self.arg.n_coeff() + 1),
            Index::K => self.arg.with_k(self.arg.k_coeff() + 1),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Base {
    Rational(Q),
    Param(Var),
}

impl Base {
    pub fn to_ratfunc(&self) -> RatFunc {
        match self {
            Base::Rational(q) => RatFunc::constant(q.clone()),
            Base::Param(v) => RatFunc::var(*v),
        }
    }
}

/// `base^index`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Power {
    pub base: Base,
    pub index: Index,
}

/// `prefactor · Π (num)_· · Π base^· / Π (den)_·`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HyperTerm {
    numer: Vec<Poch>,
    denom: Vec<Poch>,
    powers: Vec<Power>,
    prefactor: RatFunc,
}

/// `pFq([upper], [lower], argument)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SeriesSpec {
    pub upper: Vec<LinArg>,
    pub lower: Vec<LinArg>,
    pub argument: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("series with {upper} upper and {lower} lower parameters diverges at argument 1")]
    Diverges { upper: usize, lower: usize },
    #[error("lower parameter {0} is a nonpositive integer")]
    LowerPole(String),
    #[error("series arguments must not depend on k")]
    KInArgument,
}

impl SeriesSpec {
    pub fn new(upper: Vec<LinArg>, lower: Vec<LinArg>) -> Self {
        SeriesSpec {
            upper,
            lower,
            argument: Q::one(),
        }
    }

    /// Smallest `m` such that an upper parameter equals `-m`.
    pub fn termination(&self) -> Option<u64> {
        self.upper.iter().filter_map(|u| u.nonpositive_integer()).min()
    }

    pub fn is_terminating(&self) -> bool {
        self.termination().is_some()
    }

    /// `Σ lower - Σ upper`; positive real part means absolute convergence at 1.
    pub fn parametric_excess(&self) -> LinArg {
        let mut acc = LinArg::default();
        for l in &self.lower {
            acc = &acc + l;
        }
        for u in &self.upper {
            acc = &acc - u;
        }
        acc
    }

    pub fn substitute(&self, v: Var, value: &LinArg) -> SeriesSpec {
        SeriesSpec {
            upper: self.upper.iter().map(|a| a.substitute(v, value)).collect(),
            lower: self.lower.iter().map(|a| a.substitute(v, value)).collect(),
            argument: self.argument.clone(),
        }
    }

    pub fn params(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .upper
            .iter()
            .chain(&self.lower)
            .flat_map(|a| a.variables())
            .filter(|v| v.is_param())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Rising factorial `Γ(a + j)/Γ(a)` for an integer `j` as a rational function.
pub(crate) fn rising(a: &MultiPoly, j: i64) -> RatFunc {
    let mut num = MultiPoly::one();
    let mut den = MultiPoly::one();
    if j >= 0 {
        for i in 0..j {
            num = &num * &(a + &MultiPoly::int(i));
        }
    } else {
        for i in 1..=-j {
            den = &den * &(a - &MultiPoly::int(i));
        }
    }
    RatFunc::new(num, den)
}

fn poch_shift_quotient(p: &Poch, v: Var) -> RatFunc {
    // (x)_m = Γ(x+m)/Γ(x); shifting v moves x by dx and m by dm.
    let dx = p.arg.coeff(v).to_integer();
    let dx: i64 = dx.try_into().expect("small shift coefficient");
    let dm = i64::from(p.index.var() == v);
    let top = p.top().to_poly();
    let base = p.arg.to_poly();
    let up = rising(&top, dx + dm);
    let down = rising(&base, dx);
    &up / &down
}

impl HyperTerm {
    pub fn one() -> Self {
        HyperTerm {
            numer: Vec::new(),
            denom: Vec::new(),
            powers: Vec::new(),
            prefactor: RatFunc::one(),
        }
    }

    pub fn new(numer: Vec<Poch>, denom: Vec<Poch>, powers: Vec<Power>, prefactor: RatFunc) -> Self {
        let mut t = HyperTerm {
            numer,
            denom,
            powers,
            prefactor,
        };
        t.canonicalize();
        t
    }

    fn canonicalize(&mut self) {
        self.numer.sort();
        self.denom.sort();
        self.powers.sort();
        // Cancel identical numerator/denominator symbols.
        let mut i = 0;
        while i < self.numer.len() {
            if let Some(j) = self.denom.iter().position(|d| *d == self.numer[i]) {
                self.denom.remove(j);
                self.numer.remove(i);
            } else {
                i += 1;
            }
        }
    }

    pub fn numer(&self) -> &[Poch] {
        &self.numer
    }

    pub fn denom(&self) -> &[Poch] {
        &self.denom
    }

    pub fn powers(&self) -> &[Power] {
        &self.powers
    }

    pub fn prefactor(&self) -> &RatFunc {
        &self.prefactor
    }

    pub fn with_prefactor(&self, prefactor: RatFunc) -> Self {
        HyperTerm {
            prefactor,
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &HyperTerm) -> HyperTerm {
        let mut numer = self.numer.clone();
        numer.extend(other.numer.iter().cloned());
        let mut denom = self.denom.clone();
        denom.extend(other.denom.iter().cloned());
        let mut powers = self.powers.clone();
        powers.extend(other.powers.iter().cloned());
        HyperTerm::new(numer, denom, powers, &self.prefactor * &other.prefactor)
    }

    pub fn inverse(&self) -> HyperTerm {
        let powers = self
            .powers
            .iter()
            .map(|p| Power {
                base: match &p.base {
                    Base::Rational(q) => Base::Rational(q.recip()),
                    Base::Param(_) => panic!("inverse of a parameter power"),
                },
                index: p.index,
            })
            .collect();
        HyperTerm::new(self.denom.clone(), self.numer.clone(), powers, self.prefactor.inv())
    }

    /// `t(v + 1) / t(v)` for `v ∈ {n, k}`.
    pub fn shift_quotient(&self, v: Var) -> RatFunc {
        assert!(v.is_shift(), "shift quotient in a parameter");
        let mut acc = self.prefactor.shift(v, 1) / self.prefactor.clone();
        for p in &self.numer {
            acc = &acc * &poch_shift_quotient(p, v);
        }
        for p in &self.denom {
            acc = &acc / &poch_shift_quotient(p, v);
        }
        for p in &self.powers {
            if p.index.var() == v {
                acc = &acc * &p.base.to_ratfunc();
            }
        }
        acc
    }

    /// `t(n + j, k) / t(n, k)` for an integer `j ≥ 0`.
    pub fn n_shift_ratio(&self, j: u32) -> RatFunc {
        let q = self.shift_quotient(Var::N);
        let mut acc = RatFunc::one();
        for i in 0..j {
            acc = &acc * &q.shift(Var::N, i as i64);
        }
        acc
    }

    /// Exact value at `n = n0`, `k = k0` as a rational function of the parameters.
    ///
    /// `None` when a denominator vanishes or a Pochhammer index is negative.
    pub fn eval_exact(&self, n0: i64, k0: i64) -> Option<RatFunc> {
        let idx = |i: Index| match i {
            Index::N => n0,
            Index::K => k0,
        };
        let mut acc = self
            .prefactor
            .substitute_rational(Var::N, &Q::from_integer(n0.into()))?
            .substitute_rational(Var::K, &Q::from_integer(k0.into()))?;
        for (list, up) in [(&self.numer, true), (&self.denom, false)] {
            for p in list {
                let m = idx(p.index);
                if m < 0 {
                    return None;
                }
                let r = rising(&p.arg.at(n0, k0).to_poly(), m);
                if up {
                    acc = &acc * &r;
                } else {
                    if r.is_zero() {
                        return None;
                    }
                    acc = &acc / &r;
                }
            }
        }
        for p in &self.powers {
            let m = idx(p.index);
            acc = &acc * &p.base.to_ratfunc().pow(m as i32);
        }
        Some(acc)
    }

    /// Replaces parameter `v` by the affine form `value` (for example `c ↦ c + n`).
    pub fn substitute_param(&self, v: Var, value: &LinArg) -> HyperTerm {
        let sub = |p: &Poch| Poch::new(p.arg.substitute(v, value), p.index);
        let prefactor = self.prefactor.substitute_poly(v, &value.to_poly());
        let powers = self.powers.clone();
        HyperTerm::new(
            self.numer.iter().map(sub).collect(),
            self.denom.iter().map(sub).collect(),
            powers,
            prefactor,
        )
    }

    /// Smallest `m` with an upper `(−m)_k`, making the sum over `k` finite.
    pub fn termination(&self) -> Option<u64> {
        self.numer
            .iter()
            .filter(|p| p.index == Index::K)
            .filter_map(|p| p.arg.nonpositive_integer())
            .min()
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.numer.iter().chain(&self.denom).any(|p| p.arg.depends_on(v) || p.index.var() == v)
            || self.prefactor.contains_var(v)
            || self.powers.iter().any(|p| p.index.var() == v || p.base == Base::Param(v))
    }

    pub fn params(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .numer
            .iter()
            .chain(&self.denom)
            .flat_map(|p| p.arg.variables())
            .chain(self.prefactor.variables())
            .chain(self.powers.iter().filter_map(|p| match p.base {
                Base::Param(v) => Some(v),
                _ => None,
            }))
            .filter(|v| v.is_param())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

/// `t(k) = Π (u)_k / (Π (l)_k · k!)`, times `z^k` when the argument is not 1.
pub fn term_from_series(spec: &SeriesSpec) -> Result<HyperTerm, TermError> {
    if spec.upper.iter().chain(&spec.lower).any(|a| a.k_coeff() != 0) {
        return Err(TermError::KInArgument);
    }
    if spec.argument.is_one() && spec.upper.len() > spec.lower.len() + 1 && !spec.is_terminating() {
        return Err(TermError::Diverges {
            upper: spec.upper.len(),
            lower: spec.lower.len(),
        });
    }
    if let Some(l) = spec.lower.iter().find(|l| l.nonpositive_integer().is_some()) {
        return Err(TermError::LowerPole(l.to_string()));
    }
    let numer = spec.upper.iter().cloned().map(Poch::k).collect();
    let mut denom: Vec<Poch> = spec.lower.iter().cloned().map(Poch::k).collect();
    denom.push(Poch::k(LinArg::int(1)));
    let powers = if spec.argument.is_one() {
        Vec::new()
    } else {
        vec![Power {
            base: Base::Rational(spec.argument.clone()),
            index: Index::K,
        }]
    };
    Ok(HyperTerm::new(numer, denom, powers, RatFunc::one()))
}

impl fmt::Display for HyperTerm {
    /// Grammar form: `poch(x,k)`, `fac(k)` for `(1)_k`, `pow(z,k)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poch = |p: &Poch| {
            if p.arg.as_constant().is_some_and(|c| c.is_one()) {
                format!("fac({})", p.index)
            } else {
                format!("poch({},{})", p.arg, p.index)
            }
        };
        let mut num: Vec<String> = Vec::new();
        if !self.prefactor.is_one() || (self.numer.is_empty() && self.powers.is_empty()) {
            num.push(format!("({})", self.prefactor));
        }
        num.extend(self.numer.iter().map(poch));
        for p in &self.powers {
            let b = match &p.base {
                Base::Rational(q) => q.to_string(),
                Base::Param(v) => v.to_string(),
            };
            num.push(format!("pow({},{})", b, p.index));
        }
        let num = num.join("*");
        if self.denom.is_empty() {
            return f.write_str(&num);
        }
        let den: Vec<String> = self.denom.iter().map(poch).collect();
        write!(f, "{}/({})", num, den.join("*"))
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[LinArg]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "pFq([{}],[{}],{})", join(&self.upper), join(&self.lower), self.argument)
    }
}

/// Binomial coefficient `C(n, k) = (−n)_k (−1)^k / k!` as a term in `(n, k)`.
pub fn binomial_nk() -> HyperTerm {
    HyperTerm::new(
        vec![Poch::k(-&LinArg::n())],
        vec![Poch::k(LinArg::int(1))],
        vec![Power {
            base: Base::Rational(-Q::one()),
            index: Index::K,
        }],
        RatFunc::one(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> LinArg {
        LinArg::param(Var::p(name))
    }

    pub(crate) fn gauss_f() -> HyperTerm {
        // (a)_k (b)_k / ((c+n)_k k!)
        HyperTerm::new(
            vec![Poch::k(p("a")), Poch::k(p("b"))],
            vec![Poch::k(&p("c") + &LinArg::n()), Poch::k(LinArg::int(1))],
            vec![],
            RatFunc::one(),
        )
    }

    fn rf(s: &[(&str, i64)], c: i64) -> RatFunc {
        RatFunc::from_poly(crate::poly::test_util::lin(s, c))
    }

    #[test]
    fn k_quotient_of_gauss_term() {
        let q = gauss_f().shift_quotient(Var::K);
        let expect = &(&rf(&[("a", 1), ("k", 1)], 0) * &rf(&[("b", 1), ("k", 1)], 0))
            / &(&rf(&[("c", 1), ("n", 1), ("k", 1)], 0) * &rf(&[("k", 1)], 1));
        assert_eq!(q, expect);
    }

    #[test]
    fn n_quotient_of_gauss_term() {
        // (c+n)_k / (c+n+1)_k = (c+n)/(c+n+k)
        let q = gauss_f().shift_quotient(Var::N);
        assert_eq!(q, &rf(&[("c", 1), ("n", 1)], 0) / &rf(&[("c", 1), ("n", 1), ("k", 1)], 0));
    }

    #[test]
    fn exact_values() {
        let f = gauss_f();
        assert!(f.eval_exact(0, 0).unwrap().is_one());
        let v = f.eval_exact(0, 2).unwrap();
        let expect = &(&(&rf(&[("a", 1)], 0) * &rf(&[("a", 1)], 1)) * &(&rf(&[("b", 1)], 0) * &rf(&[("b", 1)], 1)))
            / &(&(&rf(&[("c", 1)], 0) * &rf(&[("c", 1)], 1)) * &RatFunc::int(2));
        assert_eq!(v, expect);
        let inv_fac = term_from_series(&SeriesSpec::new(vec![], vec![])).unwrap();
        assert_eq!(inv_fac.eval_exact(0, 3).unwrap(), RatFunc::constant(Q::new(1.into(), 6.into())));
    }

    #[test]
    fn k_times_factorial() {
        let t = HyperTerm::new(vec![Poch::k(LinArg::int(1))], vec![], vec![], RatFunc::var(Var::K));
        let q = t.shift_quotient(Var::K);
        let k = RatFunc::var(Var::K);
        let k1 = &k + &RatFunc::one();
        assert_eq!(q, &(&k1 * &k1) / &k);
    }

    #[test]
    fn binomial_values() {
        let b = binomial_nk();
        assert_eq!(b.eval_exact(5, 2).unwrap(), RatFunc::int(10));
        assert_eq!(b.eval_exact(4, 5).unwrap(), RatFunc::zero());
    }

    #[test]
    fn divergent_spec_rejected() {
        let s = SeriesSpec::new(vec![p("a"), p("b"), p("c")], vec![p("d")]);
        assert!(matches!(term_from_series(&s), Err(TermError::Diverges { .. })));
    }
}
