//! Signed products of Gamma factors with affine arguments.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive};

use crate::hyperterm::rising;
use crate::linarg::LinArg;
use crate::poly::{linear_factors, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::Q;

/// Largest integer gap collapsed into a rational factor by [`gamma_simplify`].
const MAX_COLLAPSE: i64 = 256;

/// `prefactor · power^n · Π Γ(numer) · Π π/sin(π z) / Π Γ(denom)`.
///
/// `power` depends on parameters only; `prefactor` may involve `n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GammaQuotient {
    numer: Vec<LinArg>,
    denom: Vec<LinArg>,
    prefactor: RatFunc,
    power: RatFunc,
    reflections: Vec<LinArg>,
}

impl GammaQuotient {
    pub fn new(numer: Vec<LinArg>, denom: Vec<LinArg>, prefactor: RatFunc) -> Self {
        let mut g = GammaQuotient {
            numer,
            denom,
            prefactor,
            power: RatFunc::one(),
            reflections: Vec::new(),
        };
        g.sort();
        g
    }

    pub fn one() -> Self {
        Self::from_ratfunc(RatFunc::one())
    }

    pub fn zero() -> Self {
        Self::from_ratfunc(RatFunc::zero())
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        Self::new(Vec::new(), Vec::new(), r)
    }

    pub fn gamma(arg: LinArg) -> Self {
        Self::new(vec![arg], Vec::new(), RatFunc::one())
    }

    /// `Γ(x + n) / Γ(x)`, the Pochhammer symbol `(x)_n`.
    pub fn poch_n(x: &LinArg) -> Self {
        Self::new(vec![x + &LinArg::n()], vec![x.clone()], RatFunc::one())
    }

    pub fn with_power(mut self, base: RatFunc) -> Self {
        assert!(!base.contains_var(Var::N) && !base.contains_var(Var::K), "power base depends on a shift variable");
        self.power = &self.power * &base;
        self
    }

    pub fn with_reflection(mut self, z: LinArg) -> Self {
        self.reflections.push(z);
        self.sort();
        self
    }

    fn sort(&mut self) {
        self.numer.sort();
        self.denom.sort();
        self.reflections.sort();
    }

    pub fn numer(&self) -> &[LinArg] {
        &self.numer
    }

    pub fn denom(&self) -> &[LinArg] {
        &self.denom
    }

    pub fn prefactor(&self) -> &RatFunc {
        &self.prefactor
    }

    pub fn power(&self) -> &RatFunc {
        &self.power
    }

    pub fn reflections(&self) -> &[LinArg] {
        &self.reflections
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    /// The rational function this quotient equals when no Gamma factor is left.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        if !self.numer.is_empty() || !self.denom.is_empty() || !self.reflections.is_empty() {
            return None;
        }
        if self.power.is_one() || self.is_zero() {
            Some(self.prefactor.clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_ratfunc().is_some_and(|r| r.is_one())
    }

    pub fn mul(&self, other: &GammaQuotient) -> GammaQuotient {
        let mut numer = self.numer.clone();
        numer.extend(other.numer.iter().cloned());
        let mut denom = self.denom.clone();
        denom.extend(other.denom.iter().cloned());
        let mut reflections = self.reflections.clone();
        reflections.extend(other.reflections.iter().cloned());
        let mut g = GammaQuotient {
            numer,
            denom,
            prefactor: &self.prefactor * &other.prefactor,
            power: &self.power * &other.power,
            reflections,
        };
        g.sort();
        g
    }

    pub fn scale(&self, r: &RatFunc) -> GammaQuotient {
        let mut g = self.clone();
        g.prefactor = &g.prefactor * r;
        g
    }

    /// Reciprocal. Reflection markers are unfolded into `Γ(z)Γ(1 − z)` in the denominator.
    pub fn inv(&self) -> GammaQuotient {
        let mut denom = self.numer.clone();
        for z in &self.reflections {
            denom.push(z.clone());
            denom.push(&LinArg::int(1) - z);
        }
        let mut g = GammaQuotient {
            numer: self.denom.clone(),
            denom,
            prefactor: self.prefactor.inv(),
            power: self.power.inv(),
            reflections: Vec::new(),
        };
        g.sort();
        g
    }

    pub fn div(&self, other: &GammaQuotient) -> GammaQuotient {
        self.mul(&other.inv())
    }

    fn map_args(&self, f: &dyn Fn(&LinArg) -> LinArg) -> (Vec<LinArg>, Vec<LinArg>, Vec<LinArg>) {
        (
            self.numer.iter().map(f).collect(),
            self.denom.iter().map(f).collect(),
            self.reflections.iter().map(f).collect(),
        )
    }

    /// Value at the integer `n = n0`.
    pub fn at_n(&self, n0: i64) -> GammaQuotient {
        let (numer, denom, reflections) = self.map_args(&|a| a.at(n0, 0));
        let prefactor = self
            .prefactor
            .substitute_rational(Var::N, &Q::from_integer(n0.into()))
            .expect("prefactor pole at the requested n");
        let prefactor = &prefactor * &self.power.pow(n0 as i32);
        let mut g = GammaQuotient {
            numer,
            denom,
            prefactor,
            power: RatFunc::one(),
            reflections,
        };
        g.sort();
        g
    }

    /// Replaces `n` by `n + s`.
    pub fn shift_n(&self, s: i64) -> GammaQuotient {
        let (numer, denom, reflections) = self.map_args(&|a| a.shift_n(s));
        let prefactor = &self.prefactor.shift(Var::N, s) * &self.power.pow(s as i32);
        let mut g = GammaQuotient {
            numer,
            denom,
            prefactor,
            power: self.power.clone(),
            reflections,
        };
        g.sort();
        g
    }

    /// Replaces parameter `v` by the affine form `value`.
    pub fn substitute_param(&self, v: Var, value: &LinArg) -> GammaQuotient {
        let (numer, denom, reflections) = self.map_args(&|a| a.substitute(v, value));
        let poly = value.to_poly();
        let mut g = GammaQuotient {
            numer,
            denom,
            prefactor: self.prefactor.substitute_poly(v, &poly),
            power: self.power.substitute_poly(v, &poly),
            reflections,
        };
        g.sort();
        g
    }

    /// Replaces `n` by the parameter `v`; `None` when a `base^n` factor is present.
    pub fn n_to_param(&self, v: Var) -> Option<GammaQuotient> {
        if !self.power.is_one() {
            return None;
        }
        let lv = LinArg::param(v);
        let f = |a: &LinArg| &a.with_n(0) + &lv.scale(a.n_coeff());
        let (numer, denom, reflections) = self.map_args(&f);
        let mut g = GammaQuotient {
            numer,
            denom,
            prefactor: self.prefactor.substitute_poly(Var::N, &MultiPoly::var(v)),
            power: RatFunc::one(),
            reflections,
        };
        g.sort();
        Some(g)
    }

    /// `self(n + 1) / self(n)` as a rational function.
    pub fn shift_ratio_n(&self) -> RatFunc {
        let mut acc = &(self.prefactor.shift(Var::N, 1) / self.prefactor.clone()) * &self.power;
        for (list, up) in [(&self.numer, true), (&self.denom, false)] {
            for a in list {
                let r = rising(&a.to_poly(), a.n_coeff());
                acc = if up { &acc * &r } else { &acc / &r };
            }
        }
        for z in &self.reflections {
            // π/sin(π(z + c)) = (−1)^c π/sin(πz).
            if z.n_coeff() % 2 != 0 {
                acc = -acc;
            }
        }
        acc
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.numer.iter().chain(&self.denom).chain(&self.reflections).any(|a| a.depends_on(v))
            || self.prefactor.contains_var(v)
            || (v == Var::N && !self.power.is_one())
            || self.power.contains_var(v)
    }

    pub fn params(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .numer
            .iter()
            .chain(&self.denom)
            .chain(&self.reflections)
            .flat_map(|a| a.variables())
            .chain(self.prefactor.variables())
            .chain(self.power.variables())
            .filter(|v| v.is_param())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Every argument that must avoid the Gamma poles, in both numerator and denominator.
    pub fn gamma_args(&self) -> impl Iterator<Item = &LinArg> {
        self.numer.iter().chain(&self.denom)
    }

    pub fn simplify(&self) -> GammaQuotient {
        gamma_simplify(self)
    }

    /// True when `self / other` simplifies to 1.
    pub fn equivalent(&self, other: &GammaQuotient) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.div(other).simplify().is_one()
    }
}

/// Canonical form.
///
/// Cancels Gamma factors whose arguments differ by an integer (collapsing the
/// gap into a rational factor), absorbs linear prefactor factors through
/// `Γ(z + 1) = z Γ(z)`, evaluates Gamma at small positive integers, and records
/// numerator pairs `Γ(z)Γ(1 − z)` as reflection markers `π/sin(πz)`.
pub fn gamma_simplify(g: &GammaQuotient) -> GammaQuotient {
    if g.is_zero() {
        return GammaQuotient::zero();
    }
    let mut out = g.clone();
    loop {
        let mut changed = collapse_integer_gaps(&mut out);
        changed |= absorb_linear_factors(&mut out);
        changed |= evaluate_integer_gammas(&mut out);
        if !changed {
            break;
        }
    }
    extract_reflections(&mut out);
    out.sort();
    out
}

fn collapse_integer_gaps(g: &mut GammaQuotient) -> bool {
    let mut changed = false;
    let mut i = 0;
    'outer: while i < g.numer.len() {
        for j in 0..g.denom.len() {
            if let Some(m) = g.numer[i].int_difference(&g.denom[j]) {
                if m.abs() <= MAX_COLLAPSE {
                    let d = g.denom.remove(j);
                    g.numer.remove(i);
                    g.prefactor = &g.prefactor * &rising(&d.to_poly(), m);
                    changed = true;
                    continue 'outer;
                }
            }
        }
        i += 1;
    }
    changed
}

/// `s` with `p = s · q` for a constant `s`, if any.
fn proportional(p: &MultiPoly, q: &MultiPoly) -> Option<Q> {
    if q.is_zero() {
        return None;
    }
    RatFunc::new(p.clone(), q.clone()).as_constant()
}

fn absorb_linear_factors(g: &mut GammaQuotient) -> bool {
    let mut changed = false;
    for side_num in [true, false] {
        let part = if side_num { g.prefactor.num().clone() } else { g.prefactor.den().clone() };
        if part.is_constant() {
            continue;
        }
        let fz = linear_factors(&part);
        let mut kept = MultiPoly::constant(fz.unit.clone());
        let mut unit = Q::one();
        for (f, m) in &fz.linear {
            for _ in 0..*m {
                if let Some(s) = absorb_one(g, f, side_num) {
                    unit *= s;
                    changed = true;
                } else {
                    kept = &kept * f;
                }
            }
        }
        kept = &kept * &fz.residual;
        let kept = RatFunc::from_poly(kept);
        let unit = RatFunc::constant(unit);
        g.prefactor = if side_num {
            &(&kept * &unit) / &RatFunc::from_poly(g.prefactor.den().clone())
        } else {
            &RatFunc::from_poly(g.prefactor.num().clone()) / &(&kept * &unit)
        };
    }
    changed
}

/// Moves one linear factor `f` into a Gamma argument; returns the constant left over.
fn absorb_one(g: &mut GammaQuotient, f: &MultiPoly, in_numerator: bool) -> Option<Q> {
    // Numerator factor: f·Γ(z) = s·Γ(z+1) with f = s·z, or f/Γ(z) = s/Γ(z−1) with f = s·(z−1).
    // Denominator factor: the mirror image.
    let (same, other) = if in_numerator {
        (&mut g.numer, &mut g.denom)
    } else {
        (&mut g.denom, &mut g.numer)
    };
    for z in same.iter_mut() {
        if let Some(s) = proportional(f, &z.to_poly()) {
            *z = z.add_int(1);
            return Some(s);
        }
    }
    for z in other.iter_mut() {
        if let Some(s) = proportional(f, &z.add_int(-1).to_poly()) {
            *z = z.add_int(-1);
            return Some(s);
        }
    }
    None
}

fn evaluate_integer_gammas(g: &mut GammaQuotient) -> bool {
    let small = |a: &LinArg| -> Option<u32> {
        let c = a.as_constant()?;
        if c.is_integer() && c.is_positive() {
            c.to_integer().to_u32().filter(|&v| v <= 30)
        } else {
            None
        }
    };
    let mut changed = false;
    let mut value = Q::one();
    for (list, up) in [(&mut g.numer, true), (&mut g.denom, false)] {
        list.retain(|a| match small(a) {
            Some(m) => {
                let mut f = Q::one();
                for i in 1..m {
                    f *= Q::from_integer(i.into());
                }
                if up {
                    value *= f;
                } else {
                    value /= f;
                }
                changed = true;
                false
            }
            None => true,
        });
    }
    if changed {
        g.prefactor = g.prefactor.scale(&value);
    }
    changed
}

fn extract_reflections(g: &mut GammaQuotient) {
    let one = LinArg::int(1);
    let mut i = 0;
    while i < g.numer.len() {
        let partner = &one - &g.numer[i];
        if let Some(j) = (0..g.numer.len()).find(|&j| j != i && g.numer[j] == partner) {
            let z = std::cmp::min(g.numer[i].clone(), partner);
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            g.numer.remove(hi);
            g.numer.remove(lo);
            g.reflections.push(z);
            i = 0;
        } else {
            i += 1;
        }
    }
}

fn push_poly(items: &mut Vec<String>, neg: &mut bool, p: &MultiPoly) {
    if p.is_one() {
        return;
    }
    if p.as_constant().is_some_and(|c| c == -Q::one()) {
        *neg = !*neg;
        return;
    }
    let s = p.to_factored_string();
    match s.strip_prefix('-') {
        Some(rest) => {
            *neg = !*neg;
            items.push(rest.to_string());
        }
        None => items.push(s),
    }
}

impl fmt::Display for GammaQuotient {
    /// Grammar form, e.g. `Gamma(e)*Gamma(-a - b + e)/(Gamma(-a + e)*Gamma(-b + e))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut neg = false;
        let mut num: Vec<String> = Vec::new();
        push_poly(&mut num, &mut neg, self.prefactor.num());
        if !self.power.is_one() {
            num.push(format!("pow({},n)", self.power));
        }
        num.extend(self.numer.iter().map(|a| format!("Gamma({a})")));
        for _ in &self.reflections {
            num.push("pi".to_string());
        }
        let mut den: Vec<String> = Vec::new();
        let mut den_neg = false;
        push_poly(&mut den, &mut den_neg, self.prefactor.den());
        neg ^= den_neg;
        den.extend(self.denom.iter().map(|a| format!("Gamma({a})")));
        den.extend(self.reflections.iter().map(|z| format!("sin(pi*({z}))")));
        if neg {
            f.write_str("-")?;
        }
        if num.is_empty() {
            f.write_str("1")?;
        } else {
            f.write_str(&num.join("*"))?;
        }
        if !den.is_empty() {
            write!(f, "/({})", den.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> LinArg {
        LinArg::param(Var::p(name))
    }

    #[test]
    fn shift_rule_collapses_to_rational() {
        let a = p("a");
        let g = GammaQuotient::new(vec![a.add_int(1)], vec![a.clone()], RatFunc::one());
        let s = gamma_simplify(&g);
        assert_eq!(s.as_ratfunc(), Some(RatFunc::var(Var::p("a"))));
    }

    #[test]
    fn gauss_right_side_is_irreducible() {
        let (a, b, c) = (p("a"), p("b"), p("c"));
        let g = GammaQuotient::new(vec![c.clone(), &(&c - &a) - &b], vec![&c - &a, &c - &b], RatFunc::one());
        assert_eq!(gamma_simplify(&g), g);
    }

    #[test]
    fn reflection_pair_is_marked() {
        let z = p("z");
        let g = GammaQuotient::new(vec![z.clone(), &LinArg::int(1) - &z], vec![], RatFunc::one());
        let s = gamma_simplify(&g);
        assert!(s.numer().is_empty());
        assert_eq!(s.reflections().len(), 1);
        assert!(s.to_string().contains("sin(pi*("));
    }

    #[test]
    fn linear_factor_is_absorbed() {
        let c = p("c");
        let cn = &c + &LinArg::n();
        let g = GammaQuotient::new(vec![], vec![cn.clone()], RatFunc::from_poly(cn.to_poly()).inv());
        let s = gamma_simplify(&g);
        assert_eq!(s.denom(), &[cn.add_int(1)]);
        assert!(s.prefactor().is_one());
    }

    #[test]
    fn shift_ratio_of_pochhammer() {
        let b = p("b");
        let g = GammaQuotient::poch_n(&b);
        let r = g.shift_ratio_n();
        assert_eq!(r, RatFunc::from_poly((&b + &LinArg::n()).to_poly()));
        assert!(g.at_n(3).simplify().as_ratfunc().is_some());
    }

    #[test]
    fn equivalence_up_to_shift_rule() {
        let a = p("a");
        let x = GammaQuotient::gamma(a.add_int(1));
        let y = GammaQuotient::gamma(a.clone()).scale(&RatFunc::var(Var::p("a")));
        assert!(x.equivalent(&y));
        assert!(!x.equivalent(&GammaQuotient::gamma(a)));
    }
}
