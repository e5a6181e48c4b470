//! Large-`k` and large-`n` behavior from `Γ(x + v)/Γ(y + v) ∼ v^(x − y)`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::gamma::GammaQuotient;
use crate::hyperterm::{Base, HyperTerm, Index, Poch, SeriesSpec};
use crate::linarg::LinArg;
use crate::linsolve::solve_linear;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AsymptoticsError {
    #[error("unsupported factor for the exponent calculus: {0}")]
    Unsupported(String),
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("termwise limit refused: {0}")]
    Refused(String),
}

/// Exponent of an estimate, with super-polynomial behavior ordered outside all linear forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Exponent {
    SuperPolyDecay,
    Linear(LinArg),
    SuperPolyGrowth,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::SuperPolyDecay => f.write_str("-inf"),
            Exponent::SuperPolyGrowth => f.write_str("+inf"),
            Exponent::Linear(e) => write!(f, "{e}"),
        }
    }
}

/// `value ∼ constant · Γ(v)^factorial · geometric^v · v^power` as `v → ∞`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AsymptoticEstimate {
    pub constant: GammaQuotient,
    pub factorial: i64,
    pub geometric: Q,
    pub power: LinArg,
}

impl AsymptoticEstimate {
    pub fn exponent(&self) -> Exponent {
        let g = self.geometric.abs();
        if self.factorial < 0 || (self.factorial == 0 && g < Q::one()) {
            Exponent::SuperPolyDecay
        } else if self.factorial > 0 || g > Q::one() {
            Exponent::SuperPolyGrowth
        } else {
            Exponent::Linear(self.power.clone())
        }
    }

    pub fn mul(&self, other: &AsymptoticEstimate) -> AsymptoticEstimate {
        AsymptoticEstimate {
            constant: self.constant.mul(&other.constant),
            factorial: self.factorial + other.factorial,
            geometric: &self.geometric * &other.geometric,
            power: &self.power + &other.power,
        }
    }

    fn unit() -> Self {
        AsymptoticEstimate {
            constant: GammaQuotient::one(),
            factorial: 0,
            geometric: Q::one(),
            power: LinArg::default(),
        }
    }

    /// Leading behavior of a rational function in `v`.
    fn of_ratfunc(r: &RatFunc, v: Var) -> Self {
        let (num, den) = (r.num(), r.den());
        let dn = num.degree_in(v) as i64;
        let dd = den.degree_in(v) as i64;
        let lc = RatFunc::new(num.lead_coeff_in(v), den.lead_coeff_in(v));
        AsymptoticEstimate {
            constant: GammaQuotient::from_ratfunc(lc),
            power: LinArg::int(dn - dd),
            ..Self::unit()
        }
    }
}

fn base_value(b: &Base) -> Result<Q, AsymptoticsError> {
    match b {
        Base::Rational(q) => Ok(q.clone()),
        Base::Param(v) => Err(AsymptoticsError::Unsupported(format!("pow({v},k)"))),
    }
}

/// Estimate of `t(n, k)` as `k → ∞` at fixed `n`.
pub fn k_exponent(t: &HyperTerm) -> Result<AsymptoticEstimate, AsymptoticsError> {
    let mut est = AsymptoticEstimate::of_ratfunc(t.prefactor(), Var::K);
    for (list, up) in [(t.numer(), true), (t.denom(), false)] {
        for p in list {
            let f = poch_k_estimate(p)?;
            est = est.mul(&if up { f } else { invert(&f) });
        }
    }
    for p in t.powers() {
        let z = base_value(&p.base);
        match p.index {
            Index::K => est.geometric *= z?,
            Index::N => {
                let base = match &p.base {
                    Base::Rational(q) => RatFunc::constant(q.clone()),
                    Base::Param(v) => RatFunc::var(*v),
                };
                est.constant = est.constant.clone().with_power(base);
            }
        }
    }
    est.constant = est.constant.simplify();
    Ok(est)
}

fn invert(e: &AsymptoticEstimate) -> AsymptoticEstimate {
    AsymptoticEstimate {
        constant: e.constant.inv(),
        factorial: -e.factorial,
        geometric: e.geometric.recip(),
        power: -&e.power,
    }
}

fn poch_k_estimate(p: &Poch) -> Result<AsymptoticEstimate, AsymptoticsError> {
    let x = &p.arg;
    match (p.index, x.k_coeff()) {
        // (x)_k = Γ(x + k)/Γ(x) ∼ Γ(k) k^x / Γ(x).
        (Index::K, 0) => Ok(AsymptoticEstimate {
            constant: GammaQuotient::new(vec![], vec![x.clone()], RatFunc::one()),
            factorial: 1,
            geometric: Q::one(),
            power: x.clone(),
        }),
        // (x)_n is constant in k.
        (Index::N, 0) => Ok(AsymptoticEstimate {
            constant: GammaQuotient::poch_n(x),
            ..AsymptoticEstimate::unit()
        }),
        // (y + k)_n ∼ k^n.
        (Index::N, 1) => Ok(AsymptoticEstimate {
            power: LinArg::n(),
            ..AsymptoticEstimate::unit()
        }),
        _ => Err(AsymptoticsError::Unsupported(format!("poch({},{})", x, p.index))),
    }
}

/// Estimate of a Gamma quotient as `n → ∞`.
pub fn n_estimate(g: &GammaQuotient) -> Result<AsymptoticEstimate, AsymptoticsError> {
    if !g.reflections().iter().all(|z| z.n_coeff() == 0) {
        return Err(AsymptoticsError::Unsupported("reflection marker depending on n".into()));
    }
    let geometric = match g.power().as_constant() {
        Some(q) => q,
        None => return Err(AsymptoticsError::Unsupported(format!("pow({},n)", g.power()))),
    };
    let mut est = AsymptoticEstimate::of_ratfunc(g.prefactor(), Var::N);
    est.geometric = geometric;
    let mut constant = est.constant.clone();
    for (list, up) in [(g.numer(), true), (g.denom(), false)] {
        for a in list {
            let sign = if up { 1 } else { -1 };
            match a.n_coeff() {
                0 => {
                    let f = GammaQuotient::gamma(a.clone());
                    constant = if up { constant.mul(&f) } else { constant.div(&f) };
                }
                1 => {
                    let x = a.with_n(0);
                    est.factorial += sign;
                    est.power = if up { &est.power + &x } else { &est.power - &x };
                }
                _ => return Err(AsymptoticsError::Unsupported(format!("Gamma({a})"))),
            }
        }
    }
    for z in g.reflections() {
        constant = constant.with_reflection(z.clone());
    }
    est.constant = constant.simplify();
    Ok(est)
}

/// A hypothesis on the parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Constraint {
    /// `Re(L) > 0`.
    RePositive(LinArg),
    /// `L ∉ {0, −1, −2, …}`.
    NotNonPositiveInteger(LinArg),
    /// `L ∈ {0, 1, 2, …}`.
    NonNegativeInteger(LinArg),
}

impl Constraint {
    pub fn form(&self) -> &LinArg {
        match self {
            Constraint::RePositive(l) | Constraint::NotNonPositiveInteger(l) | Constraint::NonNegativeInteger(l) => l,
        }
    }

    /// Parses the [`Display`](fmt::Display) form.
    pub fn parse(s: &str) -> Option<Constraint> {
        let s = s.trim();
        let lin = |t: &str| crate::parse::parse_linarg(t).ok();
        if let Some(inner) = s.strip_prefix("Re(").and_then(|r| r.strip_suffix(") > 0")) {
            return lin(inner).map(Constraint::RePositive);
        }
        if let Some(inner) = s.strip_suffix(" not in {0,-1,-2,...}") {
            return lin(inner).map(Constraint::NotNonPositiveInteger);
        }
        if let Some(inner) = s.strip_suffix(" in {0,1,2,...}") {
            return lin(inner).map(Constraint::NonNegativeInteger);
        }
        None
    }

    pub fn substitute(&self, v: Var, value: &LinArg) -> Constraint {
        let f = |l: &LinArg| l.substitute(v, value);
        match self {
            Constraint::RePositive(l) => Constraint::RePositive(f(l)),
            Constraint::NotNonPositiveInteger(l) => Constraint::NotNonPositiveInteger(f(l)),
            Constraint::NonNegativeInteger(l) => Constraint::NonNegativeInteger(f(l)),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::RePositive(l) => write!(f, "Re({l}) > 0"),
            Constraint::NotNonPositiveInteger(l) => write!(f, "{l} not in {{0,-1,-2,...}}"),
            Constraint::NonNegativeInteger(l) => write!(f, "{l} in {{0,1,2,...}}"),
        }
    }
}

/// Adds `c` unless an equal constraint is present.
pub fn push_unique(list: &mut Vec<Constraint>, c: Constraint) {
    if !list.contains(&c) {
        list.push(c);
    }
}

/// Conditions for the `pFq(1)` sum to be well defined and absolutely convergent.
///
/// An empty `Re` part means the series converges for all admissible parameters.
pub fn convergence_constraints(spec: &SeriesSpec) -> Result<Vec<Constraint>, AsymptoticsError> {
    let mut out = Vec::new();
    for l in &spec.lower {
        if l.as_constant().is_none() {
            push_unique(&mut out, Constraint::NotNonPositiveInteger(l.clone()));
        } else if l.nonpositive_integer().is_some() {
            return Err(AsymptoticsError::Divergent(format!("lower parameter {l} is a pole")));
        }
    }
    if spec.is_terminating() {
        return Ok(out);
    }
    if !spec.argument.is_one() {
        if spec.argument.abs() < Q::one() {
            return Ok(out);
        }
        return Err(AsymptoticsError::Unsupported(format!("argument {}", spec.argument)));
    }
    if spec.upper.len() != spec.lower.len() + 1 {
        return match spec.upper.len() <= spec.lower.len() {
            true => Ok(out),
            false => Err(AsymptoticsError::Divergent(spec.to_string())),
        };
    }
    let excess = spec.parametric_excess();
    match excess.as_constant() {
        Some(s) if s.is_positive() => {}
        Some(_) => return Err(AsymptoticsError::Divergent(format!("parametric excess {excess} is not positive"))),
        None => out.insert(0, Constraint::RePositive(excess)),
    }
    Ok(out)
}

/// How a sign question on `Re(E)` was settled from the hypotheses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Decision {
    /// Holds for every `n ≥ 0`.
    Always,
    /// Holds for `n ≥ n₀` with some finite `n₀`.
    Eventually,
    Unknown,
}

/// Decides `Re(target) > 0` from the `Re(L) > 0` hypotheses.
///
/// Looks for `μ_i ≥ 0` with `target − Σ μ_i L_i = c + d n` where `c, d ≥ 0`.
/// The `n` part alone decides the eventual case. No numeric probing.
pub fn decide_re_positive(target: &LinArg, constraints: &[Constraint]) -> Decision {
    if target.k_coeff() != 0 {
        return Decision::Unknown;
    }
    let d = Q::from_integer(target.n_coeff().into());
    let base = target.with_n(0);
    let settles = |rest: &LinArg, strict: bool| -> bool {
        let c = rest.as_constant().cloned().unwrap_or_else(Q::zero);
        rest.params().is_empty() && !c.is_negative() && !d.is_negative() && (strict || c.is_positive())
    };
    if base.params().is_empty() && settles(&base, false) {
        return Decision::Always;
    }
    let hyps: Vec<&LinArg> = constraints
        .iter()
        .filter_map(|c| match c {
            Constraint::RePositive(l) if l.n_coeff() == 0 && l.k_coeff() == 0 => Some(l),
            _ => None,
        })
        .collect();
    let m = hyps.len().min(12);
    for mask in 1u32..(1 << m) {
        let chosen: Vec<&LinArg> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| hyps[i]).collect();
        let Some(mu) = combination(&base, &chosen) else { continue };
        if mu.iter().any(|x| x.is_negative()) {
            continue;
        }
        let mut rest = base.clone();
        for (l, x) in chosen.iter().zip(&mu) {
            rest = &rest - &scale_q(l, x);
        }
        if settles(&rest, mu.iter().any(|x| x.is_positive())) {
            return Decision::Always;
        }
    }
    if d.is_positive() {
        Decision::Eventually
    } else {
        Decision::Unknown
    }
}

/// Decides `Re(target) < 0`.
pub fn decide_re_negative(target: &LinArg, constraints: &[Constraint]) -> Decision {
    decide_re_positive(&-target, constraints)
}

fn scale_q(l: &LinArg, x: &Q) -> LinArg {
    LinArg::new(l.params().iter().map(|(v, c)| (*v, c * x)), l.constant_part() * x, 0, 0)
}

/// Exact coefficients `μ` with `param_part(target) = Σ μ_i param_part(L_i)`.
fn combination(target: &LinArg, chosen: &[&LinArg]) -> Option<Vec<Q>> {
    let mut vars: Vec<Var> = target.params().keys().copied().collect();
    for l in chosen {
        vars.extend(l.params().keys().copied());
    }
    vars.sort();
    vars.dedup();
    let rows: Vec<Vec<RatFunc>> = vars
        .iter()
        .map(|v| chosen.iter().map(|l| RatFunc::constant(l.coeff(*v))).collect())
        .collect();
    let rhs: Vec<RatFunc> = vars.iter().map(|v| RatFunc::constant(target.coeff(*v))).collect();
    let x = solve_linear(&rows, &rhs)?;
    x.iter().map(|r| r.as_constant()).collect()
}

/// Behavior of a certificate term as `k → ∞`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Limit {
    Zero(Decision),
    Finite(GammaQuotient),
    Divergent,
    /// The sign of `Re(exponent)` does not follow from the hypotheses.
    Unknown(LinArg),
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Zero(Decision::Eventually) => f.write_str("0 (n >= n0)"),
            Limit::Zero(_) => f.write_str("0"),
            Limit::Finite(g) => write!(f, "{g}"),
            Limit::Divergent => f.write_str("divergent"),
            Limit::Unknown(e) => write!(f, "unknown (sign of Re({e}))"),
        }
    }
}

/// Classifies `lim constant · v^E` from an estimate.
pub fn classify(est: &AsymptoticEstimate, constraints: &[Constraint]) -> Limit {
    if est.constant.is_zero() {
        return Limit::Zero(Decision::Always);
    }
    match est.exponent() {
        Exponent::SuperPolyDecay => Limit::Zero(Decision::Always),
        Exponent::SuperPolyGrowth => Limit::Divergent,
        Exponent::Linear(e) => {
            if e.is_zero() {
                return Limit::Finite(est.constant.clone());
            }
            match decide_re_negative(&e, constraints) {
                Decision::Unknown => {}
                d => return Limit::Zero(d),
            }
            if decide_re_positive(&e, constraints) == Decision::Always {
                return Limit::Divergent;
            }
            Limit::Unknown(e)
        }
    }
}

/// `G(n, 0)` and `lim_{k→∞} G(n, k)` for `G = R · t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryLimits {
    pub value_at_0: GammaQuotient,
    pub limit_at_inf: Limit,
}

pub fn boundary_limits(t: &HyperTerm, r: &RatFunc, constraints: &[Constraint]) -> Result<BoundaryLimits, AsymptoticsError> {
    if r.is_zero() {
        return Ok(BoundaryLimits {
            value_at_0: GammaQuotient::zero(),
            limit_at_inf: Limit::Zero(Decision::Always),
        });
    }
    let r0 = r
        .substitute_rational(Var::K, &Q::zero())
        .ok_or_else(|| AsymptoticsError::Unsupported(format!("certificate {r} has a pole at k = 0")))?;
    let value_at_0 = if r0.is_zero() { GammaQuotient::zero() } else { value_at_k0(t)?.scale(&r0).simplify() };
    let est = k_exponent(t)?.mul(&AsymptoticEstimate::of_ratfunc(r, Var::K));
    let mut limit_at_inf = classify(&est, constraints);
    if let Limit::Finite(g) = &limit_at_inf {
        limit_at_inf = Limit::Finite(g.simplify());
    }
    Ok(BoundaryLimits { value_at_0, limit_at_inf })
}

/// `t(n, 0)`: k-Pochhammers are 1 there, n-Pochhammers become Gamma ratios.
fn value_at_k0(t: &HyperTerm) -> Result<GammaQuotient, AsymptoticsError> {
    let pre = t
        .prefactor()
        .substitute_rational(Var::K, &Q::zero())
        .ok_or_else(|| AsymptoticsError::Unsupported("prefactor pole at k = 0".into()))?;
    let mut g = GammaQuotient::from_ratfunc(pre);
    for (list, up) in [(t.numer(), true), (t.denom(), false)] {
        for p in list.iter().filter(|p| p.index == Index::N) {
            let f = GammaQuotient::poch_n(&p.arg.with_k(0));
            g = if up { g.mul(&f) } else { g.div(&f) };
        }
    }
    for p in t.powers().iter().filter(|p| p.index == Index::N) {
        g = g.with_power(p.base.to_ratfunc());
    }
    Ok(g.simplify())
}

/// Result of the termwise `n → ∞` rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TermwiseLimit {
    pub term: HyperTerm,
    /// The limit is `δ_{k,0}` times the prefactor at `k = 0`.
    pub delta: bool,
    pub consumed: Vec<Constraint>,
    pub side_condition: String,
}

/// Drops matched `+n` Pochhammer pairs, the dominated-convergence pattern.
///
/// Each upper `(x + n)_k` pairs with a lower `(y + n)_k`; their ratio tends to
/// 1 for fixed `k`. The side condition is convergence of the limiting series,
/// which must follow from `constraints`. Extra lower `+n` entries send every
/// term with `k ≥ 1` to 0 and give `δ_{k,0}`; that case is dominated by the
/// same series at a fixed `n₀` large enough.
pub fn n_limit_termwise(t: &HyperTerm, constraints: &[Constraint]) -> Result<TermwiseLimit, AsymptoticsError> {
    if t.prefactor().contains_var(Var::N) || t.powers().iter().any(|p| p.index == Index::N) {
        return Err(AsymptoticsError::Refused("n outside Pochhammer arguments".into()));
    }
    let mut up_n = Vec::new();
    let mut up_rest = Vec::new();
    let mut low_n = Vec::new();
    let mut low_rest = Vec::new();
    for (list, ups, rests) in [(t.numer(), &mut up_n, &mut up_rest), (t.denom(), &mut low_n, &mut low_rest)] {
        for p in list {
            if p.index == Index::N || p.arg.k_coeff() != 0 {
                return Err(AsymptoticsError::Refused(format!("factor poch({},{})", p.arg, p.index)));
            }
            match p.arg.n_coeff() {
                0 => rests.push(p.clone()),
                1 => ups.push(p.clone()),
                c => return Err(AsymptoticsError::Refused(format!("n coefficient {c} in {}", p.arg))),
            }
        }
    }
    if up_n.is_empty() && low_n.is_empty() {
        return Ok(TermwiseLimit {
            term: t.clone(),
            delta: false,
            consumed: Vec::new(),
            side_condition: "no n dependence".into(),
        });
    }
    if up_n.len() > low_n.len() {
        return Err(AsymptoticsError::Refused("unmatched upper +n Pochhammer".into()));
    }
    if low_n.len() > up_n.len() {
        let pre = t
            .prefactor()
            .substitute_rational(Var::K, &Q::zero())
            .ok_or_else(|| AsymptoticsError::Refused("prefactor pole at k = 0".into()))?;
        let extra = &low_n[up_n.len()..];
        let side = extra
            .iter()
            .map(|p| format!("n >= n0 with Re({}) > 0 at n0", p.arg))
            .collect::<Vec<_>>()
            .join(", ");
        return Ok(TermwiseLimit {
            term: HyperTerm::new(vec![Poch::k(LinArg::int(0))], vec![], vec![], pre),
            delta: true,
            consumed: Vec::new(),
            side_condition: format!("dominated by the n0 series; {side}"),
        });
    }
    let limit = HyperTerm::new(up_rest, low_rest, t.powers().to_vec(), t.prefactor().clone());
    let spec = series_of(&limit)
        .ok_or_else(|| AsymptoticsError::Refused(format!("limit term {limit} is not a pFq summand")))?;
    let conv = convergence_constraints(&spec)?;
    let mut consumed = Vec::new();
    for c in conv {
        if let Constraint::RePositive(l) = &c {
            if decide_re_positive(l, constraints) != Decision::Always {
                return Err(AsymptoticsError::Refused(format!("side condition {c} is not implied by the hypotheses")));
            }
            consumed.push(c);
        }
    }
    let side = if consumed.is_empty() {
        "limit series converges absolutely".to_string()
    } else {
        consumed.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    };
    Ok(TermwiseLimit {
        term: limit,
        delta: false,
        consumed,
        side_condition: side,
    })
}

/// Reads a `k`-term `Π (u)_k / (Π (l)_k k!)` back as a series.
pub fn series_of(t: &HyperTerm) -> Option<SeriesSpec> {
    if !t.prefactor().is_one() || !t.powers().is_empty() {
        return None;
    }
    if t.numer().iter().chain(t.denom()).any(|p| p.index != Index::K) {
        return None;
    }
    let upper: Vec<LinArg> = t.numer().iter().map(|p| p.arg.clone()).collect();
    let mut lower: Vec<LinArg> = t.denom().iter().map(|p| p.arg.clone()).collect();
    let one = LinArg::int(1);
    match lower.iter().position(|l| *l == one) {
        Some(i) => {
            lower.remove(i);
        }
        None => return None,
    }
    Some(SeriesSpec::new(upper, lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperterm::term_from_series;

    fn p(name: &str) -> LinArg {
        LinArg::param(Var::p(name))
    }

    fn saal_family() -> SeriesSpec {
        let (a, b, c, e) = (p("a"), p("b"), p("c"), p("e"));
        let cn = &c + &LinArg::n();
        let low = (&(&(&a + &b) + &cn) - &e).add_int(1);
        SeriesSpec::new(vec![a, b, cn], vec![e, low])
    }

    #[test]
    fn saalschutzian_summand_decays_like_k_to_minus_two() {
        let t = term_from_series(&saal_family()).unwrap();
        let est = k_exponent(&t).unwrap();
        assert_eq!(est.exponent(), Exponent::Linear(LinArg::int(-2)));
        let s = est.constant.to_string();
        assert_eq!(est.constant.numer().len(), 2, "{s}");
        assert_eq!(est.constant.denom().len(), 3, "{s}");
    }

    #[test]
    fn factorial_gives_super_polynomial_decay() {
        let t = term_from_series(&SeriesSpec::new(vec![], vec![])).unwrap();
        assert_eq!(k_exponent(&t).unwrap().exponent(), Exponent::SuperPolyDecay);
    }

    #[test]
    fn gauss_convergence_conditions() {
        let (a, b, c) = (p("a"), p("b"), p("c"));
        let spec = SeriesSpec::new(vec![a.clone(), b.clone()], vec![c.clone()]);
        let cs = convergence_constraints(&spec).unwrap();
        assert_eq!(cs[0].to_string(), "Re(-a - b + c) > 0");
        assert_eq!(cs[1], Constraint::NotNonPositiveInteger(c));
        let saal = convergence_constraints(&saal_family()).unwrap();
        assert!(saal.iter().all(|c| !matches!(c, Constraint::RePositive(_))));
    }

    #[test]
    fn sign_decisions_use_only_hypotheses() {
        let (a, b, c) = (p("a"), p("b"), p("c"));
        let hyp = vec![Constraint::RePositive(&(&c - &a) - &b)];
        let e = &(&(&a + &b) - &c) - &LinArg::n();
        assert_eq!(decide_re_negative(&e, &hyp), Decision::Always);
        assert_eq!(decide_re_negative(&e, &[]), Decision::Eventually);
        assert_eq!(decide_re_negative(&(&a - &c), &hyp), Decision::Unknown);
        let twice = Constraint::RePositive(&c.scale(2) - &a.scale(2));
        assert_eq!(decide_re_positive(&(&c - &a).add_int(1), &[twice]), Decision::Always);
    }

    #[test]
    fn termwise_limit_drops_matched_pair() {
        let t = term_from_series(&saal_family()).unwrap();
        let (a, b, e) = (p("a"), p("b"), p("e"));
        let hyp = vec![Constraint::RePositive(&(&e - &a) - &b)];
        let lim = n_limit_termwise(&t, &hyp).unwrap();
        let gauss = term_from_series(&SeriesSpec::new(vec![a, b], vec![e])).unwrap();
        assert_eq!(lim.term, gauss);
        assert_eq!(lim.consumed, hyp);
        assert!(n_limit_termwise(&t, &[]).is_err());
    }

    #[test]
    fn unmatched_lower_gives_delta() {
        let (a, b, c) = (p("a"), p("b"), p("c"));
        let spec = SeriesSpec::new(vec![a, b], vec![&c + &LinArg::n()]);
        let t = term_from_series(&spec).unwrap();
        let lim = n_limit_termwise(&t, &[]).unwrap();
        assert!(lim.delta);
        assert_eq!(lim.term.eval_exact(0, 0), Some(RatFunc::one()));
        assert_eq!(lim.term.eval_exact(0, 3), Some(RatFunc::zero()));
    }
}
