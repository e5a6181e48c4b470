//! From a series to an identity: telescoping recurrence, Gamma prefactor,
//! boundary terms and the `n → ∞` limit.
//!
//! Three routes share the same front end (shift one parameter by `n`, run
//! Zeilberger, normalize to a pure difference `F(n+1,k) − F(n,k) = ΔG`):
//!
//! * constancy: the boundary step vanishes, `Σ_k F(n,k)` is independent of
//!   `n` and equals its termwise limit;
//! * telescoped: the step is a Gamma quotient in `n` whose partial sums form a
//!   second series, giving `A + B = C`;
//! * terminating: the shifted parameter enters as `−m`, the sum is `1` at
//!   `m = 0`, and the closed form is the ratio of prefactors.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    self, boundary_limits, convergence_constraints, n_estimate, n_limit_termwise, push_unique, series_of,
    AsymptoticsError, BoundaryLimits, Constraint, Limit, TermwiseLimit,
};
use crate::gamma::GammaQuotient;
use crate::hyperterm::{term_from_series, Base, HyperTerm, Index, Poch, Power, SeriesSpec};
use crate::linarg::LinArg;
use crate::poly::{linear_factors, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::telescoper::{verify_certificate, zeilberger, Recurrence};
use crate::Q;

/// Largest recurrence order tried by [`derive_identity`].
pub const MAX_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{stage}: {message}")]
pub struct PipelineError {
    pub stage: &'static str,
    pub message: String,
}

impl PipelineError {
    fn new(stage: &'static str, message: impl Into<String>) -> Self {
        PipelineError {
            stage,
            message: message.into(),
        }
    }
}

fn at_stage(stage: &'static str) -> impl Fn(AsymptoticsError) -> PipelineError {
    move |e| PipelineError::new(stage, e.to_string())
}

/// One rule application in a derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub rule: String,
    pub detail: String,
    pub consumed: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
}

impl ProofTrace {
    fn push(&mut self, rule: &str, detail: impl Into<String>, consumed: &[Constraint]) {
        self.steps.push(ProofStep {
            rule: rule.into(),
            detail: detail.into(),
            consumed: consumed.iter().map(|c| c.to_string()).collect(),
        });
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.steps.iter().any(|s| s.rule == rule)
    }
}

/// `Σ_i coefficient_i · series_i = rhs` under `constraints`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityStatement {
    pub lhs: Vec<(GammaQuotient, SeriesSpec)>,
    pub rhs: GammaQuotient,
    pub constraints: Vec<Constraint>,
    pub trace: ProofTrace,
}

impl fmt::Display for IdentityStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs: Vec<String> = self.lhs.iter().map(|(c, s)| format!("({c})*{s}")).collect();
        write!(f, "{} = {}", lhs.join(" + "), self.rhs)?;
        if !self.constraints.is_empty() {
            let cs: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
            write!(f, "  [{}]", cs.join(", "))?;
        }
        Ok(())
    }
}

/// Output of [`normalize_to_telescoping`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    /// `λ(n)/λ(0) · t`, satisfying the pure difference form.
    pub term: HyperTerm,
    /// `G_cert` with `F(n+1,k) − F(n,k) = G(n,k+1) − G(n,k)`, `G = G_cert F`.
    pub certificate: RatFunc,
    /// `λ(n)` as a Gamma quotient.
    pub prefactor: GammaQuotient,
}

/// `r = u · Π (n + x_i) / Π (n + y_j)` with `u` free of `n`.
struct NSplit {
    unit: RatFunc,
    upper: Vec<LinArg>,
    lower: Vec<LinArg>,
}

fn split_poly(p: &MultiPoly, unit: &mut RatFunc, out: &mut Vec<LinArg>) -> Result<(), String> {
    let fac = linear_factors(p);
    if fac.residual.contains_var(Var::N) {
        return Err(format!("factor {} is not linear in n", fac.residual.to_factored_string()));
    }
    *unit = &(&*unit * &RatFunc::constant(fac.unit.clone())) * &RatFunc::from_poly(fac.residual.clone());
    for (lf, m) in &fac.linear {
        if !lf.contains_var(Var::N) {
            *unit = &*unit * &RatFunc::from_poly(lf.pow(*m));
            continue;
        }
        let cs = lf.coeffs_in(Var::N);
        let alpha = cs[1]
            .as_constant()
            .ok_or_else(|| format!("factor {} has a symbolic n coefficient", lf.to_factored_string()))?;
        let x = LinArg::from_poly(&cs[0].scale(&alpha.recip()))
            .ok_or_else(|| format!("factor {} is not affine", lf.to_factored_string()))?;
        *unit = &*unit * &RatFunc::constant(alpha.clone()).pow(*m as i32);
        out.extend(std::iter::repeat_n(x, *m as usize));
    }
    Ok(())
}

fn split_in_n(r: &RatFunc) -> Result<NSplit, String> {
    let mut unit = RatFunc::one();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    split_poly(r.num(), &mut unit, &mut upper)?;
    let mut den_unit = RatFunc::one();
    split_poly(r.den(), &mut den_unit, &mut lower)?;
    Ok(NSplit {
        unit: &unit / &den_unit,
        upper,
        lower,
    })
}

fn power_base(u: &RatFunc) -> Result<Option<Base>, String> {
    if u.is_one() {
        return Ok(None);
    }
    if let Some(q) = u.as_constant() {
        return Ok(Some(Base::Rational(q)));
    }
    let vars = u.variables();
    if vars.len() == 1 && *u == RatFunc::var(vars[0]) {
        return Ok(Some(Base::Param(vars[0])));
    }
    Err(format!("geometric factor {u} is not a number or a single parameter"))
}

/// `λ(n)/λ(0)` as `n`-Pochhammers, for a prefactor `u^n Π Γ(n+x)/Π Γ(n+y)`.
pub fn prefactor_term(prefactor: &GammaQuotient) -> Option<HyperTerm> {
    if !prefactor.reflections().is_empty() || prefactor.prefactor().contains_var(Var::N) {
        return None;
    }
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    for (args, out) in [(prefactor.numer(), &mut numer), (prefactor.denom(), &mut denom)] {
        for a in args {
            match a.n_coeff() {
                0 => {}
                1 => out.push(Poch::n(a.with_n(0))),
                _ => return None,
            }
        }
    }
    let powers = match power_base(prefactor.power()).ok()? {
        Some(base) => vec![Power { base, index: Index::N }],
        None => Vec::new(),
    };
    Some(HyperTerm::new(numer, denom, powers, RatFunc::one()))
}

/// Rewrites `c₀ t(n) + c₁ t(n+1) = ΔG` as `F(n+1) − F(n) = ΔG'` with `F = λ t`.
///
/// `λ(n+1)/λ(n) = −c₁/c₀` and `G' = −R/c₀` for the certificate `R` of `rec`.
pub fn normalize_to_telescoping(t: &HyperTerm, rec: &Recurrence) -> Result<Normalized, PipelineError> {
    const STAGE: &str = "normalize";
    if rec.order() != 1 {
        return Err(PipelineError::new(STAGE, format!("recurrence of order {} is not supported", rec.order())));
    }
    let (c0, c1) = (&rec.coeffs[0], &rec.coeffs[1]);
    if c0.is_zero() || c1.is_zero() {
        return Err(PipelineError::new(STAGE, "degenerate recurrence coefficient"));
    }
    let ratio = -(c1 / c0);
    let split = split_in_n(&ratio).map_err(|m| PipelineError::new(STAGE, m))?;
    let base = power_base(&split.unit).map_err(|m| PipelineError::new(STAGE, m))?;
    let n = LinArg::n();
    let mut prefactor = GammaQuotient::new(
        split.upper.iter().map(|x| x + &n).collect(),
        split.lower.iter().map(|y| y + &n).collect(),
        RatFunc::one(),
    );
    if base.is_some() {
        prefactor = prefactor.with_power(split.unit.clone());
    }
    let lambda = HyperTerm::new(
        split.upper.iter().cloned().map(Poch::n).collect(),
        split.lower.iter().cloned().map(Poch::n).collect(),
        base.map(|b| vec![Power { base: b, index: Index::N }]).unwrap_or_default(),
        RatFunc::one(),
    );
    let term = t.mul(&lambda);
    let certificate = -(&rec.certificate / c0);
    let pure = Recurrence {
        coeffs: vec![-RatFunc::one(), RatFunc::one()],
        certificate: certificate.clone(),
    };
    if !verify_certificate(&term, &pure) {
        return Err(PipelineError::new(STAGE, "normalized pair fails the difference identity"));
    }
    Ok(Normalized {
        term,
        certificate,
        prefactor,
    })
}

/// `S(n) = S(0) + Σ_{m<n} step(m)` for `S(n) = Σ_k F(n,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumDecomposition {
    pub boundary: BoundaryLimits,
    /// `lim_k G(n,k) − G(n,0)`; zero for a constant sum.
    pub step: GammaQuotient,
    /// `Σ_{m≥0} step(m) = coefficient · series`, absent for a zero step.
    pub step_series: Option<(GammaQuotient, SeriesSpec)>,
}

pub fn telescoped_sum(f: &HyperTerm, cert: &RatFunc, constraints: &[Constraint]) -> Result<SumDecomposition, PipelineError> {
    const STAGE: &str = "boundary";
    let boundary = boundary_limits(f, cert, constraints).map_err(at_stage(STAGE))?;
    let at0 = &boundary.value_at_0;
    let step = match &boundary.limit_at_inf {
        Limit::Zero(_) => GammaQuotient::from_ratfunc(-RatFunc::one()).mul(at0),
        Limit::Finite(g) if at0.is_zero() => g.clone(),
        Limit::Finite(_) => {
            return Err(PipelineError::new(STAGE, "both boundary terms are nonzero"));
        }
        other => return Err(PipelineError::new(STAGE, format!("limit of G as k -> oo is {other}"))),
    }
    .simplify();
    let step_series = if step.is_zero() { None } else { Some(step_as_series(&step)?) };
    Ok(SumDecomposition {
        boundary,
        step,
        step_series,
    })
}

/// Reads `Σ_{m≥0} step(m)` as `step(0) · pFq(1)` from the ratio `step(m+1)/step(m)`.
pub fn step_as_series(step: &GammaQuotient) -> Result<(GammaQuotient, SeriesSpec), PipelineError> {
    const STAGE: &str = "step series";
    let split = split_in_n(&step.shift_ratio_n()).map_err(|m| PipelineError::new(STAGE, m))?;
    if !split.unit.is_one() {
        return Err(PipelineError::new(STAGE, format!("step ratio has argument {} instead of 1", split.unit)));
    }
    let mut upper = split.upper;
    let mut lower = split.lower;
    let one = LinArg::int(1);
    match lower.iter().position(|l| *l == one) {
        Some(i) => {
            lower.remove(i);
        }
        None => upper.push(one),
    }
    upper.sort();
    lower.sort();
    Ok((step.at_n(0).simplify(), SeriesSpec::new(upper, lower)))
}

/// The one registered base case: Gauss' sum of a `2F1(1)`.
pub fn base_case(spec: &SeriesSpec) -> Option<(GammaQuotient, Vec<Constraint>)> {
    if spec.upper.len() != 2 || spec.lower.len() != 1 || !spec.argument.is_one() {
        return None;
    }
    let (a, b, c) = (&spec.upper[0], &spec.upper[1], &spec.lower[0]);
    let excess = &(c - a) - b;
    let value = GammaQuotient::new(vec![c.clone(), excess.clone()], vec![c - a, c - b], RatFunc::one());
    let mut constraints = vec![Constraint::RePositive(excess)];
    if c.as_constant().is_none() {
        constraints.push(Constraint::NotNonPositiveInteger(c.clone()));
    }
    Some((value, constraints))
}

/// `lim_n Σ_k t(n,k)` through the termwise rule and the base case table.
fn limit_of_sum(t: &HyperTerm, constraints: &[Constraint], trace: &mut ProofTrace) -> Result<GammaQuotient, PipelineError> {
    const STAGE: &str = "n-limit";
    let TermwiseLimit {
        term,
        delta,
        consumed,
        side_condition,
    } = n_limit_termwise(t, constraints).map_err(at_stage(STAGE))?;
    if delta {
        trace.push(
            "termwise-limit",
            format!("lim_n of the summand is delta_(k,0); {side_condition}"),
            &consumed,
        );
        return Ok(GammaQuotient::from_ratfunc(term.prefactor().clone()));
    }
    let spec = series_of(&term).ok_or_else(|| PipelineError::new(STAGE, format!("limit term {term} is not a series")))?;
    trace.push("termwise-limit", format!("lim_n sum = {spec}; {side_condition}"), &consumed);
    let (value, needs) = base_case(&spec).ok_or_else(|| PipelineError::new(STAGE, format!("no base case for {spec}")))?;
    for c in &needs {
        if let Constraint::RePositive(l) = c {
            if asymptotics::decide_re_positive(l, constraints) != asymptotics::Decision::Always {
                return Err(PipelineError::new(STAGE, format!("base case needs {c}")));
            }
        }
    }
    trace.push("base-case", format!("{spec} = {value}"), &needs);
    Ok(value)
}

/// `lim_n λ(n)`.
fn prefactor_limit(prefactor: &GammaQuotient, constraints: &[Constraint], trace: &mut ProofTrace) -> Result<GammaQuotient, PipelineError> {
    const STAGE: &str = "prefactor limit";
    let est = n_estimate(prefactor).map_err(at_stage(STAGE))?;
    let value = match asymptotics::classify(&est, constraints) {
        Limit::Finite(g) => g.simplify(),
        Limit::Zero(asymptotics::Decision::Always) => GammaQuotient::zero(),
        other => return Err(PipelineError::new(STAGE, format!("lim_n of {prefactor} is {other}"))),
    };
    trace.push(
        "gamma-ratio-asymptotics",
        format!("{prefactor} ~ {} * n^({}) -> {value}", est.constant, est.power),
        &[],
    );
    Ok(value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Constancy,
    Telescoped,
    Terminating,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Constancy => "constancy",
            Strategy::Telescoped => "telescoped",
            Strategy::Terminating => "terminating",
        })
    }
}

/// Everything a derivation produced, for proof output and re-checking.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub input: SeriesSpec,
    pub shift: Var,
    pub strategy: Strategy,
    pub family: HyperTerm,
    pub recurrence: Recurrence,
    pub normalized: Normalized,
    pub sum: SumDecomposition,
    pub identity: IdentityStatement,
}

/// Derives a closed-form identity for `spec` by shifting `shift` by `n`.
pub fn derive_identity(spec: &SeriesSpec, shift: Var) -> Result<Derivation, PipelineError> {
    if !spec.params().contains(&shift) {
        return Err(PipelineError::new("input", format!("{shift} does not occur in {spec}")));
    }
    let neg = -&LinArg::param(shift);
    if spec.upper.contains(&neg) {
        return derive_terminating(spec, shift);
    }
    let mut trace = ProofTrace::default();
    let mut constraints = convergence_constraints(spec).map_err(at_stage("input"))?;
    let family_spec = spec.substitute(shift, &(&LinArg::param(shift) + &LinArg::n()));
    let family = term_from_series(&family_spec).map_err(|e| PipelineError::new("input", e.to_string()))?;
    let recurrence = zeilberger(&family, MAX_ORDER).map_err(|e| PipelineError::new("zeilberger", e.to_string()))?;
    trace.push(
        "zeilberger",
        format!(
            "order {}: coefficients [{}], certificate {}",
            recurrence.order(),
            recurrence.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
            recurrence.certificate
        ),
        &[],
    );
    let normalized = normalize_to_telescoping(&family, &recurrence)?;
    trace.push(
        "normalize",
        format!("lambda(n) = {}, G = ({}) F", normalized.prefactor, normalized.certificate),
        &[],
    );
    let sum = telescoped_sum(&normalized.term, &normalized.certificate, &constraints)?;
    trace.push(
        "boundary",
        format!(
            "G(n,0) = {}, lim_k G(n,k) = {}",
            sum.boundary.value_at_0, sum.boundary.limit_at_inf
        ),
        &constraints,
    );
    let lambda0 = normalized.prefactor.at_n(0).simplify();
    let (identity, strategy) = match &sum.step_series {
        None => {
            trace.push("constancy", "S(n+1) - S(n) = 0, so S(n) = S(0) for all n", &[]);
            let lim_lambda = prefactor_limit(&normalized.prefactor, &constraints, &mut trace)?;
            let lim_sum = limit_of_sum(&family, &constraints, &mut trace)?;
            let rhs = lim_lambda.mul(&lim_sum).div(&lambda0).simplify();
            let mut cs = constraints.clone();
            add_base_constraints(&mut cs, &mut trace);
            (
                IdentityStatement {
                    lhs: vec![(GammaQuotient::one(), spec.clone())],
                    rhs,
                    constraints: cs,
                    trace,
                },
                Strategy::Constancy,
            )
        }
        Some((coeff, step_spec)) => {
            trace.push(
                "telescoped-sum",
                format!("S(n) = S(0) + sum_(m<n) step(m), step(n) = {}", sum.step),
                &[],
            );
            let step_conv = convergence_constraints(step_spec).map_err(at_stage("step series"))?;
            for c in step_conv {
                push_unique(&mut constraints, c);
            }
            trace.push(
                "partial-sum-limit",
                format!("sum_(m<n) step(m) -> ({coeff}) * {step_spec}"),
                &constraints,
            );
            let lim_lambda = prefactor_limit(&normalized.prefactor, &constraints, &mut trace)?;
            let lim_sum = limit_of_sum(&family, &constraints, &mut trace)?;
            let rhs = lim_lambda.mul(&lim_sum).simplify();
            let b = lambda0.mul(coeff).simplify();
            let mut cs = constraints.clone();
            add_base_constraints(&mut cs, &mut trace);
            (
                IdentityStatement {
                    lhs: vec![(lambda0.clone(), spec.clone()), (b, step_spec.clone())],
                    rhs,
                    constraints: cs,
                    trace,
                },
                Strategy::Telescoped,
            )
        }
    };
    Ok(Derivation {
        input: spec.clone(),
        shift,
        strategy,
        family,
        recurrence,
        normalized,
        sum,
        identity,
    })
}

/// Moves base-case hypotheses recorded in the trace into the constraint list.
fn add_base_constraints(cs: &mut Vec<Constraint>, trace: &mut ProofTrace) {
    for step in trace.steps.iter().filter(|s| s.rule == "base-case") {
        for c in step.consumed.iter().filter_map(|s| Constraint::parse(s)) {
            push_unique(cs, c);
        }
    }
}

/// Terminating case: `Σ_k F(n,k)` is constant and equals `F(0,0) = 1`.
fn derive_terminating(spec: &SeriesSpec, m: Var) -> Result<Derivation, PipelineError> {
    let mut trace = ProofTrace::default();
    let family_spec = spec.substitute(m, &LinArg::n());
    let family = term_from_series(&family_spec).map_err(|e| PipelineError::new("input", e.to_string()))?;
    let recurrence = zeilberger(&family, MAX_ORDER).map_err(|e| PipelineError::new("zeilberger", e.to_string()))?;
    trace.push(
        "zeilberger",
        format!(
            "order {}: coefficients [{}], certificate {}",
            recurrence.order(),
            recurrence.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
            recurrence.certificate
        ),
        &[],
    );
    let normalized = normalize_to_telescoping(&family, &recurrence)?;
    trace.push(
        "normalize",
        format!("lambda(n) = {}, G = ({}) F", normalized.prefactor, normalized.certificate),
        &[],
    );
    let r0 = normalized
        .certificate
        .substitute_rational(Var::K, &Q::zero())
        .ok_or_else(|| PipelineError::new("boundary", "certificate has a pole at k = 0"))?;
    if !r0.is_zero() {
        return Err(PipelineError::new("boundary", "G(n,0) does not vanish"));
    }
    trace.push(
        "boundary",
        "G(n,0) = 0; G(n,k) = 0 for k > n + 1 since (-n)_k vanishes",
        &[],
    );
    trace.push("constancy", "S(n) = S(0) = 1 for all n >= 0", &[]);
    let lambda0 = normalized.prefactor.at_n(0);
    let closed = lambda0
        .div(&normalized.prefactor)
        .n_to_param(m)
        .ok_or_else(|| PipelineError::new("closed form", "geometric factor in the prefactor"))?
        .simplify();
    for j in 0..=5i64 {
        let sj = spec.substitute(m, &LinArg::int(j));
        let value = closed.substitute_param(m, &LinArg::int(j));
        if !terminating_sum_equals(&sj, &value) {
            return Err(PipelineError::new("closed form", format!("exact check fails at m = {j}")));
        }
    }
    trace.push("exact-check", "closed form equals the finite sum for m = 0..5", &[]);
    let mut constraints = convergence_constraints(spec).map_err(at_stage("input"))?;
    push_unique(&mut constraints, Constraint::NonNegativeInteger(LinArg::param(m)));
    let sum = SumDecomposition {
        boundary: BoundaryLimits {
            value_at_0: GammaQuotient::zero(),
            limit_at_inf: Limit::Zero(asymptotics::Decision::Always),
        },
        step: GammaQuotient::zero(),
        step_series: None,
    };
    Ok(Derivation {
        input: spec.clone(),
        shift: m,
        strategy: Strategy::Terminating,
        family,
        recurrence,
        normalized,
        sum,
        identity: IdentityStatement {
            lhs: vec![(GammaQuotient::one(), spec.clone())],
            rhs: closed,
            constraints,
            trace,
        },
    })
}

fn rising_poly(a: &MultiPoly, j: i64) -> MultiPoly {
    (0..j).fold(MultiPoly::one(), |acc, i| &acc * &(a + &MultiPoly::int(i)))
}

/// `g` as `num/den` when every Gamma argument pairs with another at an integer gap.
fn gap_value(g: &GammaQuotient) -> Option<(MultiPoly, MultiPoly)> {
    if !g.reflections().is_empty() || !g.power().is_one() {
        return None;
    }
    let mut num = g.prefactor().num().clone();
    let mut den = g.prefactor().den().clone();
    let mut denom: Vec<LinArg> = g.denom().to_vec();
    for x in g.numer() {
        let (i, d) = denom.iter().enumerate().find_map(|(i, y)| x.int_difference(y).map(|d| (i, d)))?;
        let y = denom.remove(i);
        // Γ(y + d) / Γ(y)
        if d >= 0 {
            num = &num * &rising_poly(&y.to_poly(), d);
        } else {
            den = &den * &rising_poly(&x.to_poly(), -d);
        }
    }
    denom.is_empty().then_some((num, den))
}

/// Exact `Σ_k t(k) = value` for a terminating series, with denominators cleared.
///
/// Avoids rational-function gcds: both sides are multiplied by
/// `Π_l (l)_M · M!` and compared as polynomials.
pub fn terminating_sum_equals(spec: &SeriesSpec, value: &GammaQuotient) -> bool {
    let Some(big_m) = spec.termination() else {
        return false;
    };
    let big_m = big_m as i64;
    let Some((vn, vd)) = gap_value(value) else {
        return false;
    };
    let lower: Vec<MultiPoly> = spec.lower.iter().map(|l| l.to_poly()).collect();
    let upper: Vec<MultiPoly> = spec.upper.iter().map(|u| u.to_poly()).collect();
    let mut clear = MultiPoly::int(1);
    for l in &lower {
        clear = &clear * &rising_poly(l, big_m);
    }
    let fact = |j: i64| (1..=j).fold(num_bigint::BigInt::one(), |a, i| a * i);
    let mut total = MultiPoly::zero();
    for k in 0..=big_m {
        let mut t = MultiPoly::constant(Q::new(fact(big_m), fact(k)));
        for u in &upper {
            t = &t * &rising_poly(u, k);
        }
        for l in &lower {
            t = &t * &rising_poly(&(l + &MultiPoly::int(k)), big_m - k);
        }
        total = &total + &t;
    }
    let clear = &clear * &MultiPoly::constant(Q::from_integer(fact(big_m)));
    &total * &vd == &vn * &clear
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_gamma_quotient, parse_series};

    fn gq(s: &str) -> GammaQuotient {
        parse_gamma_quotient(s).unwrap()
    }

    #[test]
    fn trivial_recurrence_has_unit_prefactor() {
        let t = term_from_series(&parse_series("pFq([a],[],1/2)").unwrap()).unwrap();
        let rec = Recurrence {
            coeffs: vec![-RatFunc::one(), RatFunc::one()],
            certificate: RatFunc::zero(),
        };
        let norm = normalize_to_telescoping(&t, &rec).unwrap();
        assert!(norm.prefactor.is_one());
        assert_eq!(norm.term, t);
    }

    #[test]
    fn nonterminating_saalschutzian_sum() {
        let spec = parse_series("pFq([a,b,c],[e,a+b+c-e+1],1)").unwrap();
        let d = derive_identity(&spec, Var::p("c")).unwrap();
        assert_eq!(d.strategy, Strategy::Telescoped);
        let lambda = gq("Gamma(a+c-e+1+n)*Gamma(b+c-e+1+n)/(Gamma(c-e+1+n)*Gamma(a+b+c-e+1+n))");
        assert!(d.normalized.prefactor.equivalent(&lambda));
        let id = &d.identity;
        assert_eq!(id.lhs.len(), 2);
        assert!(id.lhs[0].0.equivalent(&gq("Gamma(a+c-e+1)*Gamma(b+c-e+1)/(Gamma(c-e+1)*Gamma(a+b+c-e+1))")));
        assert_eq!(id.lhs[1].1, parse_series("pFq([1,a+c-e+1,b+c-e+1],[c+1,c-e+2],1)").unwrap());
        assert!(id.lhs[1]
            .0
            .equivalent(&gq("Gamma(e)*Gamma(a+c-e+1)*Gamma(b+c-e+1)/(Gamma(a)*Gamma(b)*Gamma(c+1)*Gamma(c-e+2))")));
        assert!(id.rhs.equivalent(&gq("Gamma(e)*Gamma(e-a-b)/(Gamma(e-a)*Gamma(e-b))")));
        assert!(id.constraints.contains(&Constraint::parse("Re(e-a-b) > 0").unwrap()));
    }

    #[test]
    fn gauss_by_constancy() {
        let spec = parse_series("pFq([a,b],[c],1)").unwrap();
        let d = derive_identity(&spec, Var::p("c")).unwrap();
        assert_eq!(d.strategy, Strategy::Constancy);
        assert!(d.identity.trace.has_rule("constancy"));
        assert!(d.identity.trace.steps.iter().any(|s| s.detail.contains("delta_(k,0)")));
        assert!(d.identity.rhs.equivalent(&gq("Gamma(c)*Gamma(c-a-b)/(Gamma(c-a)*Gamma(c-b))")));
    }

    #[test]
    fn terminating_saalschutz() {
        let spec = parse_series("pFq([-m,b,c],[e,-m+b+c-e+1],1)").unwrap();
        let d = derive_identity(&spec, Var::p("m")).unwrap();
        assert_eq!(d.strategy, Strategy::Terminating);
        let expected = gq("Gamma(e-b+m)*Gamma(e-c+m)*Gamma(e)*Gamma(e-b-c)/(Gamma(e-b)*Gamma(e-c)*Gamma(e+m)*Gamma(e-b-c+m))");
        assert!(d.identity.rhs.equivalent(&expected), "{}", d.identity.rhs);
    }
}
