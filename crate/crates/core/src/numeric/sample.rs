//! Seeded rejection sampling of parameter points that respect an identity's
//! constraints, convergence conditions and pole distances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::ComplexQ;
use super::series::Point;
use super::NumericError;
use crate::asymptotics::Constraint;
use crate::linarg::LinArg;
use crate::pipeline::IdentityStatement;
use crate::symbol::Var;
use crate::Q;

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    /// Required slack in each `Re(L) > 0` condition.
    pub margin: f64,
    /// Minimum distance of Gamma arguments and lower parameters from the poles.
    pub pole_distance: f64,
    /// Range for parameters constrained to the nonnegative integers.
    pub max_integer: u32,
    pub max_attempts: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            re_range: (-2.0, 4.0),
            im_range: (-0.5, 0.5),
            margin: 0.15,
            pole_distance: 0.1,
            max_integer: 5,
            max_attempts: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint {
    pub point: Point,
    /// Smallest slack over all checked conditions.
    pub margin: f64,
}

/// Every parameter the identity mentions, sorted.
pub fn identity_params(id: &IdentityStatement) -> Vec<Var> {
    let mut vs: Vec<Var> = Vec::new();
    for (c, s) in &id.lhs {
        vs.extend(c.params());
        vs.extend(s.params());
    }
    vs.extend(id.rhs.params());
    for c in &id.constraints {
        vs.extend(c.form().variables().into_iter().filter(|v| v.is_param()));
    }
    vs.sort();
    vs.dedup();
    vs
}

fn integer_params(id: &IdentityStatement) -> Vec<Var> {
    id.constraints
        .iter()
        .filter_map(|c| match c {
            Constraint::NonNegativeInteger(l) => {
                let ps: Vec<_> = l.params().iter().collect();
                match ps.as_slice() {
                    [(v, c)] if **c == Q::from_integer(1.into()) && l.constant_part() == &Q::from_integer(0.into()) => Some(**v),
                    _ => None,
                }
            }
            _ => None,
        })
        .collect()
}

fn round_q(x: f64) -> Q {
    Q::new(((x * 1000.0).round() as i64).into(), 1000.into())
}

/// Slack of `point` against every condition, or `None` when one fails.
fn slack(id: &IdentityStatement, point: &Point, cfg: &SamplerConfig) -> Option<f64> {
    let mut worst = f64::INFINITY;
    let eval = |l: &LinArg| point.eval(l).ok();
    let pole = |l: &LinArg, worst: &mut f64| -> bool {
        match eval(l) {
            Some(v) => {
                let d = v.pole_distance();
                *worst = worst.min(d);
                d >= cfg.pole_distance
            }
            None => false,
        }
    };
    for c in &id.constraints {
        let v = eval(c.form())?;
        match c {
            Constraint::RePositive(_) => {
                let r = v.re_f64();
                if r < cfg.margin {
                    return None;
                }
                worst = worst.min(r);
            }
            Constraint::NotNonPositiveInteger(l) => {
                if !pole(l, &mut worst) {
                    return None;
                }
            }
            Constraint::NonNegativeInteger(_) => {
                if !(v.im == Q::from_integer(0.into()) && v.re.is_integer() && v.re >= Q::from_integer(0.into())) {
                    return None;
                }
            }
        }
    }
    let gammas = id.lhs.iter().map(|(c, _)| c).chain(std::iter::once(&id.rhs));
    for g in gammas {
        for a in g.gamma_args() {
            if !pole(a, &mut worst) {
                return None;
            }
        }
        for z in g.reflections() {
            let v = eval(z)?;
            let d = (v.re_f64() - v.re_f64().round()).hypot(v.im_f64());
            if d < cfg.pole_distance {
                return None;
            }
            worst = worst.min(d);
        }
    }
    for (_, s) in &id.lhs {
        let upper: Vec<ComplexQ> = s.upper.iter().map(eval).collect::<Option<_>>()?;
        let terminates = upper.iter().any(|u| u.is_nonpositive_integer());
        for l in &s.lower {
            if !terminates && !pole(l, &mut worst) {
                return None;
            }
        }
        if !terminates {
            let ex = eval(&s.parametric_excess())?.re_f64();
            if ex < cfg.margin {
                return None;
            }
            worst = worst.min(ex);
        }
    }
    Some(worst)
}

/// `count` points drawn from a ChaCha stream seeded by `seed`.
pub fn sample_points(id: &IdentityStatement, count: usize, seed: u64, cfg: &SamplerConfig) -> Result<Vec<SamplePoint>, NumericError> {
    let params = identity_params(id);
    let ints = integer_params(id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        if attempts >= cfg.max_attempts {
            return Err(NumericError::Sampler(format!(
                "{} of {count} points after {attempts} attempts",
                out.len()
            )));
        }
        attempts += 1;
        let mut point = Point::new();
        for v in &params {
            let value = if ints.contains(v) {
                ComplexQ::real(Q::from_integer(rng.gen_range(0..=cfg.max_integer).into()))
            } else {
                let re = rng.gen_range(cfg.re_range.0..cfg.re_range.1);
                let im = rng.gen_range(cfg.im_range.0..=cfg.im_range.1);
                ComplexQ { re: round_q(re), im: round_q(im) }
            };
            point.set(*v, value);
        }
        if let Some(margin) = slack(id, &point, cfg) {
            out.push(SamplePoint { point, margin });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::GammaQuotient;
    use crate::parse::{parse_gamma_quotient, parse_series};
    use crate::pipeline::ProofTrace;

    fn gauss() -> IdentityStatement {
        IdentityStatement {
            lhs: vec![(GammaQuotient::one(), parse_series("pFq([a,b],[c],1)").unwrap())],
            rhs: parse_gamma_quotient("Gamma(c)*Gamma(c-a-b)/(Gamma(c-a)*Gamma(c-b))").unwrap(),
            constraints: vec![Constraint::parse("Re(c - a - b) > 0").unwrap()],
            trace: ProofTrace::default(),
        }
    }

    #[test]
    fn points_satisfy_constraints_and_are_reproducible() {
        let id = gauss();
        let cfg = SamplerConfig::default();
        let a = sample_points(&id, 10, 7, &cfg).unwrap();
        let b = sample_points(&id, 10, 7, &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.point, y.point);
            assert!(x.margin >= 0.1);
            let l = Constraint::parse("Re(c - a - b) > 0").unwrap();
            assert!(x.point.eval(l.form()).unwrap().re_f64() >= 0.15);
        }
        let c = sample_points(&id, 10, 8, &cfg).unwrap();
        assert_ne!(a[0].point, c[0].point);
    }

    #[test]
    fn impossible_constraints_exhaust() {
        let mut id = gauss();
        id.constraints.push(Constraint::parse("Re(a + b - c) > 0").unwrap());
        let cfg = SamplerConfig { max_attempts: 500, ..Default::default() };
        assert!(matches!(sample_points(&id, 3, 1, &cfg), Err(NumericError::Sampler(_))));
    }
}
