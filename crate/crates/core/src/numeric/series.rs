//! `pFq` at argument 1 with an asymptotic tail.
//!
//! For `t(k+1)/t(k) = Π(k+u_i)/Π(k+l_j)` (the `l_j` include the 1 from `k!`)
//! the tail `T(K) = Σ_{k≥K} t(k)` satisfies `T(K) = t(K) φ(K)` with
//! `φ(K) − ρ(K) φ(K+1) = 1`. Writing `φ(K) = K Σ d_j K^−j` and expanding
//! `ρ` in `x = 1/K` gives a triangular recursion for the `d_j`; the partial sum
//! to `K` plus this tail is checked against the same computation at `2K`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::complex::{BigComplex, ComplexQ};
use super::NumericError;
use crate::hyperterm::SeriesSpec;
use crate::linarg::LinArg;
use crate::symbol::Var;
use crate::Q;

/// Exact parameter values; `n` and `k` may be bound like any parameter.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Point {
    pub values: BTreeMap<Var, ComplexQ>,
}

impl Point {
    pub fn new() -> Self {
        Point::default()
    }

    pub fn with(mut self, v: Var, value: ComplexQ) -> Self {
        self.values.insert(v, value);
        self
    }

    pub fn set(&mut self, v: Var, value: ComplexQ) {
        self.values.insert(v, value);
    }

    /// Real-valued point from `(name, value)` pairs, with values given as decimals.
    pub fn from_reals(pairs: &[(&str, f64)]) -> Self {
        let mut p = Point::new();
        for (name, x) in pairs {
            p.set(Var::p(name), ComplexQ::real(q_from_f64(*x)));
        }
        p
    }

    pub fn eval(&self, l: &LinArg) -> Result<ComplexQ, NumericError> {
        let mut re = l.constant_part().clone();
        let mut im = Q::zero();
        let mut add = |v: Var, c: &Q| -> Result<(), NumericError> {
            let x = self.values.get(&v).ok_or_else(|| NumericError::MissingParameter(v.name()))?;
            re += c * &x.re;
            im += c * &x.im;
            Ok(())
        };
        for (v, c) in l.params() {
            add(*v, c)?;
        }
        if l.n_coeff() != 0 {
            add(Var::N, &Q::from_integer(l.n_coeff().into()))?;
        }
        if l.k_coeff() != 0 {
            add(Var::K, &Q::from_integer(l.k_coeff().into()))?;
        }
        Ok(ComplexQ { re, im })
    }

    pub fn describe(&self) -> BTreeMap<String, String> {
        self.values.iter().map(|(v, x)| (v.name(), x.to_string())).collect()
    }
}

/// Shortest decimal `x` as an exact rational.
pub fn q_from_f64(x: f64) -> Q {
    let s = format!("{x}");
    let (int, frac) = s.split_once('.').unwrap_or((&s, ""));
    let digits: num_bigint::BigInt = format!("{int}{frac}").parse().expect("decimal");
    Q::new(digits, num_bigint::BigInt::from(10).pow(frac.len() as u32))
}

#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: BigComplex,
    /// Number of directly summed terms.
    pub truncation: usize,
    /// Estimated error of the tail expansion at the truncation index.
    pub tail_estimate: f64,
    /// `|value(2K) − value(K)|`; zero for terminating and fast series.
    pub doubling_change: f64,
}

fn check_lower(lower: &[ComplexQ], upto: Option<u64>) -> Result<(), NumericError> {
    for l in lower {
        if l.is_nonpositive_integer() {
            let m = (-&l.re).to_integer();
            let hit = match upto {
                Some(n) => m <= n.into(),
                None => true,
            };
            if hit {
                return Err(NumericError::Pole(format!("lower parameter {l}")));
            }
        }
    }
    Ok(())
}

/// Partial sums of `Σ t(k)` from `k = 0`, with `t(0) = 1`.
struct Terms<'a> {
    upper: &'a [BigComplex],
    lower: &'a [BigComplex],
    z: BigComplex,
    p: usize,
    k: usize,
    term: BigComplex,
    sum: BigComplex,
}

impl<'a> Terms<'a> {
    fn new(upper: &'a [BigComplex], lower: &'a [BigComplex], z: BigComplex, p: usize) -> Self {
        Terms {
            upper,
            lower,
            z,
            p,
            k: 0,
            term: BigComplex::one(p),
            sum: BigComplex::zero(p),
        }
    }

    /// Adds `t(k)` and advances to `t(k+1)`.
    fn step(&mut self) {
        let p = self.p;
        self.sum = self.sum.add(&self.term, p);
        let k = self.k as i64;
        let mut num = self.z.clone();
        for u in self.upper {
            num = num.mul(&u.add_i64(k, p), p);
        }
        let mut den = BigComplex::from_i64(k + 1, p);
        for l in self.lower {
            den = den.mul(&l.add_i64(k, p), p);
        }
        self.term = self.term.mul(&num, p).div(&den, p);
        self.k += 1;
    }
}

/// Coefficients `d_j` of `φ(K) = K Σ d_j K^−j`, grown on demand.
struct TailExpansion {
    p: usize,
    rho: Vec<BigComplex>,
    s: BigComplex,
    d: Vec<BigComplex>,
    ups: Vec<BigComplex>,
    lows: Vec<BigComplex>,
}

impl TailExpansion {
    fn new(ups: &[BigComplex], lows_with_one: &[BigComplex], p: usize) -> Self {
        let mut s = BigComplex::zero(p);
        for l in lows_with_one {
            s = s.add(l, p);
        }
        for u in ups {
            s = s.sub(u, p);
        }
        TailExpansion {
            p,
            rho: vec![BigComplex::one(p)],
            s,
            d: Vec::new(),
            ups: ups.to_vec(),
            lows: lows_with_one.to_vec(),
        }
    }

    /// Extends the power series of `ρ(x) = Π(1+u x)/Π(1+l x)` to order `m`.
    fn rho_to(&mut self, m: usize) {
        if self.rho.len() > m {
            return;
        }
        let p = self.p;
        let order = (2 * m).max(8);
        let mut series = vec![BigComplex::zero(p); order + 1];
        series[0] = BigComplex::one(p);
        for u in &self.ups {
            for i in (1..=order).rev() {
                series[i] = series[i].add(&series[i - 1].mul(u, p), p);
            }
        }
        for l in &self.lows {
            // Multiply by 1/(1 + l x): c_i ← c_i − l c_{i−1}, in increasing i.
            for i in 1..=order {
                let prev = series[i - 1].mul(l, p);
                series[i] = series[i].sub(&prev, p);
            }
        }
        self.rho = series;
    }

    /// `d_{m}` for `m` up to `j`.
    fn coeff(&mut self, j: usize) -> &BigComplex {
        while self.d.len() <= j {
            let m = self.d.len() + 1;
            self.rho_to(m + 1);
            let p = self.p;
            let mut rhs = if m == 1 { BigComplex::one(p) } else { BigComplex::zero(p) };
            for (jj, dj) in self.d.iter().enumerate().take(m - 1) {
                // S_{jj,m} = Σ_i ρ_{m−jj−i} C(1−jj, i)
                let mut s = BigComplex::zero(p);
                let a = 1 - jj as i64;
                let mut binom = BigComplex::one(p);
                for i in 0..=(m - jj) {
                    if i > 0 {
                        binom = binom.mul(&BigComplex::from_i64(a - i as i64 + 1, p), p).div_i64(i as i64, p);
                    }
                    if binom.is_zero() {
                        break;
                    }
                    s = s.add(&self.rho[m - jj - i].mul(&binom, p), p);
                }
                rhs = rhs.add(&dj.mul(&s, p), p);
            }
            let denom = self.s.add_i64(m as i64 - 2, p);
            self.d.push(rhs.div(&denom, p));
        }
        &self.d[j]
    }

    /// `(T(K)/t(K), error estimate relative to t(K))`.
    fn phi(&mut self, k: usize, eps: f64) -> (BigComplex, f64) {
        let p = self.p;
        let kk = BigComplex::from_i64(k as i64, p);
        let kinv = kk.recip(p);
        let mut acc = BigComplex::zero(p);
        let mut kpow = kk.clone();
        let mut prev = f64::INFINITY;
        let max_terms = (p / 2).max(40);
        for j in 0..max_terms {
            let term = self.coeff(j).mul(&kpow, p);
            let mag = term.abs_f64();
            if mag > prev && j > 2 {
                return (acc, prev);
            }
            acc = acc.add(&term, p);
            if mag <= eps * acc.abs_f64() {
                return (acc, mag);
            }
            prev = mag;
            kpow = kpow.mul(&kinv, p);
        }
        (acc, prev)
    }
}

/// `pFq(spec)` at `point`, to about `p` bits.
pub fn pfq1_eval(spec: &SeriesSpec, point: &Point, p: usize) -> Result<SeriesValue, NumericError> {
    let upper_q = spec.upper.iter().map(|u| point.eval(u)).collect::<Result<Vec<_>, _>>()?;
    let lower_q = spec.lower.iter().map(|l| point.eval(l)).collect::<Result<Vec<_>, _>>()?;
    let upper: Vec<BigComplex> = upper_q.iter().map(|x| x.to_big(p)).collect();
    let lower: Vec<BigComplex> = lower_q.iter().map(|x| x.to_big(p)).collect();
    let z = BigComplex::from_q(&spec.argument, &Q::zero(), p);
    let eps = 2f64.powi(-(p as i32));

    let termination = upper_q
        .iter()
        .filter(|u| u.is_nonpositive_integer())
        .map(|u| (-&u.re).to_integer())
        .min();
    if let Some(m) = termination {
        let m: u64 = m.try_into().map_err(|_| NumericError::Unsupported("termination index".into()))?;
        check_lower(&lower_q, Some(m))?;
        let mut t = Terms::new(&upper, &lower, z, p);
        for _ in 0..=m {
            t.step();
        }
        return Ok(SeriesValue {
            value: t.sum,
            truncation: m as usize + 1,
            tail_estimate: 0.0,
            doubling_change: 0.0,
        });
    }
    check_lower(&lower_q, None)?;

    let max_param = upper_q
        .iter()
        .chain(&lower_q)
        .map(|x| x.re_f64().hypot(x.im_f64()))
        .fold(0.0, f64::max);
    let unit = spec.argument.is_one();
    if unit && spec.upper.len() == spec.lower.len() + 1 {
        let excess = {
            let mut s = Q::zero();
            for l in &lower_q {
                s += &l.re;
            }
            for u in &upper_q {
                s -= &u.re;
            }
            s
        };
        if !excess.is_positive() {
            return Err(NumericError::Divergent(format!("Re(parametric excess) = {excess}")));
        }
        let k = ((20.0 * max_param).ceil() as usize).max(200);
        let mut lows = lower.clone();
        lows.push(BigComplex::one(p));
        let mut tail = TailExpansion::new(&upper, &lows, p);
        let mut terms = Terms::new(&upper, &lower, z, p);
        let mut at = |k: usize, terms: &mut Terms| -> (BigComplex, f64) {
            while terms.k < k {
                terms.step();
            }
            let (phi, err) = tail.phi(k, eps);
            let t = terms.term.clone();
            let est = terms.sum.add(&t.mul(&phi, p), p);
            (est, err * t.abs_f64())
        };
        let (v1, err1) = at(k, &mut terms);
        let (v2, _) = at(2 * k, &mut terms);
        let change = v2.sub(&v1, p).abs_f64();
        return Ok(SeriesValue {
            value: v2,
            truncation: 2 * k,
            tail_estimate: err1,
            doubling_change: change,
        });
    }

    let geometric = spec.argument.abs() < Q::one();
    if !(spec.upper.len() <= spec.lower.len() || (spec.upper.len() == spec.lower.len() + 1 && geometric)) {
        return Err(NumericError::Divergent(spec.to_string()));
    }
    let mut terms = Terms::new(&upper, &lower, z, p);
    let floor = (2.0 * max_param) as usize + 10;
    let mut small = 0;
    while terms.k < 1_000_000 {
        terms.step();
        if terms.k > floor && terms.term.abs_f64() <= eps * terms.sum.abs_f64().max(1e-300) {
            small += 1;
            if small >= 3 {
                return Ok(SeriesValue {
                    value: terms.sum,
                    truncation: terms.k,
                    tail_estimate: terms.term.abs_f64(),
                    doubling_change: 0.0,
                });
            }
        } else {
            small = 0;
        }
    }
    Err(NumericError::Divergent(format!("{spec}: no convergence in 10^6 terms")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::complex::bits_for_digits;
    use crate::numeric::special::gamma_eval;
    use crate::parse::parse_series;

    fn p() -> usize {
        bits_for_digits(45)
    }

    fn g(x: f64) -> BigComplex {
        gamma_eval(&ComplexQ::real(q_from_f64(x)).to_big(p()), p()).unwrap()
    }

    fn rel(a: &BigComplex, b: &BigComplex) -> f64 {
        a.sub(b, p()).abs_f64() / b.abs_f64().max(1.0)
    }

    #[test]
    fn gauss_value_against_gamma_oracle() {
        let spec = parse_series("pFq([a,b],[c],1)").unwrap();
        let pt = Point::new()
            .with(Var::p("a"), ComplexQ::real(Q::new(1.into(), 2.into())))
            .with(Var::p("b"), ComplexQ::real(Q::new(1.into(), 3.into())))
            .with(Var::p("c"), ComplexQ::real(Q::from_integer(3.into())));
        let v = pfq1_eval(&spec, &pt, p()).unwrap();
        let c_ab = ComplexQ::real(Q::new(13.into(), 6.into())).to_big(p());
        let rhs = g(3.0)
            .mul(&gamma_eval(&c_ab, p()).unwrap(), p())
            .div(&g(2.5).mul(&gamma_eval(&ComplexQ::real(Q::new(8.into(), 3.into())).to_big(p()), p()).unwrap(), p()), p());
        assert!(rel(&v.value, &rhs) < 1e-40, "{}", rel(&v.value, &rhs));
        assert!(v.doubling_change <= v.tail_estimate.max(1e-60) * 10.0 + 1e-44);
    }

    #[test]
    fn slow_series_still_converges() {
        // Excess 0.2: terms decay like k^-1.2.
        let spec = parse_series("pFq([a,b],[c],1)").unwrap();
        let pt = Point::from_reals(&[("a", 0.5), ("b", 0.7), ("c", 1.4)]);
        let v = pfq1_eval(&spec, &pt, p()).unwrap();
        let rhs = g(1.4).mul(&g(0.2), p()).div(&g(0.9).mul(&g(0.7), p()), p());
        assert!(rel(&v.value, &rhs) < 1e-38, "{}", rel(&v.value, &rhs));
    }

    #[test]
    fn terminating_chu_vandermonde() {
        let spec = parse_series("pFq([-3,b],[c],1)").unwrap();
        let pt = Point::from_reals(&[("b", 0.25), ("c", 2.0)]);
        let v = pfq1_eval(&spec, &pt, p()).unwrap();
        // (c-b)_3/(c)_3 = (7/4)(11/4)(15/4)/(2*3*4)
        let exact = Q::new((7 * 11 * 15).into(), (64 * 24).into());
        assert!(rel(&v.value, &ComplexQ::real(exact).to_big(p())) < 1e-44);
        assert_eq!(v.truncation, 4);
    }

    #[test]
    fn saalschutzian_family_member() {
        let spec = parse_series("pFq([a,b,c],[e,a+b+c-e+1],1)").unwrap();
        let pt = Point::from_reals(&[("a", 0.3), ("b", 0.4), ("c", 0.7), ("e", 2.0)]);
        let v = pfq1_eval(&spec, &pt, p()).unwrap();
        assert!(v.value.is_finite());
        assert!(v.doubling_change < 1e-40);
    }

    #[test]
    fn divergent_series_is_refused() {
        let spec = parse_series("pFq([a,b],[c],1)").unwrap();
        let pt = Point::from_reals(&[("a", 1.0), ("b", 1.0), ("c", 1.5)]);
        assert!(matches!(pfq1_eval(&spec, &pt, p()), Err(NumericError::Divergent(_))));
    }
}
