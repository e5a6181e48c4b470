//! Gosper's algorithm, Zeilberger's creative telescoping and WZ certificates.
//!
//! All three reduce to one key equation. With `r = a/b · c(k+1)/c(k)` in
//! Gosper–Petkovšek form and a polynomial multiplier `p(k)`, a polynomial
//! solution `x` of
//!
//! ```text
//! a(k) x(k+1) - b(k-1) x(k) = c(k) p(k)
//! ```
//!
//! gives the antidifference `b(k-1) x(k) / (c(k) p(k))` times the term.

use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::hyperterm::HyperTerm;
use crate::linsolve::{nullspace, solve_linear};
use crate::poly::{dispersion, lcm, poly_gcd, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TelescopeError {
    #[error("no recurrence of order at most {0}")]
    NoRecurrence(usize),
    #[error("difference F(n+1,k) - F(n,k) is not Gosper-summable in k")]
    NotWz,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GosperResult {
    pub summable: bool,
    /// `R` with antidifference `R(k) t(k)`; present when summable.
    pub certificate: Option<RatFunc>,
}

/// `Σ_j c_j(n) t(n+j,k) = G(n,k+1) - G(n,k)` with `G = R t`.
#[derive(Clone, PartialEq, Eq)]
pub struct Recurrence {
    pub coeffs: Vec<RatFunc>,
    pub certificate: RatFunc,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl fmt::Debug for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Recurrence")
            .field("coeffs", &self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .field("certificate", &self.certificate.to_string())
            .finish()
    }
}

/// `r = a/b · c(k+1)/c(k)` with `gcd(a(k), b(k+h)) = 1` for every `h ≥ 0`.
pub(crate) struct GpForm {
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub c: MultiPoly,
}

pub(crate) fn gp_form(r: &RatFunc) -> GpForm {
    let k = Var::K;
    let mut a = r.num().clone();
    let mut b = r.den().clone();
    let mut c = MultiPoly::one();
    for h in dispersion(&a, &b, k) {
        let h = h as i64;
        let g = poly_gcd(&a, &b.shift(k, h));
        if g.degree_in(k) == 0 {
            continue;
        }
        a = a.try_div(&g).expect("gcd divides");
        b = b.try_div(&g.shift(k, -h)).expect("shifted gcd divides");
        for i in 1..=h {
            c = &c * &g.shift(k, -i);
        }
    }
    GpForm { a, b, c }
}

fn coeff_k(p: &MultiPoly, d: u32) -> MultiPoly {
    p.coeffs_in(Var::K).into_iter().nth(d as usize).unwrap_or_else(MultiPoly::zero)
}

/// Upper bound on `deg x` for the key equation, or `None` when no polynomial solution exists.
fn degree_bound(a: &MultiPoly, b1: &MultiPoly, deg_rhs: i64) -> Option<u32> {
    let k = Var::K;
    let (da, db) = (a.degree_in(k) as i64, b1.degree_in(k) as i64);
    let la = a.lead_coeff_in(k);
    let lb = b1.lead_coeff_in(k);
    let d = if da != db || la != lb {
        deg_rhs - da.max(db)
    } else {
        let l = da;
        let mut d = deg_rhs - l + 1;
        if l > 0 {
            let big_a = coeff_k(a, (l - 1) as u32);
            let big_b = coeff_k(b1, (l - 1) as u32);
            let q = RatFunc::new(&big_b - &big_a, la);
            if let Some(q) = q.as_constant() {
                if q.is_integer() && !q.is_negative() {
                    d = d.max(q.to_integer().to_i64().unwrap_or(0));
                }
            }
        }
        d
    };
    (d >= 0).then_some(d as u32)
}

struct KeySolution {
    /// Multipliers of `P_j`.
    coeffs: Vec<RatFunc>,
    /// `b(k-1) x(k) / c(k)`.
    r_pre: RatFunc,
}

/// Solves `a x(k+1) - b(k-1) x(k) = c Σ_j λ_j P_j` for a polynomial `x` and, unless `fixed`
/// is given, for a nonzero `λ`.
fn solve_key(gp: &GpForm, ps: &[MultiPoly], fixed: Option<&[RatFunc]>) -> Option<KeySolution> {
    let k = Var::K;
    let b1 = gp.b.shift(k, -1);
    let deg_p = ps.iter().map(|p| p.degree_in(k)).max().unwrap_or(0) as i64;
    let deg_rhs = gp.c.degree_in(k) as i64 + deg_p;
    let bound = degree_bound(&gp.a, &b1, deg_rhs);
    let nx = bound.map_or(0, |d| d as usize + 1);
    let kp1 = &MultiPoly::var(k) + &MultiPoly::one();
    let kv = MultiPoly::var(k);

    let mut columns: Vec<MultiPoly> = Vec::new();
    for i in 0..nx {
        let i = i as u32;
        columns.push(&(&gp.a * &kp1.pow(i)) - &(&b1 * &kv.pow(i)));
    }
    let cps: Vec<MultiPoly> = ps.iter().map(|p| &gp.c * p).collect();
    let rows_n = columns
        .iter()
        .chain(&cps)
        .map(|p| p.degree_in(k) as usize + 1)
        .max()
        .unwrap_or(1);
    let coeff_rows = |p: &MultiPoly| -> Vec<RatFunc> {
        let mut cs: Vec<RatFunc> = p.coeffs_in(k).into_iter().map(RatFunc::from_poly).collect();
        cs.resize(rows_n, RatFunc::zero());
        cs
    };

    let (xs, lambdas) = match fixed {
        Some(fixed) => {
            let mut rhs = MultiPoly::zero();
            for (cp, f) in cps.iter().zip(fixed) {
                // Fixed multipliers are rational constants here.
                let fc = f.as_constant().expect("fixed multipliers are constants");
                rhs = &rhs + &cp.scale(&fc);
            }
            let cols: Vec<Vec<RatFunc>> = columns.iter().map(coeff_rows).collect();
            let m: Vec<Vec<RatFunc>> = (0..rows_n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            let b = coeff_rows(&rhs);
            let xs = if nx == 0 {
                if rhs.is_zero() {
                    Vec::new()
                } else {
                    return None;
                }
            } else {
                solve_linear(&m, &b)?
            };
            (xs, fixed.to_vec())
        }
        None => {
            let mut cols: Vec<Vec<RatFunc>> = columns.iter().map(coeff_rows).collect();
            cols.extend(cps.iter().map(|p| coeff_rows(&-p)));
            let m: Vec<Vec<RatFunc>> = (0..rows_n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            let basis = nullspace(&m);
            let v = basis.into_iter().find(|v| v[nx..].iter().any(|c| !c.is_zero()))?;
            (v[..nx].to_vec(), v[nx..].to_vec())
        }
    };

    let mut x = RatFunc::zero();
    for (i, xi) in xs.iter().enumerate() {
        if !xi.is_zero() {
            x = &x + &(xi * &RatFunc::from_poly(kv.pow(i as u32)));
        }
    }
    let r_pre = &(&RatFunc::from_poly(b1) * &x) / &RatFunc::from_poly(gp.c.clone());
    Some(KeySolution { coeffs: lambdas, r_pre })
}

/// Decides indefinite summability of a term with shift quotient `r` in `k`.
pub fn gosper(r: &RatFunc) -> GosperResult {
    assert!(!r.is_zero(), "zero shift quotient");
    let gp = gp_form(r);
    match solve_key(&gp, &[MultiPoly::one()], Some(&[RatFunc::one()])) {
        Some(sol) => GosperResult {
            summable: true,
            certificate: Some(sol.r_pre),
        },
        None => GosperResult {
            summable: false,
            certificate: None,
        },
    }
}

struct Parametrized {
    /// `t(n,k) / D(k)` has shift quotient `r_tilde`.
    r_tilde: RatFunc,
    d: MultiPoly,
    ps: Vec<MultiPoly>,
}

fn parametrize(t: &HyperTerm, order: usize) -> Parametrized {
    let k = Var::K;
    let rhos: Vec<RatFunc> = (0..=order as u32).map(|j| t.n_shift_ratio(j)).collect();
    let mut d = MultiPoly::one();
    for r in &rhos {
        d = lcm(&d, r.den());
    }
    let ps = rhos
        .iter()
        .map(|r| r.num() * &d.try_div(r.den()).expect("lcm is a multiple"))
        .collect();
    let rk = t.shift_quotient(k);
    let r_tilde = &rk * &RatFunc::new(d.clone(), d.shift(k, 1));
    Parametrized { r_tilde, d, ps }
}

/// Clears denominators and content from the coefficients, scaling the certificate alongside.
fn normalize(coeffs: Vec<RatFunc>, cert: RatFunc) -> (Vec<RatFunc>, RatFunc) {
    let mut l = MultiPoly::one();
    for c in &coeffs {
        l = lcm(&l, c.den());
    }
    let nums: Vec<MultiPoly> = coeffs
        .iter()
        .map(|c| c.num() * &l.try_div(c.den()).expect("lcm is a multiple"))
        .collect();
    let mut g = MultiPoly::zero();
    for p in &nums {
        g = poly_gcd(&g, p);
    }
    let mut nums: Vec<MultiPoly> = nums.iter().map(|p| p.try_div(&g).expect("gcd divides")).collect();
    // Joint rational content and sign of the top coefficient.
    let mut content = Q::zero();
    for p in &nums {
        if !p.is_zero() {
            let c = p.rational_content();
            content = if content.is_zero() { c } else { gcd_q(&content, &c) };
        }
    }
    let top = nums.iter().rev().find(|p| !p.is_zero()).expect("nonzero recurrence");
    if top.leading_coeff().is_negative() {
        content = -content;
    }
    nums = nums.iter().map(|p| p.scale(&content.recip())).collect();
    // Overall factor applied: l / (g · content).
    let factor = RatFunc::new(l, g.scale(&content));
    let cert = &cert * &factor;
    (nums.into_iter().map(RatFunc::from_poly).collect(), cert)
}

fn gcd_q(a: &Q, b: &Q) -> Q {
    use num_integer::Integer;
    Q::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Creative telescoping at a fixed order.
pub fn zeilberger_at(t: &HyperTerm, order: usize) -> Option<Recurrence> {
    let par = parametrize(t, order);
    let gp = gp_form(&par.r_tilde);
    let sol = solve_key(&gp, &par.ps, None)?;
    let cert = &sol.r_pre / &RatFunc::from_poly(par.d);
    let (coeffs, certificate) = normalize(sol.coeffs, cert);
    Some(Recurrence { coeffs, certificate })
}

/// Lowest-order recurrence up to `max_order` satisfied by `Σ_k t(n,k)`.
pub fn zeilberger(t: &HyperTerm, max_order: usize) -> Result<Recurrence, TelescopeError> {
    (1..=max_order)
        .find_map(|j| zeilberger_at(t, j))
        .ok_or(TelescopeError::NoRecurrence(max_order))
}

/// `R` with `F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k)`, `G = R F`.
pub fn wz_certificate(f: &HyperTerm) -> Result<RatFunc, TelescopeError> {
    let par = parametrize(f, 1);
    if par.ps[0] == par.ps[1] {
        return Ok(RatFunc::zero());
    }
    let gp = gp_form(&par.r_tilde);
    let sol = solve_key(&gp, &par.ps, Some(&[-RatFunc::one(), RatFunc::one()])).ok_or(TelescopeError::NotWz)?;
    Ok(&sol.r_pre / &RatFunc::from_poly(par.d))
}

/// Exact check of `Σ_j c_j ρ_j = R(k+1) r_k - R(k)`.
pub fn verify_certificate(t: &HyperTerm, rec: &Recurrence) -> bool {
    let mut lhs = RatFunc::zero();
    for (j, c) in rec.coeffs.iter().enumerate() {
        lhs = &lhs + &(c * &t.n_shift_ratio(j as u32));
    }
    let rk = t.shift_quotient(Var::K);
    let r = &rec.certificate;
    let rhs = &(&r.shift(Var::K, 1) * &rk) - r;
    (&lhs - &rhs).is_zero()
}

/// Exact check of the Gosper identity `R(k+1) r(k) - R(k) = 1`.
pub fn verify_gosper(r: &RatFunc, cert: &RatFunc) -> bool {
    (&(&cert.shift(Var::K, 1) * r) - cert).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperterm::{binomial_nk, Base, Index, Poch, Power};
    use crate::linarg::LinArg;
    use crate::poly::test_util::lin;

    fn p(name: &str) -> LinArg {
        LinArg::param(Var::p(name))
    }

    fn rf(s: &[(&str, i64)], c: i64) -> RatFunc {
        RatFunc::from_poly(lin(s, c))
    }

    #[test]
    fn constant_term() {
        let g = gosper(&RatFunc::one());
        assert_eq!(g.certificate, Some(RatFunc::var(Var::K)));
    }

    #[test]
    fn k_times_factorial() {
        let k1 = rf(&[("k", 1)], 1);
        let r = &(&k1 * &k1) / &RatFunc::var(Var::K);
        let g = gosper(&r);
        assert_eq!(g.certificate, Some(RatFunc::var(Var::K).inv()));
    }

    #[test]
    fn harmonic_not_summable() {
        let r = &rf(&[("k", 1)], 1) / &rf(&[("k", 1)], 2);
        assert!(!gosper(&r).summable);
    }

    #[test]
    fn binomial_recurrence() {
        let rec = zeilberger(&binomial_nk(), 3).unwrap();
        assert_eq!(rec.coeffs, vec![RatFunc::int(-2), RatFunc::int(1)]);
        let expect = &-&RatFunc::var(Var::K) / &rf(&[("n", 1), ("k", -1)], 1);
        assert_eq!(rec.certificate, expect);
        assert!(verify_certificate(&binomial_nk(), &rec));
    }

    #[test]
    fn binomial_over_power_of_two_is_wz() {
        let f = binomial_nk().mul(&HyperTerm::new(
            vec![],
            vec![],
            vec![Power {
                base: Base::Rational(Q::new(1.into(), 2.into())),
                index: Index::N,
            }],
            RatFunc::one(),
        ));
        let r = wz_certificate(&f).unwrap();
        let expect = &-&RatFunc::var(Var::K) / &rf(&[("n", 2), ("k", -2)], 2);
        assert_eq!(r, expect);
    }

    #[test]
    fn n_free_term_has_zero_wz_certificate() {
        let t = HyperTerm::new(vec![Poch::k(p("a"))], vec![Poch::k(LinArg::int(1))], vec![], RatFunc::one());
        assert!(wz_certificate(&t).unwrap().is_zero());
    }
}
