//! Resultants and dispersion sets.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{linear_factors, poly_gcd, rational_roots, MultiPoly};
use crate::symbol::Var;
use crate::Q;

/// Resultant of `p` and `q` with respect to `x`, as the Sylvester determinant.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, x: Var) -> MultiPoly {
    if p.is_zero() || q.is_zero() {
        return MultiPoly::zero();
    }
    let cp = p.coeffs_in(x);
    let cq = q.coeffs_in(x);
    let (dp, dq) = (cp.len() - 1, cq.len() - 1);
    if dp == 0 && dq == 0 {
        return MultiPoly::one();
    }
    if dp == 0 {
        return cp[0].pow(dq as u32);
    }
    if dq == 0 {
        return cq[0].pow(dp as u32);
    }
    let size = dp + dq;
    let mut m = vec![vec![MultiPoly::zero(); size]; size];
    for i in 0..dq {
        for (j, c) in cp.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..dp {
        for (j, c) in cq.iter().rev().enumerate() {
            m[dq + i][i + j] = c.clone();
        }
    }
    bareiss_det(m)
}

fn bareiss_det(mut m: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = m.len();
    let mut sign = false;
    let mut prev = MultiPoly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return MultiPoly::zero();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.try_div(&prev).expect("Bareiss step is exact");
            }
            m[i][k] = MultiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

fn shares_factor_at(p: &MultiPoly, q: &MultiPoly, x: Var, j: i64) -> bool {
    poly_gcd(p, &q.shift(x, j)).degree_in(x) > 0
}

/// Nonnegative integer shifts `j` with `gcd(p(x), q(x + j))` nonconstant in `x`.
///
/// Linear factors are paired directly; whatever does not split into linear
/// factors goes through [`dispersion_by_resultant`].
pub fn dispersion(p: &MultiPoly, q: &MultiPoly, x: Var) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    if p.degree_in(x) == 0 || q.degree_in(x) == 0 {
        return out;
    }
    let fp = linear_factors(p);
    let fq = linear_factors(q);
    let xcoef = |f: &MultiPoly| f.coeffs_in(x).get(1).and_then(|c| c.as_constant());
    for (f, _) in &fp.linear {
        let Some(af) = xcoef(f) else { continue };
        for (g, _) in &fq.linear {
            let Some(ag) = xcoef(g) else { continue };
            // g(x + j) = g + ag*j must be proportional to f.
            let diff = g - &f.scale(&(&ag / &af));
            if let Some(c) = diff.as_constant() {
                let j = -c / &ag;
                if j.is_integer() && !j.is_negative() {
                    if let Some(j) = j.to_integer().to_u32() {
                        out.insert(j);
                    }
                }
            }
        }
    }
    if fp.residual.degree_in(x) > 0 && fq.residual.degree_in(x) > 0 {
        out.extend(dispersion_by_resultant(&fp.residual, &fq.residual, x));
    }
    out
}

/// Dispersion from the integer roots of `res_x(p(x), q(x + j))`.
///
/// The other variables are specialized at a point where both leading
/// coefficients survive; every root found there is confirmed by an exact gcd.
pub fn dispersion_by_resultant(p: &MultiPoly, q: &MultiPoly, x: Var) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    if p.degree_in(x) == 0 || q.degree_in(x) == 0 {
        return out;
    }
    let mut others: Vec<Var> = p.variables();
    others.extend(q.variables());
    others.sort();
    others.dedup();
    others.retain(|&v| v != x);
    let j = Var::aux(0);
    let (lp, lq) = (p.lead_coeff_in(x), q.lead_coeff_in(x));
    for attempt in 0..32i64 {
        let point: Vec<Q> = (0..others.len())
            .map(|i| Q::from_integer((19 + 7 * i as i64 + 13 * attempt).into()))
            .collect();
        let spec = |f: &MultiPoly| {
            let mut s = f.clone();
            for (v, val) in others.iter().zip(&point) {
                s = s.substitute_rational(*v, val);
            }
            s
        };
        if spec(&lp).is_zero() || spec(&lq).is_zero() {
            continue;
        }
        let ps = spec(p);
        let qs = spec(q).substitute(x, &(&MultiPoly::var(x) + &MultiPoly::var(j)));
        let r = resultant(&ps, &qs, x);
        let Some(coeffs) = r.to_univariate(j) else { continue };
        if coeffs.iter().all(|c| c.is_zero()) {
            // Specialization collapsed a generic shift; fall through to the next point.
            continue;
        }
        for root in rational_roots(&coeffs) {
            if root.is_integer() && !root.is_negative() {
                let Some(jv) = root.to_integer().to_i64() else { continue };
                if shares_factor_at(p, q, x, jv) {
                    out.insert(jv as u32);
                }
            }
        }
        return out;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::test_util::lin;
    use super::*;

    #[test]
    fn shift_by_three() {
        let s = dispersion(&lin(&[("k", 1)], 4), &lin(&[("k", 1)], 1), Var::K);
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn identical_polynomials() {
        let k = lin(&[("k", 1)], 0);
        assert_eq!(dispersion(&k, &k, Var::K).into_iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(dispersion_by_resultant(&k, &k, Var::K).into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn symbolic_shift_is_not_integer() {
        let p = lin(&[("k", 1)], 1);
        let q = lin(&[("k", 1), ("a", 1)], 3);
        assert!(dispersion(&p, &q, Var::K).is_empty());
        assert!(dispersion_by_resultant(&p, &q, Var::K).is_empty());
        let r = resultant(&p, &q, Var::K);
        assert!(!r.is_constant());
    }

    #[test]
    fn resultant_of_linear_forms() {
        // res_k(k + 1, k + 3 + a) = (3 + a) - 1
        let r = resultant(&lin(&[("k", 1)], 1), &lin(&[("k", 1), ("a", 1)], 3), Var::K);
        assert_eq!(r, lin(&[("a", 1)], 2));
    }

    #[test]
    fn nonlinear_residuals_use_resultant() {
        let k = lin(&[("k", 1)], 0);
        let p = &k.pow(2) + &lin(&[("a", 1)], 0);
        let q = p.shift(Var::K, -5);
        let s = dispersion(&p, &q, Var::K);
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![5]);
    }
}
