//! Multivariate gcd by recursive content splitting and the subresultant PRS.

use super::MultiPoly;
use crate::symbol::Var;

/// Greatest common divisor, normalized so the lexicographic leading coefficient is 1.
///
/// `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if b.try_div(a).is_some() {
        return a.monic();
    }
    if a.try_div(b).is_some() {
        return b.monic();
    }

    let (mut a, mut b) = (a.clone(), b.clone());
    // A variable present in only one input cannot occur in the gcd.
    loop {
        let va = a.variables();
        let vb = b.variables();
        if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
            a = content_in(&a, v);
        } else if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
            b = content_in(&b, v);
        } else {
            break;
        }
        if a.is_constant() || b.is_constant() {
            return MultiPoly::one();
        }
    }

    // Shared variables only from here. Recurse on the largest one.
    let x = *a.variables().last().unwrap();
    let ca = content_in(&a, x);
    let cb = content_in(&b, x);
    let pa = a.try_div(&ca).expect("content divides");
    let pb = b.try_div(&cb).expect("content divides");
    let gc = poly_gcd(&ca, &cb);
    let gp = subresultant_gcd(&pa, &pb, x);
    (&gc * &gp).monic()
}

pub fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero();
    }
    let g = poly_gcd(a, b);
    (a * &b.try_div(&g).expect("gcd divides")).monic()
}

/// Content of `p` viewed as a polynomial in `v`: the gcd of its coefficients.
pub fn content_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    // Small coefficients first tends to reach 1 sooner.
    coeffs.sort_by_key(|c| c.len());
    let mut g = MultiPoly::zero();
    for c in coeffs {
        g = poly_gcd(&g, &c);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

type Upoly = Vec<MultiPoly>;

fn deg(p: &Upoly) -> usize {
    p.len() - 1
}

fn trim(p: &mut Upoly) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
fn prem(a: &Upoly, b: &Upoly) -> Upoly {
    let mut r = a.clone();
    let db = deg(b);
    let lb = b.last().unwrap().clone();
    let mut steps = deg(a) + 1 - db;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = deg(&r);
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = &r[idx] - &(&lr * bc);
        }
        r.pop();
        if r.is_empty() {
            r.push(MultiPoly::zero());
        }
        trim(&mut r);
        steps -= 1;
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn is_zero_u(p: &Upoly) -> bool {
    p.len() == 1 && p[0].is_zero()
}

/// gcd of two polynomials that are primitive in `x` and both involve `x`.
fn subresultant_gcd(a: &MultiPoly, b: &MultiPoly, x: Var) -> MultiPoly {
    let mut ua = a.coeffs_in(x);
    let mut ub = b.coeffs_in(x);
    if deg(&ua) < deg(&ub) {
        std::mem::swap(&mut ua, &mut ub);
    }
    let mut g = MultiPoly::one();
    let mut h = MultiPoly::one();
    loop {
        let delta = deg(&ua) - deg(&ub);
        let r = prem(&ua, &ub);
        if is_zero_u(&r) {
            let p = MultiPoly::from_coeffs_in(x, &ub);
            let c = content_in(&p, x);
            return p.try_div(&c).expect("content divides");
        }
        if deg(&r) == 0 {
            return MultiPoly::one();
        }
        let div = &g * &h.pow(delta as u32);
        ua = ub;
        ub = r
            .iter()
            .map(|c| c.try_div(&div).expect("subresultant division is exact"))
            .collect();
        g = ua.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g
                .pow(d as u32)
                .try_div(&h.pow(d as u32 - 1))
                .expect("subresultant division is exact"),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_util::lin;
    use super::*;
    use crate::Q;

    #[test]
    fn shared_root() {
        let k = lin(&[("k", 1)], 0);
        let a = &(&k * &k) - &MultiPoly::one();
        let b = &(&(&k * &k) - &k.scale(&Q::from_integer(2.into()))) + &MultiPoly::one();
        assert_eq!(poly_gcd(&a, &b), lin(&[("k", 1)], -1));
    }

    #[test]
    fn gcd_with_zero_is_canonical() {
        let p = lin(&[("a", 2), ("k", 4)], 6);
        assert_eq!(poly_gcd(&p, &MultiPoly::zero()), p.monic());
        assert!(poly_gcd(&MultiPoly::zero(), &MultiPoly::zero()).is_zero());
    }

    #[test]
    fn parameter_factor_is_dropped() {
        let k = lin(&[("k", 1)], 0);
        let a = &lin(&[("c", 1), ("n", 1), ("a", -1), ("b", -1)], 0) * &k;
        let g = poly_gcd(&a, &(&k * &k));
        assert_eq!(g, k);
        assert!(a.try_div(&g).is_some());
    }

    #[test]
    fn multivariate_common_factor() {
        let f1 = lin(&[("a", 1), ("k", 1)], 1);
        let f2 = lin(&[("b", 1), ("n", 2)], -3);
        let f3 = lin(&[("k", 1), ("n", -1)], 0);
        let p = &(&f1 * &f2) * &f3;
        let q = &(&f1 * &f3) * &lin(&[("a", 1), ("b", 1)], 0);
        let g = poly_gcd(&p, &q);
        assert_eq!(g, (&f1 * &f3).monic());
    }

    #[test]
    fn coprime_high_degree() {
        let k = lin(&[("k", 1)], 0);
        let a = &k.pow(3) + &lin(&[("a", 1)], 0);
        let b = &k.pow(2) + &lin(&[("b", 1)], 1);
        assert!(poly_gcd(&a, &b).is_one());
    }
}
