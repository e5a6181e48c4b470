//! Rational roots of univariate rational polynomials.
//!
//! Approximate roots come from Durand–Kerner iteration in `f64`; each real
//! candidate is turned into a rational by continued fractions and then checked
//! exactly, so the result never contains a false root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Q;

const MAX_DENOM: i64 = 1 << 24;

fn trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn horner(p: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn derivative(p: &[Q]) -> Vec<Q> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
        .collect()
}

fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    while r.len() > db && !r.is_empty() {
        let f = r.last().unwrap() / lb;
        let off = r.len() - 1 - db;
        for (i, c) in b.iter().enumerate() {
            r[off + i] -= &f * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn quo(a: &[Q], b: &[Q]) -> Vec<Q> {
    let db = b.len() - 1;
    if a.len() <= db {
        return Vec::new();
    }
    let mut r = a.to_vec();
    let mut q = vec![Q::zero(); a.len() - db];
    let lb = b.last().unwrap();
    while r.len() > db {
        let f = r.last().unwrap() / lb;
        let off = r.len() - 1 - db;
        for (i, c) in b.iter().enumerate() {
            r[off + i] -= &f * c;
        }
        q[off] = f;
        r.pop();
    }
    q
}

fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn to_f64(q: &Q) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

fn durand_kerner(p: &[Q]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lc = to_f64(p.last().unwrap());
    let c: Vec<f64> = p.iter().map(|x| to_f64(x) / lc).collect();
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * bound.min(1e6)).collect();
    let eval = |x: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * x + a);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 1e-12);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    // Polish with Newton on the original polynomial.
    let d: Vec<f64> = (1..=n).map(|i| c[i] * i as f64).collect();
    let deval = |x: Complex64| d.iter().rev().fold(Complex64::zero(), |acc, &a| acc * x + a);
    for r in z.iter_mut() {
        for _ in 0..4 {
            let dv = deval(*r);
            if dv.norm() == 0.0 {
                break;
            }
            *r -= eval(*r) / dv;
        }
    }
    z
}

/// Convergents of the continued fraction of `x` with denominators up to `MAX_DENOM`.
fn convergents(x: f64) -> Vec<Q> {
    let mut out = Vec::new();
    if !x.is_finite() || x.abs() > 1e15 {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(MAX_DENOM) {
            break;
        }
        out.push(Q::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-13 {
            break;
        }
        y = 1.0 / frac;
    }
    out
}

/// Candidates from the rational root theorem, used when the degree is small enough
/// that the constant and leading coefficients have few divisors.
fn small_divisors(n: &BigInt, limit: u64) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let nf = n.to_u64()?;
    if nf > limit {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= nf {
        if nf % d == 0 {
            out.push(BigInt::from(d));
            if d * d != nf {
                out.push(BigInt::from(nf / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Distinct rational roots of `Σ p[i] x^i`, ascending.
pub fn rational_roots(p: &[Q]) -> Vec<Q> {
    let mut p = p.to_vec();
    trim(&mut p);
    let mut roots = Vec::new();
    if p.len() <= 1 {
        return roots;
    }
    if p[0].is_zero() {
        roots.push(Q::zero());
        let z = p.iter().take_while(|c| c.is_zero()).count();
        p.drain(..z);
    }
    let g = gcd(&p, &derivative(&p));
    let mut sf = if g.len() > 1 { quo(&p, &g) } else { p };
    // Integer primitive form.
    let l = sf.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    for c in sf.iter_mut() {
        *c = &*c * Q::from_integer(l.clone());
    }

    let found = |sf: &mut Vec<Q>, r: Q, roots: &mut Vec<Q>| {
        if sf.len() > 1 && horner(sf, &r).is_zero() {
            *sf = quo(sf, &[-r.clone(), Q::one()]);
            roots.push(r);
        }
    };

    if sf.len() == 2 {
        let r = -&sf[0] / &sf[1];
        found(&mut sf, r, &mut roots);
    } else if sf.len() > 2 {
        // Exhaustive rational root theorem when cheap, numeric otherwise.
        let nums = small_divisors(sf[0].numer(), 100_000);
        let dens = small_divisors(sf.last().unwrap().numer(), 100_000);
        if let (Some(nums), Some(dens)) = (nums, dens) {
            for a in &nums {
                for b in &dens {
                    for s in [1, -1] {
                        let r = Q::new(a * s, b.clone());
                        found(&mut sf, r, &mut roots);
                    }
                }
            }
        } else {
            let approx = durand_kerner(&sf);
            for z in approx {
                if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                    continue;
                }
                for r in convergents(z.re) {
                    found(&mut sf, r, &mut roots);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn from_roots(rs: &[Q]) -> Vec<Q> {
        let mut p = vec![Q::one()];
        for r in rs {
            let mut next = vec![Q::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            p = next;
        }
        p
    }

    #[test]
    fn finds_integer_and_fractional_roots() {
        let rs = [q(-3, 1), q(1, 2), q(7, 1), q(7, 1)];
        let mut p = from_roots(&rs);
        // Irreducible quadratic cofactor x^2 + 1.
        let mut with_q = vec![Q::zero(); p.len() + 2];
        for (i, c) in p.iter().enumerate() {
            with_q[i] += c;
            with_q[i + 2] += c;
        }
        p = with_q;
        assert_eq!(rational_roots(&p), vec![q(-3, 1), q(1, 2), q(7, 1)]);
    }

    #[test]
    fn large_coefficients_use_numeric_path() {
        let rs = [q(1000003, 1), q(-999983, 7), q(1, 3), q(20011, 2)];
        assert_eq!(rational_roots(&from_roots(&rs)), {
            let mut v = rs.to_vec();
            v.sort();
            v
        });
    }

    #[test]
    fn no_roots() {
        assert!(rational_roots(&[q(2, 1), q(0, 1), q(1, 1)]).is_empty());
        assert!(rational_roots(&[q(5, 1)]).is_empty());
    }
}
