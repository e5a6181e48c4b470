//! Extraction of factors that are linear in all variables.
//!
//! A factor `x - (γ + Σ δ_i y_i)` is found by specializing the other variables
//! at a base point `P`: the univariate root at `P` gives `γ + Σ δ_i P_i`, the
//! roots at `P + e_i` and `P + 2e_i` give `δ_i`. Candidates are confirmed by
//! exact division.

use std::collections::BTreeMap;

use num_traits::One;

use super::roots::rational_roots;
use super::{content_in, MultiPoly};
use crate::symbol::Var;
use crate::Q;

const BASE: [i64; 16] = [37, 53, 71, 97, 113, 131, 157, 173, 197, 211, 239, 257, 281, 307, 331, 353];
const MAX_COMBOS: usize = 4096;

/// `unit * Π linear_i^m_i * residual`.
///
/// Linear factors and the residual have coprime integer coefficients and a
/// positive leading coefficient; linear factors are distinct and sorted in
/// descending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Q,
    pub linear: Vec<(MultiPoly, u32)>,
    pub residual: MultiPoly,
}

impl Factorization {
    pub fn expand(&self) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.unit.clone());
        for (f, m) in &self.linear {
            acc = &acc * &f.pow(*m);
        }
        &acc * &self.residual
    }

    pub fn is_fully_linear(&self) -> bool {
        self.residual.is_one()
    }
}

fn base_point(i: usize) -> Q {
    let v = BASE.get(i).copied().unwrap_or(353 + 22 * (i as i64 - 15));
    Q::from_integer(v.into())
}

fn roots_at(p: &MultiPoly, x: Var, others: &[Var], point: &[Q]) -> Vec<Q> {
    let mut s = p.clone();
    for (v, val) in others.iter().zip(point) {
        s = s.substitute_rational(*v, val);
    }
    match s.to_univariate(x) {
        Some(c) => rational_roots(&c),
        None => Vec::new(),
    }
}

/// Linear factors of `p` with nonzero `x`-coefficient, each monic in `x`.
fn extract_in(p: &MultiPoly, x: Var) -> (Vec<(MultiPoly, u32)>, MultiPoly) {
    let others: Vec<Var> = p.variables().into_iter().filter(|&v| v != x).collect();
    let mut rest = p.clone();
    let mut out = Vec::new();
    let base: Vec<Q> = (0..others.len()).map(base_point).collect();
    loop {
        if rest.degree_in(x) == 0 {
            break;
        }
        let r0 = roots_at(&rest, x, &others, &base);
        if r0.is_empty() {
            break;
        }
        let mut shifted1 = Vec::with_capacity(others.len());
        let mut shifted2 = Vec::with_capacity(others.len());
        for i in 0..others.len() {
            let mut p1 = base.clone();
            p1[i] += Q::one();
            let mut p2 = base.clone();
            p2[i] += Q::from_integer(2.into());
            shifted1.push(roots_at(&rest, x, &others, &p1));
            shifted2.push(roots_at(&rest, x, &others, &p2));
        }
        let mut progress = false;
        for rho in &r0 {
            let mut cands: Vec<Vec<Q>> = Vec::with_capacity(others.len());
            for i in 0..others.len() {
                let c: Vec<Q> = shifted1[i]
                    .iter()
                    .map(|r| r - rho)
                    .filter(|d| shifted2[i].contains(&(rho + d + d)))
                    .collect();
                cands.push(c);
            }
            if cands.iter().any(|c| c.is_empty()) {
                continue;
            }
            let total: usize = cands.iter().map(|c| c.len()).product();
            if total > MAX_COMBOS {
                continue;
            }
            for idx in 0..total {
                let mut rem = idx;
                let mut factor = &MultiPoly::var(x) - &MultiPoly::constant(rho.clone());
                for (i, c) in cands.iter().enumerate() {
                    let d = &c[rem % c.len()];
                    rem /= c.len();
                    // x - (ρ0 + Σ δ_i (y_i - P_i))
                    let term = &MultiPoly::var(others[i]) - &MultiPoly::constant(base[i].clone());
                    factor = &factor - &term.scale(d);
                }
                let mut mult = 0;
                while let Some(q) = rest.try_div(&factor) {
                    rest = q;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((factor, mult));
                    progress = true;
                    break;
                }
            }
        }
        if !progress {
            break;
        }
    }
    (out, rest)
}

/// Splits `p` into its linear factors and a residual without linear factors.
pub fn linear_factors(p: &MultiPoly) -> Factorization {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let mut linear: BTreeMap<MultiPoly, u32> = BTreeMap::new();
    let mut residual = MultiPoly::one();
    let mut stack = vec![p.clone()];
    while let Some(q) = stack.pop() {
        if q.is_constant() {
            continue;
        }
        let x = *q.variables().last().unwrap();
        let (found, rest) = extract_in(&q, x);
        for (f, m) in found {
            *linear.entry(f.primitive()).or_insert(0) += m;
        }
        if rest.is_constant() {
            continue;
        }
        let c = content_in(&rest, x);
        let pp = rest.try_div(&c).expect("content divides");
        if pp.degree_in(x) > 0 {
            residual = &residual * &pp;
        }
        if !c.is_constant() {
            stack.push(c);
        }
    }
    let residual = residual.primitive();
    // Descending, so parameter-led factors print first.
    let linear: Vec<(MultiPoly, u32)> = linear.into_iter().rev().collect();
    let mut prod = residual.clone();
    for (f, m) in &linear {
        prod = &prod * &f.pow(*m);
    }
    let unit = p.leading_coeff() / prod.leading_coeff();
    Factorization { unit, linear, residual }
}
