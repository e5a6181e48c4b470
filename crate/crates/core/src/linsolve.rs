//! Exact linear algebra over the rational-function field.
//!
//! Rows are cleared of denominators and reduced to echelon form with
//! fraction-free (Bareiss) elimination; only back-substitution touches
//! rational functions.

use crate::poly::{lcm, MultiPoly};
use crate::ratfunc::RatFunc;

struct Echelon {
    rows: Vec<Vec<MultiPoly>>,
    /// Pivot column of each nonzero row, in order.
    pivots: Vec<usize>,
}

fn clear_row(row: &[RatFunc]) -> Vec<MultiPoly> {
    let mut l = MultiPoly::one();
    for e in row {
        if !e.den().is_one() {
            l = lcm(&l, e.den());
        }
    }
    row.iter()
        .map(|e| {
            if e.is_zero() {
                MultiPoly::zero()
            } else {
                e.num() * &l.try_div(e.den()).expect("lcm is a multiple")
            }
        })
        .collect()
}

/// Fraction-free echelon form, pivoting only within the first `ncols` columns.
fn echelon(mut m: Vec<Vec<MultiPoly>>, ncols: usize) -> Echelon {
    let nrows = m.len();
    let width = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut prev = MultiPoly::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].len())
        else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            if m[i][c].is_zero() {
                for j in c + 1..width {
                    if !m[i][j].is_zero() {
                        m[i][j] = (&m[i][j] * &m[r][c]).try_div(&prev).expect("Bareiss step is exact");
                    }
                }
                continue;
            }
            for j in c + 1..width {
                let t = &(&m[r][c] * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                m[i][j] = t.try_div(&prev).expect("Bareiss step is exact");
            }
            m[i][c] = MultiPoly::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(nrows);
    Echelon { rows: m, pivots }
}

fn back_substitute(e: &Echelon, ncols: usize, x: &mut [RatFunc], rhs_col: Option<usize>) {
    for (r, &pc) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[r];
        let mut acc = match rhs_col {
            Some(j) => RatFunc::from_poly(row[j].clone()),
            None => RatFunc::zero(),
        };
        for j in pc + 1..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc = &acc - &(&RatFunc::from_poly(row[j].clone()) * &x[j]);
            }
        }
        x[pc] = &acc / &RatFunc::from_poly(row[pc].clone());
    }
}

/// Solves `system · x = rhs`. Returns `None` when inconsistent; free unknowns are set to 0.
pub fn solve_linear(system: &[Vec<RatFunc>], rhs: &[RatFunc]) -> Option<Vec<RatFunc>> {
    assert_eq!(system.len(), rhs.len(), "row count mismatch");
    let ncols = system.first().map_or(0, |r| r.len());
    let rows: Vec<Vec<MultiPoly>> = system
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut full = row.clone();
            full.push(b.clone());
            clear_row(&full)
        })
        .collect();
    let e = echelon(rows, ncols);
    for row in &e.rows[e.pivots.len()..] {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![RatFunc::zero(); ncols];
    back_substitute(&e, ncols, &mut x, Some(ncols));
    Some(x)
}

/// Basis of the right nullspace, one vector per free column (that entry set to 1).
pub fn nullspace(system: &[Vec<RatFunc>]) -> Vec<Vec<RatFunc>> {
    let ncols = system.first().map_or(0, |r| r.len());
    let rows: Vec<Vec<MultiPoly>> = system.iter().map(|r| clear_row(r)).collect();
    let e = echelon(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.into_iter()
        .map(|f| {
            let mut x = vec![RatFunc::zero(); ncols];
            x[f] = RatFunc::one();
            back_substitute(&e, ncols, &mut x, None);
            x
        })
        .collect()
}

/// `system · x`, for checking solutions.
pub fn apply(system: &[Vec<RatFunc>], x: &[RatFunc]) -> Vec<RatFunc> {
    system
        .iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(RatFunc::zero(), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::test_util::lin;

    fn p(parts: &[(&str, i64)], c: i64) -> RatFunc {
        RatFunc::from_poly(lin(parts, c))
    }

    #[test]
    fn one_by_one() {
        let rhs = p(&[("c", 1), ("a", -1), ("b", -1)], 0);
        let x = solve_linear(&[vec![RatFunc::one()]], &[rhs.clone()]).unwrap();
        assert_eq!(x, vec![rhs]);
    }

    #[test]
    fn identity_system() {
        let a = p(&[("a", 1)], 0);
        let b = p(&[("b", 1)], 0);
        let m = vec![vec![RatFunc::one(), RatFunc::zero()], vec![RatFunc::zero(), RatFunc::one()]];
        assert_eq!(solve_linear(&m, &[a.clone(), b.clone()]).unwrap(), vec![a, b]);
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let one = RatFunc::one();
        let m = vec![vec![one.clone(), one.clone()], vec![one.clone(), one.clone()]];
        assert!(solve_linear(&m, &[RatFunc::int(1), RatFunc::int(2)]).is_none());
        let x = solve_linear(&m, &[RatFunc::int(3), RatFunc::int(3)]).unwrap();
        assert_eq!(x, vec![RatFunc::int(3), RatFunc::zero()]);
    }

    #[test]
    fn symbolic_system_round_trip() {
        let a = p(&[("a", 1)], 0);
        let n = p(&[("n", 1)], 1);
        let m = vec![
            vec![a.clone(), n.clone(), RatFunc::int(1)],
            vec![n.clone(), &a / &n, a.clone()],
            vec![RatFunc::int(2), RatFunc::zero(), n.clone()],
        ];
        let rhs = vec![RatFunc::one(), a.clone(), n.clone()];
        let x = solve_linear(&m, &rhs).unwrap();
        assert_eq!(apply(&m, &x), rhs);
    }

    #[test]
    fn nullspace_vectors_vanish() {
        let a = p(&[("a", 1)], 0);
        let m = vec![vec![a.clone(), RatFunc::one(), &a * &a], vec![RatFunc::one(), a.inv(), a.clone()]];
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(apply(&m, &v).iter().all(|e| e.is_zero()));
        }
    }
}
