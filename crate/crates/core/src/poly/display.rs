use std::fmt;

use num_traits::{One, Signed};

use super::{linear_factors, Monomial, MultiPoly};
use crate::Q;

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.pairs().iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn write_coeff_term(f: &mut fmt::Formatter<'_>, m: &Monomial, c: &Q) -> fmt::Result {
    let a = c.abs();
    if m.is_one() {
        write!(f, "{a}")
    } else if a.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{a}*{m}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_coeff_term(f, m, c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn push_factor(out: &mut String, p: &MultiPoly, m: u32) {
    if !out.is_empty() && !out.ends_with('-') {
        out.push('*');
    }
    if p.len() == 1 && (m == 1 || p.terms()[0].0.pairs().len() == 1 && p.terms()[0].1.is_one()) {
        out.push_str(&p.to_string());
    } else {
        out.push('(');
        out.push_str(&p.to_string());
        out.push(')');
    }
    if m > 1 {
        out.push_str(&format!("^{m}"));
    }
}

/// True when `s` is one parenthesized group such as `(a + k)`.
pub(crate) fn is_single_group(s: &str) -> bool {
    if !s.starts_with('(') || !s.ends_with(')') {
        return false;
    }
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 < s.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

impl MultiPoly {
    /// Canonical factored form: unit, sorted linear factors, expanded residual.
    pub fn to_factored_string(&self) -> String {
        if self.is_constant() {
            return self.to_string();
        }
        let fz = linear_factors(self);
        let mut out = String::new();
        if fz.unit == -Q::one() {
            out.push('-');
        } else if !fz.unit.is_one() {
            if fz.unit.is_negative() {
                out.push('-');
            }
            out.push_str(&fz.unit.abs().to_string());
        }
        for (p, m) in &fz.linear {
            push_factor(&mut out, p, *m);
        }
        if !fz.residual.is_one() {
            push_factor(&mut out, &fz.residual, 1);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_util::lin;
    use super::*;

    #[test]
    fn expanded_printing() {
        let p = &lin(&[("a", 2), ("k", -1)], 0) * &lin(&[("k", 1)], 1);
        assert_eq!(p.to_string(), "2*a*k + 2*a - k^2 - k");
    }

    #[test]
    fn factored_printing() {
        let p = (&lin(&[("c", 1), ("n", 1)], 1) * &lin(&[("k", 1)], 0)).scale(&Q::from_integer((-2).into()));
        assert_eq!(p.to_factored_string(), "-2*(c + n + 1)*k");
        let sq = &lin(&[("k", 1)], 0) * &lin(&[("k", 1)], 0);
        assert_eq!(sq.to_factored_string(), "k^2");
    }
}
