//! Polynomial variables.
//!
//! A [`Var`] is a packed 64-bit code. Parameter names (short identifiers) are
//! encoded so that their numeric order equals their lexicographic order, and
//! every parameter sorts before the shift variables `n` and `k`. Auxiliary
//! variables (used internally for unknowns and shift amounts) sort last.

use std::fmt;

const MAX_NAME_LEN: usize = 10;
const N_CODE: u64 = 1 << 61;
const K_CODE: u64 = (1 << 61) + 1;
const AUX_BASE: u64 = 1 << 62;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u64);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("parameter name `{0}` is empty or longer than {MAX_NAME_LEN} characters")]
    Length(String),
    #[error("parameter name `{0}` must start with a letter and contain only [A-Za-z0-9_]")]
    Charset(String),
    #[error("`{0}` is reserved for a shift variable")]
    Reserved(String),
}

fn char_code(c: char) -> Option<u64> {
    // Preserves ASCII order: digits < uppercase < '_' < lowercase.
    match c {
        '0'..='9' => Some(1 + (c as u64 - '0' as u64)),
        'A'..='Z' => Some(11 + (c as u64 - 'A' as u64)),
        '_' => Some(37),
        'a'..='z' => Some(38 + (c as u64 - 'a' as u64)),
        _ => None,
    }
}

fn code_char(code: u64) -> char {
    match code {
        1..=10 => (b'0' + (code - 1) as u8) as char,
        11..=36 => (b'A' + (code - 11) as u8) as char,
        37 => '_',
        38..=63 => (b'a' + (code - 38) as u8) as char,
        _ => '?',
    }
}

impl Var {
    pub const N: Var = Var(N_CODE);
    pub const K: Var = Var(K_CODE);

    /// A named parameter such as `a` or `alpha`.
    pub fn param(name: &str) -> Result<Var, SymbolError> {
        if name == "n" || name == "k" {
            return Err(SymbolError::Reserved(name.to_string()));
        }
        if name.is_empty() || name.len() > MAX_NAME_LEN {
            return Err(SymbolError::Length(name.to_string()));
        }
        if !name.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            return Err(SymbolError::Charset(name.to_string()));
        }
        let mut code = 0u64;
        let mut count = 0;
        for c in name.chars() {
            let v = char_code(c).ok_or_else(|| SymbolError::Charset(name.to_string()))?;
            code = (code << 6) | v;
            count += 1;
        }
        code <<= 6 * (MAX_NAME_LEN - count);
        Ok(Var(code))
    }

    /// Shorthand for tests and builders; panics on an invalid name.
    pub fn p(name: &str) -> Var {
        Var::param(name).expect("valid parameter name")
    }

    pub fn aux(index: u32) -> Var {
        Var(AUX_BASE + index as u64)
    }

    pub fn is_param(self) -> bool {
        self.0 < N_CODE
    }

    pub fn is_shift(self) -> bool {
        self == Var::N || self == Var::K
    }

    pub fn is_aux(self) -> bool {
        self.0 >= AUX_BASE
    }

    pub fn name(self) -> String {
        if self == Var::N {
            return "n".into();
        }
        if self == Var::K {
            return "k".into();
        }
        if self.is_aux() {
            return format!("_u{}", self.0 - AUX_BASE);
        }
        let mut out = String::new();
        for i in (0..MAX_NAME_LEN).rev() {
            let c = (self.0 >> (6 * i)) & 63;
            if c == 0 {
                break;
            }
            out.push(code_char(c));
        }
        out
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_params_then_n_then_k() {
        let a = Var::p("a");
        let ab = Var::p("ab");
        let b = Var::p("b");
        let z = Var::p("zeta");
        assert!(a < ab && ab < b && b < z);
        assert!(z < Var::N && Var::N < Var::K && Var::K < Var::aux(0));
    }

    #[test]
    fn names_round_trip() {
        for name in ["a", "e", "alpha", "x_1", "Q9", "abcdefghij"] {
            assert_eq!(Var::p(name).name(), name);
        }
        assert!(Var::param("n").is_err());
        assert!(Var::param("1a").is_err());
        assert!(Var::param("abcdefghijk").is_err());
    }
}
