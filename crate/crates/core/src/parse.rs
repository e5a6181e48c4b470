//! Text grammar for terms, series, Gamma quotients and rational functions.
//!
//! ```text
//! expr    := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? integer)?
//! atom    := integer | ident | ident '(' args ')' | '(' expr ')' | '[' args ']'
//! ```
//!
//! Functions: `poch(x,k)`, `fac(k)`, `pow(z,k)`, `Gamma(x)`, `sin(pi*(x))` and
//! the top-level `pFq([..],[..],z)`. `n`, `k` and `pi` are reserved.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::gamma::GammaQuotient;
use crate::hyperterm::{Base, HyperTerm, Index, Poch, Power, SeriesSpec};
use crate::linarg::LinArg;
use crate::ratfunc::RatFunc;
use crate::symbol::Var;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: expected {expected}, found {found}")]
    Syntax { pos: usize, expected: String, found: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("`{name}` at position {pos} takes {expected} argument(s), got {got}")]
    Arity { pos: usize, name: String, expected: usize, got: usize },
    #[error("invalid expression at position {pos}: {msg}")]
    Invalid { pos: usize, msg: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::Arity { pos, .. }
            | ParseError::Invalid { pos, .. } => *pos,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "()[],+-*/^".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos: i,
                expected: "a token".into(),
                found: format!("`{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Ident(String),
    Call(String, Vec<(Node, usize)>),
    List(Vec<(Node, usize)>),
    Neg(Box<(Node, usize)>),
    Bin(char, Box<(Node, usize)>, Box<(Node, usize)>),
    Pow(Box<(Node, usize)>, i64),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            expected: expected.into(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn expr(&mut self) -> Result<(Node, usize), ParseError> {
        let mut lhs = self.product()?;
        while let Tok::Sym(op @ ('+' | '-')) = *self.peek() {
            let pos = self.pos();
            self.bump();
            let rhs = self.product()?;
            lhs = (Node::Bin(op, Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<(Node, usize), ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Sym(op @ ('*' | '/')) = *self.peek() {
            let pos = self.pos();
            self.bump();
            let rhs = self.unary()?;
            lhs = (Node::Bin(op, Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<(Node, usize), ParseError> {
        if *self.peek() == Tok::Sym('-') {
            let pos = self.pos();
            self.bump();
            let inner = self.unary()?;
            return Ok((Node::Neg(Box::new(inner)), pos));
        }
        self.power()
    }

    fn power(&mut self) -> Result<(Node, usize), ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let neg = if *self.peek() == Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                let e = i.to_i64().filter(|e| *e <= 64).ok_or(ParseError::Invalid {
                    pos,
                    msg: "exponent too large".into(),
                })?;
                Ok((Node::Pow(Box::new(base), if neg { -e } else { e }), pos))
            }
            _ => self.fail("an integer exponent"),
        }
    }

    fn args(&mut self, close: char) -> Result<Vec<(Node, usize)>, ParseError> {
        let mut out = Vec::new();
        if *self.peek() == Tok::Sym(close) {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            match self.peek() {
                Tok::Sym(',') => {
                    self.bump();
                }
                Tok::Sym(c) if *c == close => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.fail(&format!("`,` or `{close}`")),
            }
        }
    }

    fn atom(&mut self) -> Result<(Node, usize), ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok((Node::Int(i), pos))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::Sym('(') {
                    self.bump();
                    let args = self.args(')')?;
                    Ok((Node::Call(name, args), pos))
                } else {
                    Ok((Node::Ident(name), pos))
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Sym('[') => {
                self.bump();
                let items = self.args(']')?;
                Ok((Node::List(items), pos))
            }
            _ => self.fail("an operand"),
        }
    }
}

fn parse_tree(src: &str) -> Result<(Node, usize), ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let node = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(node)
}

/// A transcendental or shift-indexed factor of a product.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Factor {
    Poch(LinArg, Index),
    Pow(RatFunc, Index),
    Gamma(LinArg),
    Pi,
    Sin(LinArg),
}

/// `coeff · Π factor^e`.
#[derive(Clone, Debug)]
struct Product {
    coeff: RatFunc,
    factors: Vec<(Factor, i64)>,
}

impl Product {
    fn scalar(r: RatFunc) -> Self {
        Product { coeff: r, factors: Vec::new() }
    }

    fn factor(f: Factor) -> Self {
        Product {
            coeff: RatFunc::one(),
            factors: vec![(f, 1)],
        }
    }

    fn as_scalar(&self) -> Option<&RatFunc> {
        self.factors.is_empty().then_some(&self.coeff)
    }

    fn mul(mut self, other: Product, sign: i64) -> Product {
        self.coeff = if sign > 0 { &self.coeff * &other.coeff } else { &self.coeff / &other.coeff };
        for (f, e) in other.factors {
            match self.factors.iter_mut().find(|(g, _)| *g == f) {
                Some(slot) => slot.1 += sign * e,
                None => self.factors.push((f, sign * e)),
            }
        }
        self.factors.retain(|(_, e)| *e != 0);
        self
    }

    fn pow(self, e: i64) -> Product {
        Product {
            coeff: self.coeff.pow(e as i32),
            factors: self.factors.into_iter().map(|(f, x)| (f, x * e)).collect(),
        }
    }
}

#[derive(Clone, Debug)]
enum Value {
    Product(Product),
    List(Vec<(Value, usize)>),
    Series(SeriesSpec),
}

fn invalid<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Invalid { pos, msg: msg.into() })
}

fn product_of(v: Value, pos: usize) -> Result<Product, ParseError> {
    match v {
        Value::Product(p) => Ok(p),
        Value::List(_) => invalid(pos, "a list is not allowed here"),
        Value::Series(_) => invalid(pos, "pFq(...) is only allowed at the top level"),
    }
}

fn scalar_of(v: Value, pos: usize) -> Result<RatFunc, ParseError> {
    let p = product_of(v, pos)?;
    match p.as_scalar() {
        Some(r) => Ok(r.clone()),
        None => invalid(pos, "expected a rational expression"),
    }
}

fn linarg_of(v: Value, pos: usize) -> Result<LinArg, ParseError> {
    let r = scalar_of(v, pos)?;
    if !r.den().is_constant() {
        return invalid(pos, "expected an affine argument");
    }
    let p = r.num().scale(&r.den().as_constant().expect("constant").recip());
    match LinArg::from_poly(&p) {
        Some(l) => Ok(l),
        None => invalid(pos, "expected an affine argument with integer n, k coefficients"),
    }
}

fn index_of(node: &(Node, usize)) -> Result<Index, ParseError> {
    match &node.0 {
        Node::Ident(s) if s == "n" => Ok(Index::N),
        Node::Ident(s) if s == "k" => Ok(Index::K),
        _ => invalid(node.1, "expected the index n or k"),
    }
}

fn arity(name: &str, pos: usize, args: &[(Node, usize)], expected: usize) -> Result<(), ParseError> {
    if args.len() == expected {
        Ok(())
    } else {
        Err(ParseError::Arity {
            pos,
            name: name.into(),
            expected,
            got: args.len(),
        })
    }
}

fn eval(node: &(Node, usize)) -> Result<Value, ParseError> {
    let pos = node.1;
    match &node.0 {
        Node::Int(i) => Ok(Value::Product(Product::scalar(RatFunc::constant(Q::from_integer(i.clone()))))),
        Node::Ident(name) => {
            let v = match name.as_str() {
                "n" => Var::N,
                "k" => Var::K,
                "pi" => return Ok(Value::Product(Product::factor(Factor::Pi))),
                _ => Var::param(name).map_err(|_| ParseError::UnknownIdentifier { pos, name: name.clone() })?,
            };
            Ok(Value::Product(Product::scalar(RatFunc::var(v))))
        }
        Node::Neg(inner) => {
            let p = product_of(eval(inner)?, inner.1)?;
            Ok(Value::Product(Product {
                coeff: -p.coeff,
                factors: p.factors,
            }))
        }
        Node::Pow(base, e) => {
            let p = product_of(eval(base)?, base.1)?;
            if *e < 0 && p.coeff.is_zero() {
                return invalid(pos, "division by zero");
            }
            Ok(Value::Product(p.pow(*e)))
        }
        Node::Bin(op, l, r) => {
            let lv = product_of(eval(l)?, l.1)?;
            let rv = product_of(eval(r)?, r.1)?;
            match op {
                '*' => Ok(Value::Product(lv.mul(rv, 1))),
                '/' => {
                    if rv.coeff.is_zero() {
                        return invalid(pos, "division by zero");
                    }
                    Ok(Value::Product(lv.mul(rv, -1)))
                }
                _ => {
                    let (Some(a), Some(b)) = (lv.as_scalar(), rv.as_scalar()) else {
                        return invalid(pos, "sums are allowed between rational expressions only");
                    };
                    let s = if *op == '+' { a + b } else { a - b };
                    Ok(Value::Product(Product::scalar(s)))
                }
            }
        }
        Node::List(items) => {
            let mut out = Vec::new();
            for it in items {
                out.push((eval(it)?, it.1));
            }
            Ok(Value::List(out))
        }
        Node::Call(name, args) => call(name, pos, args),
    }
}

fn call(name: &str, pos: usize, args: &[(Node, usize)]) -> Result<Value, ParseError> {
    let factor = |f: Factor| Ok(Value::Product(Product::factor(f)));
    match name {
        "poch" => {
            arity(name, pos, args, 2)?;
            let x = linarg_of(eval(&args[0])?, args[0].1)?;
            factor(Factor::Poch(x, index_of(&args[1])?))
        }
        "fac" => {
            arity(name, pos, args, 1)?;
            factor(Factor::Poch(LinArg::int(1), index_of(&args[0])?))
        }
        "pow" => {
            arity(name, pos, args, 2)?;
            let z = scalar_of(eval(&args[0])?, args[0].1)?;
            if z.contains_var(Var::N) || z.contains_var(Var::K) || z.is_zero() {
                return invalid(args[0].1, "power base must be a nonzero parameter expression");
            }
            factor(Factor::Pow(z, index_of(&args[1])?))
        }
        "Gamma" | "gamma" => {
            arity(name, pos, args, 1)?;
            factor(Factor::Gamma(linarg_of(eval(&args[0])?, args[0].1)?))
        }
        "sin" => {
            arity(name, pos, args, 1)?;
            let p = product_of(eval(&args[0])?, args[0].1)?;
            if p.factors != vec![(Factor::Pi, 1)] {
                return invalid(args[0].1, "sin takes an argument of the form pi*(x)");
            }
            let x = linarg_of(Value::Product(Product::scalar(p.coeff)), args[0].1)?;
            factor(Factor::Sin(x))
        }
        "pFq" => {
            arity(name, pos, args, 3)?;
            let list = |node: &(Node, usize)| -> Result<Vec<LinArg>, ParseError> {
                match eval(node)? {
                    Value::List(items) => items.into_iter().map(|(v, p)| linarg_of(v, p)).collect(),
                    _ => invalid(node.1, "expected a parameter list [..]"),
                }
            };
            let upper = list(&args[0])?;
            let lower = list(&args[1])?;
            let z = scalar_of(eval(&args[2])?, args[2].1)?;
            let Some(z) = z.as_constant() else {
                return invalid(args[2].1, "series argument must be a rational number");
            };
            if upper.iter().chain(&lower).any(|a| a.k_coeff() != 0) {
                return invalid(pos, "series parameters must not contain k");
            }
            let mut spec = SeriesSpec::new(upper, lower);
            spec.argument = z;
            Ok(Value::Series(spec))
        }
        _ => Err(ParseError::UnknownIdentifier { pos, name: name.into() }),
    }
}

/// A parsed term or series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Term(HyperTerm),
    Series(SeriesSpec),
}

pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let node = parse_tree(src)?;
    match eval(&node)? {
        Value::Series(s) => Ok(Expr::Series(s)),
        v => Ok(Expr::Term(term_of(product_of(v, node.1)?, node.1)?)),
    }
}

pub fn parse_series(src: &str) -> Result<SeriesSpec, ParseError> {
    match parse_expression(src)? {
        Expr::Series(s) => Ok(s),
        Expr::Term(_) => invalid(0, "expected pFq([..],[..],z)"),
    }
}

pub fn parse_term(src: &str) -> Result<HyperTerm, ParseError> {
    match parse_expression(src)? {
        Expr::Term(t) => Ok(t),
        Expr::Series(_) => invalid(0, "expected a term, found a series"),
    }
}

pub fn parse_ratfunc(src: &str) -> Result<RatFunc, ParseError> {
    let node = parse_tree(src)?;
    scalar_of(eval(&node)?, node.1)
}

pub fn parse_linarg(src: &str) -> Result<LinArg, ParseError> {
    let node = parse_tree(src)?;
    linarg_of(eval(&node)?, node.1)
}

pub fn parse_gamma_quotient(src: &str) -> Result<GammaQuotient, ParseError> {
    let node = parse_tree(src)?;
    let p = product_of(eval(&node)?, node.1)?;
    let pos = node.1;
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    let mut power = RatFunc::one();
    let mut pis = 0i64;
    let mut sines = Vec::new();
    let mut extra = GammaQuotient::one();
    for (f, e) in p.factors {
        let (list, count) = if e > 0 { (&mut numer, e) } else { (&mut denom, -e) };
        match f {
            Factor::Gamma(x) => list.extend(std::iter::repeat_n(x, count as usize)),
            Factor::Pow(z, Index::N) => power = &power * &z.pow(e as i32),
            Factor::Poch(x, Index::N) => {
                let q = GammaQuotient::poch_n(&x);
                for _ in 0..count {
                    extra = if e > 0 { extra.mul(&q) } else { extra.div(&q) };
                }
            }
            Factor::Pi => pis += e,
            Factor::Sin(x) if e < 0 => sines.extend(std::iter::repeat_n(x, count as usize)),
            other => return invalid(pos, format!("{other:?} is not allowed in a Gamma quotient")),
        }
    }
    if pis != sines.len() as i64 {
        return invalid(pos, "each pi must pair with one sin(pi*(x)) in the denominator");
    }
    let mut g = GammaQuotient::new(numer, denom, p.coeff).with_power(power);
    for z in sines {
        g = g.with_reflection(z);
    }
    Ok(if extra.is_one() { g } else { g.mul(&extra) })
}

fn term_of(p: Product, pos: usize) -> Result<HyperTerm, ParseError> {
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    let mut powers = Vec::new();
    for (f, e) in p.factors {
        let count = e.unsigned_abs() as usize;
        match f {
            Factor::Poch(x, idx) => {
                let list = if e > 0 { &mut numer } else { &mut denom };
                list.extend(std::iter::repeat_n(Poch::new(x, idx), count));
            }
            Factor::Pow(z, idx) => {
                let base = if let Some(q) = z.as_constant() {
                    Base::Rational(if e > 0 { q } else { q.recip() })
                } else if e > 0 && z.den().is_one() && z.num().len() == 1 && z.num().total_degree() == 1 && z.num().leading_coeff().is_one() {
                    Base::Param(z.num().variables()[0])
                } else {
                    return invalid(pos, "power base of a term must be a rational number or a parameter");
                };
                powers.extend(std::iter::repeat_n(Power { base, index: idx }, count));
            }
            other => return invalid(pos, format!("{other:?} is not allowed in a hypergeometric term")),
        }
    }
    Ok(HyperTerm::new(numer, denom, powers, p.coeff))
}

/// Parses `name=value` pairs such as `a=1/3, b=0.25+0.1i` into numeric assignments.
///
/// Values are kept as decimal strings for the multiprecision layer.
pub fn parse_assignment(src: &str) -> Result<Vec<(Var, String)>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in src.split(',') {
        let Some((name, value)) = part.split_once('=') else {
            return invalid(offset, "expected name=value");
        };
        let v = Var::param(name.trim()).map_err(|_| ParseError::UnknownIdentifier {
            pos: offset,
            name: name.trim().into(),
        })?;
        out.push((v, value.trim().to_string()));
        offset += part.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperterm::term_from_series;

    #[test]
    fn series_with_shifted_parameter() {
        let s = parse_series("pFq([a,b,c+n],[e,a+b+c-e+1+n],1)").unwrap();
        assert_eq!(s.upper.len(), 3);
        assert_eq!(s.lower[1].n_coeff(), 1);
        assert_eq!(parse_series(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn term_grammar() {
        let t = parse_term("poch(a,k)*poch(b,k)/(poch(c+n,k)*fac(k))").unwrap();
        let s = parse_series("pFq([a,b],[c+n],1)").unwrap();
        assert_eq!(t, term_from_series(&s).unwrap());
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn truncated_input_reports_position() {
        let err = parse_expression("poch(a,k)*").unwrap_err();
        assert_eq!(err.position(), 10);
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn arity_and_unknown_names() {
        assert!(matches!(parse_expression("poch(a)"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_expression("foo(a)"), Err(ParseError::UnknownIdentifier { .. })));
    }

    #[test]
    fn gamma_quotient_round_trip() {
        let g = parse_gamma_quotient("Gamma(e)*Gamma(e-a-b)/(Gamma(e-a)*Gamma(e-b))").unwrap();
        assert_eq!(g.numer().len(), 2);
        assert_eq!(parse_gamma_quotient(&g.to_string()).unwrap(), g);
        let r = parse_gamma_quotient("-2*pi*pow(-1,n)/((a+1)*sin(pi*(z)))").unwrap();
        assert_eq!(r.reflections().len(), 1);
        assert_eq!(parse_gamma_quotient(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn rational_functions() {
        let r = parse_ratfunc("k/(c+n-a-b)").unwrap();
        assert_eq!(parse_ratfunc(&r.to_string()).unwrap(), r);
        assert_eq!(r.to_string(), "-k/(a + b - c - n)");
    }
}
