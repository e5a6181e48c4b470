//! Exact creative telescoping for hypergeometric terms, Gamma-ratio
//! asymptotics for nonterminating sums, and multiprecision identity checks.

pub mod asymptotics;
pub mod corpus;
pub mod gamma;
pub mod hyperterm;
pub mod linarg;
pub mod linsolve;
pub mod numeric;
pub mod parse;
pub mod pipeline;
pub mod poly;
pub mod proof;
pub mod ratfunc;
pub mod symbol;
pub mod telescoper;

/// Exact rational coefficients.
pub type Q = num_rational::BigRational;
