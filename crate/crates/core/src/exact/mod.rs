//! Exact arithmetic over the rationals.
//!
//! Scalars are [`Rational`] (arbitrary precision, always reduced), polynomials
//! are dense in the monomial basis, and rational functions are kept with a
//! monic denominator coprime to the numerator. Nothing in here touches
//! floating point.

mod linalg;
mod point;
mod poly;
mod ratfunc;

pub use linalg::{rank_exact, EchelonBasis};
pub use point::PointOrInfinity;
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Reduced fraction of arbitrary-precision integers with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero function has no order")]
    ZeroHasNoOrder,
    #[error("factor {factor} does not split into rational linear factors")]
    NonSplitting { factor: String },
    #[error("coefficient {coefficient} is too large for a rational root search")]
    RootSearchTooLarge { coefficient: String },
    #[error("rows have different lengths ({expected} vs {found})")]
    RaggedRows { expected: usize, found: usize },
}

/// Parses `"p/q"`, `"-p/q"` or a bare integer into a reduced rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Renders a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("-2/4"), Some(rat(-1, 2)));
        assert_eq!(parse_rational(" 6 / -9 "), Some(rat(-2, 3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn format_keeps_denominator() {
        assert_eq!(format_rational(&int(2)), "2/1");
        assert_eq!(format_rational(&rat(15, 16)), "15/16");
        assert_eq!(format_rational(&rat(3, -6)), "-1/2");
    }
}
