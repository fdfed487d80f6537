use std::fmt;

use super::{format_rational, Rational};

/// A place of the projective line: a finite rational point or infinity.
///
/// Finite points order by value and all of them sort before infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointOrInfinity {
    Finite(Rational),
    Infinity,
}

impl PointOrInfinity {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            PointOrInfinity::Finite(q) => Some(q),
            PointOrInfinity::Infinity => None,
        }
    }

    /// Machine form: `"p/q"` for finite points, `"inf"` for infinity.
    pub fn to_exact_string(&self) -> String {
        match self {
            PointOrInfinity::Finite(q) => format_rational(q),
            PointOrInfinity::Infinity => "inf".to_string(),
        }
    }
}

impl From<Rational> for PointOrInfinity {
    fn from(q: Rational) -> Self {
        PointOrInfinity::Finite(q)
    }
}

impl fmt::Display for PointOrInfinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointOrInfinity::Finite(q) => write!(f, "{q}"),
            PointOrInfinity::Infinity => write!(f, "∞"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn infinity_sorts_last() {
        let mut pts = [
            PointOrInfinity::Infinity,
            PointOrInfinity::Finite(int(3)),
            PointOrInfinity::Finite(rat(-1, 2)),
        ];
        pts.sort();
        assert_eq!(pts[0], PointOrInfinity::Finite(rat(-1, 2)));
        assert_eq!(pts[2], PointOrInfinity::Infinity);
    }

    #[test]
    fn exact_value_equality() {
        assert_eq!(
            PointOrInfinity::Finite(rat(2, 4)),
            PointOrInfinity::Finite(rat(1, 2))
        );
    }
}
