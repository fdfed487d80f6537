use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactError, PointOrInfinity, Polynomial, Rational};
use crate::divisor::FiniteDivisor;

/// Quotient of two polynomials in lowest terms with a monic denominator.
///
/// Zero is stored as `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g)?;
        let (den, _) = den.divrem(&g)?;
        let lead = den.leading().expect("nonzero").recip();
        Ok(RationalFunction {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, exp: u64) -> Self {
        RationalFunction {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    /// Order of vanishing at `q`: positive for zeros, negative for poles.
    pub fn ord_at(&self, q: &PointOrInfinity) -> Result<i64, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroHasNoOrder);
        }
        Ok(match q {
            PointOrInfinity::Finite(q) => {
                let up = self.num.root_multiplicity(q).expect("nonzero") as i64;
                let down = self.den.root_multiplicity(q).expect("nonzero") as i64;
                up - down
            }
            PointOrInfinity::Infinity => {
                self.den.degree().expect("nonzero") as i64
                    - self.num.degree().expect("nonzero") as i64
            }
        })
    }

    /// Divisor of zeros and poles, including the place at infinity.
    ///
    /// `hints` are tried first as candidate roots; whatever is left over is
    /// searched for rational roots. A factor without rational roots is an
    /// error, never an approximation.
    pub fn principal_divisor(&self, hints: &[Rational]) -> Result<FiniteDivisor, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroHasNoOrder);
        }
        let mut div = FiniteDivisor::new();
        for (poly, sign) in [(&self.num, 1i64), (&self.den, -1i64)] {
            for (root, mult) in split_linear(poly, hints)? {
                div.add_at(
                    PointOrInfinity::Finite(root),
                    &BigInt::from(sign * mult as i64),
                );
            }
        }
        div.add_at(
            PointOrInfinity::Infinity,
            &BigInt::from(self.ord_at(&PointOrInfinity::Infinity)?),
        );
        Ok(div)
    }
}

/// Roots with multiplicity of a polynomial that splits into rational linear
/// factors.
fn split_linear(poly: &Polynomial, hints: &[Rational]) -> Result<Vec<(Rational, u64)>, ExactError> {
    let mut rest = poly.clone();
    let mut roots = Vec::new();
    let strip = |rest: &mut Polynomial, q: &Rational, roots: &mut Vec<(Rational, u64)>| {
        let mut mult = 0;
        loop {
            let (quot, rem) = rest.div_linear(q);
            if !rem.is_zero() {
                break;
            }
            *rest = quot;
            mult += 1;
        }
        if mult > 0 {
            roots.push((q.clone(), mult));
        }
    };
    for q in hints {
        if rest.is_constant() {
            break;
        }
        strip(&mut rest, q, &mut roots);
    }
    while !rest.is_constant() {
        match rational_root(&rest)? {
            Some(q) => strip(&mut rest, &q, &mut roots),
            None => {
                return Err(ExactError::NonSplitting {
                    factor: rest.monic().to_string(),
                })
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// Some rational root of a non-constant polynomial, by the rational root test
/// on its integer primitive form.
fn rational_root(poly: &Polynomial) -> Result<Option<Rational>, ExactError> {
    let zero = Rational::zero();
    if poly.coeff(0).is_zero() {
        return Ok(Some(zero));
    }
    let lcm = poly
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = poly
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let constant = divisors(&ints[0])?;
    let leading = divisors(ints.last().expect("non-constant"))?;
    for p in &constant {
        for q in &leading {
            for sign in [1i64, -1] {
                let cand = Rational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                if poly.eval(&cand).is_zero() {
                    return Ok(Some(cand));
                }
            }
        }
    }
    Ok(None)
}

// Positive divisors by trial division; coefficients past 2^64 are refused.
fn divisors(n: &BigInt) -> Result<Vec<u64>, ExactError> {
    let n = n
        .abs()
        .to_u64()
        .ok_or_else(|| ExactError::RootSearchTooLarge {
            coefficient: n.to_string(),
        })?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
