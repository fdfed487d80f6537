use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactError, Rational};

/// Dense univariate polynomial over the rationals, lowest degree first.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient list and [`Polynomial::degree`] returns `None` for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| super::int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.push(c);
        Polynomial { coeffs }
    }

    /// The monic linear factor `x - q`.
    pub fn linear(q: &Rational) -> Self {
        Polynomial {
            coeffs: vec![-q.clone(), Rational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) if !lead.is_one() => self.scale(&lead.recip()),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), ExactError> {
        let d_deg = divisor.degree().ok_or(ExactError::DivisionByZero)?;
        let lead_inv = divisor.coeffs[d_deg].recip();
        let mut rem = self.coeffs.clone();
        let Some(s_deg) = self.degree().filter(|&s| s >= d_deg) else {
            return Ok((Polynomial::zero(), self.clone()));
        };
        let mut quot = vec![Rational::zero(); s_deg - d_deg + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d_deg] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(d_deg);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Quotient when `divisor` divides `self` exactly, `None` otherwise.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Option<Polynomial>, ExactError> {
        let (q, r) = self.divrem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Synthetic division by `x - q`: returns the quotient and `self(q)`.
    pub fn div_linear(&self, q: &Rational) -> (Polynomial, Rational) {
        let Some(deg) = self.degree() else {
            return (Polynomial::zero(), Rational::zero());
        };
        let mut quot = vec![Rational::zero(); deg];
        let mut carry = Rational::zero();
        for k in (0..=deg).rev() {
            carry = &carry * q + &self.coeffs[k];
            if k > 0 {
                quot[k - 1] = carry.clone();
            }
        }
        (Polynomial::new(quot), carry)
    }

    /// Multiplicity of `q` as a root. The zero polynomial has no finite
    /// multiplicity and is reported as `None`.
    pub fn root_multiplicity(&self, q: &Rational) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut count = 0;
        let mut cur = self.clone();
        loop {
            let (quot, rem) = cur.div_linear(q);
            if !rem.is_zero() {
                return Some(count);
            }
            count += 1;
            cur = quot;
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() {
                other.monic()
            } else {
                self.monic()
            };
        }
        if self.is_monomial() || other.is_monomial() {
            let k = self.low_order().min(other.low_order());
            return Polynomial::monomial(Rational::one(), k);
        }
        // primitive remainder sequence over the integers
        let mut a = primitive_part(&self.coeffs);
        let mut b = primitive_part(&other.coeffs);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            let r = primitive_part_int(pseudo_remainder(a, &b));
            a = b;
            b = r;
        }
        if b.is_empty() {
            Polynomial::new(a.into_iter().map(Rational::from_integer).collect()).monic()
        } else {
            Polynomial::one()
        }
    }

    fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }

    // multiplicity of 0 as a root
    fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }
}

fn primitive_part(coeffs: &[Rational]) -> Vec<BigInt> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive_part_int(
        coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect(),
    )
}

fn primitive_part_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in &mut v {
            *c /= &content;
        }
    }
    v
}

// lc(b)^k · a mod b, computed without fractions; `b` must be nonzero
fn pseudo_remainder(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    while a.len() > db {
        let top = a.len() - 1;
        let la = a[top].clone();
        let shift = top - db;
        for c in a.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            a[shift + j] -= &la * bc;
        }
        a.pop();
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
    }
    a
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    #[test]
    fn products() {
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 0, 1]));
        assert_eq!(&Polynomial::zero() * &p(&[2, 0, 0, 1]), Polynomial::zero());
        assert_eq!(p(&[2, 1]).pow(2), p(&[4, 4, 1]));
    }

    #[test]
    fn division_examples() {
        assert_eq!(
            p(&[-1, 0, 1]).divrem(&p(&[-1, 1])).unwrap(),
            (p(&[1, 1]), Polynomial::zero())
        );
        // x^2 = (x + 1)(x - 1) + 1
        assert_eq!(
            p(&[0, 0, 1]).divrem(&p(&[-1, 1])).unwrap(),
            (p(&[1, 1]), p(&[1]))
        );
        assert_eq!(
            p(&[1, 1]).divrem(&p(&[0, 0, 1])).unwrap(),
            (Polynomial::zero(), p(&[1, 1]))
        );
        assert_eq!(
            p(&[1, 1]).divrem(&Polynomial::zero()),
            Err(ExactError::DivisionByZero)
        );
    }

    #[test]
    fn zero_degree_is_sentinel() {
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(Polynomial::new(vec![int(0), int(0)]).degree(), None);
        assert_eq!(p(&[5]).degree(), Some(0));
    }

    #[test]
    fn synthetic_division_matches_eval() {
        let f = p(&[3, -2, 0, 1]);
        let q = rat(3, 2);
        let (quot, rem) = f.div_linear(&q);
        assert_eq!(rem, f.eval(&q));
        assert_eq!(
            &(&quot * &Polynomial::linear(&q)) + &Polynomial::constant(rem),
            f
        );
    }

    #[test]
    fn multiplicity_and_gcd() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[2, 1]);
        assert_eq!(f.root_multiplicity(&int(1)), Some(3));
        assert_eq!(f.root_multiplicity(&int(-2)), Some(1));
        assert_eq!(f.root_multiplicity(&int(0)), Some(0));
        let g = &p(&[-1, 1]).pow(2) * &p(&[5, 1]);
        assert_eq!(f.gcd(&g), p(&[-1, 1]).pow(2));
        assert_eq!(f.scale(&int(-3)).gcd(&Polynomial::zero()), f.monic());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(
            Polynomial::new(vec![rat(1, 2), int(-1)]).to_string(),
            "-x + (1/2)"
        );
        assert_eq!(Polynomial::zero().to_string(), "0");
    }
}
