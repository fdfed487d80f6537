//! Brute-force checks of the closed forms used by the series engine.
//!
//! Everything in here works with explicit bases of the graded pieces
//! `Bₙ = { Q / Pₙ : deg Q ≤ J(n) }`, where `Pₙ = Π (x - zᵢ)^⌊n·aᵢ⌋`, and
//! computes dimensions as exact ranks of numerator coefficient vectors.
//! Sizes are bounded by [`OracleConfig::cap`].

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::divisor::FormalDivisor;
use crate::exact::{
    EchelonBasis, ExactError, PointOrInfinity, Polynomial, Rational, RationalFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest graded level the oracle will expand.
    pub cap: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { cap: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("level {level} exceeds the oracle cap {cap}")]
    CapExceeded { level: u64, cap: u64 },
    #[error("P_{pn} is not divisible by P_{p}^{n}: superadditivity is broken", pn = .p * .n)]
    InexactDivision { p: u64, n: u64 },
    #[error("basis element {element} does not lie in piece {level}")]
    NotInPiece { element: String, level: u64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The basis `xʲ/Pₙ`, `0 ≤ j ≤ J(n)`, of the n-th graded piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitBasis {
    pub level: u64,
    pub pole_poly: Polynomial,
    pub elements: Vec<RationalFunction>,
}

/// `Pₙ = Π (x - zᵢ)^⌊n·aᵢ⌋` over the support of `⌊nD⌋`.
pub fn pole_polynomial(divisor: &FormalDivisor, n: u64) -> Polynomial {
    let mut acc = Polynomial::one();
    for run in divisor.floor_runs(n) {
        let exp = run.value.to_u64().expect("floor exponent fits in u64");
        for i in run.start..run.end() {
            acc = &acc * &Polynomial::linear(&divisor.point(i)).pow(exp);
        }
    }
    acc
}

pub fn explicit_basis(
    divisor: &FormalDivisor,
    n: u64,
    config: &OracleConfig,
) -> Result<ExplicitBasis, OracleError> {
    check_cap(n, config)?;
    let pole_poly = pole_polynomial(divisor, n);
    let top = degree_bound(divisor, n);
    let elements = (0..=top)
        .map(|j| RationalFunction::new(Polynomial::monomial(Rational::one(), j), pole_poly.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExplicitBasis {
        level: n,
        pole_poly,
        elements,
    })
}

/// Dimension of the n-th piece as the rank of its basis numerators.
pub fn oracle_dim(
    divisor: &FormalDivisor,
    n: u64,
    config: &OracleConfig,
) -> Result<usize, OracleError> {
    let basis = explicit_basis(divisor, n, config)?;
    let width = degree_bound(divisor, n) + 1;
    let mut span = EchelonBasis::new();
    for f in &basis.elements {
        let num = numerator_in_piece(f, &basis.pole_poly, n)?;
        span.insert(&coefficient_vector(&num, width, n, || f.to_string())?)?;
    }
    Ok(span.rank())
}

/// Dimension of the image of `Symⁿ(B_p)` in `B_{np}`, from all n-fold
/// products of basis elements of piece `p`.
pub fn oracle_image_dim(
    divisor: &FormalDivisor,
    p: u64,
    n: u64,
    config: &OracleConfig,
) -> Result<usize, OracleError> {
    check_cap(p * n, config)?;
    let basis = explicit_basis(
        divisor,
        p,
        &OracleConfig {
            cap: config.cap.max(p),
        },
    )?;
    let nums = basis
        .elements
        .iter()
        .map(|f| numerator_in_piece(f, &basis.pole_poly, p))
        .collect::<Result<Vec<_>, _>>()?;

    // Qᵢ/P_p · ... · Qₖ/P_p = (Π Qᵢ · P_{np}/P_pⁿ) / P_{np}
    let target_pole = pole_polynomial(divisor, p * n);
    let rescale = target_pole
        .exact_div(&basis.pole_poly.pow(n))?
        .ok_or(OracleError::InexactDivision { p, n })?;

    let mut products = HashSet::new();
    multiset_products(&nums, 0, n, Polynomial::one(), &mut products);
    let mut products: Vec<Polynomial> = products.into_iter().collect();
    products.sort_by_key(|q| q.degree());

    let width = degree_bound(divisor, p * n) + 1;
    let mut span = EchelonBasis::new();
    for q in products {
        let num = &q * &rescale;
        span.insert(&coefficient_vector(&num, width, p * n, || {
            format!("({num}) / P_{}", p * n)
        })?)?;
    }
    Ok(span.rank())
}

/// Whether `f·Pₙ` is a polynomial of degree at most `J(n)`.
pub fn membership(f: &RationalFunction, divisor: &FormalDivisor, n: u64) -> bool {
    if f.is_zero() {
        return true;
    }
    let pole = pole_polynomial(divisor, n);
    match numerator_in_piece(f, &pole, n) {
        Ok(num) => num.degree().is_some_and(|d| d <= degree_bound(divisor, n)),
        Err(_) => false,
    }
}

/// Minimum of `ord_q` over the basis of piece `n`, at every support point of
/// `⌊nD⌋` and at infinity.
pub fn min_orders(
    divisor: &FormalDivisor,
    n: u64,
    config: &OracleConfig,
) -> Result<BTreeMap<PointOrInfinity, i64>, OracleError> {
    let basis = explicit_basis(divisor, n, config)?;
    let places = divisor
        .floor_divisor(n)
        .support()
        .cloned()
        .chain([PointOrInfinity::Infinity])
        .collect::<Vec<_>>();
    let mut out = BTreeMap::new();
    for q in places {
        let mut best: Option<i64> = None;
        for f in &basis.elements {
            let ord = f.ord_at(&q)?;
            best = Some(best.map_or(ord, |b| b.min(ord)));
        }
        out.insert(q, best.expect("basis is never empty"));
    }
    Ok(out)
}

fn check_cap(level: u64, config: &OracleConfig) -> Result<(), OracleError> {
    if level > config.cap {
        return Err(OracleError::CapExceeded {
            level,
            cap: config.cap,
        });
    }
    Ok(())
}

fn degree_bound(divisor: &FormalDivisor, n: u64) -> usize {
    divisor
        .degree_j(n)
        .to_usize()
        .expect("oracle sizes fit in usize")
}

/// `f·Pₙ`, which must be a polynomial for `f` to lie in piece `n`.
fn numerator_in_piece(
    f: &RationalFunction,
    pole: &Polynomial,
    n: u64,
) -> Result<Polynomial, OracleError> {
    let cofactor = pole
        .exact_div(f.denominator())?
        .ok_or_else(|| OracleError::NotInPiece {
            element: f.to_string(),
            level: n,
        })?;
    Ok(f.numerator() * &cofactor)
}

fn coefficient_vector(
    num: &Polynomial,
    width: usize,
    n: u64,
    describe: impl FnOnce() -> String,
) -> Result<Vec<Rational>, OracleError> {
    if num.degree().is_some_and(|d| d >= width) {
        return Err(OracleError::NotInPiece {
            element: describe(),
            level: n,
        });
    }
    let mut row = num.coeffs().to_vec();
    row.resize(width, Rational::zero());
    Ok(row)
}

// Products over multisets (combinations with repetition) of `factors`.
fn multiset_products(
    factors: &[Polynomial],
    start: usize,
    remaining: u64,
    prefix: Polynomial,
    out: &mut HashSet<Polynomial>,
) {
    if remaining == 0 {
        out.insert(prefix);
        return;
    }
    for i in start..factors.len() {
        multiset_products(factors, i, remaining - 1, &prefix * &factors[i], out);
    }
}
