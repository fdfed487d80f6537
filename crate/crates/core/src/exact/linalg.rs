use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactError, Rational};

/// Incrementally built row echelon form over the integers.
///
/// Rational rows are cleared of denominators on insertion and every stored
/// row is kept primitive (content 1, positive leading entry), so elimination
/// stays fraction free and entries do not blow up across insertions.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    width: Option<usize>,
    // (pivot column, row), sorted by pivot column
    pivots: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `row` to the span. Returns `true` when it was independent of the
    /// rows seen so far.
    pub fn insert(&mut self, row: &[Rational]) -> Result<bool, ExactError> {
        match self.width {
            None => self.width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(ExactError::RaggedRows {
                    expected: w,
                    found: row.len(),
                })
            }
            Some(_) => {}
        }
        let mut cur = clear_denominators(row);
        loop {
            let Some(lead) = cur.iter().position(|c| !c.is_zero()) else {
                return Ok(false);
            };
            match self.pivots.binary_search_by_key(&lead, |(c, _)| *c) {
                Ok(idx) => {
                    let pivot = &self.pivots[idx].1;
                    let a = pivot[lead].clone();
                    let b = cur[lead].clone();
                    for (x, y) in cur.iter_mut().zip(pivot).skip(lead) {
                        *x = &*x * &a - y * &b;
                    }
                    make_primitive(&mut cur);
                }
                Err(idx) => {
                    make_primitive(&mut cur);
                    self.pivots.insert(idx, (lead, cur));
                    return Ok(true);
                }
            }
        }
    }
}

/// Rank over the rationals, computed without rounding.
pub fn rank_exact(rows: &[Vec<Rational>]) -> Result<usize, ExactError> {
    let mut basis = EchelonBasis::new();
    for row in rows {
        basis.insert(row)?;
        if Some(basis.rank()) == basis.width {
            break;
        }
    }
    Ok(basis.rank())
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lead_negative = row
        .iter()
        .find(|c| !c.is_zero())
        .is_some_and(|c| c.is_negative());
    if g.is_zero() {
        return;
    }
    let g = if lead_negative { -g } else { g };
    if !g.is_one() {
        for c in row.iter_mut() {
            *c = &*c / &g;
        }
    }
}
