use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::rule::{CoefficientRule, FloorRun};
use super::{DivisorError, FiniteDivisor};
use crate::exact::{PointOrInfinity, Rational};

/// The points `zᵢ` carrying the weights of a formal divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointSet {
    /// `zᵢ = i`
    Integers,
    Explicit(Vec<Rational>),
}

impl PointSet {
    pub fn point(&self, i: usize) -> Option<Rational> {
        match self {
            PointSet::Integers => Some(Rational::from_integer(BigInt::from(i))),
            PointSet::Explicit(pts) => pts.get(i).cloned(),
        }
    }

    pub fn index_of(&self, q: &Rational) -> Option<usize> {
        match self {
            PointSet::Integers => {
                if q.is_integer() && !q.is_negative() {
                    q.to_integer().to_usize()
                } else {
                    None
                }
            }
            PointSet::Explicit(pts) => pts.iter().position(|p| p == q),
        }
    }

    /// Number of points, or `None` for an infinite generator.
    pub fn count(&self) -> Option<usize> {
        match self {
            PointSet::Integers => None,
            PointSet::Explicit(pts) => Some(pts.len()),
        }
    }
}

/// `D = Σ aᵢ[zᵢ]` over distinct points with positive weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalDivisor {
    points: PointSet,
    rule: CoefficientRule,
}

impl FormalDivisor {
    pub fn new(points: PointSet, rule: CoefficientRule) -> Result<Self, DivisorError> {
        rule.validate()?;
        if let PointSet::Explicit(pts) = &points {
            for (second, q) in pts.iter().enumerate() {
                if let Some(first) = pts[..second].iter().position(|p| p == q) {
                    return Err(DivisorError::DuplicatePoint { first, second });
                }
            }
        }
        match (rule.finite_support_len(), points.count()) {
            (None, Some(_)) => return Err(DivisorError::InfiniteSupportNeedsGenerator),
            (Some(needed), Some(available)) if needed > available => {
                return Err(DivisorError::NotEnoughPoints { needed, available })
            }
            _ => {}
        }
        Ok(FormalDivisor { points, rule })
    }

    /// Points `zᵢ = i` with weights `2⁻ⁱ`.
    pub fn chen() -> Self {
        Self::new(PointSet::Integers, CoefficientRule::chen()).expect("valid preset")
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn rule(&self) -> &CoefficientRule {
        &self.rule
    }

    pub fn point(&self, i: usize) -> Rational {
        self.points
            .point(i)
            .expect("index inside validated support")
    }

    /// Weight of `q` in `D`; zero off the support and at infinity.
    pub fn coefficient_at(&self, q: &PointOrInfinity) -> Rational {
        match q.finite().and_then(|q| self.points.index_of(q)) {
            Some(i) => self.rule.coefficient(i),
            None => Rational::zero(),
        }
    }

    pub fn floor_runs(&self, n: u64) -> Vec<FloorRun> {
        self.rule.floor_runs(n)
    }

    /// `⌊nD⌋`, scanning only indices below the rule's support bound.
    pub fn floor_divisor(&self, n: u64) -> FiniteDivisor {
        let mut div = FiniteDivisor::new();
        for run in self.floor_runs(n) {
            for i in run.start..run.end() {
                div.add_at(PointOrInfinity::Finite(self.point(i)), &run.value);
            }
        }
        div
    }

    /// The floors `⌊n·aᵢ⌋` as a dense vector indexed by `i`, up to the last
    /// nonzero entry. For the Chen weights this is the sequence `I(n)`.
    pub fn floor_vector(&self, n: u64) -> Vec<BigInt> {
        let runs = self.floor_runs(n);
        let mut out = vec![BigInt::zero(); runs.last().map_or(0, FloorRun::end)];
        for run in runs {
            for slot in &mut out[run.start..run.end()] {
                *slot = run.value.clone();
            }
        }
        out
    }

    /// `deg ⌊nD⌋`, the numerator degree bound of the n-th graded piece.
    pub fn degree_j(&self, n: u64) -> BigInt {
        self.floor_runs(n)
            .iter()
            .map(|r| &r.value * BigInt::from(r.len))
            .sum()
    }

    /// Number of points in the support of `⌊nD⌋`.
    pub fn support_size(&self, n: u64) -> usize {
        self.floor_runs(n).iter().map(|r| r.len).sum()
    }

    /// Whether `⌊nD⌋ + ⌊mD⌋ ≤ ⌊(n+m)D⌋` entrywise.
    pub fn check_superadditive(&self, n: u64, m: u64) -> bool {
        runs_superadditive(
            &self.floor_runs(n),
            &self.floor_runs(m),
            &self.floor_runs(n + m),
        )
    }
}

/// Entrywise `a + b ≤ c` on run-encoded floor vectors, in time linear in
/// the number of runs.
fn runs_superadditive(a: &[FloorRun], b: &[FloorRun], c: &[FloorRun]) -> bool {
    let mut cuts: Vec<usize> = [a, b, c]
        .iter()
        .flat_map(|rs| rs.iter().flat_map(|r| [r.start, r.end()]))
        .collect();
    cuts.sort_unstable();
    cuts.dedup();
    let mut cursors = [0usize; 3];
    let lists = [a, b, c];
    let zero = BigInt::zero();
    for &lo in &cuts {
        let mut vals = [&zero; 3];
        for (k, runs) in lists.iter().enumerate() {
            while cursors[k] < runs.len() && runs[cursors[k]].end() <= lo {
                cursors[k] += 1;
            }
            if let Some(r) = runs.get(cursors[k]) {
                if r.start <= lo {
                    vals[k] = &r.value;
                }
            }
        }
        if vals[0] + vals[1] > *vals[2] {
            return false;
        }
    }
    true
}
