use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::DivisorError;
use crate::exact::Rational;

/// How the weight `aᵢ` of the i-th point is produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientRule {
    /// `aᵢ = scale · ratioⁱ` with `0 < ratio < 1`.
    Geometric { scale: Rational, ratio: Rational },
    /// `aᵢ = 1/(i+1)`.
    Harmonic,
    /// `aᵢ` listed explicitly for `i < len`, zero afterwards.
    FiniteTable(Vec<Rational>),
    /// Sparse table; indices not present carry weight zero and no index
    /// exceeds `cutoff`.
    CustomTable {
        entries: BTreeMap<usize, Rational>,
        cutoff: usize,
    },
}

/// A maximal-or-not block of consecutive indices sharing one floor value.
///
/// Runs returned by [`CoefficientRule::floor_runs`] are sorted, disjoint and
/// carry positive values; indices not covered have floor zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorRun {
    pub start: usize,
    pub len: usize,
    pub value: BigInt,
}

impl FloorRun {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

impl CoefficientRule {
    pub fn chen() -> Self {
        CoefficientRule::Geometric {
            scale: Rational::one(),
            ratio: Rational::new(1.into(), 2.into()),
        }
    }

    pub fn validate(&self) -> Result<(), DivisorError> {
        match self {
            CoefficientRule::Geometric { scale, ratio } => {
                if !scale.is_positive() {
                    return Err(DivisorError::NonPositiveScale);
                }
                if !ratio.is_positive() || *ratio >= Rational::one() {
                    return Err(DivisorError::RatioOutOfRange);
                }
            }
            CoefficientRule::Harmonic => {}
            CoefficientRule::FiniteTable(coeffs) => {
                if let Some(index) = coeffs.iter().position(|c| !c.is_positive()) {
                    return Err(DivisorError::NonPositiveCoefficient { index });
                }
            }
            CoefficientRule::CustomTable { entries, cutoff } => {
                for (&index, c) in entries {
                    if index > *cutoff {
                        return Err(DivisorError::BeyondCutoff {
                            index,
                            cutoff: *cutoff,
                        });
                    }
                    if !c.is_positive() {
                        return Err(DivisorError::NonPositiveCoefficient { index });
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of indices that must be provided with points, or `None` when
    /// the support is infinite.
    pub fn finite_support_len(&self) -> Option<usize> {
        match self {
            CoefficientRule::Geometric { .. } | CoefficientRule::Harmonic => None,
            CoefficientRule::FiniteTable(c) => Some(c.len()),
            CoefficientRule::CustomTable { cutoff, .. } => Some(cutoff + 1),
        }
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        match self {
            CoefficientRule::Geometric { scale, ratio } => {
                scale * num_traits::pow(ratio.clone(), i)
            }
            CoefficientRule::Harmonic => Rational::new(BigInt::one(), BigInt::from(i) + 1),
            CoefficientRule::FiniteTable(c) => c.get(i).cloned().unwrap_or_else(Rational::zero),
            CoefficientRule::CustomTable { entries, .. } => {
                entries.get(&i).cloned().unwrap_or_else(Rational::zero)
            }
        }
    }

    /// `Σ aᵢ` when it is a finite rational; `None` for the harmonic rule.
    pub fn total_mass(&self) -> Option<Rational> {
        match self {
            CoefficientRule::Geometric { scale, ratio } => Some(scale / (Rational::one() - ratio)),
            CoefficientRule::Harmonic => None,
            CoefficientRule::FiniteTable(c) => Some(c.iter().sum()),
            CoefficientRule::CustomTable { entries, .. } => Some(entries.values().sum()),
        }
    }

    /// Exclusive index bound: every `i ≥ support_bound(n)` has `n·aᵢ < 1`,
    /// so `⌊n·aᵢ⌋ = 0` there.
    pub fn support_bound(&self, n: u64) -> usize {
        if n == 0 {
            return 0;
        }
        match self {
            CoefficientRule::Geometric { .. } => self.floor_runs(n).last().map_or(0, FloorRun::end),
            CoefficientRule::Harmonic => n as usize,
            CoefficientRule::FiniteTable(c) => c.len(),
            CoefficientRule::CustomTable { cutoff, .. } => cutoff + 1,
        }
    }

    /// The nonzero floors `⌊n·aᵢ⌋`, grouped into runs of equal value.
    ///
    /// Each floor is an exact big-integer division of `n·num` by `den`.
    pub fn floor_runs(&self, n: u64) -> Vec<FloorRun> {
        let mut runs = Vec::new();
        if n == 0 {
            return runs;
        }
        let n_big = BigInt::from(n);
        match self {
            CoefficientRule::Geometric { scale, ratio } => {
                let mut top = &n_big * scale.numer();
                let mut bottom = scale.denom().clone();
                let mut i = 0;
                while top >= bottom {
                    push_run(&mut runs, i, &top / &bottom);
                    top *= ratio.numer();
                    bottom *= ratio.denom();
                    i += 1;
                }
            }
            CoefficientRule::Harmonic => {
                // ⌊n/k⌋ is constant for k in [k, n / ⌊n/k⌋]
                let mut k = 1u64;
                while k <= n {
                    let q = n / k;
                    let last = n / q;
                    runs.push(FloorRun {
                        start: (k - 1) as usize,
                        len: (last - k + 1) as usize,
                        value: BigInt::from(q),
                    });
                    k = last + 1;
                }
            }
            CoefficientRule::FiniteTable(coeffs) => {
                for (i, c) in coeffs.iter().enumerate() {
                    push_run(&mut runs, i, floor_times(&n_big, c));
                }
            }
            CoefficientRule::CustomTable { entries, .. } => {
                for (&i, c) in entries {
                    push_run(&mut runs, i, floor_times(&n_big, c));
                }
            }
        }
        runs
    }
}

fn floor_times(n: &BigInt, c: &Rational) -> BigInt {
    // c > 0 and n ≥ 0, so truncating division is the floor
    (n * c.numer()) / c.denom()
}

fn push_run(runs: &mut Vec<FloorRun>, i: usize, value: BigInt) {
    if value.is_zero() {
        return;
    }
    if let Some(last) = runs.last_mut() {
        if last.end() == i && last.value == value {
            last.len += 1;
            return;
        }
    }
    runs.push(FloorRun {
        start: i,
        len: 1,
        value,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn dense(rule: &CoefficientRule, n: u64) -> Vec<i64> {
        let runs = rule.floor_runs(n);
        let len = runs.last().map_or(0, FloorRun::end);
        let mut out = vec![0; len];
        for r in runs {
            for slot in &mut out[r.start..r.end()] {
                *slot = i64::try_from(&r.value).unwrap();
            }
        }
        out
    }

    #[test]
    fn chen_floors() {
        assert_eq!(dense(&CoefficientRule::chen(), 5), vec![5, 2, 1]);
        assert_eq!(dense(&CoefficientRule::chen(), 8), vec![8, 4, 2, 1]);
        assert!(dense(&CoefficientRule::chen(), 0).is_empty());
    }

    #[test]
    fn harmonic_runs_match_direct_floors() {
        for n in 0..200u64 {
            let direct: Vec<i64> = (1..=n as i64).map(|k| n as i64 / k).collect();
            assert_eq!(dense(&CoefficientRule::Harmonic, n), direct, "n = {n}");
        }
        assert_eq!(dense(&CoefficientRule::Harmonic, 4), vec![4, 2, 1, 1]);
    }

    #[test]
    fn support_bound_contract() {
        let rules = [
            CoefficientRule::chen(),
            CoefficientRule::Geometric {
                scale: rat(7, 3),
                ratio: rat(2, 3),
            },
            CoefficientRule::Harmonic,
            CoefficientRule::FiniteTable(vec![int(1), rat(1, 2), rat(1, 4)]),
        ];
        for rule in &rules {
            for n in 1..300u64 {
                let bound = rule.support_bound(n);
                let threshold = Rational::new(1.into(), n.into());
                for i in bound..bound + 40 {
                    assert!(rule.coefficient(i) < threshold, "{rule:?} n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert_eq!(
            CoefficientRule::FiniteTable(vec![int(1), int(0)]).validate(),
            Err(DivisorError::NonPositiveCoefficient { index: 1 })
        );
        assert_eq!(
            CoefficientRule::Geometric {
                scale: int(1),
                ratio: int(1)
            }
            .validate(),
            Err(DivisorError::RatioOutOfRange)
        );
        assert_eq!(
            CoefficientRule::Geometric {
                scale: int(-1),
                ratio: rat(1, 2)
            }
            .validate(),
            Err(DivisorError::NonPositiveScale)
        );
        let custom = CoefficientRule::CustomTable {
            entries: [(5, int(1))].into_iter().collect(),
            cutoff: 4,
        };
        assert_eq!(
            custom.validate(),
            Err(DivisorError::BeyondCutoff {
                index: 5,
                cutoff: 4
            })
        );
    }

    #[test]
    fn masses() {
        assert_eq!(CoefficientRule::chen().total_mass(), Some(int(2)));
        assert_eq!(CoefficientRule::Harmonic.total_mass(), None);
        assert_eq!(
            CoefficientRule::FiniteTable(vec![int(1), rat(1, 2)]).total_mass(),
            Some(rat(3, 2))
        );
    }
}
