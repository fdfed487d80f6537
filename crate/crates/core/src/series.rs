//! Closed forms for the graded series `B = ⊕ Bₙ`, `Bₙ = L(⌊nD⌋)`.
//!
//! On the projective line the piece `Bₙ` has dimension `J(n) + 1` where
//! `J(n) = deg ⌊nD⌋`, and the image of `Symⁿ(B_p)` in `B_{np}` is the full
//! space attached to `n·⌊pD⌋`, of dimension `n·J(p) + 1`. Both facts are
//! cross-checked by [`crate::oracle`].
//!
//! Sweeps over `n` run on the ambient rayon pool; results are always
//! assembled in ascending order, so output does not depend on the pool size.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::divisor::FormalDivisor;
use crate::exact::{ExactError, PointOrInfinity, Rational, RationalFunction};
use crate::oracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("marked element {element} is not a member of graded piece 1")]
    NotInPieceOne { element: String },
    #[error("marked element must be nonzero")]
    ZeroMarkedElement,
    #[error("deficiency bound needs p >= 2, got {p}")]
    DeficiencyDomain { p: u64 },
    #[error("logarithmic bound at p = {p} could not be decided within the refinement budget")]
    Undecided { p: u64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A graded series together with a marked element `b₁ ∈ B₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    divisor: FormalDivisor,
    marked_b1: RationalFunction,
    b1_orders: MarkedOrders,
}

// Orders of b₁, split by where the place lives relative to the point set of D.
#[derive(Debug, Clone, PartialEq, Eq)]
struct MarkedOrders {
    indexed: BTreeMap<usize, i64>,
    extra: Vec<(Rational, i64)>,
    infinity: i64,
}

// Place keys used while sweeping; cheaper to compare than rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Place {
    Indexed(usize),
    Extra(usize),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateEntry {
    pub p: u64,
    pub min_ratio: Rational,
    /// Smallest `n` attaining `min_ratio`.
    pub argmin_n: u64,
    pub passes: bool,
    /// `vol(D)·p - J(p)` when `Σ aᵢ` is finite; `2p - J(p)` for the Chen weights.
    pub deficiency: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every sampled `p ≥ p0` kept all its sampled ratios above `1 - ε`.
    CertifiedUpToSamples { p0: u64 },
    /// The largest sampled `p` fell to or below `1 - ε`; `(p, n)` is the
    /// worst sampled witness. This is a sampled refutation, not a proof.
    RefutedAt { p: u64, n: u64, ratio: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub epsilon: Rational,
    pub n_max: u64,
    pub entries: Vec<CertificateEntry>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportGrowth {
    /// `(n, |⋃_{k ≤ n} negative-valuation support at level k|)`
    pub counts: Vec<(u64, usize)>,
    /// Each place of the cumulative set with the first level it shows up at.
    pub first_seen: Vec<(u64, PointOrInfinity)>,
}

impl SupportGrowth {
    pub fn final_count(&self) -> usize {
        self.counts.last().map_or(0, |&(_, c)| c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyCheck {
    pub p: u64,
    /// `2p - J(p)`
    pub deficiency: u64,
    /// `⌊log₂ p⌋ + 2`
    pub tight_bound: u64,
    pub within_tight_bound: bool,
    /// Whether `2p - J(p) ≤ log₂ p + 2p / log₂ p`, decided exactly.
    pub within_log_bound: bool,
}

impl GradedSeries {
    pub fn new(divisor: FormalDivisor, marked_b1: RationalFunction) -> Result<Self, SeriesError> {
        if marked_b1.is_zero() {
            return Err(SeriesError::ZeroMarkedElement);
        }
        if !oracle::membership(&marked_b1, &divisor, 1) {
            return Err(SeriesError::NotInPieceOne {
                element: marked_b1.to_string(),
            });
        }
        let hints: Vec<Rational> = divisor
            .floor_divisor(1)
            .support()
            .filter_map(|q| q.finite().cloned())
            .collect();
        let principal = marked_b1.principal_divisor(&hints)?;
        let mut b1_orders = MarkedOrders {
            indexed: BTreeMap::new(),
            extra: Vec::new(),
            infinity: 0,
        };
        for (q, ord) in principal.iter() {
            let ord = ord.to_i64().expect("order bounded by degree");
            match q {
                PointOrInfinity::Infinity => b1_orders.infinity = ord,
                PointOrInfinity::Finite(z) => match divisor.points().index_of(z) {
                    Some(i) => {
                        b1_orders.indexed.insert(i, ord);
                    }
                    None => b1_orders.extra.push((z.clone(), ord)),
                },
            }
        }
        Ok(GradedSeries {
            divisor,
            marked_b1,
            b1_orders,
        })
    }

    /// The series with `b₁ = 1`, which lies in `B₁` for every positive `D`.
    pub fn with_unit(divisor: FormalDivisor) -> Self {
        Self::new(divisor, RationalFunction::one()).expect("1 lies in every first piece")
    }

    pub fn divisor(&self) -> &FormalDivisor {
        &self.divisor
    }

    pub fn marked_b1(&self) -> &RationalFunction {
        &self.marked_b1
    }

    /// `dim Bₙ = J(n) + 1`
    pub fn dim_piece(&self, n: u64) -> BigInt {
        self.divisor.degree_j(n) + 1
    }

    /// `dim Im(Symⁿ B_p → B_{np}) = n·J(p) + 1`
    pub fn image_dim(&self, p: u64, n: u64) -> BigInt {
        self.divisor.degree_j(p) * BigInt::from(n) + 1
    }

    /// `(n·J(p) + 1) / (J(np) + 1)`, in `(0, 1]` by superadditivity.
    pub fn approx_ratio(&self, p: u64, n: u64) -> Rational {
        Rational::new(self.image_dim(p, n), self.dim_piece(p * n))
    }

    /// Samples condition 3 of approximability: for each `p`, the minimum of
    /// the ratio over `1 ≤ n ≤ n_max` is compared against `1 - ε`.
    ///
    /// `p_list` is sorted and deduplicated before sampling.
    pub fn certify_approximable(
        &self,
        epsilon: &Rational,
        p_list: &[u64],
        n_max: u64,
    ) -> CertificateReport {
        assert!(
            !p_list.is_empty() && n_max >= 1,
            "need at least one p and n_max >= 1"
        );
        let mut ps = p_list.to_vec();
        ps.sort_unstable();
        ps.dedup();
        let threshold = Rational::one() - epsilon;
        let mass = self.divisor.rule().total_mass();

        let entries: Vec<CertificateEntry> = ps
            .iter()
            .map(|&p| {
                let ratios: Vec<Rational> = (1..=n_max)
                    .into_par_iter()
                    .map(|n| self.approx_ratio(p, n))
                    .collect();
                let (idx, min_ratio) = ratios
                    .into_iter()
                    .enumerate()
                    .reduce(|best, cur| if cur.1 < best.1 { cur } else { best })
                    .expect("n_max >= 1");
                CertificateEntry {
                    p,
                    passes: min_ratio > threshold,
                    min_ratio,
                    argmin_n: idx as u64 + 1,
                    deficiency: mass.as_ref().map(|m| {
                        m * Rational::from_integer(p.into())
                            - Rational::from_integer(self.divisor.degree_j(p))
                    }),
                }
            })
            .collect();

        let verdict = if entries.last().expect("nonempty").passes {
            let first_tail = entries.iter().rposition(|e| !e.passes).map_or(0, |i| i + 1);
            Verdict::CertifiedUpToSamples {
                p0: entries[first_tail].p,
            }
        } else {
            let worst = entries
                .iter()
                .filter(|e| !e.passes)
                .reduce(|best, cur| {
                    if cur.min_ratio < best.min_ratio {
                        cur
                    } else {
                        best
                    }
                })
                .expect("the last entry fails");
            Verdict::RefutedAt {
                p: worst.p,
                n: worst.argmin_n,
                ratio: worst.min_ratio.clone(),
            }
        };

        CertificateReport {
            epsilon: epsilon.clone(),
            n_max,
            entries,
            verdict,
        }
    }

    /// `dim Bₙ / n` at each sample, approximating the one-dimensional volume.
    pub fn volume_sequence(&self, samples: &[u64]) -> Vec<(u64, Rational)> {
        assert!(
            samples.iter().all(|&n| n >= 1),
            "volume samples start at n = 1"
        );
        samples
            .par_iter()
            .map(|&n| (n, Rational::new(self.dim_piece(n), BigInt::from(n))))
            .collect()
    }

    /// Places `q` where some `b ∈ Bₙ` has `ord_q(b / b₁ⁿ) < 0`.
    ///
    /// The minimal order of `Bₙ` is `-⌊n·a_q⌋` at a finite `q` and `0` at
    /// infinity, so `q` qualifies iff `⌊n·a_q⌋ + n·ord_q(b₁) > 0`.
    pub fn neg_valuation_support(&self, n: u64) -> BTreeSet<PointOrInfinity> {
        self.negative_places(n)
            .into_iter()
            .map(|p| self.place_point(p))
            .collect()
    }

    /// Cumulative size of the negative-valuation support for `n ≤ n_max`.
    pub fn support_growth(&self, n_max: u64) -> SupportGrowth {
        const BLOCK: u64 = 4096;
        let mut seen = BTreeSet::new();
        let mut counts = Vec::with_capacity(n_max as usize);
        let mut first_seen = Vec::new();
        let mut lo = 1;
        while lo <= n_max {
            let hi = (lo + BLOCK - 1).min(n_max);
            let levels: Vec<Vec<Place>> = (lo..=hi)
                .into_par_iter()
                .map(|n| self.negative_places(n))
                .collect();
            for (n, places) in (lo..=hi).zip(levels) {
                for place in places {
                    if seen.insert(place) {
                        first_seen.push((n, self.place_point(place)));
                    }
                }
                counts.push((n, seen.len()));
            }
            lo = hi + 1;
        }
        SupportGrowth { counts, first_seen }
    }

    fn negative_places(&self, n: u64) -> Vec<Place> {
        let orders = &self.b1_orders;
        let scaled = BigInt::from(n);
        let runs = self.divisor.floor_runs(n);
        let mut out = Vec::new();
        for run in &runs {
            for i in run.start..run.end() {
                let ord = orders.indexed.get(&i).copied().unwrap_or(0);
                if ord >= 0 || &run.value + &scaled * ord > BigInt::zero() {
                    out.push(Place::Indexed(i));
                }
            }
        }
        for (&i, &ord) in &orders.indexed {
            let covered = runs.iter().any(|r| r.start <= i && i < r.end());
            if !covered && ord > 0 && n > 0 {
                out.push(Place::Indexed(i));
            }
        }
        for (k, (_, ord)) in orders.extra.iter().enumerate() {
            if *ord > 0 && n > 0 {
                out.push(Place::Extra(k));
            }
        }
        if orders.infinity > 0 && n > 0 {
            out.push(Place::Infinity);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn place_point(&self, place: Place) -> PointOrInfinity {
        match place {
            Place::Indexed(i) => PointOrInfinity::Finite(self.divisor.point(i)),
            Place::Extra(k) => PointOrInfinity::Finite(self.b1_orders.extra[k].0.clone()),
            Place::Infinity => PointOrInfinity::Infinity,
        }
    }
}

/// `2p - J(p)` for the Chen weights, checked against `⌊log₂ p⌋ + 2` and
/// against `log₂ p + 2p / log₂ p`.
///
/// The logarithmic bound is irrational in general; it is decided by
/// bracketing `log₂ p` between dyadic rationals using exact comparisons
/// `p^b ≥ 2^a`.
pub fn deficiency_check(p: u64) -> Result<DeficiencyCheck, SeriesError> {
    if p < 2 {
        return Err(SeriesError::DeficiencyDomain { p });
    }
    let j = FormalDivisor::chen()
        .degree_j(p)
        .to_u64()
        .expect("J(p) <= 2p");
    let deficiency = 2 * p - j;
    let log_floor = u64::from(63 - p.leading_zeros());
    let tight_bound = log_floor + 2;
    let within_log_bound =
        below_log_bound(deficiency, p, log_floor).ok_or(SeriesError::Undecided { p })?;
    Ok(DeficiencyCheck {
        p,
        deficiency,
        tight_bound,
        within_tight_bound: deficiency <= tight_bound,
        within_log_bound,
    })
}

// Decides d ≤ L + 2p/L for L = log₂ p, or None if 12 bisection steps do
// not separate them.
fn below_log_bound(d: u64, p: u64, log_floor: u64) -> Option<bool> {
    let d = Rational::from_integer(d.into());
    let twice_p = Rational::from_integer((2 * p).into());
    let exact = p.is_power_of_two();
    let mut lo = Rational::from_integer(log_floor.into());
    let mut hi = if exact {
        lo.clone()
    } else {
        Rational::from_integer((log_floor + 1).into())
    };
    let p_big = BigInt::from(p);
    for _ in 0..=12 {
        // L + 2p/L over [lo, hi] lies between lo + 2p/hi and hi + 2p/lo
        let lower = &lo + &twice_p / &hi;
        let upper = &hi + &twice_p / &lo;
        if d <= lower {
            return Some(true);
        }
        if d > upper {
            return Some(false);
        }
        if lo == hi {
            return None;
        }
        let mid: Rational = (&lo + &hi) / Rational::from_integer(2.into());
        // mid = a/b, and log₂ p ≥ a/b iff p^b ≥ 2^a
        let b = mid.denom().to_u32()?;
        let a = mid.numer().to_u64()?;
        if num_traits::pow(p_big.clone(), b as usize) >= BigInt::one() << a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{CoefficientRule, PointSet};
    use crate::exact::{int, rat, Polynomial};

    fn chen() -> GradedSeries {
        GradedSeries::with_unit(FormalDivisor::chen())
    }

    fn harmonic() -> GradedSeries {
        GradedSeries::with_unit(
            FormalDivisor::new(PointSet::Integers, CoefficientRule::Harmonic).unwrap(),
        )
    }

    fn finite(d: i64) -> GradedSeries {
        GradedSeries::with_unit(
            FormalDivisor::new(
                PointSet::Explicit(vec![int(0)]),
                CoefficientRule::FiniteTable(vec![int(d)]),
            )
            .unwrap(),
        )
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn dims() {
        assert_eq!(chen().dim_piece(1), big(2));
        assert_eq!(chen().dim_piece(0), big(1));
        assert_eq!(harmonic().dim_piece(0), big(1));
        assert_eq!(chen().dim_piece(8), big(16));
        assert_eq!(chen().image_dim(4, 2), big(15));
        assert_eq!(chen().image_dim(6, 1), chen().dim_piece(6));
        assert_eq!(harmonic().image_dim(4, 2), big(17));
    }

    #[test]
    fn ratios() {
        assert_eq!(chen().approx_ratio(4, 2), rat(15, 16));
        assert_eq!(chen().approx_ratio(1, 1), int(1));
        // Σ_{k ≤ 256} ⌊256/k⌋ = 1466
        assert_eq!(harmonic().approx_ratio(4, 64), rat(513, 1467));
        assert!(harmonic().approx_ratio(4, 64) < rat(1, 2));
    }

    #[test]
    fn certificates() {
        let report = chen().certify_approximable(&rat(1, 16), &[16, 32, 64], 1000);
        assert_eq!(report.verdict, Verdict::CertifiedUpToSamples { p0: 16 });
        assert!(report.entries[0].min_ratio >= rat(31, 32));
        assert_eq!(report.entries[0].deficiency, Some(int(1)));

        let report = chen().certify_approximable(&rat(1, 2), &[1], 10);
        assert!(matches!(
            report.verdict,
            Verdict::CertifiedUpToSamples { p0: 1 }
        ));

        let report = harmonic().certify_approximable(&rat(1, 2), &[4], 64);
        assert_eq!(
            report.verdict,
            Verdict::RefutedAt {
                p: 4,
                n: 64,
                ratio: rat(513, 1467)
            }
        );
        assert_eq!(report.entries[0].deficiency, None);
    }

    #[test]
    fn certificate_tail_rule() {
        // with ε = 1/16, p = 1 fails (ratio (n+1)/(J(n)+1) drops near 1/2) but
        // p = 16 and p = 32 pass, so the certified tail starts at 16
        let report = chen().certify_approximable(&rat(1, 16), &[32, 1, 16, 16], 50);
        assert_eq!(report.entries.len(), 3);
        assert!(!report.entries[0].passes);
        assert_eq!(report.verdict, Verdict::CertifiedUpToSamples { p0: 16 });
        // both fail; the witness is the worst sampled pair among them
        let report = chen().certify_approximable(&rat(1, 16), &[2, 1], 50);
        let worst = report
            .entries
            .iter()
            .map(|e| e.min_ratio.clone())
            .min()
            .unwrap();
        match report.verdict {
            Verdict::RefutedAt { ratio, .. } => assert_eq!(ratio, worst),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deficiency_examples() {
        let c = deficiency_check(8).unwrap();
        assert_eq!((c.deficiency, c.tight_bound), (1, 5));
        assert!(c.within_tight_bound && c.within_log_bound);
        let c = deficiency_check(100).unwrap();
        assert_eq!((c.deficiency, c.tight_bound), (3, 8));
        assert!(c.within_tight_bound && c.within_log_bound);
        for k in 1..40 {
            assert_eq!(deficiency_check(1 << k).unwrap().deficiency, 1);
        }
        assert_eq!(
            deficiency_check(1),
            Err(SeriesError::DeficiencyDomain { p: 1 })
        );
    }

    #[test]
    fn log_bound_decides_both_ways() {
        // p = 3: log₂ 3 + 6/log₂ 3 ≈ 5.37
        assert_eq!(below_log_bound(5, 3, 1), Some(true));
        assert_eq!(below_log_bound(6, 3, 1), Some(false));
        // p = 4: exactly 2 + 8/2 = 6
        assert_eq!(below_log_bound(6, 4, 2), Some(true));
        assert_eq!(below_log_bound(7, 4, 2), Some(false));
    }

    #[test]
    fn volumes() {
        assert_eq!(chen().volume_sequence(&[1024]), vec![(1024, int(2))]);
        assert_eq!(chen().volume_sequence(&[3]), vec![(3, rat(5, 3))]);
        for n in 1..20 {
            assert_eq!(
                finite(2).volume_sequence(&[n]),
                vec![(n, rat(2 * n as i64 + 1, n as i64))]
            );
        }
    }

    #[test]
    fn negative_support() {
        let pts = |v: &[i64]| -> BTreeSet<PointOrInfinity> {
            v.iter().map(|&i| PointOrInfinity::Finite(int(i))).collect()
        };
        assert_eq!(chen().neg_valuation_support(5), pts(&[0, 1, 2]));
        assert_eq!(chen().neg_valuation_support(1), pts(&[0]));
        for n in [1, 7, 100] {
            assert_eq!(finite(2).neg_valuation_support(n), pts(&[0]));
        }
    }

    #[test]
    fn support_growth_examples() {
        assert_eq!(chen().support_growth(1024).final_count(), 11);
        assert_eq!(chen().support_growth(1).counts, vec![(1, 1)]);
        let g = finite(2).support_growth(1000);
        assert!(g.counts.iter().all(|&(_, c)| c == 1));
        assert_eq!(g.first_seen, vec![(1, PointOrInfinity::Finite(int(0)))]);
    }

    #[test]
    fn marked_element_changes_support() {
        // b₁ = (x - 5)/x: the pole at 0 is allowed by ⌊D⌋ = [0], and the
        // zero at 5 makes 1/b₁ⁿ have a pole at 5 for every n
        let b1 = RationalFunction::new(
            Polynomial::from_integers(&[-5, 1]),
            Polynomial::from_integers(&[0, 1]),
        )
        .unwrap();
        let s = GradedSeries::new(FormalDivisor::chen(), b1).unwrap();
        // at 0: ⌊n⌋ + n·(-1) = 0, so 0 drops out
        let got = s.neg_valuation_support(4);
        let want: BTreeSet<_> = [1, 2, 5]
            .iter()
            .map(|&i| PointOrInfinity::Finite(int(i)))
            .collect();
        assert_eq!(got, want);

        let b1 =
            RationalFunction::new(Polynomial::one(), Polynomial::from_integers(&[0, 1])).unwrap();
        // 1/x has a zero at infinity, so infinity joins
        let s = GradedSeries::new(FormalDivisor::chen(), b1).unwrap();
        assert!(s
            .neg_valuation_support(1)
            .contains(&PointOrInfinity::Infinity));
    }

    #[test]
    fn marked_element_must_be_in_piece_one() {
        let bad =
            RationalFunction::new(Polynomial::one(), Polynomial::from_integers(&[0, 1]).pow(2))
                .unwrap();
        assert!(matches!(
            GradedSeries::new(FormalDivisor::chen(), bad),
            Err(SeriesError::NotInPieceOne { .. })
        ));
        assert_eq!(
            GradedSeries::new(FormalDivisor::chen(), RationalFunction::zero()),
            Err(SeriesError::ZeroMarkedElement)
        );
    }
}
