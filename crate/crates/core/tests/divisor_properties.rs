use gradalg_core::{CoefficientRule, FormalDivisor, PointOrInfinity, PointSet, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn harmonic() -> FormalDivisor {
    FormalDivisor::new(PointSet::Integers, CoefficientRule::Harmonic).unwrap()
}

// J for weights 2⁻ⁱ: Σ ⌊n/2ⁱ⌋ = 2n - (number of binary ones of n)
fn chen_j_popcount(n: u64) -> u64 {
    2 * n - u64::from(n.count_ones())
}

fn harmonic_j_direct(n: u64) -> u64 {
    (1..=n).map(|k| n / k).sum()
}

#[test]
fn chen_degree_matches_popcount_identity() {
    let chen = FormalDivisor::chen();
    for n in 0..5000u64 {
        assert_eq!(
            chen.degree_j(n),
            BigInt::from(chen_j_popcount(n)),
            "n = {n}"
        );
    }
}

#[test]
fn harmonic_degree_matches_direct_sum() {
    let h = harmonic();
    for n in (0..3000u64).chain([4096, 9973, 10_000]) {
        assert_eq!(h.degree_j(n), BigInt::from(harmonic_j_direct(n)), "n = {n}");
    }
}

#[test]
fn floor_divisor_entries_are_floors() {
    for d in [FormalDivisor::chen(), harmonic()] {
        for n in 0..200u64 {
            let floor = d.floor_divisor(n);
            for (q, v) in floor.iter() {
                let scaled = d.coefficient_at(q) * Rational::from_integer(n.into());
                assert_eq!(&scaled.floor().to_integer(), v);
            }
            // nothing missing: every index below the bound with a positive floor is present
            for i in 0..d.rule().support_bound(n) {
                let q = PointOrInfinity::Finite(d.point(i));
                let want = (d.rule().coefficient(i) * Rational::from_integer(n.into())).floor();
                assert_eq!(floor.get(&q), want.to_integer());
            }
        }
    }
}

#[test]
fn chen_degree_at_most_twice_n() {
    let chen = FormalDivisor::chen();
    for n in (0..=1_000_000u64)
        .step_by(997)
        .chain([1 << 19, (1 << 20) - 1])
    {
        assert!(chen.degree_j(n) <= BigInt::from(2 * n));
    }
}

#[test]
fn doubling_monotonicity() {
    for d in [FormalDivisor::chen(), harmonic()] {
        for n in (1..=100_000u64).step_by(211) {
            // J(2n)/(2n) ≥ J(n)/n  ⇔  J(2n) ≥ 2·J(n)
            assert!(d.degree_j(2 * n) >= d.degree_j(n) * 2, "n = {n}");
        }
    }
}

#[test]
fn chen_support_size_is_log_plus_one() {
    let chen = FormalDivisor::chen();
    for n in (1..=1u64 << 20)
        .step_by(61)
        .chain((0..=20).map(|k| 1u64 << k))
    {
        assert_eq!(chen.support_size(n) as u32, n.ilog2() + 1, "n = {n}");
    }
}

#[test]
fn superadditivity_agrees_with_entrywise_divisors() {
    for d in [FormalDivisor::chen(), harmonic()] {
        for n in 0..40u64 {
            for m in 0..40u64 {
                let lhs = &d.floor_divisor(n) + &d.floor_divisor(m);
                let direct = lhs.leq(&d.floor_divisor(n + m));
                assert!(direct);
                assert_eq!(d.check_superadditive(n, m), direct);
            }
        }
    }
}

#[test]
fn superadditivity_failure_is_detected() {
    // weights 1/2 at a single point: floor(n/2) is superadditive. Weights are
    // always positive so real failures cannot be built from the public API;
    // instead confirm the check tracks the floored sums exactly.
    let d = FormalDivisor::new(
        PointSet::Explicit(vec![Rational::from_integer(0.into())]),
        CoefficientRule::FiniteTable(vec![Rational::new(1.into(), 2.into())]),
    )
    .unwrap();
    assert!(d.check_superadditive(1, 1));
    assert_eq!(d.degree_j(1) + d.degree_j(1), BigInt::from(0));
    assert_eq!(d.degree_j(2), BigInt::from(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_pairs_are_superadditive(n in 0u64..=1_000_000, m in 0u64..=1_000_000) {
        for d in [FormalDivisor::chen(), harmonic()] {
            prop_assert!(d.check_superadditive(n, m));
            prop_assert!(d.degree_j(n) + d.degree_j(m) <= d.degree_j(n + m));
        }
    }

    #[test]
    fn geometric_rules_are_superadditive(
        num in 1i64..5, den_extra in 1i64..5, scale_num in 1i64..30, scale_den in 1i64..30,
        n in 0u64..5000, m in 0u64..5000,
    ) {
        let rule = CoefficientRule::Geometric {
            scale: Rational::new(scale_num.into(), scale_den.into()),
            ratio: Rational::new(num.into(), (num + den_extra).into()),
        };
        let d = FormalDivisor::new(PointSet::Integers, rule).unwrap();
        let lhs = &d.floor_divisor(n) + &d.floor_divisor(m);
        prop_assert!(lhs.leq(&d.floor_divisor(n + m)));
        prop_assert!(d.check_superadditive(n, m));
    }
}
