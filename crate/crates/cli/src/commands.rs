//! Builders for the report of each subcommand.

use gradalg_core::oracle::{self, OracleConfig, OracleError};
use gradalg_core::{Polynomial, Rational, RationalFunction, Scenario, Verdict};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{Cell, ReportDocument, Row};

/// Image-dimension checks cover `p ≤ MAX_P`, `n ≤ MAX_N` with `p·n ≤ cap`.
const MAX_P: u64 = 5;
const MAX_N: u64 = 4;

pub fn seq(s: &Scenario, n_max: u64) -> ReportDocument {
    let d = s.divisor();
    let mut doc = ReportDocument::new("seq", s.name()).param("n", Cell::int(n_max));
    doc.rows = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let entries = d.floor_vector(n).into_iter().map(Cell::Int).collect();
            Row::new()
                .with("n", Cell::int(n))
                .with("entries", Cell::List(entries))
                .with("support", Cell::int(d.support_size(n)))
                .with("J", Cell::Int(d.degree_j(n)))
        })
        .collect();
    doc
}

pub fn dim(s: &Scenario, n_max: u64) -> ReportDocument {
    let series = s.series();
    let mut doc = ReportDocument::new("dim", s.name()).param("n", Cell::int(n_max));
    doc.rows = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            Row::new()
                .with("n", Cell::int(n))
                .with("J", Cell::Int(series.divisor().degree_j(n)))
                .with("dim", Cell::Int(series.dim_piece(n)))
        })
        .collect();
    doc
}

pub fn certify(s: &Scenario, epsilon: &Rational, p_list: &[u64], n_max: u64) -> ReportDocument {
    let report = s.series().certify_approximable(epsilon, p_list, n_max);
    let mut doc = ReportDocument::new("certify", s.name())
        .param("epsilon", Cell::Exact(epsilon.clone()))
        .param(
            "p_list",
            Cell::List(p_list.iter().map(|&p| Cell::int(p)).collect()),
        )
        .param("n_max", Cell::int(n_max));
    doc.rows = report
        .entries
        .iter()
        .map(|e| {
            Row::new()
                .with("p", Cell::int(e.p))
                .with("min_ratio", Cell::Exact(e.min_ratio.clone()))
                .with("argmin_n", Cell::int(e.argmin_n))
                .with("passes", Cell::Bool(e.passes))
                .with(
                    "deficiency",
                    e.deficiency.clone().map_or(Cell::Missing, Cell::Exact),
                )
        })
        .collect();
    let threshold = Rational::from_integer(1.into()) - epsilon;
    let summary = Row::new().with("threshold", Cell::Exact(threshold));
    doc.summary = match report.verdict {
        Verdict::CertifiedUpToSamples { p0 } => summary
            .with("verdict", Cell::text("certified-up-to-samples"))
            .with("p0", Cell::int(p0)),
        Verdict::RefutedAt { p, n, ratio } => summary
            .with("verdict", Cell::text("refuted-at"))
            .with("witness_p", Cell::int(p))
            .with("witness_n", Cell::int(n))
            .with("witness_ratio", Cell::Exact(ratio)),
    };
    doc
}

pub fn support(s: &Scenario, n_max: u64) -> ReportDocument {
    let growth = s.series().support_growth(n_max);
    let mut doc = ReportDocument::new("support", s.name()).param("n_max", Cell::int(n_max));
    let mut fresh = growth.first_seen.iter().peekable();
    let mut previous = 0;
    for &(n, count) in &growth.counts {
        let mut new_places = Vec::new();
        while let Some((_, q)) = fresh.next_if(|(level, _)| *level == n) {
            new_places.push(Cell::place(q));
        }
        if count != previous || n == n_max {
            doc.rows.push(
                Row::new()
                    .with("n", Cell::int(n))
                    .with("count", Cell::int(count))
                    .with("new_places", Cell::List(new_places)),
            );
        }
        previous = count;
    }
    doc.summary = Row::new()
        .with("final_count", Cell::int(growth.final_count()))
        .with(
            "growth_events",
            Cell::int(doc.rows.iter().filter(|r| has_new(r)).count()),
        );
    doc
}

fn has_new(row: &Row) -> bool {
    row.0
        .iter()
        .any(|(k, v)| k == "new_places" && !matches!(v, Cell::List(l) if l.is_empty()))
}

/// Powers of two up to `n_max`, followed by `n_max` itself.
pub fn volume_samples(n_max: u64) -> Vec<u64> {
    let mut samples: Vec<u64> = (0..64)
        .map(|k| 1u64 << k)
        .take_while(|&n| n <= n_max)
        .collect();
    if samples.last() != Some(&n_max) {
        samples.push(n_max);
    }
    samples
}

pub fn volume(s: &Scenario, n_max: u64) -> ReportDocument {
    let series = s.series();
    let mass = series.divisor().rule().total_mass();
    let mut doc = ReportDocument::new("volume", s.name()).param("n_max", Cell::int(n_max));
    let samples = volume_samples(n_max);
    doc.rows = series
        .volume_sequence(&samples)
        .into_iter()
        .map(|(n, v)| {
            let j = series.divisor().degree_j(n);
            let j_over_n = Rational::new(j.clone(), BigInt::from(n));
            let deviation = mass.as_ref().map(|m| (&j_over_n - m).abs());
            Row::new()
                .with("n", Cell::int(n))
                .with("J", Cell::Int(j))
                .with("dim_over_n", Cell::Exact(v))
                .with("J_over_n", Cell::Exact(j_over_n))
                .with("deviation", deviation.map_or(Cell::Missing, Cell::Exact))
        })
        .collect();
    doc.summary = Row::new().with(
        "total_mass",
        mass.map_or(Cell::text("infinite"), Cell::Exact),
    );
    doc
}

/// Oracle-versus-closed-form matrix. The second value is the mismatch count.
pub fn oracle_check(
    s: &Scenario,
    cap: u64,
    samples: usize,
    seed: u64,
) -> Result<(ReportDocument, usize), OracleError> {
    let d = s.divisor();
    let series = s.series();
    let cfg = OracleConfig { cap };
    let mut doc = ReportDocument::new("oracle-check", s.name())
        .param("cap", Cell::int(cap))
        .param("samples", Cell::int(samples))
        .param("seed", Cell::int(seed));

    let check = |kind: &str, p: Cell, n: u64, place: Cell, got: Cell, want: Cell| {
        let agrees = got == want;
        Row::new()
            .with("check", Cell::text(kind))
            .with("p", p)
            .with("n", Cell::int(n))
            .with("place", place)
            .with("oracle", got)
            .with("closed_form", want)
            .with("agrees", Cell::Bool(agrees))
    };

    let dims: Vec<Row> = (0..=cap)
        .into_par_iter()
        .map(|n| {
            let got = oracle::oracle_dim(d, n, &cfg)?;
            Ok(check(
                "dim",
                Cell::Missing,
                n,
                Cell::Missing,
                Cell::int(got),
                Cell::Int(series.dim_piece(n)),
            ))
        })
        .collect::<Result<_, OracleError>>()?;

    let pairs: Vec<(u64, u64)> = (1..=MAX_P)
        .flat_map(|p| (1..=MAX_N).map(move |n| (p, n)))
        .filter(|&(p, n)| p * n <= cap)
        .collect();
    let images: Vec<Row> = pairs
        .into_par_iter()
        .map(|(p, n)| {
            let got = oracle::oracle_image_dim(d, p, n, &cfg)?;
            Ok(check(
                "image",
                Cell::int(p),
                n,
                Cell::Missing,
                Cell::int(got),
                Cell::Int(series.image_dim(p, n)),
            ))
        })
        .collect::<Result<_, OracleError>>()?;

    let orders: Vec<Vec<Row>> = (0..=cap)
        .into_par_iter()
        .map(|n| {
            let floor = d.floor_divisor(n);
            let found = oracle::min_orders(d, n, &cfg)?;
            Ok(found
                .into_iter()
                .map(|(q, ord)| {
                    let want = match &q {
                        gradalg_core::PointOrInfinity::Infinity => BigInt::from(0),
                        finite => -floor.get(finite),
                    };
                    check(
                        "min-order",
                        Cell::Missing,
                        n,
                        Cell::place(&q),
                        Cell::int(ord),
                        Cell::Int(want),
                    )
                })
                .collect())
        })
        .collect::<Result<_, OracleError>>()?;

    let mut closure = Vec::with_capacity(samples);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let n = rng.gen_range(0..=cap);
        let m = rng.gen_range(0..=cap - n);
        let f = random_element(d, n, &mut rng);
        let g = random_element(d, m, &mut rng);
        let inside = oracle::membership(&(&f * &g), d, n + m);
        closure.push(check(
            "closure",
            Cell::int(n),
            m,
            Cell::Missing,
            Cell::Bool(inside),
            Cell::Bool(true),
        ));
    }

    doc.rows = dims
        .into_iter()
        .chain(images)
        .chain(orders.into_iter().flatten())
        .chain(closure)
        .collect();
    let mismatches = doc.rows.iter().filter(|r| !agrees(r)).count();
    doc.summary = Row::new()
        .with("checks", Cell::int(doc.rows.len()))
        .with("mismatches", Cell::int(mismatches))
        .with(
            "verdict",
            Cell::text(if mismatches == 0 {
                "all-agree"
            } else {
                "mismatch"
            }),
        );
    Ok((doc, mismatches))
}

fn agrees(row: &Row) -> bool {
    row.0
        .iter()
        .any(|(k, v)| k == "agrees" && *v == Cell::Bool(true))
}

// Random nonzero element of piece n: a numerator of degree ≤ J(n) over Pₙ.
fn random_element(
    d: &gradalg_core::FormalDivisor,
    n: u64,
    rng: &mut ChaCha8Rng,
) -> RationalFunction {
    let j = d.degree_j(n).to_usize().expect("oracle sizes fit in usize");
    let mut coeffs: Vec<i64> = (0..=j).map(|_| rng.gen_range(-5..=5)).collect();
    if coeffs.iter().all(|&c| c == 0) {
        coeffs[rng.gen_range(0..=j)] = 1;
    }
    RationalFunction::new(
        Polynomial::from_integers(&coeffs),
        oracle::pole_polynomial(d, n),
    )
    .expect("pole polynomial is nonzero")
}
