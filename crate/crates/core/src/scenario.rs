//! Named presets and scenario documents.
//!
//! A scenario document is TOML. Every number that is a rational is written
//! as a string (`"1/3"`, `"2"`), never as a float:
//!
//! ```toml
//! name = "truncated-chen"
//! description = "first three Chen weights"
//! points = ["0", "1", "2"]          # or points = "integers" for zᵢ = i
//!
//! [rule]
//! kind = "finite-table"             # geometric | harmonic | finite-table | custom-table
//! coefficients = ["1", "1/2", "1/4"]
//!
//! [b1]                              # optional, defaults to the constant 1
//! numerator = ["1"]                 # lowest degree first
//! denominator = ["1"]
//! ```
//!
//! `geometric` takes `scale` and `ratio`; `custom-table` takes `entries`
//! (index → weight) and a `cutoff` no entry may exceed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisor::{CoefficientRule, DivisorError, FormalDivisor, PointSet};
use crate::exact::{parse_rational, Polynomial, Rational, RationalFunction};
use crate::series::{GradedSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("malformed scenario document: {0}")]
    Syntax(String),
    #[error("{location}: invalid rational {text:?}")]
    InvalidRational { location: String, text: String },
    #[error("{location}: invalid index {text:?}")]
    InvalidIndex { location: String, text: String },
    #[error("{location}: duplicate point")]
    DuplicatePoint { location: String },
    #[error("{location}: coefficient must be positive")]
    NonPositiveCoefficient { location: String },
    #[error("{location}: missing support-bound data ({what})")]
    MissingSupportBound {
        location: String,
        what: &'static str,
    },
    #[error("{location}: missing field")]
    MissingField { location: String },
    #[error("{location}: field not used by rule kind {kind:?}")]
    UnexpectedField { location: String, kind: String },
    #[error("{location}: unknown rule kind {kind:?} (expected geometric, harmonic, finite-table or custom-table)")]
    UnknownRuleKind { location: String, kind: String },
    #[error("points: unknown generator {0:?} (expected \"integers\" or a list)")]
    UnknownGenerator(String),
    #[error("{location}: {source}")]
    InvalidDivisor {
        location: String,
        #[source]
        source: DivisorError,
    },
    #[error("b1.denominator: must be a nonzero polynomial")]
    ZeroDenominator,
    #[error("b1: {0}")]
    MarkedElement(#[from] SeriesError),
    #[error("unknown preset {0:?} (expected chen, harmonic or finite:<d>)")]
    UnknownPreset(String),
}

/// A named graded series ready to be analysed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    name: String,
    description: String,
    series: GradedSeries,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        description: impl Into<String>,
        series: GradedSeries,
    ) -> Self {
        Scenario {
            name: name.into(),
            description: description.into(),
            series,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn series(&self) -> &GradedSeries {
        &self.series
    }

    pub fn divisor(&self) -> &FormalDivisor {
        self.series.divisor()
    }

    pub fn marked_b1(&self) -> &RationalFunction {
        self.series.marked_b1()
    }

    /// Serializes back into the document format read by [`load_scenario`].
    pub fn to_document(&self) -> String {
        let divisor = self.divisor();
        let points = match divisor.points() {
            PointSet::Integers => PointsDoc::Generator("integers".into()),
            PointSet::Explicit(pts) => PointsDoc::List(pts.iter().map(doc_rational).collect()),
        };
        let mut rule = RuleDoc::default();
        match divisor.rule() {
            CoefficientRule::Geometric { scale, ratio } => {
                rule.kind = "geometric".into();
                rule.scale = Some(doc_rational(scale));
                rule.ratio = Some(doc_rational(ratio));
            }
            CoefficientRule::Harmonic => rule.kind = "harmonic".into(),
            CoefficientRule::FiniteTable(c) => {
                rule.kind = "finite-table".into();
                rule.coefficients = Some(c.iter().map(doc_rational).collect());
            }
            CoefficientRule::CustomTable { entries, cutoff } => {
                rule.kind = "custom-table".into();
                rule.entries = Some(
                    entries
                        .iter()
                        .map(|(i, c)| (i.to_string(), doc_rational(c)))
                        .collect(),
                );
                rule.cutoff = Some(*cutoff as u64);
            }
        }
        let b1 = self.marked_b1();
        let doc = Document {
            name: self.name.clone(),
            description: self.description.clone(),
            points,
            rule,
            b1: Some(B1Doc {
                numerator: b1.numerator().coeffs().iter().map(doc_rational).collect(),
                denominator: b1.denominator().coeffs().iter().map(doc_rational).collect(),
            }),
        };
        toml::to_string(&doc).expect("scenario documents always serialize")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    name: String,
    #[serde(default)]
    description: String,
    points: PointsDoc,
    rule: RuleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b1: Option<B1Doc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum PointsDoc {
    Generator(String),
    List(Vec<String>),
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ratio: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cutoff: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct B1Doc {
    numerator: Vec<String>,
    denominator: Vec<String>,
}

/// Built-in scenarios: `chen`, `harmonic` and `finite:<d>`.
pub fn preset(name: &str) -> Result<Scenario, ScenarioError> {
    let (divisor, description) = match name {
        "chen" => (
            FormalDivisor::chen(),
            "points z_i = i with weights 2^-i; approximable, with infinitely many negative-valuation places"
                .to_string(),
        ),
        "harmonic" => (
            FormalDivisor::new(PointSet::Integers, CoefficientRule::Harmonic).expect("valid preset"),
            "points z_i = i with weights 1/(i+1); infinite total weight, not approximable".to_string(),
        ),
        _ => {
            let weight = name
                .strip_prefix("finite:")
                .and_then(parse_rational)
                .filter(|d| *d > Rational::from_integer(0.into()))
                .ok_or_else(|| ScenarioError::UnknownPreset(name.to_string()))?;
            let divisor = FormalDivisor::new(
                PointSet::Explicit(vec![Rational::from_integer(0.into())]),
                CoefficientRule::FiniteTable(vec![weight.clone()]),
            )
            .expect("single positive weight");
            (
                divisor,
                format!("single point 0 with weight {weight}; the section ring of a line bundle"),
            )
        }
    };
    Ok(Scenario::new(
        name,
        description,
        GradedSeries::with_unit(divisor),
    ))
}

/// Parses and validates a scenario document.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let doc: Document = toml::from_str(text).map_err(|e| ScenarioError::Syntax(e.to_string()))?;

    let points = match doc.points {
        PointsDoc::Generator(g) if g == "integers" => PointSet::Integers,
        PointsDoc::Generator(g) => return Err(ScenarioError::UnknownGenerator(g)),
        PointsDoc::List(list) => {
            let mut pts: Vec<Rational> = Vec::with_capacity(list.len());
            for (i, text) in list.iter().enumerate() {
                let q = rational_at(text, || format!("points[{i}]"))?;
                if pts.contains(&q) {
                    return Err(ScenarioError::DuplicatePoint {
                        location: format!("points[{i}]"),
                    });
                }
                pts.push(q);
            }
            PointSet::Explicit(pts)
        }
    };

    let rule = parse_rule(&doc.rule)?;
    let divisor =
        FormalDivisor::new(points, rule).map_err(|source| ScenarioError::InvalidDivisor {
            location: match source {
                DivisorError::DuplicatePoint { second, .. } => format!("points[{second}]"),
                DivisorError::NotEnoughPoints { .. }
                | DivisorError::InfiniteSupportNeedsGenerator => "points".to_string(),
                _ => "rule".to_string(),
            },
            source,
        })?;

    let marked_b1 = match &doc.b1 {
        None => RationalFunction::one(),
        Some(raw) => {
            let num = polynomial_at(&raw.numerator, "b1.numerator")?;
            let den = polynomial_at(&raw.denominator, "b1.denominator")?;
            RationalFunction::new(num, den).map_err(|_| ScenarioError::ZeroDenominator)?
        }
    };
    let series = GradedSeries::new(divisor, marked_b1)?;
    Ok(Scenario::new(doc.name, doc.description, series))
}

fn parse_rule(raw: &RuleDoc) -> Result<CoefficientRule, ScenarioError> {
    let kind = raw.kind.as_str();
    let allowed: &[&str] = match kind {
        "geometric" => &["scale", "ratio"],
        "harmonic" => &[],
        "finite-table" => &["coefficients"],
        "custom-table" => &["entries", "cutoff"],
        _ => {
            return Err(ScenarioError::UnknownRuleKind {
                location: "rule.kind".into(),
                kind: raw.kind.clone(),
            })
        }
    };
    let present = [
        ("scale", raw.scale.is_some()),
        ("ratio", raw.ratio.is_some()),
        ("coefficients", raw.coefficients.is_some()),
        ("entries", raw.entries.is_some()),
        ("cutoff", raw.cutoff.is_some()),
    ];
    if let Some((field, _)) = present.iter().find(|(f, set)| *set && !allowed.contains(f)) {
        return Err(ScenarioError::UnexpectedField {
            location: format!("rule.{field}"),
            kind: raw.kind.clone(),
        });
    }

    Ok(match kind {
        "geometric" => {
            let scale = raw.scale.as_deref().ok_or(ScenarioError::MissingField {
                location: "rule.scale".into(),
            })?;
            let ratio = raw
                .ratio
                .as_deref()
                .ok_or(ScenarioError::MissingSupportBound {
                    location: "rule.ratio".into(),
                    what: "a geometric rule needs its ratio",
                })?;
            let scale = positive_at(scale, || "rule.scale".into())?;
            let ratio = positive_at(ratio, || "rule.ratio".into())?;
            let rule = CoefficientRule::Geometric { scale, ratio };
            rule.validate()
                .map_err(|source| ScenarioError::InvalidDivisor {
                    location: "rule.ratio".into(),
                    source,
                })?;
            rule
        }
        "harmonic" => CoefficientRule::Harmonic,
        "finite-table" => {
            let coeffs = raw
                .coefficients
                .as_ref()
                .ok_or(ScenarioError::MissingField {
                    location: "rule.coefficients".into(),
                })?;
            let coeffs = coeffs
                .iter()
                .enumerate()
                .map(|(i, t)| positive_at(t, || format!("rule.coefficients[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            CoefficientRule::FiniteTable(coeffs)
        }
        _ => {
            let cutoff = raw.cutoff.ok_or(ScenarioError::MissingSupportBound {
                location: "rule.cutoff".into(),
                what: "a custom table must declare its cutoff",
            })? as usize;
            let raw = raw.entries.as_ref().ok_or(ScenarioError::MissingField {
                location: "rule.entries".into(),
            })?;
            let mut entries = BTreeMap::new();
            for (key, value) in raw {
                let location = format!("rule.entries.{key}");
                let index: usize = key
                    .trim()
                    .parse()
                    .map_err(|_| ScenarioError::InvalidIndex {
                        location: location.clone(),
                        text: key.clone(),
                    })?;
                let weight = positive_at(value, || location.clone())?;
                if index > cutoff {
                    return Err(ScenarioError::InvalidDivisor {
                        location,
                        source: DivisorError::BeyondCutoff { index, cutoff },
                    });
                }
                entries.insert(index, weight);
            }
            CoefficientRule::CustomTable { entries, cutoff }
        }
    })
}

fn rational_at(text: &str, location: impl FnOnce() -> String) -> Result<Rational, ScenarioError> {
    parse_rational(text).ok_or_else(|| ScenarioError::InvalidRational {
        location: location(),
        text: text.to_string(),
    })
}

fn positive_at(text: &str, location: impl Fn() -> String) -> Result<Rational, ScenarioError> {
    let q = rational_at(text, &location)?;
    if q <= Rational::from_integer(0.into()) {
        return Err(ScenarioError::NonPositiveCoefficient {
            location: location(),
        });
    }
    Ok(q)
}

fn polynomial_at(coeffs: &[String], field: &str) -> Result<Polynomial, ScenarioError> {
    let coeffs = coeffs
        .iter()
        .enumerate()
        .map(|(i, t)| rational_at(t, || format!("{field}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polynomial::new(coeffs))
}

fn doc_rational(q: &Rational) -> String {
    q.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use num_bigint::BigInt;

    const TRUNCATED: &str = r#"
name = "truncated-chen"
points = ["0", "1", "2"]

[rule]
kind = "finite-table"
coefficients = ["1", "1/2", "1/4"]
"#;

    #[test]
    fn presets() {
        let chen = preset("chen").unwrap();
        let floor = chen.divisor().floor_vector(1);
        assert_eq!(floor, vec![BigInt::from(1)]);
        assert_eq!(chen.marked_b1(), &RationalFunction::one());

        let fin = preset("finite:2").unwrap();
        assert_eq!(fin.series().volume_sequence(&[5]), vec![(5, rat(11, 5))]);
        assert_eq!(
            preset("harmonic").unwrap().divisor().degree_j(4),
            BigInt::from(8)
        );
        assert!(preset("finite:3/2").is_ok());
        for bad in ["chen2", "finite:", "finite:0", "finite:-1", ""] {
            assert!(
                matches!(preset(bad), Err(ScenarioError::UnknownPreset(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn loads_explicit_table() {
        let s = load_scenario(TRUNCATED).unwrap();
        assert_eq!(s.name(), "truncated-chen");
        assert_eq!(
            s.divisor().points(),
            &PointSet::Explicit(vec![int(0), int(1), int(2)])
        );
        assert_eq!(
            s.divisor().rule(),
            &CoefficientRule::FiniteTable(vec![int(1), rat(1, 2), rat(1, 4)])
        );
        // agrees with the infinite preset while the table lasts
        for n in 1..8 {
            assert_eq!(s.divisor().degree_j(n), FormalDivisor::chen().degree_j(n));
        }
    }

    #[test]
    fn duplicate_point() {
        let doc = TRUNCATED.replace(r#"["0", "1", "2"]"#, r#"["0", "1", "1"]"#);
        let err = load_scenario(&doc).unwrap_err();
        assert_eq!(
            err,
            ScenarioError::DuplicatePoint {
                location: "points[2]".into()
            }
        );
        assert!(err.to_string().contains("duplicate point"));
    }

    #[test]
    fn zero_coefficient() {
        let doc = TRUNCATED.replace(r#""1/2""#, r#""0""#);
        let err = load_scenario(&doc).unwrap_err();
        assert_eq!(
            err.to_string(),
            "rule.coefficients[1]: coefficient must be positive"
        );
    }

    #[test]
    fn custom_table_needs_cutoff() {
        let doc = r#"
name = "sparse"
points = "integers"
[rule]
kind = "custom-table"
entries = { "0" = "1", "4" = "2/3" }
"#;
        assert!(matches!(
            load_scenario(doc),
            Err(ScenarioError::MissingSupportBound { .. })
        ));
        let ok = doc.replace(
            "kind = \"custom-table\"",
            "kind = \"custom-table\"\ncutoff = 4",
        );
        let s = load_scenario(&ok).unwrap();
        // ⌊3·1⌋ + ⌊3·2/3⌋
        assert_eq!(s.divisor().degree_j(3), BigInt::from(5));
        let beyond = doc.replace(
            "kind = \"custom-table\"",
            "kind = \"custom-table\"\ncutoff = 3",
        );
        assert!(matches!(
            load_scenario(&beyond),
            Err(ScenarioError::InvalidDivisor { .. })
        ));
    }

    #[test]
    fn rejects_unknown_rule_kinds_and_fields() {
        let doc = r#"
name = "formula"
points = "integers"
[rule]
kind = "formula"
"#;
        assert!(matches!(
            load_scenario(doc),
            Err(ScenarioError::UnknownRuleKind { .. })
        ));
        let doc = r#"
name = "h"
points = "integers"
[rule]
kind = "harmonic"
ratio = "1/2"
"#;
        assert!(matches!(
            load_scenario(doc),
            Err(ScenarioError::UnexpectedField { .. })
        ));
        let doc = r#"
name = "h"
points = ["0"]
[rule]
kind = "harmonic"
"#;
        assert!(matches!(
            load_scenario(doc),
            Err(ScenarioError::InvalidDivisor {
                source: DivisorError::InfiniteSupportNeedsGenerator,
                ..
            })
        ));
        assert!(matches!(
            load_scenario("name = 3"),
            Err(ScenarioError::Syntax(_))
        ));
    }

    #[test]
    fn decimal_floats_are_rejected() {
        let doc = TRUNCATED.replace(r#""1/2""#, r#""0.5""#);
        assert!(matches!(
            load_scenario(&doc),
            Err(ScenarioError::InvalidRational { .. })
        ));
        let doc = TRUNCATED.replace(r#""1/2""#, "0.5");
        assert!(matches!(load_scenario(&doc), Err(ScenarioError::Syntax(_))));
    }

    #[test]
    fn marked_element_checked() {
        let doc = format!(
            "{TRUNCATED}\n[b1]\nnumerator = [\"1\"]\ndenominator = [\"0\", \"0\", \"1\"]\n"
        );
        assert!(matches!(
            load_scenario(&doc),
            Err(ScenarioError::MarkedElement(
                SeriesError::NotInPieceOne { .. }
            ))
        ));
        let doc = format!(
            "{TRUNCATED}\n[b1]\nnumerator = [\"-3\", \"1\"]\ndenominator = [\"0\", \"1\"]\n"
        );
        let s = load_scenario(&doc).unwrap();
        assert_eq!(
            s.marked_b1().numerator(),
            &Polynomial::from_integers(&[-3, 1])
        );
        let doc = format!("{TRUNCATED}\n[b1]\nnumerator = [\"1\"]\ndenominator = [\"0\"]\n");
        assert_eq!(load_scenario(&doc), Err(ScenarioError::ZeroDenominator));
    }

    #[test]
    fn presets_round_trip() {
        for name in ["chen", "harmonic", "finite:2", "finite:7/3"] {
            let s = preset(name).unwrap();
            assert_eq!(load_scenario(&s.to_document()).unwrap(), s, "{name}");
        }
    }
}
