//! Finite and formal divisors on the projective line.
//!
//! A [`FormalDivisor`] is a countable sum `Σ aᵢ[zᵢ]` with positive rational
//! weights whose coefficient rule carries an explicit support bound, so that
//! every floor `⌊nD⌋` is a computable [`FiniteDivisor`].

mod finite;
mod formal;
mod rule;

pub use finite::FiniteDivisor;
pub use formal::{FormalDivisor, PointSet};
pub use rule::{CoefficientRule, FloorRun};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("coefficient at index {index} must be positive")]
    NonPositiveCoefficient { index: usize },
    #[error("geometric scale must be positive")]
    NonPositiveScale,
    #[error("geometric ratio must lie strictly between 0 and 1")]
    RatioOutOfRange,
    #[error("custom table entry at index {index} lies beyond the declared cutoff {cutoff}")]
    BeyondCutoff { index: usize, cutoff: usize },
    #[error("duplicate point at indices {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },
    #[error("coefficient rule needs {needed} points but only {available} are declared")]
    NotEnoughPoints { needed: usize, available: usize },
    #[error("a rule with infinite support needs an infinite point set")]
    InfiniteSupportNeedsGenerator,
}
