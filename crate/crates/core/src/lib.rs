//! Graded subalgebras of `Q(x)` built from formal floor divisors.
//!
//! Given weights `aᵢ > 0` at distinct points `zᵢ`, the pieces
//! `Bₙ = { Q/Pₙ : deg Q ≤ J(n) }` with `Pₙ = Π (x - zᵢ)^⌊n·aᵢ⌋` form a graded
//! algebra. This crate computes its dimensions exactly, samples the
//! approximability condition, and measures how the set of places where
//! elements `b/b₁ⁿ` acquire poles grows with `n`.
//!
//! - [`exact`]: rationals, polynomials, rational functions, exact rank.
//! - [`divisor`]: finite and formal divisors, floors and superadditivity.
//! - [`series`]: closed-form dimensions, certificates, support growth.
//! - [`oracle`]: brute-force bases that check the closed forms.
//! - [`scenario`]: presets and TOML scenario documents.

pub mod divisor;
pub mod exact;
pub mod oracle;
pub mod scenario;
pub mod series;

pub use divisor::{CoefficientRule, FiniteDivisor, FormalDivisor, PointSet};
pub use exact::{PointOrInfinity, Polynomial, Rational, RationalFunction};
pub use scenario::{load_scenario, preset, Scenario, ScenarioError};
pub use series::{deficiency_check, CertificateReport, GradedSeries, SupportGrowth, Verdict};
