//! Statistical models for daily precipitation series.
//!
//! Two empirical regularities drive the design: wet-spell durations follow a
//! unit-shifted negative binomial law, and daily precipitation volumes follow
//! a Pareto law. Both have mixture representations — the negative binomial is
//! a gamma-mixed Poisson, the Lomax/Pareto is a gamma-mixed exponential, and
//! a gamma with shape below one is itself an exponential mixture — and this
//! crate both exploits those representations (compound samplers) and verifies
//! them numerically against their closed forms (adaptive quadrature).
//!
//! # Modules
//!
//! - [`dist`] — the distribution families, their densities, and direct
//!   samplers.
//! - [`quad`] — the adaptive Gauss–Kronrod engine behind every verification.
//! - [`mixtures`] — the four mixture-identity checks and the compound
//!   (two-stage) samplers.
//! - [`ingest`] — daily-series parsing, wet/dry spell extraction, and a
//!   Markov-order diagnostic for the wet/dry sequence.
//! - [`fit`] — maximum-likelihood fitting of durations and volumes.
//! - [`gof`] — chi-square and bootstrap Kolmogorov–Smirnov tests plus
//!   histogram-vs-model reports.
//! - [`special`] — log-gamma, digamma, and incomplete-gamma kernels.
//!
//! The guide in `book/` walks through each concept with runnable examples;
//! every code block there compiles and runs as a doc-test of this crate.

pub mod dist;
pub mod error;
pub mod ingest;
pub mod mixtures;
pub mod quad;
pub mod seeding;
pub mod special;

pub use dist::{GammaParams, GleserMixingParams, NegBinParams, ParetoGpdParams, ParetoLomaxParams};
pub use error::{Error, Result};
pub use mixtures::{IdentityReport, MixtureIdentity};
pub use quad::{QuadResult, QuadratureSpec};
