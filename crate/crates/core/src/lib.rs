//! Bayes factor hypothesis tests for binomial models under mixture priors.
//!
//! The crate centres on priors that combine a point mass ("spike") with a
//! continuous density ("slab") over a Bernoulli success parameter.  All
//! evidence arithmetic runs in natural-log space; probabilities are
//! materialized only at API boundaries.
//!
//! Modules:
//!
//! - [`numerics`] — special functions and adaptive quadrature in log space.
//! - [`model`] — observations, continuous priors, and prior mixtures.
//! - [`evidence`] — marginal likelihoods, Bayes factors, posterior model
//!   probabilities, and the odds form of Bayes' theorem.
//! - [`posterior`] — per-model posteriors, mixture posteriors, the Gaussian
//!   approximation, and model-averaged summaries.
//! - [`classic`] — the named analyses: Haldane's linkage test, the law
//!   confirmation asymptotics, Jeffreys's two-proportion test, Broad's
//!   succession rule, and the critical-z sweep anticipating Lindley's
//!   paradox.
//! - [`oracle`] — independent brute-force verifiers (exact rational
//!   arithmetic, fixed-grid quadrature) used by the test suite and the CLI
//!   self-check.

pub mod classic;
mod error;
pub mod evidence;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod posterior;

pub use error::{Error, Result};
pub use evidence::ModelComparison;
pub use model::{
    BinomialObservation, ContingencyTable, ContinuousPrior, MixturePrior, PriorComponent,
    PriorLaw,
};
pub use numerics::LogValue;
pub use posterior::{ComponentPosterior, MixturePosterior, NormalApproximation};
