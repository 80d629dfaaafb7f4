//! Posterior distributions under each model, mixture posteriors, the
//! Gaussian approximation, and model-averaged summaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evidence::{log_marginal_likelihood, posterior_model_weights};
use crate::model::{
    BinomialObservation, ContinuousPrior, MixturePrior, PriorComponent, PriorLaw,
    TabulatedDensity,
};
use crate::numerics::{integrate_density, regularized_incomplete_beta};

/// The law of one posterior component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum PosteriorLaw {
    /// A point mass passes through Bayes' rule unchanged.
    PointMass { location: f64 },
    /// Beta(α', β') restricted to the prior's support.  A full-support beta
    /// has lo = 0, hi = 1.
    TruncatedBeta { alpha: f64, beta: f64, lo: f64, hi: f64 },
    /// Tabulated prior reweighted by the likelihood: density proportional to
    /// θˢ(1−θ)ᶠ · prior(θ).  Kept in this implicit form; summaries are
    /// computed by quadrature.
    WeightedTabulated {
        prior: TabulatedDensity,
        successes: u64,
        failures: u64,
    },
}

/// One component of a mixture posterior: a posterior model probability plus
/// the component's own posterior law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentPosterior {
    pub weight: f64,
    pub law: PosteriorLaw,
}

/// Weighted mixture of per-model posteriors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixturePosterior {
    components: Vec<ComponentPosterior>,
}

impl MixturePosterior {
    pub fn components(&self) -> &[ComponentPosterior] {
        &self.components
    }
}

/// Laplace-style normal approximation to a beta posterior: mode plus
/// curvature at the mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalApproximation {
    pub mean: f64,
    pub sd: f64,
}

/// Conjugate update of a single prior component.
///
/// Point masses are unchanged by the data; uniform(lo,hi) becomes
/// beta(a+1, n−a+1) truncated to (lo,hi); beta(α,β) becomes beta(α+a, β+n−a).
/// The weight is carried over from the prior — [`mixture_posterior`]
/// replaces it with the posterior model probability.
pub fn update_component(obs: &BinomialObservation, component: &PriorComponent) -> ComponentPosterior {
    let a = obs.successes() as f64;
    let b = obs.failures() as f64;
    let law = match component.law() {
        PriorLaw::PointMass { location } => PosteriorLaw::PointMass { location: *location },
        PriorLaw::Continuous(ContinuousPrior::Uniform { lo, hi }) => PosteriorLaw::TruncatedBeta {
            alpha: a + 1.0,
            beta: b + 1.0,
            lo: *lo,
            hi: *hi,
        },
        PriorLaw::Continuous(ContinuousPrior::Beta { alpha, beta }) => PosteriorLaw::TruncatedBeta {
            alpha: alpha + a,
            beta: beta + b,
            lo: 0.0,
            hi: 1.0,
        },
        PriorLaw::Continuous(ContinuousPrior::Tabulated(t)) => PosteriorLaw::WeightedTabulated {
            prior: t.clone(),
            successes: obs.successes(),
            failures: obs.failures(),
        },
    };
    ComponentPosterior {
        weight: component.weight(),
        law,
    }
}

/// Full mixture posterior: every component conjugately updated, weights set
/// to the posterior model probabilities via the shared log-sum-exp
/// normalizer.  Errors if the data are impossible under every component.
pub fn mixture_posterior(
    obs: &BinomialObservation,
    prior: &MixturePrior,
) -> Result<MixturePosterior> {
    let mut log_weighted = Vec::with_capacity(prior.len());
    for comp in prior.components() {
        let lml = log_marginal_likelihood(obs, comp.law())?;
        log_weighted.push(comp.weight().ln() + lml.value());
    }
    let weights = posterior_model_weights(&log_weighted)?;
    let components = prior
        .components()
        .iter()
        .zip(weights)
        .map(|(comp, weight)| {
            let mut updated = update_component(obs, comp);
            updated.weight = weight;
            updated
        })
        .collect();
    Ok(MixturePosterior { components })
}

/// E[θ] under one posterior law.
pub fn component_mean(law: &PosteriorLaw) -> Result<f64> {
    match law {
        PosteriorLaw::PointMass { location } => Ok(*location),
        PosteriorLaw::TruncatedBeta { alpha, beta, lo, hi } => {
            truncated_beta_mean(*alpha, *beta, *lo, *hi)
        }
        PosteriorLaw::WeightedTabulated {
            prior,
            successes,
            failures,
        } => {
            let (a, b) = (*successes as f64, *failures as f64);
            let knots = prior.interior_knots();
            let support = prior.support();
            let num = integrate_density(|x| prior.ln_density(x), support, (a + 1.0, b), &knots)?;
            let den = integrate_density(|x| prior.ln_density(x), support, (a, b), &knots)?;
            if den.is_zero_mass() {
                return Err(Error::ImpossibleData(
                    "posterior has no mass on the tabulated support".into(),
                ));
            }
            Ok((num.value() - den.value()).exp())
        }
    }
}

/// Mean of Beta(α, β) restricted to (lo, hi), from incomplete-beta ratios:
/// E = α/(α+β) · ΔI(α+1, β)/ΔI(α, β).
fn truncated_beta_mean(alpha: f64, beta: f64, lo: f64, hi: f64) -> Result<f64> {
    if lo == 0.0 && hi == 1.0 {
        return Ok(alpha / (alpha + beta));
    }
    let mass = regularized_incomplete_beta(hi, alpha, beta)?
        - regularized_incomplete_beta(lo, alpha, beta)?;
    // Heavy cancellation: fall back to direct quadrature of the density.
    if mass < 1e-6 {
        let num = integrate_density(|_| 0.0, (lo, hi), (alpha, beta - 1.0), &[])?;
        let den = integrate_density(|_| 0.0, (lo, hi), (alpha - 1.0, beta - 1.0), &[])?;
        if den.is_zero_mass() {
            return Err(Error::ImpossibleData(
                "truncated beta has no mass on its support".into(),
            ));
        }
        return Ok((num.value() - den.value()).exp());
    }
    let shifted = regularized_incomplete_beta(hi, alpha + 1.0, beta)?
        - regularized_incomplete_beta(lo, alpha + 1.0, beta)?;
    Ok(alpha / (alpha + beta) * shifted / mass)
}

/// Model-averaged posterior expectation Σ wᵢ · E[θ | component i].
pub fn posterior_mean(post: &MixturePosterior) -> Result<f64> {
    let mut mean = 0.0;
    for comp in &post.components {
        mean += comp.weight * component_mean(&comp.law)?;
    }
    Ok(mean)
}

/// Model-averaged probability that the next Bernoulli trial succeeds.
///
/// By the law of total probability this is exactly the posterior mean; it is
/// exposed separately because the two contracts are asked differently.
pub fn predictive_next(post: &MixturePosterior) -> Result<f64> {
    posterior_mean(post)
}

/// Laplace normal approximation to a beta posterior component: mean at the
/// mode (α'−1)/(α'+β'−2), sd = sqrt(mode·(1−mode)/n_eff) with
/// n_eff = α'+β'−2, which equals the mode-curvature rule −1/∂²ln π.
///
/// Errors unless the posterior is a beta law with an interior mode strictly
/// inside its truncation bounds.
pub fn normal_approximation(comp: &ComponentPosterior) -> Result<NormalApproximation> {
    let (alpha, beta, lo, hi) = match &comp.law {
        PosteriorLaw::TruncatedBeta { alpha, beta, lo, hi } => (*alpha, *beta, *lo, *hi),
        other => {
            return Err(Error::Domain(format!(
                "normal approximation requires a beta posterior, got {other:?}"
            )))
        }
    };
    if alpha <= 1.0 || beta <= 1.0 {
        return Err(Error::Domain(format!(
            "normal approximation requires an interior mode; beta({alpha}, {beta}) has none"
        )));
    }
    let n_eff = alpha + beta - 2.0;
    let mode = (alpha - 1.0) / n_eff;
    if mode <= lo || mode >= hi {
        return Err(Error::Domain(format!(
            "posterior mode {mode} lies on or outside the support ({lo}, {hi})"
        )));
    }
    Ok(NormalApproximation {
        mean: mode,
        sd: (mode * (1.0 - mode) / n_eff).sqrt(),
    })
}
