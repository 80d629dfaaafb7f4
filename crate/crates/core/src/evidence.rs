//! Marginal likelihoods, Bayes factors, posterior model probabilities, and
//! the odds form of Bayes' theorem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BinomialObservation, ContinuousPrior, MixturePrior, PriorLaw};
use crate::numerics::{
    self, integrate_density, log_beta, log_binomial_coefficient, regularized_incomplete_beta,
    LogValue,
};

/// Everything a pairwise model comparison produces.
///
/// The Bayes factor is oriented as BF₀₁ — point-null (component 0) over the
/// alternative — so values above one support the first component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    /// ln P(D | M₀).
    pub log_ml_0: LogValue,
    /// ln P(D | M₁).
    pub log_ml_1: LogValue,
    /// P(M₀)/P(M₁) before seeing the data.
    pub prior_odds_01: f64,
    /// ln BF₀₁ = ln P(D|M₀) − ln P(D|M₁).  Plus/minus infinity when exactly
    /// one marginal is zero.
    #[serde(with = "ext_real")]
    pub log_bayes_factor_01: f64,
    /// exp(ln BF₀₁) · prior odds.
    #[serde(with = "ext_real")]
    pub posterior_odds_01: f64,
    /// P(M₀ | D).
    pub posterior_prob_0: f64,
    /// P(M₁ | D).
    pub posterior_prob_1: f64,
}

/// Serialize f64 fields that may legitimately be ±inf (JSON numbers cannot).
pub(crate) mod ext_real {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_str("inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "-inf" => Ok(f64::NEG_INFINITY),
                "inf" => Ok(f64::INFINITY),
                other => Err(D::Error::custom(format!("invalid real: {other}"))),
            },
        }
    }
}

/// ln P(D | law): the binomial marginal likelihood under one prior
/// component's law.
///
/// Point mass at θ₀ gives ln C(n,a) + a·ln θ₀ + (n−a)·ln(1−θ₀), with the
/// convention 0·ln 0 = 0, so a point at 0 with observed successes yields
/// zero mass (`-inf`), not an error.  Continuous laws integrate the binomial
/// likelihood against the density: closed beta-function forms for uniform
/// and beta priors, adaptive quadrature for tabulated ones.
pub fn log_marginal_likelihood(obs: &BinomialObservation, law: &PriorLaw) -> Result<LogValue> {
    let a = obs.successes();
    let b = obs.failures();
    let ln_choose = log_binomial_coefficient(obs.trials(), a)?.value();
    let (af, bf) = (a as f64, b as f64);
    let value = match law {
        PriorLaw::PointMass { location } => {
            ln_choose + numerics::xlogy(af, *location) + numerics::xlogy(bf, 1.0 - location)
        }
        PriorLaw::Continuous(prior) => match prior {
            ContinuousPrior::Uniform { lo, hi } => {
                let alpha = af + 1.0;
                let beta = bf + 1.0;
                let mass = regularized_incomplete_beta(*hi, alpha, beta)?
                    - regularized_incomplete_beta(*lo, alpha, beta)?;
                ln_choose + log_beta(alpha, beta)?.value() + mass.max(0.0).ln() - (hi - lo).ln()
            }
            ContinuousPrior::Beta { alpha, beta } => {
                ln_choose + log_beta(alpha + af, beta + bf)?.value()
                    - log_beta(*alpha, *beta)?.value()
            }
            ContinuousPrior::Tabulated(t) => {
                let knots = prior.interior_knots();
                ln_choose
                    + integrate_density(|x| t.ln_density(x), t.support(), (af, bf), &knots)?
                        .value()
            }
        },
    };
    Ok(LogValue::new(value))
}

/// Posterior model weights from weighted log evidences, normalized through a
/// single log-sum-exp.  Shared by the pairwise comparison and the
/// K-component mixture posterior.
pub fn posterior_model_weights(log_weighted_evidence: &[f64]) -> Result<Vec<f64>> {
    if log_weighted_evidence.is_empty() {
        return Err(Error::Domain("no evidence terms to normalize".into()));
    }
    let total = numerics::log_sum_exp_raw(log_weighted_evidence.iter().copied());
    if total == f64::NEG_INFINITY {
        return Err(Error::ImpossibleData(
            "every component assigns zero probability to the observed data".into(),
        ));
    }
    let mut weights: Vec<f64> = log_weighted_evidence
        .iter()
        .map(|lw| (lw - total).exp())
        .collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    Ok(weights)
}

/// Full pairwise comparison of a two-component mixture prior.
pub fn compare(obs: &BinomialObservation, prior: &MixturePrior) -> Result<ModelComparison> {
    let comps = prior.components();
    if comps.len() != 2 {
        return Err(Error::Domain(format!(
            "compare requires exactly two components, got {}",
            comps.len()
        )));
    }
    if comps.iter().any(|c| c.weight() <= 0.0) {
        return Err(Error::Domain(
            "compare requires strictly positive component weights".into(),
        ));
    }
    let log_ml_0 = log_marginal_likelihood(obs, comps[0].law())?;
    let log_ml_1 = log_marginal_likelihood(obs, comps[1].law())?;
    if log_ml_0.is_zero_mass() && log_ml_1.is_zero_mass() {
        return Err(Error::ImpossibleData(
            "both marginal likelihoods are zero".into(),
        ));
    }
    let (w0, w1) = (comps[0].weight(), comps[1].weight());
    let weights = posterior_model_weights(&[
        w0.ln() + log_ml_0.value(),
        w1.ln() + log_ml_1.value(),
    ])?;
    let prior_odds_01 = w0 / w1;
    let log_bayes_factor_01 = log_ml_0.value() - log_ml_1.value();
    Ok(ModelComparison {
        log_ml_0,
        log_ml_1,
        prior_odds_01,
        log_bayes_factor_01,
        posterior_odds_01: odds_update(prior_odds_01, log_bayes_factor_01),
        posterior_prob_0: weights[0],
        posterior_prob_1: weights[1],
    })
}

/// Posterior odds from prior odds and a log Bayes factor.
pub fn odds_update(prior_odds: f64, log_bayes_factor: f64) -> f64 {
    log_bayes_factor.exp() * prior_odds
}

/// The log Bayes factor recovered as the ratio of posterior to prior odds.
pub fn bayes_factor_from_odds(posterior_odds: f64, prior_odds: f64) -> f64 {
    (posterior_odds / prior_odds).ln()
}
