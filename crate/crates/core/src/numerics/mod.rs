//! Special functions and quadrature in natural-log space.
//!
//! All evidence computations in this crate go through these primitives.
//! Quantities like C(400,160)·2⁻⁴⁰⁰ underflow in linear space, so values are
//! carried as natural logarithms and exponentiated only at API boundaries.
//!
//! Every function here is pure: no shared mutable state, safe to call from
//! any number of threads.

mod quadrature;
mod special;

pub use quadrature::integrate_density;
pub use special::{log_beta, log_binomial_coefficient, log_gamma, regularized_incomplete_beta};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Natural logarithm of a nonnegative real.
///
/// The stored value is finite or `-inf` (the log of zero); it is never NaN
/// on valid inputs.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    /// Wraps a natural logarithm. `-inf` encodes a zero underlying value.
    pub fn new(ln: f64) -> Self {
        debug_assert!(!ln.is_nan(), "LogValue must not be NaN");
        LogValue(ln)
    }

    /// Log of an ordinary nonnegative value.
    pub fn from_linear(x: f64) -> Result<Self> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Domain(format!(
                "LogValue requires a nonnegative value, got {x}"
            )));
        }
        Ok(LogValue(x.ln()))
    }

    /// The stored natural logarithm.
    pub fn value(self) -> f64 {
        self.0
    }

    /// Back to linear scale (may underflow to 0 or overflow to inf).
    pub fn exp(self) -> f64 {
        self.0.exp()
    }

    /// True when the underlying value is exactly zero.
    pub fn is_zero_mass(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl std::fmt::Display for LogValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

// JSON cannot carry infinities as numbers, so the log of zero round-trips
// through the string "-inf".
impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            serializer.serialize_f64(self.0)
        } else if self.0 == f64::NEG_INFINITY {
            serializer.serialize_str("-inf")
        } else {
            serializer.serialize_str("inf")
        }
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Ok(LogValue(v)),
            Repr::Str(s) => match s.as_str() {
                "-inf" => Ok(LogValue(f64::NEG_INFINITY)),
                "inf" => Ok(LogValue(f64::INFINITY)),
                other => Err(D::Error::custom(format!("invalid log value: {other}"))),
            },
        }
    }
}

/// ln Σ exp(tᵢ), computed by shifting by the maximum term.
///
/// Exact when all terms are `-inf` (returns `-inf`); errors on an empty
/// list.
pub fn log_sum_exp(terms: &[LogValue]) -> Result<LogValue> {
    if terms.is_empty() {
        return Err(Error::Domain("log_sum_exp of an empty list".into()));
    }
    Ok(LogValue::new(log_sum_exp_raw(
        terms.iter().map(|t| t.value()),
    )))
}

/// Shift-by-max log-sum-exp over plain floats.
pub(crate) fn log_sum_exp_raw(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// x·ln(y) with the convention 0·ln(0) = 0.
pub(crate) fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}
