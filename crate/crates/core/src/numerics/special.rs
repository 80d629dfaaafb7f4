//! Gamma/beta family special functions.

use crate::error::{Error, Result};

use super::LogValue;

const LOG_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

// Lanczos approximation, g = 7, nine-term coefficient set (Godfrey's
// published constants, also used by GSL and Numerical Recipes derivatives).
// Relative error on Γ stays below ~1e-13 across the positive axis.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Asymptotic (Stirling) series coefficients B₂ₖ/((2k)(2k−1)) for x ≥ 12,
// where the truncation error of eight terms is below 1e-18.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1_260.0,
    -1.0 / 1_680.0,
    1.0 / 1_188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3_617.0 / 122_400.0,
];
const STIRLING_CUTOFF: f64 = 12.0;

/// Exact product with error term via fused multiply-add.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// ln(x) refined by one Newton step through exp, returned as (hi, lo).
///
/// The correction term recovers most of the half-ulp rounding of `ln`,
/// which matters once the log is multiplied by a large coefficient.
fn refined_ln(x: f64) -> (f64, f64) {
    let hi = x.ln();
    let lo = x * (-hi).exp() - 1.0;
    (hi, lo)
}

/// Compensated (Neumaier) summation; returns the correctly-rounded-ish sum.
fn compensated_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// ln Γ(x) for x > 0.
///
/// Uses the Lanczos rational approximation below 12 and the Stirling series
/// above, with compensated evaluation of the dominant `(x−½)·ln x` term so
/// the result stays within about one ulp of the true value.
pub fn log_gamma(x: f64) -> Result<LogValue> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "log_gamma requires a positive finite argument, got {x}"
        )));
    }
    let value = if x < STIRLING_CUTOFF {
        lanczos_ln_gamma(x)
    } else {
        stirling_ln_gamma(x)
    };
    Ok(LogValue::new(value))
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let (lt_hi, lt_lo) = refined_ln(t);
    let (p_hi, p_lo) = two_prod(z + 0.5, lt_hi);
    compensated_sum(&[
        p_hi,
        -t,
        LOG_SQRT_2PI,
        series.ln(),
        p_lo,
        (z + 0.5) * lt_lo,
    ])
}

fn stirling_ln_gamma(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    let mut series = 0.0_f64;
    for &c in STIRLING_COEFFS.iter().rev() {
        series = series * inv2 + c;
    }
    series /= x;
    let (lx_hi, lx_lo) = refined_ln(x);
    let (p_hi, p_lo) = two_prod(x - 0.5, lx_hi);
    compensated_sum(&[p_hi, -x, LOG_SQRT_2PI, series, p_lo, (x - 0.5) * lx_lo])
}

/// ln C(n, k).
///
/// Exactly zero for k = 0 and k = n, and exactly symmetric in k ↔ n−k (the
/// argument is canonicalized to min(k, n−k) before evaluation).
pub fn log_binomial_coefficient(n: u64, k: u64) -> Result<LogValue> {
    if k > n {
        return Err(Error::Domain(format!(
            "log_binomial_coefficient requires k <= n, got k={k}, n={n}"
        )));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(LogValue::new(0.0));
    }
    let n = n as f64;
    let k = k as f64;
    let value = log_gamma(n + 1.0)?.value()
        - log_gamma(k + 1.0)?.value()
        - log_gamma(n - k + 1.0)?.value();
    Ok(LogValue::new(value))
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a+b).
pub fn log_beta(a: f64, b: f64) -> Result<LogValue> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "log_beta requires positive arguments, got a={a}, b={b}"
        )));
    }
    let value = log_gamma(a)?.value() + log_gamma(b)?.value() - log_gamma(a + b)?.value();
    Ok(LogValue::new(value))
}

const INC_BETA_EPS: f64 = 1e-14;
const INC_BETA_MAX_ITER: usize = 500;
const FPMIN: f64 = 1e-300;

/// Regularized incomplete beta function I_x(a, b).
///
/// Continued fraction with modified Lentz iteration at tolerance 1e-14,
/// switching to the symmetric expansion when x > (a+1)/(a+b+2).
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "regularized_incomplete_beta requires positive shape parameters, got a={a}, b={b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "regularized_incomplete_beta requires x in [0,1], got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - log_beta(a, b)?.value();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_continued_fraction(a, b, x)? / a)
    } else {
        Ok(1.0 - front * beta_continued_fraction(b, a, 1.0 - x)? / b)
    }
}

/// Lentz evaluation of the incomplete-beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0_f64;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=INC_BETA_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        // Even step.
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        // Odd step.
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= INC_BETA_EPS {
            return Ok(h);
        }
    }
    Err(Error::NonConvergence(format!(
        "incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}"
    )))
}
