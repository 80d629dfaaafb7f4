//! Independent brute-force verifiers.
//!
//! Exact rational arithmetic for factorial expressions and fixed-grid
//! Simpson quadrature for the evidence integrals.  Nothing here calls the
//! main-path routines in [`crate::numerics`] or [`crate::evidence`]; these
//! functions exist so every value the main path produces can be recomputed
//! from scratch, by the test suite and by the CLI self-check.  They may be
//! orders of magnitude slower than the main path — that is fine.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::model::{BinomialObservation, ContingencyTable, ContinuousPrior, PriorLaw};
use crate::numerics::LogValue;

/// n! as an arbitrary-precision integer.
pub fn factorial(n: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 2..=n {
        out *= i;
    }
    out
}

/// C(n, k) as an arbitrary-precision integer (zero when k > n).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut out = BigUint::one();
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Natural log of a big unsigned integer, accurate to a few ulps.
///
/// Values beyond f64 range are handled by splitting off the binary exponent.
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        let small = u64::try_from(x.clone()).expect("fits in u64");
        return (small as f64).ln();
    }
    let shift = bits - 53;
    let mantissa = u64::try_from(x >> shift).expect("53 bits fit in u64");
    (mantissa as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive big rational.
pub fn ln_rational(r: &BigRational) -> f64 {
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    assert!(r.numer().sign() != num_bigint::Sign::Minus, "log of a negative rational");
    big_ln(num) - big_ln(den)
}

/// Exact posterior odds of the two-proportion test as a reduced fraction:
///
/// (x0+x1)!(y0+y1)!/(x0+x1+y0+y1+1)! over x0!y0!/(x0+y0+1)! · x1!y1!/(x1+y1+1)!.
pub fn exact_two_proportion_odds(table: &ContingencyTable) -> BigRational {
    let ContingencyTable { x0, y0, x1, y1 } = *table;
    let total = x0 + y0 + x1 + y1;
    let num = factorial(x0 + x1) * factorial(y0 + y1) * factorial(x0 + y0 + 1) * factorial(x1 + y1 + 1);
    let den = factorial(total + 1) * factorial(x0) * factorial(y0) * factorial(x1) * factorial(y1);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The same posterior odds by brute-force quadrature of the defining
/// integrals: one integral over the common proportion for the null, the
/// product of per-sample integrals for the alternative.
///
/// Composite Simpson on `intervals` uniform subintervals (forced even).
/// Only sensible for modest totals where the integrands stay in linear
/// f64 range.
pub fn quadrature_two_proportion_odds(table: &ContingencyTable, intervals: usize) -> f64 {
    let ContingencyTable { x0, y0, x1, y1 } = *table;
    let q0 = simpson_monomial(x0 + x1, y0 + y1, intervals);
    let q1 = simpson_monomial(x0, y0, intervals) * simpson_monomial(x1, y1, intervals);
    q0 / q1
}

/// ∫₀¹ θˣ(1−θ)ʸ dθ by composite Simpson.
fn simpson_monomial(x: u64, y: u64, intervals: usize) -> f64 {
    let n = intervals.max(2) & !1;
    let h = 1.0 / n as f64;
    let f = |theta: f64| theta.powi(x as i32) * (1.0 - theta).powi(y as i32);
    let mut sum = f(0.0) + f(1.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(h * i as f64);
    }
    sum * h / 3.0
}

/// Fixed-grid Simpson estimate of ln ∫ C(n,a) θᵃ(1−θ)ⁿ⁻ᵃ f(θ) dθ in shifted
/// log space, with the combinatorial factor taken from exact big-integer
/// arithmetic.
///
/// Point masses are not griddable and produce a domain error, as do beta
/// densities with a shape parameter below 1 (their endpoint singularity
/// defeats a fixed grid).  `grid_size` is the number of subintervals,
/// at least 1000, forced even.
pub fn grid_log_evidence(
    obs: &BinomialObservation,
    law: &PriorLaw,
    grid_size: usize,
) -> Result<LogValue> {
    let prior = match law {
        PriorLaw::PointMass { .. } => {
            return Err(Error::Domain(
                "grid_log_evidence: a point mass is not griddable".into(),
            ))
        }
        PriorLaw::Continuous(c) => c,
    };
    if grid_size < 1_000 {
        return Err(Error::Domain(format!(
            "grid_log_evidence needs at least 1000 subintervals, got {grid_size}"
        )));
    }
    let a = obs.successes() as f64;
    let b = obs.failures() as f64;
    let ln_choose = big_ln(&binomial(obs.trials(), obs.successes()));

    let (lo, hi) = prior.support();
    let value = match prior {
        ContinuousPrior::Uniform { lo, hi } => {
            let ln_f = -(hi - lo).ln();
            shifted_simpson(|t| monomial_ln(a, b, t) + ln_f, *lo, *hi, grid_size)
        }
        ContinuousPrior::Beta { alpha, beta } => {
            if *alpha < 1.0 || *beta < 1.0 {
                return Err(Error::Domain(
                    "grid_log_evidence: beta shapes below 1 are singular at an endpoint".into(),
                ));
            }
            // Normalize numerically: the ratio of two grid integrals
            // eliminates B(alpha, beta) without any gamma-function call.
            let ln_kernel = |t: f64| monomial_ln(alpha - 1.0, beta - 1.0, t);
            let unnorm = shifted_simpson(|t| monomial_ln(a, b, t) + ln_kernel(t), lo, hi, grid_size);
            let norm = shifted_simpson(ln_kernel, lo, hi, grid_size);
            unnorm - norm
        }
        ContinuousPrior::Tabulated(t) => {
            shifted_simpson(|x| monomial_ln(a, b, x) + t.ln_density(x), lo, hi, grid_size)
        }
    };
    Ok(LogValue::new(ln_choose + value))
}

fn monomial_ln(a: f64, b: f64, t: f64) -> f64 {
    let first = if a == 0.0 { 0.0 } else { a * t.ln() };
    let second = if b == 0.0 { 0.0 } else { b * (1.0 - t).ln() };
    first + second
}

/// ln ∫ exp(g) over [lo, hi]: composite Simpson after shifting by max g.
fn shifted_simpson<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, intervals: usize) -> f64 {
    let n = intervals & !1;
    let h = (hi - lo) / n as f64;
    let mut shift = f64::NEG_INFINITY;
    let point = |i: usize| if i == n { hi } else { lo + h * i as f64 };
    for i in 0..=n {
        shift = shift.max(g(point(i)));
    }
    if shift == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let eval = |i: usize| {
        let v = g(point(i)) - shift;
        if v == f64::NEG_INFINITY {
            0.0
        } else {
            v.exp()
        }
    };
    let mut sum = eval(0) + eval(n);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * eval(i);
    }
    shift + (sum * h / 3.0).ln()
}

/// Exact posterior probability that the whole population of `n` carries the
/// property after sampling `m` members that all do, summing the
/// hypergeometric prior predictives C(r, m) over r = m..n.
///
/// Equals (m+1)/(n+1) by the hockey-stick identity; this function performs
/// the summation literally.
pub fn enumerate_succession(m: u64, n: u64) -> Result<BigRational> {
    if m > n || n > 200 {
        return Err(Error::Domain(format!(
            "enumerate_succession requires 0 <= m <= n <= 200, got m={m}, n={n}"
        )));
    }
    // C(r, m) built incrementally: C(r+1, m) = C(r, m)·(r+1)/(r+1−m).
    let mut term = BigUint::one(); // C(m, m)
    let mut sum = term.clone();
    let mut top = BigUint::one(); // C(n, m) once the loop ends
    for r in m..n {
        term = term * (r + 1) / (r + 1 - m);
        sum += &term;
        top = term.clone();
    }
    if m == n {
        top = BigUint::one();
    }
    Ok(BigRational::new(BigInt::from(top), BigInt::from(sum)))
}

/// Exact Bayes factor of a point null at one half against a uniform slab on
/// (0,1): (n+1)·C(n,a)·2⁻ⁿ as a reduced fraction.
pub fn exact_half_point_vs_uniform_bf(n: u64, a: u64) -> BigRational {
    let num = binomial(n, a) * (n + 1);
    let den = BigUint::one() << n;
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binomial probability C(n,a)·2⁻ⁿ of `a` successes at rate one half.
pub fn exact_half_binomial_pmf(n: u64, a: u64) -> BigRational {
    BigRational::new(BigInt::from(binomial(n, a)), BigInt::from(BigUint::one() << n))
}
