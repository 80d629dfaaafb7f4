//! Adaptive Simpson quadrature for evidence integrals, in shifted log space.

use crate::error::{Error, Result};

use super::{xlogy, LogValue};

const ABS_TOL: f64 = 1e-12;
const REL_TOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 60;
const MIN_DEPTH: u32 = 2;
const MAX_EVALS: u64 = 2_000_000;
const COARSE_POINTS: usize = 33;

/// ln ∫ θᵃ(1−θ)ᵇ f(θ) dθ over `support` ⊆ [0,1].
///
/// `ln_density` evaluates ln f(θ); it may return `-inf` where f vanishes and
/// need not be normalized.  `interior_breakpoints` lists points where f is
/// not smooth (the knots of a tabulated density); the integral is split
/// there so the adaptive rule only ever sees smooth pieces.
///
/// The integrand is exponentiated after shifting by the maximum of its log,
/// so the result is valid far below linear-underflow range.  Tolerances:
/// absolute 1e-12, tightened to relative 1e-10 once the integral's scale is
/// known.  Errors with [`Error::NonConvergence`] if the evaluation budget is
/// exhausted first.
pub fn integrate_density<F>(
    ln_density: F,
    support: (f64, f64),
    exponents: (f64, f64),
    interior_breakpoints: &[f64],
) -> Result<LogValue>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = support;
    let (a, b) = exponents;
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
        return Err(Error::Domain(format!(
            "integration support must satisfy 0 <= lo < hi <= 1, got [{lo}, {hi}]"
        )));
    }
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "integrand exponents must be finite and nonnegative, got ({a}, {b})"
        )));
    }

    let ln_g = |theta: f64| xlogy(a, theta) + xlogy(b, 1.0 - theta) + ln_density(theta);

    // Smooth segments between breakpoints.  The mode of θᵃ(1−θ)ᵇ and a few
    // bracketing points at multiples of its Gaussian width are inserted as
    // extra knots so a sharp interior peak always lands on a subdivision
    // boundary where the adaptive rule can see it.
    let mut knots = vec![lo, hi];
    for &k in interior_breakpoints {
        if k > lo && k < hi {
            knots.push(k);
        }
    }
    if a + b > 0.0 {
        let mode = a / (a + b);
        let width = (mode * (1.0 - mode) / (a + b)).sqrt().max(1e-12);
        for offset in [-32.0, -8.0, -2.0, 0.0, 2.0, 8.0, 32.0] {
            let k = mode + offset * width;
            if k > lo && k < hi {
                knots.push(k);
            }
        }
    }
    knots.sort_by(|p, q| p.partial_cmp(q).unwrap());
    knots.dedup();

    // Shift by the maximum of the log integrand: segment endpoints, a coarse
    // scan, and the analytic mode of θᵃ(1−θ)ᵇ when it falls inside.
    let mut shift = f64::NEG_INFINITY;
    let mut probe = |theta: f64| -> Result<()> {
        let v = ln_g(theta);
        if v == f64::INFINITY || v.is_nan() {
            return Err(Error::Domain(format!(
                "log integrand must be bounded above on the support, found {v} at theta={theta}"
            )));
        }
        shift = shift.max(v);
        Ok(())
    };
    for seg in knots.windows(2) {
        for i in 0..=16 {
            probe(seg[0] + (seg[1] - seg[0]) * (i as f64 / 16.0))?;
        }
    }
    if a + b > 0.0 {
        probe((a / (a + b)).clamp(lo, hi))?;
    }
    if shift == f64::NEG_INFINITY {
        return Ok(LogValue::new(f64::NEG_INFINITY));
    }

    let h = |theta: f64| {
        let v = ln_g(theta) - shift;
        if v == f64::NEG_INFINITY {
            0.0
        } else {
            v.exp()
        }
    };

    // Coarse pass fixes the scale so the relative rung of the tolerance
    // ladder can be applied.
    let mut coarse = Vec::with_capacity(knots.len() - 1);
    let mut coarse_total = 0.0;
    for seg in knots.windows(2) {
        let est = composite_simpson(&h, seg[0], seg[1], COARSE_POINTS);
        coarse.push(est);
        coarse_total += est;
    }
    let tol = ABS_TOL.min(REL_TOL * coarse_total).max(
        32.0 * f64::EPSILON * coarse_total.max(f64::MIN_POSITIVE),
    );

    let width: f64 = hi - lo;
    let mut evals: u64 = 0;
    let mut total = 0.0;
    for (seg, &est) in knots.windows(2).zip(&coarse) {
        let share = if coarse_total > 0.0 {
            (est / coarse_total).max((seg[1] - seg[0]) / width)
        } else {
            (seg[1] - seg[0]) / width
        };
        total += adaptive_segment(&h, seg[0], seg[1], tol * share, &mut evals)?;
    }
    if total.is_nan() || total == f64::INFINITY {
        return Err(Error::Domain(
            "integrand is unbounded inside the support".into(),
        ));
    }
    Ok(LogValue::new(shift + total.ln()))
}

fn composite_simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, points: usize) -> f64 {
    let n = points - 1; // even interval count
    let h = (hi - lo) / n as f64;
    let mut sum = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + h * i as f64);
    }
    sum * h / 3.0
}

fn adaptive_segment<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    eps: f64,
    evals: &mut u64,
) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    *evals += 3;
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    adaptive_step(f, lo, flo, mid, fmid, hi, fhi, whole, eps, 0, evals)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    flo: f64,
    mid: f64,
    fmid: f64,
    hi: f64,
    fhi: f64,
    whole: f64,
    eps: f64,
    depth: u32,
    evals: &mut u64,
) -> Result<f64> {
    if *evals > MAX_EVALS {
        return Err(Error::NonConvergence(format!(
            "quadrature exhausted its evaluation budget ({MAX_EVALS}) before reaching tolerance"
        )));
    }
    let lm = 0.5 * (lo + mid);
    let rm = 0.5 * (mid + hi);
    let (flm, frm) = (f(lm), f(rm));
    *evals += 2;
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    let delta = left + right - whole;
    // Degenerate subinterval: no representable refinement left.
    let degenerate = lm <= lo || rm <= mid || lm >= mid || rm >= hi;
    let converged = depth >= MIN_DEPTH && delta.abs() <= 15.0 * eps;
    if depth >= MAX_DEPTH || degenerate || converged {
        return Ok(left + right + delta / 15.0);
    }
    let half = 0.5 * eps;
    Ok(
        adaptive_step(f, lo, flo, lm, flm, mid, fmid, left, half, depth + 1, evals)?
            + adaptive_step(f, mid, fmid, rm, frm, hi, fhi, right, half, depth + 1, evals)?,
    )
}
