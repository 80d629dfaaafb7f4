//! Parser for the declarative prior-specification text format.
//!
//! One component per line, `weight kind params...`, whitespace separated:
//!
//! ```text
//! # linkage prior
//! 11/12  point     0.5
//! 1/12   uniform   0 0.5
//! ```
//!
//! Kinds: `point <loc>`, `uniform <lo> <hi>`, `beta <alpha> <beta>`,
//! `tabulated <path>`.  Weights and parameters accept plain floats or
//! `a/b` fractions.  `#` starts a comment; blank lines are ignored.
//! Tabulated paths are resolved relative to `base_dir` and point to a file
//! of `theta density` pairs, one per line.

use std::path::Path;

use crate::error::{Error, Result};

use super::{ContinuousPrior, MixturePrior, PriorComponent, PriorLaw, TabulatedDensity};

/// Parses a full mixture-prior document.
pub fn parse_mixture_prior(text: &str, base_dir: &Path) -> Result<MixturePrior> {
    let mut components = Vec::new();
    for (lineno, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(Error::PriorSpec(format!(
                "line {lineno}: expected `weight kind params...`, got `{line}`"
            )));
        }
        let weight = parse_number(tokens[0])
            .map_err(|e| Error::PriorSpec(format!("line {lineno}: weight: {e}")))?;
        let law = parse_law(&tokens[1..], base_dir)
            .map_err(|e| Error::PriorSpec(format!("line {lineno}: {e}")))?;
        components.push(
            PriorComponent::new(weight, law)
                .map_err(|e| Error::PriorSpec(format!("line {lineno}: {e}")))?,
        );
    }
    if components.is_empty() {
        return Err(Error::PriorSpec(
            "prior specification contains no components".into(),
        ));
    }
    MixturePrior::new(components)
}

/// Parses a document that must define exactly one continuous density
/// (weight 1) — the `f` of the law-confirmation test.
pub fn parse_single_density(text: &str, base_dir: &Path) -> Result<ContinuousPrior> {
    let prior = parse_mixture_prior(text, base_dir)?;
    if prior.len() != 1 {
        return Err(Error::PriorSpec(format!(
            "expected exactly one continuous component, got {}",
            prior.len()
        )));
    }
    match prior.components()[0].law() {
        PriorLaw::Continuous(c) => Ok(c.clone()),
        PriorLaw::PointMass { .. } => Err(Error::PriorSpec(
            "expected a continuous density, got a point mass".into(),
        )),
    }
}

/// Parses a tabulated-density file: one `theta density` pair per line.
pub fn parse_tabulated_density(text: &str) -> Result<TabulatedDensity> {
    let mut grid = Vec::new();
    let mut density = Vec::new();
    for (lineno, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::PriorSpec(format!(
                "line {lineno}: expected `theta density`, got `{line}`"
            )));
        }
        grid.push(
            parse_number(tokens[0])
                .map_err(|e| Error::PriorSpec(format!("line {lineno}: theta: {e}")))?,
        );
        density.push(
            parse_number(tokens[1])
                .map_err(|e| Error::PriorSpec(format!("line {lineno}: density: {e}")))?,
        );
    }
    TabulatedDensity::new(grid, density)
}

fn parse_law(tokens: &[&str], base_dir: &Path) -> Result<PriorLaw> {
    let kind = tokens[0];
    let params = &tokens[1..];
    match kind {
        "point" => {
            let [loc] = expect_params::<1>(kind, params)?;
            PriorLaw::point_mass(loc)
        }
        "uniform" => {
            let [lo, hi] = expect_params::<2>(kind, params)?;
            Ok(PriorLaw::Continuous(ContinuousPrior::uniform(lo, hi)?))
        }
        "beta" => {
            let [alpha, beta] = expect_params::<2>(kind, params)?;
            Ok(PriorLaw::Continuous(ContinuousPrior::beta(alpha, beta)?))
        }
        "tabulated" => {
            if params.len() != 1 {
                return Err(Error::PriorSpec(
                    "tabulated takes exactly one path parameter".into(),
                ));
            }
            let path = base_dir.join(params[0]);
            let text = std::fs::read_to_string(&path).map_err(|e| {
                Error::PriorSpec(format!("cannot read tabulated file {}: {e}", path.display()))
            })?;
            Ok(PriorLaw::Continuous(ContinuousPrior::Tabulated(
                parse_tabulated_density(&text)?,
            )))
        }
        other => Err(Error::PriorSpec(format!(
            "unknown prior kind `{other}` (expected point, uniform, beta, or tabulated)"
        ))),
    }
}

fn expect_params<const N: usize>(kind: &str, params: &[&str]) -> Result<[f64; N]> {
    if params.len() != N {
        return Err(Error::PriorSpec(format!(
            "{kind} takes {N} parameter(s), got {}",
            params.len()
        )));
    }
    let mut out = [0.0; N];
    for (slot, raw) in out.iter_mut().zip(params) {
        *slot = parse_number(raw)?;
    }
    Ok(out)
}

/// A float literal or an `a/b` fraction.
fn parse_number(raw: &str) -> Result<f64> {
    if let Some((num, den)) = raw.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::PriorSpec(format!("invalid number `{raw}`")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::PriorSpec(format!("invalid number `{raw}`")))?;
        if den == 0.0 {
            return Err(Error::PriorSpec(format!("zero denominator in `{raw}`")));
        }
        return Ok(num / den);
    }
    raw.parse()
        .map_err(|_| Error::PriorSpec(format!("invalid number `{raw}`")))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}
