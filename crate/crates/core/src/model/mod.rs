//! Domain types: observations, continuous priors, and prior mixtures.

mod prior_spec;

pub use prior_spec::{parse_mixture_prior, parse_single_density, parse_tabulated_density};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Successes and trials of a Bernoulli process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialObservation {
    successes: u64,
    trials: u64,
}

impl BinomialObservation {
    pub fn new(successes: u64, trials: u64) -> Result<Self> {
        if successes > trials {
            return Err(Error::Domain(format!(
                "successes ({successes}) must not exceed trials ({trials})"
            )));
        }
        Ok(BinomialObservation { successes, trials })
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn failures(&self) -> u64 {
        self.trials - self.successes
    }
}

/// Counts with/without a property in two samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub x0: u64,
    pub y0: u64,
    pub x1: u64,
    pub y1: u64,
}

impl ContingencyTable {
    pub fn new(x0: u64, y0: u64, x1: u64, y1: u64) -> Self {
        ContingencyTable { x0, y0, x1, y1 }
    }

    pub fn total(&self) -> u64 {
        self.x0 + self.y0 + self.x1 + self.y1
    }

    /// Swap the two samples.
    pub fn swapped(&self) -> Self {
        ContingencyTable::new(self.x1, self.y1, self.x0, self.y0)
    }
}

/// A density over [0,1] tabulated on a strictly increasing grid, linearly
/// interpolated between knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedDensity {
    grid: Vec<f64>,
    density: Vec<f64>,
}

impl TabulatedDensity {
    /// Validates monotonicity, nonnegativity, and unit mass (trapezoid rule
    /// is exact for a piecewise-linear density; tolerance 1e-8).
    pub fn new(grid: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != density.len() {
            return Err(Error::InvalidPrior(
                "tabulated density needs at least two (grid, density) pairs of equal length"
                    .into(),
            ));
        }
        if grid.iter().any(|g| !(0.0..=1.0).contains(g)) {
            return Err(Error::InvalidPrior(
                "tabulated grid points must lie in [0,1]".into(),
            ));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPrior(
                "tabulated grid must be strictly increasing".into(),
            ));
        }
        if density.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidPrior(
                "tabulated density values must be finite and nonnegative".into(),
            ));
        }
        let mass = trapezoid(&grid, &density);
        if (mass - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidPrior(format!(
                "tabulated density must integrate to 1 (within 1e-8), got {mass}"
            )));
        }
        Ok(TabulatedDensity { grid, density })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Linear interpolation; zero outside the grid.
    pub fn density(&self, theta: f64) -> f64 {
        let (lo, hi) = self.support();
        if theta < lo || theta > hi {
            return 0.0;
        }
        let idx = match self
            .grid
            .binary_search_by(|g| g.partial_cmp(&theta).unwrap())
        {
            Ok(i) => return self.density[i],
            Err(i) => i,
        };
        let (g0, g1) = (self.grid[idx - 1], self.grid[idx]);
        let (d0, d1) = (self.density[idx - 1], self.density[idx]);
        d0 + (d1 - d0) * (theta - g0) / (g1 - g0)
    }

    pub fn ln_density(&self, theta: f64) -> f64 {
        self.density(theta).ln()
    }

    /// Grid knots strictly inside the support (the kinks of the
    /// interpolant).
    pub fn interior_knots(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        self.grid
            .iter()
            .copied()
            .filter(|g| *g > lo && *g < hi)
            .collect()
    }
}

fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(g, v)| 0.5 * (v[0] + v[1]) * (g[1] - g[0]))
        .sum()
}

/// A normalized density over the success parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContinuousPrior {
    Uniform { lo: f64, hi: f64 },
    Beta { alpha: f64, beta: f64 },
    Tabulated(TabulatedDensity),
}

impl ContinuousPrior {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
            return Err(Error::InvalidPrior(format!(
                "uniform support must satisfy 0 <= lo < hi <= 1, got [{lo}, {hi}]"
            )));
        }
        Ok(ContinuousPrior::Uniform { lo, hi })
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidPrior(format!(
                "beta shape parameters must be positive and finite, got ({alpha}, {beta})"
            )));
        }
        Ok(ContinuousPrior::Beta { alpha, beta })
    }

    pub fn tabulated(density: TabulatedDensity) -> Self {
        ContinuousPrior::Tabulated(density)
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            ContinuousPrior::Uniform { lo, hi } => (*lo, *hi),
            ContinuousPrior::Beta { .. } => (0.0, 1.0),
            ContinuousPrior::Tabulated(t) => t.support(),
        }
    }

    /// ln of the (normalized) density at `theta`; `-inf` outside the support.
    pub fn ln_density(&self, theta: f64) -> f64 {
        match self {
            ContinuousPrior::Uniform { lo, hi } => {
                if theta < *lo || theta > *hi {
                    f64::NEG_INFINITY
                } else {
                    -(hi - lo).ln()
                }
            }
            ContinuousPrior::Beta { alpha, beta } => {
                if !(0.0..=1.0).contains(&theta) {
                    return f64::NEG_INFINITY;
                }
                crate::numerics::xlogy(alpha - 1.0, theta)
                    + crate::numerics::xlogy(beta - 1.0, 1.0 - theta)
                    - crate::numerics::log_beta(*alpha, *beta)
                        .expect("validated shapes")
                        .value()
            }
            ContinuousPrior::Tabulated(t) => t.ln_density(theta),
        }
    }

    /// Knots where the density is not smooth (tabulated grids only).
    pub fn interior_knots(&self) -> Vec<f64> {
        match self {
            ContinuousPrior::Tabulated(t) => t.interior_knots(),
            _ => Vec::new(),
        }
    }
}

/// Either a point mass or a continuous density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum PriorLaw {
    PointMass { location: f64 },
    Continuous(ContinuousPrior),
}

impl PriorLaw {
    pub fn point_mass(location: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&location) {
            return Err(Error::InvalidPrior(format!(
                "point mass location must lie in [0,1], got {location}"
            )));
        }
        Ok(PriorLaw::PointMass { location })
    }
}

/// One weighted component of a mixture prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorComponent {
    weight: f64,
    law: PriorLaw,
}

impl PriorComponent {
    pub fn new(weight: f64, law: PriorLaw) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidPrior(format!(
                "component weight must lie in [0,1], got {weight}"
            )));
        }
        Ok(PriorComponent { weight, law })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn law(&self) -> &PriorLaw {
        &self.law
    }
}

/// A weighted mixture of point masses and continuous densities.
///
/// Weights must sum to 1 within 1e-12 and no two point masses may share a
/// location.  Two components cover the classical tests, but any number is
/// accepted: a prior may well carry several spikes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixturePrior {
    components: Vec<PriorComponent>,
}

impl MixturePrior {
    pub fn new(components: Vec<PriorComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidPrior(
                "mixture prior needs at least one component".into(),
            ));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPrior(format!(
                "component weights must sum to 1 (within 1e-12), got {total}"
            )));
        }
        let mut points: Vec<f64> = components
            .iter()
            .filter_map(|c| match c.law {
                PriorLaw::PointMass { location } => Some(location),
                PriorLaw::Continuous(_) => None,
            })
            .collect();
        points.sort_by(|p, q| p.partial_cmp(q).unwrap());
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPrior(
                "at most one point mass is allowed at any given location".into(),
            ));
        }
        Ok(MixturePrior { components })
    }

    pub fn components(&self) -> &[PriorComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Index of the unique continuous component, if there is exactly one.
    pub fn single_continuous_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, c) in self.components.iter().enumerate() {
            if matches!(c.law, PriorLaw::Continuous(_)) {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

/// The chromosome-counting prior for the linkage test: eleven in twelve gene
/// pairs land on different chromosomes (cross-over rate exactly one half),
/// the rest on the same chromosome with the rate uniform on (0, ½).
///
/// The point mass sits on the boundary of the slab's support; a single point
/// carries zero continuous mass, so no special handling is needed.  The
/// marginal density over (0, ½) is (1/12)·2 = 1/6.
pub fn haldane_linkage_prior() -> MixturePrior {
    MixturePrior::new(vec![
        PriorComponent::new(11.0 / 12.0, PriorLaw::point_mass(0.5).unwrap()).unwrap(),
        PriorComponent::new(
            1.0 / 12.0,
            PriorLaw::Continuous(ContinuousPrior::uniform(0.0, 0.5).unwrap()),
        )
        .unwrap(),
    ])
    .expect("weights sum to 1")
}

/// Even odds between a point null at one half and a uniform alternative on
/// (0,1) — the one-parameter reduction of the equal-prior-probability test.
pub fn jeffreys_equal_odds_prior() -> MixturePrior {
    MixturePrior::new(vec![
        PriorComponent::new(0.5, PriorLaw::point_mass(0.5).unwrap()).unwrap(),
        PriorComponent::new(
            0.5,
            PriorLaw::Continuous(ContinuousPrior::uniform(0.0, 1.0).unwrap()),
        )
        .unwrap(),
    ])
    .expect("weights sum to 1")
}

/// Point null at `theta0` vs a uniform slab on (0,1), with prior odds
/// `prior_odds` in favor of the null.
pub fn point_vs_uniform_prior(theta0: f64, prior_odds: f64) -> Result<MixturePrior> {
    if !prior_odds.is_finite() || prior_odds <= 0.0 {
        return Err(Error::Domain(format!(
            "prior odds must be positive and finite, got {prior_odds}"
        )));
    }
    let w0 = prior_odds / (1.0 + prior_odds);
    MixturePrior::new(vec![
        PriorComponent::new(w0, PriorLaw::point_mass(theta0)?)?,
        PriorComponent::new(
            1.0 - w0,
            PriorLaw::Continuous(ContinuousPrior::uniform(0.0, 1.0)?),
        )?,
    ])
}
