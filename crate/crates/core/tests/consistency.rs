//! Cross-route consistency: every main-path evidence computation is checked
//! against an independent oracle route (exact rational arithmetic or
//! fixed-grid quadrature).

use num_traits::ToPrimitive;
use spikeslab::classic::jeffreys_two_proportion;
use spikeslab::evidence::log_marginal_likelihood;
use spikeslab::model::{
    BinomialObservation, ContingencyTable, ContinuousPrior, PriorLaw, TabulatedDensity,
};
use spikeslab::oracle;
use spikeslab::posterior::{component_mean, PosteriorLaw};

fn obs(a: u64, n: u64) -> BinomialObservation {
    BinomialObservation::new(a, n).unwrap()
}

#[test]
fn linkage_slab_evidence_matches_grid_oracle() {
    let law = PriorLaw::Continuous(ContinuousPrior::uniform(0.0, 0.5).unwrap());
    let o = obs(160, 400);
    let main = log_marginal_likelihood(&o, &law).unwrap().value();
    let grid = oracle::grid_log_evidence(&o, &law, 100_000).unwrap().value();
    assert!(
        (main - grid).abs() <= 1e-8 * main.abs().max(1.0),
        "{main} vs {grid}"
    );
}

#[test]
fn beta_prior_evidence_matches_grid_oracle() {
    let law = PriorLaw::Continuous(ContinuousPrior::beta(2.0, 3.0).unwrap());
    for (a, n) in [(0u64, 4u64), (3, 10), (45, 90)] {
        let o = obs(a, n);
        let main = log_marginal_likelihood(&o, &law).unwrap().value();
        let grid = oracle::grid_log_evidence(&o, &law, 50_000).unwrap().value();
        assert!(
            (main - grid).abs() <= 1e-7 * main.abs().max(1.0),
            "a={a}, n={n}: {main} vs {grid}"
        );
    }
}

#[test]
fn tabulated_prior_evidence_matches_grid_oracle() {
    // Triangle density peaked at 1/2.
    let tab = TabulatedDensity::new(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 0.0]).unwrap();
    let law = PriorLaw::Continuous(ContinuousPrior::Tabulated(tab));
    for (a, n) in [(0u64, 0u64), (5, 12), (30, 60)] {
        let o = obs(a, n);
        let main = log_marginal_likelihood(&o, &law).unwrap().value();
        let grid = oracle::grid_log_evidence(&o, &law, 50_000).unwrap().value();
        assert!(
            (main - grid).abs() <= 1e-7 * main.abs().max(1.0),
            "a={a}, n={n}: {main} vs {grid}"
        );
    }
}

#[test]
fn two_proportion_exact_route_exhaustive_at_total_forty() {
    // The totals-<=-20 sweep runs in the acceptance suite; the factorial
    // expressions are exercised here out to the totals-<=-40 envelope.
    let total = 40u64;
    for x0 in 0..=total {
        for y0 in 0..=(total - x0) {
            for x1 in 0..=(total - x0 - y0) {
                let y1 = total - x0 - y0 - x1;
                let table = ContingencyTable::new(x0, y0, x1, y1);
                let main_ln = jeffreys_two_proportion(&table, 1.0)
                    .unwrap()
                    .posterior_odds_01
                    .ln();
                let exact_ln = oracle::ln_rational(&oracle::exact_two_proportion_odds(&table));
                let rel = ((main_ln - exact_ln).exp() - 1.0).abs();
                assert!(rel <= 1e-9, "{table:?}: {main_ln} vs {exact_ln}");
            }
        }
    }
}

#[test]
fn two_proportion_three_routes_agree_on_sampled_tables() {
    // Exhaustive totals-<=-20 coverage runs in the acceptance suite; here a
    // spread of larger tables.
    for table in [
        ContingencyTable::new(12, 3, 4, 17),
        ContingencyTable::new(20, 20, 20, 20),
        ContingencyTable::new(0, 9, 9, 0),
        ContingencyTable::new(33, 1, 2, 30),
        ContingencyTable::new(7, 0, 0, 0),
    ] {
        let report = jeffreys_two_proportion(&table, 1.0).unwrap();
        let exact = oracle::exact_two_proportion_odds(&table);
        let exact_ln = oracle::ln_rational(&exact);
        let main_ln = report.posterior_odds_01.ln();
        assert!(
            (main_ln - exact_ln).abs() <= 1e-9 * exact_ln.abs().max(1.0),
            "{table:?}: {main_ln} vs exact {exact_ln}"
        );
        let quad = oracle::quadrature_two_proportion_odds(&table, 4_000);
        let exact_f = exact.to_f64().unwrap();
        assert!(
            ((quad - exact_f) / exact_f).abs() <= 1e-7,
            "{table:?}: quadrature {quad} vs exact {exact_f}"
        );
    }
}

#[test]
fn truncated_beta_mean_matches_weighted_grid_route() {
    // The same posterior mean through the tabulated-quadrature law: a
    // uniform(0, 1/2) prior tabulated on a trivial two-point grid.
    let tab = TabulatedDensity::new(vec![0.0, 0.5], vec![2.0, 2.0]).unwrap();
    let via_beta = component_mean(&PosteriorLaw::TruncatedBeta {
        alpha: 161.0,
        beta: 241.0,
        lo: 0.0,
        hi: 0.5,
    })
    .unwrap();
    let via_grid = component_mean(&PosteriorLaw::WeightedTabulated {
        prior: tab,
        successes: 160,
        failures: 240,
    })
    .unwrap();
    assert!(
        (via_beta - via_grid).abs() < 1e-8,
        "{via_beta} vs {via_grid}"
    );
}

#[test]
fn succession_oracle_identity_beyond_acceptance_range() {
    for (m, n) in [(0u64, 200u64), (118, 200), (200, 200)] {
        let exact = oracle::enumerate_succession(m, n).unwrap();
        let formula = oracle::BigRational::new(((m + 1) as i64).into(), ((n + 1) as i64).into());
        assert_eq!(exact, formula);
    }
}
