//! Oracle-vs-main-path self-verification.
//!
//! Every check recomputes a main-path quantity through the independent
//! oracle route (exact big-integer/rational arithmetic or fixed-grid
//! quadrature) and compares at the stated tolerance.

use serde::{Deserialize, Serialize};

use spikeslab::classic::{broad_succession, jeffreys_two_proportion, law_confirmation};
use spikeslab::evidence::{compare, log_marginal_likelihood};
use spikeslab::model::{
    point_vs_uniform_prior, BinomialObservation, ContingencyTable, ContinuousPrior, PriorLaw,
};
use spikeslab::numerics::{
    log_beta, log_binomial_coefficient, log_gamma, regularized_incomplete_beta,
};
use spikeslab::oracle;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, worst: f64, tol: f64) -> Check {
    Check {
        name: name.to_string(),
        pass: worst <= tol,
        detail: format!("worst deviation {worst:.3e}, tolerance {tol:.0e}"),
    }
}

pub fn run_all() -> Vec<Check> {
    let mut checks = Vec::new();

    // ln Γ against exact big-integer factorials.
    let mut worst = 0.0_f64;
    for n in [1u64, 2, 5, 10, 42, 170, 400, 1_000, 10_000] {
        let got = log_gamma(n as f64 + 1.0).unwrap().value();
        let exact = oracle::big_ln(&oracle::factorial(n));
        worst = worst.max((got - exact).abs() / exact.abs().max(1.0));
    }
    checks.push(check("log_gamma vs exact factorials", worst, 4e-12));

    // ln C(n,k) against exact big-integer binomials.
    let mut worst = 0.0_f64;
    for &(n, k) in &[(4u64, 2u64), (400, 160), (500, 250), (500, 13), (100, 50)] {
        let got = log_binomial_coefficient(n, k).unwrap().value();
        let exact = oracle::big_ln(&oracle::binomial(n, k));
        worst = worst.max((got - exact).abs() / exact.abs().max(1.0));
    }
    checks.push(check("log_binomial vs exact binomials", worst, 1e-12));

    // ln B(161,241) against the exact factorial ratio.
    let got = log_beta(161.0, 241.0).unwrap().value();
    let exact = oracle::big_ln(&oracle::factorial(160)) + oracle::big_ln(&oracle::factorial(240))
        - oracle::big_ln(&oracle::factorial(401));
    checks.push(check(
        "log_beta(161,241) vs exact factorial ratio",
        (got - exact).abs(),
        1e-11,
    ));

    // Incomplete-beta symmetry.
    let mut worst = 0.0_f64;
    for &(x, a, b) in &[
        (0.3, 1.5, 4.0),
        (0.5, 161.0, 241.0),
        (0.9, 40.0, 2.0),
        (0.01, 7.0, 7.0),
    ] {
        let s = regularized_incomplete_beta(x, a, b).unwrap()
            + regularized_incomplete_beta(1.0 - x, b, a).unwrap();
        worst = worst.max((s - 1.0).abs());
    }
    checks.push(check("incomplete beta symmetry", worst, 1e-11));

    // I_{1/2}(161, 241) against fixed-grid quadrature plus exact B.
    let obs = BinomialObservation::new(160, 400).unwrap();
    let slab = PriorLaw::Continuous(ContinuousPrior::uniform(0.0, 0.5).unwrap());
    let gle = oracle::grid_log_evidence(&obs, &slab, 100_000).unwrap().value();
    let ln_choose = oracle::big_ln(&oracle::binomial(400, 160));
    let i_oracle = (gle - ln_choose - 2.0_f64.ln() - exact).exp();
    let i_main = regularized_incomplete_beta(0.5, 161.0, 241.0).unwrap();
    checks.push(check(
        "incomplete beta vs grid quadrature",
        (i_main - i_oracle).abs(),
        1e-9,
    ));

    // Slab evidence of the linkage analysis against the grid oracle.
    let main = log_marginal_likelihood(&obs, &slab).unwrap().value();
    checks.push(check(
        "linkage slab evidence vs grid oracle",
        (main - gle).abs() / main.abs(),
        1e-8,
    ));

    // Two-proportion posterior odds: main path vs exact rationals vs
    // brute-force quadrature.
    let mut worst_exact = 0.0_f64;
    let mut worst_quad = 0.0_f64;
    for x0 in [0u64, 2, 5] {
        for y0 in [0u64, 3] {
            for x1 in [0u64, 1, 4] {
                for y1 in [0u64, 5] {
                    let table = ContingencyTable::new(x0, y0, x1, y1);
                    let main = jeffreys_two_proportion(&table, 1.0).unwrap();
                    let exact = oracle::exact_two_proportion_odds(&table);
                    let exact_ln = oracle::ln_rational(&exact);
                    worst_exact = worst_exact.max(
                        (main.posterior_odds_01.ln() - exact_ln).abs() / exact_ln.abs().max(1.0),
                    );
                    let quad = oracle::quadrature_two_proportion_odds(&table, 2_000);
                    worst_quad = worst_quad
                        .max((quad.ln() - exact_ln).abs() / exact_ln.abs().max(1.0));
                }
            }
        }
    }
    checks.push(check(
        "two-proportion odds vs exact rationals",
        worst_exact,
        1e-9,
    ));
    checks.push(check(
        "two-proportion odds vs double quadrature",
        worst_quad,
        1e-7,
    ));

    // Succession formula vs hypergeometric enumeration.
    let mut all_equal = true;
    for n in 0..=60u64 {
        for m in 0..=n {
            let formula = broad_succession(m, n).unwrap();
            let exact = oracle::enumerate_succession(m, n).unwrap();
            let exact_f = oracle::ln_rational(&exact).exp();
            if (formula - exact_f).abs() > 1e-12 {
                all_equal = false;
            }
        }
    }
    checks.push(Check {
        name: "succession formula vs enumeration".to_string(),
        pass: all_equal,
        detail: "all m <= n <= 60".to_string(),
    });

    // Point-vs-uniform Bayes factor at the null against the exact rational.
    let cmp = compare(
        &BinomialObservation::new(50, 100).unwrap(),
        &point_vs_uniform_prior(0.5, 1.0).unwrap(),
    )
    .unwrap();
    let exact_bf = oracle::ln_rational(&oracle::exact_half_point_vs_uniform_bf(100, 50));
    checks.push(check(
        "null-point Bayes factor vs exact rational",
        (cmp.log_bayes_factor_01 - exact_bf).abs() / exact_bf.abs(),
        1e-9,
    ));

    // Law-confirmation quadrature vs the closed form (n+1)k/(nk+1).
    let uniform = ContinuousPrior::uniform(0.0, 1.0).unwrap();
    let mut worst = 0.0_f64;
    for &n in &[0u64, 1, 10, 100, 1_000] {
        for &k in &[0.1, 0.5, 0.9] {
            let got = law_confirmation(n, k, &uniform).unwrap();
            let expect = (n + 1) as f64 * k / (n as f64 * k + 1.0);
            worst = worst.max((got - expect).abs());
        }
    }
    checks.push(check(
        "law confirmation quadrature vs closed form",
        worst,
        1e-10,
    ));

    checks
}
