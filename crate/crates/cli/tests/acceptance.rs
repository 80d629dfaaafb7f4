//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured margins (visible with `--nocapture`).  Tolerances are pinned
//! in code, not configurable.

use std::process::Command;

use num_traits::ToPrimitive;
use rand::{rngs::StdRng, Rng, SeedableRng};

use spikeslab::classic::{broad_succession, haldane_linkage, jeffreys_two_proportion, law_confirmation, lindley_sweep};
use spikeslab::evidence::{compare, log_marginal_likelihood, odds_update};
use spikeslab::model::{
    point_vs_uniform_prior, BinomialObservation, ContingencyTable, ContinuousPrior,
    MixturePrior, PriorComponent, PriorLaw,
};
use spikeslab::numerics::{
    integrate_density, log_beta, log_gamma, regularized_incomplete_beta,
};
use spikeslab::oracle;

fn obs(a: u64, n: u64) -> BinomialObservation {
    BinomialObservation::new(a, n).unwrap()
}

/// Criterion 1: the linkage analysis reproduces the printed 1932 numbers.
#[test]
fn criterion_1_haldane_linkage_reproduction() {
    let report = haldane_linkage(&obs(160, 400)).unwrap();
    let p0 = report.comparison.posterior_prob_0;
    let p1 = report.comparison.posterior_prob_1;
    assert!((p0 - 0.028).abs() <= 1e-3, "P(M0|D) = {p0}");
    assert!((p1 - 0.972).abs() <= 1e-3, "P(M1|D) = {p1}");
    assert!(
        (report.expectation - 0.4028).abs() <= 5e-4,
        "expectation = {}",
        report.expectation
    );
    let approx = report.approx.expect("normal approximation exists");
    assert!((approx.mean - 0.400).abs() <= 5e-4, "mean = {}", approx.mean);
    assert!((approx.sd - 0.0245).abs() <= 5e-4, "sd = {}", approx.sd);

    let dev0 = ((report.weighted_evidence_0 - 1.185e-5) / 1.185e-5).abs();
    assert!(dev0 <= 5e-3, "weighted evidence M0 off by {dev0}");
    let m1_ref = 1.0 / (6.0 * 401.0);
    let dev1 = ((report.weighted_evidence_1 - m1_ref) / m1_ref).abs();
    assert!(dev1 <= 5e-3, "weighted evidence M1 off by {dev1}");

    let note = report.note.expect("run report documents the printed-value discrepancy");
    assert!(note.contains("4.56e-4") && note.contains("inconsistent"), "{note}");

    println!(
        "ACCEPTANCE C1 PASS: linkage — P(M0|D)={p0:.6}, E={:.6}, approx=({:.4},{:.5}), \
         evidence deviations {dev0:.2e}/{dev1:.2e}",
        report.expectation, approx.mean, approx.sd
    );
}

/// Criterion 2: law-confirmation quadrature equals (n+1)k/(nk+1) on the full
/// grid, strictly increasing toward 1 in n.
#[test]
fn criterion_2_law_confirmation_closed_form() {
    let uniform = ContinuousPrior::uniform(0.0, 1.0).unwrap();
    let ns = [0u64, 1, 10, 100, 1_000, 10_000];
    let ks = [0.01, 0.1, 0.5, 0.9];
    let mut worst = 0.0_f64;
    for &k in &ks {
        let mut previous = -1.0;
        for &n in &ns {
            let got = law_confirmation(n, k, &uniform).unwrap();
            let closed = (n + 1) as f64 * k / (n as f64 * k + 1.0);
            let dev = (got - closed).abs();
            assert!(dev <= 1e-10, "n={n}, k={k}: {got} vs {closed}");
            worst = worst.max(dev);
            assert!(got > previous, "not strictly increasing at n={n}, k={k}");
            previous = got;
        }
        assert!(previous < 1.0, "sequence approaches but never exceeds 1");
    }
    println!(
        "ACCEPTANCE C2 PASS: law confirmation — {} grid points, worst |quad−closed| = {worst:.2e}",
        ns.len() * ks.len()
    );
}

/// Criterion 3: exhaustive two-proportion check against both oracles for
/// every table with total count at most 20.
#[test]
fn criterion_3_two_proportion_oracle_equivalence() {
    let mut tables = 0u64;
    let mut worst_exact = 0.0_f64;
    let mut worst_quad = 0.0_f64;
    for total in 0..=20u64 {
        for x0 in 0..=total {
            for y0 in 0..=(total - x0) {
                for x1 in 0..=(total - x0 - y0) {
                    let y1 = total - x0 - y0 - x1;
                    let table = ContingencyTable::new(x0, y0, x1, y1);
                    let main_ln = jeffreys_two_proportion(&table, 1.0)
                        .unwrap()
                        .posterior_odds_01
                        .ln();
                    let exact = oracle::exact_two_proportion_odds(&table);
                    let exact_ln = oracle::ln_rational(&exact);
                    // Relative agreement of the odds themselves.
                    let rel_exact = ((main_ln - exact_ln).exp() - 1.0).abs();
                    assert!(
                        rel_exact <= 1e-9,
                        "{table:?}: main {main_ln} vs exact {exact_ln}"
                    );
                    worst_exact = worst_exact.max(rel_exact);

                    let quad = oracle::quadrature_two_proportion_odds(&table, 2_000);
                    let rel_quad = ((quad.ln() - exact_ln).exp() - 1.0).abs();
                    assert!(
                        rel_quad <= 1e-7,
                        "{table:?}: quadrature {quad} vs exact {exact_ln}"
                    );
                    worst_quad = worst_quad.max(rel_quad);
                    tables += 1;
                }
            }
        }
    }
    // 1771 tables have total exactly 20; all smaller totals are included.
    assert_eq!(tables, 10_626);
    println!(
        "ACCEPTANCE C3 PASS: two-proportion — {tables} tables (1771 at total 20), \
         worst rel dev: exact {worst_exact:.2e}, quadrature {worst_quad:.2e}"
    );
}

/// Criterion 4: odds-theorem identity on randomized cases plus prior-weight
/// invariance of the Bayes factor.
#[test]
fn criterion_4_odds_theorem_identity() {
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);
    let mut worst_identity = 0.0_f64;
    for _ in 0..1_000 {
        let prior_odds = rng.gen_range(-5.0_f64..5.0).exp();
        let n = rng.gen_range(1..=200u64);
        let a = rng.gen_range(0..=n);
        let w0 = prior_odds / (1.0 + prior_odds);
        let prior = MixturePrior::new(vec![
            PriorComponent::new(w0, PriorLaw::point_mass(0.5).unwrap()).unwrap(),
            PriorComponent::new(
                1.0 - w0,
                PriorLaw::Continuous(ContinuousPrior::uniform(0.0, 1.0).unwrap()),
            )
            .unwrap(),
        ])
        .unwrap();
        let cmp = compare(&obs(a, n), &prior).unwrap();
        let posterior_odds = odds_update(prior_odds, cmp.log_bayes_factor_01);
        let resid =
            (posterior_odds.ln() - prior_odds.ln() - cmp.log_bayes_factor_01).abs();
        assert!(resid <= 1e-12, "identity residual {resid} at a={a}, n={n}");
        worst_identity = worst_identity.max(resid);
    }

    let mut worst_invariance = 0.0_f64;
    for (a, n) in [(7u64, 20u64), (0, 13), (160, 400), (55, 100)] {
        let slab = PriorLaw::Continuous(ContinuousPrior::uniform(0.0, 1.0).unwrap());
        let reference = compare(
            &obs(a, n),
            &MixturePrior::new(vec![
                PriorComponent::new(0.5, PriorLaw::point_mass(0.5).unwrap()).unwrap(),
                PriorComponent::new(0.5, slab.clone()).unwrap(),
            ])
            .unwrap(),
        )
        .unwrap()
        .log_bayes_factor_01;
        for w in [0.01, 0.1, 0.5, 0.9, 0.99] {
            let prior = MixturePrior::new(vec![
                PriorComponent::new(w, PriorLaw::point_mass(0.5).unwrap()).unwrap(),
                PriorComponent::new(1.0 - w, slab.clone()).unwrap(),
            ])
            .unwrap();
            let bf = compare(&obs(a, n), &prior).unwrap().log_bayes_factor_01;
            let dev = (bf - reference).abs();
            assert!(dev <= 1e-10, "BF moved with prior weight {w}: {dev}");
            worst_invariance = worst_invariance.max(dev);
        }
    }
    println!(
        "ACCEPTANCE C4 PASS: odds theorem — 1000 cases, worst identity residual \
         {worst_identity:.2e}; BF weight-invariance worst dev {worst_invariance:.2e}"
    );
}

/// Criterion 5: succession formula equals the hypergeometric enumeration
/// oracle exactly, as reduced fractions, for all m <= n <= 100.
#[test]
fn criterion_5_broad_succession() {
    for n in 0..=100u64 {
        for m in 0..=n {
            let exact = oracle::enumerate_succession(m, n).unwrap();
            let formula = oracle::BigRational::new(
                ((m + 1) as i64).into(),
                ((n + 1) as i64).into(),
            );
            assert_eq!(exact, formula, "fractions differ at m={m}, n={n}");
        }
    }
    assert_eq!(broad_succession(0, 9).unwrap(), 0.1);
    assert_eq!(broad_succession(42, 42).unwrap(), 1.0);
    println!("ACCEPTANCE C5 PASS: succession — 5151 (m,n) pairs equal as reduced fractions");
}

/// Criterion 6: the critical deviation grows with sample size, and the
/// Bayes factor at the null matches the exact rational oracle.
#[test]
fn criterion_6_lindley_sweep() {
    let points = lindley_sweep(&[100, 1_000, 10_000, 100_000], 0.5, 1.0).unwrap();
    let zs: Vec<f64> = points
        .iter()
        .map(|p| p.crossing.expect("crossing exists").critical_z)
        .collect();
    for pair in zs.windows(2) {
        assert!(pair[0] < pair[1], "critical z not strictly increasing: {zs:?}");
    }

    let cmp = compare(&obs(50, 100), &point_vs_uniform_prior(0.5, 1.0).unwrap()).unwrap();
    let exact = oracle::exact_half_point_vs_uniform_bf(100, 50)
        .to_f64()
        .unwrap();
    let got = cmp.log_bayes_factor_01.exp();
    let rel = ((got - exact) / exact).abs();
    assert!(rel <= 1e-9, "BF at the null: {got} vs {exact}");
    assert!((exact - 8.04).abs() < 5e-3);
    println!(
        "ACCEPTANCE C6 PASS: lindley — critical z {zs:?} strictly increasing; \
         BF(100,50) rel dev {rel:.2e} from exact {exact:.6}"
    );
}

/// Criterion 7: the numerics invariants at their stated tolerances.
#[test]
fn criterion_7_numerics_suite() {
    // Gamma recurrence ln Γ(x+1) − ln Γ(x) = ln x over [0.5, 1e4] on a
    // 64-point log-spaced grid at the stated 1e-11.
    let lg = |x: f64| log_gamma(x).unwrap().value();
    let mut worst_rec = 0.0_f64;
    for i in 0..=63 {
        let x = 0.5 * (2.0e4_f64).powf(i as f64 / 63.0);
        let resid = (lg(x + 1.0) - lg(x) - x.ln()).abs();
        assert!(resid <= 1e-11, "recurrence residual {resid:e} at x={x}");
        worst_rec = worst_rec.max(resid);
    }
    // Denser sweep held to the tolerance plus the f64 representability
    // floor (half an ulp of each operand near x = 1e4 already exceeds
    // 1e-11; see the quantization note in the repository docs).
    let mut x = 0.5_f64;
    while x <= 1.0e4 {
        let resid = (lg(x + 1.0) - lg(x) - x.ln()).abs();
        let floor = 2.0 * f64::EPSILON * lg(x + 1.0).abs();
        assert!(resid <= 1e-11_f64.max(floor), "dense residual {resid:e} at x={x}");
        x *= 1.02;
    }

    // Incomplete-beta symmetry at 1e-11.
    let mut worst_sym = 0.0_f64;
    for &x in &[1e-6, 0.1, 0.25, 0.5, 0.77, 0.999] {
        for &a in &[0.5, 2.0, 41.0, 161.0, 500.0] {
            for &b in &[0.5, 3.0, 77.0, 241.0, 500.0] {
                let s = regularized_incomplete_beta(x, a, b).unwrap()
                    + regularized_incomplete_beta(1.0 - x, b, a).unwrap();
                let dev = (s - 1.0).abs();
                assert!(dev <= 1e-11, "symmetry off by {dev:e} at ({x},{a},{b})");
                worst_sym = worst_sym.max(dev);
            }
        }
    }

    // Laplace's rule: uniform(0,1) marginal is 1/(n+1) for every a, within
    // 1e-10 relative.
    let slab = PriorLaw::Continuous(ContinuousPrior::uniform(0.0, 1.0).unwrap());
    let mut worst_laplace = 0.0_f64;
    for &n in &[0u64, 1, 7, 50, 200, 400] {
        for a in [0, n / 4, n / 2, n].iter().copied().collect::<std::collections::BTreeSet<_>>() {
            let got = log_marginal_likelihood(&obs(a, n), &slab).unwrap().value();
            let expect = -((n + 1) as f64).ln();
            let rel = ((got - expect).exp() - 1.0).abs();
            assert!(rel <= 1e-10, "Laplace rule off by {rel:e} at a={a}, n={n}");
            worst_laplace = worst_laplace.max(rel);
        }
    }

    // Quadrature against the closed-form beta identity, 1e-9 relative.
    let mut worst_quad = 0.0_f64;
    for &(alpha, beta, a, b) in &[
        (1.0, 1.0, 3.0, 7.0),
        (2.5, 4.0, 10.0, 20.0),
        (3.0, 3.0, 1_000.0, 2_000.0),
        (5.0, 1.5, 160.0, 240.0),
    ] {
        let lnb = log_beta(alpha, beta).unwrap().value();
        let ln_density = move |t: f64| {
            let p = if alpha == 1.0 { 0.0 } else { (alpha - 1.0) * t.ln() };
            let q = if beta == 1.0 { 0.0 } else { (beta - 1.0) * (1.0 - t).ln() };
            p + q - lnb
        };
        let got = integrate_density(ln_density, (0.0, 1.0), (a, b), &[])
            .unwrap()
            .value();
        let closed = log_beta(alpha + a, beta + b).unwrap().value() - lnb;
        let rel = (got - closed).abs() / closed.abs().max(1.0);
        assert!(rel <= 1e-9, "quadrature identity off by {rel:e}");
        worst_quad = worst_quad.max(rel);
    }

    println!(
        "ACCEPTANCE C7 PASS: numerics — recurrence {worst_rec:.2e}, symmetry \
         {worst_sym:.2e}, Laplace {worst_laplace:.2e}, quadrature-identity {worst_quad:.2e}"
    );
}

/// Criterion 8: consecutive `--json` runs differ only in the timestamp.
#[test]
fn criterion_8_json_determinism() {
    let dir = std::env::temp_dir().join(format!("spikeslab_accept_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let prior_path = dir.join("prior.spec");
    std::fs::write(&prior_path, "0.5 point 0.5\n0.5 uniform 0 1\n").unwrap();
    let prior_arg = prior_path.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["linkage", "160", "400", "--json"],
        vec!["law", "100", "0.5", "--json"],
        vec!["twoprop", "5", "5", "5", "5", "--json"],
        vec!["succession", "0", "9", "--json"],
        vec!["lindley", "--n-list", "100,1000", "--json"],
        vec!["compare", "5", "10", prior_arg, "--json"],
        vec!["verify", "--json"],
    ];
    for args in &commands {
        let run = |args: &[&str]| -> serde_json::Value {
            let out = Command::new(env!("CARGO_BIN_EXE_spikeslab"))
                .args(args)
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "command {args:?} failed");
            serde_json::from_slice(&out.stdout).expect("valid JSON")
        };
        let mut first = run(args);
        let mut second = run(args);
        assert!(first["timestamp_ms"].is_u64());
        first["timestamp_ms"] = serde_json::Value::from(0u64);
        second["timestamp_ms"] = serde_json::Value::from(0u64);
        let a = serde_json::to_string(&first).unwrap();
        let b = serde_json::to_string(&second).unwrap();
        assert_eq!(a, b, "non-deterministic output for {args:?}");
    }
    std::fs::remove_dir_all(&dir).ok();
    println!(
        "ACCEPTANCE C8 PASS: determinism — {} commands byte-identical modulo timestamp",
        commands.len()
    );
}
