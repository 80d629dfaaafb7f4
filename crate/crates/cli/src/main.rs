//! Command-line frontend for the spike-and-slab Bayes factor analyses.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 on numerical
//! non-convergence; `verify` additionally exits 1 when a self-check fails.

mod record;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use record::{logv, prob, sig, RunRecord};
use spikeslab::classic::{
    broad_succession, haldane_linkage, jeffreys_two_proportion, law_confirmation, lindley_sweep,
    linkage_with_prior, LindleySweepPoint, LinkageReport, Support, TwoProportionReport,
};
use spikeslab::evidence::compare;
use spikeslab::model::{
    self, haldane_linkage_prior, BinomialObservation, ContingencyTable, ContinuousPrior,
    MixturePrior, PriorLaw,
};
use spikeslab::posterior::{mixture_posterior, posterior_mean, predictive_next, PosteriorLaw};
use spikeslab::Error;

#[derive(Parser)]
#[command(
    name = "spikeslab",
    version,
    about = "Bayes factor tests for binomial models under spike-and-slab mixture priors"
)]
struct Cli {
    /// Run the oracle self-verification suite.
    #[arg(long, hide = true)]
    verify: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Linkage test: point null at 1/2 (weight 11/12) vs uniform(0, 1/2).
    Linkage {
        successes: u64,
        trials: u64,
        /// Replace the default prior with a prior-spec file.
        #[arg(long)]
        prior: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Posterior probability that the rate is exactly zero after n failures.
    Law {
        /// Number of trials, all lacking the property.
        n: u64,
        /// Prior probability of the point x = 0.
        k: f64,
        /// Continuous density for the nonzero case (prior-spec file with a
        /// single continuous component); defaults to uniform(0,1).
        #[arg(long)]
        prior: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Two-proportion contingency test on counts x0 y0 x1 y1.
    Twoprop {
        x0: u64,
        y0: u64,
        x1: u64,
        y1: u64,
        /// Prior odds of the common-proportion model.
        #[arg(long, default_value_t = 1.0)]
        prior_odds: f64,
        #[arg(long)]
        json: bool,
    },
    /// Probability that all n population members carry a property after m
    /// sampled members all did.
    Succession {
        m: u64,
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Critical standardized deviation at which the point null is first
    /// rejected, for each sample size.
    Lindley {
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long, default_value_t = 0.5)]
        theta0: f64,
        #[arg(long, default_value_t = 1.0)]
        prior_odds: f64,
        /// Emit a CSV table instead of the human-readable one.
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Generic comparison of an arbitrary mixture prior against data.
    Compare {
        successes: u64,
        trials: u64,
        /// Prior-spec file (one `weight kind params` line per component).
        prior: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run every oracle-vs-main-path check and report pass/fail.
    #[command(hide = true)]
    Verify {
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match (cli.verify, cli.command) {
        (true, _) => Command::Verify { json: false },
        (false, Some(cmd)) => cmd,
        (false, None) => {
            eprintln!("error: no command given; see --help");
            return ExitCode::from(2);
        }
    };
    match dispatch(command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::NonConvergence(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Linkage { successes, trials, prior, json } => {
            cmd_linkage(successes, trials, prior.as_deref(), json)
        }
        Command::Law { n, k, prior, json } => cmd_law(n, k, prior.as_deref(), json),
        Command::Twoprop { x0, y0, x1, y1, prior_odds, json } => {
            cmd_twoprop(x0, y0, x1, y1, prior_odds, json)
        }
        Command::Succession { m, n, json } => cmd_succession(m, n, json),
        Command::Lindley { n_list, theta0, prior_odds, csv, json } => {
            cmd_lindley(&n_list, theta0, prior_odds, csv, json)
        }
        Command::Compare { successes, trials, prior, json } => {
            cmd_compare(successes, trials, &prior, json)
        }
        Command::Verify { json } => Ok(cmd_verify(json)),
    }
}

fn load_prior(path: &Path) -> Result<MixturePrior, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::PriorSpec(format!("prior: cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    model::parse_mixture_prior(&text, base)
}

fn observation(successes: u64, trials: u64) -> Result<BinomialObservation, Error> {
    BinomialObservation::new(successes, trials)
        .map_err(|_| Error::Domain(format!("successes: must not exceed trials ({successes} > {trials})")))
}

fn cmd_linkage(
    successes: u64,
    trials: u64,
    prior_path: Option<&Path>,
    json: bool,
) -> Result<ExitCode, Error> {
    let obs = observation(successes, trials)?;
    let (prior, report) = match prior_path {
        Some(path) => {
            let prior = load_prior(path)?;
            let report = linkage_with_prior(&obs, &prior)?;
            (prior, report)
        }
        None => (haldane_linkage_prior(), haldane_linkage(&obs)?),
    };
    if json {
        RunRecord::new(
            "linkage",
            json!({
                "successes": successes,
                "trials": trials,
                "prior": prior,
            }),
            serde_json::to_value(&report).expect("report serializes"),
        )
        .print();
    } else {
        render_linkage(&obs, &prior, &report);
    }
    Ok(ExitCode::SUCCESS)
}

fn render_linkage(obs: &BinomialObservation, prior: &MixturePrior, report: &LinkageReport) {
    println!(
        "Linkage test: {} cross-overs in {} trials",
        obs.successes(),
        obs.trials()
    );
    println!("  prior: {}", render_prior(prior));
    let cmp = &report.comparison;
    println!(
        "  P(M0|D)={:.3}  P(M1|D)={:.3}",
        cmp.posterior_prob_0, cmp.posterior_prob_1
    );
    println!(
        "  posterior model probabilities: {}, {}",
        prob(cmp.posterior_prob_0),
        prob(cmp.posterior_prob_1)
    );
    println!(
        "  weighted evidence, component 0: {}",
        prob(report.weighted_evidence_0)
    );
    println!(
        "  weighted evidence, component 1: {}",
        prob(report.weighted_evidence_1)
    );
    println!("  log Bayes factor BF01: {}", logv(cmp.log_bayes_factor_01));
    println!("  posterior odds (M0:M1): {}", prob(cmp.posterior_odds_01));
    println!("  posterior mean of the rate: {}", prob(report.expectation));
    match &report.approx {
        Some(a) => println!(
            "  normal approximation: mean {}, sd {}",
            prob(a.mean),
            prob(a.sd)
        ),
        None => println!("  normal approximation: none (no interior mode)"),
    }
    if let Some(note) = &report.note {
        println!("  note: {note}");
    }
}

fn cmd_law(n: u64, k: f64, prior_path: Option<&Path>, json: bool) -> Result<ExitCode, Error> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain(format!(
            "k: must lie strictly between 0 and 1, got {k}"
        )));
    }
    let density = match prior_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::PriorSpec(format!("prior: cannot read {}: {e}", path.display()))
            })?;
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            model::parse_single_density(&text, base)?
        }
        None => ContinuousPrior::uniform(0.0, 1.0).expect("unit interval"),
    };
    let p = law_confirmation(n, k, &density)?;
    if json {
        RunRecord::new(
            "law",
            json!({ "n": n, "k": k, "density": density }),
            json!({ "posterior_probability_x_zero": p }),
        )
        .print();
    } else {
        println!("Law confirmation: {n} trials, none with the property, prior mass k={k} on x=0");
        println!("  P(x=0 | D) = {}", prob(p));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_twoprop(
    x0: u64,
    y0: u64,
    x1: u64,
    y1: u64,
    prior_odds: f64,
    json: bool,
) -> Result<ExitCode, Error> {
    if !prior_odds.is_finite() || prior_odds <= 0.0 {
        return Err(Error::Domain(format!(
            "prior-odds: must be positive and finite, got {prior_odds}"
        )));
    }
    let table = ContingencyTable::new(x0, y0, x1, y1);
    let report = jeffreys_two_proportion(&table, prior_odds)?;
    if json {
        RunRecord::new(
            "twoprop",
            json!({ "x0": x0, "y0": y0, "x1": x1, "y1": y1, "prior_odds": prior_odds }),
            serde_json::to_value(&report).expect("report serializes"),
        )
        .print();
    } else {
        render_twoprop(&table, &report);
    }
    Ok(ExitCode::SUCCESS)
}

fn render_twoprop(table: &ContingencyTable, report: &TwoProportionReport) {
    println!(
        "Two-proportion test: sample 0: {} with / {} without; sample 1: {} with / {} without",
        table.x0, table.y0, table.x1, table.y1
    );
    println!(
        "  log posterior mass, common proportion (M0): {}",
        logv(report.log_post_0.value())
    );
    println!(
        "  log posterior mass, independent proportions (M1): {}",
        logv(report.log_post_1.value())
    );
    println!("  Bayes factor BF01: {}", prob(report.bayes_factor_01));
    println!(
        "  prior odds {}, posterior odds (M0:M1): {}",
        prob(report.prior_odds_01),
        prob(report.posterior_odds_01)
    );
    let supports = match report.supports {
        Support::Null => "M0 (common proportion)",
        Support::Alternative => "M1 (independent proportions)",
        Support::Even => "neither (posterior odds exactly 1)",
    };
    println!("  data support: {supports}");
}

fn cmd_succession(m: u64, n: u64, json: bool) -> Result<ExitCode, Error> {
    if m > n {
        return Err(Error::Domain(format!(
            "m: sample count must not exceed population size ({m} > {n})"
        )));
    }
    let p = broad_succession(m, n)?;
    if json {
        RunRecord::new(
            "succession",
            json!({ "m": m, "n": n }),
            json!({ "probability": p }),
        )
        .print();
    } else {
        println!("Succession: all {m} sampled members of a population of {n} have the property");
        println!("  P(all {n} have it | D) = {}", prob(p));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lindley(
    n_list: &[u64],
    theta0: f64,
    prior_odds: f64,
    csv: bool,
    json: bool,
) -> Result<ExitCode, Error> {
    if !(theta0 > 0.0 && theta0 < 1.0) {
        return Err(Error::Domain(format!(
            "theta0: must lie strictly between 0 and 1, got {theta0}"
        )));
    }
    if !prior_odds.is_finite() || prior_odds <= 0.0 {
        return Err(Error::Domain(format!(
            "prior-odds: must be positive and finite, got {prior_odds}"
        )));
    }
    if n_list.contains(&0) {
        return Err(Error::Domain("n-list: sample sizes must be positive".into()));
    }
    let points = lindley_sweep(n_list, theta0, prior_odds)?;
    if json {
        RunRecord::new(
            "lindley",
            json!({ "n_list": n_list, "theta0": theta0, "prior_odds": prior_odds }),
            serde_json::to_value(&points).expect("points serialize"),
        )
        .print();
    } else if csv {
        println!("n,critical_a,critical_z,log_bf_at_critical");
        for p in &points {
            match &p.crossing {
                Some(c) => println!("{},{},{},{}", p.n, c.critical_a, c.critical_z, c.log_bf),
                None => println!("{},,,", p.n),
            }
        }
    } else {
        render_lindley(theta0, prior_odds, &points);
    }
    Ok(ExitCode::SUCCESS)
}

fn render_lindley(theta0: f64, prior_odds: f64, points: &[LindleySweepPoint]) {
    println!("Critical-z sweep: theta0={theta0}, prior odds {prior_odds}");
    println!("  {:>10}  {:>10}  {:>12}  {:>16}", "n", "critical_a", "critical_z", "log_BF01");
    for p in points {
        match &p.crossing {
            Some(c) => println!(
                "  {:>10}  {:>10}  {:>12}  {:>16}",
                p.n,
                c.critical_a,
                sig(c.critical_z, 6),
                sig(c.log_bf, 6)
            ),
            None => println!("  {:>10}  no crossing for any count in [0, n]", p.n),
        }
    }
}

fn cmd_compare(
    successes: u64,
    trials: u64,
    prior_path: &Path,
    json: bool,
) -> Result<ExitCode, Error> {
    let obs = observation(successes, trials)?;
    let prior = load_prior(prior_path)?;
    let comparison = if prior.len() == 2 {
        Some(compare(&obs, &prior)?)
    } else {
        None
    };
    let post = mixture_posterior(&obs, &prior)?;
    let mean = posterior_mean(&post)?;
    let predictive = predictive_next(&post)?;
    if json {
        RunRecord::new(
            "compare",
            json!({
                "successes": successes,
                "trials": trials,
                "prior": prior,
            }),
            json!({
                "comparison": comparison,
                "posterior": post,
                "posterior_mean": mean,
                "predictive_next": predictive,
            }),
        )
        .print();
    } else {
        println!("Model comparison: {successes} successes in {trials} trials");
        println!("  prior: {}", render_prior(&prior));
        if let Some(cmp) = &comparison {
            println!("  log Bayes factor BF01: {}", logv(cmp.log_bayes_factor_01));
            println!("  posterior odds (M0:M1): {}", prob(cmp.posterior_odds_01));
        }
        println!("  posterior components:");
        for (i, comp) in post.components().iter().enumerate() {
            println!(
                "    {i}: weight {}  {}",
                prob(comp.weight),
                render_posterior_law(&comp.law)
            );
        }
        println!("  posterior mean: {}", prob(mean));
        println!("  predictive next-success probability: {}", prob(predictive));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(json: bool) -> ExitCode {
    let checks = verify::run_all();
    let all_passed = checks.iter().all(|c| c.pass);
    if json {
        RunRecord::new(
            "verify",
            json!({}),
            json!({ "checks": checks, "all_passed": all_passed }),
        )
        .print();
    } else {
        for c in &checks {
            println!("{}  {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        println!(
            "{} of {} checks passed",
            checks.iter().filter(|c| c.pass).count(),
            checks.len()
        );
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn render_prior(prior: &MixturePrior) -> String {
    prior
        .components()
        .iter()
        .map(|c| format!("{} {}", prob(c.weight()), render_law(c.law())))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn render_law(law: &PriorLaw) -> String {
    match law {
        PriorLaw::PointMass { location } => format!("point({location})"),
        PriorLaw::Continuous(ContinuousPrior::Uniform { lo, hi }) => {
            format!("uniform({lo}, {hi})")
        }
        PriorLaw::Continuous(ContinuousPrior::Beta { alpha, beta }) => {
            format!("beta({alpha}, {beta})")
        }
        PriorLaw::Continuous(ContinuousPrior::Tabulated(t)) => {
            let (lo, hi) = t.support();
            format!("tabulated[{} knots on ({lo}, {hi})]", t.grid().len())
        }
    }
}

fn render_posterior_law(law: &PosteriorLaw) -> String {
    match law {
        PosteriorLaw::PointMass { location } => format!("point({location})"),
        PosteriorLaw::TruncatedBeta { alpha, beta, lo, hi } => {
            if *lo == 0.0 && *hi == 1.0 {
                format!("beta({alpha}, {beta})")
            } else {
                format!("beta({alpha}, {beta}) truncated to ({lo}, {hi})")
            }
        }
        PosteriorLaw::WeightedTabulated { prior, successes, failures } => {
            let (lo, hi) = prior.support();
            format!(
                "tabulated density on ({lo}, {hi}) reweighted by theta^{successes}(1-theta)^{failures}"
            )
        }
    }
}
