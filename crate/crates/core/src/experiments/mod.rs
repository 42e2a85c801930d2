//! Monte Carlo estimation, ratio reports and the verification suites.
//!
//! A suite draws its instances from a dedicated random-stream family keyed by
//! the master seed, runs the cases in parallel, and reports them in case
//! order, so the JSON output of a suite depends only on the seed and the
//! configuration.

mod estimate;
mod suites;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::job_model::{Instance, Realization};
use crate::oracle::OracleCaps;
use crate::EPS;

pub use estimate::{
    compare, exact_metric, monte_carlo_metric, report_weighted_free_time_proxy, run_algorithm,
    write_reports_csv, Estimate, Metric, RatioReport,
};
pub use suites::{
    sensitivity_sweep, verify_batch_containment, verify_bernoulli_per_realization,
    verify_bft_five_approx, verify_exchange, verify_free_time_gap, verify_free_vol_inequality,
    verify_ft_to_bft, verify_halving, verify_monotonicity, verify_opt_small_lower,
    verify_random_list_logm, verify_sensitivity, verify_sept_single_machine,
    verify_spt_four_approx, SensitivityRow,
};

/// Case counts and caps for every suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub spt_cases: usize,
    pub bernoulli_cases: usize,
    pub bft_cases: usize,
    pub monotonicity_cases: usize,
    pub exchange_cases: usize,
    /// Instances whose realizations are replayed against the oracle.
    pub containment_cases: usize,
    /// Instances of any size checked for nesting and size bounds only.
    pub nesting_cases: usize,
    pub random_list_cases: usize,
    pub random_list_orders: usize,
    pub halving_cases: usize,
    pub sept_cases: usize,
    pub free_vol_cases: usize,
    pub sensitivity_machines: Vec<usize>,
    pub sensitivity_c: f64,
    pub caps: OracleCaps,
    pub enumeration_cap: usize,
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..SuiteConfig::default()
        }
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            spt_cases: 200,
            bernoulli_cases: 100,
            bft_cases: 50,
            monotonicity_cases: 1000,
            exchange_cases: 100,
            containment_cases: 50,
            nesting_cases: 500,
            random_list_cases: 50,
            random_list_orders: 2000,
            halving_cases: 200,
            sept_cases: 100,
            free_vol_cases: 30,
            sensitivity_machines: vec![2, 4],
            sensitivity_c: 0.5,
            caps: OracleCaps::default(),
            enumeration_cap: crate::job_model::DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// A violated check, with enough payload to replay it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub case: usize,
    /// Master seed of the run.
    pub seed: u64,
    pub instance: Option<Instance>,
    pub realization: Option<Realization>,
    pub detail: String,
}

/// Result of one suite. It passes iff `failures` is empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub check: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Smallest `rhs - lhs` over every inequality checked; `null` when
    /// nothing was compared.
    pub worst_slack: Option<f64>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(check: &str, parts: Vec<SuiteOutcome>) -> SuiteOutcome {
        let mut out = SuiteOutcome {
            check: check.to_string(),
            cases: 0,
            failures: Vec::new(),
            worst_slack: None,
        };
        for part in parts {
            out.cases += part.cases;
            out.failures.extend(part.failures);
            out.worst_slack = min_slack(out.worst_slack, part.worst_slack);
        }
        out
    }
}

fn min_slack(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Bookkeeping for one case of a suite.
pub(crate) struct Case {
    index: usize,
    seed: u64,
    instance: Option<Instance>,
    slack: Option<f64>,
    failures: Vec<Failure>,
}

impl Case {
    fn new(index: usize, seed: u64) -> Self {
        Case {
            index,
            seed,
            instance: None,
            slack: None,
            failures: Vec::new(),
        }
    }

    pub(crate) fn set_instance(&mut self, instance: &Instance) {
        self.instance = Some(instance.clone());
    }

    pub(crate) fn fail(&mut self, realization: Option<&Realization>, detail: String) {
        self.failures.push(Failure {
            case: self.index,
            seed: self.seed,
            instance: self.instance.clone(),
            realization: realization.cloned(),
            detail,
        });
    }

    fn record(&mut self, slack: f64) {
        self.slack = min_slack(self.slack, Some(slack));
    }

    /// Checks `lhs <= rhs + EPS`.
    pub(crate) fn le(&mut self, lhs: f64, rhs: f64, realization: Option<&Realization>, what: impl FnOnce() -> String) {
        self.record(rhs - lhs);
        // NaN on either side fails
        let holds = lhs <= rhs + EPS;
        if !holds {
            self.fail(realization, format!("{}: {lhs} > {rhs}", what()));
        }
    }

    /// Checks `|a - b| <= tol`; the recorded slack is `-|a - b|`.
    pub(crate) fn close(
        &mut self,
        a: f64,
        b: f64,
        tol: f64,
        realization: Option<&Realization>,
        what: impl FnOnce() -> String,
    ) {
        let diff = (a - b).abs();
        self.record(0.0 - diff);
        let holds = diff <= tol;
        if !holds {
            self.fail(realization, format!("{}: {a} != {b}", what()));
        }
    }

    /// Records a condition with no numeric margin.
    pub(crate) fn ensure(&mut self, ok: bool, realization: Option<&Realization>, what: impl FnOnce() -> String) {
        if !ok {
            self.fail(realization, what());
        }
    }
}

/// Runs `count` cases in parallel and gathers them in case order. An error
/// returned by a case counts as a failure of that case.
pub(crate) fn run_cases<F>(check: &str, seed: u64, count: usize, body: F) -> SuiteOutcome
where
    F: Fn(usize, &mut Case) -> Result<()> + Sync,
{
    let cases: Vec<Case> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut case = Case::new(i, seed);
            if let Err(e) = body(i, &mut case) {
                case.fail(None, format!("error: {e}"));
            }
            case
        })
        .collect();
    gather(check, count, cases)
}

fn gather(check: &str, count: usize, cases: Vec<Case>) -> SuiteOutcome {
    let mut out = SuiteOutcome {
        check: check.to_string(),
        cases: count,
        failures: Vec::new(),
        worst_slack: None,
    };
    for case in cases {
        out.worst_slack = min_slack(out.worst_slack, case.slack);
        out.failures.extend(case.failures);
    }
    out
}

/// Suite names accepted by [`run_suites`], in the order `all` runs them.
pub const SUITE_NAMES: [&str; 14] = [
    "gap",
    "spt",
    "bernoulli",
    "bft",
    "ft-to-bft",
    "monotonicity",
    "exchange",
    "containment",
    "random-list",
    "halving",
    "sept",
    "free-vol",
    "opt-small-lower",
    "sensitivity",
];

/// Resolves suite names (or `all`) into canonical order without duplicates.
pub fn resolve_suites<S: AsRef<str>>(names: &[S]) -> Result<Vec<&'static str>> {
    let mut wanted = [false; SUITE_NAMES.len()];
    for name in names {
        let name = name.as_ref();
        if name == "all" {
            wanted = [true; SUITE_NAMES.len()];
            continue;
        }
        match SUITE_NAMES.iter().position(|&s| s == name) {
            Some(i) => wanted[i] = true,
            None => return Err(Error::UnknownSuite(name.to_string())),
        }
    }
    Ok(SUITE_NAMES
        .iter()
        .zip(wanted)
        .filter(|(_, w)| *w)
        .map(|(s, _)| *s)
        .collect())
}

/// Runs the named suites in canonical order. The free-time lower-bound
/// suite shares its oracle queries with `spt`, `bernoulli` and `bft`, so
/// those are computed once when requested together.
pub fn run_suites<S: AsRef<str>>(names: &[S], config: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    let selected = resolve_suites(names)?;
    let shared = selected
        .contains(&"opt-small-lower")
        .then(|| suites::free_time_suites(config));
    let mut out = Vec::with_capacity(selected.len());
    for name in selected {
        let outcome = match (name, &shared) {
            ("spt", Some(s)) => s.spt.clone(),
            ("bernoulli", Some(s)) => s.bernoulli.clone(),
            ("bft", Some(s)) => s.bft.clone(),
            ("opt-small-lower", Some(s)) => s.small_lower(),
            ("gap", _) => verify_free_time_gap(),
            ("spt", None) => verify_spt_four_approx(config),
            ("bernoulli", None) => verify_bernoulli_per_realization(config),
            ("bft", None) => verify_bft_five_approx(config),
            ("ft-to-bft", _) => verify_ft_to_bft(config),
            ("monotonicity", _) => verify_monotonicity(config),
            ("exchange", _) => verify_exchange(config),
            ("containment", _) => verify_batch_containment(config),
            ("random-list", _) => verify_random_list_logm(config),
            ("halving", _) => verify_halving(config),
            ("sept", _) => verify_sept_single_machine(config),
            ("free-vol", _) => verify_free_vol_inequality(config),
            ("sensitivity", _) => verify_sensitivity(config),
            _ => unreachable!("resolve_suites only returns known names"),
        };
        out.push(outcome);
    }
    Ok(out)
}
