//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! and fails on any violation or on exceeding its runtime budget.

use std::process::Command;
use std::time::{Duration, Instant};

use stochsched_core::experiments::*;
use stochsched_core::oracle::opt_free_time_det;
use stochsched_core::{gen_free_time_gap_instance, run_list_schedule, LoadVector};

const SEED: u64 = 7;

fn config() -> SuiteConfig {
    SuiteConfig::with_seed(SEED)
}

fn report(criterion: u32, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {status} {name} ({:.2}s) {detail}", elapsed.as_secs_f64());
}

/// Runs the suites, prints the criterion line, and asserts that every suite
/// ran `cases` cases with zero failures within `budget`.
fn criterion(number: u32, name: &str, budget: Option<Duration>, cases: &[usize], run: impl FnOnce() -> Vec<SuiteOutcome>) {
    let start = Instant::now();
    let outcomes = run();
    let elapsed = start.elapsed();
    let counted = outcomes.iter().map(|o| o.cases).collect::<Vec<_>>();
    let failures: usize = outcomes.iter().map(|o| o.failures.len()).sum();
    let in_time = budget.map_or(true, |b| elapsed <= b);
    let ok = failures == 0 && counted == cases && in_time;
    let detail = outcomes
        .iter()
        .map(|o| format!("[{}: {} cases, {} failures, worst slack {:?}]", o.check, o.cases, o.failures.len(), o.worst_slack))
        .collect::<Vec<_>>()
        .join(" ");
    report(number, name, ok, elapsed, &detail);
    for o in &outcomes {
        if let Some(f) = o.failures.first() {
            println!("  first failure of {}: {}", o.check, serde_json::to_string(f).unwrap());
        }
    }
    assert_eq!(counted, cases, "case counts");
    assert_eq!(failures, 0, "violations");
    assert!(in_time, "runtime {elapsed:?} over budget {budget:?}");
}

#[test]
fn criterion_01_gap_instance_exactness() {
    criterion(1, "gap instance exactness", Some(Duration::from_secs(1)), &[5, 5], || {
        // direct recomputation next to the suite
        let direct = run_cases_direct();
        vec![verify_free_time_gap(), direct]
    });
}

/// Big-first free time `m`, optimum 1, ratio `m`, compared exactly.
fn run_cases_direct() -> SuiteOutcome {
    let mut failures = Vec::new();
    for m in 2..=6usize {
        let inst = gen_free_time_gap_instance(m).unwrap();
        let r = inst.certain_realization().unwrap();
        let order: Vec<usize> = (m..2 * m - 1).chain(0..m).collect();
        let trace = run_list_schedule(&inst, &r, &order.into(), &LoadVector::zeros(m)).unwrap();
        let f = *trace.free_times().last().unwrap();
        let jobs: Vec<(usize, f64)> = r.sizes().iter().copied().enumerate().collect();
        let opt = opt_free_time_det(&jobs, &LoadVector::zeros(m), 11).unwrap();
        if f != m as f64 || opt != 1.0 || f / opt != m as f64 {
            failures.push(Failure {
                case: m,
                seed: 0,
                instance: Some(inst),
                realization: None,
                detail: format!("F = {f}, F* = {opt}"),
            });
        }
    }
    SuiteOutcome {
        check: "gap-direct".into(),
        cases: 5,
        failures,
        worst_slack: Some(0.0),
    }
}

#[test]
fn criterion_02_spt_four_approximation() {
    let c = config();
    assert_eq!(c.spt_cases, 200);
    criterion(2, "SPT 4-approximation", Some(Duration::from_secs(30)), &[200], || {
        vec![verify_spt_four_approx(&c)]
    });
}

#[test]
fn criterion_03_bernoulli_per_realization() {
    let c = config();
    assert_eq!(c.bernoulli_cases, 100);
    criterion(3, "per-realization Bernoulli 4-approximation", Some(Duration::from_secs(60)), &[100], || {
        vec![verify_bernoulli_per_realization(&c)]
    });
}

#[test]
fn criterion_04_batch_free_time_five() {
    let c = config();
    assert_eq!(c.bft_cases, 50);
    criterion(4, "BFT alpha = 5 and (alpha + 1) reduction", Some(Duration::from_secs(120)), &[50, 50], || {
        vec![verify_bft_five_approx(&c), verify_ft_to_bft(&c)]
    });
}

#[test]
fn criterion_05_list_monotonicity() {
    let c = config();
    assert_eq!(c.monotonicity_cases, 1000);
    criterion(5, "list-schedule monotonicity", None, &[1000], || vec![verify_monotonicity(&c)]);
}

#[test]
fn criterion_06_exchange() {
    let c = config();
    assert_eq!(c.exchange_cases, 100);
    criterion(6, "exchange property", Some(Duration::from_secs(60)), &[100], || vec![verify_exchange(&c)]);
}

#[test]
fn criterion_07_batch_containment() {
    let c = config();
    assert_eq!((c.nesting_cases, c.containment_cases), (500, 50));
    criterion(7, "batch nesting, sizes and containment", None, &[550], || {
        vec![verify_batch_containment(&c)]
    });
}

#[test]
fn criterion_08_random_list() {
    let c = config();
    assert_eq!((c.random_list_cases, c.random_list_orders), (50, 2000));
    criterion(8, "random list schedule O(log m)", Some(Duration::from_secs(60)), &[50], || {
        vec![verify_random_list_logm(&c)]
    });
}

#[test]
fn criterion_09_machine_halving() {
    let c = config();
    assert_eq!(c.halving_cases, 200);
    criterion(9, "machine halving", None, &[200], || vec![verify_halving(&c)]);
}

#[test]
fn criterion_10_sept_single_machine() {
    let c = config();
    assert_eq!(c.sept_cases, 100);
    criterion(10, "SEPT optimal at m = 1", None, &[100], || vec![verify_sept_single_machine(&c)]);
}

#[test]
fn criterion_11_free_volume_inequality() {
    let c = config();
    assert_eq!(c.free_vol_cases, 30);
    criterion(11, "free-time/volume inequality", None, &[30], || vec![verify_free_vol_inequality(&c)]);
}

#[test]
fn criterion_12_opt_small_lower() {
    let c = config();
    criterion(12, "F* >= Vol(S)/2m on suites 2-4", None, &[350], || vec![verify_opt_small_lower(&c)]);
}

#[test]
fn criterion_13_sensitivity_sweep() {
    let c = config();
    assert_eq!(c.sensitivity_machines, vec![2, 4]);
    let start = Instant::now();
    let rows = sensitivity_sweep(&c.sensitivity_machines, c.sensitivity_c).unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let shape = ratios.iter().all(|&r| r > 1.0) && ratios.windows(2).all(|w| w[0] <= w[1]);
    let suite = verify_sensitivity(&c);
    let ok = shape && suite.passed();
    report(13, "sensitivity sweep", ok, start.elapsed(), &format!("ratios {ratios:?}"));
    assert!(ok);
}

#[test]
fn criterion_14_determinism() {
    let start = Instant::now();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_stochsched"))
            .args(["verify", "all", "--seed", "7"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let ok = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    report(14, "verify all --seed 7 byte-identical", ok, start.elapsed(), &format!("{} bytes", a.stdout.len()));
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}
