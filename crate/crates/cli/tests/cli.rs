use std::path::Path;
use std::process::{Command, Output};

use stochsched_core::Instance;

fn stochsched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochsched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_instance(dir: &Path, name: &str, instance: &Instance) -> String {
    let path = dir.join(name);
    std::fs::write(&path, instance.to_json().unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn gen_gap_instance() {
    let out = stochsched(&["gen", "--kind", "free-time-gap", "--m", "4"]);
    assert_eq!(code(&out), 0);
    let inst = Instance::from_json(&stdout(&out)).unwrap();
    assert_eq!(inst.n(), 7);
    assert_eq!(inst.machines(), 4);
}

#[test]
fn gen_random_is_reproducible_and_needs_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let args = |p: &Path| {
        stochsched(&[
            "gen", "--kind", "random-bernoulli", "--n", "6", "--m", "2", "--seed", "1", "--out",
            p.to_str().unwrap(),
        ])
    };
    assert_eq!(code(&args(&a)), 0);
    let first = std::fs::read(&a).unwrap();
    assert_eq!(code(&args(&a)), 0);
    assert_eq!(std::fs::read(&a).unwrap(), first);
    let inst = Instance::from_json(std::str::from_utf8(&first).unwrap()).unwrap();
    assert_eq!((inst.n(), inst.machines()), (6, 2));

    assert_eq!(code(&stochsched(&["gen", "--kind", "random-deterministic"])), 2);
    assert_eq!(code(&stochsched(&["gen", "--kind", "nonsense"])), 2);
    assert_eq!(code(&stochsched(&["gen", "--kind", "sensitivity", "--m", "3"])), 2);
    assert_eq!(
        code(&stochsched(&["gen", "--kind", "sensitivity", "--m", "20", "--c", "2", "--max-jobs", "100"])),
        3
    );
}

#[test]
fn run_emits_one_csv_row() {
    let dir = tempfile::tempdir().unwrap();
    let inst = Instance::bernoulli(2, &[(2.0, 0.5), (1.0, 0.3), (4.0, 0.2), (1.0, 0.9)]).unwrap();
    let path = write_instance(dir.path(), "four.json", &inst);
    let out = stochsched(&[
        "run", "--instance", &path, "--alg", "stochfree", "--metric", "total_completion", "--trials", "1000",
        "--seed", "7",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "instance_id,alg,metric,mean,ci95,baseline,ratio,trials,seed");
    assert!(lines[1].starts_with("four,stochfree,total_completion,"));
    assert!(lines[1].ends_with(",,,1000,7"));

    // sept is allowed on several machines
    let sept = stochsched(&["run", "--instance", &path, "--alg", "sept", "--trials", "10", "--seed", "1"]);
    assert_eq!(code(&sept), 0);
    let j = stochsched(&[
        "run", "--instance", &path, "--alg", "bft:random", "--trials", "10", "--seed", "1", "--format", "json",
    ]);
    assert_eq!(json(&j)[0]["alg"], "bft:random");
}

#[test]
fn run_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let inst = Instance::deterministic(2, &[1.0, 2.0]).unwrap();
    let path = write_instance(dir.path(), "d.json", &inst);
    assert_eq!(code(&stochsched(&["run", "--instance", "/nonexistent.json", "--alg", "spt", "--seed", "1"])), 2);
    assert_eq!(code(&stochsched(&["run", "--instance", &path, "--alg", "spt"])), 2);
    assert_eq!(code(&stochsched(&["run", "--instance", &path, "--alg", "fastest", "--seed", "1"])), 2);
    assert_eq!(
        code(&stochsched(&["run", "--instance", &path, "--alg", "spt", "--metric", "speed", "--seed", "1"])),
        2
    );
    assert_eq!(
        code(&stochsched(&["run", "--instance", &path, "--alg", "spt", "--trials", "0", "--seed", "1"])),
        2
    );
    std::fs::write(dir.path().join("bad.json"), "{\"machines\": 0, \"jobs\": []}").unwrap();
    let bad = dir.path().join("bad.json");
    assert_eq!(code(&stochsched(&["run", "--instance", bad.to_str().unwrap(), "--alg", "spt", "--seed", "1"])), 2);
}

#[test]
fn compare_emits_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let inst = Instance::bernoulli(2, &[(2.0, 0.5), (1.0, 0.3), (4.0, 0.2)]).unwrap();
    let path = write_instance(dir.path(), "c.json", &inst);
    let out = stochsched(&[
        "compare", "--instance", &path, "--alg", "sept", "--baseline", "sept", "--trials", "100", "--seed", "3",
        "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)[0]["ratio"], 1.0);
}

#[test]
fn oracle_modes() {
    let dir = tempfile::tempdir().unwrap();
    let gap = write_instance(dir.path(), "gap.json", &stochsched_core::gen_free_time_gap_instance(4).unwrap());
    let out = stochsched(&["oracle", "--instance", &gap, "--mode", "free-time"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["value"], 1.0);

    let coins = Instance::bernoulli(2, &[(1.0, 0.5), (2.0, 0.5), (1.0, 0.2)]).unwrap();
    let path = write_instance(dir.path(), "coins.json", &coins);
    assert_eq!(code(&stochsched(&["oracle", "--instance", &path, "--mode", "free-time"])), 2);
    let out = stochsched(&["oracle", "--instance", &path, "--mode", "batch-free-time", "--realization", "1,2,0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["values"].as_array().unwrap().len(), 2);
    // 3 is not a possible size of job 0
    assert_eq!(
        code(&stochsched(&["oracle", "--instance", &path, "--mode", "free-time", "--realization", "3,2,0"])),
        2
    );

    let big = Instance::bernoulli(2, &[(1.0, 0.5); 12]).unwrap();
    let big = write_instance(dir.path(), "big.json", &big);
    let out = stochsched(&["oracle", "--instance", &big, "--mode", "completion"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn completion_oracle_matches_sept_on_one_machine() {
    let dir = tempfile::tempdir().unwrap();
    let inst = Instance::bernoulli(1, &[(3.0, 0.5), (1.0, 0.8), (2.0, 0.25)]).unwrap();
    let path = write_instance(dir.path(), "one.json", &inst);
    let opt = json(&stochsched(&["oracle", "--instance", &path, "--mode", "completion"]))["value"]
        .as_f64()
        .unwrap();
    let row = json(&stochsched(&[
        "run", "--instance", &path, "--alg", "sept", "--trials", "20000", "--seed", "5", "--format", "json",
    ]));
    let (mean, ci) = (row[0]["mean"].as_f64().unwrap(), row[0]["ci95"].as_f64().unwrap());
    assert!((mean - opt).abs() <= ci, "{mean} ± {ci} vs {opt}");
}

#[test]
fn verify_selected_suites() {
    let out = stochsched(&["verify", "exchange", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v[0]["check"], "exchange");
    assert_eq!(v[0]["cases"], 100);
    assert_eq!(code(&stochsched(&["verify", "nope", "--seed", "1"])), 2);
    assert_eq!(code(&stochsched(&["verify", "exchange"])), 2);
    assert_eq!(code(&stochsched(&["verify", "--seed", "1"])), 2);
}

#[test]
fn verify_reports_failure_with_exit_one() {
    // one machine per sweep entry cannot halve: the sweep errors inside the case
    let out = stochsched(&["verify", "sensitivity", "--seed", "1", "--sensitivity-machines", "3"]);
    assert_eq!(code(&out), 1);
    assert!(!json(&out)[0]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["verify", "halving", "random-list", "--seed", "11", "--random-list-orders", "200"];
    let default = stochsched(&args);
    let single = Command::new(env!("CARGO_BIN_EXE_stochsched"))
        .args(args)
        .env("STOCHSCHED_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&default), 0);
    assert_eq!(default.stdout, single.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_stochsched"))
        .args(args)
        .env("STOCHSCHED_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}
