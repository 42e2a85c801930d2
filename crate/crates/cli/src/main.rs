//! `stochsched`: generate instances, run ordering rules, query the exact
//! oracles and run the verification suites.
//!
//! Exit codes: 0 success, 1 a suite failed, 2 usage or input error,
//! 3 an instance exceeds an oracle or enumeration cap.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use stochsched_core::experiments::{
    compare, monte_carlo_metric, run_suites, write_reports_csv, Metric, RatioReport, SuiteConfig,
    SUITE_NAMES,
};
use stochsched_core::job_model::{
    random_bernoulli_instance, random_deterministic_instance, RandomBernoulliParams,
    RandomDeterministicParams, DEFAULT_MAX_GENERATED_JOBS,
};
use stochsched_core::oracle::{
    opt_adaptive_completion, opt_batch_free_times, opt_free_time_det, DpState, OracleCaps,
};
use stochsched_core::policies::choose_jobs;
use stochsched_core::{
    gen_free_time_gap_instance, gen_machine_sensitivity_instance, rng, Algorithm, Error, Instance,
    LoadVector, Realization,
};

#[derive(Parser)]
#[command(name = "stochsched", version, about = "Stochastic list-scheduling laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Gen(GenArgs),
    /// Monte Carlo estimate of one rule's metric.
    Run(RunArgs),
    /// Two rules on the same realizations, with their ratio.
    Compare(CompareArgs),
    /// Exact optimum of a small instance.
    Oracle(OracleArgs),
    /// Run verification suites and print their JSON outcomes.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    FreeTimeGap,
    Sensitivity,
    RandomBernoulli,
    RandomDeterministic,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Machines.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Jobs, for the random kinds.
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Exponent constant of the sensitivity instance.
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Required by the random kinds.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    min_size: u32,
    #[arg(long, default_value_t = 4)]
    max_size: u32,
    /// Probabilities are multiples of 1/prob-steps.
    #[arg(long, default_value_t = 20)]
    prob_steps: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_GENERATED_JOBS)]
    max_jobs: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct EstimateArgs {
    /// Instance JSON file.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "total_completion")]
    metric: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Ordering rule (spt, size-order, random, sept, stochfree,
    /// rescale-stochfree, halve, bft:<size-order|spt|sept|random>).
    #[arg(long)]
    alg: String,
    #[command(flatten)]
    common: EstimateArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    alg: String,
    /// Rule in the ratio denominator.
    #[arg(long)]
    baseline: String,
    #[command(flatten)]
    common: EstimateArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Completion,
    FreeTime,
    BatchFreeTime,
}

#[derive(Args)]
struct CapArgs {
    #[arg(long, default_value_t = OracleCaps::default().max_jobs)]
    max_jobs: usize,
    #[arg(long, default_value_t = OracleCaps::default().max_machines)]
    max_machines: usize,
    #[arg(long, default_value_t = OracleCaps::default().max_free_time_jobs)]
    max_free_time_jobs: usize,
    /// Largest number of random jobs whose realizations are enumerated.
    #[arg(long, default_value_t = stochsched_core::job_model::DEFAULT_ENUMERATION_CAP)]
    enumeration_cap: usize,
}

impl CapArgs {
    fn caps(&self) -> OracleCaps {
        OracleCaps {
            max_jobs: self.max_jobs,
            max_machines: self.max_machines,
            max_free_time_jobs: self.max_free_time_jobs,
        }
    }
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    mode: OracleMode,
    /// Comma-separated realized sizes by job id; defaults to the only
    /// realization of a deterministic instance.
    #[arg(long)]
    realization: Option<String>,
    #[command(flatten)]
    caps: CapArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite names, or `all`.
    #[arg(required = true)]
    suites: Vec<String>,
    #[arg(long)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    caps: CapArgs,
    #[arg(long)]
    spt_cases: Option<usize>,
    #[arg(long)]
    bernoulli_cases: Option<usize>,
    #[arg(long)]
    bft_cases: Option<usize>,
    #[arg(long)]
    monotonicity_cases: Option<usize>,
    #[arg(long)]
    exchange_cases: Option<usize>,
    #[arg(long)]
    containment_cases: Option<usize>,
    #[arg(long)]
    nesting_cases: Option<usize>,
    #[arg(long)]
    random_list_cases: Option<usize>,
    #[arg(long)]
    random_list_orders: Option<usize>,
    #[arg(long)]
    halving_cases: Option<usize>,
    #[arg(long)]
    sept_cases: Option<usize>,
    #[arg(long)]
    free_vol_cases: Option<usize>,
    /// Comma-separated even machine counts for the sensitivity sweep.
    #[arg(long, value_delimiter = ',')]
    sensitivity_machines: Option<Vec<usize>>,
    #[arg(long)]
    sensitivity_c: Option<f64>,
}

impl VerifyArgs {
    fn config(&self) -> SuiteConfig {
        let mut c = SuiteConfig::with_seed(self.seed);
        let overrides = [
            (self.spt_cases, &mut c.spt_cases),
            (self.bernoulli_cases, &mut c.bernoulli_cases),
            (self.bft_cases, &mut c.bft_cases),
            (self.monotonicity_cases, &mut c.monotonicity_cases),
            (self.exchange_cases, &mut c.exchange_cases),
            (self.containment_cases, &mut c.containment_cases),
            (self.nesting_cases, &mut c.nesting_cases),
            (self.random_list_cases, &mut c.random_list_cases),
            (self.random_list_orders, &mut c.random_list_orders),
            (self.halving_cases, &mut c.halving_cases),
            (self.sept_cases, &mut c.sept_cases),
            (self.free_vol_cases, &mut c.free_vol_cases),
        ];
        for (value, slot) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(m) = &self.sensitivity_machines {
            c.sensitivity_machines = m.clone();
        }
        if let Some(v) = self.sensitivity_c {
            c.sensitivity_c = v;
        }
        c.caps = self.caps.caps();
        c.enumeration_cap = self.caps.enumeration_cap;
        c
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_gen(args: &GenArgs) -> anyhow::Result<()> {
    let seed = || args.seed.ok_or_else(|| anyhow!("--seed is required for random instances"));
    let instance = match args.kind {
        GenKind::FreeTimeGap => gen_free_time_gap_instance(args.m)?,
        GenKind::Sensitivity => gen_machine_sensitivity_instance(args.m, args.c, args.max_jobs)?,
        GenKind::RandomBernoulli => {
            let params = RandomBernoulliParams {
                n: args.n,
                machines: args.m,
                max_size: args.max_size,
                prob_steps: args.prob_steps,
            };
            random_bernoulli_instance(&params, &mut rng::stream(seed()?, 0))?
        }
        GenKind::RandomDeterministic => {
            let params = RandomDeterministicParams {
                n: args.n,
                machines: args.m,
                min_size: args.min_size,
                max_size: args.max_size,
            };
            random_deterministic_instance(&params, &mut rng::stream(seed()?, 0))?
        }
    };
    emit(args.out.as_deref(), &(instance.to_json()? + "\n"))
}

fn write_rows(rows: &[RatioReport], format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let text = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_reports_csv(rows, &mut buf)?;
            String::from_utf8(buf)?
        }
        Format::Json => serde_json::to_string_pretty(rows)? + "\n",
    };
    emit(out, &text)
}

fn cmd_run(args: &RunArgs) -> anyhow::Result<()> {
    let c = &args.common;
    let alg: Algorithm = args.alg.parse()?;
    let metric: Metric = c.metric.parse()?;
    let instance = load_instance(&c.instance)?;
    let est = monte_carlo_metric(&instance, alg, metric, c.trials, c.seed)?;
    let row = RatioReport::new(&instance_id(&c.instance), &alg.to_string(), metric, est, None, c.seed);
    write_rows(&[row], c.format, c.out.as_deref())
}

fn cmd_compare(args: &CompareArgs) -> anyhow::Result<()> {
    let c = &args.common;
    let alg: Algorithm = args.alg.parse()?;
    let baseline: Algorithm = args.baseline.parse()?;
    let metric: Metric = c.metric.parse()?;
    let instance = load_instance(&c.instance)?;
    let row = compare(&instance_id(&c.instance), &instance, alg, baseline, metric, c.trials, c.seed)?;
    write_rows(&[row], c.format, c.out.as_deref())
}

fn parse_realization(text: &str) -> anyhow::Result<Realization> {
    let sizes = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad size {s:?}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Realization::new(sizes))
}

fn cmd_oracle(args: &OracleArgs) -> anyhow::Result<()> {
    let instance = load_instance(&args.instance)?;
    let caps = args.caps.caps();
    let realization = || -> anyhow::Result<Realization> {
        let r = match &args.realization {
            Some(text) => parse_realization(text)?,
            None => instance
                .certain_realization()
                .ok_or_else(|| anyhow!("the instance is random; pass --realization"))?,
        };
        r.check_against(&instance)?;
        Ok(r)
    };
    let report = match args.mode {
        OracleMode::Completion => {
            let opt = opt_adaptive_completion(&instance, &caps)?;
            let first = opt.first_choice(&DpState::initial(instance.machines(), instance.n()));
            json!({ "mode": "completion", "value": opt.value(), "first_choice": first })
        }
        OracleMode::FreeTime => {
            let r = realization()?;
            let jobs: Vec<(usize, f64)> = r.sizes().iter().copied().enumerate().collect();
            let value = opt_free_time_det(&jobs, &LoadVector::zeros(instance.machines()), caps.max_free_time_jobs)?;
            json!({ "mode": "free-time", "value": value })
        }
        OracleMode::BatchFreeTime => {
            let r = realization()?;
            let plan = choose_jobs(&instance)?;
            let values = opt_batch_free_times(&plan, &instance, &r, caps.max_free_time_jobs)?;
            json!({ "mode": "batch-free-time", "batches": plan.batches(), "values": values })
        }
    };
    emit(None, &(serde_json::to_string_pretty(&report)? + "\n"))
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let outcomes = run_suites(&args.suites, &args.config())?;
    let text = serde_json::to_string_pretty(&outcomes)? + "\n";
    if let Some(path) = &args.out {
        fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    std::io::stdout().write_all(text.as_bytes())?;
    for o in &outcomes {
        let status = if o.passed() { "pass" } else { "FAIL" };
        eprintln!("{status} {} ({} cases, {} failures)", o.check, o.cases, o.failures.len());
    }
    Ok(outcomes.iter().all(|o| o.passed()))
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("STOCHSCHED_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| anyhow!("STOCHSCHED_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let cap = err
        .chain()
        .any(|e| e.downcast_ref::<Error>().is_some_and(Error::is_cap));
    if cap {
        3
    } else {
        2
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    configure_threads()?;
    match &cli.command {
        Command::Gen(a) => cmd_gen(a)?,
        Command::Run(a) => cmd_run(a)?,
        Command::Compare(a) => cmd_compare(a)?,
        Command::Oracle(a) => cmd_oracle(a)?,
        Command::Verify(a) => {
            if a.suites.is_empty() {
                bail!("no suites given; known: all, {}", SUITE_NAMES.join(", "));
            }
            if !cmd_verify(a)? {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
