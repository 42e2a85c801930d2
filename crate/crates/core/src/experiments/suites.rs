//! The verification suites. Each one draws random instances, computes the
//! quantities a guarantee talks about, and records every violated
//! inequality with its instance and realization.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{gather, run_cases, Case, Metric, SuiteConfig, SuiteOutcome};
use crate::error::Result;
use crate::experiments::exact_metric;
use crate::job_model::{
    enumerate_realizations, gen_free_time_gap_instance, gen_machine_sensitivity_instance,
    random_bernoulli_instance, random_deterministic_instance, Instance, RandomBernoulliParams,
    RandomDeterministicParams, Realization, DEFAULT_MAX_GENERATED_JOBS,
};
use crate::list_engine::{
    ceil_div_pow2, final_free_time, run_list_schedule, ListOrder, LoadVector, Trace,
};
use crate::oracle::{
    check_exchange_property, identical_jobs_optimum, opt_adaptive_completion,
    opt_batch_free_times, opt_free_time_det, small_volume_bound,
};
use crate::policies::{
    bft_from_ft, choose_jobs, halve_machines_order, random_order_with, size_classes, spt_order,
    stoch_free_order, Algorithm, BatchPlan, BatchRule,
};
use crate::rng::{family_stream, StreamRng};

// stream families, one per suite
const SPT: u32 = 1;
const BERNOULLI: u32 = 2;
const BFT: u32 = 3;
const FT_TO_BFT: u32 = 4;
const MONOTONICITY: u32 = 5;
const EXCHANGE: u32 = 6;
const CONTAINMENT: u32 = 7;
const NESTING: u32 = 8;
const RANDOM_LIST: u32 = 9;
const RANDOM_LIST_ORDERS: u32 = 10;
const HALVING: u32 = 11;
const SEPT: u32 = 12;
const FREE_VOL: u32 = 13;

fn case_rng(config: &SuiteConfig, family: u32, index: usize) -> StreamRng {
    family_stream(config.seed, family, index as u32)
}

fn zeros(instance: &Instance) -> LoadVector {
    LoadVector::zeros(instance.machines())
}

fn final_free(trace: &Trace) -> f64 {
    *trace.free_times().last().expect("F(0) is always present")
}

fn realized(realization: &Realization, ids: &[usize]) -> Vec<(usize, f64)> {
    ids.iter().map(|&id| (id, realization.sizes()[id])).collect()
}

fn all_realized(realization: &Realization) -> Vec<(usize, f64)> {
    realization.sizes().iter().copied().enumerate().collect()
}

/// Like [`run_cases`], with a second outcome fed by the same cases.
fn run_paired_cases<F>(
    checks: (&str, &str),
    seed: u64,
    count: usize,
    body: F,
) -> (SuiteOutcome, SuiteOutcome)
where
    F: Fn(usize, &mut Case, &mut Case) -> Result<()> + Sync,
{
    let (main, side): (Vec<Case>, Vec<Case>) = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut main = Case::new(i, seed);
            let mut side = Case::new(i, seed);
            if let Err(e) = body(i, &mut main, &mut side) {
                main.fail(None, format!("error: {e}"));
            }
            (main, side)
        })
        .unzip();
    (gather(checks.0, count, main), gather(checks.1, count, side))
}

/// Every `F*` query of a free-time suite also checks `F* >= Vol(S)/(2m)`.
fn check_small_lower(lemma: &mut Case, sizes: &[(usize, f64)], machines: usize, fstar: f64, r: Option<&Realization>) {
    let all: Vec<f64> = sizes.iter().map(|&(_, s)| s).collect();
    lemma.le(small_volume_bound(&all, machines, fstar), fstar, r, || {
        format!("Vol(S)/2m <= F* for jobs {:?}", sizes.iter().map(|j| j.0).collect::<Vec<_>>())
    });
}

/// The big-first order on the gap instances has free time exactly `m`
/// against an optimum of exactly 1.
pub fn verify_free_time_gap() -> SuiteOutcome {
    run_cases("gap", 0, 5, |i, case| {
        let m = i + 2;
        let inst = gen_free_time_gap_instance(m)?;
        case.set_instance(&inst);
        let r = inst.certain_realization().expect("deterministic");
        let big_first: Vec<usize> = (m..2 * m - 1).chain(0..m).collect();
        let f = final_free(&run_list_schedule(&inst, &r, &big_first.into(), &zeros(&inst))?);
        let opt = opt_free_time_det(&all_realized(&r), &zeros(&inst), 2 * m - 1)?;
        case.close(f, m as f64, 0.0, None, || format!("big-first free time, m = {m}"));
        case.close(opt, 1.0, 0.0, None, || format!("optimal free time, m = {m}"));
        case.close(f / opt, m as f64, 0.0, None, || format!("ratio, m = {m}"));
        Ok(())
    })
}

pub(crate) struct FreeTimeSuites {
    pub spt: SuiteOutcome,
    pub bernoulli: SuiteOutcome,
    pub bft: SuiteOutcome,
    lower: Vec<SuiteOutcome>,
}

impl FreeTimeSuites {
    pub fn small_lower(&self) -> SuiteOutcome {
        SuiteOutcome::merge("opt-small-lower", self.lower.clone())
    }
}

pub(crate) fn free_time_suites(config: &SuiteConfig) -> FreeTimeSuites {
    let (spt, a) = spt_suite(config);
    let (bernoulli, b) = bernoulli_suite(config);
    let (bft, c) = bft_suite(config, "bft", BFT, &[BatchRule::SizeOrder], 4.0);
    FreeTimeSuites {
        spt,
        bernoulli,
        bft,
        lower: vec![a, b, c],
    }
}

fn spt_suite(config: &SuiteConfig) -> (SuiteOutcome, SuiteOutcome) {
    run_paired_cases(("spt", "opt-small-lower"), config.seed, config.spt_cases, |i, case, lemma| {
        let mut rng = case_rng(config, SPT, i);
        let params = RandomDeterministicParams {
            n: rng.gen_range(1..=8),
            machines: rng.gen_range(2..=4),
            min_size: 1,
            max_size: 6,
        };
        let inst = random_deterministic_instance(&params, &mut rng)?;
        case.set_instance(&inst);
        lemma.set_instance(&inst);
        let r = inst.certain_realization().expect("deterministic");
        let f = final_free(&run_list_schedule(&inst, &r, &spt_order(&inst, &r)?, &zeros(&inst))?);
        let jobs = all_realized(&r);
        let fstar = opt_free_time_det(&jobs, &zeros(&inst), config.caps.max_free_time_jobs)?;
        case.le(f, 4.0 * fstar, None, || "F(spt) <= 4 F*".into());
        check_small_lower(lemma, &jobs, inst.machines(), fstar, None);
        Ok(())
    })
}

/// Size-parameter order is a 4-approximation of the free time in every
/// realization.
pub fn verify_spt_four_approx(config: &SuiteConfig) -> SuiteOutcome {
    spt_suite(config).0
}

fn bernoulli_suite(config: &SuiteConfig) -> (SuiteOutcome, SuiteOutcome) {
    run_paired_cases(
        ("bernoulli", "opt-small-lower"),
        config.seed,
        config.bernoulli_cases,
        |i, case, lemma| {
            let mut rng = case_rng(config, BERNOULLI, i);
            let params = RandomBernoulliParams {
                n: rng.gen_range(1..=8),
                machines: rng.gen_range(2..=4),
                max_size: 4,
                prob_steps: 4,
            };
            let inst = random_bernoulli_instance(&params, &mut rng)?;
            case.set_instance(&inst);
            lemma.set_instance(&inst);
            let order = crate::policies::bernoulli_size_order(&inst)?;
            // realizations with the same multiset of nonzero sizes share F*
            let mut memo: HashMap<Vec<u64>, f64> = HashMap::new();
            for (r, _) in enumerate_realizations(&inst, config.enumeration_cap)? {
                let f = final_free(&run_list_schedule(&inst, &r, &order, &zeros(&inst))?);
                let jobs = all_realized(&r);
                let mut key: Vec<u64> = r.sizes().iter().filter(|&&s| s != 0.0).map(|s| s.to_bits()).collect();
                key.sort_unstable();
                let fstar = match memo.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = opt_free_time_det(&jobs, &zeros(&inst), config.caps.max_free_time_jobs)?;
                        memo.insert(key, v);
                        v
                    }
                };
                case.le(f, 4.0 * fstar, Some(&r), || "F(size order) <= 4 F*".into());
                check_small_lower(lemma, &jobs, inst.machines(), fstar, Some(&r));
            }
            Ok(())
        },
    )
}

/// Per realization, listing Bernoulli jobs by size parameter is within 4
/// of the optimal free time of the realized sizes.
pub fn verify_bernoulli_per_realization(config: &SuiteConfig) -> SuiteOutcome {
    bernoulli_suite(config).0
}

/// Nested sets from a random level in `1..=K+1` per job.
fn random_nesting(n: usize, levels: usize, rng: &mut StreamRng) -> Result<BatchPlan> {
    let level: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=levels + 1)).collect();
    let batches = (1..=levels)
        .map(|k| (0..n).filter(|&j| level[j] <= k).collect())
        .collect();
    BatchPlan::from_nested(n, batches)
}

fn batch_order(plan: &BatchPlan, rule: BatchRule, coins: &[(f64, f64)], r: &Realization) -> ListOrder {
    bft_from_ft(plan, |ids| {
        let mut v = ids.to_vec();
        let key = |id: usize| match rule {
            BatchRule::Spt => r.sizes()[id],
            _ => coins[id].0,
        };
        v.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
        v
    })
}

fn bft_suite(
    config: &SuiteConfig,
    check: &str,
    family: u32,
    rules: &[BatchRule],
    alpha: f64,
) -> (SuiteOutcome, SuiteOutcome) {
    run_paired_cases((check, "opt-small-lower"), config.seed, config.bft_cases, |i, case, lemma| {
        let mut rng = case_rng(config, family, i);
        let params = RandomBernoulliParams {
            n: rng.gen_range(1..=7),
            machines: rng.gen_range(2..=4),
            max_size: 4,
            prob_steps: 4,
        };
        let inst = random_bernoulli_instance(&params, &mut rng)?;
        case.set_instance(&inst);
        lemma.set_instance(&inst);
        let plan = if i % 2 == 0 {
            choose_jobs(&inst)?
        } else {
            let levels = rng.gen_range(1..=3);
            random_nesting(inst.n(), levels, &mut rng)?
        };
        let coins = inst.coins()?;
        let cap = config.caps.max_free_time_jobs;
        for (r, _) in enumerate_realizations(&inst, config.enumeration_cap)? {
            let constrained = opt_batch_free_times(&plan, &inst, &r, cap)?;
            for (k, &fk) in constrained.iter().enumerate() {
                check_small_lower(lemma, &realized(&r, plan.prefix_set(k + 1)), inst.machines(), fk, Some(&r));
            }
            for &rule in rules {
                let trace = run_list_schedule(&inst, &r, &batch_order(&plan, rule, &coins, &r), &zeros(&inst))?;
                let mut budget = 0.0;
                for k in 1..=plan.k() {
                    budget += constrained[k - 1];
                    let f = trace.free_times()[plan.prefix_set(k).len()];
                    case.le(f, (alpha + 1.0) * budget, Some(&r), || {
                        format!("{rule:?}: F(J_{k}) <= {} * sum of constrained optima", alpha + 1.0)
                    });
                }
            }
        }
        Ok(())
    })
}

/// Batches in size-parameter order solve the batched problem within 5.
pub fn verify_bft_five_approx(config: &SuiteConfig) -> SuiteOutcome {
    bft_suite(config, "bft", BFT, &[BatchRule::SizeOrder], 4.0).0
}

/// The batch reduction applied to two per-realization 4-approximate rules
/// (size parameter, and realized size) gives the ratio 5.
pub fn verify_ft_to_bft(config: &SuiteConfig) -> SuiteOutcome {
    bft_suite(config, "ft-to-bft", FT_TO_BFT, &[BatchRule::SizeOrder, BatchRule::Spt], 4.0).0
}

/// Raising initial loads or removing a machine never lowers any free time
/// or the total completion time.
pub fn verify_monotonicity(config: &SuiteConfig) -> SuiteOutcome {
    run_cases("monotonicity", config.seed, config.monotonicity_cases, |i, case| {
        let mut rng = case_rng(config, MONOTONICITY, i);
        let m = rng.gen_range(1..=5);
        let n = rng.gen_range(0..=10);
        let sizes: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=12) as f64 * 0.5).collect();
        let inst = Instance::deterministic(m, &sizes)?;
        case.set_instance(&inst);
        let r = inst.certain_realization().expect("deterministic");
        let order = random_order_with(n, &mut rng);
        let base: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..5.0)).collect();
        let raised: Vec<f64> = base
            .iter()
            .map(|&l| if rng.gen_bool(0.5) { l + rng.gen_range(0.0..3.0) } else { l })
            .collect();
        let low = run_list_schedule(&inst, &r, &order, &LoadVector(base.clone()))?;
        let mut variants = vec![("raised loads", raised)];
        if m > 1 {
            let mut removed = base.clone();
            removed[rng.gen_range(0..m)] = f64::INFINITY;
            variants.push(("removed machine", removed));
        }
        for (what, loads) in variants {
            let high = run_list_schedule(&inst, &r, &order, &LoadVector(loads))?;
            for (idx, (a, b)) in low.free_times().iter().zip(high.free_times()).enumerate() {
                case.le(*a, *b, None, || format!("{what}: F({idx})"));
            }
            case.le(low.total_completion(), high.total_completion(), None, || {
                format!("{what}: total completion")
            });
        }
        Ok(())
    })
}

/// Restricting the optimal policy to start equal-size jobs in increasing
/// probability order costs nothing.
pub fn verify_exchange(config: &SuiteConfig) -> SuiteOutcome {
    run_cases("exchange", config.seed, config.exchange_cases, |i, case| {
        let mut rng = case_rng(config, EXCHANGE, i);
        let params = RandomBernoulliParams {
            n: rng.gen_range(1..=6),
            machines: rng.gen_range(1..=3),
            max_size: 3,
            prob_steps: 5,
        };
        let inst = random_bernoulli_instance(&params, &mut rng)?;
        case.set_instance(&inst);
        let (constrained, free) = check_exchange_property(&inst, &config.caps)?;
        case.close(constrained, free, crate::EPS, None, || "constrained optimum".into());
        Ok(())
    })
}

/// Nesting, size bounds and per-class probability prefixes of the batches.
fn check_plan_structure(case: &mut Case, inst: &Instance, plan: &BatchPlan) -> Result<()> {
    let n = inst.n();
    let coins = inst.coins()?;
    let classes = size_classes(&coins);
    for k in 1..=plan.k() {
        let jk = plan.prefix_set(k);
        let prev = plan.prefix_set(k - 1);
        case.ensure(prev.iter().all(|id| jk.binary_search(id).is_ok()), None, || {
            format!("J_{} not inside J_{k}", k - 1)
        });
        let excluded = ceil_div_pow2(n, k as u32);
        let upper = n - excluded;
        let lower = n.saturating_sub(classes.len() * excluded);
        case.ensure((lower..=upper).contains(&jk.len()), None, || {
            format!("|J_{k}| = {} outside [{lower}, {upper}]", jk.len())
        });
        for class in &classes {
            let kept = class.iter().take_while(|id| jk.binary_search(id).is_ok()).count();
            let extra = class[kept..].iter().any(|id| jk.binary_search(id).is_ok());
            case.ensure(!extra, None, || format!("J_{k} keeps a non-prefix of its size class"));
        }
    }
    let mut all: Vec<usize> = plan.prefix_set(plan.k()).to_vec();
    all.extend_from_slice(plan.leftover());
    all.sort_unstable();
    case.ensure(all == (0..n).collect::<Vec<_>>(), None, || "J_K and leftover do not partition".into());
    Ok(())
}

/// The batches are nested with the stated sizes, and each `J_k` is started
/// within the first `n - ⌈n/2^k⌉` jobs of the canonical optimal policy in
/// every realization.
pub fn verify_batch_containment(config: &SuiteConfig) -> SuiteOutcome {
    let nesting = run_cases("containment", config.seed, config.nesting_cases, |i, case| {
        let mut rng = case_rng(config, NESTING, i);
        let params = RandomBernoulliParams {
            n: rng.gen_range(1..=200),
            machines: rng.gen_range(1..=8),
            max_size: rng.gen_range(1..=6),
            prob_steps: 10,
        };
        let inst = random_bernoulli_instance(&params, &mut rng)?;
        case.set_instance(&inst);
        check_plan_structure(case, &inst, &choose_jobs(&inst)?)
    });
    let replay = run_cases("containment", config.seed, config.containment_cases, |i, case| {
        let mut rng = case_rng(config, CONTAINMENT, i);
        let params = RandomBernoulliParams {
            n: rng.gen_range(1..=6),
            machines: rng.gen_range(1..=3),
            max_size: 3,
            prob_steps: 4,
        };
        let inst = random_bernoulli_instance(&params, &mut rng)?;
        case.set_instance(&inst);
        let plan = choose_jobs(&inst)?;
        check_plan_structure(case, &inst, &plan)?;
        let opt = opt_adaptive_completion(&inst, &config.caps)?;
        let n = inst.n();
        for (r, _) in enumerate_realizations(&inst, config.enumeration_cap)? {
            let started = opt.replay_order(&r)?;
            for k in 1..=plan.k() {
                let first = &started.ids()[..n - ceil_div_pow2(n, k as u32)];
                let missing: Vec<usize> =
                    plan.prefix_set(k).iter().copied().filter(|id| !first.contains(id)).collect();
                case.ensure(missing.is_empty(), Some(&r), || {
                    format!("J_{k} jobs {missing:?} not among the optimum's first {}", first.len())
                });
            }
        }
        Ok(())
    });
    // replay cases are numbered after the nesting cases
    let offset = nesting.cases;
    let mut replay = replay;
    for f in &mut replay.failures {
        f.case += offset;
    }
    SuiteOutcome::merge("containment", vec![nesting, replay])
}

/// The mean free time of uniformly random orders is within `4(1 + ln m)` of
/// the optimum.
pub fn verify_random_list_logm(config: &SuiteConfig) -> SuiteOutcome {
    run_cases("random-list", config.seed, config.random_list_cases, |i, case| {
        let mut rng = case_rng(config, RANDOM_LIST, i);
        let params = RandomDeterministicParams {
            n: rng.gen_range(1..=9),
            machines: rng.gen_range(1..=6),
            min_size: 1,
            max_size: 6,
        };
        let inst = random_deterministic_instance(&params, &mut rng)?;
        case.set_instance(&inst);
        let r = inst.certain_realization().expect("deterministic");
        let fstar = opt_free_time_det(&all_realized(&r), &zeros(&inst), config.caps.max_free_time_jobs)?;
        let mut orders = case_rng(config, RANDOM_LIST_ORDERS, i);
        let mut total = 0.0;
        let mut loads = vec![0.0; inst.machines()];
        for _ in 0..config.random_list_orders {
            let order = random_order_with(inst.n(), &mut orders);
            loads.iter_mut().for_each(|l| *l = 0.0);
            total += final_free_time(order.ids().iter().map(|&id| r.sizes()[id]), &mut loads);
        }
        let mean = total / config.random_list_orders.max(1) as f64;
        let bound = 4.0 * (1.0 + (inst.machines() as f64).ln()) * fstar;
        case.le(mean, bound, None, || "mean F(random order) <= 4(1 + ln m) F*".into());
        Ok(())
    })
}

/// Replaying the m-machine SPT completion order on `m/2` machines delays
/// each job by at most a factor 3.
pub fn verify_halving(config: &SuiteConfig) -> SuiteOutcome {
    run_cases("halving", config.seed, config.halving_cases, |i, case| {
        let mut rng = case_rng(config, HALVING, i);
        let m = 2 * rng.gen_range(1..=3);
        let n = rng.gen_range(1..=12);
        let sizes: Vec<f64> = if i % 2 == 0 {
            (0..n).map(|_| rng.gen_range(1..=6) as f64).collect()
        } else {
            (0..n).map(|_| rng.gen_range(0.1..6.0)).collect()
        };
        let inst = Instance::deterministic(m, &sizes)?;
        case.set_instance(&inst);
        let r = inst.certain_realization().expect("deterministic");
        let full = run_list_schedule(&inst, &r, &spt_order(&inst, &r)?, &zeros(&inst))?;
        let half_inst = inst.with_machines(m / 2)?;
        let half = run_list_schedule(&half_inst, &r, &halve_machines_order(&inst, &r)?, &zeros(&half_inst))?;
        let before = full.completions_by_id(n);
        let after = half.completions_by_id(n);
        for j in 0..n {
            case.le(after[j], 3.0 * before[j], None, || format!("C_{j} on m/2 <= 3 C_{j} on m"));
        }
        Ok(())
    })
}

/// On one machine the adaptive optimum equals the expected cost of SEPT.
pub fn verify_sept_single_machine(config: &SuiteConfig) -> SuiteOutcome {
    run_cases("sept", config.seed, config.sept_cases, |i, case| {
        let mut rng = case_rng(config, SEPT, i);
        let params = RandomBernoulliParams {
            n: rng.gen_range(1..=6),
            machines: 1,
            max_size: 4,
            prob_steps: 10,
        };
        let inst = random_bernoulli_instance(&params, &mut rng)?;
        case.set_instance(&inst);
        let opt = opt_adaptive_completion(&inst, &config.caps)?.value();
        let sept = exact_metric(&inst, Algorithm::Sept, Metric::TotalCompletion, config.enumeration_cap)?;
        case.close(opt, sept, crate::EPS, None, || "adaptive optimum = E[SEPT]".into());
        Ok(())
    })
}

/// For the StochFree schedule, per realization and level `k`:
/// `F(J_k) <= F(J_{k-1}) + Vol(I_k(<= τ_k)) / (m - |J_{k-1}(> τ_k)|) + 2 τ_k`
/// with `τ_k = 2 max(E F*(i_k), F*(i_k))`, `i_k = n - ⌈n/2^k⌉`, where `F*`
/// is the free time along the canonical optimal policy.
pub fn verify_free_vol_inequality(config: &SuiteConfig) -> SuiteOutcome {
    run_cases("free-vol", config.seed, config.free_vol_cases, |i, case| {
        let mut rng = case_rng(config, FREE_VOL, i);
        let params = RandomBernoulliParams {
            n: rng.gen_range(1..=6),
            machines: rng.gen_range(2..=3),
            max_size: 4,
            prob_steps: 4,
        };
        let inst = random_bernoulli_instance(&params, &mut rng)?;
        case.set_instance(&inst);
        let n = inst.n();
        let m = inst.machines();
        let plan = choose_jobs(&inst)?;
        let order = stoch_free_order(&inst)?;
        let opt = opt_adaptive_completion(&inst, &config.caps)?;
        let realizations = enumerate_realizations(&inst, config.enumeration_cap)?;
        let runs = realizations
            .iter()
            .map(|(r, _)| {
                Ok((
                    opt.trace(r)?,
                    run_list_schedule(&inst, r, &order, &zeros(&inst))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        for k in 1..=plan.k() {
            let ik = n - ceil_div_pow2(n, k as u32);
            let expected: f64 = realizations
                .iter()
                .zip(&runs)
                .map(|((_, p), (opt_trace, _))| p * opt_trace.free_times()[ik])
                .sum();
            let jk = plan.prefix_set(k);
            let prev = plan.prefix_set(k - 1);
            let inc = plan.increment(k);
            for ((r, _), (opt_trace, alg)) in realizations.iter().zip(&runs) {
                let tau = 2.0 * expected.max(opt_trace.free_times()[ik]);
                let s = r.sizes();
                let vol: f64 = inc.iter().map(|&j| s[j]).filter(|&x| x <= tau).sum();
                let big = prev.iter().filter(|&&j| s[j] > tau).count();
                if big >= m {
                    case.fail(Some(r), format!("k = {k}: {big} jobs of J_{} exceed tau = {tau}", k - 1));
                    continue;
                }
                let rhs = alg.free_times()[prev.len()] + vol / (m - big) as f64 + 2.0 * tau;
                case.le(alg.free_times()[jk.len()], rhs, Some(r), || format!("k = {k}: free-volume bound"));
            }
        }
        Ok(())
    })
}

/// `F* >= Vol(S)/(2m)` on every free-time oracle query made by the `spt`,
/// `bernoulli` and `bft` suites.
pub fn verify_opt_small_lower(config: &SuiteConfig) -> SuiteOutcome {
    free_time_suites(config).small_lower()
}

/// One line of the machine-sensitivity sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub machines: usize,
    pub c: f64,
    pub jobs: usize,
    pub prob: f64,
    /// Optimal expected total completion on `machines` machines.
    pub opt_full: f64,
    /// The same on `machines / 2` machines.
    pub opt_half: f64,
    pub ratio: f64,
}

/// Exact `E opt(m/2) / E opt(m)` on the identical-jobs instances.
pub fn sensitivity_sweep(machines: &[usize], c: f64) -> Result<Vec<SensitivityRow>> {
    machines
        .iter()
        .map(|&m| {
            let inst = gen_machine_sensitivity_instance(m, c, DEFAULT_MAX_GENERATED_JOBS)?;
            let (size, prob) = inst.coins()?[0];
            let opt_full = identical_jobs_optimum(size, prob, inst.n(), m);
            let opt_half = identical_jobs_optimum(size, prob, inst.n(), m / 2);
            Ok(SensitivityRow {
                machines: m,
                c,
                jobs: inst.n(),
                prob,
                opt_full,
                opt_half,
                ratio: opt_half / opt_full,
            })
        })
        .collect()
}

/// The sweep's ratio exceeds 1 and does not decrease with `m`.
pub fn verify_sensitivity(config: &SuiteConfig) -> SuiteOutcome {
    let machines = &config.sensitivity_machines;
    run_cases("sensitivity", config.seed, 1, |_, case| {
        let rows = sensitivity_sweep(machines, config.sensitivity_c)?;
        let mut prev: Option<&SensitivityRow> = None;
        for row in &rows {
            case.record(row.ratio - 1.0);
            case.ensure(row.ratio > 1.0, None, || format!("m = {}: ratio {} <= 1", row.machines, row.ratio));
            if let Some(p) = prev {
                case.le(p.ratio, row.ratio, None, || {
                    format!("ratio decreases from m = {} to m = {}", p.machines, row.machines)
                });
            }
            prev = Some(row);
        }
        Ok(())
    })
}
