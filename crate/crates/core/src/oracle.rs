//! Exact baselines for small instances.
//!
//! * [`opt_adaptive_completion`]: the optimal adaptive policy for expected
//!   total completion time of Bernoulli jobs, by memoized recursion over
//!   decision-tree states.
//! * [`opt_free_time_det`] and [`opt_batch_free_times`]: optimal free times
//!   of fixed job sizes, by enumerating list orders.
//!
//! Adaptive policies are non-idling and always start the chosen job on a
//! least loaded machine; they differ from list schedules only in that the
//! next job may depend on the sizes already revealed.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::job_model::{Instance, Realization};
use crate::list_engine::{final_free_time, run_list_schedule, ListOrder, LoadVector, Trace};
use crate::policies::{prob_then_id, size_classes, BatchPlan};

/// Size limits for the exponential routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    /// Jobs accepted by the adaptive DP.
    pub max_jobs: usize,
    /// Machines accepted by the adaptive DP.
    pub max_machines: usize,
    /// Jobs accepted by the free-time permutation search.
    pub max_free_time_jobs: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_jobs: 10,
            max_machines: 4,
            max_free_time_jobs: 9,
        }
    }
}

const QUANTUM: f64 = 1e-9;
const TIE_TOLERANCE: f64 = 1e-10;

/// A decision-tree node: machine loads and the set of jobs not yet started.
#[derive(Clone, Debug, PartialEq)]
pub struct DpState {
    pub loads: Vec<f64>,
    /// Bit `j` set while job `j` is unscheduled.
    pub remaining: u32,
}

impl DpState {
    pub fn initial(machines: usize, n: usize) -> Self {
        DpState {
            loads: vec![0.0; machines],
            remaining: full_mask(n),
        }
    }

    /// Loads sorted ascending and shifted so the smallest is zero. Policies
    /// only see this form; the shift adds the same amount to every job still
    /// to start, whatever the choice.
    fn canonical(&self) -> (Vec<f64>, f64) {
        let mut loads = self.loads.clone();
        loads.sort_by(f64::total_cmp);
        let base = loads[0];
        for l in &mut loads {
            *l -= base;
        }
        (loads, base)
    }
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

type MemoKey = (Vec<i64>, u32);

fn memo_key(shifted: &[f64], remaining: u32) -> MemoKey {
    (
        shifted.iter().map(|l| (l / QUANTUM).round() as i64).collect(),
        remaining,
    )
}

struct Solver {
    coins: Vec<(f64, f64)>,
    /// For the exchange check: jobs that must already be started before
    /// job `j` may be chosen.
    predecessors: Option<Vec<u32>>,
    memo: HashMap<MemoKey, (f64, usize)>,
}

impl Solver {
    fn new(coins: Vec<(f64, f64)>, constrained: bool) -> Self {
        let predecessors = constrained.then(|| {
            let mut pre = vec![0u32; coins.len()];
            for class in size_classes(&coins) {
                for (pos, &j) in class.iter().enumerate() {
                    for &i in &class[..pos] {
                        debug_assert!(prob_then_id(&coins, i, j).is_lt());
                        pre[j] |= 1 << i;
                    }
                }
            }
            pre
        });
        Solver {
            coins,
            predecessors,
            memo: HashMap::new(),
        }
    }

    /// Value and canonical choice at a canonical (sorted, shifted) state.
    fn solve(&mut self, shifted: &[f64], remaining: u32) -> (f64, usize) {
        if remaining == 0 {
            return (0.0, usize::MAX);
        }
        let key = memo_key(shifted, remaining);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let mut values: Vec<(usize, f64)> = Vec::new();
        for j in 0..self.coins.len() {
            if remaining >> j & 1 == 0 {
                continue;
            }
            if let Some(pre) = &self.predecessors {
                if pre[j] & remaining != 0 {
                    continue;
                }
            }
            let (s, p) = self.coins[j];
            let rest = remaining & !(1 << j);
            let count = rest.count_ones() as f64;
            // heads: the least loaded machine grows by s
            let mut heads = shifted.to_vec();
            heads[0] += s;
            heads.sort_by(f64::total_cmp);
            let heads_base = heads[0];
            for l in &mut heads {
                *l -= heads_base;
            }
            let v_heads = self.solve(&heads, rest).0 + count * heads_base;
            let v_tails = self.solve(shifted, rest).0;
            values.push((j, p * s + p * v_heads + (1.0 - p) * v_tails));
        }
        let best = values
            .iter()
            .map(|&(_, v)| v)
            .fold(f64::INFINITY, f64::min);
        let tol = TIE_TOLERANCE * best.abs();
        let coins = &self.coins;
        let choice = values
            .iter()
            .filter(|&&(_, v)| v <= best + tol)
            .map(|&(j, _)| j)
            .min_by(|&a, &b| {
                coins[a]
                    .0
                    .total_cmp(&coins[b].0)
                    .then(prob_then_id(coins, a, b))
            })
            .expect("some job is always choosable");
        self.memo.insert(key, (best, choice));
        (best, choice)
    }

    fn value_at(&mut self, state: &DpState) -> (f64, usize) {
        let (shifted, base) = state.canonical();
        let (v, choice) = self.solve(&shifted, state.remaining);
        (v + base * state.remaining.count_ones() as f64, choice)
    }
}

/// Optimal adaptive policy for expected total completion time, with the
/// canonical tie-break `(s_j, p_j, id)` among optimal choices.
pub struct AdaptiveOptimum {
    instance: Instance,
    value: f64,
    solver: std::cell::RefCell<Solver>,
}

impl std::fmt::Debug for AdaptiveOptimum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AdaptiveOptimum")
            .field("value", &self.value)
            .finish_non_exhaustive()
    }
}

impl AdaptiveOptimum {
    /// Minimum expected `Σ_j C_j`.
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    /// The canonical optimal job to start at `state`, if any job remains.
    pub fn first_choice(&self, state: &DpState) -> Option<usize> {
        if state.remaining == 0 || state.loads.len() != self.instance.machines() {
            return None;
        }
        Some(self.solver.borrow_mut().value_at(state).1)
    }

    /// Optimal expected total completion time from an arbitrary state.
    pub fn value_from(&self, state: &DpState) -> f64 {
        self.solver.borrow_mut().value_at(state).0
    }

    /// Executes the canonical policy against one realization.
    pub fn trace(&self, realization: &Realization) -> Result<Trace> {
        let order = self.replay_order(realization)?;
        run_list_schedule(
            &self.instance,
            realization,
            &order,
            &LoadVector::zeros(self.instance.machines()),
        )
    }

    /// The start order the canonical policy produces under `realization`.
    pub fn replay_order(&self, realization: &Realization) -> Result<ListOrder> {
        let n = self.instance.n();
        let mut state = DpState::initial(self.instance.machines(), n);
        let mut order = Vec::with_capacity(n);
        while state.remaining != 0 {
            let j = self.first_choice(&state).expect("jobs remain");
            let size = realization.size(j)?;
            let (idx, _) = state
                .loads
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
                .expect("at least one machine");
            state.loads[idx] += size;
            state.remaining &= !(1 << j);
            order.push(j);
        }
        Ok(order.into())
    }
}

fn check_dp_caps(instance: &Instance, caps: &OracleCaps) -> Result<Vec<(f64, f64)>> {
    let coins = instance.coins()?;
    let job_cap = caps.max_jobs.min(31);
    if instance.n() > job_cap {
        return Err(Error::cap("jobs for the adaptive oracle", job_cap, instance.n()));
    }
    if instance.machines() > caps.max_machines {
        return Err(Error::cap(
            "machines for the adaptive oracle",
            caps.max_machines,
            instance.machines(),
        ));
    }
    Ok(coins)
}

fn solve_instance(instance: &Instance, caps: &OracleCaps, constrained: bool) -> Result<(f64, Solver)> {
    let coins = check_dp_caps(instance, caps)?;
    let mut solver = Solver::new(coins, constrained);
    let (value, _) = solver.value_at(&DpState::initial(instance.machines(), instance.n()));
    Ok((value, solver))
}

/// Minimum over adaptive policies of `E Σ_j C_j`.
pub fn opt_adaptive_completion(instance: &Instance, caps: &OracleCaps) -> Result<AdaptiveOptimum> {
    let (value, solver) = solve_instance(instance, caps, false)?;
    Ok(AdaptiveOptimum {
        instance: instance.clone(),
        value,
        solver: std::cell::RefCell::new(solver),
    })
}

/// Replays the canonical optimal policy against `realization`.
pub fn opt_adaptive_trace(
    instance: &Instance,
    realization: &Realization,
    caps: &OracleCaps,
) -> Result<Trace> {
    opt_adaptive_completion(instance, caps)?.trace(realization)
}

/// `(constrained, unconstrained)` optimal values, where the constrained DP
/// may only start a job once every job of the same size with smaller
/// `(p, id)` has started.
pub fn check_exchange_property(instance: &Instance, caps: &OracleCaps) -> Result<(f64, f64)> {
    let (constrained, _) = solve_instance(instance, caps, true)?;
    let (unconstrained, _) = solve_instance(instance, caps, false)?;
    Ok((constrained, unconstrained))
}

/// Rearranges `v` into the next lexicographic permutation; false after the
/// last one. Equal elements are not distinguished, so starting from sorted
/// input each distinct arrangement is produced once.
pub(crate) fn next_permutation(v: &mut [f64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Minimum free time over all arrangements of `blocks[0]`, then `blocks[1]`,
/// …; each block is sorted ascending on entry.
fn min_over_block_orders(blocks: &mut [Vec<f64>], loads: &[f64]) -> f64 {
    let Some((first, rest)) = blocks.split_first_mut() else {
        return loads.iter().copied().fold(f64::INFINITY, f64::min);
    };
    let mut best = f64::INFINITY;
    let mut scratch = loads.to_vec();
    loop {
        scratch.copy_from_slice(loads);
        if rest.is_empty() {
            best = best.min(final_free_time(first.iter().copied(), &mut scratch));
        } else {
            final_free_time(first.iter().copied(), &mut scratch);
            best = best.min(min_over_block_orders(rest, &scratch));
        }
        if !next_permutation(first) {
            break;
        }
    }
    // leave the block sorted again for the caller's next iteration
    first.sort_by(f64::total_cmp);
    best
}

fn nonzero_sorted(sizes: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = sizes.into_iter().filter(|&s| s != 0.0).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Optimal free time of fixed jobs: minimum over every list order of the free
/// time after all of them have started. Zero-size jobs never change a free
/// time and are skipped by the search.
pub fn opt_free_time_det(jobs: &[(usize, f64)], initial: &LoadVector, cap: usize) -> Result<f64> {
    if jobs.len() > cap {
        return Err(Error::cap("jobs for the free-time oracle", cap, jobs.len()));
    }
    if initial.machines() == 0 {
        return Err(Error::InvalidArgument("no machines".into()));
    }
    let mut blocks = vec![nonzero_sorted(jobs.iter().map(|&(_, s)| s))];
    Ok(min_over_block_orders(&mut blocks, &initial.0))
}

/// For each `k`, the optimal free time of `J_k` among orders that start all
/// of `J_1`, then all of `I_2`, …, then all of `I_k` (any order inside a
/// batch), from empty machines.
pub fn opt_batch_free_times(
    plan: &BatchPlan,
    instance: &Instance,
    realization: &Realization,
    cap: usize,
) -> Result<Vec<f64>> {
    let total = plan.batches().last().map_or(0, Vec::len);
    if total > cap {
        return Err(Error::cap("jobs for the batch free-time oracle", cap, total));
    }
    let increments = (1..=plan.k())
        .map(|k| {
            plan.increment(k)
                .into_iter()
                .map(|id| realization.size(id))
                .collect::<Result<Vec<_>>>()
                .map(nonzero_sorted)
        })
        .collect::<Result<Vec<_>>>()?;
    let zeros = vec![0.0; instance.machines()];
    Ok((1..=plan.k())
        .map(|k| min_over_block_orders(&mut increments[..k].to_vec(), &zeros))
        .collect())
}

/// `Vol(S)/(2m)` where `S` is the jobs of size at most `free_time`; every
/// schedule whose free time is `free_time` satisfies `free_time >=` this.
pub fn small_volume_bound(sizes: &[f64], machines: usize, free_time: f64) -> f64 {
    let volume: f64 = sizes.iter().filter(|&&s| s <= free_time).sum();
    volume / (2.0 * machines as f64)
}

/// Exact optimal expected total completion time of `count` identical
/// `size·Ber(prob)` jobs on `machines` machines.
///
/// All adaptive policies coincide when the jobs are identical, so this is a
/// DP over (sorted loads, jobs left) and scales to far more jobs than
/// [`opt_adaptive_completion`].
pub fn identical_jobs_optimum(size: f64, prob: f64, count: usize, machines: usize) -> f64 {
    fn go(
        loads: &[f64],
        left: usize,
        size: f64,
        prob: f64,
        memo: &mut HashMap<(Vec<i64>, usize), f64>,
    ) -> f64 {
        if left == 0 {
            return 0.0;
        }
        let key = (loads.iter().map(|l| (l / QUANTUM).round() as i64).collect(), left);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut heads = loads.to_vec();
        heads[0] += size;
        heads.sort_by(f64::total_cmp);
        let base = heads[0];
        for l in &mut heads {
            *l -= base;
        }
        let rest = (left - 1) as f64;
        let v = prob * size
            + prob * (go(&heads, left - 1, size, prob, memo) + rest * base)
            + (1.0 - prob) * go(loads, left - 1, size, prob, memo);
        memo.insert(key, v);
        v
    }
    go(&vec![0.0; machines.max(1)], count, size, prob, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job_model::{enumerate_realizations, gen_free_time_gap_instance, Distribution};
    use crate::policies::{choose_jobs, sept_order};
    use proptest::prelude::*;

    fn caps() -> OracleCaps {
        OracleCaps::default()
    }

    /// Expected total completion of a fixed list order, by enumeration.
    fn list_expectation(instance: &Instance, order: &ListOrder) -> f64 {
        enumerate_realizations(instance, 16)
            .unwrap()
            .iter()
            .map(|(r, p)| {
                let t = run_list_schedule(instance, r, order, &LoadVector::zeros(instance.machines()))
                    .unwrap();
                p * t.total_completion()
            })
            .sum()
    }

    /// Independent oracle: expectation of the best adaptive policy by brute
    /// force over all decision trees, written as a plain recursion without
    /// memo, canonicalization or tie-breaking.
    fn brute_adaptive(coins: &[(f64, f64)], loads: Vec<f64>, remaining: Vec<usize>) -> f64 {
        if remaining.is_empty() {
            return 0.0;
        }
        let (idx, &l) = loads
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        remaining
            .iter()
            .map(|&j| {
                let (s, p) = coins[j];
                let rest: Vec<usize> = remaining.iter().copied().filter(|&x| x != j).collect();
                let mut heads = loads.clone();
                heads[idx] += s;
                l + p * s
                    + p * brute_adaptive(coins, heads, rest.clone())
                    + (1.0 - p) * brute_adaptive(coins, loads.clone(), rest)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn deterministic_jobs_one_per_machine() {
        let inst = Instance::deterministic(2, &[1.0, 2.0]).unwrap();
        assert_eq!(opt_adaptive_completion(&inst, &caps()).unwrap().value(), 3.0);
    }

    #[test]
    fn single_machine_low_probability_first() {
        // orders: (0.5 first) 0.5 + (0.5 + 1) = 2.0; (sure first) 1 + 1.5 = 2.5
        let inst = Instance::bernoulli(1, &[(1.0, 0.5), (1.0, 1.0)]).unwrap();
        let opt = opt_adaptive_completion(&inst, &caps()).unwrap();
        assert!((opt.value() - 2.0).abs() < 1e-12);
        assert_eq!(opt.first_choice(&DpState::initial(1, 2)), Some(0));
    }

    #[test]
    fn matches_brute_force_decision_trees() {
        let cases: &[(usize, &[(f64, f64)])] = &[
            (2, &[(1.0, 0.5), (2.0, 0.3), (3.0, 0.9), (1.0, 0.2)]),
            (3, &[(4.0, 0.1), (1.0, 1.0), (2.0, 0.5), (2.0, 0.7), (5.0, 0.5)]),
            (2, &[(3.0, 0.5), (3.0, 0.5), (1.0, 0.0), (2.0, 1.0)]),
        ];
        for &(m, coins) in cases {
            let inst = Instance::bernoulli(m, coins).unwrap();
            let dp = opt_adaptive_completion(&inst, &caps()).unwrap().value();
            let brute = brute_adaptive(coins, vec![0.0; m], (0..coins.len()).collect());
            assert!((dp - brute).abs() < 1e-9, "{dp} vs {brute}");
        }
    }

    #[test]
    fn single_machine_matches_sept() {
        let inst = Instance::bernoulli(1, &[(4.0, 0.25), (1.0, 0.5), (3.0, 0.9), (2.0, 1.0)]).unwrap();
        let opt = opt_adaptive_completion(&inst, &caps()).unwrap().value();
        assert!((opt - list_expectation(&inst, &sept_order(&inst))).abs() < 1e-9);
    }

    #[test]
    fn caps_are_enforced() {
        let inst = Instance::bernoulli(2, &[(1.0, 0.5); 11]).unwrap();
        assert!(opt_adaptive_completion(&inst, &caps()).unwrap_err().is_cap());
        let inst = Instance::bernoulli(5, &[(1.0, 0.5); 3]).unwrap();
        assert!(opt_adaptive_completion(&inst, &caps()).unwrap_err().is_cap());
        let jobs: Vec<(usize, f64)> = (0..10).map(|i| (i, 1.0)).collect();
        assert!(opt_free_time_det(&jobs, &LoadVector::zeros(2), 9).unwrap_err().is_cap());
        let discrete = Instance::from_distributions(
            1,
            vec![Distribution::Discrete {
                support: vec![(1.0, 1.0)],
            }],
        )
        .unwrap();
        assert!(opt_adaptive_completion(&discrete, &caps()).is_err());
    }

    #[test]
    fn deterministic_trace_is_fixed() {
        let inst = Instance::deterministic(2, &[3.0, 1.0, 2.0, 1.0]).unwrap();
        let r = inst.certain_realization().unwrap();
        let opt = opt_adaptive_completion(&inst, &caps()).unwrap();
        let t = opt.trace(&r).unwrap();
        // SPT is optimal for deterministic jobs on identical machines
        assert_eq!(t.order().ids(), &[1, 3, 2, 0]);
        assert!((t.total_completion() - opt.value()).abs() < 1e-12);
    }

    #[test]
    fn lower_probability_starts_first_in_every_realization() {
        let inst = Instance::bernoulli(1, &[(1.0, 0.7), (1.0, 0.3)]).unwrap();
        let opt = opt_adaptive_completion(&inst, &caps()).unwrap();
        for (r, _) in enumerate_realizations(&inst, 16).unwrap() {
            assert_eq!(opt.trace(&r).unwrap().order().ids()[0], 1);
        }
    }

    #[test]
    fn replayed_traces_average_to_optimum() {
        let inst = Instance::bernoulli(2, &[(2.0, 0.4), (1.0, 0.9), (3.0, 0.5), (2.0, 0.6), (1.0, 0.1)])
            .unwrap();
        let opt = opt_adaptive_completion(&inst, &caps()).unwrap();
        let avg: f64 = enumerate_realizations(&inst, 16)
            .unwrap()
            .iter()
            .map(|(r, p)| p * opt.trace(r).unwrap().total_completion())
            .sum();
        assert!((avg - opt.value()).abs() < 1e-9);
    }

    #[test]
    fn exchange_two_job_example() {
        // 0.3 first: 0.3 + (0.3 + 0.7) = 1.3; 0.7 first: 0.7 + 1.0 = 1.7
        let inst = Instance::bernoulli(1, &[(1.0, 0.3), (1.0, 0.7)]).unwrap();
        let (c, u) = check_exchange_property(&inst, &caps()).unwrap();
        assert!((c - 1.3).abs() < 1e-12);
        assert!((u - 1.3).abs() < 1e-12);
        let single = Instance::bernoulli(2, &[(4.0, 0.5)]).unwrap();
        let (c, u) = check_exchange_property(&single, &caps()).unwrap();
        assert_eq!(c, u);
    }

    #[test]
    fn free_time_oracle_examples() {
        let gap = gen_free_time_gap_instance(3).unwrap();
        let jobs: Vec<(usize, f64)> = gap
            .certain_realization()
            .unwrap()
            .sizes()
            .iter()
            .copied()
            .enumerate()
            .collect();
        assert_eq!(opt_free_time_det(&jobs, &LoadVector::zeros(3), 9).unwrap(), 1.0);
        assert_eq!(opt_free_time_det(&[], &LoadVector(vec![2.0, 5.0]), 9).unwrap(), 2.0);
        let ones = [(0, 1.0), (1, 1.0), (2, 1.0)];
        assert_eq!(opt_free_time_det(&ones, &LoadVector::zeros(2), 9).unwrap(), 1.0);
    }

    #[test]
    fn next_permutation_counts_distinct_arrangements() {
        let mut v = vec![1.0, 1.0, 2.0, 3.0];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 12);
        assert_eq!(v, vec![3.0, 2.0, 1.0, 1.0]);
    }

    #[test]
    fn batch_free_times() {
        let inst = Instance::deterministic(2, &[3.0, 1.0, 2.0]).unwrap();
        let r = inst.certain_realization().unwrap();
        let single = BatchPlan::from_nested(3, vec![vec![0, 1, 2]]).unwrap();
        let jobs: Vec<(usize, f64)> = r.sizes().iter().copied().enumerate().collect();
        assert_eq!(
            opt_batch_free_times(&single, &inst, &r, 9).unwrap(),
            vec![opt_free_time_det(&jobs, &LoadVector::zeros(2), 9).unwrap()]
        );
        // {0} then {0, 2}: 3 must start before 2 -> loads (3, 2) -> 2
        let forced = BatchPlan::from_nested(3, vec![vec![0], vec![0, 2]]).unwrap();
        assert_eq!(opt_batch_free_times(&forced, &inst, &r, 9).unwrap(), vec![0.0, 2.0]);
        let inst1 = Instance::deterministic(1, &[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(opt_batch_free_times(&forced, &inst1, &r, 9).unwrap(), vec![3.0, 5.0]);
    }

    #[test]
    fn identical_jobs_dp_matches_general_dp() {
        for &(p, count, m) in &[(0.5, 5usize, 2usize), (1.0 / 3.0, 6, 1), (0.25, 7, 3)] {
            let inst = Instance::bernoulli(m, &vec![(1.0, p); count]).unwrap();
            let general = opt_adaptive_completion(&inst, &caps()).unwrap().value();
            let fast = identical_jobs_optimum(1.0, p, count, m);
            assert!((general - fast).abs() < 1e-9, "{general} vs {fast}");
        }
        // sure unit jobs: two machines, two jobs -> 2; one machine -> 3
        assert_eq!(identical_jobs_optimum(1.0, 1.0, 2, 2), 2.0);
        assert_eq!(identical_jobs_optimum(1.0, 1.0, 2, 1), 3.0);
    }

    fn small_instance() -> impl Strategy<Value = Instance> {
        (1usize..=3, proptest::collection::vec((1u32..4, 0u32..=4), 1..6)).prop_map(|(m, raw)| {
            let coins: Vec<(f64, f64)> =
                raw.into_iter().map(|(s, p)| (s as f64, p as f64 / 4.0)).collect();
            Instance::bernoulli(m, &coins).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn value_invariant_under_relabeling(inst in small_instance(), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            let coins = inst.coins().unwrap();
            let mut perm: Vec<usize> = (0..coins.len()).collect();
            perm.shuffle(&mut crate::rng::stream(seed, 0));
            let relabeled: Vec<(f64, f64)> = perm.iter().map(|&i| coins[i]).collect();
            let a = opt_adaptive_completion(&inst, &caps()).unwrap().value();
            let b = opt_adaptive_completion(&Instance::bernoulli(inst.machines(), &relabeled).unwrap(), &caps())
                .unwrap()
                .value();
            prop_assert!((a - b).abs() <= 1e-9);
            prop_assert!(a + 1e-12 >= inst.total_expected_size());
        }

        #[test]
        fn machine_order_does_not_matter(inst in small_instance()) {
            let opt = opt_adaptive_completion(&inst, &caps()).unwrap();
            let m = inst.machines();
            let n = inst.n();
            let mut loads: Vec<f64> = (0..m).map(|i| i as f64 * 1.5).collect();
            let a = opt.value_from(&DpState { loads: loads.clone(), remaining: full_mask(n) });
            loads.reverse();
            let b = opt.value_from(&DpState { loads, remaining: full_mask(n) });
            prop_assert!((a - b).abs() <= 1e-9);
        }

        #[test]
        fn scaling_scales_value_and_keeps_choices(inst in small_instance(), lambda in 0.1f64..20.0) {
            let coins = inst.coins().unwrap();
            let scaled: Vec<(f64, f64)> = coins.iter().map(|&(s, p)| (s * lambda, p)).collect();
            let scaled_inst = Instance::bernoulli(inst.machines(), &scaled).unwrap();
            let a = opt_adaptive_completion(&inst, &caps()).unwrap();
            let b = opt_adaptive_completion(&scaled_inst, &caps()).unwrap();
            prop_assert!((a.value() * lambda - b.value()).abs() <= 1e-9 * (1.0 + b.value()));
            for (r, _) in enumerate_realizations(&inst, 16).unwrap() {
                let rs = Realization::new(r.sizes().iter().map(|s| s * lambda).collect());
                prop_assert_eq!(a.replay_order(&r).unwrap(), b.replay_order(&rs).unwrap());
            }
        }

        #[test]
        fn big_jobs_before_free_time_fewer_than_m(inst in small_instance()) {
            let opt = opt_adaptive_completion(&inst, &caps()).unwrap();
            let m = inst.machines();
            for (r, _) in enumerate_realizations(&inst, 16).unwrap() {
                let t = opt.trace(&r).unwrap();
                for i in 0..=t.scheduled() {
                    let f = t.free_times()[i];
                    let big = t.jobs()[..i].iter().filter(|j| j.size > f).count();
                    prop_assert!(big < m);
                }
            }
        }

        #[test]
        fn free_time_oracle_is_monotone(
            sizes in proptest::collection::vec(0u32..6, 0..7),
            extra in 1u32..6,
            m in 1usize..4,
            bump in 0.0f64..3.0,
        ) {
            let jobs: Vec<(usize, f64)> = sizes.iter().map(|&s| s as f64).enumerate().collect();
            let zeros = LoadVector::zeros(m);
            let base = opt_free_time_det(&jobs, &zeros, 9).unwrap();
            let mut more = jobs.clone();
            more.push((jobs.len(), extra as f64));
            prop_assert!(opt_free_time_det(&more, &zeros, 9).unwrap() >= base);
            let mut raised = zeros.clone();
            raised.0[0] += bump;
            prop_assert!(opt_free_time_det(&jobs, &raised, 9).unwrap() >= base);
            if m > 1 {
                let mut removed = zeros.clone();
                removed.0[m - 1] = f64::INFINITY;
                prop_assert!(opt_free_time_det(&jobs, &removed, 9).unwrap() >= base);
            }
            let all: Vec<f64> = jobs.iter().map(|j| j.1).collect();
            prop_assert!(base >= small_volume_bound(&all, m, base) - 1e-9);
        }

        #[test]
        fn batch_constraint_never_helps(inst in small_instance()) {
            let plan = choose_jobs(&inst).unwrap();
            for (r, _) in enumerate_realizations(&inst, 16).unwrap() {
                let constrained = opt_batch_free_times(&plan, &inst, &r, 9).unwrap();
                for (k, c) in constrained.iter().enumerate() {
                    let jobs: Vec<(usize, f64)> =
                        plan.batches()[k].iter().map(|&id| (id, r.sizes()[id])).collect();
                    let free = opt_free_time_det(&jobs, &LoadVector::zeros(inst.machines()), 9).unwrap();
                    prop_assert!(*c + 1e-12 >= free);
                }
            }
        }
    }
}
