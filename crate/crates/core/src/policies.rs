//! Scheduling orders and the nested batch construction.
//!
//! Every rule here produces a [`ListOrder`]; the clairvoyant ones (`spt`,
//! `halve`) look at a realization, the rest only at the distributions.
//! Unspecified "arbitrary" orders are always ascending job id.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::job_model::{normalize_and_partition, Instance, Realization};
use crate::list_engine::{ceil_div_pow2, ceil_log2, run_list_schedule, ListOrder, LoadVector};
use crate::rng;

/// Nested job sets `J_1 ⊆ … ⊆ J_K` and the jobs left outside `J_K`.
///
/// All sets are sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchPlan {
    n: usize,
    batches: Vec<Vec<usize>>,
    leftover: Vec<usize>,
}

impl BatchPlan {
    /// Builds a plan from explicit nested sets over jobs `0..n`.
    pub fn from_nested(n: usize, mut batches: Vec<Vec<usize>>) -> Result<Self> {
        for b in &mut batches {
            b.sort_unstable();
            b.dedup();
            if let Some(&bad) = b.iter().find(|&&id| id >= n) {
                return Err(Error::UnknownJob(bad));
            }
        }
        for w in batches.windows(2) {
            if !is_subset(&w[0], &w[1]) {
                return Err(Error::InvalidArgument("batches are not nested".into()));
            }
        }
        let last = batches.last().cloned().unwrap_or_default();
        let leftover = (0..n).filter(|id| last.binary_search(id).is_err()).collect();
        Ok(BatchPlan {
            n,
            batches,
            leftover,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of batches `K`.
    pub fn k(&self) -> usize {
        self.batches.len()
    }

    /// `J_1, …, J_K`.
    pub fn batches(&self) -> &[Vec<usize>] {
        &self.batches
    }

    /// `J_k` for `k` in `1..=K`; `J_0` is empty.
    pub fn prefix_set(&self, k: usize) -> &[usize] {
        if k == 0 {
            &[]
        } else {
            &self.batches[k - 1]
        }
    }

    /// `I_k = J_k \ J_{k−1}` for `k` in `1..=K`.
    pub fn increment(&self, k: usize) -> Vec<usize> {
        let prev = self.prefix_set(k - 1);
        self.batches[k - 1]
            .iter()
            .copied()
            .filter(|id| prev.binary_search(id).is_err())
            .collect()
    }

    /// `J \ J_K`.
    pub fn leftover(&self) -> &[usize] {
        &self.leftover
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|id| b.binary_search(id).is_ok())
}

/// Sorts ids by a float key, ties by id.
fn sort_by_key_then_id(ids: &mut [usize], key: impl Fn(usize) -> f64) {
    ids.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
}

/// Realized size ascending, ties by id.
pub fn spt_order(instance: &Instance, realization: &Realization) -> Result<ListOrder> {
    let sizes = (0..instance.n())
        .map(|id| realization.size(id))
        .collect::<Result<Vec<_>>>()?;
    let mut ids: Vec<usize> = (0..instance.n()).collect();
    sort_by_key_then_id(&mut ids, |id| sizes[id]);
    Ok(ids.into())
}

/// Size parameter `s_j` ascending, ties by id; probabilities are ignored.
pub fn bernoulli_size_order(instance: &Instance) -> Result<ListOrder> {
    let coins = instance.coins()?;
    let mut ids: Vec<usize> = (0..instance.n()).collect();
    sort_by_key_then_id(&mut ids, |id| coins[id].0);
    Ok(ids.into())
}

/// Uniformly random permutation (Fisher–Yates on a seeded stream).
pub fn random_order(instance: &Instance, seed: u64) -> ListOrder {
    random_order_with(instance.n(), &mut rng::stream(seed, 0))
}

pub(crate) fn random_order_with(n: usize, rng: &mut rng::StreamRng) -> ListOrder {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    ids.into()
}

/// Expected size ascending, ties by id. Optimal on a single machine.
pub fn sept_order(instance: &Instance) -> ListOrder {
    let exp = instance.expected_sizes();
    let mut ids: Vec<usize> = (0..instance.n()).collect();
    sort_by_key_then_id(&mut ids, |id| exp[id]);
    ids.into()
}

/// Groups job ids by size parameter; each group sorted by `(p, id)`
/// ascending. Groups are ordered by size.
pub(crate) fn size_classes(coins: &[(f64, f64)]) -> Vec<Vec<usize>> {
    let mut ids: Vec<usize> = (0..coins.len()).collect();
    ids.sort_by(|&a, &b| {
        coins[a]
            .0
            .total_cmp(&coins[b].0)
            .then(coins[a].1.total_cmp(&coins[b].1))
            .then(a.cmp(&b))
    });
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for id in ids {
        match classes.last_mut() {
            Some(c) if coins[c[0]].0 == coins[id].0 => c.push(id),
            _ => classes.push(vec![id]),
        }
    }
    classes
}

/// The nested batches: for `k = 1..=⌈log₂ n⌉`, `J_k` is every job except, in
/// each size class, the `⌈n/2^k⌉` jobs with the largest `p_j` (larger id
/// first among equal `p_j`). Deterministic jobs count as `p = 1`.
pub fn choose_jobs(instance: &Instance) -> Result<BatchPlan> {
    let coins = instance.coins()?;
    let n = instance.n();
    let classes = size_classes(&coins);
    let levels = ceil_log2(n);
    let batches = (1..=levels)
        .map(|k| {
            let excluded = ceil_div_pow2(n, k);
            let mut kept: Vec<usize> = classes
                .iter()
                .flat_map(|class| class[..class.len().saturating_sub(excluded)].iter().copied())
                .collect();
            kept.sort_unstable();
            kept
        })
        .collect();
    BatchPlan::from_nested(n, batches)
}

/// Concatenation `rule(I_1) ‖ rule(I_2) ‖ … ‖ rule(I_K)`; the leftover is not
/// appended.
pub fn bft_from_ft<F>(plan: &BatchPlan, mut rule: F) -> ListOrder
where
    F: FnMut(&[usize]) -> Vec<usize>,
{
    let mut order = Vec::new();
    for k in 1..=plan.k() {
        order.extend(rule(&plan.increment(k)));
    }
    order.into()
}

/// Per-batch rule: size parameter ascending, ties by id.
pub fn size_rule(coins: &[(f64, f64)]) -> impl Fn(&[usize]) -> Vec<usize> + '_ {
    move |ids: &[usize]| {
        let mut v = ids.to_vec();
        sort_by_key_then_id(&mut v, |id| coins[id].0);
        v
    }
}

/// Batches from [`choose_jobs`], each in size-parameter order, then the
/// leftover by id. On one machine this returns [`sept_order`] instead.
pub fn stoch_free_order(instance: &Instance) -> Result<ListOrder> {
    if instance.machines() == 1 {
        instance.coins()?;
        return Ok(sept_order(instance));
    }
    batched_size_order(instance)
}

/// The batch-structured part of [`stoch_free_order`] regardless of machine
/// count.
pub fn batched_size_order(instance: &Instance) -> Result<ListOrder> {
    let coins = instance.coins()?;
    let plan = choose_jobs(instance)?;
    let mut order = bft_from_ft(&plan, size_rule(&coins)).0;
    order.extend_from_slice(plan.leftover());
    Ok(order.into())
}

/// Large jobs, then small jobs (both by id), then the medium jobs in
/// [`stoch_free_order`] order, after power-of-two rounding and rescaling.
pub fn rescale_wrapper_order(instance: &Instance) -> Result<ListOrder> {
    let prep = normalize_and_partition(instance)?;
    let mut order = prep.large.clone();
    order.extend_from_slice(&prep.small);
    if !prep.medium.is_empty() {
        let sub = Instance::from_distributions(
            instance.machines(),
            prep.medium
                .iter()
                .map(|&id| prep.instance.jobs()[id].dist.clone())
                .collect(),
        )?;
        order.extend(stoch_free_order(&sub)?.ids().iter().map(|&local| prep.medium[local]));
    }
    Ok(order.into())
}

/// Ids by completion time of the SPT schedule on all `m` machines, ties by
/// id; meant to be run on `⌊m/2⌋` machines.
pub fn halve_machines_order(instance: &Instance, realization: &Realization) -> Result<ListOrder> {
    if instance.machines() < 2 {
        return Err(Error::InvalidArgument(format!(
            "halving needs m >= 2, got {}",
            instance.machines()
        )));
    }
    let spt = spt_order(instance, realization)?;
    let trace = run_list_schedule(
        instance,
        realization,
        &spt,
        &LoadVector::zeros(instance.machines()),
    )?;
    let completion = trace.completions_by_id(instance.n());
    let mut ids: Vec<usize> = (0..instance.n()).collect();
    sort_by_key_then_id(&mut ids, |id| completion[id]);
    Ok(ids.into())
}

/// Per-batch rules accepted by `bft:<rule>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BatchRule {
    SizeOrder,
    Spt,
    Sept,
    Random,
}

/// Registry of the named ordering rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Spt,
    SizeOrder,
    Random,
    Sept,
    StochFree,
    RescaleStochFree,
    Halve,
    Bft(BatchRule),
}

impl Algorithm {
    pub const NAMES: [&'static str; 8] = [
        "spt",
        "size-order",
        "random",
        "sept",
        "stochfree",
        "rescale-stochfree",
        "halve",
        "bft:<rule>",
    ];

    /// Whether the order depends on the realized sizes.
    pub fn is_clairvoyant(self) -> bool {
        matches!(
            self,
            Algorithm::Spt | Algorithm::Halve | Algorithm::Bft(BatchRule::Spt)
        )
    }

    pub fn is_randomized(self) -> bool {
        matches!(self, Algorithm::Random | Algorithm::Bft(BatchRule::Random))
    }

    /// Machines the order is executed on for an instance with `m` machines.
    pub fn execution_machines(self, m: usize) -> usize {
        match self {
            Algorithm::Halve => (m / 2).max(1),
            _ => m,
        }
    }

    /// The list for one trial. `rng` is only drawn from by randomized rules.
    pub fn order(
        self,
        instance: &Instance,
        realization: &Realization,
        rng: &mut rng::StreamRng,
    ) -> Result<ListOrder> {
        match self {
            Algorithm::Spt => spt_order(instance, realization),
            Algorithm::SizeOrder => bernoulli_size_order(instance),
            Algorithm::Random => Ok(random_order_with(instance.n(), rng)),
            Algorithm::Sept => Ok(sept_order(instance)),
            Algorithm::StochFree => stoch_free_order(instance),
            Algorithm::RescaleStochFree => rescale_wrapper_order(instance),
            Algorithm::Halve => halve_machines_order(instance, realization),
            Algorithm::Bft(rule) => {
                let plan = choose_jobs(instance)?;
                let coins = instance.coins()?;
                let exp = instance.expected_sizes();
                let sizes = (0..instance.n())
                    .map(|id| realization.size(id))
                    .collect::<Result<Vec<_>>>()?;
                let mut order = bft_from_ft(&plan, |ids| {
                    let mut v = ids.to_vec();
                    match rule {
                        BatchRule::SizeOrder => sort_by_key_then_id(&mut v, |id| coins[id].0),
                        BatchRule::Spt => sort_by_key_then_id(&mut v, |id| sizes[id]),
                        BatchRule::Sept => sort_by_key_then_id(&mut v, |id| exp[id]),
                        BatchRule::Random => v.shuffle(rng),
                    }
                    v
                })
                .0;
                order.extend_from_slice(plan.leftover());
                Ok(order.into())
            }
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "spt" => Algorithm::Spt,
            "size-order" => Algorithm::SizeOrder,
            "random" => Algorithm::Random,
            "sept" => Algorithm::Sept,
            "stochfree" => Algorithm::StochFree,
            "rescale-stochfree" => Algorithm::RescaleStochFree,
            "halve" => Algorithm::Halve,
            other => match other.strip_prefix("bft:") {
                Some("size-order") => Algorithm::Bft(BatchRule::SizeOrder),
                Some("spt") => Algorithm::Bft(BatchRule::Spt),
                Some("sept") => Algorithm::Bft(BatchRule::Sept),
                Some("random") => Algorithm::Bft(BatchRule::Random),
                _ => return Err(Error::UnknownAlgorithm(s.to_string())),
            },
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Algorithm::Spt => "spt",
            Algorithm::SizeOrder => "size-order",
            Algorithm::Random => "random",
            Algorithm::Sept => "sept",
            Algorithm::StochFree => "stochfree",
            Algorithm::RescaleStochFree => "rescale-stochfree",
            Algorithm::Halve => "halve",
            Algorithm::Bft(BatchRule::SizeOrder) => "bft:size-order",
            Algorithm::Bft(BatchRule::Spt) => "bft:spt",
            Algorithm::Bft(BatchRule::Sept) => "bft:sept",
            Algorithm::Bft(BatchRule::Random) => "bft:random",
        };
        f.write_str(name)
    }
}

/// Compares `(p, id)` pairs the way the batch exclusions rank them.
pub(crate) fn prob_then_id(coins: &[(f64, f64)], a: usize, b: usize) -> Ordering {
    coins[a].1.total_cmp(&coins[b].1).then(a.cmp(&b))
}
