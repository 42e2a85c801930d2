//! Simulation of list schedules on identical machines.
//!
//! A list schedule never idles: whenever a machine is free it starts the next
//! job of the list. With initial loads this is the same as repeatedly giving
//! the next job to a machine of minimum current load, which is what
//! [`run_list_schedule`] does (ties go to the lowest machine index).
//!
//! The free time `F(i)` is the first time at which `i` jobs have started and
//! some machine is free; for these schedules it is the minimum machine load
//! after the first `i` assignments, and it is also the start time of the
//! `(i+1)`-st listed job.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::job_model::{Instance, Realization};

/// Initial load of every machine. `f64::INFINITY` disables a machine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoadVector(pub Vec<f64>);

impl LoadVector {
    pub fn zeros(machines: usize) -> Self {
        LoadVector(vec![0.0; machines])
    }

    pub fn machines(&self) -> usize {
        self.0.len()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::InvalidArgument("load vector is empty".into()));
        }
        if let Some(bad) = self.0.iter().find(|l| l.is_nan() || **l < 0.0) {
            return Err(Error::InvalidArgument(format!("initial load {bad} is negative")));
        }
        Ok(())
    }
}

/// A scheduling list: job ids in the order they are started.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ListOrder(pub Vec<usize>);

impl ListOrder {
    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_permutation_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.0.len() == n
            && self
                .0
                .iter()
                .all(|&id| id < n && !std::mem::replace(&mut seen[id], true))
    }
}

impl From<Vec<usize>> for ListOrder {
    fn from(v: Vec<usize>) -> Self {
        ListOrder(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduledJob {
    pub job_id: usize,
    pub machine: usize,
    pub start: f64,
    pub completion: f64,
    pub size: f64,
}

/// Full record of one simulated list schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    jobs: Vec<ScheduledJob>,
    free_times: Vec<f64>,
    final_loads: Vec<f64>,
    order: ListOrder,
}

impl Trace {
    /// Scheduled jobs in list order.
    pub fn jobs(&self) -> &[ScheduledJob] {
        &self.jobs
    }

    /// `F(0), …, F(T)` where `T` is the number of listed jobs.
    pub fn free_times(&self) -> &[f64] {
        &self.free_times
    }

    pub fn final_loads(&self) -> &[f64] {
        &self.final_loads
    }

    pub fn order(&self) -> &ListOrder {
        &self.order
    }

    pub fn scheduled(&self) -> usize {
        self.jobs.len()
    }

    pub fn job(&self, id: usize) -> Option<&ScheduledJob> {
        self.jobs.iter().find(|j| j.job_id == id)
    }

    /// Completion time of every scheduled job, indexed by id (`NaN` for ids
    /// that were not listed).
    pub fn completions_by_id(&self, n: usize) -> Vec<f64> {
        let mut out = vec![f64::NAN; n];
        for j in &self.jobs {
            if j.job_id < n {
                out[j.job_id] = j.completion;
            }
        }
        out
    }

    pub fn free_time_after(&self, i: usize) -> Result<f64> {
        self.free_times
            .get(i)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: i,
                max: self.jobs.len(),
            })
    }

    pub fn total_completion(&self) -> f64 {
        self.jobs.iter().map(|j| j.completion).sum()
    }

    /// Largest machine load at the end of the schedule.
    pub fn makespan(&self) -> f64 {
        self.final_loads.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Proxy for the sum of start times:
    /// `Σ_{k=1..K} ⌈n/2^k⌉ · F(n − ⌈n/2^k⌉)` with `K = max(1, ⌈log₂ n⌉)`.
    pub fn weighted_free_time(&self, n: usize) -> Result<f64> {
        if n == 0 || n != self.jobs.len() {
            return Err(Error::InvalidArgument(format!(
                "weighted free time over {n} jobs requested, trace scheduled {}",
                self.jobs.len()
            )));
        }
        let levels = ceil_log2(n).max(1);
        Ok((1..=levels)
            .map(|k| {
                let w = ceil_div_pow2(n, k);
                w as f64 * self.free_times[n - w]
            })
            .sum())
    }

    /// CSV with columns `job_id,machine,start,completion,size`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for j in &self.jobs {
            w.serialize(j)?;
        }
        w.flush()?;
        Ok(())
    }

    /// CSV with columns `i,F_i`.
    pub fn write_free_times_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "F_i"])?;
        for (i, f) in self.free_times.iter().enumerate() {
            w.write_record([i.to_string(), f.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `⌈log₂ n⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// `⌈n / 2^k⌉`.
pub fn ceil_div_pow2(n: usize, k: u32) -> usize {
    if k >= usize::BITS {
        return usize::from(n > 0);
    }
    let d = 1usize << k;
    n / d + usize::from(n % d != 0)
}

/// Simulates `order` against fixed job sizes.
///
/// The machine count is `initial.machines()` and must match the instance.
pub fn run_list_schedule(
    instance: &Instance,
    realization: &Realization,
    order: &ListOrder,
    initial: &LoadVector,
) -> Result<Trace> {
    if initial.machines() != instance.machines() {
        return Err(Error::InvalidArgument(format!(
            "load vector has {} entries for {} machines",
            initial.machines(),
            instance.machines()
        )));
    }
    let sizes = order
        .ids()
        .iter()
        .map(|&id| {
            if id >= instance.n() {
                Err(Error::UnknownJob(id))
            } else {
                realization.size(id)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    simulate(order, &sizes, initial)
}

/// Simulation core over an explicit size per listed job.
pub(crate) fn simulate(order: &ListOrder, sizes: &[f64], initial: &LoadVector) -> Result<Trace> {
    initial.validate()?;
    let mut seen = std::collections::HashSet::with_capacity(order.len());
    if let Some(&dup) = order.ids().iter().find(|id| !seen.insert(**id)) {
        return Err(Error::InvalidArgument(format!("job {dup} listed twice")));
    }
    let mut loads = initial.0.clone();
    let mut jobs = Vec::with_capacity(order.len());
    let mut free_times = Vec::with_capacity(order.len() + 1);
    free_times.push(min_load(&loads).1);
    for (&job_id, &size) in order.ids().iter().zip(sizes) {
        let (machine, start) = min_load(&loads);
        loads[machine] = start + size;
        jobs.push(ScheduledJob {
            job_id,
            machine,
            start,
            completion: start + size,
            size,
        });
        free_times.push(min_load(&loads).1);
    }
    Ok(Trace {
        jobs,
        free_times,
        final_loads: loads,
        order: order.clone(),
    })
}

/// Lowest-index machine among those of minimum load.
fn min_load(loads: &[f64]) -> (usize, f64) {
    let mut best = (0, loads[0]);
    for (i, &l) in loads.iter().enumerate().skip(1) {
        if l < best.1 {
            best = (i, l);
        }
    }
    best
}

/// `F(|sizes|)` for `sizes` list-scheduled in the given order on `loads`.
/// Allocation-free; used by the brute-force oracles.
pub(crate) fn final_free_time(sizes: impl IntoIterator<Item = f64>, loads: &mut [f64]) -> f64 {
    for s in sizes {
        let (m, l) = min_load(loads);
        loads[m] = l + s;
    }
    min_load(loads).1
}
