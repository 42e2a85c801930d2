//! Jobs, instances and realizations.
//!
//! A job's processing time is a random variable; for the algorithms in this
//! crate it is almost always `s * Ber(p)`, i.e. the size parameter `s` with
//! probability `p` and zero otherwise. A [`Realization`] fixes one outcome for
//! every job of an [`Instance`].

mod generators;
mod prepare;
pub(crate) mod sampling;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generators::{
    gen_free_time_gap_instance, gen_machine_sensitivity_instance, random_bernoulli_instance,
    random_deterministic_instance, RandomBernoulliParams, RandomDeterministicParams,
    DEFAULT_MAX_GENERATED_JOBS,
};
pub use prepare::{normalize_and_partition, PreparedInstance, SizeClass};
pub use sampling::{enumerate_realizations, sample_realization, DEFAULT_ENUMERATION_CAP};

const PROB_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Distribution {
    /// `size` with probability `prob`, zero otherwise.
    Bernoulli { size: f64, prob: f64 },
    Deterministic { size: f64 },
    /// Finite support given as `(value, probability)` pairs.
    Discrete { support: Vec<(f64, f64)> },
}

impl Distribution {
    pub fn bernoulli(size: f64, prob: f64) -> Self {
        Distribution::Bernoulli { size, prob }
    }

    pub fn deterministic(size: f64) -> Self {
        Distribution::Deterministic { size }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        let check_size = |s: f64| {
            if s.is_finite() && s >= 0.0 {
                Ok(())
            } else {
                Err(format!("size {s} must be finite and nonnegative"))
            }
        };
        let check_prob = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(format!("probability {p} outside [0, 1]"))
            }
        };
        match self {
            Distribution::Bernoulli { size, prob } => {
                check_size(*size)?;
                check_prob(*prob)
            }
            Distribution::Deterministic { size } => check_size(*size),
            Distribution::Discrete { support } => {
                if support.is_empty() {
                    return Err("discrete distribution with empty support".into());
                }
                for &(v, p) in support {
                    check_size(v)?;
                    check_prob(p)?;
                }
                let total: f64 = support.iter().map(|&(_, p)| p).sum();
                if (total - 1.0).abs() > PROB_SUM_TOLERANCE {
                    return Err(format!("discrete probabilities sum to {total}, not 1"));
                }
                Ok(())
            }
        }
    }

    pub fn expectation(&self) -> f64 {
        match self {
            Distribution::Bernoulli { size, prob } => size * prob,
            Distribution::Deterministic { size } => *size,
            Distribution::Discrete { support } => support.iter().map(|&(v, p)| v * p).sum(),
        }
    }

    /// The size parameter `s`; `None` for discrete distributions.
    pub fn size_param(&self) -> Option<f64> {
        match self {
            Distribution::Bernoulli { size, .. } | Distribution::Deterministic { size } => {
                Some(*size)
            }
            Distribution::Discrete { .. } => None,
        }
    }

    /// The probability parameter `p`; deterministic jobs count as `p = 1`.
    pub fn prob_param(&self) -> Option<f64> {
        match self {
            Distribution::Bernoulli { prob, .. } => Some(*prob),
            Distribution::Deterministic { .. } => Some(1.0),
            Distribution::Discrete { .. } => None,
        }
    }

    /// `Some((s, p))` for Bernoulli and deterministic jobs.
    pub fn coin(&self) -> Option<(f64, f64)> {
        Some((self.size_param()?, self.prob_param()?))
    }

    /// True when the outcome is random: a Bernoulli with `0 < p < 1` and a
    /// positive size, or a discrete law with more than one atom.
    pub fn is_random(&self) -> bool {
        match self {
            Distribution::Bernoulli { size, prob } => *size > 0.0 && *prob > 0.0 && *prob < 1.0,
            Distribution::Deterministic { .. } => false,
            Distribution::Discrete { support } => support.iter().filter(|a| a.1 > 0.0).count() > 1,
        }
    }

    /// The realized size when the outcome is not random.
    pub fn certain_value(&self) -> Option<f64> {
        match self {
            Distribution::Bernoulli { size, prob } => {
                if *prob >= 1.0 {
                    Some(*size)
                } else if *prob <= 0.0 || *size == 0.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
            Distribution::Deterministic { size } => Some(*size),
            Distribution::Discrete { support } => {
                let mut atoms = support.iter().filter(|a| a.1 > 0.0);
                match (atoms.next(), atoms.next()) {
                    (Some(&(v, _)), None) => Some(v),
                    _ => None,
                }
            }
        }
    }

    pub fn in_support(&self, value: f64) -> bool {
        match self {
            Distribution::Bernoulli { size, prob } => {
                (value == *size && *prob > 0.0) || (value == 0.0 && *prob < 1.0)
            }
            Distribution::Deterministic { size } => value == *size,
            Distribution::Discrete { support } => {
                support.iter().any(|&(v, p)| v == value && p > 0.0)
            }
        }
    }

    pub(crate) fn scaled(&self, factor: f64) -> Self {
        match self {
            Distribution::Bernoulli { size, prob } => Distribution::Bernoulli {
                size: size * factor,
                prob: *prob,
            },
            Distribution::Deterministic { size } => Distribution::Deterministic {
                size: size * factor,
            },
            Distribution::Discrete { support } => Distribution::Discrete {
                support: support.iter().map(|&(v, p)| (v * factor, p)).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub id: usize,
    pub dist: Distribution,
}

/// `machines` identical machines and a list of jobs whose ids are `0..n`.
///
/// Jobs are always stored in id order, so `jobs()[j].id == j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    machines: usize,
    jobs: Vec<JobSpec>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    machines: usize,
    jobs: Vec<JobSpec>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Instance::new(raw.machines, raw.jobs)
    }
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        RawInstance {
            machines: inst.machines,
            jobs: inst.jobs,
        }
    }
}

impl Instance {
    /// Validates and builds an instance. Jobs may be given in any order but
    /// their ids must be exactly `0..n`.
    pub fn new(machines: usize, mut jobs: Vec<JobSpec>) -> Result<Self> {
        if machines == 0 {
            return Err(Error::InvalidInstance("at least one machine required".into()));
        }
        jobs.sort_by_key(|j| j.id);
        for (pos, job) in jobs.iter().enumerate() {
            if pos > 0 && jobs[pos - 1].id == job.id {
                return Err(Error::InvalidInstance(format!("duplicate job id {}", job.id)));
            }
            if job.id != pos {
                return Err(Error::InvalidInstance(format!(
                    "job ids must be 0..{} without gaps (found {})",
                    jobs.len(),
                    job.id
                )));
            }
            job.dist
                .validate()
                .map_err(|msg| Error::InvalidInstance(format!("job {}: {msg}", job.id)))?;
        }
        Ok(Instance { machines, jobs })
    }

    /// Builds an instance whose job `j` has distribution `dists[j]`.
    pub fn from_distributions(machines: usize, dists: Vec<Distribution>) -> Result<Self> {
        let jobs = dists
            .into_iter()
            .enumerate()
            .map(|(id, dist)| JobSpec { id, dist })
            .collect();
        Instance::new(machines, jobs)
    }

    pub fn deterministic(machines: usize, sizes: &[f64]) -> Result<Self> {
        Instance::from_distributions(
            machines,
            sizes.iter().map(|&s| Distribution::deterministic(s)).collect(),
        )
    }

    pub fn bernoulli(machines: usize, coins: &[(f64, f64)]) -> Result<Self> {
        Instance::from_distributions(
            machines,
            coins.iter().map(|&(s, p)| Distribution::bernoulli(s, p)).collect(),
        )
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn jobs(&self) -> &[JobSpec] {
        &self.jobs
    }

    pub fn dist(&self, id: usize) -> Option<&Distribution> {
        self.jobs.get(id).map(|j| &j.dist)
    }

    pub fn with_machines(&self, machines: usize) -> Result<Self> {
        Instance::new(machines, self.jobs.clone())
    }

    /// `(s_j, p_j)` for every job, or an error naming the first discrete job.
    pub fn coins(&self) -> Result<Vec<(f64, f64)>> {
        self.jobs
            .iter()
            .map(|j| j.dist.coin().ok_or(Error::UnsupportedDistribution(j.id)))
            .collect()
    }

    pub fn expected_sizes(&self) -> Vec<f64> {
        self.jobs.iter().map(|j| j.dist.expectation()).collect()
    }

    pub fn total_expected_size(&self) -> f64 {
        self.expected_sizes().iter().sum()
    }

    /// The realization that exists when no job is random.
    pub fn certain_realization(&self) -> Option<Realization> {
        self.jobs
            .iter()
            .map(|j| j.dist.certain_value())
            .collect::<Option<Vec<_>>>()
            .map(Realization::new)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Realized size of every job, indexed by job id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Realization {
    sizes: Vec<f64>,
}

impl Realization {
    pub fn new(sizes: Vec<f64>) -> Self {
        Realization { sizes }
    }

    pub fn get(&self, id: usize) -> Option<f64> {
        self.sizes.get(id).copied()
    }

    pub fn size(&self, id: usize) -> Result<f64> {
        self.get(id).ok_or(Error::MissingSize(id))
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Checks that every realized size is a possible outcome of its job.
    pub fn check_against(&self, instance: &Instance) -> Result<()> {
        for job in instance.jobs() {
            let v = self.size(job.id)?;
            if !job.dist.in_support(v) {
                return Err(Error::InvalidArgument(format!(
                    "realized size {v} of job {} is outside its support",
                    job.id
                )));
            }
        }
        Ok(())
    }
}

/// Number of distinct nonzero size parameters among Bernoulli and
/// deterministic jobs.
pub fn distinct_size_count(instance: &Instance) -> usize {
    let mut sizes: Vec<f64> = instance
        .jobs()
        .iter()
        .filter_map(|j| j.dist.size_param())
        .filter(|&s| s != 0.0)
        .collect();
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    sizes.len()
}
