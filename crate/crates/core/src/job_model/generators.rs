use rand::Rng;

use super::{Distribution, Instance};
use crate::error::{Error, Result};
use crate::rng::StreamRng;

/// Largest instance the generators will build.
pub const DEFAULT_MAX_GENERATED_JOBS: usize = 1 << 20;

/// `m` unit jobs (ids `0..m`) followed by `m - 1` jobs of size `m`.
///
/// Listing the big jobs first gives free time `m`; the optimum is 1.
pub fn gen_free_time_gap_instance(m: usize) -> Result<Instance> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "gap instance needs m >= 2, got {m}"
        )));
    }
    let sizes: Vec<f64> = std::iter::repeat(1.0)
        .take(m)
        .chain(std::iter::repeat(m as f64).take(m - 1))
        .collect();
    Instance::deterministic(m, &sizes)
}

/// `⌈(7/8)·m·L⌉` identical `Ber(1/L)` unit jobs with `L = ⌈e^{c·m}⌉`.
///
/// On `m` machines almost no machine sees two heads; on `m/2` machines the
/// expected cost jumps by a factor that grows exponentially in `m`.
pub fn gen_machine_sensitivity_instance(m: usize, c: f64, max_jobs: usize) -> Result<Instance> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "sensitivity instance needs an even m >= 2, got {m}"
        )));
    }
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::InvalidArgument(format!("c must be >= 0, got {c}")));
    }
    let l = (c * m as f64).exp().ceil();
    let count = (7.0 / 8.0 * m as f64 * l).ceil();
    if !count.is_finite() || count > max_jobs as f64 {
        return Err(Error::CapExceeded {
            what: "generated jobs",
            limit: max_jobs,
            actual: if count.is_finite() { count as usize } else { usize::MAX },
        });
    }
    let dist = Distribution::bernoulli(1.0, 1.0 / l);
    Instance::from_distributions(m, vec![dist; count as usize])
}

/// Knobs for [`random_bernoulli_instance`].
///
/// Sizes are integers in `1..=max_size` and probabilities multiples of
/// `1 / prob_steps` in `[1/prob_steps, 1]`, so size classes and
/// probability ties occur often on small instances.
#[derive(Clone, Debug)]
pub struct RandomBernoulliParams {
    pub n: usize,
    pub machines: usize,
    pub max_size: u32,
    pub prob_steps: u32,
}

impl Default for RandomBernoulliParams {
    fn default() -> Self {
        RandomBernoulliParams {
            n: 6,
            machines: 2,
            max_size: 4,
            prob_steps: 20,
        }
    }
}

pub fn random_bernoulli_instance(params: &RandomBernoulliParams, rng: &mut StreamRng) -> Result<Instance> {
    if params.max_size == 0 || params.prob_steps == 0 {
        return Err(Error::InvalidArgument("max_size and prob_steps must be positive".into()));
    }
    let dists = (0..params.n)
        .map(|_| {
            let size = rng.gen_range(1..=params.max_size) as f64;
            let prob = rng.gen_range(1..=params.prob_steps) as f64 / params.prob_steps as f64;
            Distribution::bernoulli(size, prob)
        })
        .collect();
    Instance::from_distributions(params.machines, dists)
}

#[derive(Clone, Debug)]
pub struct RandomDeterministicParams {
    pub n: usize,
    pub machines: usize,
    pub min_size: u32,
    pub max_size: u32,
}

impl Default for RandomDeterministicParams {
    fn default() -> Self {
        RandomDeterministicParams {
            n: 8,
            machines: 3,
            min_size: 1,
            max_size: 6,
        }
    }
}

/// Integer sizes drawn uniformly from `min_size..=max_size`.
pub fn random_deterministic_instance(
    params: &RandomDeterministicParams,
    rng: &mut StreamRng,
) -> Result<Instance> {
    if params.min_size > params.max_size {
        return Err(Error::InvalidArgument("min_size > max_size".into()));
    }
    let sizes: Vec<f64> = (0..params.n)
        .map(|_| rng.gen_range(params.min_size..=params.max_size) as f64)
        .collect();
    Instance::deterministic(params.machines, &sizes)
}
