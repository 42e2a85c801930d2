//! Fixed inputs shared by the benchmarks.

use stochsched_core::job_model::{random_bernoulli_instance, RandomBernoulliParams};
use stochsched_core::{rng, Instance};

/// Reproducible Bernoulli instance with `n` jobs on `machines` machines.
pub fn bernoulli_fixture(n: usize, machines: usize, seed: u64) -> Instance {
    let params = RandomBernoulliParams {
        n,
        machines,
        max_size: 8,
        prob_steps: 20,
    };
    random_bernoulli_instance(&params, &mut rng::stream(seed, 0)).expect("valid parameters")
}
