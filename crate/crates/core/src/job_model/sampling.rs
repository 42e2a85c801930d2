use rand::distributions::{Distribution as _, WeightedIndex};
use rand::Rng;

use super::{Distribution, Instance, Realization};
use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};

/// Maximum number of random coins [`enumerate_realizations`] accepts by
/// default (2^16 outcomes).
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

/// Draws every job size independently. Fixed `seed` gives a fixed result.
pub fn sample_realization(instance: &Instance, seed: u64) -> Realization {
    sample_with(instance, &mut rng::stream(seed, 0))
}

pub(crate) fn sample_with(instance: &Instance, rng: &mut StreamRng) -> Realization {
    let sizes = instance
        .jobs()
        .iter()
        .map(|job| draw(&job.dist, rng))
        .collect();
    Realization::new(sizes)
}

fn draw(dist: &Distribution, rng: &mut StreamRng) -> f64 {
    match dist {
        Distribution::Bernoulli { size, prob } => {
            // one uniform per job keeps streams aligned across instances
            if rng.gen::<f64>() < *prob {
                *size
            } else {
                0.0
            }
        }
        Distribution::Deterministic { size } => *size,
        Distribution::Discrete { support } => {
            let weights = support.iter().map(|&(_, p)| p);
            let index = WeightedIndex::new(weights).expect("validated discrete support");
            support[index.sample(rng)].0
        }
    }
}

/// Every joint outcome of an instance of Bernoulli and deterministic jobs,
/// with its probability.
///
/// Only random coins branch, so the result has `2^c` entries where `c` is the
/// number of Bernoulli jobs with `0 < p < 1` and positive size. Outcomes are
/// listed in binary counting order over those coins (lowest job id is the
/// least significant bit, tails before heads).
pub fn enumerate_realizations(instance: &Instance, cap: usize) -> Result<Vec<(Realization, f64)>> {
    let coins = instance.coins()?;
    let mut base = Vec::with_capacity(coins.len());
    let mut random = Vec::new();
    for (id, job) in instance.jobs().iter().enumerate() {
        match job.dist.certain_value() {
            Some(v) => base.push(v),
            None => {
                base.push(0.0);
                random.push(id);
            }
        }
    }
    if random.len() > cap {
        return Err(Error::cap("random coins to enumerate", cap, random.len()));
    }
    if random.len() >= usize::BITS as usize {
        return Err(Error::cap("random coins to enumerate", usize::BITS as usize - 1, random.len()));
    }
    let outcomes = 1usize << random.len();
    let mut out = Vec::with_capacity(outcomes);
    for mask in 0..outcomes {
        let mut sizes = base.clone();
        let mut prob = 1.0;
        for (bit, &id) in random.iter().enumerate() {
            let (s, p) = coins[id];
            if mask >> bit & 1 == 1 {
                sizes[id] = s;
                prob *= p;
            } else {
                prob *= 1.0 - p;
            }
        }
        out.push((Realization::new(sizes), prob));
    }
    Ok(out)
}
