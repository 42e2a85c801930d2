//! Power-of-two rounding, rescaling and the small/medium/large split.

use super::Instance;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

/// Result of [`normalize_and_partition`].
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedInstance {
    /// Multiplier applied to the rounded sizes.
    pub scale: f64,
    /// Jobs with `s_j < 1/n²` after rescaling.
    pub small: Vec<usize>,
    /// Jobs with `1/n² <= s_j < n⁸`.
    pub medium: Vec<usize>,
    /// Jobs with `s_j >= n⁸`.
    pub large: Vec<usize>,
    /// Rounded and rescaled copy of the input.
    pub instance: Instance,
}

impl PreparedInstance {
    pub fn class_of(&self, id: usize) -> Option<SizeClass> {
        if self.small.binary_search(&id).is_ok() {
            Some(SizeClass::Small)
        } else if self.medium.binary_search(&id).is_ok() {
            Some(SizeClass::Medium)
        } else if self.large.binary_search(&id).is_ok() {
            Some(SizeClass::Large)
        } else {
            None
        }
    }
}

/// Smallest power of two that is `>= x`, for `x > 0`.
pub(crate) fn round_up_pow2(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut p = 2f64.powi(x.log2().ceil() as i32);
    // log2 can be off by one ulp around exact powers
    if p < x {
        p *= 2.0;
    }
    if p / 2.0 >= x {
        p /= 2.0;
    }
    p
}

/// Rounds every size parameter up to a power of two, then rescales all sizes
/// uniformly so the expected sizes sum to 1, then classifies each job against
/// the thresholds `1/n²` and `n⁸`. The input is left untouched.
pub fn normalize_and_partition(instance: &Instance) -> Result<PreparedInstance> {
    instance.coins()?;
    let n = instance.n() as f64;
    let rounded: Vec<_> = instance
        .jobs()
        .iter()
        .map(|job| {
            let s = job.dist.size_param().unwrap_or(0.0);
            let factor = if s > 0.0 { round_up_pow2(s) / s } else { 1.0 };
            job.dist.scaled(factor)
        })
        .collect();
    let total: f64 = rounded.iter().map(|d| d.expectation()).sum();
    let positive = total > 0.0;
    if !positive {
        return Err(Error::Normalization);
    }
    let scale = 1.0 / total;
    let dists: Vec<_> = rounded.iter().map(|d| d.scaled(scale)).collect();

    let small_below = 1.0 / (n * n);
    let large_from = n.powi(8);
    let (mut small, mut medium, mut large) = (Vec::new(), Vec::new(), Vec::new());
    for (id, dist) in dists.iter().enumerate() {
        let s = dist.size_param().unwrap_or(0.0);
        if s < small_below {
            small.push(id);
        } else if s < large_from {
            medium.push(id);
        } else {
            large.push(id);
        }
    }
    Ok(PreparedInstance {
        scale,
        small,
        medium,
        large,
        instance: Instance::from_distributions(instance.machines(), dists)?,
    })
}
