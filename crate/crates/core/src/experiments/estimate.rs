//! Monte Carlo and exact expectations of schedule metrics, and the CSV
//! report rows built from them.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::job_model::sampling::sample_with;
use crate::job_model::{enumerate_realizations, Instance, Realization};
use crate::list_engine::{run_list_schedule, LoadVector, Trace};
use crate::oracle::{opt_adaptive_completion, OracleCaps};
use crate::policies::Algorithm;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Free time after every listed job has started.
    FreeTime,
    TotalCompletion,
    WeightedFreeTime,
    Makespan,
}

impl Metric {
    pub const NAMES: [&'static str; 4] = [
        "free_time",
        "total_completion",
        "weighted_free_time",
        "makespan",
    ];

    pub fn of(self, trace: &Trace) -> Result<f64> {
        Ok(match self {
            Metric::FreeTime => *trace.free_times().last().expect("F(0) is always present"),
            Metric::TotalCompletion => trace.total_completion(),
            Metric::WeightedFreeTime => trace.weighted_free_time(trace.scheduled())?,
            Metric::Makespan => trace.makespan(),
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free_time" => Ok(Metric::FreeTime),
            "total_completion" => Ok(Metric::TotalCompletion),
            "weighted_free_time" => Ok(Metric::WeightedFreeTime),
            "makespan" => Ok(Metric::Makespan),
            _ => Err(Error::InvalidArgument(format!(
                "unknown metric {s:?}, expected one of {}",
                Metric::NAMES.join(", ")
            ))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Metric::FreeTime => 0,
            Metric::TotalCompletion => 1,
            Metric::WeightedFreeTime => 2,
            Metric::Makespan => 3,
        };
        f.write_str(Metric::NAMES[i])
    }
}

/// Sample mean with a normal-approximation 95% half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub ci95: f64,
    pub trials: usize,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let ci95 = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            1.96 * (var / n as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            ci95,
            trials: n,
        }
    }
}

/// Runs `algorithm` on one realization, on the machine count it asks for.
pub fn run_algorithm(
    instance: &Instance,
    algorithm: Algorithm,
    realization: &Realization,
    rng: &mut rng::StreamRng,
) -> Result<Trace> {
    let order = algorithm.order(instance, realization, rng)?;
    let machines = algorithm.execution_machines(instance.machines());
    let exec = if machines == instance.machines() {
        instance.clone()
    } else {
        instance.with_machines(machines)?
    };
    run_list_schedule(&exec, realization, &order, &LoadVector::zeros(machines))
}

/// Mean of `metric` over `trials` independent realizations. Trial `t` draws
/// its realization (and any random order) from stream `t` of `seed`, so the
/// result does not depend on the thread count.
pub fn monte_carlo_metric(
    instance: &Instance,
    algorithm: Algorithm,
    metric: Metric,
    trials: usize,
    seed: u64,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(seed, t);
            let realization = sample_with(instance, &mut rng);
            metric.of(&run_algorithm(instance, algorithm, &realization, &mut rng)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Estimate::from_samples(&samples))
}

/// Exact expectation of `metric` over all realizations. Randomized rules
/// are rejected.
pub fn exact_metric(instance: &Instance, algorithm: Algorithm, metric: Metric, cap: usize) -> Result<f64> {
    if algorithm.is_randomized() {
        return Err(Error::InvalidArgument(format!(
            "{algorithm} is randomized; exact expectation needs a fixed rule"
        )));
    }
    let mut unused = rng::stream(0, 0);
    let mut total = 0.0;
    for (realization, prob) in enumerate_realizations(instance, cap)? {
        let trace = run_algorithm(instance, algorithm, &realization, &mut unused)?;
        total += prob * metric.of(&trace)?;
    }
    Ok(total)
}

/// One row of the report CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub instance_id: String,
    pub alg: String,
    pub metric: Metric,
    pub mean: f64,
    pub ci95: f64,
    pub baseline: Option<f64>,
    /// `mean / baseline`, present only for a positive baseline.
    pub ratio: Option<f64>,
    pub trials: usize,
    pub seed: u64,
}

impl RatioReport {
    pub fn new(
        instance_id: &str,
        alg: &str,
        metric: Metric,
        estimate: Estimate,
        baseline: Option<f64>,
        seed: u64,
    ) -> Self {
        RatioReport {
            instance_id: instance_id.to_string(),
            alg: alg.to_string(),
            metric,
            mean: estimate.mean,
            ci95: estimate.ci95,
            baseline,
            ratio: baseline.filter(|&b| b > 0.0).map(|b| estimate.mean / b),
            trials: estimate.trials,
            seed,
        }
    }
}

/// Writes rows with the header `instance_id,alg,metric,mean,ci95,baseline,ratio,trials,seed`.
pub fn write_reports_csv<W: Write>(rows: &[RatioReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "instance_id",
            "alg",
            "metric",
            "mean",
            "ci95",
            "baseline",
            "ratio",
            "trials",
            "seed",
        ])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// `algorithm` against `baseline` on common random numbers: both see the
/// same realizations, and the baseline mean is the ratio denominator.
pub fn compare(
    instance_id: &str,
    instance: &Instance,
    algorithm: Algorithm,
    baseline: Algorithm,
    metric: Metric,
    trials: usize,
    seed: u64,
) -> Result<RatioReport> {
    let alg = monte_carlo_metric(instance, algorithm, metric, trials, seed)?;
    let base = monte_carlo_metric(instance, baseline, metric, trials, seed)?;
    Ok(RatioReport::new(
        instance_id,
        &format!("{algorithm}/{baseline}"),
        metric,
        alg,
        Some(base.mean),
        seed,
    ))
}

/// Expected total completion of StochFree next to its expected weighted free
/// time, both against the adaptive optimum when the instance fits the
/// oracle. Nothing is asserted: the relation between the three numbers only
/// holds up to unspecified constants.
pub fn report_weighted_free_time_proxy(
    instance_id: &str,
    instance: &Instance,
    trials: usize,
    seed: u64,
    caps: &OracleCaps,
) -> Result<Vec<RatioReport>> {
    let opt = match opt_adaptive_completion(instance, caps) {
        Ok(o) => Some(o.value()),
        Err(e) if e.is_cap() => None,
        Err(e) => return Err(e),
    };
    [Metric::TotalCompletion, Metric::WeightedFreeTime]
        .into_iter()
        .map(|metric| {
            let est = monte_carlo_metric(instance, Algorithm::StochFree, metric, trials, seed)?;
            Ok(RatioReport::new(instance_id, "stochfree", metric, est, opt, seed))
        })
        .collect()
}
