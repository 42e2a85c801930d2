//! Stochastic scheduling laboratory.
//!
//! List schedules for jobs with Bernoulli processing times on identical
//! machines, evaluated through their free-time sequence, together with exact
//! brute-force oracles for small instances and the Monte Carlo harnesses that
//! check the per-realization guarantees of those schedules.
//!
//! The crate is organised bottom-up:
//!
//! * [`job_model`]: distributions, instances, realizations, generators and
//!   the power-of-two rescaling used before scheduling.
//! * [`list_engine`]: deterministic simulation of a list schedule.
//! * [`policies`]: every ordering rule and the batch construction.
//! * [`oracle`]: exact optima (adaptive completion time, free times).
//! * [`experiments`]: Monte Carlo estimation and verification suites.

pub mod error;
pub mod experiments;
pub mod job_model;
pub mod list_engine;
pub mod oracle;
pub mod policies;
pub mod rng;

pub use error::{Error, Result};
pub use job_model::{
    distinct_size_count, enumerate_realizations, gen_free_time_gap_instance,
    gen_machine_sensitivity_instance, normalize_and_partition, sample_realization, Distribution,
    Instance, JobSpec, PreparedInstance, Realization,
};
pub use list_engine::{run_list_schedule, ListOrder, LoadVector, ScheduledJob, Trace};
pub use policies::{Algorithm, BatchPlan};

/// Slack used by every provable inequality checked in this crate.
pub const EPS: f64 = 1e-9;
