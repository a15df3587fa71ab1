use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::Oracle;
use super::runner::run;
use super::strategy::Strategy;
use crate::error::{Error, Result};
use crate::seed::{self, tags, SimRng};

/// Two-sided confidence level of every reported interval.
pub const CONFIDENCE: f64 = 0.99;

/// Hoeffding half-width `sqrt(ln(2/(1-c)) / (2 trials))` at confidence `c`.
pub fn hoeffding_half_width(trials: usize) -> f64 {
    ((2.0 / (1.0 - CONFIDENCE)).ln() / (2.0 * trials as f64)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceEstimate {
    pub probability: f64,
    pub half_width: f64,
    pub accepts: usize,
    pub trials: usize,
}

impl AcceptanceEstimate {
    pub fn from_counts(accepts: usize, trials: usize) -> Self {
        AcceptanceEstimate {
            probability: accepts as f64 / trials as f64,
            half_width: hoeffding_half_width(trials),
            accepts,
            trials,
        }
    }

    /// Whether `p` lies inside the confidence interval.
    pub fn covers(&self, p: f64) -> bool {
        (self.probability - p).abs() <= self.half_width
    }
}

/// Runs `trials` independent trials, possibly concurrently.
///
/// Trial `t` receives the instance stream `(seed, INSTANCE, t)` and the run
/// seed derived from `(seed, RUN_SEED, t)`; results come back in trial order.
pub fn par_trials<T, F>(trials: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut SimRng, u64) -> Result<T> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut instance_rng = seed::stream(seed, tags::INSTANCE, t);
            let run_seed = seed::derive(seed, tags::RUN_SEED, t);
            f(t, &mut instance_rng, run_seed)
        })
        .collect()
}

/// Fraction of accepting runs of `strategy` over instances drawn from
/// `sampler`, with a 99% Hoeffding interval.
pub fn estimate_acceptance<S, O, F>(
    strategy: &S,
    sampler: F,
    trials: usize,
    seed: u64,
) -> Result<AcceptanceEstimate>
where
    S: Strategy + Sync + ?Sized,
    O: Oracle<Query = S::Query, Answer = S::Answer>,
    F: Fn(&mut SimRng) -> O + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let budget = strategy.budget();
    let outcomes = par_trials(trials, seed, |_, instance_rng, run_seed| {
        let mut oracle = sampler(instance_rng);
        Ok(run(strategy, &mut oracle, &budget, run_seed)?
            .verdict
            .accepts())
    })?;
    let accepts = outcomes.into_iter().filter(|&a| a).count();
    Ok(AcceptanceEstimate::from_counts(accepts, trials))
}
