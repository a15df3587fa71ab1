use std::collections::HashSet;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::generate::{CycleCoverSpec, LazyCycleCover};
use super::simulator::GraphSimulator;
use super::NIL;
use crate::error::Result;
use crate::query::{estimate_acceptance, par_trials, run, AcceptanceEstimate, Strategy};
use crate::seed::{self, tags, SimRng};

/// Acceptance on the yes and no cycle-cover distributions and their gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub acc_yes: AcceptanceEstimate,
    pub acc_no: AcceptanceEstimate,
    pub gap: f64,
    /// Half-width of a 99% interval around `gap` (sum of both half-widths).
    pub ci: f64,
}

/// Lazily relabeled covers; `d` only has to admit the 2-regular part.
fn cover_sampler(
    spec: CycleCoverSpec,
    d: usize,
) -> Result<impl Fn(&mut SimRng) -> LazyCycleCover + Sync> {
    if d < 2 {
        return Err(crate::error::Error::InvalidParameter(
            "cycle covers need degree bound at least 2".into(),
        ));
    }
    Ok(move |rng: &mut SimRng| {
        LazyCycleCover::new(spec, SimRng::from_rng(rng).expect("infallible source"))
    })
}

/// `|acc_Y - acc_N|` for `tester` over uniformly relabeled `(2k+4)`- and
/// `(2k+3)`-cycle covers of `n` vertices with degree bound `d`.
pub fn estimate_gap<S>(
    tester: &S,
    n: usize,
    k: usize,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<GapEstimate>
where
    S: Strategy<Query = usize, Answer = Vec<usize>> + Sync,
{
    let yes = cover_sampler(CycleCoverSpec::yes(n, k)?, d)?;
    let no = cover_sampler(CycleCoverSpec::no(n, k)?, d)?;
    let acc_yes = estimate_acceptance(tester, yes, trials, seed::derive(seed, tags::YES, 0))?;
    let acc_no = estimate_acceptance(tester, no, trials, seed::derive(seed, tags::NO, 0))?;
    Ok(GapEstimate {
        acc_yes,
        acc_no,
        gap: (acc_yes.probability - acc_no.probability).abs(),
        ci: acc_yes.half_width + acc_no.half_width,
    })
}

/// Acceptance of `tester` when every answer comes from a fresh
/// [`GraphSimulator`] on `n` labels.
pub fn simulated_acceptance<S>(
    tester: &S,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<AcceptanceEstimate>
where
    S: Strategy<Query = usize, Answer = Vec<usize>> + Sync,
{
    let sampler = move |rng: &mut SimRng| {
        GraphSimulator::new(n, SimRng::from_rng(rng).expect("infallible source"))
    };
    estimate_acceptance(
        tester,
        sampler,
        trials,
        seed::derive(seed, tags::SIMULATOR, 0),
    )
}

/// Frequencies of the two bad events on yes-instances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRates {
    /// Some query hit an isolated vertex.
    pub isolated: f64,
    /// Some fresh query landed on a cycle already touched by the run.
    pub collision: f64,
    pub mean_queries: f64,
    /// `2 (2k+4) q / n`.
    pub isolated_bound: f64,
    /// `2 k^3 q^2 / n` with `k >= 1`.
    pub collision_bound: f64,
    pub trials: usize,
}

pub fn event_rates<S>(
    tester: &S,
    n: usize,
    k: usize,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<EventRates>
where
    S: Strategy<Query = usize, Answer = Vec<usize>> + Sync,
{
    let spec = CycleCoverSpec::yes(n, k)?;
    let sample = cover_sampler(spec, d)?;
    let budget = tester.budget();
    let outcomes = par_trials(
        trials,
        seed::derive(seed, tags::GRAPHS, 0),
        |_, rng, run_seed| {
            let mut oracle = sample(rng);
            let transcript = run(tester, &mut oracle, &budget, run_seed)?;
            let mut seen = HashSet::new();
            let mut touched = HashSet::new();
            let (mut isolated, mut collision) = (false, false);
            for round in &transcript.per_round {
                for (&v, answer) in round.queries.iter().zip(&round.answers) {
                    let c = oracle.cycle_of(v);
                    isolated |= c == NIL;
                    if seen.insert(v) && c != NIL && touched.contains(&c) {
                        collision = true;
                    }
                    if c != NIL {
                        touched.insert(c);
                    }
                    seen.extend(answer.iter().copied());
                }
            }
            Ok((isolated, collision, transcript.total_queries))
        },
    )?;
    let count = |f: fn(&(bool, bool, usize)) -> bool| {
        outcomes.iter().filter(|o| f(o)).count() as f64 / trials as f64
    };
    let mean_queries = outcomes.iter().map(|o| o.2 as f64).sum::<f64>() / trials as f64;
    let kk = k.max(1) as f64;
    Ok(EventRates {
        isolated: count(|o| o.0),
        collision: count(|o| o.1),
        mean_queries,
        isolated_bound: 2.0 * (2 * k + 4) as f64 * mean_queries / n as f64,
        collision_bound: 2.0 * kk.powi(3) * mean_queries.powi(2) / n as f64,
        trials,
    })
}
