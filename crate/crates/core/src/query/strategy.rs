use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::SimRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdaptivityMode {
    /// Any number of queries per batch.
    RoundAdaptive,
    /// One free first batch, then single queries.
    TailAdaptive,
}

/// `rounds` adaptive rounds, i.e. at most `rounds + 1` batches, and at most
/// `max_queries` queries overall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundBudget {
    pub rounds: usize,
    pub max_queries: usize,
    pub mode: AdaptivityMode,
}

impl RoundBudget {
    pub fn round_adaptive(rounds: usize, max_queries: usize) -> Result<Self> {
        Self::new(rounds, max_queries, AdaptivityMode::RoundAdaptive)
    }

    pub fn tail_adaptive(rounds: usize, max_queries: usize) -> Result<Self> {
        Self::new(rounds, max_queries, AdaptivityMode::TailAdaptive)
    }

    pub fn new(rounds: usize, max_queries: usize, mode: AdaptivityMode) -> Result<Self> {
        if max_queries == 0 {
            return Err(Error::InvalidParameter(
                "max_queries must be positive".into(),
            ));
        }
        if mode == AdaptivityMode::TailAdaptive && rounds > max_queries {
            return Err(Error::InvalidParameter(format!(
                "tail-adaptive budget with {rounds} single-query rounds cannot fit in {max_queries} queries"
            )));
        }
        Ok(RoundBudget {
            rounds,
            max_queries,
            mode,
        })
    }

    pub fn batches(&self) -> usize {
        self.rounds + 1
    }
}

/// Final output of a run. Testers answer accept/reject, decision trees
/// output a field element; a Boolean output of 1 counts as acceptance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
    Value(u64),
}

impl Verdict {
    pub fn accepts(self) -> bool {
        matches!(self, Verdict::Accept | Verdict::Value(1))
    }

    pub fn from_bit(bit: bool) -> Self {
        Verdict::Value(bit as u64)
    }

    pub fn from_acceptance(accept: bool) -> Self {
        if accept {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }
}

/// One completed batch: the queries and their answers, position by position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round<Q, A> {
    pub queries: Vec<Q>,
    pub answers: Vec<A>,
}

/// A (possibly randomized) round-adaptive query algorithm.
///
/// Protocol: `start` once, then `next_batch` once per round with the history
/// of all completed rounds (round index = `history.len()`), until it returns
/// `None`; then `finish` with the complete history. `next_batch` is always
/// called once more after the last completed round, so wrappers may sync
/// their bookkeeping there.
pub trait Strategy {
    type Query: Clone;
    type Answer: Clone;
    type State;

    /// The rounds/queries this strategy promises to stay within.
    fn budget(&self) -> RoundBudget;

    fn start(&self, rng: &mut SimRng) -> Self::State;

    fn next_batch(
        &self,
        state: &mut Self::State,
        history: &[Round<Self::Query, Self::Answer>],
        rng: &mut SimRng,
    ) -> Option<Vec<Self::Query>>;

    fn finish(
        &self,
        state: Self::State,
        history: &[Round<Self::Query, Self::Answer>],
        rng: &mut SimRng,
    ) -> Verdict;
}

impl<S: Strategy + ?Sized> Strategy for &S {
    type Query = S::Query;
    type Answer = S::Answer;
    type State = S::State;

    fn budget(&self) -> RoundBudget {
        (**self).budget()
    }

    fn start(&self, rng: &mut SimRng) -> Self::State {
        (**self).start(rng)
    }

    fn next_batch(
        &self,
        state: &mut Self::State,
        history: &[Round<Self::Query, Self::Answer>],
        rng: &mut SimRng,
    ) -> Option<Vec<Self::Query>> {
        (**self).next_batch(state, history, rng)
    }

    fn finish(
        &self,
        state: Self::State,
        history: &[Round<Self::Query, Self::Answer>],
        rng: &mut SimRng,
    ) -> Verdict {
        (**self).finish(state, history, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_validation() {
        assert!(RoundBudget::round_adaptive(3, 0).is_err());
        assert!(RoundBudget::tail_adaptive(4, 3).is_err());
        let b = RoundBudget::tail_adaptive(3, 10).unwrap();
        assert_eq!(b.batches(), 4);
    }

    #[test]
    fn value_one_counts_as_acceptance() {
        assert!(Verdict::Accept.accepts());
        assert!(Verdict::Value(1).accepts());
        assert!(!Verdict::Value(0).accepts());
        assert!(!Verdict::Value(2).accepts());
        assert!(!Verdict::Reject.accepts());
    }
}
