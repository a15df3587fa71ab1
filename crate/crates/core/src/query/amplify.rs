use std::collections::BTreeMap;

use rand::SeedableRng;

use super::strategy::{AdaptivityMode, Round, RoundBudget, Strategy, Verdict};
use crate::error::{Error, Result};
use crate::seed::SimRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combiner {
    /// Strict majority of accepting copies; plurality for value outputs.
    Majority,
    /// Reject as soon as one copy rejects.
    AnyReject,
}

/// Independent copies of a strategy run side by side: batch `l` of the
/// amplified strategy is the concatenation of every copy's batch `l`.
#[derive(Clone, Debug)]
pub struct Amplified<S> {
    inner: S,
    repetitions: usize,
    combiner: Combiner,
}

/// Runs `repetitions` copies of `strategy` in parallel.
///
/// The number of adaptive rounds is unchanged; the query budget scales by
/// `repetitions`. Tail-adaptive strategies are refused, since merging their
/// single-query tails would break the tail shape.
pub fn amplify<S: Strategy>(
    strategy: S,
    repetitions: usize,
    combiner: Combiner,
) -> Result<Amplified<S>> {
    if repetitions == 0 {
        return Err(Error::InvalidParameter(
            "repetitions must be at least 1".into(),
        ));
    }
    if strategy.budget().mode == AdaptivityMode::TailAdaptive {
        return Err(Error::TailAmplification);
    }
    Ok(Amplified {
        inner: strategy,
        repetitions,
        combiner,
    })
}

impl<S> Amplified<S> {
    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }
}

pub struct AmplifiedState<S: Strategy> {
    copies: Vec<Copy<S>>,
}

struct Copy<S: Strategy> {
    state: Option<S::State>,
    rng: SimRng,
    history: Vec<Round<S::Query, S::Answer>>,
    /// Size of this copy's slice of the batch in flight, if it issued one.
    in_flight: Option<usize>,
    done: bool,
}

impl<S: Strategy> Strategy for Amplified<S> {
    type Query = S::Query;
    type Answer = S::Answer;
    type State = AmplifiedState<S>;

    fn budget(&self) -> RoundBudget {
        let inner = self.inner.budget();
        RoundBudget {
            rounds: inner.rounds,
            max_queries: inner.max_queries * self.repetitions,
            mode: inner.mode,
        }
    }

    fn start(&self, rng: &mut SimRng) -> Self::State {
        let copies = (0..self.repetitions)
            .map(|_| {
                let mut copy_rng =
                    SimRng::from_rng(&mut *rng).expect("ChaCha seeding is infallible");
                let state = self.inner.start(&mut copy_rng);
                Copy {
                    state: Some(state),
                    rng: copy_rng,
                    history: Vec::new(),
                    in_flight: None,
                    done: false,
                }
            })
            .collect();
        AmplifiedState { copies }
    }

    fn next_batch(
        &self,
        state: &mut Self::State,
        history: &[Round<S::Query, S::Answer>],
        _rng: &mut SimRng,
    ) -> Option<Vec<S::Query>> {
        if let Some(last) = history.last() {
            let mut offset = 0;
            for copy in state.copies.iter_mut() {
                if let Some(len) = copy.in_flight.take() {
                    copy.history.push(Round {
                        queries: last.queries[offset..offset + len].to_vec(),
                        answers: last.answers[offset..offset + len].to_vec(),
                    });
                    offset += len;
                }
            }
        }

        let mut merged = Vec::new();
        let mut any = false;
        for copy in state.copies.iter_mut().filter(|c| !c.done) {
            let inner_state = copy.state.as_mut().expect("live copy has state");
            match self
                .inner
                .next_batch(inner_state, &copy.history, &mut copy.rng)
            {
                Some(batch) => {
                    copy.in_flight = Some(batch.len());
                    merged.extend(batch);
                    any = true;
                }
                None => copy.done = true,
            }
        }
        any.then_some(merged)
    }

    fn finish(
        &self,
        state: Self::State,
        _history: &[Round<S::Query, S::Answer>],
        _rng: &mut SimRng,
    ) -> Verdict {
        let verdicts: Vec<Verdict> = state
            .copies
            .into_iter()
            .map(|mut c| {
                let s = c.state.take().expect("copy finished once");
                self.inner.finish(s, &c.history, &mut c.rng)
            })
            .collect();
        combine(&verdicts, self.combiner)
    }
}

/// Combines the verdicts of independent copies.
///
/// Accept/reject verdicts are combined by acceptance count; if any copy
/// produced a field value, `Majority` takes the plurality value with ties
/// going to the smallest value.
pub fn combine(verdicts: &[Verdict], combiner: Combiner) -> Verdict {
    let values = verdicts.iter().any(|v| matches!(v, Verdict::Value(_)));
    match combiner {
        Combiner::AnyReject => {
            let ok = verdicts.iter().all(|v| v.accepts());
            if values {
                Verdict::from_bit(ok)
            } else {
                Verdict::from_acceptance(ok)
            }
        }
        Combiner::Majority if values => {
            let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
            for v in verdicts {
                let key = match v {
                    Verdict::Value(x) => *x,
                    Verdict::Accept => 1,
                    Verdict::Reject => 0,
                };
                *counts.entry(key).or_default() += 1;
            }
            let best = counts.values().copied().max().unwrap_or(0);
            let value = counts
                .iter()
                .find(|(_, &c)| c == best)
                .map(|(&v, _)| v)
                .unwrap_or(0);
            Verdict::Value(value)
        }
        Combiner::Majority => {
            let accepts = verdicts.iter().filter(|v| v.accepts()).count();
            Verdict::from_acceptance(2 * accepts > verdicts.len())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combiners() {
        use Verdict::*;
        assert_eq!(
            combine(&[Accept, Reject, Accept], Combiner::Majority),
            Accept
        );
        assert_eq!(combine(&[Accept, Reject], Combiner::Majority), Reject);
        assert_eq!(
            combine(&[Accept, Reject, Accept], Combiner::AnyReject),
            Reject
        );
        assert_eq!(combine(&[Accept, Accept], Combiner::AnyReject), Accept);
        assert_eq!(
            combine(&[Value(3), Value(2), Value(3)], Combiner::Majority),
            Value(3)
        );
        assert_eq!(combine(&[Value(3), Value(2)], Combiner::Majority), Value(2));
    }
}
