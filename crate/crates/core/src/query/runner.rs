use super::oracle::Oracle;
use super::strategy::{AdaptivityMode, Round, RoundBudget, Strategy};
use super::transcript::Transcript;
use crate::error::{Error, Result};
use crate::seed;

/// Runs `strategy` against `oracle` under `budget`.
///
/// The strategy's randomness is the stream [`seed::strategy_rng`]`(seed)`, so
/// the transcript is a function of (strategy, oracle answers, seed). Batches
/// are checked against the budget before they reach the oracle.
pub fn run<S, O>(
    strategy: &S,
    oracle: &mut O,
    budget: &RoundBudget,
    seed: u64,
) -> Result<Transcript<S::Query, S::Answer>>
where
    S: Strategy + ?Sized,
    O: Oracle<Query = S::Query, Answer = S::Answer> + ?Sized,
{
    let mut rng = seed::strategy_rng(seed);
    let mut state = strategy.start(&mut rng);
    let mut history: Vec<Round<S::Query, S::Answer>> = Vec::new();
    let mut total = 0usize;

    while let Some(queries) = strategy.next_batch(&mut state, &history, &mut rng) {
        let round = history.len();
        if round > budget.rounds {
            return Err(Error::BudgetExceeded(format!(
                "batch {} requested but only {} adaptive rounds allowed",
                round + 1,
                budget.rounds
            )));
        }
        if budget.mode == AdaptivityMode::TailAdaptive && round >= 1 && queries.len() > 1 {
            return Err(Error::QueryShapeViolation {
                round,
                size: queries.len(),
            });
        }
        total += queries.len();
        if total > budget.max_queries {
            return Err(Error::BudgetExceeded(format!(
                "{total} queries issued, budget is {}",
                budget.max_queries
            )));
        }
        let answers = oracle.answer_batch(&queries)?;
        debug_assert_eq!(answers.len(), queries.len());
        history.push(Round { queries, answers });
    }

    let verdict = strategy.finish(state, &history, &mut rng);
    Ok(Transcript {
        seed,
        rounds_used: history.len(),
        total_queries: total,
        per_round: history,
        verdict,
    })
}
