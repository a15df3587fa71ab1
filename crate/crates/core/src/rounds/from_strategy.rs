use super::tree::{tuple_of, ExplicitDecisionTree, TreeNode};
use crate::error::{Error, Result};
use crate::field::checked_pow;
use crate::query::{Round, Strategy};
use crate::seed::{self, SimRng};

/// Largest tree [`strategy_to_tree`] will build.
pub const NODE_CAP: usize = 1 << 20;

/// Materializes a deterministic point-query strategy over `[σ]^vars` as an
/// explicit tree by branching on every answer tuple of every batch.
///
/// The strategy sees the stream [`seed::strategy_rng`]`(seed)`, exactly as
/// under the runner; branches clone both its state and the stream.
pub fn strategy_to_tree<S>(
    strategy: &S,
    vars: usize,
    alphabet: u64,
    seed: u64,
) -> Result<ExplicitDecisionTree>
where
    S: Strategy<Query = usize, Answer = u64> + ?Sized,
    S::State: Clone,
{
    let mut rng = seed::strategy_rng(seed);
    let state = strategy.start(&mut rng);
    let mut nodes = 0usize;
    let mut history = Vec::new();
    let root = build(strategy, alphabet, state, rng, &mut history, &mut nodes)?;
    ExplicitDecisionTree::new(alphabet, vars, root)
}

fn build<S>(
    strategy: &S,
    alphabet: u64,
    mut state: S::State,
    mut rng: SimRng,
    history: &mut Vec<Round<usize, u64>>,
    nodes: &mut usize,
) -> Result<TreeNode>
where
    S: Strategy<Query = usize, Answer = u64> + ?Sized,
    S::State: Clone,
{
    *nodes += 1;
    if *nodes > NODE_CAP {
        return Err(Error::CapExceeded {
            what: "tree nodes",
            value: *nodes as u128,
            cap: NODE_CAP as u128,
        });
    }
    let Some(queries) = strategy.next_batch(&mut state, history, &mut rng) else {
        return Ok(TreeNode::Leaf(strategy.finish(state, history, &mut rng)));
    };
    let fan_out = checked_pow(alphabet, queries.len())
        .filter(|&f| f as usize <= NODE_CAP)
        .ok_or(Error::CapExceeded {
            what: "batch fan-out",
            value: u128::MAX,
            cap: NODE_CAP as u128,
        })? as usize;
    let mut children = Vec::with_capacity(fan_out);
    for j in 0..fan_out {
        history.push(Round {
            queries: queries.clone(),
            answers: tuple_of(j, queries.len(), alphabet),
        });
        let child = build(
            strategy,
            alphabet,
            state.clone(),
            rng.clone(),
            history,
            nodes,
        );
        history.pop();
        children.push(child?);
    }
    Ok(TreeNode::Query { queries, children })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::dt_tester_fk;
    use crate::query::{RoundBudget, Verdict};

    #[test]
    fn pointer_chase_over_bits() {
        let tree = strategy_to_tree(&dt_tester_fk(2), 3, 2, 0).unwrap();
        assert_eq!(tree.depth(), 3);
        assert_eq!(tree.worst_case_queries(), 3);
    }

    struct Constant;

    impl Strategy for Constant {
        type Query = usize;
        type Answer = u64;
        type State = ();
        fn budget(&self) -> RoundBudget {
            RoundBudget::round_adaptive(0, 1).unwrap()
        }
        fn start(&self, _: &mut SimRng) {}
        fn next_batch(
            &self,
            _: &mut (),
            _: &[Round<usize, u64>],
            _: &mut SimRng,
        ) -> Option<Vec<usize>> {
            None
        }
        fn finish(&self, _: (), _: &[Round<usize, u64>], _: &mut SimRng) -> Verdict {
            Verdict::Accept
        }
    }

    #[test]
    fn constant_strategy_is_a_leaf() {
        let tree = strategy_to_tree(&Constant, 4, 2, 0).unwrap();
        assert_eq!(tree.root(), &TreeNode::Leaf(Verdict::Accept));
    }
}
