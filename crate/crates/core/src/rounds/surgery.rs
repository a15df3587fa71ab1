//! Round reduction on Boolean batch trees.
//!
//! [`expand_nonadaptive`] reads every variable any consistent path could
//! read, in one batch; a tree making at most `q` queries per path needs at
//! most `2^q - 1` of them. [`contract_one_round`] merges, on each path, the
//! first batch among the first `k` whose size is at most `q / k` with
//! every batch that could follow it, costing at most `q 2^{q/k}` extra
//! queries per path.

use super::tree::{index_of, tuple_of, ExplicitDecisionTree, TreeNode};
use crate::error::{Error, Result};

/// Largest worst-case query count, and largest merged batch, the surgery
/// will materialize.
pub const EXPANSION_CAP: usize = 20;

fn require_boolean(tree: &ExplicitDecisionTree) -> Result<()> {
    if tree.alphabet() != 2 {
        return Err(Error::InvalidParameter(format!(
            "round surgery needs a Boolean tree, alphabet is {}",
            tree.alphabet()
        )));
    }
    Ok(())
}

fn check_batch(size: usize) -> Result<()> {
    if size > EXPANSION_CAP {
        return Err(Error::CapExceeded {
            what: "merged batch size",
            value: size as u128,
            cap: EXPANSION_CAP as u128,
        });
    }
    Ok(())
}

/// Collects the variables read at nodes reachable under some input.
fn reachable_union(node: &TreeNode, assignment: &mut [Option<u64>], union: &mut Vec<usize>) {
    let TreeNode::Query { queries, children } = node else {
        return;
    };
    for &q in queries {
        if !union.contains(&q) {
            union.push(q);
        }
    }
    'children: for (j, child) in children.iter().enumerate() {
        let tuple = tuple_of(j, queries.len(), 2);
        let saved: Vec<Option<u64>> = queries.iter().map(|&q| assignment[q - 1]).collect();
        for (&q, &a) in queries.iter().zip(&tuple) {
            match assignment[q - 1] {
                Some(b) if b != a => {
                    for (&q, &s) in queries.iter().zip(&saved) {
                        assignment[q - 1] = s;
                    }
                    continue 'children;
                }
                _ => assignment[q - 1] = Some(a),
            }
        }
        reachable_union(child, assignment, union);
        for (&q, &s) in queries.iter().zip(&saved) {
            assignment[q - 1] = s;
        }
    }
}

pub fn expand_nonadaptive(tree: &ExplicitDecisionTree) -> Result<ExplicitDecisionTree> {
    require_boolean(tree)?;
    let q = tree.worst_case_queries();
    if q > EXPANSION_CAP {
        return Err(Error::CapExceeded {
            what: "worst-case queries",
            value: q as u128,
            cap: EXPANSION_CAP as u128,
        });
    }
    if let TreeNode::Leaf(_) = tree.root() {
        return Ok(tree.clone());
    }
    let mut union = Vec::new();
    reachable_union(tree.root(), &mut vec![None; tree.vars()], &mut union);
    union.sort_unstable();
    check_batch(union.len())?;
    let mut x = vec![0u64; tree.vars()];
    let children = (0..1usize << union.len())
        .map(|j| {
            for (&v, a) in union.iter().zip(tuple_of(j, union.len(), 2)) {
                x[v - 1] = a;
            }
            tree.evaluate(&x).map(TreeNode::Leaf)
        })
        .collect::<Result<_>>()?;
    ExplicitDecisionTree::new(
        2,
        tree.vars(),
        TreeNode::Query {
            queries: union,
            children,
        },
    )
}

fn merge(queries: &[usize], children: &[TreeNode]) -> Result<TreeNode> {
    let mut merged = queries.to_vec();
    let mut extra: Vec<usize> = children
        .iter()
        .filter_map(|c| match c {
            TreeNode::Query { queries, .. } => Some(queries.iter().copied()),
            TreeNode::Leaf(_) => None,
        })
        .flatten()
        .filter(|q| !queries.contains(q))
        .collect();
    extra.sort_unstable();
    extra.dedup();
    merged.extend(extra);
    check_batch(merged.len())?;

    let value =
        |tuple: &[u64], var: usize| tuple[merged.iter().position(|&m| m == var).expect("merged")];
    let new_children = (0..1usize << merged.len())
        .map(|j| {
            let tuple = tuple_of(j, merged.len(), 2);
            let child = &children[index_of(queries.iter().map(|&q| value(&tuple, q)), 2)];
            match child {
                TreeNode::Leaf(_) => child.clone(),
                TreeNode::Query {
                    queries: inner,
                    children: grand,
                } => grand[index_of(inner.iter().map(|&q| value(&tuple, q)), 2)].clone(),
            }
        })
        .collect();
    Ok(TreeNode::Query {
        queries: merged,
        children: new_children,
    })
}

fn contract(node: &TreeNode, index: usize, k: usize, threshold: f64) -> Result<TreeNode> {
    match node {
        TreeNode::Leaf(_) => Ok(node.clone()),
        TreeNode::Query { queries, children } => {
            if index < k && queries.len() as f64 <= threshold {
                return merge(queries, children);
            }
            let children = children
                .iter()
                .map(|c| contract(c, index + 1, k, threshold))
                .collect::<Result<_>>()?;
            Ok(TreeNode::Query {
                queries: queries.clone(),
                children,
            })
        }
    }
}

/// Removes one batch from every path that uses the full `k + 1` batches.
///
/// Shorter paths are treated as padded with empty batches, so they may keep
/// their batch count.
pub fn contract_one_round(tree: &ExplicitDecisionTree) -> Result<ExplicitDecisionTree> {
    require_boolean(tree)?;
    let depth = tree.depth();
    if depth < 2 {
        return Err(Error::InvalidTree(format!(
            "contraction needs at least 2 batches, tree has {depth}"
        )));
    }
    let k = depth - 1;
    let threshold = tree.worst_case_queries() as f64 / k as f64;
    let root = contract(tree.root(), 0, k, threshold)?;
    ExplicitDecisionTree::new(2, tree.vars(), root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::Verdict;

    fn leaf(b: bool) -> TreeNode {
        TreeNode::Leaf(Verdict::from_acceptance(b))
    }

    fn example() -> ExplicitDecisionTree {
        let root = TreeNode::Query {
            queries: vec![1],
            children: vec![
                TreeNode::Query {
                    queries: vec![2],
                    children: vec![leaf(false), leaf(true)],
                },
                TreeNode::Query {
                    queries: vec![3],
                    children: vec![leaf(true), leaf(false)],
                },
            ],
        };
        ExplicitDecisionTree::new(2, 3, root).unwrap()
    }

    fn all_inputs(n: usize) -> impl Iterator<Item = Vec<u64>> {
        (0..1usize << n).map(move |j| tuple_of(j, n, 2))
    }

    #[test]
    fn expansion_of_two_batch_example() {
        let t = example();
        let e = expand_nonadaptive(&t).unwrap();
        let TreeNode::Query { queries, .. } = e.root() else {
            panic!("leaf")
        };
        assert_eq!(queries, &vec![1, 2, 3]);
        assert_eq!(e.depth(), 1);
        assert!(e.worst_case_queries() < (1 << t.worst_case_queries()));
        for x in all_inputs(3) {
            assert_eq!(e.evaluate(&x).unwrap(), t.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn expansion_is_identity_on_nonadaptive_trees() {
        let t = ExplicitDecisionTree::new(
            2,
            2,
            TreeNode::Query {
                queries: vec![1, 2],
                children: vec![leaf(true), leaf(false), leaf(false), leaf(true)],
            },
        )
        .unwrap();
        assert_eq!(expand_nonadaptive(&t).unwrap(), t);
    }

    #[test]
    fn contraction_of_two_batch_example() {
        let t = example();
        let c = contract_one_round(&t).unwrap();
        assert_eq!(c.depth(), 1);
        assert_eq!(c.worst_case_queries(), 3);
        for x in all_inputs(3) {
            assert_eq!(c.evaluate(&x).unwrap(), t.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn contraction_of_one_then_three() {
        let second = |offset: usize| TreeNode::Query {
            queries: vec![2 + offset, 3 + offset, 4 + offset],
            children: (0..8).map(|j| leaf(j % 3 == 0)).collect(),
        };
        let t = ExplicitDecisionTree::new(
            2,
            7,
            TreeNode::Query {
                queries: vec![1],
                children: vec![second(0), second(3)],
            },
        )
        .unwrap();
        let c = contract_one_round(&t).unwrap();
        assert!(c.worst_case_queries() <= 1 + 2 * 3);
        for x in all_inputs(7) {
            assert_eq!(c.evaluate(&x).unwrap(), t.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn surgery_refuses_non_boolean_and_shallow_trees() {
        let t = ExplicitDecisionTree::new(
            3,
            1,
            TreeNode::Query {
                queries: vec![1],
                children: vec![leaf(true); 3],
            },
        )
        .unwrap();
        assert!(expand_nonadaptive(&t).is_err());
        let shallow = ExplicitDecisionTree::new(
            2,
            1,
            TreeNode::Query {
                queries: vec![1],
                children: vec![leaf(true); 2],
            },
        )
        .unwrap();
        assert!(contract_one_round(&shallow).is_err());
    }
}
