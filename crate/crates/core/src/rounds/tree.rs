use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::checked_pow;
use crate::query::{Round, RoundBudget, Strategy, Verdict};
use crate::seed::SimRng;

/// A node of a batch decision tree. An internal node reads the variables
/// in `queries` (1-based) at once and branches on the answer tuple: child
/// `j` corresponds to the tuple whose base-`σ` digits spell `j`, first query
/// most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(Verdict),
    Query {
        queries: Vec<usize>,
        children: Vec<TreeNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitDecisionTree {
    alphabet: u64,
    vars: usize,
    root: TreeNode,
}

/// Answer tuple of child `index` for a batch of `len` queries.
pub(crate) fn tuple_of(index: usize, len: usize, alphabet: u64) -> Vec<u64> {
    let mut digits = vec![0; len];
    let mut rest = index as u64;
    for d in digits.iter_mut().rev() {
        *d = rest % alphabet;
        rest /= alphabet;
    }
    digits
}

pub(crate) fn index_of(tuple: impl IntoIterator<Item = u64>, alphabet: u64) -> usize {
    tuple.into_iter().fold(0u64, |acc, d| acc * alphabet + d) as usize
}

impl TreeNode {
    fn check(&self, alphabet: u64, vars: usize) -> Result<()> {
        let TreeNode::Query { queries, children } = self else {
            return Ok(());
        };
        if let Some(&q) = queries.iter().find(|&&q| q == 0 || q > vars) {
            return Err(Error::InvalidTree(format!(
                "variable {q} outside 1..={vars}"
            )));
        }
        let fan_out = checked_pow(alphabet, queries.len())
            .filter(|&f| f <= 1 << 24)
            .ok_or_else(|| Error::InvalidTree("batch too large".into()))?;
        if children.len() as u64 != fan_out {
            return Err(Error::InvalidTree(format!(
                "batch of {} queries needs {fan_out} children, found {}",
                queries.len(),
                children.len()
            )));
        }
        children.iter().try_for_each(|c| c.check(alphabet, vars))
    }

    /// Largest number of queries along any root-to-leaf path.
    pub fn worst_case_queries(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Query { queries, children } => {
                queries.len()
                    + children
                        .iter()
                        .map(TreeNode::worst_case_queries)
                        .max()
                        .unwrap_or(0)
            }
        }
    }

    /// Largest number of batches along any root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Query { children, .. } => {
                1 + children.iter().map(TreeNode::depth).max().unwrap_or(0)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 1,
            TreeNode::Query { children, .. } => {
                1 + children.iter().map(TreeNode::node_count).sum::<usize>()
            }
        }
    }

    fn to_value(&self, alphabet: u64) -> Value {
        match self {
            TreeNode::Leaf(v) => serde_json::to_value(v).expect("plain enum"),
            TreeNode::Query { queries, children } => {
                let map: Map<String, Value> = children
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let key = tuple_of(j, queries.len(), alphabet)
                            .iter()
                            .map(u64::to_string)
                            .collect::<Vec<_>>()
                            .join(",");
                        (key, c.to_value(alphabet))
                    })
                    .collect();
                json!({ "query_set": queries, "children": map })
            }
        }
    }

    fn from_value(value: &Value, alphabet: u64) -> Result<Self> {
        let Some(obj) = value.as_object().filter(|o| o.contains_key("query_set")) else {
            return Ok(TreeNode::Leaf(serde_json::from_value(value.clone())?));
        };
        let queries: Vec<usize> = serde_json::from_value(obj["query_set"].clone())?;
        let children_obj = obj
            .get("children")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("internal node without children map".into()))?;
        let mut children: BTreeMap<usize, TreeNode> = BTreeMap::new();
        for (key, child) in children_obj {
            let tuple: Vec<u64> = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|t| {
                        t.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad answer tuple {key:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            if tuple.len() != queries.len() || tuple.iter().any(|&d| d >= alphabet) {
                return Err(Error::Parse(format!(
                    "answer tuple {key:?} does not fit the batch"
                )));
            }
            children.insert(
                index_of(tuple, alphabet),
                Self::from_value(child, alphabet)?,
            );
        }
        Ok(TreeNode::Query {
            queries,
            children: children.into_values().collect(),
        })
    }
}

impl ExplicitDecisionTree {
    pub fn new(alphabet: u64, vars: usize, root: TreeNode) -> Result<Self> {
        if alphabet < 2 {
            return Err(Error::InvalidTree(
                "alphabet needs at least two symbols".into(),
            ));
        }
        root.check(alphabet, vars)?;
        Ok(ExplicitDecisionTree {
            alphabet,
            vars,
            root,
        })
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn worst_case_queries(&self) -> usize {
        self.root.worst_case_queries()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn evaluate(&self, x: &[u64]) -> Result<Verdict> {
        if x.len() != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                got: x.len(),
            });
        }
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf(v) => return Ok(*v),
                TreeNode::Query { queries, children } => {
                    node = &children[index_of(queries.iter().map(|&q| x[q - 1]), self.alphabet)];
                }
            }
        }
    }

    /// Number of batches read on input `x`.
    pub fn batches_on(&self, x: &[u64]) -> usize {
        let mut node = &self.root;
        let mut batches = 0;
        while let TreeNode::Query { queries, children } = node {
            batches += 1;
            node = &children[index_of(queries.iter().map(|&q| x[q - 1]), self.alphabet)];
        }
        batches
    }

    /// Nested `{query_set, children: {"a,b": subtree | verdict}}`.
    pub fn to_json(&self) -> String {
        json!({ "alphabet": self.alphabet, "vars": self.vars, "root": self.root.to_value(self.alphabet) }).to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let field = |name: &str| {
            value
                .get(name)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("missing {name}")))
        };
        let alphabet = field("alphabet")?;
        let vars = field("vars")? as usize;
        let root = value
            .get("root")
            .ok_or_else(|| Error::Parse("missing root".into()))?;
        Self::new(alphabet, vars, TreeNode::from_value(root, alphabet)?)
    }

    pub fn strategy(&self) -> TreeStrategy<'_> {
        TreeStrategy { tree: self }
    }
}

/// A random Boolean tree with exactly `depth` batches on every path, each
/// batch holding 1 to `max_batch` distinct variables.
pub fn random_tree(
    vars: usize,
    depth: usize,
    max_batch: usize,
    rng: &mut SimRng,
) -> Result<ExplicitDecisionTree> {
    if max_batch == 0 || max_batch > vars {
        return Err(Error::InvalidParameter(format!(
            "batch size 1..={max_batch} over {vars} variables"
        )));
    }
    fn grow(vars: usize, depth: usize, max_batch: usize, rng: &mut SimRng) -> TreeNode {
        if depth == 0 {
            return TreeNode::Leaf(Verdict::from_acceptance(rng.gen()));
        }
        let size = rng.gen_range(1..=max_batch);
        let queries: Vec<usize> = sample(rng, vars, size).into_iter().map(|q| q + 1).collect();
        let children = (0..1usize << size)
            .map(|_| grow(vars, depth - 1, max_batch, rng))
            .collect();
        TreeNode::Query { queries, children }
    }
    ExplicitDecisionTree::new(2, vars, grow(vars, depth, max_batch, rng))
}

/// Runs an explicit tree as a point-query strategy.
#[derive(Clone, Copy, Debug)]
pub struct TreeStrategy<'t> {
    tree: &'t ExplicitDecisionTree,
}

impl<'t> TreeStrategy<'t> {
    fn node_after(&self, history: &[Round<usize, u64>]) -> &'t TreeNode {
        let mut node = &self.tree.root;
        for round in history {
            let TreeNode::Query { children, .. } = node else {
                unreachable!("history longer than the tree path");
            };
            node = &children[index_of(round.answers.iter().copied(), self.tree.alphabet)];
        }
        node
    }
}

impl Strategy for TreeStrategy<'_> {
    type Query = usize;
    type Answer = u64;
    type State = ();

    fn budget(&self) -> RoundBudget {
        RoundBudget::round_adaptive(
            self.tree.depth().saturating_sub(1),
            self.tree.worst_case_queries().max(1),
        )
        .expect("positive budget")
    }

    fn start(&self, _: &mut SimRng) {}

    fn next_batch(
        &self,
        _: &mut (),
        history: &[Round<usize, u64>],
        _: &mut SimRng,
    ) -> Option<Vec<usize>> {
        match self.node_after(history) {
            TreeNode::Leaf(_) => None,
            TreeNode::Query { queries, .. } => Some(queries.clone()),
        }
    }

    fn finish(&self, _: (), history: &[Round<usize, u64>], _: &mut SimRng) -> Verdict {
        match self.node_after(history) {
            TreeNode::Leaf(v) => *v,
            TreeNode::Query { .. } => unreachable!("finish called at an internal node"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_batch_example() -> ExplicitDecisionTree {
        let leaf = |b| TreeNode::Leaf(Verdict::from_acceptance(b));
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

    #[test]
    fn evaluation_and_measures() {
        let t = two_batch_example();
        assert_eq!(t.worst_case_queries(), 2);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.evaluate(&[0, 1, 0]).unwrap(), Verdict::Accept);
        assert_eq!(t.evaluate(&[1, 1, 1]).unwrap(), Verdict::Reject);
        assert_eq!(t.batches_on(&[1, 0, 0]), 2);
    }

    #[test]
    fn json_round_trip() {
        let t = two_batch_example();
        let text = t.to_json();
        assert!(text.contains("\"query_set\""));
        assert_eq!(ExplicitDecisionTree::from_json(&text).unwrap(), t);
        let leaf = ExplicitDecisionTree::new(2, 2, TreeNode::Leaf(Verdict::Value(1))).unwrap();
        assert_eq!(
            ExplicitDecisionTree::from_json(&leaf.to_json()).unwrap(),
            leaf
        );
    }

    #[test]
    fn malformed_trees_are_rejected() {
        let bad = TreeNode::Query {
            queries: vec![1, 2],
            children: vec![TreeNode::Leaf(Verdict::Accept)],
        };
        assert!(ExplicitDecisionTree::new(2, 2, bad).is_err());
        let out_of_range = TreeNode::Query {
            queries: vec![4],
            children: vec![TreeNode::Leaf(Verdict::Accept); 2],
        };
        assert!(ExplicitDecisionTree::new(2, 3, out_of_range).is_err());
    }

    #[test]
    fn tuple_indexing() {
        assert_eq!(tuple_of(5, 3, 2), vec![1, 0, 1]);
        assert_eq!(index_of([1, 0, 1], 2), 5);
        assert_eq!(tuple_of(0, 0, 2), Vec::<u64>::new());
    }
}
