//! Explicit batch decision trees and round-reduction surgery.

mod from_strategy;
mod surgery;
mod tree;

pub use from_strategy::{strategy_to_tree, NODE_CAP};
pub use surgery::{contract_one_round, expand_nonadaptive, EXPANSION_CAP};
pub use tree::{random_tree, ExplicitDecisionTree, TreeNode, TreeStrategy};
