use std::collections::HashSet;

use clap::CommandFactory;
use roundlab_cli::{Cli, DISPATCH};

/// Every public module operation, by name.
const OPERATIONS: &[&str] = &[
    "run",
    "amplify",
    "estimate_acceptance",
    "g_iter",
    "f_k",
    "f_prime_k",
    "dt_tester_fk",
    "dt_tester_fprime",
    "brute_force_min_queries",
    "hadamard_code",
    "encode",
    "local_test",
    "relaxed_decode",
    "row_support",
    "exact_distance",
    "pt_to_ldt",
    "dt_to_pt",
    "lifted_distance",
    "gen_yes",
    "gen_no",
    "bfs_cycle_tester",
    "has_cycle_leq",
    "simulate_answers",
    "estimate_gap",
    "expand_nonadaptive",
    "contract_one_round",
    "strategy_to_tree",
    "pi_k",
    "embed_instance",
    "ldt_to_protocol",
    "disj_parity_map",
    "main",
    "report",
];

#[test]
fn every_operation_is_reachable() {
    let reached: HashSet<&str> = DISPATCH
        .iter()
        .flat_map(|(_, ops)| ops.iter().copied())
        .collect();
    let missing: Vec<_> = OPERATIONS
        .iter()
        .filter(|op| !reached.contains(*op))
        .collect();
    assert!(missing.is_empty(), "unreachable: {missing:?}");
}

#[test]
fn dispatch_names_real_subcommands() {
    let cmd = Cli::command();
    let mut subcommands: Vec<&str> = cmd.get_subcommands().map(|s| s.get_name()).collect();
    let mut dispatched: Vec<&str> = DISPATCH.iter().map(|(name, _)| *name).collect();
    subcommands.sort_unstable();
    dispatched.sort_unstable();
    assert_eq!(subcommands, dispatched);
}

#[test]
fn arguments_are_consistent() {
    Cli::command().debug_assert();
}
