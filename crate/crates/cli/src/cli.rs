use std::path::PathBuf;

use anyhow::{ensure, Result};
use clap::{Args, Parser, Subcommand};
use roundlab_core::graph::DEFAULT_DEGREE;

use crate::experiments::{self, default_sources};
use crate::report::Record;
use crate::suite::{run_suite, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "roundlab",
    version,
    about = "Experiments on round-bounded query algorithms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Master seed; every trial stream is derived from it.
    #[arg(long, global = true, env = "ROUNDLAB_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Write the record stream here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pointer-chasing trees and exact query counts for f_k.
    Address(AddressArgs),
    /// Local testing and decoding of the Hadamard code.
    Codes(CodesArgs),
    /// The code tester built from the f_k tree and its linear lift.
    Transfer(TransferArgs),
    /// Cycle testers on cycle-cover distributions.
    Graphs(GraphsArgs),
    /// Round surgery on random decision trees.
    Rounds(RoundsArgs),
    /// The protocol compiler and the disjointness map.
    Comm(CommArgs),
    /// Every acceptance check.
    Suite,
}

#[derive(Debug, Args)]
pub struct AddressArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Adaptive rounds allowed to the brute-force search.
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    /// Random inputs used when `p^p` is too large to enumerate.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct CodesArgs {
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    /// Message length.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct GraphsArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_DEGREE)]
    pub d: usize,
    /// Proximity of the full tester; defaults to the certified distance.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Rounds of the restricted tester; defaults to k - 1.
    #[arg(long)]
    pub rounds_budget: Option<usize>,
    /// Sources of the restricted tester; defaults to floor(sqrt(n) / 10).
    #[arg(long)]
    pub query_budget: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RoundsArgs {
    /// Largest number of variables.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Largest number of adaptive rounds.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Largest batch size.
    #[arg(long, default_value_t = 3)]
    pub query_budget: usize,
    /// Number of random trees.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct CommArgs {
    /// Prime field size, which is also the input length.
    #[arg(long, default_value_t = 101)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Set size for the disjointness map, over a universe of 4m.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

/// Module operations each subcommand reaches.
pub const DISPATCH: &[(&str, &[&str])] = &[
    (
        "address",
        &[
            "run",
            "g_iter",
            "f_k",
            "f_prime_k",
            "dt_tester_fk",
            "dt_tester_fprime",
            "brute_force_min_queries",
        ],
    ),
    (
        "codes",
        &[
            "hadamard_code",
            "encode",
            "local_test",
            "relaxed_decode",
            "row_support",
            "exact_distance",
        ],
    ),
    (
        "transfer",
        &["pt_to_ldt", "dt_to_pt", "amplify", "lifted_distance"],
    ),
    (
        "graphs",
        &[
            "gen_yes",
            "gen_no",
            "bfs_cycle_tester",
            "has_cycle_leq",
            "simulate_answers",
            "estimate_gap",
            "estimate_acceptance",
        ],
    ),
    (
        "rounds",
        &[
            "expand_nonadaptive",
            "contract_one_round",
            "strategy_to_tree",
        ],
    ),
    (
        "comm",
        &[
            "pi_k",
            "embed_instance",
            "ldt_to_protocol",
            "disj_parity_map",
        ],
    ),
    ("suite", &["main", "report"]),
];

/// What a subcommand produced.
#[derive(Debug)]
pub struct Execution {
    pub records: Vec<Record>,
    /// Present only for the suite.
    pub outcomes: Option<Vec<Outcome>>,
}

impl Execution {
    pub fn passed(&self) -> bool {
        self.outcomes
            .as_ref()
            .is_none_or(|o| o.iter().all(|c| c.passed))
    }
}

fn records(records: Vec<Record>) -> Execution {
    Execution {
        records,
        outcomes: None,
    }
}

pub fn execute(cli: &Cli) -> Result<Execution> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Address(a) => records(vec![
            experiments::address_min_queries(a.p, a.k, a.rounds)?,
            experiments::address_trees(a.p, a.k, a.trials, seed)?,
        ]),
        Command::Codes(a) => records(vec![experiments::codes(a.p, a.n, a.trials, seed)?]),
        Command::Transfer(a) => records(vec![experiments::transfer(
            a.p, a.k, a.trials, a.eps, seed,
        )?]),
        Command::Graphs(a) => {
            let rounds = match a.rounds_budget {
                Some(r) => r,
                None => {
                    ensure!(
                        a.k >= 1,
                        "--k must be at least 1 unless --rounds-budget is given"
                    );
                    a.k - 1
                }
            };
            let sources = a.query_budget.unwrap_or(default_sources(a.n));
            let mut out = vec![experiments::graph_gap(
                a.n, rounds, sources, a.d, a.trials, seed,
            )?];
            if a.k >= 1 {
                out.push(experiments::bfs_detection(
                    a.n, a.k, a.d, a.eps, a.trials, a.trials, seed,
                )?);
            }
            out.push(experiments::graph_instances(a.n, rounds, seed)?);
            records(out)
        }
        Command::Rounds(a) => records(vec![experiments::round_surgery(
            a.n,
            a.k + 1,
            a.query_budget,
            a.trials,
            seed,
        )?]),
        Command::Comm(a) => records(vec![
            experiments::pointer_protocol(a.n, a.k, a.trials, seed)?,
            experiments::disjointness(a.m, a.trials, seed)?,
        ]),
        Command::Suite => {
            let outcomes = run_suite(seed)?;
            let mut out = Vec::new();
            for o in &outcomes {
                out.push(o.record());
                out.extend(o.records.iter().cloned());
            }
            Execution {
                records: out,
                outcomes: Some(outcomes),
            }
        }
    })
}
