//! Simulation toolkit for round-bounded adaptivity in query algorithms.
//!
//! A query algorithm runs in `k + 1` batches ("rounds"); the queries of batch
//! `l` may depend only on answers to batches `0..l`. The crate provides:
//!
//! * [`query`]: strategies, oracles, the budget-enforcing runner, parallel
//!   amplification and Monte Carlo acceptance estimation.
//! * [`address`]: iterated address functions and their round-optimal
//!   decision trees, plus an exact brute-force round/query oracle.
//! * [`codes`]: linear codes (Hadamard over `F_p`) with a local tester and a
//!   two-query local decoder.
//! * [`transference`]: reductions between round-bounded testers and
//!   round-bounded (linear) decision trees.
//! * [`graph`]: bounded-degree graphs, cycle-cover instance distributions,
//!   the BFS cycle tester and the lazy answer simulator.
//! * [`rounds`]: explicit batch decision trees and round-reduction surgery.
//! * [`comm`]: pointer-following instances, the decision-tree-to-protocol
//!   compiler and the disjointness-to-parity map.

pub mod address;
pub mod codes;
pub mod comm;
mod error;
pub mod field;
pub mod graph;
pub mod query;
pub mod rounds;
pub mod seed;
pub mod transference;

pub use error::{Error, Result};
pub use field::{FieldVector, FunctionTable};
pub use query::{
    amplify, estimate_acceptance, run, AcceptanceEstimate, AdaptivityMode, Combiner, Oracle, Round,
    RoundBudget, Strategy, Transcript, Verdict,
};
pub use seed::SimRng;
