//! Round-adaptive query strategies and the machinery to run them.
//!
//! A [`Strategy`] is driven by [`run`]: the runner asks for a batch, answers
//! it through an [`Oracle`], appends the completed [`Round`] to the history
//! and asks again, until the strategy declines to issue another batch. The
//! strategy only ever sees completed rounds, so batch `l` cannot depend on
//! answers it has not yet received.

mod amplify;
mod estimate;
mod oracle;
mod runner;
mod strategy;
mod transcript;

pub use amplify::{amplify, combine, Amplified, AmplifiedState, Combiner};
pub use estimate::{
    estimate_acceptance, hoeffding_half_width, par_trials, AcceptanceEstimate, CONFIDENCE,
};
pub(crate) use oracle::inner_product;
pub use oracle::{CountingOracle, LinearOracle, Oracle, PointOracle};
pub use runner::run;
pub use strategy::{AdaptivityMode, Round, RoundBudget, Strategy, Verdict};
pub use transcript::Transcript;
