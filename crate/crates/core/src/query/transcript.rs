use serde::{Deserialize, Serialize};

use super::strategy::{Round, Verdict};

/// Record of one run: what was asked in each batch, what came back, and the
/// final verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript<Q, A> {
    pub seed: u64,
    pub rounds_used: usize,
    pub total_queries: usize,
    pub per_round: Vec<Round<Q, A>>,
    pub verdict: Verdict,
}

impl<Q, A> Transcript<Q, A> {
    pub fn query_sets(&self) -> impl Iterator<Item = &[Q]> {
        self.per_round.iter().map(|r| r.queries.as_slice())
    }

    pub fn max_batch(&self) -> usize {
        self.per_round
            .iter()
            .map(|r| r.queries.len())
            .max()
            .unwrap_or(0)
    }
}

impl<Q: Serialize, A: Serialize> Transcript<Q, A> {
    /// One line of the record stream.
    pub fn to_record_line(&self) -> String {
        serde_json::to_string(self).expect("transcripts always serialize")
    }
}

impl<Q: for<'de> Deserialize<'de>, A: for<'de> Deserialize<'de>> Transcript<Q, A> {
    pub fn from_record_line(line: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(line)?)
    }
}
