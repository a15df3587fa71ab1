use serde::{Deserialize, Serialize};

use super::pointer::{embed_instance, PointerInstance};
use crate::error::{Error, Result};
use crate::query::{inner_product, Round, Strategy, Verdict};
use crate::seed::{self, SimRng};

/// Declared constant `c` in `bits <= c q ceil(log2 n)` for `q >= 1`.
pub const BIT_CONSTANT: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub sender: Party,
    pub bits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolRun {
    pub messages: Vec<Message>,
    pub rounds: usize,
    /// Outputs of Alice and Bob, in that order.
    pub outputs: [Verdict; 2],
    pub total_queries: usize,
}

impl ProtocolRun {
    pub fn total_bits(&self) -> usize {
        self.messages.iter().map(|m| m.bits).sum()
    }

    pub fn to_record_line(&self) -> String {
        serde_json::to_string(self).expect("plain record")
    }
}

/// `ceil(log2 n)`: bits per field element of `F_n`.
pub fn element_bits(n: u64) -> usize {
    (64 - (n.max(2) - 1).leading_zeros()) as usize
}

/// `(2q + 2) ceil(log2 n)`: the cost bound of [`ldt_to_protocol`].
pub fn bit_bound(q: usize, n: u64) -> usize {
    (2 * q + 2) * element_bits(n)
}

/// One party's copy of the decision tree, fed only what that party knows.
struct Player<'s, S: Strategy> {
    strategy: &'s S,
    state: S::State,
    rng: SimRng,
    history: Vec<Round<Vec<u64>, u64>>,
    /// The party's share of `x`: its own coordinates, zero elsewhere.
    share: Vec<u64>,
}

impl<'s, S> Player<'s, S>
where
    S: Strategy<Query = Vec<u64>, Answer = u64>,
{
    fn new(strategy: &'s S, share: Vec<u64>, seed: u64) -> Self {
        let mut rng = seed::strategy_rng(seed);
        let state = strategy.start(&mut rng);
        Player {
            strategy,
            state,
            rng,
            history: Vec::new(),
            share,
        }
    }

    fn advance(&mut self) -> Option<Vec<Vec<u64>>> {
        self.strategy
            .next_batch(&mut self.state, &self.history, &mut self.rng)
    }

    fn partials(&self, p: u64, batch: &[Vec<u64>]) -> Result<Vec<u64>> {
        batch
            .iter()
            .map(|l| {
                if l.len() != self.share.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.share.len(),
                        got: l.len(),
                    });
                }
                Ok(inner_product(p, l, &self.share))
            })
            .collect()
    }

    fn complete(&mut self, p: u64, queries: Vec<Vec<u64>>, received: &[u64]) -> Result<()> {
        let own = self.partials(p, &queries)?;
        let answers = own.iter().zip(received).map(|(a, b)| (a + b) % p).collect();
        self.history.push(Round { queries, answers });
        Ok(())
    }

    fn finish(mut self) -> Verdict {
        self.strategy
            .finish(self.state, &self.history, &mut self.rng)
    }
}

/// Simulates a linear decision tree over the embedding of `instance` in
/// `F_n^n` as a two-party protocol.
///
/// Alice holds coordinates `1..=h`, Bob the rest (padding included). Both
/// run the tree on the stream [`seed::strategy_rng`]`(seed)`. Bob speaks
/// first. The sender of message `m` computes batch `m - 1` and sends its
/// partial sums for it, together with its partial sums for batch `m - 2`,
/// which the receiver still lacks. Whoever first knows every answer
/// broadcasts the output, so `b` batches cost `b + 1` messages.
pub fn ldt_to_protocol<S>(
    ldt: &S,
    instance: &PointerInstance,
    n: u64,
    seed: u64,
) -> Result<ProtocolRun>
where
    S: Strategy<Query = Vec<u64>, Answer = u64>,
{
    let x = embed_instance(instance, n)?;
    let h = instance.h();
    let mut alice_share = vec![0; n as usize];
    alice_share[..h].copy_from_slice(&x.entries()[..h]);
    let mut bob_share = x.entries().to_vec();
    bob_share[..h].fill(0);
    let mut players = [
        Player::new(ldt, alice_share, seed),
        Player::new(ldt, bob_share, seed),
    ];
    let index = |p: Party| match p {
        Party::Alice => 0,
        Party::Bob => 1,
    };

    let bits = element_bits(n);
    let mut messages = Vec::new();
    let mut carry: Option<Vec<Vec<u64>>> = None;
    let mut sender = Party::Bob;
    let mut total_queries = 0;
    loop {
        let (s, r) = (index(sender), index(sender.other()));
        let Some(batch) = players[s].advance() else {
            let [alice, bob] = players;
            let output = if s == 0 { alice.finish() } else { bob.finish() };
            let width = match output {
                Verdict::Value(v) if v > 1 => bits,
                _ => 1,
            };
            messages.push(Message {
                sender,
                bits: width,
            });
            return Ok(ProtocolRun {
                rounds: messages.len(),
                messages,
                outputs: [output; 2],
                total_queries,
            });
        };
        total_queries += batch.len();
        let mut elements = batch.len();
        if let Some(previous) = carry.take() {
            let sent = players[s].partials(n, &previous)?;
            elements += previous.len();
            players[r].complete(n, previous, &sent)?;
        }
        let sent = players[s].partials(n, &batch)?;
        let mirrored = players[r].advance();
        debug_assert_eq!(
            mirrored.as_ref(),
            Some(&batch),
            "players fell out of lockstep"
        );
        players[r].complete(n, batch.clone(), &sent)?;
        carry = Some(batch);
        messages.push(Message {
            sender,
            bits: elements * bits,
        });
        sender = sender.other();
    }
}
