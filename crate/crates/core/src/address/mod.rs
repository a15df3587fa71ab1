//! Iterated address functions.
//!
//! For `x` in `F_p^p`, `g(x, a) = x_{a+1}` reads the coordinate that `a`
//! points to. `g_0(x) = x_1` and `g_k(x) = g(x, g_{k-1}(x))`; `f_k` reports
//! whether `g_k(x)` is even (on the canonical residue in `0..p`). `f'_k`
//! follows `k` pointers to coordinate `i = g_{k-1}(x) + 1` and checks
//! `x_i == x_{(i mod p) + 1}`.

mod brute_force;

pub use brute_force::{brute_force_min_queries, WORK_CAP};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldVector, FunctionTable};
use crate::query::{Round, RoundBudget, Strategy, Verdict};
use crate::seed::SimRng;

/// Longest pointer chain [`g_iter`] will materialize.
pub const MAX_CHAIN: usize = 1 << 24;

/// The chain `g_0(x), ..., g_k(x)` and the 1-based coordinates it visited.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddressChain {
    pub values: Vec<u64>,
    pub coordinates: Vec<usize>,
}

impl AddressChain {
    pub fn last(&self) -> u64 {
        *self.values.last().expect("chains are never empty")
    }
}

fn check_square(x: &FieldVector) -> Result<()> {
    if x.len() as u64 != x.p() {
        return Err(Error::DimensionMismatch {
            expected: x.p() as usize,
            got: x.len(),
        });
    }
    Ok(())
}

pub fn g_iter(x: &FieldVector, k: usize) -> Result<AddressChain> {
    check_square(x)?;
    if k >= MAX_CHAIN {
        return Err(Error::CapExceeded {
            what: "k",
            value: k as u128,
            cap: MAX_CHAIN as u128,
        });
    }
    let mut values = Vec::with_capacity(k + 1);
    let mut coordinates = Vec::with_capacity(k + 1);
    let mut coordinate = 1usize;
    for _ in 0..=k {
        let value = x.get(coordinate);
        coordinates.push(coordinate);
        values.push(value);
        coordinate = value as usize + 1;
    }
    Ok(AddressChain {
        values,
        coordinates,
    })
}

pub fn f_k(x: &FieldVector, k: usize) -> Result<u8> {
    Ok((g_iter(x, k)?.last() % 2 == 0) as u8)
}

pub fn f_prime_k(x: &FieldVector, k: usize) -> Result<u8> {
    if k == 0 {
        return Err(Error::InvalidParameter("f'_k needs k >= 1".into()));
    }
    let i = g_iter(x, k - 1)?.last() as usize + 1;
    let successor = i % x.len() + 1;
    Ok((x.get(i) == x.get(successor)) as u8)
}

pub fn f_table(p: u64, k: usize) -> Result<FunctionTable> {
    FunctionTable::from_fn(p, p as usize, |x| f_k(x, k).expect("square input"))
}

pub fn f_prime_table(p: u64, k: usize) -> Result<FunctionTable> {
    if k == 0 {
        return Err(Error::InvalidParameter("f'_k needs k >= 1".into()));
    }
    FunctionTable::from_fn(p, p as usize, |x| f_prime_k(x, k).expect("square input"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Parity,
    /// Compare the final coordinate with its cyclic successor in `1..=n`.
    AdjacentEqual {
        n: usize,
    },
}

/// Deterministic pointer-chasing decision tree: one query per batch, each
/// batch reading the coordinate the previous answer points to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointerChaser {
    k: usize,
    target: Target,
}

/// Computes `f_k` exactly with `k + 1` queries in `k + 1` batches.
pub fn dt_tester_fk(k: usize) -> PointerChaser {
    PointerChaser {
        k,
        target: Target::Parity,
    }
}

/// Computes `f'_k` over `F_n^n` with `k + 2` queries in `k + 1` batches; the
/// last batch reads two adjacent coordinates.
pub fn dt_tester_fprime(k: usize, n: usize) -> Result<PointerChaser> {
    if k == 0 {
        return Err(Error::InvalidParameter("f'_k needs k >= 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty input".into()));
    }
    Ok(PointerChaser {
        k,
        target: Target::AdjacentEqual { n },
    })
}

impl PointerChaser {
    pub fn k(&self) -> usize {
        self.k
    }
}

impl Strategy for PointerChaser {
    type Query = usize;
    type Answer = u64;
    type State = ();

    fn budget(&self) -> RoundBudget {
        let extra = matches!(self.target, Target::AdjacentEqual { .. }) as usize;
        RoundBudget::round_adaptive(self.k, self.k + 1 + extra).expect("positive budget")
    }

    fn start(&self, _rng: &mut SimRng) {}

    fn next_batch(
        &self,
        _: &mut (),
        history: &[Round<usize, u64>],
        _: &mut SimRng,
    ) -> Option<Vec<usize>> {
        let round = history.len();
        if round > self.k {
            return None;
        }
        let Some(last) = history.last() else {
            return Some(vec![1]);
        };
        let next = last.answers[0] as usize + 1;
        match self.target {
            Target::AdjacentEqual { n } if round == self.k => Some(vec![next, next % n + 1]),
            _ => Some(vec![next]),
        }
    }

    fn finish(&self, _: (), history: &[Round<usize, u64>], _: &mut SimRng) -> Verdict {
        let last = &history.last().expect("at least one batch").answers;
        match self.target {
            Target::Parity => Verdict::from_bit(last[0] % 2 == 0),
            Target::AdjacentEqual { .. } => Verdict::from_bit(last[0] == last[1]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::{run, PointOracle};

    fn v(p: u64, e: &[u64]) -> FieldVector {
        FieldVector::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn chain_examples() {
        let x = v(5, &[2, 4, 1, 3, 0]);
        assert_eq!(g_iter(&x, 0).unwrap().last(), 2);
        let chain = g_iter(&x, 2).unwrap();
        assert_eq!(chain.values, vec![2, 1, 4]);
        assert_eq!(chain.coordinates, vec![1, 3, 2]);
        assert_eq!(
            g_iter(&FieldVector::zeros(7, 7).unwrap(), 10)
                .unwrap()
                .last(),
            0
        );
    }

    #[test]
    fn address_function_examples() {
        let x = v(5, &[2, 4, 1, 3, 0]);
        assert_eq!(f_k(&x, 1).unwrap(), 0);
        assert_eq!(f_k(&x, 2).unwrap(), 1);
        assert_eq!(f_k(&FieldVector::zeros(5, 5).unwrap(), 3).unwrap(), 1);
    }

    #[test]
    fn f_prime_examples() {
        assert_eq!(f_prime_k(&v(5, &[2, 4, 1, 3, 0]), 1).unwrap(), 0);
        assert_eq!(f_prime_k(&FieldVector::zeros(5, 5).unwrap(), 2).unwrap(), 1);
        // i = x_1 + 1 = 2; x_2 = 1 differs from x_3 = 0.
        assert_eq!(f_prime_k(&v(5, &[1, 1, 0, 0, 0]), 1).unwrap(), 0);
        // i = 5 wraps around to compare with x_1.
        assert_eq!(f_prime_k(&v(5, &[4, 0, 0, 0, 4]), 1).unwrap(), 1);
        assert!(f_prime_k(&v(5, &[0; 5]), 0).is_err());
    }

    #[test]
    fn non_square_inputs_are_rejected() {
        let x = v(5, &[1, 2, 3]);
        assert!(matches!(
            g_iter(&x, 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fk_tester_transcripts() {
        let x = v(5, &[2, 4, 1, 3, 0]);
        let t0 = dt_tester_fk(0);
        let tr = run(&t0, &mut PointOracle::new(x.entries()), &t0.budget(), 0).unwrap();
        assert_eq!(tr.per_round.len(), 1);
        assert_eq!(tr.per_round[0].queries, vec![1]);
        assert_eq!(tr.verdict, Verdict::Value(1));

        let t1 = dt_tester_fk(1);
        let tr = run(&t1, &mut PointOracle::new(x.entries()), &t1.budget(), 0).unwrap();
        let rounds: Vec<_> = tr
            .per_round
            .iter()
            .map(|r| (r.queries.clone(), r.answers.clone()))
            .collect();
        assert_eq!(rounds, vec![(vec![1], vec![2]), (vec![3], vec![1])]);
        assert_eq!(tr.total_queries, 2);
        assert_eq!(tr.verdict, Verdict::Value(0));
    }

    #[test]
    fn fprime_tester_transcripts() {
        let x = v(5, &[2, 4, 1, 3, 0]);
        let t = dt_tester_fprime(1, 5).unwrap();
        let tr = run(&t, &mut PointOracle::new(x.entries()), &t.budget(), 0).unwrap();
        assert_eq!(tr.per_round[0].queries, vec![1]);
        assert_eq!(tr.per_round[1].queries, vec![3, 4]);
        assert_eq!(tr.per_round[1].answers, vec![1, 3]);
        assert_eq!(tr.verdict, Verdict::Value(0));

        let z = FieldVector::zeros(5, 5).unwrap();
        let tr = run(&t, &mut PointOracle::new(z.entries()), &t.budget(), 0).unwrap();
        assert_eq!(tr.verdict, Verdict::Value(1));
    }

    #[test]
    fn fk_tester_matches_f3_on_all_of_f5() {
        let t = dt_tester_fk(3);
        for x in FieldVector::enumerate(5, 5).unwrap() {
            let tr = run(&t, &mut PointOracle::new(x.entries()), &t.budget(), 0).unwrap();
            assert_eq!(tr.verdict, Verdict::from_bit(f_k(&x, 3).unwrap() == 1));
            assert_eq!(tr.total_queries, 4);
            assert_eq!(tr.rounds_used, 4);
        }
    }

    #[test]
    fn fprime_tester_matches_on_all_of_f3() {
        let t = dt_tester_fprime(2, 3).unwrap();
        for x in FieldVector::enumerate(3, 3).unwrap() {
            let tr = run(&t, &mut PointOracle::new(x.entries()), &t.budget(), 0).unwrap();
            assert_eq!(
                tr.verdict,
                Verdict::from_bit(f_prime_k(&x, 2).unwrap() == 1)
            );
            assert_eq!(tr.total_queries, 4);
        }
    }
}
