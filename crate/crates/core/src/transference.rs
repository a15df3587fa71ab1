//! Reductions between round-bounded testers for lifted properties and
//! round-bounded decision trees.
//!
//! For a code `C` and `f: F_p^N -> {0, 1}`, the lifted property is
//! `C_f = { C(x) : f(x) = 1 }`. [`pt_to_ldt`] turns a tester for `C_f` into
//! a linear decision tree for `f`; [`dt_to_pt`] turns a decision tree for
//! `f` into a tester for `C_f`. Both keep the number of adaptive rounds.

use std::collections::BTreeMap;

use crate::codes::{blr_triples, decoder_queries, triples_pass, LinearCode, Word};
use crate::error::{Error, Result};
use crate::field::{FieldVector, FunctionTable};
use crate::query::{amplify, Amplified, Combiner, Round, RoundBudget, Strategy, Verdict};
use crate::seed::SimRng;

/// Success probability of one copy of [`DtToPt`] when the decision tree
/// itself errs with probability up to 1/3.
pub const SINGLE_COPY_SUCCESS: f64 = 27.0 / 50.0;

/// Target success probability after majority amplification.
pub const TARGET_SUCCESS: f64 = 2.0 / 3.0;

/// `C_f` for an explicit `f`, with the code it lives in.
#[derive(Clone, Debug)]
pub struct LiftedProperty {
    pub code: LinearCode,
    pub f: FunctionTable,
}

impl LiftedProperty {
    pub fn new(code: LinearCode, f: FunctionTable) -> Result<Self> {
        if f.p != code.p() || f.n != code.message_len() {
            return Err(Error::InvalidParameter(format!(
                "function over F_{}^{} for a code over F_{}^{}",
                f.p,
                f.n,
                code.p(),
                code.message_len()
            )));
        }
        Ok(LiftedProperty { code, f })
    }

    /// Messages `x` with `f(x) = 1`.
    pub fn accepted_messages(&self) -> Result<impl Iterator<Item = FieldVector> + '_> {
        Ok(FieldVector::enumerate(self.f.p, self.f.n)?.filter(|x| self.f.eval(x) == 1))
    }

    pub fn members(&self) -> Result<Vec<Word>> {
        self.accepted_messages()?
            .map(|x| self.code.encode(&x))
            .collect()
    }
}

/// Relative Hamming distance from `y` to `C_f`; infinite when `C_f` is empty.
pub fn lifted_distance(y: &Word, prop: &LiftedProperty) -> Result<f64> {
    let m = prop.code.block_len();
    if y.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: y.len(),
        });
    }
    let mut best = f64::INFINITY;
    for member in prop.members()? {
        best = best.min(member.hamming(y) as f64 / m as f64);
    }
    Ok(best)
}

/// A word tester run against a message through linear queries: word
/// coordinate `i` is answered by the linear query `rows_i`.
#[derive(Clone, Debug)]
pub struct LinearLift<'c, S> {
    tester: S,
    code: &'c LinearCode,
}

/// Builds the tester with proximity `ε = δ(C)` and lifts it to a linear
/// decision tree over messages. Out-of-range word coordinates become empty
/// coefficient vectors, which the linear oracle rejects.
pub fn pt_to_ldt<S, F>(make_tester: F, code: &LinearCode) -> LinearLift<'_, S>
where
    S: Strategy<Query = usize, Answer = u64>,
    F: FnOnce(f64) -> S,
{
    LinearLift {
        tester: make_tester(code.relative_distance()),
        code,
    }
}

impl<S> LinearLift<'_, S> {
    pub fn tester(&self) -> &S {
        &self.tester
    }
}

pub struct LiftState<T> {
    inner: T,
    history: Vec<Round<usize, u64>>,
    pending: Vec<usize>,
}

impl<S> LinearLift<'_, S>
where
    S: Strategy<Query = usize, Answer = u64>,
{
    fn sync(&self, state: &mut LiftState<S::State>, history: &[Round<Vec<u64>, u64>]) {
        if history.len() > state.history.len() {
            let answers = history.last().expect("nonempty").answers.clone();
            let queries = std::mem::take(&mut state.pending);
            state.history.push(Round { queries, answers });
        }
    }
}

impl<S> Strategy for LinearLift<'_, S>
where
    S: Strategy<Query = usize, Answer = u64>,
{
    type Query = Vec<u64>;
    type Answer = u64;
    type State = LiftState<S::State>;

    fn budget(&self) -> RoundBudget {
        self.tester.budget()
    }

    fn start(&self, rng: &mut SimRng) -> Self::State {
        LiftState {
            inner: self.tester.start(rng),
            history: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn next_batch(
        &self,
        state: &mut Self::State,
        history: &[Round<Vec<u64>, u64>],
        rng: &mut SimRng,
    ) -> Option<Vec<Vec<u64>>> {
        self.sync(state, history);
        let batch = self
            .tester
            .next_batch(&mut state.inner, &state.history, rng)?;
        let queries = batch
            .iter()
            .map(|&i| {
                self.code
                    .row_support(i)
                    .map(<[u64]>::to_vec)
                    .unwrap_or_default()
            })
            .collect();
        state.pending = batch;
        Some(queries)
    }

    fn finish(
        &self,
        mut state: Self::State,
        history: &[Round<Vec<u64>, u64>],
        rng: &mut SimRng,
    ) -> Verdict {
        self.sync(&mut state, history);
        self.tester.finish(state.inner, &state.history, rng)
    }
}

/// One copy of the tester built from a decision tree: BLR triples ride along
/// with the first batch, and every decision-tree query is answered by the
/// plurality of `r_dec` two-query decodings.
#[derive(Clone, Debug)]
pub struct DtToPt<'c, S> {
    dt: S,
    code: &'c LinearCode,
    delta_star: f64,
    r_test: usize,
    r_dec: usize,
    dt_queries: usize,
}

impl<'c, S> DtToPt<'c, S>
where
    S: Strategy<Query = usize, Answer = u64>,
{
    pub fn new(dt: S, code: &'c LinearCode, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "proximity {eps} outside (0, 1]"
            )));
        }
        if code.kind() != crate::codes::CodeKind::Hadamard {
            return Err(Error::UnsupportedCode);
        }
        let delta_star = code.decoding_radius().min(eps);
        let dt_queries = dt.budget().max_queries;
        Ok(DtToPt {
            dt,
            code,
            delta_star,
            r_test: (8.0 / delta_star).ceil() as usize,
            r_dec: (12.0 * (10.0 * dt_queries as f64).ln()).ceil() as usize,
            dt_queries,
        })
    }

    pub fn delta_star(&self) -> f64 {
        self.delta_star
    }

    /// BLR triples in the first batch.
    pub fn test_repetitions(&self) -> usize {
        self.r_test
    }

    /// Decoder invocations per decision-tree query.
    pub fn decoder_repetitions(&self) -> usize {
        self.r_dec
    }

    fn decode_batch(&self, answers: &[u64], count: usize) -> Vec<u64> {
        let p = self.code.p();
        answers
            .chunks_exact(2 * self.r_dec)
            .take(count)
            .map(|pairs| {
                let mut votes: BTreeMap<u64, usize> = BTreeMap::new();
                for pair in pairs.chunks_exact(2) {
                    *votes.entry((pair[1] + p - pair[0]) % p).or_default() += 1;
                }
                // max_by_key keeps the last maximum; iterate descending so ties
                // resolve to the smallest value
                votes
                    .into_iter()
                    .rev()
                    .max_by_key(|&(_, n)| n)
                    .map(|(v, _)| v)
                    .expect("r_dec >= 1")
            })
            .collect()
    }
}

pub struct DtToPtState<T> {
    dt: T,
    dt_history: Vec<Round<usize, u64>>,
    pending: Vec<usize>,
    dt_done: bool,
    rejected: bool,
}

impl<S> Strategy for DtToPt<'_, S>
where
    S: Strategy<Query = usize, Answer = u64>,
{
    type Query = usize;
    type Answer = u64;
    type State = DtToPtState<S::State>;

    fn budget(&self) -> RoundBudget {
        RoundBudget::round_adaptive(
            self.dt.budget().rounds,
            3 * self.r_test + 2 * self.r_dec * self.dt_queries.max(1),
        )
        .expect("positive budget")
    }

    fn start(&self, rng: &mut SimRng) -> Self::State {
        DtToPtState {
            dt: self.dt.start(rng),
            dt_history: Vec::new(),
            pending: Vec::new(),
            dt_done: false,
            rejected: false,
        }
    }

    fn next_batch(
        &self,
        state: &mut Self::State,
        history: &[Round<usize, u64>],
        rng: &mut SimRng,
    ) -> Option<Vec<usize>> {
        let round = history.len();
        if let Some(last) = history.last() {
            let mut answers = &last.answers[..];
            if round == 1 {
                let (tests, rest) = answers.split_at(3 * self.r_test);
                if !triples_pass(self.code.p(), tests) {
                    state.rejected = true;
                }
                answers = rest;
            }
            if state.dt_done {
                return None;
            }
            let queries = std::mem::take(&mut state.pending);
            let decoded = self.decode_batch(answers, queries.len());
            state.dt_history.push(Round {
                queries,
                answers: decoded,
            });
        }
        // The simulation keeps running after a failed test so the number of
        // batches matches the decision tree exactly.
        let mut batch = if round == 0 {
            blr_triples(self.code, self.r_test, rng).expect("hadamard checked in new")
        } else {
            Vec::new()
        };
        match self.dt.next_batch(&mut state.dt, &state.dt_history, rng) {
            Some(dt_batch) => {
                for &i in &dt_batch {
                    for _ in 0..self.r_dec {
                        // An out-of-range coordinate turns into row 0, which
                        // the point oracle reports as an error.
                        let pair = decoder_queries(self.code, i, rng).unwrap_or([0, 0]);
                        batch.extend(pair);
                    }
                }
                state.pending = dt_batch;
            }
            None if round == 0 => state.dt_done = true,
            None => return None,
        }
        Some(batch)
    }

    fn finish(&self, state: Self::State, _: &[Round<usize, u64>], rng: &mut SimRng) -> Verdict {
        if state.rejected {
            return Verdict::Reject;
        }
        Verdict::from_acceptance(self.dt.finish(state.dt, &state.dt_history, rng).accepts())
    }
}

/// Probability that a strict majority of `copies` independent trials
/// succeeds, each with probability `p`.
pub fn majority_success(copies: usize, p: f64) -> f64 {
    let need = copies / 2 + 1;
    let mut term = (1.0 - p).powi(copies as i32);
    let mut tail = 0.0;
    for j in 0..=copies {
        if j >= need {
            tail += term;
        }
        // C(m, j+1) p^{j+1} (1-p)^{m-j-1} from C(m, j) p^j (1-p)^{m-j}
        term *= (copies - j) as f64 / (j + 1) as f64 * p / (1.0 - p);
    }
    tail
}

/// Smallest odd number of copies whose majority lifts
/// [`SINGLE_COPY_SUCCESS`] to at least [`TARGET_SUCCESS`].
pub fn lift_copies() -> usize {
    (1..)
        .step_by(2)
        .find(|&m| majority_success(m, SINGLE_COPY_SUCCESS) >= TARGET_SUCCESS)
        .expect("success above 1/2 amplifies")
}

/// Tester for `C_f` from a round-adaptive decision tree for `f`.
///
/// An exact tree needs a single copy, and the tester is then one-sided. A
/// tree that errs with probability up to 1/3 gets [`lift_copies`] parallel
/// copies combined by majority.
pub fn dt_to_pt<S>(
    dt: S,
    code: &LinearCode,
    eps: f64,
    dt_exact: bool,
) -> Result<Amplified<DtToPt<'_, S>>>
where
    S: Strategy<Query = usize, Answer = u64>,
{
    let copies = if dt_exact { 1 } else { lift_copies() };
    amplify(DtToPt::new(dt, code, eps)?, copies, Combiner::Majority)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_tail_values() {
        assert!((majority_success(1, 0.54) - 0.54).abs() < 1e-12);
        assert!((majority_success(5, 0.54) - 0.5747).abs() < 1e-4);
        assert!(majority_success(27, 0.54) < TARGET_SUCCESS);
        assert!(majority_success(29, 0.54) >= TARGET_SUCCESS);
        assert_eq!(lift_copies(), 29);
    }

    #[test]
    fn repetition_constants() {
        let code = LinearCode::hadamard(3, 3).unwrap();
        let t = DtToPt::new(crate::address::dt_tester_fk(1), &code, 1.0).unwrap();
        assert!((t.delta_star() - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(t.test_repetitions(), 48);
        assert_eq!(t.decoder_repetitions(), 36);
        assert_eq!(t.budget().max_queries, 3 * 48 + 2 * 36 * 2);
        assert_eq!(t.budget().rounds, 1);
    }

    #[test]
    fn plurality_prefers_smallest_on_ties() {
        let code = LinearCode::hadamard(3, 2).unwrap();
        let mut t = DtToPt::new(crate::address::dt_tester_fk(0), &code, 1.0).unwrap();
        t.r_dec = 4;
        // differences 2, 1, 1, 2
        let answers = [0, 2, 0, 1, 1, 2, 1, 0];
        assert_eq!(t.decode_batch(&answers, 1), vec![1]);
    }

    #[test]
    fn empty_property_is_infinitely_far() {
        let code = LinearCode::hadamard(3, 3).unwrap();
        let prop = LiftedProperty::new(code.clone(), FunctionTable::from_fn(3, 3, |_| 0).unwrap())
            .unwrap();
        let w = code.encode(&FieldVector::zeros(3, 3).unwrap()).unwrap();
        assert_eq!(lifted_distance(&w, &prop).unwrap(), f64::INFINITY);
    }
}
