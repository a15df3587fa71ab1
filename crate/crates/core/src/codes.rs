//! Linear codes over `F_p` with a local tester and a two-query local decoder.
//!
//! The Hadamard code maps `x in F_p^N` to `(<a, x>)_a` over all `a in F_p^N`
//! (lexicographic order, 1-based row indices). Any two distinct codewords
//! differ on a `1 - 1/p` fraction of rows.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ensure_enumerable, is_prime, FieldVector};
use crate::query::inner_product;
use crate::query::{run, Oracle, PointOracle, Round, RoundBudget, Strategy, Verdict};
use crate::seed::{self, SimRng};

/// Upper limit on `p^N * M * N` for [`exact_distance`].
pub const DISTANCE_WORK_CAP: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeKind {
    Hadamard,
    Identity,
    Explicit,
}

/// A linear map `F_p^N -> F_p^M` given by its rows: `C(x)_i = <rows_i, x>`.
#[derive(Clone, PartialEq)]
pub struct LinearCode {
    p: u64,
    n: usize,
    rows: Vec<Vec<u64>>,
    relative_distance: f64,
    decoding_radius: f64,
    kind: CodeKind,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("kind", &self.kind)
            .field("p", &self.p)
            .field("n", &self.n)
            .field("m", &self.rows.len())
            .field("relative_distance", &self.relative_distance)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct CodeRecord {
    p: u64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    rows: Vec<Vec<u64>>,
}

impl LinearCode {
    pub fn hadamard(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidParameter(
                "message length must be positive".into(),
            ));
        }
        let m = ensure_enumerable(p, n)?;
        let rows = (0..m)
            .map(|i| FieldVector::from_index(p, n, i).map(|v| v.entries().to_vec()))
            .collect::<Result<_>>()?;
        let delta = 1.0 - 1.0 / p as f64;
        Ok(LinearCode {
            p,
            n,
            rows,
            relative_distance: delta,
            decoding_radius: delta / 4.0,
            kind: CodeKind::Hadamard,
        })
    }

    /// The trivial code `C(x) = x`; its words are the messages themselves.
    pub fn identity(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidParameter(
                "message length must be positive".into(),
            ));
        }
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as u64).collect())
            .collect();
        let delta = 1.0 / n as f64;
        Ok(LinearCode {
            p,
            n,
            rows,
            relative_distance: delta,
            decoding_radius: delta / 4.0,
            kind: CodeKind::Identity,
        })
    }

    /// A code from explicit rows. The distance is computed by enumerating
    /// all messages, so `p^N` must be within the enumeration cap.
    pub fn from_rows(p: u64, n: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if rows.is_empty() {
            return Err(Error::InvalidParameter(
                "a code needs at least one row".into(),
            ));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(&value) = row.iter().find(|&&v| v >= p) {
                return Err(Error::InvalidResidue { value, p });
            }
        }
        let mut min_weight = usize::MAX;
        for x in FieldVector::enumerate(p, n)?.skip(1) {
            let weight = rows
                .iter()
                .filter(|row| inner_product(p, row, x.entries()) != 0)
                .count();
            min_weight = min_weight.min(weight);
        }
        if min_weight == 0 {
            return Err(Error::InvalidParameter(
                "rows do not define an injective map".into(),
            ));
        }
        let delta = if min_weight == usize::MAX {
            1.0
        } else {
            min_weight as f64 / rows.len() as f64
        };
        Ok(LinearCode {
            p,
            n,
            rows,
            relative_distance: delta,
            decoding_radius: delta / 4.0,
            kind: CodeKind::Explicit,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Message length `N`.
    pub fn message_len(&self) -> usize {
        self.n
    }

    /// Block length `M`.
    pub fn block_len(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn relative_distance(&self) -> f64 {
        self.relative_distance
    }

    pub fn decoding_radius(&self) -> f64 {
        self.decoding_radius
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    fn check_message(&self, x: &FieldVector) -> Result<()> {
        if x.p() != self.p {
            return Err(Error::InvalidParameter(format!(
                "message over F_{} for a code over F_{}",
                x.p(),
                self.p
            )));
        }
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn encode(&self, x: &FieldVector) -> Result<Word> {
        self.check_message(x)?;
        let entries = self
            .rows
            .iter()
            .map(|row| inner_product(self.p, row, x.entries()))
            .collect();
        Ok(Word { p: self.p, entries })
    }

    /// Coefficient vector of row `i` (1-based).
    pub fn row_support(&self, i: usize) -> Result<&[u64]> {
        match i.checked_sub(1).and_then(|j| self.rows.get(j)) {
            Some(row) => Ok(row),
            None => Err(Error::IndexOutOfRange {
                index: i,
                len: self.rows.len(),
            }),
        }
    }

    fn require_hadamard(&self) -> Result<()> {
        if self.kind == CodeKind::Hadamard {
            Ok(())
        } else {
            Err(Error::UnsupportedCode)
        }
    }

    /// 1-based row index of `a` in a Hadamard code.
    pub fn hadamard_row(&self, a: &[u64]) -> Result<usize> {
        self.require_hadamard()?;
        if a.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: a.len(),
            });
        }
        Ok(a.iter().fold(0usize, |acc, &v| {
            acc * self.p as usize + (v % self.p) as usize
        }) + 1)
    }

    /// Row index of `rows_i + rows_j` (Hadamard codes only; unchecked).
    fn add_rows(&self, i: usize, j: usize) -> usize {
        let (a, b) = (&self.rows[i - 1], &self.rows[j - 1]);
        a.iter().zip(b).fold(0usize, |acc, (&x, &y)| {
            acc * self.p as usize + ((x + y) % self.p) as usize
        }) + 1
    }

    /// Row index of `rows_i + e_coordinate` (Hadamard codes only; unchecked).
    fn shift_row(&self, i: usize, coordinate: usize) -> usize {
        let a = &self.rows[i - 1];
        a.iter().enumerate().fold(0usize, |acc, (j, &x)| {
            let v = if j + 1 == coordinate {
                (x + 1) % self.p
            } else {
                x
            };
            acc * self.p as usize + v as usize
        }) + 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CodeRecord {
            p: self.p,
            n: self.n,
            m: self.rows.len(),
            rows: self.rows.clone(),
        })
        .expect("plain record")
    }

    /// Parses `{p, N, M, rows}`. Rows matching a Hadamard or identity layout
    /// are recognized so the attached tester and decoder stay available.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: CodeRecord = serde_json::from_str(text)?;
        if record.m != record.rows.len() {
            return Err(Error::DimensionMismatch {
                expected: record.m,
                got: record.rows.len(),
            });
        }
        for known in [
            Self::hadamard(record.p, record.n),
            Self::identity(record.p, record.n),
        ]
        .into_iter()
        .flatten()
        {
            if known.rows == record.rows {
                return Ok(known);
            }
        }
        Self::from_rows(record.p, record.n, record.rows)
    }
}

/// A purported codeword. Serializes as a flat list of residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    p: u64,
    entries: Vec<u64>,
}

impl Word {
    pub fn new(p: u64, entries: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if let Some(&value) = entries.iter().find(|&&v| v >= p) {
            return Err(Error::InvalidResidue { value, p });
        }
        Ok(Word { p, entries })
    }

    pub fn random<R: Rng + ?Sized>(p: u64, len: usize, rng: &mut R) -> Result<Self> {
        Self::new(p, (0..len).map(|_| rng.gen_range(0..p)).collect())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Overwrites entry `i` (1-based).
    pub fn set(&mut self, i: usize, value: u64) -> Result<()> {
        if value >= self.p {
            return Err(Error::InvalidResidue { value, p: self.p });
        }
        let len = self.entries.len();
        let slot = i
            .checked_sub(1)
            .and_then(|j| self.entries.get_mut(j))
            .ok_or(Error::IndexOutOfRange { index: i, len })?;
        *slot = value;
        Ok(())
    }

    pub fn add(&self, other: &Word) -> Result<Word> {
        if other.entries.len() != self.entries.len() {
            return Err(Error::DimensionMismatch {
                expected: self.entries.len(),
                got: other.entries.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        Ok(Word { p: self.p, entries })
    }

    pub fn scale(&self, c: u64) -> Word {
        let c = c % self.p;
        Word {
            p: self.p,
            entries: self.entries.iter().map(|&v| v * c % self.p).collect(),
        }
    }

    pub fn hamming(&self, other: &Word) -> usize {
        self.entries
            .iter()
            .zip(&other.entries)
            .filter(|(a, b)| a != b)
            .count()
    }

    pub fn oracle(&self) -> PointOracle<'_> {
        PointOracle::new(&self.entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.entries).expect("plain list")
    }

    pub fn from_json(p: u64, text: &str) -> Result<Self> {
        Self::new(p, serde_json::from_str(text)?)
    }
}

/// Samples `repetitions` BLR triples `(a, b, a + b)` as 1-based row indices.
pub fn blr_triples(code: &LinearCode, repetitions: usize, rng: &mut SimRng) -> Result<Vec<usize>> {
    code.require_hadamard()?;
    let m = code.block_len();
    let mut queries = Vec::with_capacity(3 * repetitions);
    for _ in 0..repetitions {
        let a = rng.gen_range(1..=m);
        let b = rng.gen_range(1..=m);
        queries.extend([a, b, code.add_rows(a, b)]);
    }
    Ok(queries)
}

/// Whether every answered triple satisfies `w_a + w_b = w_{a+b}`.
pub fn triples_pass(p: u64, answers: &[u64]) -> bool {
    answers.chunks_exact(3).all(|t| (t[0] + t[1]) % p == t[2])
}

/// Non-adaptive BLR tester for the Hadamard code: `3 * repetitions` queries
/// in a single batch, one-sided.
#[derive(Clone, Copy, Debug)]
pub struct LocalTester<'c> {
    code: &'c LinearCode,
    repetitions: usize,
}

impl<'c> LocalTester<'c> {
    pub fn new(code: &'c LinearCode, repetitions: usize) -> Result<Self> {
        code.require_hadamard()?;
        if repetitions == 0 {
            return Err(Error::InvalidParameter(
                "repetitions must be at least 1".into(),
            ));
        }
        Ok(LocalTester { code, repetitions })
    }
}

impl Strategy for LocalTester<'_> {
    type Query = usize;
    type Answer = u64;
    type State = ();

    fn budget(&self) -> RoundBudget {
        RoundBudget::round_adaptive(0, 3 * self.repetitions).expect("positive budget")
    }

    fn start(&self, _: &mut SimRng) {}

    fn next_batch(
        &self,
        _: &mut (),
        history: &[Round<usize, u64>],
        rng: &mut SimRng,
    ) -> Option<Vec<usize>> {
        if !history.is_empty() {
            return None;
        }
        Some(blr_triples(self.code, self.repetitions, rng).expect("checked in new"))
    }

    fn finish(&self, _: (), history: &[Round<usize, u64>], _: &mut SimRng) -> Verdict {
        Verdict::from_acceptance(triples_pass(self.code.p, &history[0].answers))
    }
}

pub fn local_test(code: &LinearCode, w: &Word, repetitions: usize, seed: u64) -> Result<Verdict> {
    let tester = LocalTester::new(code, repetitions)?;
    Ok(run(&tester, &mut w.oracle(), &tester.budget(), seed)?.verdict)
}

/// The two rows `(a, a + e_i)` whose difference decodes `x_i`.
pub fn decoder_queries(code: &LinearCode, i: usize, rng: &mut SimRng) -> Result<[usize; 2]> {
    code.require_hadamard()?;
    if i == 0 || i > code.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: code.n,
        });
    }
    let a = rng.gen_range(1..=code.block_len());
    Ok([a, code.shift_row(a, i)])
}

/// Deterministic decoding of `x_i` through row `a`: `w_{a+e_i} - w_a`.
pub fn decode_with(code: &LinearCode, w: &Word, i: usize, a: usize) -> Result<u64> {
    code.require_hadamard()?;
    if i == 0 || i > code.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: code.n,
        });
    }
    let oracle = w.oracle();
    let base = oracle.point(a)?;
    let shifted = oracle.point(code.shift_row(a, i))?;
    Ok((shifted + code.p - base) % code.p)
}

/// One decoder invocation against an arbitrary point oracle. With
/// `spot_check`, a BLR triple through `a` is also read and a failed check
/// yields `None`.
pub fn relaxed_decode_with<O>(
    code: &LinearCode,
    oracle: &mut O,
    i: usize,
    rng: &mut SimRng,
    spot_check: bool,
) -> Result<Option<u64>>
where
    O: Oracle<Query = usize, Answer = u64> + ?Sized,
{
    let [a, shifted] = decoder_queries(code, i, rng)?;
    let answers = oracle.answer_batch(&[a, shifted])?;
    if spot_check {
        let b = rng.gen_range(1..=code.block_len());
        let check = oracle.answer_batch(&[a, b, code.add_rows(a, b)])?;
        if !triples_pass(code.p, &check) {
            return Ok(None);
        }
    }
    Ok(Some((answers[1] + code.p - answers[0]) % code.p))
}

pub fn relaxed_decode(code: &LinearCode, w: &Word, i: usize, seed: u64) -> Result<Option<u64>> {
    let mut rng = seed::strategy_rng(seed);
    relaxed_decode_with(code, &mut w.oracle(), i, &mut rng, false)
}

/// Closest codeword to a word, found by enumerating messages.
#[derive(Clone, Debug, PartialEq)]
pub struct Nearest {
    pub message: FieldVector,
    pub mismatches: usize,
    pub block_len: usize,
}

impl Nearest {
    pub fn relative(&self) -> f64 {
        self.mismatches as f64 / self.block_len as f64
    }
}

/// Nearest message to `w`; ties go to the lexicographically smallest.
pub fn exact_distance(code: &LinearCode, w: &Word) -> Result<Nearest> {
    if w.len() != code.block_len() {
        return Err(Error::DimensionMismatch {
            expected: code.block_len(),
            got: w.len(),
        });
    }
    let messages = ensure_enumerable(code.p, code.n)?;
    let work = messages as u128 * code.block_len() as u128 * code.n as u128;
    if work > DISTANCE_WORK_CAP {
        return Err(Error::CapExceeded {
            what: "p^N * M * N",
            value: work,
            cap: DISTANCE_WORK_CAP,
        });
    }
    let mut best: Option<Nearest> = None;
    for x in FieldVector::enumerate(code.p, code.n)? {
        let mismatches = code
            .rows
            .iter()
            .zip(w.entries())
            .filter(|(row, &v)| inner_product(code.p, row, x.entries()) != v)
            .count();
        if best.as_ref().is_none_or(|b| mismatches < b.mismatches) {
            best = Some(Nearest {
                message: x,
                mismatches,
                block_len: code.block_len(),
            });
        }
    }
    Ok(best.expect("F_p^N is never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(p: u64, e: &[u64]) -> FieldVector {
        FieldVector::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn hadamard_parameters() {
        let c = LinearCode::hadamard(5, 2).unwrap();
        assert_eq!(c.block_len(), 25);
        assert!((c.relative_distance() - 0.8).abs() < 1e-12);
        assert!((c.decoding_radius() - 0.2).abs() < 1e-12);
        assert!(c.decoding_radius() < c.relative_distance() / 2.0);
        assert!(matches!(
            LinearCode::hadamard(7, 7),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn encode_examples() {
        let c = LinearCode::hadamard(5, 2).unwrap();
        let row = c.hadamard_row(&[3, 4]).unwrap();
        assert_eq!(c.row_support(row).unwrap(), &[3, 4]);
        assert_eq!(
            c.row_support(c.hadamard_row(&[0, 0]).unwrap()).unwrap(),
            &[0, 0]
        );
        let w = c.encode(&x(5, &[1, 2])).unwrap();
        assert_eq!(w.entries()[row - 1], 1);
        assert!(c
            .encode(&x(5, &[0, 0]))
            .unwrap()
            .entries()
            .iter()
            .all(|&v| v == 0));
        assert!(matches!(
            c.encode(&x(5, &[1, 2, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            c.row_support(26),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            c.row_support(0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn decoding_example() {
        let c = LinearCode::hadamard(5, 2).unwrap();
        let w = c.encode(&x(5, &[1, 2])).unwrap();
        let a = c.hadamard_row(&[3, 4]).unwrap();
        assert_eq!(c.shift_row(a, 2), c.hadamard_row(&[3, 0]).unwrap());
        assert_eq!(decode_with(&c, &w, 2, a).unwrap(), 2);
    }

    #[test]
    fn nearest_message_examples() {
        let c = LinearCode::hadamard(3, 2).unwrap();
        let mut w = c.encode(&x(3, &[1, 0])).unwrap();
        let near = exact_distance(&c, &w).unwrap();
        assert_eq!((near.message.entries(), near.mismatches), (&[1, 0][..], 0));
        let v = w.entries()[4];
        w.set(5, (v + 1) % 3).unwrap();
        let near = exact_distance(&c, &w).unwrap();
        assert_eq!(near.message.entries(), &[1, 0]);
        assert!((near.relative() - 1.0 / 9.0).abs() < 1e-12);

        let mut z = Word::new(3, vec![0; 9]).unwrap();
        z.set(7, 1).unwrap();
        let near = exact_distance(&c, &z).unwrap();
        assert_eq!(near.message.entries(), &[0, 0]);
        assert_eq!(near.mismatches, 1);
    }

    #[test]
    fn code_and_word_json() {
        let c = LinearCode::hadamard(3, 2).unwrap();
        let back = LinearCode::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let e = LinearCode::from_rows(3, 2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(e.kind(), CodeKind::Explicit);
        assert!((e.relative_distance() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(LinearCode::from_json(&e.to_json()).unwrap(), e);
        let w = c.encode(&x(3, &[2, 1])).unwrap();
        assert_eq!(Word::from_json(3, &w.to_json()).unwrap(), w);
        assert!(LinearCode::from_rows(3, 2, vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn tester_and_decoder_need_hadamard() {
        let c = LinearCode::identity(3, 4).unwrap();
        assert!(matches!(
            LocalTester::new(&c, 1),
            Err(Error::UnsupportedCode)
        ));
        let w = Word::new(3, vec![0; 4]).unwrap();
        assert!(matches!(
            relaxed_decode(&c, &w, 1, 0),
            Err(Error::UnsupportedCode)
        ));
    }
}
