//! Vectors over prime fields and explicit function tables.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest input space (`p^N`) that brute-force routines will enumerate.
pub const ENUMERATION_CAP: u64 = 100_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^n`, or `None` on overflow.
pub fn checked_pow(p: u64, n: usize) -> Option<u64> {
    (0..n).try_fold(1u64, |acc, _| acc.checked_mul(p))
}

pub(crate) fn ensure_enumerable(p: u64, n: usize) -> Result<u64> {
    match checked_pow(p, n) {
        Some(size) if size <= ENUMERATION_CAP => Ok(size),
        other => Err(Error::CapExceeded {
            what: "p^N",
            value: other.map_or(u128::MAX, u128::from),
            cap: ENUMERATION_CAP as u128,
        }),
    }
}

/// An element `x = (x_1, ..., x_N)` of `F_p^N`. Coordinates are 1-based in
/// [`get`](Self::get) to match the point-oracle convention.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldVector {
    p: u64,
    entries: Vec<u64>,
}

impl FieldVector {
    pub fn new(p: u64, entries: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if let Some(&value) = entries.iter().find(|&&v| v >= p) {
            return Err(Error::InvalidResidue { value, p });
        }
        Ok(FieldVector { p, entries })
    }

    pub fn zeros(p: u64, n: usize) -> Result<Self> {
        Self::new(p, vec![0; n])
    }

    pub fn random<R: Rng + ?Sized>(p: u64, n: usize, rng: &mut R) -> Result<Self> {
        Self::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect())
    }

    /// The `index`-th vector of `F_p^n` in lexicographic order (`x_1` most
    /// significant).
    pub fn from_index(p: u64, n: usize, mut index: u64) -> Result<Self> {
        let mut entries = vec![0; n];
        for slot in entries.iter_mut().rev() {
            *slot = index % p;
            index /= p;
        }
        if index != 0 {
            return Err(Error::InvalidParameter("index beyond p^n".into()));
        }
        Self::new(p, entries)
    }

    pub fn index(&self) -> u64 {
        self.entries.iter().fold(0, |acc, &v| acc * self.p + v)
    }

    /// All of `F_p^n` in lexicographic order. Not capped; callers decide.
    pub fn enumerate(p: u64, n: usize) -> Result<impl Iterator<Item = FieldVector>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let total = checked_pow(p, n).ok_or(Error::CapExceeded {
            what: "p^N",
            value: u128::MAX,
            cap: u64::MAX as u128,
        })?;
        Ok((0..total).map(move |i| FieldVector::from_index(p, n, i).expect("index in range")))
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

    /// `x_i` for `i` in `1..=N`.
    pub fn get(&self, i: usize) -> u64 {
        self.entries[i - 1]
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        Ok(FieldVector { p: self.p, entries })
    }

    pub fn scale(&self, c: u64) -> FieldVector {
        let c = c % self.p;
        FieldVector {
            p: self.p,
            entries: self.entries.iter().map(|&v| v * c % self.p).collect(),
        }
    }

    fn check_compatible(&self, other: &FieldVector) -> Result<()> {
        if self.p != other.p {
            return Err(Error::InvalidParameter(format!(
                "fields differ: F_{} vs F_{}",
                self.p, other.p
            )));
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(())
    }
}

/// Explicit table of `f: F_p^N -> {0, 1, ...}` in lexicographic input order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTable {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: usize,
    pub values: Vec<u8>,
}

impl FunctionTable {
    pub fn new(p: u64, n: usize, values: Vec<u8>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let size = ensure_enumerable(p, n)?;
        if values.len() as u64 != size {
            return Err(Error::DimensionMismatch {
                expected: size as usize,
                got: values.len(),
            });
        }
        Ok(FunctionTable { p, n, values })
    }

    pub fn from_fn(p: u64, n: usize, f: impl Fn(&FieldVector) -> u8) -> Result<Self> {
        ensure_enumerable(p, n)?;
        let values = FieldVector::enumerate(p, n)?.map(|x| f(&x)).collect();
        Self::new(p, n, values)
    }

    pub fn eval(&self, x: &FieldVector) -> u8 {
        self.values[x.index() as usize]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tables always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FunctionTable = serde_json::from_str(text)?;
        Self::new(raw.p, raw.n, raw.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(101));
        assert!(!is_prime(100));
    }

    #[test]
    fn rejects_bad_fields_and_residues() {
        assert_eq!(FieldVector::new(4, vec![0]), Err(Error::NotPrime(4)));
        assert_eq!(
            FieldVector::new(5, vec![5]),
            Err(Error::InvalidResidue { value: 5, p: 5 })
        );
    }

    #[test]
    fn lexicographic_indexing() {
        let all: Vec<_> = FieldVector::enumerate(3, 2).unwrap().collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0].entries(), &[0, 0]);
        assert_eq!(all[1].entries(), &[0, 1]);
        assert_eq!(all[3].entries(), &[1, 0]);
        for (i, x) in all.iter().enumerate() {
            assert_eq!(x.index(), i as u64);
        }
    }

    #[test]
    fn table_round_trip_and_cap() {
        let t = FunctionTable::from_fn(3, 2, |x| (x.get(1) % 2) as u8).unwrap();
        assert_eq!(FunctionTable::from_json(&t.to_json()).unwrap(), t);
        assert!(t.to_json().contains("\"N\":2"));
        assert!(matches!(
            FunctionTable::from_fn(7, 7, |_| 0),
            Err(Error::CapExceeded { .. })
        ));
    }
}
