use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::query::Oracle;

/// Lazy truth table of `z -> <x ⊕ y, z> mod 2` for inputs split between
/// Alice (`x`) and Bob (`y`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityOracle {
    x: FixedBitSet,
    y: FixedBitSet,
    support: FixedBitSet,
}

/// Builds the parity oracle for a sparse-disjointness pair with
/// `|x| = |y| = m`. Its parity has size `2m - 2|x ∩ y|`, which is `2m`
/// exactly when the sets are disjoint.
pub fn disj_parity_map(x: &FixedBitSet, y: &FixedBitSet, m: usize) -> Result<ParityOracle> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let (wx, wy) = (x.count_ones(..), y.count_ones(..));
    if wx != m || wy != m {
        return Err(Error::PromiseViolation(format!(
            "weights {wx} and {wy}, expected {m}"
        )));
    }
    let mut support = x.clone();
    support.symmetric_difference_with(y);
    Ok(ParityOracle {
        x: x.clone(),
        y: y.clone(),
        support,
    })
}

impl ParityOracle {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_clear()
    }

    /// 1-based coordinates of `x ⊕ y`.
    pub fn support(&self) -> Vec<usize> {
        self.support.ones().map(|i| i + 1).collect()
    }

    pub fn parity_size(&self) -> usize {
        self.support.count_ones(..)
    }

    pub fn eval(&self, z: &FixedBitSet) -> Result<u8> {
        if z.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: z.len(),
            });
        }
        Ok((self.support.intersection(z).count() % 2) as u8)
    }

    /// Answers `z` with one bit of communication: Alice sends `<x, z>`, Bob
    /// adds `<y, z>`. Returns the answer and the bits exchanged.
    pub fn answer_by_protocol(&self, z: &FixedBitSet) -> Result<(u8, usize)> {
        self.eval(z)?;
        let alice = self.x.intersection(z).count() % 2;
        let bob = self.y.intersection(z).count() % 2;
        Ok(((alice ^ bob) as u8, 1))
    }
}

impl Oracle for ParityOracle {
    type Query = FixedBitSet;
    type Answer = u8;

    fn answer_batch(&mut self, queries: &[FixedBitSet]) -> Result<Vec<u8>> {
        queries.iter().map(|z| self.eval(z)).collect()
    }
}

/// Parses a string like `"0110"`.
pub fn parse_bits(text: &str) -> Result<FixedBitSet> {
    let text = text.trim();
    let mut bits = FixedBitSet::with_capacity(text.len());
    for (i, c) in text.chars().enumerate() {
        match c {
            '0' => {}
            '1' => bits.insert(i),
            _ => return Err(Error::Parse(format!("{c:?} is not a bit"))),
        }
    }
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let o = disj_parity_map(
            &parse_bits("1100").unwrap(),
            &parse_bits("0110").unwrap(),
            2,
        )
        .unwrap();
        assert_eq!(o.support(), vec![1, 3]);
        assert_eq!(o.parity_size(), 2);
        let o = disj_parity_map(
            &parse_bits("1100").unwrap(),
            &parse_bits("0011").unwrap(),
            2,
        )
        .unwrap();
        assert_eq!(o.parity_size(), 4);
        assert_eq!(o.eval(&parse_bits("1000").unwrap()).unwrap(), 1);
        assert_eq!(
            o.answer_by_protocol(&parse_bits("1010").unwrap()).unwrap(),
            (0, 1)
        );
    }

    #[test]
    fn promise_is_enforced() {
        let r = disj_parity_map(
            &parse_bits("1110").unwrap(),
            &parse_bits("0110").unwrap(),
            2,
        );
        assert!(matches!(r, Err(Error::PromiseViolation(_))));
        assert!(parse_bits("10x").is_err());
    }
}
