use crate::error::{Error, Result};

/// Answers batches of queries about a fixed (or lazily sampled) instance.
pub trait Oracle {
    type Query;
    type Answer;

    fn answer_batch(&mut self, queries: &[Self::Query]) -> Result<Vec<Self::Answer>>;
}

/// Point queries `i -> v_i` into a residue vector; coordinates are 1-based.
#[derive(Clone, Copy, Debug)]
pub struct PointOracle<'a> {
    values: &'a [u64],
}

impl<'a> PointOracle<'a> {
    pub fn new(values: &'a [u64]) -> Self {
        PointOracle { values }
    }

    pub fn point(&self, i: usize) -> Result<u64> {
        if i == 0 || i > self.values.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.values.len(),
            });
        }
        Ok(self.values[i - 1])
    }
}

impl Oracle for PointOracle<'_> {
    type Query = usize;
    type Answer = u64;

    fn answer_batch(&mut self, queries: &[usize]) -> Result<Vec<u64>> {
        queries.iter().map(|&i| self.point(i)).collect()
    }
}

/// Linear queries `L -> <L, x>` over `F_p`.
#[derive(Clone, Copy, Debug)]
pub struct LinearOracle<'a> {
    p: u64,
    x: &'a [u64],
}

impl<'a> LinearOracle<'a> {
    pub fn new(p: u64, x: &'a [u64]) -> Self {
        LinearOracle { p, x }
    }

    pub fn combination(&self, coefficients: &[u64]) -> Result<u64> {
        if coefficients.len() != self.x.len() {
            return Err(Error::DimensionMismatch {
                expected: self.x.len(),
                got: coefficients.len(),
            });
        }
        Ok(inner_product(self.p, coefficients, self.x))
    }
}

impl Oracle for LinearOracle<'_> {
    type Query = Vec<u64>;
    type Answer = u64;

    fn answer_batch(&mut self, queries: &[Vec<u64>]) -> Result<Vec<u64>> {
        queries.iter().map(|l| self.combination(l)).collect()
    }
}

pub(crate) fn inner_product(p: u64, a: &[u64], b: &[u64]) -> u64 {
    let p = p as u128;
    (a.iter()
        .zip(b)
        .fold(0u128, |acc, (&u, &v)| (acc + u as u128 * v as u128) % p)) as u64
}

/// Wraps an oracle and counts what passes through it.
#[derive(Debug)]
pub struct CountingOracle<O> {
    pub inner: O,
    pub queries: usize,
    pub batches: usize,
}

impl<O> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle {
            inner,
            queries: 0,
            batches: 0,
        }
    }
}

impl<O: Oracle> Oracle for CountingOracle<O> {
    type Query = O::Query;
    type Answer = O::Answer;

    fn answer_batch(&mut self, queries: &[O::Query]) -> Result<Vec<O::Answer>> {
        self.queries += queries.len();
        self.batches += 1;
        self.inner.answer_batch(queries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_queries_are_one_based() {
        let x = [2, 4, 1, 3, 0];
        let mut o = PointOracle::new(&x);
        assert_eq!(o.answer_batch(&[1, 5, 1]).unwrap(), vec![2, 0, 2]);
        assert!(matches!(
            o.answer_batch(&[0]),
            Err(Error::IndexOutOfRange { index: 0, len: 5 })
        ));
        assert!(o.answer_batch(&[6]).is_err());
    }

    #[test]
    fn linear_queries_reduce_mod_p() {
        let x = [1, 2];
        let mut o = LinearOracle::new(5, &x);
        assert_eq!(o.answer_batch(&[vec![3, 4]]).unwrap(), vec![1]);
        assert!(o.answer_batch(&[vec![1]]).is_err());
    }
}
