use std::collections::{HashMap, HashSet};

use rand::Rng;

use crate::error::{Error, Result};
use crate::query::Oracle;
use crate::seed::SimRng;

/// Answers neighbor queries as if the graph were a union of long cycles on
/// uniformly random labels, without ever building a graph.
///
/// A fresh vertex (never queried or announced) gets two distinct neighbors
/// drawn uniformly from the unused pool `U`. A boundary vertex (announced
/// as a neighbor but not yet queried) keeps its known neighbor and gets one
/// more from `U`. Repeated queries get the same answer.
#[derive(Clone, Debug)]
pub struct GraphSimulator {
    n: usize,
    rng: SimRng,
    neighbors: HashMap<usize, Vec<usize>>,
    queried: HashSet<usize>,
    fresh_queries: usize,
    boundary_queries: usize,
}

impl GraphSimulator {
    pub fn new(n: usize, rng: SimRng) -> Self {
        GraphSimulator {
            n,
            rng,
            neighbors: HashMap::new(),
            queried: HashSet::new(),
            fresh_queries: 0,
            boundary_queries: 0,
        }
    }

    /// Size of the unused pool `U`.
    pub fn pool_size(&self) -> usize {
        self.n - self.neighbors.len()
    }

    pub fn fresh_queries(&self) -> usize {
        self.fresh_queries
    }

    pub fn boundary_queries(&self) -> usize {
        self.boundary_queries
    }

    /// A uniform element of `U`, removed from it.
    fn draw(&mut self) -> Result<usize> {
        let available = self.pool_size();
        if available == 0 {
            return Err(Error::PoolExhausted { need: 1, available });
        }
        let v = if available * 4 >= self.n {
            loop {
                let v = self.rng.gen_range(0..self.n);
                if !self.neighbors.contains_key(&v) {
                    break v;
                }
            }
        } else {
            let pool: Vec<usize> = (0..self.n)
                .filter(|v| !self.neighbors.contains_key(v))
                .collect();
            pool[self.rng.gen_range(0..pool.len())]
        };
        self.neighbors.insert(v, Vec::with_capacity(2));
        Ok(v)
    }

    fn link(&mut self, u: usize, v: usize) {
        self.neighbors.get_mut(&u).expect("known vertex").push(v);
        self.neighbors.get_mut(&v).expect("known vertex").push(u);
    }

    fn answer(&mut self, v: usize) -> Result<Vec<usize>> {
        if v >= self.n {
            return Err(Error::IndexOutOfRange {
                index: v,
                len: self.n,
            });
        }
        if self.queried.insert(v) {
            let known = match self.neighbors.get(&v) {
                Some(list) => {
                    self.boundary_queries += 1;
                    list.len()
                }
                None => {
                    self.fresh_queries += 1;
                    self.neighbors.insert(v, Vec::with_capacity(2));
                    0
                }
            };
            let need = 2usize.saturating_sub(known);
            if self.pool_size() < need {
                return Err(Error::PoolExhausted {
                    need,
                    available: self.pool_size(),
                });
            }
            for _ in 0..need {
                let u = self.draw()?;
                self.link(v, u);
            }
        }
        let mut list = self.neighbors[&v].clone();
        list.sort_unstable();
        Ok(list)
    }

    pub fn simulate_answers(&mut self, queries: &[usize]) -> Result<Vec<Vec<usize>>> {
        queries.iter().map(|&v| self.answer(v)).collect()
    }
}

impl Oracle for GraphSimulator {
    type Query = usize;
    type Answer = Vec<usize>;

    fn answer_batch(&mut self, queries: &[usize]) -> Result<Vec<Vec<usize>>> {
        self.simulate_answers(queries)
    }
}
