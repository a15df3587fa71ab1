//! Bounded-degree graphs given by adjacency lists `g(v, i)`.
//!
//! Vertices are `0..n`. Each vertex has `d` slots; its neighbors are packed
//! into the leading slots in increasing order and the rest hold [`NIL`].

mod cycles;
mod gap;
mod generate;
mod simulator;
mod tester;

use std::borrow::Borrow;
use std::fmt::Write as _;

pub use cycles::{girth, has_cycle_leq, shortest_cycle_leq};
pub use gap::{estimate_gap, event_rates, simulated_acceptance, EventRates, GapEstimate};
pub use generate::{gen_no, gen_yes, CycleCover, CycleCoverSpec, LazyCycleCover, DEFAULT_DEGREE};
pub use simulator::GraphSimulator;
pub use tester::{BfsCycleTester, BfsState};

use crate::error::{Error, Result};
use crate::query::Oracle;

pub const NIL: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedDegreeGraph {
    n: usize,
    d: usize,
    slots: Vec<u32>,
}

impl BoundedDegreeGraph {
    pub fn empty(n: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidGraph("degree bound must be positive".into()));
        }
        if n >= NIL as usize {
            return Err(Error::InvalidGraph(format!(
                "{n} vertices do not fit in 32-bit labels"
            )));
        }
        Ok(BoundedDegreeGraph {
            n,
            d,
            slots: vec![NIL; n * d],
        })
    }

    pub fn from_edges(
        n: usize,
        d: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut g = Self::empty(n, d)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        let row = &self.slots[v * self.d..(v + 1) * self.d];
        let len = row.iter().position(|&u| u == NIL).unwrap_or(self.d);
        &row[..len]
    }

    /// `g(v, slot)` with a 0-based slot; `None` plays the role of nil.
    pub fn adj(&self, v: usize, slot: usize) -> Option<usize> {
        if slot >= self.d {
            return None;
        }
        match self.slots[v * self.d + slot] {
            NIL => None,
            u => Some(u as usize),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(move |&v| (u, v as usize))
                .filter(|&(u, v)| u < v)
        })
    }

    fn insert_sorted(&mut self, v: usize, u: u32) -> Result<()> {
        let row = &mut self.slots[v * self.d..(v + 1) * self.d];
        let len = row.iter().position(|&x| x == NIL).unwrap_or(self.d);
        if len == self.d {
            return Err(Error::InvalidGraph(format!(
                "vertex {v} exceeds degree {}",
                self.d
            )));
        }
        let at = row[..len].partition_point(|&x| x < u);
        row.copy_within(at..len, at + 1);
        row[at] = u;
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::IndexOutOfRange {
                index: u.max(v),
                len: self.n,
            });
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidGraph(format!("duplicate edge {u}-{v}")));
        }
        if self.degree(u) == self.d || self.degree(v) == self.d {
            return Err(Error::InvalidGraph(format!(
                "edge {u}-{v} exceeds degree {}",
                self.d
            )));
        }
        self.insert_sorted(u, v as u32)?;
        self.insert_sorted(v, u as u32)
    }

    /// Checks packing, ordering, symmetry and the absence of loops.
    pub fn validate(&self) -> Result<()> {
        for v in 0..self.n {
            let row = &self.slots[v * self.d..(v + 1) * self.d];
            let len = self.degree(v);
            if row[len..].iter().any(|&u| u != NIL) {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} has a gap in its slots"
                )));
            }
            let list = &row[..len];
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} has unsorted or repeated neighbors"
                )));
            }
            for &u in list {
                let u = u as usize;
                if u >= self.n || u == v || !self.has_edge(u, v) {
                    return Err(Error::InvalidGraph(format!(
                        "asymmetric or invalid edge {v}-{u}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mut g = Self::empty(self.n, self.d)?;
        for v in 0..self.n {
            let target = perm[v] as usize;
            let row = &mut g.slots[target * self.d..(target + 1) * self.d];
            for (slot, &u) in row.iter_mut().zip(self.neighbors(v)) {
                *slot = perm[u as usize];
            }
            row[..self.degree(v)].sort_unstable();
        }
        Ok(g)
    }

    /// Text form: `n d`, then one `v: u1 u2 ...` line per vertex.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.d);
        for v in 0..self.n {
            write!(out, "{v}:").expect("string write");
            for u in self.neighbors(v) {
                write!(out, " {u}").expect("string write");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header token {t:?}")))
            })
            .collect::<Result<_>>()?;
        let [n, d] = nums[..] else {
            return Err(Error::Parse("header must be `n d`".into()));
        };
        let mut g = Self::empty(n, d)?;
        let mut seen = vec![false; n];
        for line in lines {
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing ':' in {line:?}")))?;
            let v: usize = head
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex {head:?}")))?;
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Parse(format!("vertex {v} out of range or repeated")));
            }
            let mut list: Vec<u32> = rest
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad neighbor {t:?}")))
                })
                .collect::<Result<_>>()?;
            if list.len() > d {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} exceeds degree {d}"
                )));
            }
            list.sort_unstable();
            g.slots[v * d..v * d + list.len()].copy_from_slice(&list);
        }
        g.validate()?;
        Ok(g)
    }
}

/// Point access to a graph: querying vertex `v` returns its neighbor list.
#[derive(Clone, Debug)]
pub struct GraphOracle<G> {
    graph: G,
}

impl<G: Borrow<BoundedDegreeGraph>> GraphOracle<G> {
    pub fn new(graph: G) -> Self {
        GraphOracle { graph }
    }

    pub fn graph(&self) -> &BoundedDegreeGraph {
        self.graph.borrow()
    }
}

impl<G: Borrow<BoundedDegreeGraph>> Oracle for GraphOracle<G> {
    type Query = usize;
    type Answer = Vec<usize>;

    fn answer_batch(&mut self, queries: &[usize]) -> Result<Vec<Vec<usize>>> {
        let g = self.graph.borrow();
        queries
            .iter()
            .map(|&v| {
                if v >= g.n() {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        len: g.n(),
                    });
                }
                Ok(g.neighbors(v).iter().map(|&u| u as usize).collect())
            })
            .collect()
    }
}
