//! Disjoint cycle covers under a uniformly random relabeling.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{BoundedDegreeGraph, NIL};
use crate::error::{Error, Result};
use crate::query::Oracle;
use crate::seed::{self, tags, SimRng};

pub const DEFAULT_DEGREE: usize = 3;

/// `s` disjoint `t`-cycles plus `r` isolated vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleCoverSpec {
    pub cycle_len: usize,
    pub cycles: usize,
    pub isolated: usize,
}

impl CycleCoverSpec {
    pub fn new(n: usize, cycle_len: usize) -> Result<Self> {
        if cycle_len < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle length {cycle_len} below 3"
            )));
        }
        if n < cycle_len {
            return Err(Error::InvalidParameter(format!(
                "{n} vertices cannot hold a {cycle_len}-cycle"
            )));
        }
        let cycles = n / cycle_len;
        Ok(CycleCoverSpec {
            cycle_len,
            cycles,
            isolated: n - cycles * cycle_len,
        })
    }

    /// `(2k+4)`-cycles: free of cycles of length up to `2k+3`.
    pub fn yes(n: usize, k: usize) -> Result<Self> {
        Self::new(n, 2 * k + 4)
    }

    /// `(2k+3)`-cycles: far from `(2k+3)`-cycle-freeness.
    pub fn no(n: usize, k: usize) -> Result<Self> {
        Self::new(n, 2 * k + 3)
    }

    pub fn n(&self) -> usize {
        self.cycle_len * self.cycles + self.isolated
    }

    pub fn edge_count(&self) -> usize {
        self.cycle_len * self.cycles
    }

    /// Fraction of the `d n / 2` edge budget that must change to remove
    /// every cycle: at least one edge per cycle.
    pub fn distance_lower_bound(&self, d: usize) -> f64 {
        self.cycles as f64 / (d as f64 * self.n() as f64 / 2.0)
    }
}

/// A generated instance together with the cycle each vertex lies on.
#[derive(Clone, Debug)]
pub struct CycleCover {
    pub graph: BoundedDegreeGraph,
    /// Cycle index per vertex; [`NIL`] for isolated vertices.
    pub cycle_of: Vec<u32>,
    pub spec: CycleCoverSpec,
}

impl CycleCover {
    /// Cycle `c` on vertices `c t .. (c + 1) t - 1` in order; the isolated
    /// vertices come last.
    pub fn canonical(spec: CycleCoverSpec, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(
                "cycle covers need degree bound at least 2".into(),
            ));
        }
        let t = spec.cycle_len;
        let edges =
            (0..spec.cycles).flat_map(|c| (0..t).map(move |j| (c * t + j, c * t + (j + 1) % t)));
        let graph = BoundedDegreeGraph::from_edges(spec.n(), d, edges)?;
        let mut cycle_of = vec![NIL; spec.n()];
        for (v, slot) in cycle_of.iter_mut().enumerate().take(spec.edge_count()) {
            *slot = (v / t) as u32;
        }
        Ok(CycleCover {
            graph,
            cycle_of,
            spec,
        })
    }

    /// A uniformly random isomorphic copy of the canonical cover.
    pub fn sample(spec: CycleCoverSpec, d: usize, rng: &mut SimRng) -> Result<Self> {
        let canonical = Self::canonical(spec, d)?;
        let mut perm: Vec<u32> = (0..spec.n() as u32).collect();
        perm.shuffle(rng);
        let graph = canonical.graph.relabel(&perm)?;
        let mut cycle_of = vec![NIL; spec.n()];
        for (v, &c) in canonical.cycle_of.iter().enumerate() {
            cycle_of[perm[v] as usize] = c;
        }
        Ok(CycleCover {
            graph,
            cycle_of,
            spec,
        })
    }
}

/// A uniformly relabeled cycle cover whose permutation is revealed only
/// where queries look.
///
/// Each newly needed image or preimage is drawn uniformly from the values
/// not yet used, which reveals a uniform permutation step by step. Answers
/// are therefore distributed exactly as under [`CycleCover::sample`], at a
/// cost proportional to the number of queries rather than to `n`.
#[derive(Clone, Debug)]
pub struct LazyCycleCover {
    spec: CycleCoverSpec,
    rng: SimRng,
    label_of: HashMap<u32, u32>,
    position_of: HashMap<u32, u32>,
}

impl LazyCycleCover {
    pub fn new(spec: CycleCoverSpec, rng: SimRng) -> Self {
        LazyCycleCover {
            spec,
            rng,
            label_of: HashMap::new(),
            position_of: HashMap::new(),
        }
    }

    pub fn spec(&self) -> CycleCoverSpec {
        self.spec
    }

    fn draw_unused(rng: &mut SimRng, n: usize, used: &HashMap<u32, u32>) -> u32 {
        if used.len() * 2 <= n {
            loop {
                let v = rng.gen_range(0..n as u32);
                if !used.contains_key(&v) {
                    return v;
                }
            }
        }
        let free: Vec<u32> = (0..n as u32).filter(|v| !used.contains_key(v)).collect();
        free[rng.gen_range(0..free.len())]
    }

    fn position(&mut self, label: u32) -> u32 {
        if let Some(&c) = self.position_of.get(&label) {
            return c;
        }
        let c = Self::draw_unused(&mut self.rng, self.spec.n(), &self.label_of);
        self.position_of.insert(label, c);
        self.label_of.insert(c, label);
        c
    }

    fn label(&mut self, position: u32) -> u32 {
        if let Some(&v) = self.label_of.get(&position) {
            return v;
        }
        let v = Self::draw_unused(&mut self.rng, self.spec.n(), &self.position_of);
        self.label_of.insert(position, v);
        self.position_of.insert(v, position);
        v
    }

    /// Cycle index of a vertex, or [`NIL`] if it is isolated.
    pub fn cycle_of(&mut self, v: usize) -> u32 {
        let c = self.position(v as u32) as usize;
        if c < self.spec.edge_count() {
            (c / self.spec.cycle_len) as u32
        } else {
            NIL
        }
    }

    pub fn neighbors(&mut self, v: usize) -> Result<Vec<usize>> {
        let n = self.spec.n();
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, len: n });
        }
        let c = self.position(v as u32) as usize;
        if c >= self.spec.edge_count() {
            return Ok(Vec::new());
        }
        let t = self.spec.cycle_len;
        let base = c - c % t;
        let next = base + (c - base + 1) % t;
        let prev = base + (c - base + t - 1) % t;
        let mut list = vec![
            self.label(next as u32) as usize,
            self.label(prev as u32) as usize,
        ];
        list.sort_unstable();
        Ok(list)
    }
}

impl Oracle for LazyCycleCover {
    type Query = usize;
    type Answer = Vec<usize>;

    fn answer_batch(&mut self, queries: &[usize]) -> Result<Vec<Vec<usize>>> {
        queries.iter().map(|&v| self.neighbors(v)).collect()
    }
}

pub fn gen_yes(n: usize, k: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    let mut rng = seed::stream(seed, tags::YES, 0);
    Ok(CycleCover::sample(CycleCoverSpec::yes(n, k)?, DEFAULT_DEGREE, &mut rng)?.graph)
}

pub fn gen_no(n: usize, k: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    let mut rng = seed::stream(seed, tags::NO, 0);
    Ok(CycleCover::sample(CycleCoverSpec::no(n, k)?, DEFAULT_DEGREE, &mut rng)?.graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::has_cycle_leq;

    #[test]
    fn spec_arithmetic() {
        let y = CycleCoverSpec::yes(22, 1).unwrap();
        assert_eq!(
            (y.cycle_len, y.cycles, y.isolated, y.edge_count()),
            (6, 3, 4, 18)
        );
        let y = CycleCoverSpec::yes(12, 1).unwrap();
        assert_eq!((y.cycles, y.isolated), (2, 0));
        let no = CycleCoverSpec::no(22, 1).unwrap();
        assert_eq!(
            (no.cycle_len, no.cycles, no.isolated, no.edge_count()),
            (5, 4, 2, 20)
        );
        assert!((no.distance_lower_bound(2) - 4.0 / 22.0).abs() < 1e-12);
        assert!(CycleCoverSpec::yes(5, 1).is_err());
    }

    #[test]
    fn generated_graphs_are_valid() {
        for seed in 0..10 {
            let g = gen_yes(22, 1, seed).unwrap();
            g.validate().unwrap();
            assert_eq!(g.edge_count(), 18);
            assert_eq!((0..22).filter(|&v| g.degree(v) == 0).count(), 4);
            assert!(!has_cycle_leq(&g, 5));
            let h = gen_no(22, 1, seed).unwrap();
            h.validate().unwrap();
            assert_eq!(h.edge_count(), 20);
            assert!(has_cycle_leq(&h, 5));
        }
    }

    #[test]
    fn lazy_cover_is_a_consistent_cycle_cover() {
        let spec = CycleCoverSpec::no(50, 1).unwrap();
        let mut lazy = LazyCycleCover::new(spec, crate::seed::stream(9, tags::GRAPHS, 0));
        let lists: Vec<Vec<usize>> = (0..50).map(|v| lazy.neighbors(v).unwrap()).collect();
        let g = BoundedDegreeGraph::from_edges(
            50,
            2,
            lists
                .iter()
                .enumerate()
                .flat_map(|(v, l)| l.iter().filter(move |&&u| u > v).map(move |&u| (v, u))),
        )
        .unwrap();
        for (v, list) in lists.iter().enumerate() {
            assert_eq!(
                &g.neighbors(v)
                    .iter()
                    .map(|&u| u as usize)
                    .collect::<Vec<_>>(),
                list
            );
        }
        assert_eq!(g.edge_count(), spec.edge_count());
        assert_eq!(
            (0..50).filter(|&v| lists[v].is_empty()).count(),
            spec.isolated
        );
        assert_eq!(crate::graph::girth(&g), Some(5));
    }

    #[test]
    fn cycle_labels_follow_relabeling() {
        let mut rng = crate::seed::stream(3, tags::GRAPHS, 0);
        let cover = CycleCover::sample(CycleCoverSpec::yes(20, 0).unwrap(), 3, &mut rng).unwrap();
        for (u, v) in cover.graph.edges() {
            assert_eq!(cover.cycle_of[u], cover.cycle_of[v]);
            assert_ne!(cover.cycle_of[u], NIL);
        }
    }
}
