use std::collections::{HashMap, HashSet};

use rand::Rng;

use super::cycles::shortest_cycle_leq;
use crate::error::{Error, Result};
use crate::query::{Round, RoundBudget, Strategy, Verdict};
use crate::seed::SimRng;

/// Breadth-first tester for `t`-cycle-freeness.
///
/// Batch 0 queries uniformly sampled sources; each later batch queries every
/// newly discovered vertex. After `k` adaptive rounds (or once nothing new
/// turns up) it rejects iff the explored edges close a cycle of length at
/// most `t`. It never rejects a `t`-cycle-free graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsCycleTester {
    n: usize,
    k: usize,
    t: usize,
    sources: usize,
    d: usize,
}

impl BfsCycleTester {
    /// Samples `ceil(3 / eps)` sources; requires `t <= 2k + 2`, the longest
    /// cycle `k` rounds of BFS can close around a source.
    pub fn new(n: usize, k: usize, t: usize, eps: f64, d: usize) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "proximity {eps} outside (0, 1]"
            )));
        }
        if t > 2 * k + 2 {
            return Err(Error::InvalidParameter(format!(
                "a {k}-round BFS can only certify cycles of length up to {}, not {t}",
                2 * k + 2
            )));
        }
        Self::with_sources(n, k, t, (3.0 / eps).ceil() as usize, d)
    }

    /// A tester with an explicit source count and no depth check, e.g. a
    /// `t`-cycle tester cut down to fewer rounds than it needs.
    pub fn with_sources(n: usize, k: usize, t: usize, sources: usize, d: usize) -> Result<Self> {
        if n == 0 || sources == 0 || d == 0 {
            return Err(Error::InvalidParameter(
                "n, sources and d must be positive".into(),
            ));
        }
        if t < 3 {
            return Err(Error::InvalidParameter(format!(
                "no simple cycle has length {t}"
            )));
        }
        Ok(BfsCycleTester {
            n,
            k,
            t,
            sources,
            d,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> usize {
        self.k
    }

    pub fn target(&self) -> usize {
        self.t
    }

    pub fn sources(&self) -> usize {
        self.sources
    }
}

#[derive(Clone, Debug, Default)]
pub struct BfsState {
    explored: HashMap<usize, Vec<usize>>,
    seen: HashSet<usize>,
    recorded: usize,
}

impl BfsState {
    fn record(&mut self, history: &[Round<usize, Vec<usize>>]) {
        for round in &history[self.recorded..] {
            for (&v, list) in round.queries.iter().zip(&round.answers) {
                self.explored.insert(v, list.clone());
            }
        }
        self.recorded = history.len();
    }
}

impl Strategy for BfsCycleTester {
    type Query = usize;
    type Answer = Vec<usize>;
    type State = BfsState;

    fn budget(&self) -> RoundBudget {
        let ball = (0..=self.k as u32).fold(0usize, |acc, j| {
            acc.saturating_add(self.d.saturating_pow(j))
        });
        RoundBudget::round_adaptive(self.k, self.sources.saturating_mul(ball).min(self.n))
            .expect("positive budget")
    }

    fn start(&self, _: &mut SimRng) -> BfsState {
        BfsState::default()
    }

    fn next_batch(
        &self,
        state: &mut BfsState,
        history: &[Round<usize, Vec<usize>>],
        rng: &mut SimRng,
    ) -> Option<Vec<usize>> {
        state.record(history);
        let Some(last) = history.last() else {
            let mut batch = Vec::with_capacity(self.sources);
            for _ in 0..self.sources {
                let v = rng.gen_range(0..self.n);
                if state.seen.insert(v) {
                    batch.push(v);
                }
            }
            return Some(batch);
        };
        if history.len() > self.k {
            return None;
        }
        let mut batch = Vec::new();
        for &u in last.answers.iter().flatten() {
            if state.seen.insert(u) {
                batch.push(u);
            }
        }
        (!batch.is_empty()).then_some(batch)
    }

    fn finish(
        &self,
        mut state: BfsState,
        history: &[Round<usize, Vec<usize>>],
        _: &mut SimRng,
    ) -> Verdict {
        state.record(history);
        let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
        for (&v, list) in &state.explored {
            for &u in list {
                adjacency.entry(v).or_default().push(u);
                adjacency.entry(u).or_default().push(v);
            }
        }
        for list in adjacency.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let mut vertices: Vec<usize> = adjacency.keys().copied().collect();
        vertices.sort_unstable();
        let cycle = shortest_cycle_leq(vertices, |v| adjacency[&v].iter().copied(), self.t);
        Verdict::from_acceptance(cycle.is_none())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BoundedDegreeGraph, GraphOracle};
    use crate::query::run;

    fn cycle(n: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::from_edges(n, 2, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn triangle_is_always_rejected() {
        let g = cycle(3);
        let t = BfsCycleTester::new(3, 1, 3, 0.5, 2).unwrap();
        for seed in 0..50 {
            let tr = run(&t, &mut GraphOracle::new(&g), &t.budget(), seed).unwrap();
            assert_eq!(tr.verdict, Verdict::Reject);
        }
    }

    #[test]
    fn hexagon_is_always_accepted() {
        let g = cycle(6);
        let t = BfsCycleTester::new(6, 1, 3, 0.5, 2).unwrap();
        for seed in 0..50 {
            let tr = run(&t, &mut GraphOracle::new(&g), &t.budget(), seed).unwrap();
            assert_eq!(tr.verdict, Verdict::Accept);
            assert!(tr.rounds_used <= 2);
        }
    }

    #[test]
    fn target_must_fit_the_depth() {
        assert!(BfsCycleTester::new(10, 1, 5, 0.5, 2).is_err());
        assert!(BfsCycleTester::new(10, 1, 4, 0.5, 2).is_ok());
        assert!(BfsCycleTester::new(10, 1, 4, 0.0, 2).is_err());
    }

    #[test]
    fn depth_two_bfs_detects_a_six_cycle_from_one_source() {
        let g = cycle(6);
        let t = BfsCycleTester::with_sources(6, 2, 6, 1, 2).unwrap();
        let tr = run(&t, &mut GraphOracle::new(&g), &t.budget(), 1).unwrap();
        assert_eq!(tr.verdict, Verdict::Reject);
    }
}
