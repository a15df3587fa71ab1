//! Exact minimum worst-case query counts of deterministic round-bounded
//! strategies, by exhaustive search over explicit function tables.
//!
//! An `r`-round strategy picks a first batch `S`, reads `x_S = a`, and then
//! runs an `(r-1)`-round strategy on the restriction `f|_{x_S = a}`. The
//! restrictions for different `a` are independent subproblems, so
//!
//! ```text
//! cost_r(f) = min_S ( |S| + max_a cost_{r-1}(f|_{x_S = a}) )
//! cost_0(f) = min { |T| : f is constant on every fiber of x -> x_T }
//! ```

use crate::error::{Error, Result};
use crate::field::{checked_pow, FunctionTable};

/// Upper limit on the estimated work `p^N (rounds + 2)^N` of an exact search.
pub const WORK_CAP: u128 = 500_000_000;

/// Minimum worst-case number of queries of a deterministic strategy with
/// `rounds` adaptive rounds that computes `table` exactly.
///
/// With `exact = false` the first batch of every round is restricted to at
/// most one coordinate; the result is then only an upper bound, but the
/// search is cheap enough for any number of rounds.
pub fn brute_force_min_queries(table: &FunctionTable, rounds: usize, exact: bool) -> Result<usize> {
    let search = Search::new(table);
    if exact {
        let work = (table.values.len() as u128)
            .saturating_mul((rounds as u128 + 2).saturating_pow(table.n as u32));
        if work > WORK_CAP {
            return Err(Error::CapExceeded {
                what: "search work p^N (rounds+2)^N",
                value: work,
                cap: WORK_CAP,
            });
        }
    }
    let mut fixed = vec![None; table.n];
    Ok(search.cost(&mut fixed, rounds, exact))
}

struct Search<'a> {
    p: u64,
    values: &'a [u8],
    /// `weights[j] = p^(N-1-j)`: coordinate `j` (0-based) in the table index.
    weights: Vec<u64>,
}

impl<'a> Search<'a> {
    fn new(table: &'a FunctionTable) -> Self {
        let n = table.n;
        let weights = (0..n)
            .map(|j| checked_pow(table.p, n - 1 - j).expect("table is enumerable"))
            .collect();
        Search {
            p: table.p,
            values: &table.values,
            weights,
        }
    }

    fn free(fixed: &[Option<u64>]) -> Vec<usize> {
        (0..fixed.len()).filter(|&j| fixed[j].is_none()).collect()
    }

    /// Calls `visit(index, digits)` for every input of the subcube; `digits`
    /// are the values of the free coordinates in order.
    fn for_each_input(
        &self,
        fixed: &[Option<u64>],
        free: &[usize],
        mut visit: impl FnMut(u64, &[u64]) -> bool,
    ) {
        let base: u64 = fixed
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v.unwrap_or(0) * w)
            .sum();
        let mut digits = vec![0u64; free.len()];
        let mut index = base;
        loop {
            if !visit(index, &digits) {
                return;
            }
            // odometer increment over the free coordinates
            let mut pos = free.len();
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                let w = self.weights[free[pos]];
                if digits[pos] + 1 < self.p {
                    digits[pos] += 1;
                    index += w;
                    break;
                }
                index -= digits[pos] * w;
                digits[pos] = 0;
            }
        }
    }

    fn is_constant(&self, fixed: &[Option<u64>], free: &[usize]) -> bool {
        let mut first = None;
        let mut constant = true;
        self.for_each_input(fixed, free, |index, _| {
            let v = self.values[index as usize];
            match first {
                None => first = Some(v),
                Some(f) if f != v => constant = false,
                _ => {}
            }
            constant
        });
        constant
    }

    /// Whether the subfunction is determined by the free coordinates at
    /// positions `chosen` (indices into `free`).
    fn determined_by(&self, fixed: &[Option<u64>], free: &[usize], chosen: &[usize]) -> bool {
        let fibers = checked_pow(self.p, chosen.len()).expect("small subset") as usize;
        let mut seen = vec![u8::MAX; fibers];
        let mut ok = true;
        self.for_each_input(fixed, free, |index, digits| {
            let key = chosen.iter().fold(0u64, |acc, &c| acc * self.p + digits[c]) as usize;
            let v = self.values[index as usize];
            if seen[key] == u8::MAX {
                seen[key] = v;
            } else if seen[key] != v {
                ok = false;
            }
            ok
        });
        ok
    }

    fn cost_nonadaptive(&self, fixed: &[Option<u64>]) -> usize {
        let free = Self::free(fixed);
        if self.is_constant(fixed, &free) {
            return 0;
        }
        for size in 1..free.len() {
            let mut found = false;
            for_each_subset(free.len(), size, |chosen| {
                found = self.determined_by(fixed, &free, chosen);
                !found
            });
            if found {
                return size;
            }
        }
        free.len()
    }

    fn cost(&self, fixed: &mut Vec<Option<u64>>, rounds: usize, exact: bool) -> usize {
        if rounds == 0 {
            return self.cost_nonadaptive(fixed);
        }
        // An empty first batch leaves one round fewer.
        let mut best = self.cost(fixed, rounds - 1, exact);
        if best == 0 {
            return 0;
        }
        let free = Self::free(fixed);
        let max_first = if exact { free.len() } else { 1 };
        for size in 1..=max_first.min(free.len()) {
            if size >= best {
                break;
            }
            for_each_subset(free.len(), size, |chosen| {
                let coords: Vec<usize> = chosen.iter().map(|&c| free[c]).collect();
                let mut worst = size;
                let mut assignment = vec![0u64; size];
                'answers: loop {
                    for (&c, &a) in coords.iter().zip(&assignment) {
                        fixed[c] = Some(a);
                    }
                    worst = worst.max(size + self.cost(fixed, rounds - 1, exact));
                    if worst >= best {
                        break 'answers;
                    }
                    let mut pos = size;
                    loop {
                        if pos == 0 {
                            break 'answers;
                        }
                        pos -= 1;
                        if assignment[pos] + 1 < self.p {
                            assignment[pos] += 1;
                            break;
                        }
                        assignment[pos] = 0;
                    }
                }
                for &c in &coords {
                    fixed[c] = None;
                }
                best = best.min(worst);
                true
            });
        }
        best
    }
}

/// Visits every `size`-subset of `0..n` in lexicographic order until `visit`
/// returns false.
fn for_each_subset(n: usize, size: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::{f_prime_table, f_table};

    #[test]
    fn subsets_enumerate_binomially() {
        let mut count = 0;
        for_each_subset(5, 2, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 10);
        let mut empty = 0;
        for_each_subset(3, 0, |s| {
            assert!(s.is_empty());
            empty += 1;
            true
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn f0_needs_one_query() {
        assert_eq!(
            brute_force_min_queries(&f_table(3, 0).unwrap(), 0, true).unwrap(),
            1
        );
    }

    #[test]
    fn f1_separates_rounds_at_p3() {
        let t = f_table(3, 1).unwrap();
        assert_eq!(brute_force_min_queries(&t, 0, true).unwrap(), 3);
        assert_eq!(brute_force_min_queries(&t, 1, true).unwrap(), 2);
        assert_eq!(brute_force_min_queries(&t, 2, true).unwrap(), 2);
    }

    #[test]
    fn constant_function_is_free() {
        let t = FunctionTable::from_fn(3, 3, |_| 1).unwrap();
        assert_eq!(brute_force_min_queries(&t, 0, true).unwrap(), 0);
        assert_eq!(brute_force_min_queries(&t, 2, true).unwrap(), 0);
    }

    #[test]
    fn heuristic_is_an_upper_bound() {
        let t = f_prime_table(3, 1).unwrap();
        for rounds in 0..3 {
            let exact = brute_force_min_queries(&t, rounds, true).unwrap();
            let heuristic = brute_force_min_queries(&t, rounds, false).unwrap();
            assert!(heuristic >= exact);
        }
    }

    #[test]
    fn work_cap() {
        let t = f_table(5, 1).unwrap();
        assert!(matches!(
            brute_force_min_queries(&t, 10, true),
            Err(Error::CapExceeded { .. })
        ));
        assert!(brute_force_min_queries(&t, 10, false).is_ok());
    }
}
