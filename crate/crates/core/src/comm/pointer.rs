use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldVector};

/// `A(j)` is `v_j` on Alice's side, `B(j)` is `u_j` on Bob's side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vertex {
    A(usize),
    B(usize),
}

/// Maps `χ_A: V_A -> V_B` (known to Alice) and `χ_B: V_B -> V_A` (known to
/// Bob) on two sides of `h` vertices each; the walk starts at `v_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointerInstance {
    chi_a: Vec<usize>,
    chi_b: Vec<usize>,
}

impl PointerInstance {
    pub fn new(chi_a: Vec<usize>, chi_b: Vec<usize>) -> Result<Self> {
        let h = chi_a.len();
        if h == 0 || chi_b.len() != h {
            return Err(Error::InvalidParameter(
                "both sides need the same positive size".into(),
            ));
        }
        if let Some(&bad) = chi_a.iter().chain(&chi_b).find(|&&j| j >= h) {
            return Err(Error::IndexOutOfRange { index: bad, len: h });
        }
        Ok(PointerInstance { chi_a, chi_b })
    }

    pub fn random<R: Rng + ?Sized>(h: usize, rng: &mut R) -> Result<Self> {
        let chi_a = (0..h).map(|_| rng.gen_range(0..h)).collect();
        let chi_b = (0..h).map(|_| rng.gen_range(0..h)).collect();
        Self::new(chi_a, chi_b)
    }

    pub fn h(&self) -> usize {
        self.chi_a.len()
    }

    pub fn chi_a(&self) -> &[usize] {
        &self.chi_a
    }

    pub fn chi_b(&self) -> &[usize] {
        &self.chi_b
    }

    pub fn chi(&self, w: Vertex) -> Vertex {
        match w {
            Vertex::A(j) => Vertex::B(self.chi_a[j]),
            Vertex::B(j) => Vertex::A(self.chi_b[j]),
        }
    }
}

/// `label(v_j) = j`, `label(u_j) = h + j`.
pub fn label(w: Vertex, h: usize) -> usize {
    match w {
        Vertex::A(j) => j,
        Vertex::B(j) => h + j,
    }
}

/// `χ^(k)(v_0)`.
pub fn pi_k(instance: &PointerInstance, k: usize) -> Result<Vertex> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "pointer chains start at k = 1".into(),
        ));
    }
    Ok((0..k).fold(Vertex::A(0), |w, _| instance.chi(w)))
}

/// `x in F_n^n` with `x_{label(w)+1} = label(χ(w))` for every vertex `w`.
///
/// Coordinates past `2h` are padding set to 0; no walk from `v_0` reaches
/// them. Then `g_j(x) = label(π_{j+1})` for every `j >= 0`.
pub fn embed_instance(instance: &PointerInstance, n: u64) -> Result<FieldVector> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    let h = instance.h();
    if (n as usize) < 2 * h {
        return Err(Error::InvalidParameter(format!(
            "F_{n} cannot hold {} vertices",
            2 * h
        )));
    }
    let mut x = vec![0u64; n as usize];
    for j in 0..h {
        x[label(Vertex::A(j), h)] = label(instance.chi(Vertex::A(j)), h) as u64;
        x[label(Vertex::B(j), h)] = label(instance.chi(Vertex::B(j)), h) as u64;
    }
    FieldVector::new(n, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::g_iter;

    fn example() -> PointerInstance {
        PointerInstance::new(vec![1, 0], vec![0, 1]).unwrap()
    }

    #[test]
    fn pointer_examples() {
        let inst = example();
        assert_eq!(pi_k(&inst, 1).unwrap(), Vertex::B(1));
        assert_eq!(pi_k(&inst, 2).unwrap(), Vertex::A(1));
        assert!(pi_k(&inst, 0).is_err());
    }

    #[test]
    fn embedding_example() {
        let inst = example();
        let x = embed_instance(&inst, 5).unwrap();
        assert_eq!(x.entries(), &[3, 2, 0, 1, 0]);
        assert_eq!(g_iter(&x, 0).unwrap().last(), label(Vertex::B(1), 2) as u64);
        assert!(matches!(embed_instance(&inst, 4), Err(Error::NotPrime(4))));
        assert!(embed_instance(&inst, 3).is_err());
    }

    #[test]
    fn two_cycle_alternates() {
        // v_0 -> u_0 -> v_0
        let inst = PointerInstance::new(vec![0, 0], vec![0, 0]).unwrap();
        let x = embed_instance(&inst, 5).unwrap();
        let chain = g_iter(&x, 5).unwrap();
        assert_eq!(chain.values, vec![2, 0, 2, 0, 2, 0]);
    }
}
