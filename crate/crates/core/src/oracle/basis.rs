//! Product basis `|m⟩_spin ⊗ |n₁ … n_N⟩` restricted to the sectors of the
//! conserved charge `Q = m − Σ nᵢ` that the initial state occupies.

use std::collections::HashMap;

/// `key[0]` is the spin level, `key[1..]` are Stokes photon numbers.
pub type Key = Vec<u32>;

#[derive(Debug, Clone)]
pub struct FockBasis {
    states: Vec<Key>,
    index: HashMap<Key, usize>,
    pub n_stokes: usize,
    /// Largest spin level kept.
    pub spin_max: u32,
    /// Largest photon number kept per Stokes mode.
    pub fock_max: u32,
}

impl FockBasis {
    /// All states with `m − Σn ∈ charges`, `m ≤ spin_max`, `nᵢ ≤ fock_max`.
    pub fn new(n_stokes: usize, spin_max: u32, fock_max: u32, charges: &[u32]) -> Self {
        let mut states = Vec::new();
        let mut photons = vec![0u32; n_stokes];
        for &q in charges.iter().filter(|&&q| q <= spin_max) {
            enumerate(&mut photons, 0, spin_max - q, fock_max, &mut |ns: &[u32]| {
                let total: u32 = ns.iter().sum();
                let mut key = Vec::with_capacity(n_stokes + 1);
                key.push(q + total);
                key.extend_from_slice(ns);
                states.push(key);
            });
        }
        let index = states.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Self { states, index, n_stokes, spin_max, fock_max }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &Key {
        &self.states[i]
    }

    pub fn states(&self) -> &[Key] {
        &self.states
    }

    pub fn find(&self, key: &Key) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// Visits photon tuples with `Σ ≤ budget` and each entry `≤ fock_max`.
fn enumerate(ns: &mut [u32], pos: usize, budget: u32, fock_max: u32, f: &mut impl FnMut(&[u32])) {
    if pos == ns.len() {
        f(ns);
        return;
    }
    for n in 0..=budget.min(fock_max) {
        ns[pos] = n;
        enumerate(ns, pos + 1, budget - n, fock_max, f);
    }
    ns[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        // one Stokes mode, Q = 0: m = n ≤ 10
        assert_eq!(FockBasis::new(1, 10, 10, &[0]).len(), 11);
        // two Stokes modes: n₁ + n₂ ≤ 10
        assert_eq!(FockBasis::new(2, 10, 10, &[0]).len(), 66);
        // Q = 2 leaves budget 8
        assert_eq!(FockBasis::new(2, 10, 10, &[0, 2]).len(), 66 + 45);
        // photon cap binds
        assert_eq!(FockBasis::new(1, 10, 3, &[0, 5]).len(), 4 + 4);
    }

    #[test]
    fn lookup() {
        let b = FockBasis::new(2, 6, 6, &[0, 2]);
        for (i, k) in b.states().iter().enumerate() {
            assert_eq!(b.find(k), Some(i));
            let q = k[0] as i64 - k[1..].iter().map(|&n| n as i64).sum::<i64>();
            assert!(q == 0 || q == 2);
        }
        assert_eq!(b.find(&vec![1, 0, 0]), None);
    }
}
