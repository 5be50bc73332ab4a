//! Deterministic benchmark-circuit generators.
//!
//! All generators are pure functions of their arguments: identical inputs
//! produce bit-identical gate sequences (seeding uses ChaCha, which is stable
//! across platforms).

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Quantum Fourier transform on `n` qubits.
///
/// Per target qubit `i`: an `H`, then `CR(control j, target i)` with angle
/// `pi / 2^(j-i)` for every `j > i`; the circuit ends with the usual
/// `swap(i, n-1-i)` reversal layer. Gate counts: `n` H, `n(n-1)/2` CR,
/// `floor(n/2)` SWAP.
pub fn gen_qft(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::invalid("qft needs n >= 1"));
    }
    let mut gates = Vec::with_capacity(n + n * (n - 1) / 2 + n / 2);
    for i in 0..n {
        gates.push(Gate::h(i));
        for j in (i + 1)..n {
            gates.push(Gate::cr(j, i, PI / (1u64 << (j - i)) as f64));
        }
    }
    for i in 0..n / 2 {
        gates.push(Gate::swap(i, n - 1 - i));
    }
    Circuit::new(n, gates)
}

/// QAOA-style circuit over a seeded Erdős–Rényi graph.
///
/// Each layer applies the standard 2-CX RZZ decomposition per sampled edge,
/// then an RZ mixer stand-in on every qubit. Two-qubit gate count is
/// `2 * layers * |edges|`.
pub fn gen_qaoa(n: usize, edge_prob: f64, layers: usize, seed: u64) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::invalid("qaoa needs n >= 2"));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(Error::invalid("qaoa edge_prob must be in (0, 1]"));
    }
    if layers == 0 {
        return Err(Error::invalid("qaoa needs layers >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < edge_prob {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        return Err(Error::invalid(
            "sampled QAOA graph has no edges; raise edge_prob or change the seed",
        ));
    }
    let mut gates = Vec::new();
    for _ in 0..layers {
        for &(u, v) in &edges {
            let gamma = rng.gen::<f64>() * PI;
            gates.push(Gate::cx(u, v));
            gates.push(Gate::rz(v, gamma));
            gates.push(Gate::cx(u, v));
        }
        for q in 0..n {
            gates.push(Gate::rz(q, rng.gen::<f64>() * PI));
        }
    }
    Circuit::new(n, gates)
}

/// Quantum-volume-style circuit: per layer, a seeded random permutation pairs
/// adjacent qubits and each pair gets 3 CX (the SU(4) block cost model).
/// Two-qubit gate count is `3 * depth * floor(n/2)`.
pub fn gen_qv(n: usize, depth: usize, seed: u64) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::invalid("qv needs n >= 2"));
    }
    if depth == 0 {
        return Err(Error::invalid("qv needs depth >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut gates = Vec::with_capacity(3 * depth * (n / 2));
    for _ in 0..depth {
        order.shuffle(&mut rng);
        for pair in order.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            for _ in 0..3 {
                gates.push(Gate::cx(a, b));
            }
        }
    }
    Circuit::new(n, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    #[test]
    fn qft_structure_matches_counts() {
        for n in 1..=64 {
            let c = gen_qft(n).unwrap();
            assert_eq!(c.count_kind(GateKind::H), n);
            assert_eq!(c.count_kind(GateKind::Cr), n * (n - 1) / 2);
            assert_eq!(c.count_kind(GateKind::Swap), n / 2);
        }
    }

    #[test]
    fn qft_small_cases() {
        let c1 = gen_qft(1).unwrap();
        assert_eq!(c1.gates(), &[Gate::h(0)]);

        let c3 = gen_qft(3).unwrap();
        let expected = vec![
            Gate::h(0),
            Gate::cr(1, 0, PI / 2.0),
            Gate::cr(2, 0, PI / 4.0),
            Gate::h(1),
            Gate::cr(2, 1, PI / 2.0),
            Gate::h(2),
            Gate::swap(0, 2),
        ];
        assert_eq!(c3.gates(), expected.as_slice());
    }

    #[test]
    fn qft_eight_matches_reference_counts() {
        let c = gen_qft(8).unwrap();
        assert_eq!(c.count_kind(GateKind::Cr), 28);
        assert_eq!(c.count_kind(GateKind::Swap), 4);
    }

    #[test]
    fn qaoa_forced_edges() {
        let c = gen_qaoa(2, 1.0, 1, 0).unwrap();
        assert_eq!(c.two_qubit_count(), 2);
        assert!(c.two_qubit_pairs().iter().all(|&p| p == (0, 1)));

        let c = gen_qaoa(4, 1.0, 2, 0).unwrap();
        assert_eq!(c.two_qubit_count(), 24); // 2 layers * 6 edges * 2 CX
    }

    #[test]
    fn qaoa_is_deterministic() {
        let a = gen_qaoa(50, 0.1, 1, 7).unwrap();
        let b = gen_qaoa(50, 0.1, 1, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.two_qubit_count() % 2, 0);
        assert!(a.two_qubit_count() > 0);
    }

    #[test]
    fn qv_counts_and_determinism() {
        let c = gen_qv(2, 1, 0).unwrap();
        assert_eq!(c.two_qubit_count(), 3);

        let c = gen_qv(5, 2, 0).unwrap();
        assert_eq!(c.two_qubit_count(), 12);

        let a = gen_qv(100, 100, 1).unwrap();
        let b = gen_qv(100, 100, 1).unwrap();
        assert_eq!(a.two_qubit_count(), 15000);
        assert_eq!(a, b);
    }
}
