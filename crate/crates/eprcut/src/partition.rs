//! Kernighan–Lin bipartitioning with imbalanced subset sizes and warm starts,
//! a recursive k-way extension, and an exhaustive oracle for small instances.
//!
//! The KL refinement runs classic passes: tentatively apply the best-gain
//! swap or single-node move (with locking), keep the best prefix, repeat
//! until no positive prefix exists. Single-node moves are what supports
//! imbalanced subset sizes; they are feasible whenever the destination side
//! has slack. Gains use the standard definition
//! `D(v) = external weight - internal weight`,
//! `gain(a, b) = D(a) + D(b) - 2 w(a, b)`.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Total assignment of qubits to QPU labels under per-QPU capacities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    capacities: Vec<usize>,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        let mut sizes = vec![0usize; capacities.len()];
        for &qpu in &assignment {
            if qpu >= capacities.len() {
                return Err(Error::invalid(format!(
                    "QPU label {qpu} out of range ({} QPUs)",
                    capacities.len()
                )));
            }
            sizes[qpu] += 1;
        }
        for (qpu, (&size, &cap)) in sizes.iter().zip(&capacities).enumerate() {
            if size > cap {
                return Err(Error::invalid(format!(
                    "QPU {qpu} holds {size} qubits, capacity is {cap}"
                )));
            }
        }
        Ok(Partition {
            assignment,
            capacities,
        })
    }

    /// Fills QPUs in qubit-index order up to capacity.
    pub fn sequential(num_qubits: usize, capacities: &[usize]) -> Result<Self> {
        let total: usize = capacities.iter().sum();
        if total < num_qubits {
            return Err(Error::InfeasibleCapacities {
                total,
                required: num_qubits,
            });
        }
        let mut assignment = Vec::with_capacity(num_qubits);
        let mut qpu = 0;
        let mut used = 0;
        for _ in 0..num_qubits {
            while used == capacities[qpu] {
                qpu += 1;
                used = 0;
            }
            assignment.push(qpu);
            used += 1;
        }
        Partition::new(assignment, capacities.to_vec())
    }

    pub fn num_qubits(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_qpus(&self) -> usize {
        self.capacities.len()
    }

    pub fn qpu_of(&self, qubit: usize) -> usize {
        self.assignment[qubit]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacities
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.capacities.len()];
        for &qpu in &self.assignment {
            sizes[qpu] += 1;
        }
        sizes
    }

    /// Number of qubits whose QPU differs between the two assignments.
    pub fn hamming_distance(&self, other: &Partition) -> usize {
        assert_eq!(self.num_qubits(), other.num_qubits());
        self.assignment
            .iter()
            .zip(&other.assignment)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Seed and restart budget for the KL family. Restarts only apply when no
/// warm-start partition is supplied: the first candidate is the sequential
/// fill, the rest are seeded random shuffles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KlConfig {
    pub restarts: u32,
    pub seed: u64,
}

impl Default for KlConfig {
    fn default() -> Self {
        KlConfig {
            restarts: 8,
            seed: 0,
        }
    }
}

impl KlConfig {
    pub fn with_seed(seed: u64) -> Self {
        KlConfig {
            seed,
            ..Default::default()
        }
    }
}

/// KL bipartition with subset capacities `(n1, n2)`. When `initial` is given
/// it is used as the sole starting point (warm start); otherwise the restart
/// schedule from `config` applies. The result never cuts more than the best
/// starting partition.
pub fn kl_bipartition(
    graph: &WeightedGraph,
    sizes: (usize, usize),
    initial: Option<&Partition>,
    config: &KlConfig,
) -> Result<Partition> {
    let n = graph.num_nodes();
    if sizes.0 + sizes.1 < n {
        return Err(Error::InfeasibleCapacities {
            total: sizes.0 + sizes.1,
            required: n,
        });
    }
    let warm = match initial {
        Some(p) => {
            if p.num_qubits() != n || p.num_qpus() != 2 {
                return Err(Error::invalid("initial partition shape mismatch"));
            }
            let s = p.sizes();
            if s[0] > sizes.0 || s[1] > sizes.1 {
                return Err(Error::invalid("initial partition violates subset sizes"));
            }
            Some(p.assignment().iter().map(|&q| q as u8).collect::<Vec<u8>>())
        }
        None => None,
    };
    let core = KlCore::new(graph, (sizes.0, sizes.1));
    let sides = core.best_over_restarts(warm, config, config.seed);
    Partition::new(
        sides.into_iter().map(|s| s as usize).collect(),
        vec![sizes.0, sizes.1],
    )
}

/// Recursive k-way partitioning: the QPU label range is split in half (the
/// left group takes the ceiling), the node set is bipartitioned with subset
/// capacities equal to the group capacity sums, and each side recurses.
pub fn kl_kway(
    graph: &WeightedGraph,
    capacities: &[usize],
    initial: Option<&Partition>,
    config: &KlConfig,
) -> Result<Partition> {
    let n = graph.num_nodes();
    let total: usize = capacities.iter().sum();
    if capacities.is_empty() || total < n {
        return Err(Error::InfeasibleCapacities {
            total,
            required: n,
        });
    }
    if let Some(p) = initial {
        if p.num_qubits() != n || p.capacities() != capacities {
            return Err(Error::invalid("initial partition shape mismatch"));
        }
    }
    let mut assignment = vec![0usize; n];
    let nodes: Vec<usize> = (0..n).collect();
    let qpus: Vec<usize> = (0..capacities.len()).collect();
    kway_recurse(
        graph,
        &nodes,
        &qpus,
        capacities,
        initial,
        config,
        1,
        &mut assignment,
    )?;
    Partition::new(assignment, capacities.to_vec())
}

#[allow(clippy::too_many_arguments)]
fn kway_recurse(
    graph: &WeightedGraph,
    nodes: &[usize],
    qpus: &[usize],
    capacities: &[usize],
    initial: Option<&Partition>,
    config: &KlConfig,
    path: u64,
    assignment: &mut [usize],
) -> Result<()> {
    if qpus.len() == 1 {
        let qpu = qpus[0];
        if nodes.len() > capacities[qpu] {
            return Err(Error::InfeasibleCapacities {
                total: capacities[qpu],
                required: nodes.len(),
            });
        }
        for &node in nodes {
            assignment[node] = qpu;
        }
        return Ok(());
    }

    let half = qpus.len().div_ceil(2);
    let (left, right) = qpus.split_at(half);
    let cap_left: usize = left.iter().map(|&q| capacities[q]).sum();
    let cap_right: usize = right.iter().map(|&q| capacities[q]).sum();

    // Induced subgraph on `nodes` (local indices follow `nodes` order).
    let mut local = WeightedGraph::new(nodes.len());
    let index_of: std::collections::BTreeMap<usize, usize> =
        nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for (u, v, w) in graph.edges() {
        if let (Some(&lu), Some(&lv)) = (index_of.get(&u), index_of.get(&v)) {
            local.add_weight(lu, lv, w);
        }
    }

    // Warm-start side labels from the caller's partition. Nodes whose initial
    // QPU falls outside this subtree are filled in index order wherever slack
    // remains.
    let warm: Option<Vec<u8>> = initial.map(|p| {
        let mut sides = vec![u8::MAX; nodes.len()];
        let mut counts = [0usize; 2];
        for (i, &node) in nodes.iter().enumerate() {
            let qpu = p.qpu_of(node);
            if left.contains(&qpu) {
                sides[i] = 0;
                counts[0] += 1;
            } else if right.contains(&qpu) {
                sides[i] = 1;
                counts[1] += 1;
            }
        }
        for side in sides.iter_mut() {
            if *side == u8::MAX {
                if counts[0] < cap_left {
                    *side = 0;
                    counts[0] += 1;
                } else {
                    *side = 1;
                    counts[1] += 1;
                }
            }
        }
        sides
    });

    let core = KlCore::new(&local, (cap_left, cap_right));
    let seed = config.seed ^ path.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let sides = core.best_over_restarts(warm, config, seed);

    let left_nodes: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| sides[i] == 0)
        .map(|(_, &v)| v)
        .collect();
    let right_nodes: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| sides[i] == 1)
        .map(|(_, &v)| v)
        .collect();

    kway_recurse(
        graph,
        &left_nodes,
        left,
        capacities,
        initial,
        config,
        path * 2,
        assignment,
    )?;
    kway_recurse(
        graph,
        &right_nodes,
        right,
        capacities,
        initial,
        config,
        path * 2 + 1,
        assignment,
    )?;
    Ok(())
}

/// Dense-weight working state for one KL instance.
struct KlCore {
    n: usize,
    caps: (usize, usize),
    weights: Vec<f64>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl KlCore {
    fn new(graph: &WeightedGraph, caps: (usize, usize)) -> Self {
        let n = graph.num_nodes();
        let mut weights = vec![0.0; n * n];
        let mut adjacency = vec![Vec::new(); n];
        for (u, v, w) in graph.edges() {
            weights[u * n + v] = w;
            weights[v * n + u] = w;
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        KlCore {
            n,
            caps,
            weights,
            adjacency,
        }
    }

    fn w(&self, a: usize, b: usize) -> f64 {
        self.weights[a * self.n + b]
    }

    fn sequential_sides(&self) -> Vec<u8> {
        let s0 = self.caps.0.min(self.n);
        (0..self.n).map(|i| u8::from(i >= s0)).collect()
    }

    fn random_sides(&self, rng: &mut ChaCha8Rng) -> Vec<u8> {
        let s0 = self.caps.0.min(self.n);
        let mut order: Vec<usize> = (0..self.n).collect();
        order.shuffle(rng);
        let mut sides = vec![1u8; self.n];
        for &node in order.iter().take(s0) {
            sides[node] = 0;
        }
        sides
    }

    /// Runs the restart schedule and returns the best side vector by
    /// `(cut, lexicographic assignment)`. A warm start suppresses restarts.
    fn best_over_restarts(&self, warm: Option<Vec<u8>>, config: &KlConfig, seed: u64) -> Vec<u8> {
        if self.n == 0 {
            return Vec::new();
        }
        let mut candidates: Vec<Vec<u8>> = Vec::new();
        match warm {
            Some(sides) => candidates.push(sides),
            None => {
                candidates.push(self.sequential_sides());
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 1..config.restarts.max(1) {
                    candidates.push(self.random_sides(&mut rng));
                }
            }
        }
        let mut best: Option<(f64, Vec<u8>)> = None;
        for mut sides in candidates {
            let cut = self.refine(&mut sides);
            let better = match &best {
                None => true,
                Some((bc, bs)) => cut < *bc || (cut == *bc && sides < *bs),
            };
            if better {
                best = Some((cut, sides));
            }
        }
        best.unwrap().1
    }

    fn cut_of(&self, sides: &[u8]) -> f64 {
        let mut cut = 0.0;
        for u in 0..self.n {
            for &(v, w) in &self.adjacency[u] {
                if v > u && sides[u] != sides[v] {
                    cut += w;
                }
            }
        }
        cut
    }

    /// One full KL refinement. Returns the final cut.
    fn refine(&self, sides: &mut [u8]) -> f64 {
        let mut cut = self.cut_of(sides);
        loop {
            let gain = self.one_pass(sides);
            if gain <= 0.0 {
                break;
            }
            cut -= gain;
        }
        debug_assert!((cut - self.cut_of(sides)).abs() < 1e-6);
        cut
    }

    /// One pass: greedy tentative actions with locking, then rollback to the
    /// best prefix. Returns the committed gain (0 when the pass failed).
    fn one_pass(&self, sides: &mut [u8]) -> f64 {
        let n = self.n;
        let mut locked = vec![false; n];
        let mut d = vec![0.0; n];
        for u in 0..n {
            for &(v, w) in &self.adjacency[u] {
                if sides[u] == sides[v] {
                    d[u] -= w;
                } else {
                    d[u] += w;
                }
            }
        }
        let mut sizes = [0usize; 2];
        for &s in sides.iter() {
            sizes[s as usize] += 1;
        }

        // Each group is one swap (two flips) or one move (one flip).
        let mut flips: Vec<usize> = Vec::new();
        let mut groups: Vec<usize> = Vec::new(); // prefix length in flips after each group
        let mut cumulative = 0.0;
        let mut best_gain = 0.0;
        let mut best_prefix = 0; // index into `groups`

        loop {
            let action = self.select_action(sides, &locked, &d, &sizes);
            let Some((gain, action)) = action else { break };
            match action {
                Action::Swap(a, b) => {
                    self.apply_flip(a, sides, &mut d, &mut sizes);
                    self.apply_flip(b, sides, &mut d, &mut sizes);
                    locked[a] = true;
                    locked[b] = true;
                    flips.push(a);
                    flips.push(b);
                }
                Action::Move(v) => {
                    self.apply_flip(v, sides, &mut d, &mut sizes);
                    locked[v] = true;
                    flips.push(v);
                }
            }
            cumulative += gain;
            groups.push(flips.len());
            if cumulative > best_gain {
                best_gain = cumulative;
                best_prefix = groups.len();
            }
        }

        // Roll back everything past the best prefix.
        let keep = if best_prefix == 0 { 0 } else { groups[best_prefix - 1] };
        for &v in flips[keep..].iter().rev() {
            self.apply_flip(v, sides, &mut d, &mut sizes);
        }
        best_gain
    }

    /// Best-gain candidate: all feasible swaps and single-node moves. Ties go
    /// to the lexicographically smallest node pair (moves order after swaps
    /// on the same first index).
    fn select_action(
        &self,
        sides: &[u8],
        locked: &[bool],
        d: &[f64],
        sizes: &[usize; 2],
    ) -> Option<(f64, Action)> {
        // Unlocked nodes per side, sorted by D descending (index ascending on
        // ties) so the pair scan can stop early: gain <= D(a) + D(b).
        let mut by_side: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for v in 0..self.n {
            if !locked[v] {
                by_side[sides[v] as usize].push(v);
            }
        }
        for side in by_side.iter_mut() {
            side.sort_unstable_by(|&a, &b| {
                d[b].partial_cmp(&d[a]).unwrap().then(a.cmp(&b))
            });
        }

        let mut best: Option<(f64, (usize, usize), Action)> = None;
        let consider = |best: &mut Option<(f64, (usize, usize), Action)>,
                        gain: f64,
                        key: (usize, usize),
                        action: Action| {
            let replace = match best {
                None => true,
                Some((bg, bk, _)) => gain > *bg || (gain == *bg && key < *bk),
            };
            if replace {
                *best = Some((gain, key, action));
            }
        };

        for &a in &by_side[0] {
            if let Some((bg, _, _)) = best {
                if d[a] + by_side[1].first().map_or(f64::NEG_INFINITY, |&b| d[b]) < bg {
                    break;
                }
            }
            for &b in &by_side[1] {
                let bound = d[a] + d[b];
                if let Some((bg, _, _)) = best {
                    if bound < bg {
                        break;
                    }
                }
                let gain = d[a] + d[b] - 2.0 * self.w(a, b);
                let key = if a < b { (a, b) } else { (b, a) };
                consider(&mut best, gain, key, Action::Swap(a, b));
            }
        }

        for side in 0..2 {
            let dest = 1 - side;
            if sizes[dest] >= [self.caps.0, self.caps.1][dest] {
                continue;
            }
            for &v in &by_side[side] {
                consider(&mut best, d[v], (v, usize::MAX), Action::Move(v));
            }
        }

        best.map(|(gain, _, action)| (gain, action))
    }

    /// Moves `v` to the other side, updating sizes and D values.
    fn apply_flip(&self, v: usize, sides: &mut [u8], d: &mut [f64], sizes: &mut [usize; 2]) {
        let old = sides[v] as usize;
        sides[v] = 1 - sides[v];
        sizes[old] -= 1;
        sizes[1 - old] += 1;
        d[v] = -d[v];
        for &(u, w) in &self.adjacency[v] {
            if u == v {
                continue;
            }
            if sides[u] as usize == old {
                // Edge became external.
                d[u] += 2.0 * w;
            } else {
                d[u] -= 2.0 * w;
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Action {
    Swap(usize, usize),
    Move(usize),
}

/// Global minimum cut over all capacity-respecting assignments. QPU labels
/// are physical identities, so no symmetry is factored out. Guarded by a
/// 10^7 assignment-count budget.
pub fn exhaustive_kway(graph: &WeightedGraph, capacities: &[usize]) -> Result<(Partition, f64)> {
    const GUARD: u128 = 10_000_000;
    let n = graph.num_nodes();
    let total: usize = capacities.iter().sum();
    if capacities.is_empty() || total < n {
        return Err(Error::InfeasibleCapacities {
            total,
            required: n,
        });
    }
    let count = assignment_count(n, capacities);
    if count > GUARD {
        return Err(Error::InstanceTooLarge(format!(
            "{count} capacity-respecting assignments exceed the 10^7 oracle guard"
        )));
    }

    let m = capacities.len();
    let mut weights = vec![0.0; n * n];
    for (u, v, w) in graph.edges() {
        weights[u * n + v] = w;
        weights[v * n + u] = w;
    }

    let mut assignment = vec![0usize; n];
    let mut sizes = vec![0usize; m];
    let mut best: Option<(f64, Vec<usize>)> = None;

    fn dfs(
        node: usize,
        n: usize,
        m: usize,
        weights: &[f64],
        capacities: &[usize],
        assignment: &mut Vec<usize>,
        sizes: &mut Vec<usize>,
        partial: f64,
        best: &mut Option<(f64, Vec<usize>)>,
    ) {
        if let Some((bc, _)) = best {
            if partial >= *bc {
                return;
            }
        }
        if node == n {
            match best {
                Some((bc, ba)) if partial < *bc => {
                    *bc = partial;
                    ba.clone_from(assignment);
                }
                None => *best = Some((partial, assignment.clone())),
                _ => {}
            }
            return;
        }
        for qpu in 0..m {
            if sizes[qpu] == capacities[qpu] {
                continue;
            }
            let mut delta = 0.0;
            for prev in 0..node {
                if assignment[prev] != qpu {
                    delta += weights[node * n + prev];
                }
            }
            assignment[node] = qpu;
            sizes[qpu] += 1;
            dfs(
                node + 1,
                n,
                m,
                weights,
                capacities,
                assignment,
                sizes,
                partial + delta,
                best,
            );
            sizes[qpu] -= 1;
        }
    }

    dfs(
        0,
        n,
        m,
        &weights,
        capacities,
        &mut assignment,
        &mut sizes,
        0.0,
        &mut best,
    );
    let (cut, assignment) = best.expect("feasible assignment exists");
    Ok((Partition::new(assignment, capacities.to_vec())?, cut))
}

/// Number of capacity-respecting assignments of `n` distinguishable nodes,
/// saturating well past the oracle guard.
fn assignment_count(n: usize, capacities: &[usize]) -> u128 {
    const CAP: u128 = 1 << 70;
    // ways[r] = assignments of the first `k` processed QPUs using `n - r`
    // nodes... iterate QPUs accumulating choose terms.
    let mut ways = vec![0u128; n + 1];
    ways[n] = 1; // `r` nodes still unassigned
    for &cap in capacities {
        let mut next = vec![0u128; n + 1];
        for r in 0..=n {
            if ways[r] == 0 {
                continue;
            }
            for take in 0..=cap.min(r) {
                let c = binomial(r, take);
                let v = ways[r].saturating_mul(c).min(CAP);
                next[r - take] = (next[r - take] + v).min(CAP);
            }
        }
        ways = next;
    }
    ways[0]
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_from(edges: &[(usize, usize, f64)], n: usize) -> WeightedGraph {
        let mut g = WeightedGraph::new(n);
        for &(u, v, w) in edges {
            g.add_weight(u, v, w);
        }
        g
    }

    #[test]
    fn sequential_fill_respects_capacities() {
        let p = Partition::sequential(5, &[2, 2, 1]).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 1, 1, 2]);
        assert!(Partition::sequential(5, &[2, 2]).is_err());
    }

    #[test]
    fn partition_new_rejects_overflow() {
        assert!(Partition::new(vec![0, 0, 0], vec![2, 1]).is_err());
        assert!(Partition::new(vec![0, 2], vec![1, 1]).is_err());
    }

    #[test]
    fn bipartition_finds_two_cluster_cut() {
        let g = graph_from(&[(0, 1, 3.0), (2, 3, 3.0), (1, 2, 1.0)], 4);
        let p = kl_bipartition(&g, (2, 2), None, &KlConfig::default()).unwrap();
        assert_eq!(g.cut_weight(&p).unwrap(), 1.0);
        assert_eq!(p.qpu_of(0), p.qpu_of(1));
        assert_eq!(p.qpu_of(2), p.qpu_of(3));
    }

    #[test]
    fn bipartition_on_edgeless_graph_cuts_nothing() {
        let g = WeightedGraph::new(5);
        let p = kl_bipartition(&g, (3, 2), None, &KlConfig::default()).unwrap();
        assert_eq!(g.cut_weight(&p).unwrap(), 0.0);
    }

    #[test]
    fn imbalanced_k4_cut_is_three() {
        let mut g = WeightedGraph::new(4);
        for u in 0..4 {
            for v in (u + 1)..4 {
                g.add_weight(u, v, 1.0);
            }
        }
        let p = kl_bipartition(&g, (1, 3), None, &KlConfig::default()).unwrap();
        assert_eq!(g.cut_weight(&p).unwrap(), 3.0);
    }

    #[test]
    fn kway_base_case_matches_bipartition() {
        let g = graph_from(&[(0, 1, 3.0), (2, 3, 3.0), (1, 2, 1.0)], 4);
        let config = KlConfig::default();
        let two = kl_kway(&g, &[2, 2], None, &config).unwrap();
        let bi = kl_bipartition(&g, (2, 2), None, &config).unwrap();
        assert_eq!(two, bi);
    }

    #[test]
    fn kway_separates_disjoint_triangles() {
        // Four unit triangles with interleaved labels.
        let mut g = WeightedGraph::new(12);
        for t in 0..4 {
            let (a, b, c) = (t, t + 4, t + 8);
            g.add_weight(a, b, 1.0);
            g.add_weight(b, c, 1.0);
            g.add_weight(a, c, 1.0);
        }
        let p = kl_kway(&g, &[3, 3, 3, 3], None, &KlConfig::default()).unwrap();
        assert_eq!(g.cut_weight(&p).unwrap(), 0.0);
        for t in 0..4 {
            assert_eq!(p.qpu_of(t), p.qpu_of(t + 4));
            assert_eq!(p.qpu_of(t), p.qpu_of(t + 8));
        }
    }

    #[test]
    fn kway_singleton_path_cuts_everything() {
        let g = graph_from(&[(0, 1, 1.0), (1, 2, 1.0)], 3);
        let p = kl_kway(&g, &[1, 1, 1], None, &KlConfig::default()).unwrap();
        assert_eq!(g.cut_weight(&p).unwrap(), 2.0);
    }

    #[test]
    fn warm_start_never_degrades() {
        let g = graph_from(&[(0, 1, 5.0), (1, 2, 1.0), (2, 3, 5.0)], 4);
        let initial = Partition::new(vec![0, 1, 0, 1], vec![2, 2]).unwrap();
        let initial_cut = g.cut_weight(&initial).unwrap();
        let p = kl_bipartition(&g, (2, 2), Some(&initial), &KlConfig::default()).unwrap();
        assert!(g.cut_weight(&p).unwrap() <= initial_cut);
    }

    #[test]
    fn exhaustive_matches_hand_enumeration() {
        let g = graph_from(&[(0, 1, 2.0), (1, 2, 1.0)], 3);
        let (_, cut) = exhaustive_kway(&g, &[2, 1]).unwrap();
        assert_eq!(cut, 1.0);

        let empty = WeightedGraph::new(4);
        let (_, cut) = exhaustive_kway(&empty, &[2, 2]).unwrap();
        assert_eq!(cut, 0.0);

        let mut k5 = WeightedGraph::new(5);
        for u in 0..5 {
            for v in (u + 1)..5 {
                k5.add_weight(u, v, 1.0);
            }
        }
        let (_, cut) = exhaustive_kway(&k5, &[3, 2]).unwrap();
        assert_eq!(cut, 6.0);
    }

    #[test]
    fn exhaustive_guard_trips_on_large_instances() {
        let g = WeightedGraph::new(40);
        let err = exhaustive_kway(&g, &[20, 20]).unwrap_err();
        assert!(matches!(err, Error::InstanceTooLarge(_)));
    }

    #[test]
    fn kl_is_deterministic() {
        let g = graph_from(&[(0, 1, 1.0), (1, 2, 2.0), (0, 3, 1.0), (2, 3, 4.0)], 4);
        let config = KlConfig::default();
        let a = kl_kway(&g, &[2, 2], None, &config).unwrap();
        let b = kl_kway(&g, &[2, 2], None, &config).unwrap();
        assert_eq!(a, b);
    }
}
