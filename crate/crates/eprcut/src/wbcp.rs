//! Window-based circuit partitioning.
//!
//! The circuit's two-qubit gates are split into consecutive windows of `l`
//! gates. Inside a window only gate teleportation is allowed (one EPR per
//! non-local gate); at window boundaries qubits may be re-assigned via state
//! teleportation (one EPR per moved qubit), and moved qubits are never
//! required to return. Window 1 is partitioned from its plain interaction
//! graph; every later window is partitioned from a history-biased graph
//! (same-QPU pairs doubled) warm-started from the previous partition, and the
//! new partition is adopted iff
//! `cut_new + moved <= cut_old` on the *undoubled* gate counts. The doubling
//! only biases the partitioner; EPR cost is always one per non-local gate.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::{interaction_graph_with_swap_weight, window_graph_from_pairs, WeightedGraph};
use crate::partition::{kl_kway, KlConfig, Partition};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One qubit relocation at a window boundary. Costs one EPR pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveEvent {
    pub qubit: usize,
    pub from: usize,
    pub to: usize,
}

/// Whether a two-qubit gate runs within one QPU or across two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locality {
    Local,
    NonLocal,
}

/// One window of the plan: the gate index range (over two-qubit gates), the
/// partition in force, the moves that produced it, and per-gate labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub gate_range: (usize, usize),
    pub partition: Partition,
    pub moves: Vec<MoveEvent>,
    pub labels: Vec<Locality>,
}

/// Full execution plan: per-window partitions plus the EPR ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionPlan {
    pub window_length: usize,
    pub num_qubits: usize,
    pub capacities: Vec<usize>,
    pub seed: u64,
    pub restarts: u32,
    pub windows: Vec<Window>,
    pub total_ec: u64,
    /// Symmetric QPU-by-QPU matrix of EPR pairs consumed.
    pub pairwise_epr: Vec<Vec<u64>>,
}

impl ExecutionPlan {
    pub fn to_json(&self) -> String {
        let file = PlanFile {
            window_length: self.window_length,
            num_qubits: self.num_qubits,
            capacities: self.capacities.clone(),
            seed: self.seed,
            restarts: self.restarts,
            total_ec: self.total_ec,
            pairwise_epr: self.pairwise_epr.clone(),
            windows: self
                .windows
                .iter()
                .map(|w| WindowFile {
                    gate_range: w.gate_range,
                    assignment: w.partition.assignment().to_vec(),
                    moves: w.moves.clone(),
                    labels: w.labels.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plan serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PlanFile = serde_json::from_str(text)?;
        let windows = file
            .windows
            .into_iter()
            .map(|w| {
                Ok(Window {
                    gate_range: w.gate_range,
                    partition: Partition::new(w.assignment, file.capacities.clone())?,
                    moves: w.moves,
                    labels: w.labels,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExecutionPlan {
            window_length: file.window_length,
            num_qubits: file.num_qubits,
            capacities: file.capacities,
            seed: file.seed,
            restarts: file.restarts,
            windows,
            total_ec: file.total_ec,
            pairwise_epr: file.pairwise_epr,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct PlanFile {
    window_length: usize,
    num_qubits: usize,
    capacities: Vec<usize>,
    seed: u64,
    restarts: u32,
    total_ec: u64,
    pairwise_epr: Vec<Vec<u64>>,
    windows: Vec<WindowFile>,
}

#[derive(Serialize, Deserialize)]
struct WindowFile {
    gate_range: (usize, usize),
    assignment: Vec<usize>,
    moves: Vec<MoveEvent>,
    labels: Vec<Locality>,
}

/// Ledger under construction.
struct LedgerBuilder {
    num_qpus: usize,
    total: u64,
    pairwise: BTreeMap<(usize, usize), u64>,
}

impl LedgerBuilder {
    fn new(num_qpus: usize) -> Self {
        LedgerBuilder {
            num_qpus,
            total: 0,
            pairwise: BTreeMap::new(),
        }
    }

    fn charge(&mut self, a: usize, b: usize) {
        let key = (a.min(b), a.max(b));
        *self.pairwise.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    fn matrix(&self) -> Vec<Vec<u64>> {
        let mut matrix = vec![vec![0u64; self.num_qpus]; self.num_qpus];
        for (&(a, b), &count) in &self.pairwise {
            matrix[a][b] = count;
            matrix[b][a] = count;
        }
        matrix
    }
}

fn labels_for(pairs: &[(usize, usize)], partition: &Partition) -> Vec<Locality> {
    pairs
        .iter()
        .map(|&(a, b)| {
            if partition.qpu_of(a) == partition.qpu_of(b) {
                Locality::Local
            } else {
                Locality::NonLocal
            }
        })
        .collect()
}

/// Crossing-gate count of a window under a partition (undoubled counts).
fn crossing_count(pairs: &[(usize, usize)], partition: &Partition) -> u64 {
    pairs
        .iter()
        .filter(|&&(a, b)| partition.qpu_of(a) != partition.qpu_of(b))
        .count() as u64
}

fn move_events(prev: &Partition, next: &Partition) -> Vec<MoveEvent> {
    (0..prev.num_qubits())
        .filter(|&q| prev.qpu_of(q) != next.qpu_of(q))
        .map(|q| MoveEvent {
            qubit: q,
            from: prev.qpu_of(q),
            to: next.qpu_of(q),
        })
        .collect()
}

/// Static single-partition plan: one KL k-way partition of the interaction
/// graph, every crossing two-qubit gate non-local, no moves.
pub fn run_baseline(circuit: &Circuit, capacities: &[usize], config: &KlConfig) -> Result<ExecutionPlan> {
    run_baseline_weighted(circuit, capacities, config, 1.0)
}

/// Baseline with a configurable SWAP weight in the interaction graph (biases
/// the partitioner only; EPR cost stays one per non-local gate).
pub fn run_baseline_weighted(
    circuit: &Circuit,
    capacities: &[usize],
    config: &KlConfig,
    swap_weight: f64,
) -> Result<ExecutionPlan> {
    let graph = interaction_graph_with_swap_weight(circuit, swap_weight);
    let partition = kl_kway(&graph, capacities, None, config)?;
    let pairs = circuit.two_qubit_pairs();

    let mut ledger = LedgerBuilder::new(capacities.len());
    for &(a, b) in &pairs {
        let (pa, pb) = (partition.qpu_of(a), partition.qpu_of(b));
        if pa != pb {
            ledger.charge(pa, pb);
        }
    }
    let labels = labels_for(&pairs, &partition);
    Ok(ExecutionPlan {
        window_length: pairs.len().max(1),
        num_qubits: circuit.num_qubits(),
        capacities: capacities.to_vec(),
        seed: config.seed,
        restarts: config.restarts,
        windows: vec![Window {
            gate_range: (0, pairs.len()),
            partition,
            moves: Vec::new(),
            labels,
        }],
        total_ec: ledger.total,
        pairwise_epr: ledger.matrix(),
    })
}

/// Window-based plan with window length `l` (measured in two-qubit gates).
pub fn run_wbcp(
    circuit: &Circuit,
    capacities: &[usize],
    l: usize,
    config: &KlConfig,
) -> Result<ExecutionPlan> {
    if l == 0 {
        return Err(Error::invalid("window length must be >= 1"));
    }
    let num_qubits = circuit.num_qubits();
    let pairs = circuit.two_qubit_pairs();
    let num_windows = pairs.len().div_ceil(l).max(1);

    let mut ledger = LedgerBuilder::new(capacities.len());
    let mut windows: Vec<Window> = Vec::with_capacity(num_windows);
    let mut prev: Option<Partition> = None;

    for w in 0..num_windows {
        let start = w * l;
        let end = ((w + 1) * l).min(pairs.len());
        let window_pairs = &pairs[start..end];

        let (partition, moves) = match prev {
            None => {
                // Window 1: plain interaction graph of the window, sequential
                // start plus seeded restarts, no placement charge.
                let mut graph = WeightedGraph::new(num_qubits);
                for &(a, b) in window_pairs {
                    graph.add_weight(a, b, 1.0);
                }
                (kl_kway(&graph, capacities, None, config)?, Vec::new())
            }
            Some(ref prev_p) => {
                let graph = window_graph_from_pairs(window_pairs, prev_p, num_qubits);
                let candidate = kl_kway(&graph, capacities, Some(prev_p), config)?;
                let cut_new = crossing_count(window_pairs, &candidate);
                let cut_old = crossing_count(window_pairs, prev_p);
                let moved = prev_p.hamming_distance(&candidate) as u64;
                if cut_new + moved <= cut_old {
                    let moves = move_events(prev_p, &candidate);
                    (candidate, moves)
                } else {
                    (prev_p.clone(), Vec::new())
                }
            }
        };

        for mv in &moves {
            ledger.charge(mv.from, mv.to);
        }
        for &(a, b) in window_pairs {
            let (pa, pb) = (partition.qpu_of(a), partition.qpu_of(b));
            if pa != pb {
                ledger.charge(pa, pb);
            }
        }
        windows.push(Window {
            gate_range: (start, end),
            partition: partition.clone(),
            moves,
            labels: labels_for(window_pairs, &partition),
        });
        prev = Some(partition);
    }

    Ok(ExecutionPlan {
        window_length: l,
        num_qubits,
        capacities: capacities.to_vec(),
        seed: config.seed,
        restarts: config.restarts,
        windows,
        total_ec: ledger.total,
        pairwise_epr: ledger.matrix(),
    })
}

/// Per-window-length results of a sweep.
#[derive(Debug, Clone)]
pub struct SweepReport {
    /// `(window_length, ec)` rows, ascending by window length.
    pub rows: Vec<(usize, u64)>,
    pub best_length: usize,
    pub best: ExecutionPlan,
}

impl SweepReport {
    pub fn best_ec(&self) -> u64 {
        self.best.total_ec
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# seed={} restarts={}",
            self.best.seed, self.best.restarts
        );
        let _ = writeln!(
            out,
            "# best: window_length={} ec={}",
            self.best_length,
            self.best_ec()
        );
        out.push_str("window_length,ec\n");
        for &(l, ec) in &self.rows {
            let _ = writeln!(out, "{l},{ec}");
        }
        out
    }
}

/// Sweeps window lengths and returns per-length EC plus the argmin plan (ties
/// broken toward smaller lengths). The default length set is
/// `{1..ceil(N/4)} ∪ {N}`, which always contains the full-window plan, i.e.
/// the baseline. Lengths are evaluated in parallel; the merge is
/// deterministic.
pub fn sweep_windows(
    circuit: &Circuit,
    capacities: &[usize],
    lengths: Option<&[usize]>,
    config: &KlConfig,
) -> Result<SweepReport> {
    let n = circuit.two_qubit_count();
    let lengths: Vec<usize> = match lengths {
        Some(ls) => {
            if ls.is_empty() || ls.iter().any(|&l| l == 0) {
                return Err(Error::invalid("window lengths must be >= 1"));
            }
            let mut ls = ls.to_vec();
            ls.sort_unstable();
            ls.dedup();
            ls
        }
        None => {
            let mut ls: Vec<usize> = (1..=n.div_ceil(4)).collect();
            ls.push(n.max(1));
            ls.sort_unstable();
            ls.dedup();
            ls
        }
    };

    let plans: Vec<ExecutionPlan> = lengths
        .par_iter()
        .map(|&l| run_wbcp(circuit, capacities, l, config))
        .collect::<Result<_>>()?;

    let rows: Vec<(usize, u64)> = lengths
        .iter()
        .zip(&plans)
        .map(|(&l, p)| (l, p.total_ec))
        .collect();
    let best_idx = rows
        .iter()
        .enumerate()
        .min_by_key(|&(_, &(l, ec))| (ec, l))
        .map(|(i, _)| i)
        .expect("length set is non-empty");

    Ok(SweepReport {
        best_length: rows[best_idx].0,
        best: plans[best_idx].clone(),
        rows,
    })
}

/// Checks every plan invariant against the circuit. Returns the list of
/// violations; an empty list means the plan is valid.
pub fn validate_plan(circuit: &Circuit, plan: &ExecutionPlan) -> Vec<String> {
    let mut violations = Vec::new();
    let pairs = circuit.two_qubit_pairs();

    if plan.num_qubits != circuit.num_qubits() {
        violations.push(format!(
            "plan covers {} qubits, circuit has {}",
            plan.num_qubits,
            circuit.num_qubits()
        ));
        return violations;
    }
    if plan.windows.is_empty() {
        violations.push("plan has no windows".to_string());
        return violations;
    }

    // Window ranges must tile [0, N).
    let mut cursor = 0usize;
    for (i, w) in plan.windows.iter().enumerate() {
        if w.gate_range.0 != cursor || w.gate_range.1 < w.gate_range.0 {
            violations.push(format!("window {i}: gate range {:?} breaks the tiling", w.gate_range));
        }
        cursor = w.gate_range.1;
    }
    if cursor != pairs.len() {
        violations.push(format!(
            "windows cover {cursor} two-qubit gates, circuit has {}",
            pairs.len()
        ));
    }

    let mut recomputed = 0u64;
    let mut pair_counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();

    for (i, w) in plan.windows.iter().enumerate() {
        if w.partition.num_qubits() != plan.num_qubits {
            violations.push(format!("window {i}: partition does not cover all qubits"));
            continue;
        }
        if w.partition.capacities() != plan.capacities.as_slice() {
            violations.push(format!("window {i}: capacities differ from the plan's"));
        }
        for (qpu, (&size, &cap)) in w
            .partition
            .sizes()
            .iter()
            .zip(plan.capacities.iter())
            .enumerate()
        {
            if size > cap {
                violations.push(format!(
                    "window {i}: capacity violated on QPU {qpu} ({size} > {cap})"
                ));
            }
        }

        // Moves connect the previous partition to this one, exactly.
        if i == 0 {
            if !w.moves.is_empty() {
                violations.push("window 0: moves are not allowed before the first window".into());
            }
        } else {
            let prev = &plan.windows[i - 1].partition;
            let mut seen = std::collections::BTreeSet::new();
            for mv in &w.moves {
                if mv.from == mv.to {
                    violations.push(format!("window {i}: move of qubit {} has from == to", mv.qubit));
                }
                if !seen.insert(mv.qubit) {
                    violations.push(format!("window {i}: duplicate move for qubit {}", mv.qubit));
                }
                if mv.qubit >= plan.num_qubits {
                    violations.push(format!("window {i}: move of unknown qubit {}", mv.qubit));
                    continue;
                }
                if prev.qpu_of(mv.qubit) != mv.from || w.partition.qpu_of(mv.qubit) != mv.to {
                    violations.push(format!(
                        "window {i}: move of qubit {} does not match the partitions",
                        mv.qubit
                    ));
                }
            }
            for q in 0..plan.num_qubits {
                if prev.qpu_of(q) != w.partition.qpu_of(q) && !seen.contains(&q) {
                    violations.push(format!("window {i}: qubit {q} changed QPU without a move event"));
                }
            }
            for mv in &w.moves {
                recomputed += 1;
                let key = (mv.from.min(mv.to), mv.from.max(mv.to));
                *pair_counts.entry(key).or_insert(0) += 1;
            }
        }

        // Labels.
        let window_pairs = pairs
            .get(w.gate_range.0..w.gate_range.1.min(pairs.len()))
            .unwrap_or(&[]);
        if w.labels.len() != window_pairs.len() {
            violations.push(format!(
                "window {i}: {} labels for {} gates",
                w.labels.len(),
                window_pairs.len()
            ));
        } else {
            for (g, (&(a, b), &label)) in window_pairs.iter().zip(&w.labels).enumerate() {
                let (pa, pb) = (w.partition.qpu_of(a), w.partition.qpu_of(b));
                let expected = if pa == pb { Locality::Local } else { Locality::NonLocal };
                if label != expected {
                    violations.push(format!(
                        "window {i}: gate {} labeled {:?} but qubits are {}",
                        w.gate_range.0 + g,
                        label,
                        if pa == pb { "co-located" } else { "separated" },
                    ));
                }
                if pa != pb {
                    recomputed += 1;
                    let key = (pa.min(pb), pa.max(pb));
                    *pair_counts.entry(key).or_insert(0) += 1;
                }
            }
        }
    }

    if recomputed != plan.total_ec {
        violations.push(format!(
            "total_ec is {} but recomputation gives {recomputed}",
            plan.total_ec
        ));
    }

    // Pairwise ledger must be symmetric, zero on the diagonal, and match the
    // recount.
    let m = plan.capacities.len();
    if plan.pairwise_epr.len() != m || plan.pairwise_epr.iter().any(|row| row.len() != m) {
        violations.push("pairwise_epr matrix has the wrong shape".into());
    } else {
        for a in 0..m {
            if plan.pairwise_epr[a][a] != 0 {
                violations.push(format!("pairwise_epr has a diagonal entry at QPU {a}"));
            }
            for b in (a + 1)..m {
                if plan.pairwise_epr[a][b] != plan.pairwise_epr[b][a] {
                    violations.push(format!("pairwise_epr is asymmetric at ({a}, {b})"));
                }
                let expected = pair_counts.get(&(a, b)).copied().unwrap_or(0);
                if plan.pairwise_epr[a][b] != expected {
                    violations.push(format!(
                        "pairwise_epr[{a}][{b}] is {} but the ledger recount gives {expected}",
                        plan.pairwise_epr[a][b]
                    ));
                }
            }
        }
    }

    violations
}

/// QPU-level demand graph: nodes are QPUs, weights are the EPR pairs the plan
/// needs between each pair.
pub fn demand_graph(plan: &ExecutionPlan) -> WeightedGraph {
    let m = plan.capacities.len();
    let mut graph = WeightedGraph::new(m);
    for a in 0..m {
        for b in (a + 1)..m {
            let w = plan.pairwise_epr[a][b];
            if w > 0 {
                graph.add_weight(a, b, w as f64);
            }
        }
    }
    graph
}

/// Exact minimum entanglement cost for the window cost model, by dynamic
/// programming over (gate index, partition) states: one EPR per crossing
/// gate, one EPR per moved qubit, moves allowed between any two consecutive
/// two-qubit gates. Guarded to tiny instances.
pub fn dp_optimum(circuit: &Circuit, capacities: &[usize]) -> Result<u64> {
    let n = circuit.num_qubits();
    let pairs = circuit.two_qubit_pairs();
    if n > 6 || pairs.len() > 10 || capacities.len() > 2 {
        return Err(Error::InstanceTooLarge(
            "dp oracle handles <= 6 qubits, <= 10 two-qubit gates, <= 2 QPUs".into(),
        ));
    }
    let total: usize = capacities.iter().sum();
    if total < n {
        return Err(Error::InfeasibleCapacities {
            total,
            required: n,
        });
    }

    // All capacity-respecting assignments.
    let m = capacities.len();
    let mut states: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; n];
    loop {
        let mut sizes = vec![0usize; m];
        for &q in &current {
            sizes[q] += 1;
        }
        if sizes.iter().zip(capacities).all(|(s, c)| s <= c) {
            states.push(current.clone());
        }
        // Odometer increment.
        let mut idx = n;
        loop {
            if idx == 0 {
                break;
            }
            idx -= 1;
            current[idx] += 1;
            if current[idx] < m {
                break;
            }
            current[idx] = 0;
        }
        if current.iter().all(|&q| q == 0) {
            break;
        }
    }

    if pairs.is_empty() {
        return Ok(0);
    }

    let hamming: Vec<Vec<u64>> = states
        .iter()
        .map(|a| {
            states
                .iter()
                .map(|b| a.iter().zip(b).filter(|(x, y)| x != y).count() as u64)
                .collect()
        })
        .collect();

    let mut cost: Vec<u64> = states
        .iter()
        .map(|s| u64::from(s[pairs[0].0] != s[pairs[0].1]))
        .collect();
    for &(a, b) in &pairs[1..] {
        let mut next = vec![u64::MAX; states.len()];
        for (j, state) in states.iter().enumerate() {
            let gate = u64::from(state[a] != state[b]);
            let mut best = u64::MAX;
            for (i, &c) in cost.iter().enumerate() {
                best = best.min(c + hamming[i][j]);
            }
            next[j] = best + gate;
        }
        cost = next;
    }
    Ok(cost.into_iter().min().expect("feasible state exists"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn repeated_cx(n: usize, reps: usize) -> Circuit {
        Circuit::new(n, (0..reps).map(|_| Gate::cx(0, 1)).collect()).unwrap()
    }

    /// The worked six-gate example: two windows of three gates over four
    /// qubits on two QPUs of capacity two.
    fn six_gate_example() -> Circuit {
        Circuit::new(
            4,
            vec![
                Gate::cx(0, 1),
                Gate::cx(0, 1),
                Gate::cx(2, 3),
                Gate::cx(0, 2),
                Gate::cx(0, 2),
                Gate::cx(0, 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn baseline_forced_separation() {
        let plan = run_baseline(&repeated_cx(2, 5), &[1, 1], &KlConfig::default()).unwrap();
        assert_eq!(plan.total_ec, 5);
        assert!(plan.windows[0].labels.iter().all(|&l| l == Locality::NonLocal));
        assert!(validate_plan(&repeated_cx(2, 5), &plan).is_empty());
    }

    #[test]
    fn baseline_colocates_when_possible() {
        let plan = run_baseline(&repeated_cx(2, 5), &[2, 1], &KlConfig::default()).unwrap();
        assert_eq!(plan.total_ec, 0);
    }

    #[test]
    fn wbcp_six_gate_example_pays_two() {
        let circuit = six_gate_example();
        let plan = run_wbcp(&circuit, &[2, 2], 3, &KlConfig::default()).unwrap();
        assert_eq!(plan.total_ec, 2);
        assert_eq!(plan.windows.len(), 2);
        assert!(plan.windows[0].moves.is_empty());
        assert_eq!(plan.windows[1].moves.len(), 2);
        assert!(validate_plan(&circuit, &plan).is_empty());
    }

    #[test]
    fn wbcp_full_window_equals_baseline() {
        let circuit = six_gate_example();
        let config = KlConfig::default();
        let full = run_wbcp(&circuit, &[2, 2], 6, &config).unwrap();
        let base = run_baseline(&circuit, &[2, 2], &config).unwrap();
        assert_eq!(full.total_ec, 3);
        assert_eq!(full.total_ec, base.total_ec);
        assert_eq!(full.windows[0].partition, base.windows[0].partition);
    }

    #[test]
    fn single_qpu_costs_nothing() {
        let circuit = six_gate_example();
        for l in [1, 2, 6] {
            let plan = run_wbcp(&circuit, &[4], l, &KlConfig::default()).unwrap();
            assert_eq!(plan.total_ec, 0);
        }
    }

    #[test]
    fn sweep_prefers_the_three_gate_window() {
        let circuit = six_gate_example();
        let report = sweep_windows(&circuit, &[2, 2], None, &KlConfig::default()).unwrap();
        // Default set is {1, 2} ∪ {6}; add 3 explicitly to cover the example.
        let report_all =
            sweep_windows(&circuit, &[2, 2], Some(&[1, 2, 3, 6]), &KlConfig::default()).unwrap();
        assert!(report_all.best_ec() <= report.best_ec());
        assert_eq!(report_all.best_ec(), 2);
        assert_eq!(report_all.best_length, 3);
        assert!(report_all.rows.contains(&(6, 3)));
    }

    #[test]
    fn sweep_handles_two_qubit_free_circuits() {
        let circuit = Circuit::new(3, vec![Gate::h(0), Gate::rz(1, 0.3)]).unwrap();
        let report = sweep_windows(&circuit, &[2, 1], None, &KlConfig::default()).unwrap();
        assert_eq!(report.best_ec(), 0);
        assert!(validate_plan(&circuit, &report.best).is_empty());
    }

    #[test]
    fn validator_flags_bad_labels_and_totals() {
        let circuit = six_gate_example();
        let mut plan = run_wbcp(&circuit, &[2, 2], 3, &KlConfig::default()).unwrap();
        assert!(validate_plan(&circuit, &plan).is_empty());

        let mut tampered = plan.clone();
        tampered.windows[1].labels[0] = Locality::Local;
        let violations = validate_plan(&circuit, &tampered);
        assert!(violations.iter().any(|v| v.contains("labeled")), "{violations:?}");

        plan.total_ec += 1;
        let violations = validate_plan(&circuit, &plan);
        assert!(violations.iter().any(|v| v.contains("total_ec")), "{violations:?}");
    }

    #[test]
    fn demand_graph_reads_the_ledger() {
        let circuit = six_gate_example();
        let plan = run_wbcp(&circuit, &[2, 2], 3, &KlConfig::default()).unwrap();
        let demand = demand_graph(&plan);
        assert_eq!(demand.num_nodes(), 2);
        assert_eq!(demand.weight(0, 1), 2.0);

        let local = run_baseline(&circuit, &[4], &KlConfig::default()).unwrap();
        assert_eq!(demand_graph(&local).num_edges(), 0);
    }

    #[test]
    fn dp_optimum_matches_hand_values() {
        assert_eq!(dp_optimum(&repeated_cx(2, 1), &[1, 1]).unwrap(), 1);
        assert_eq!(dp_optimum(&six_gate_example(), &[2, 2]).unwrap(), 2);
        assert_eq!(dp_optimum(&six_gate_example(), &[4]).unwrap(), 0);
    }

    #[test]
    fn dp_guard_trips() {
        let circuit = repeated_cx(7, 1);
        assert!(matches!(
            dp_optimum(&circuit, &[4, 4]),
            Err(Error::InstanceTooLarge(_))
        ));
    }

    #[test]
    fn plan_json_roundtrip() {
        let circuit = six_gate_example();
        let plan = run_wbcp(&circuit, &[2, 2], 3, &KlConfig::default()).unwrap();
        let text = plan.to_json();
        let back = ExecutionPlan::from_json(&text).unwrap();
        assert_eq!(plan, back);
        assert_eq!(text, back.to_json());
    }
}
