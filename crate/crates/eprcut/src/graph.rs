//! Weighted undirected graphs and the circuit-to-graph mappings.
//!
//! Interaction graphs, window graphs, demand graphs and topology graphs all
//! share this shape: node indices `0..num_nodes`, at most one edge per pair,
//! strictly positive weights (a zero-weight edge is simply absent). Weights
//! are stored as `f64`; interaction and demand graphs keep exact integer
//! values in them.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::partition::Partition;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Serialize, Deserialize)]
struct GraphFile {
    num_nodes: usize,
    edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    num_nodes: usize,
    edges: BTreeMap<(usize, usize), f64>,
}

impl WeightedGraph {
    pub fn new(num_nodes: usize) -> Self {
        WeightedGraph {
            num_nodes,
            edges: BTreeMap::new(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Adds `weight` onto the edge `(u, v)`, creating it if absent.
    pub fn add_weight(&mut self, u: usize, v: usize, weight: f64) {
        assert!(u != v, "self-loops are not allowed");
        assert!(u < self.num_nodes && v < self.num_nodes, "node out of range");
        assert!(weight >= 0.0, "edge weights must be non-negative");
        if weight == 0.0 {
            return;
        }
        *self.edges.entry(ordered(u, v)).or_insert(0.0) += weight;
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        self.edges.get(&ordered(u, v)).copied().unwrap_or(0.0)
    }

    /// Edges as `(u, v, weight)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    /// Neighbors of `u` with edge weights, ascending by node index.
    pub fn neighbors(&self, u: usize) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for (&(a, b), &w) in &self.edges {
            if a == u {
                out.push((b, w));
            } else if b == u {
                out.push((a, w));
            }
        }
        out.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        out
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.values().sum()
    }

    /// Total weight of edges whose endpoints lie in different subsets.
    pub fn cut_weight(&self, partition: &Partition) -> Result<f64> {
        if partition.num_qubits() != self.num_nodes {
            return Err(Error::invalid(format!(
                "partition covers {} nodes, graph has {}",
                partition.num_qubits(),
                self.num_nodes
            )));
        }
        let mut cut = 0.0;
        for (&(u, v), &w) in &self.edges {
            if partition.qpu_of(u) != partition.qpu_of(v) {
                cut += w;
            }
        }
        Ok(cut)
    }

    /// Parses edge-list text: one `u v weight` triple per line, blank lines
    /// and `#` comments ignored, optional `nodes N` header (otherwise the
    /// node count is max index + 1).
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts[0] == "nodes" && parts.len() == 2 {
                declared = Some(parts[1].parse().map_err(|_| {
                    Error::Parse {
                        line: line_no,
                        message: "malformed node count".into(),
                    }
                })?);
                continue;
            }
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v weight`, got `{line}`"),
                });
            }
            let u: usize = parts[0].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: "malformed node index".into(),
            })?;
            let v: usize = parts[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: "malformed node index".into(),
            })?;
            let w: f64 = parts[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: "malformed weight".into(),
            })?;
            if u == v || w < 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "edges need distinct endpoints and non-negative weight".into(),
                });
            }
            edges.push((u, v, w));
        }
        let max_node = edges.iter().map(|&(u, v, _)| u.max(v)).max();
        let num_nodes = match (declared, max_node) {
            (Some(n), Some(max)) if max >= n => {
                return Err(Error::invalid(format!(
                    "edge references node {max} but header declares {n} nodes"
                )));
            }
            (Some(n), _) => n,
            (None, Some(max)) => max + 1,
            (None, None) => return Err(Error::invalid("graph file has no edges and no header")),
        };
        let mut graph = WeightedGraph::new(num_nodes);
        for (u, v, w) in edges {
            graph.add_weight(u, v, w);
        }
        Ok(graph)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("nodes {}\n", self.num_nodes);
        for (u, v, w) in self.edges() {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        let mut graph = WeightedGraph::new(file.num_nodes);
        for (u, v, w) in file.edges {
            if u >= file.num_nodes || v >= file.num_nodes || u == v || w < 0.0 {
                return Err(Error::invalid("malformed edge in graph JSON"));
            }
            graph.add_weight(u, v, w);
        }
        Ok(graph)
    }

    pub fn to_json_str(&self) -> String {
        let file = GraphFile {
            num_nodes: self.num_nodes,
            edges: self.edges().collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serializes")
    }

    /// Graphviz text for the graph. Labels default to node indices.
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let name = |i: usize| -> String {
            match labels.and_then(|l| l.get(i)) {
                Some(l) => l.clone(),
                None => format!("{i}"),
            }
        };
        let mut out = String::from("graph G {\n");
        for i in 0..self.num_nodes {
            let _ = writeln!(out, "  {};", name(i));
        }
        for (&(u, v), &w) in &self.edges {
            let _ = writeln!(out, "  {} -- {} [weight={}]", name(u), name(v), w);
        }
        out.push_str("}\n");
        out
    }
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Interaction graph of a circuit: one node per qubit, and for each two-qubit
/// gate between `q_i` and `q_j` the edge `(i, j)` gains weight 1.
pub fn interaction_graph(circuit: &Circuit) -> WeightedGraph {
    interaction_graph_with_swap_weight(circuit, 1.0)
}

/// Interaction graph with a configurable SWAP weight. CX and CR always count
/// 1; a non-local SWAP is at least one remote two-qubit operation, so the
/// default weight is 1, but the exact decomposition cost is a cost-model
/// choice.
pub fn interaction_graph_with_swap_weight(circuit: &Circuit, swap_weight: f64) -> WeightedGraph {
    let mut graph = WeightedGraph::new(circuit.num_qubits());
    for gate in circuit.gates() {
        if let Some((a, b)) = gate.qubit_pair() {
            let w = match gate.kind {
                crate::circuit::GateKind::Swap => swap_weight,
                _ => 1.0,
            };
            graph.add_weight(a, b, w);
        }
    }
    graph
}

/// History-biased graph for one window: weight is twice the gate count when
/// both qubits share a QPU under `prev`, and the plain count otherwise. The
/// doubling encourages qubits to remain where they are without forbidding
/// moves. All circuit qubits appear as nodes; ones not touched by the window
/// stay isolated.
pub fn window_graph(gates: &[Gate], prev: &Partition, num_qubits: usize) -> WeightedGraph {
    let mut graph = WeightedGraph::new(num_qubits);
    for gate in gates {
        if let Some((a, b)) = gate.qubit_pair() {
            let w = if prev.qpu_of(a) == prev.qpu_of(b) {
                2.0
            } else {
                1.0
            };
            graph.add_weight(a, b, w);
        }
    }
    graph
}

/// Same as [`window_graph`] but over bare qubit pairs (one per two-qubit
/// gate), the form the window engine works in.
pub fn window_graph_from_pairs(
    pairs: &[(usize, usize)],
    prev: &Partition,
    num_qubits: usize,
) -> WeightedGraph {
    let mut graph = WeightedGraph::new(num_qubits);
    for &(a, b) in pairs {
        let w = if prev.qpu_of(a) == prev.qpu_of(b) {
            2.0
        } else {
            1.0
        };
        graph.add_weight(a, b, w);
    }
    graph
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gen_qft;

    fn partition(assignment: Vec<usize>, capacities: Vec<usize>) -> Partition {
        Partition::new(assignment, capacities).unwrap()
    }

    #[test]
    fn interaction_graph_counts_gates() {
        let c = Circuit::new(3, vec![Gate::cx(0, 1), Gate::cx(0, 1), Gate::cx(1, 2)]).unwrap();
        let g = interaction_graph(&c);
        assert_eq!(g.weight(0, 1), 2.0);
        assert_eq!(g.weight(1, 2), 1.0);
        assert_eq!(g.total_weight(), 3.0);
    }

    #[test]
    fn single_qubit_circuit_gives_isolated_nodes() {
        let c = Circuit::new(4, vec![Gate::h(0), Gate::h(3)]).unwrap();
        let g = interaction_graph(&c);
        assert_eq!(g.num_nodes(), 4);
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn qft4_interaction_graph() {
        // CR pairs all get weight 1; the swap layer adds 1 on (0,3) and (1,2).
        let g = interaction_graph(&gen_qft(4).unwrap());
        assert_eq!(g.weight(0, 1), 1.0);
        assert_eq!(g.weight(0, 2), 1.0);
        assert_eq!(g.weight(0, 3), 2.0);
        assert_eq!(g.weight(1, 2), 2.0);
        assert_eq!(g.weight(1, 3), 1.0);
        assert_eq!(g.weight(2, 3), 1.0);
        assert_eq!(g.total_weight(), 8.0);
    }

    #[test]
    fn window_graph_doubles_same_qpu_pairs() {
        let gates = [Gate::cx(0, 1)];
        let same = partition(vec![0, 0], vec![2]);
        let g = window_graph(&gates, &same, 2);
        assert_eq!(g.weight(0, 1), 2.0);

        let split = partition(vec![0, 1], vec![1, 1]);
        let g = window_graph(&gates, &split, 2);
        assert_eq!(g.weight(0, 1), 1.0);

        let g = window_graph(&[], &split, 2);
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn cut_weight_counts_crossing_edges() {
        let mut g = WeightedGraph::new(3);
        g.add_weight(0, 1, 2.0);
        g.add_weight(1, 2, 1.0);

        let together = partition(vec![0, 0, 0], vec![3]);
        assert_eq!(g.cut_weight(&together).unwrap(), 0.0);

        let split = partition(vec![0, 0, 1], vec![2, 1]);
        assert_eq!(g.cut_weight(&split).unwrap(), 1.0);
    }

    #[test]
    fn k4_balanced_cut() {
        let mut g = WeightedGraph::new(4);
        for u in 0..4 {
            for v in (u + 1)..4 {
                g.add_weight(u, v, 1.0);
            }
        }
        let p = partition(vec![0, 0, 1, 1], vec![2, 2]);
        assert_eq!(g.cut_weight(&p).unwrap(), 4.0);
    }

    #[test]
    fn cut_weight_rejects_uncovered_nodes() {
        let g = WeightedGraph::new(3);
        let p = partition(vec![0, 0], vec![2]);
        assert!(g.cut_weight(&p).is_err());
    }

    #[test]
    fn dot_export_lists_edges_and_isolated_nodes() {
        let mut g = WeightedGraph::new(2);
        g.add_weight(0, 1, 3.0);
        let labels = vec!["a".to_string(), "b".to_string()];
        let dot = g.to_dot(Some(&labels));
        assert!(dot.contains("a -- b [weight=3]"), "{dot}");

        let empty = WeightedGraph::new(1).to_dot(None);
        assert!(empty.starts_with("graph G {"));
        assert!(empty.contains("0;"));
        assert!(empty.trim_end().ends_with('}'));

        let mut k3 = WeightedGraph::new(3);
        k3.add_weight(0, 1, 1.0);
        k3.add_weight(0, 2, 1.0);
        k3.add_weight(1, 2, 1.0);
        let dot = k3.to_dot(None);
        assert_eq!(dot.matches(" -- ").count(), 3);
    }
}
