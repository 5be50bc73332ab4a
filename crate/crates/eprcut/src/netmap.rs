//! Mapping logical EPR demand onto a physical QPU network.
//!
//! The demand graph G' (QPUs, edge weights = EPR pairs a plan needs) is
//! placed onto the topology graph G (physical QPUs, edge weights = link
//! infidelity) so that heavy demand lands on quiet links: minimize
//! `sum x_ij * w_i * l_j` over edge pairings consistent with a node
//! bijection. The quadratic consistency constraint is linearized through the
//! auxiliary binaries `z1_ij = y_{u1v1} y_{u2v2}` and `z2_ij = y_{u1v2}
//! y_{u2v1}` with the usual six product inequalities, and `x_ij = z1 + z2`.
//!
//! Both graphs are padded to complete graphs on equal node counts with
//! zero-weight edges, which keeps the edge-bijection rows satisfiable and
//! never changes the objective.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

/// Exhaustive-solver guard: permutations of more nodes than this must go
/// through the annealing fallback explicitly.
pub const EXACT_NODE_LIMIT: usize = 10;

/// The linearized assignment model over padded complete graphs. Edge index
/// space is shared by both graphs: edge `i` joins the node pair `edges[i]`.
#[derive(Debug, Clone)]
pub struct IlpModel {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    topo_weights: Vec<f64>,
    demand_weights: Vec<f64>,
}

/// One feasible point of the model, row-major: `y[u * v + vv]`,
/// `x[i * e + j]`.
#[derive(Debug, Clone)]
pub struct IlpPoint {
    pub y: Vec<bool>,
    pub x: Vec<bool>,
    pub z1: Vec<bool>,
    pub z2: Vec<bool>,
}

impl IlpModel {
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_y(&self) -> usize {
        self.num_nodes * self.num_nodes
    }

    pub fn num_x(&self) -> usize {
        self.edges.len() * self.edges.len()
    }

    pub fn num_z1(&self) -> usize {
        self.num_x()
    }

    pub fn num_z2(&self) -> usize {
        self.num_x()
    }

    pub fn topology_weight(&self, edge: usize) -> f64 {
        self.topo_weights[edge]
    }

    pub fn demand_weight(&self, edge: usize) -> f64 {
        self.demand_weights[edge]
    }

    /// Builds the point a node bijection forces: the six z inequalities pin
    /// every `z1`/`z2` to the corresponding `y` product and `x = z1 + z2`.
    /// `sigma[u]` is the demand node hosted by topology node `u`.
    pub fn point_for(&self, sigma: &[usize]) -> IlpPoint {
        let v = self.num_nodes;
        let e = self.edges.len();
        let mut y = vec![false; v * v];
        for (u, &dv) in sigma.iter().enumerate() {
            y[u * v + dv] = true;
        }
        let mut x = vec![false; e * e];
        let mut z1 = vec![false; e * e];
        let mut z2 = vec![false; e * e];
        for i in 0..e {
            let (u1, u2) = self.edges[i];
            for j in 0..e {
                let (v1, v2) = self.edges[j];
                let a = y[u1 * v + v1] && y[u2 * v + v2];
                let b = y[u1 * v + v2] && y[u2 * v + v1];
                z1[i * e + j] = a;
                z2[i * e + j] = b;
                x[i * e + j] = a || b;
            }
        }
        IlpPoint { y, x, z1, z2 }
    }

    /// Verifies every constraint row at a point. Returns the violated rows.
    pub fn check_point(&self, point: &IlpPoint) -> Vec<String> {
        let v = self.num_nodes;
        let e = self.edges.len();
        let mut violations = Vec::new();

        for u in 0..v {
            let row: usize = (0..v).map(|dv| point.y[u * v + dv] as usize).sum();
            if row != 1 {
                violations.push(format!("y row sum for topology node {u} is {row}"));
            }
        }
        for dv in 0..v {
            let col: usize = (0..v).map(|u| point.y[u * v + dv] as usize).sum();
            if col != 1 {
                violations.push(format!("y column sum for demand node {dv} is {col}"));
            }
        }
        for i in 0..e {
            let row: usize = (0..e).map(|j| point.x[i * e + j] as usize).sum();
            if row != 1 {
                violations.push(format!("x row sum for topology edge {i} is {row}"));
            }
        }
        for j in 0..e {
            let col: usize = (0..e).map(|i| point.x[i * e + j] as usize).sum();
            if col != 1 {
                violations.push(format!("x column sum for demand edge {j} is {col}"));
            }
        }
        for i in 0..e {
            let (u1, u2) = self.edges[i];
            for j in 0..e {
                let (v1, v2) = self.edges[j];
                let idx = i * e + j;
                let y11 = point.y[u1 * v + v1] as i8;
                let y22 = point.y[u2 * v + v2] as i8;
                let y12 = point.y[u1 * v + v2] as i8;
                let y21 = point.y[u2 * v + v1] as i8;
                let z1 = point.z1[idx] as i8;
                let z2 = point.z2[idx] as i8;
                let x = point.x[idx] as i8;
                if z1 > y11 || z1 > y22 || z1 < y11 + y22 - 1 {
                    violations.push(format!("z1 inequalities broken at ({i}, {j})"));
                }
                if z2 > y12 || z2 > y21 || z2 < y12 + y21 - 1 {
                    violations.push(format!("z2 inequalities broken at ({i}, {j})"));
                }
                if x != z1 + z2 {
                    violations.push(format!("x != z1 + z2 at ({i}, {j})"));
                }
            }
        }
        violations
    }

    /// Objective value `sum x_ij w_i l_j` at a point.
    pub fn objective(&self, point: &IlpPoint) -> f64 {
        let e = self.edges.len();
        let mut total = 0.0;
        for i in 0..e {
            for j in 0..e {
                if point.x[i * e + j] {
                    total += self.topo_weights[i] * self.demand_weights[j];
                }
            }
        }
        total
    }
}

/// Builds the model, padding the demand graph with isolated zero-demand
/// nodes up to the topology size and completing both edge sets with
/// zero-weight edges.
pub fn build_ilp(topology: &WeightedGraph, demand: &WeightedGraph) -> Result<IlpModel> {
    let v = topology.num_nodes();
    if demand.num_nodes() > v {
        return Err(Error::invalid(format!(
            "demand graph has {} nodes, topology only {v}",
            demand.num_nodes()
        )));
    }
    let mut edges = Vec::with_capacity(v * (v - 1) / 2);
    let mut topo_weights = Vec::new();
    let mut demand_weights = Vec::new();
    for u1 in 0..v {
        for u2 in (u1 + 1)..v {
            edges.push((u1, u2));
            topo_weights.push(topology.weight(u1, u2));
            demand_weights.push(if u1 < demand.num_nodes() && u2 < demand.num_nodes() {
                demand.weight(u1, u2)
            } else {
                0.0
            });
        }
    }
    Ok(IlpModel {
        num_nodes: v,
        edges,
        topo_weights,
        demand_weights,
    })
}

/// A node bijection with its objective value. `assignment[d]` is the
/// physical (topology) node hosting demand node `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mapping {
    pub assignment: Vec<usize>,
    pub objective: f64,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Mapping {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mapping serializes")
    }
}

/// Padded weight matrices for both graphs.
struct Instance {
    v: usize,
    demand_nodes: usize,
    w: Vec<f64>,
    l: Vec<f64>,
}

impl Instance {
    fn new(topology: &WeightedGraph, demand: &WeightedGraph) -> Result<Self> {
        let v = topology.num_nodes();
        if demand.num_nodes() > v {
            return Err(Error::invalid(format!(
                "demand graph has {} nodes, topology only {v}",
                demand.num_nodes()
            )));
        }
        let mut w = vec![0.0; v * v];
        let mut l = vec![0.0; v * v];
        for u1 in 0..v {
            for u2 in 0..v {
                if u1 != u2 {
                    w[u1 * v + u2] = topology.weight(u1, u2);
                    if u1 < demand.num_nodes() && u2 < demand.num_nodes() {
                        l[u1 * v + u2] = demand.weight(u1, u2);
                    }
                }
            }
        }
        Ok(Instance {
            v,
            demand_nodes: demand.num_nodes(),
            w,
            l,
        })
    }

    /// Objective of `sigma` (topology node -> demand node).
    fn objective(&self, sigma: &[usize]) -> f64 {
        let mut total = 0.0;
        for u1 in 0..self.v {
            for u2 in (u1 + 1)..self.v {
                total += self.w[u1 * self.v + u2] * self.l[sigma[u1] * self.v + sigma[u2]];
            }
        }
        total
    }

    fn mapping_from_sigma(&self, sigma: &[usize], method: &str, seed: Option<u64>) -> Mapping {
        let mut assignment = vec![0usize; self.v];
        for (u, &d) in sigma.iter().enumerate() {
            assignment[d] = u;
        }
        assignment.truncate(self.demand_nodes);
        Mapping {
            assignment,
            objective: self.objective(sigma),
            method: method.to_string(),
            seed,
        }
    }

    fn random_sigma(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut sigma: Vec<usize> = (0..self.v).collect();
        sigma.shuffle(rng);
        sigma
    }
}

/// Globally optimal mapping by branch-and-bound over node bijections
/// (weights are non-negative, so partial objectives are admissible bounds).
/// Ties resolve to the first bijection in lexicographic order.
pub fn solve_exact(topology: &WeightedGraph, demand: &WeightedGraph) -> Result<Mapping> {
    let inst = Instance::new(topology, demand)?;
    if inst.v > EXACT_NODE_LIMIT {
        return Err(Error::InstanceTooLarge(format!(
            "{} nodes exceed the exact-solver guard of {EXACT_NODE_LIMIT}",
            inst.v
        )));
    }

    let v = inst.v;
    let mut sigma = vec![0usize; v];
    let mut used = vec![false; v];
    let mut best: Option<(f64, Vec<usize>)> = None;

    fn dfs(
        depth: usize,
        inst: &Instance,
        sigma: &mut [usize],
        used: &mut [bool],
        partial: f64,
        best: &mut Option<(f64, Vec<usize>)>,
    ) {
        if let Some((bc, _)) = best {
            if partial >= *bc {
                return;
            }
        }
        let v = inst.v;
        if depth == v {
            match best {
                Some((bc, bs)) if partial < *bc => {
                    *bc = partial;
                    bs.clone_from(&sigma.to_vec());
                }
                None => *best = Some((partial, sigma.to_vec())),
                _ => {}
            }
            return;
        }
        for d in 0..v {
            if used[d] {
                continue;
            }
            let mut delta = 0.0;
            for prev in 0..depth {
                delta += inst.w[prev * v + depth] * inst.l[sigma[prev] * v + d];
            }
            sigma[depth] = d;
            used[d] = true;
            dfs(depth + 1, inst, sigma, used, partial + delta, best);
            used[d] = false;
        }
    }

    dfs(0, &inst, &mut sigma, &mut used, 0.0, &mut best);
    let (_, sigma) = best.expect("bijection exists");
    Ok(inst.mapping_from_sigma(&sigma, "exact", None))
}

/// Simulated-annealing fallback for instances past the exact guard. The
/// starting bijection is the first sample of the seeded stream (the same
/// stream [`random_baseline`] draws from), proposals are transpositions, and
/// the best bijection ever visited is returned. Zero iterations return the
/// seeded initial bijection unchanged.
pub fn solve_annealing(
    topology: &WeightedGraph,
    demand: &WeightedGraph,
    seed: u64,
    iterations: usize,
) -> Result<Mapping> {
    let inst = Instance::new(topology, demand)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma = inst.random_sigma(&mut rng);
    let mut cost = inst.objective(&sigma);
    let mut best = (cost, sigma.clone());

    let t0 = (cost / 10.0).max(1e-3);
    let t_end = 1e-6;
    for step in 0..iterations {
        let frac = step as f64 / iterations.max(1) as f64;
        let temp = t0 * (t_end / t0).powf(frac);
        let a = rng.gen_range(0..inst.v);
        let b = rng.gen_range(0..inst.v);
        if a == b {
            continue;
        }
        sigma.swap(a, b);
        let candidate = inst.objective(&sigma);
        let accept = candidate <= cost || rng.gen::<f64>() < ((cost - candidate) / temp).exp();
        if accept {
            cost = candidate;
            if cost < best.0 {
                best = (cost, sigma.clone());
            }
        } else {
            sigma.swap(a, b);
        }
    }

    Ok(inst.mapping_from_sigma(&best.1, "annealing", Some(seed)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub trials: usize,
}

/// Objective statistics over uniformly random bijections.
pub fn random_baseline(
    topology: &WeightedGraph,
    demand: &WeightedGraph,
    seed: u64,
    trials: usize,
) -> Result<BaselineStats> {
    if trials == 0 {
        return Err(Error::invalid("random baseline needs trials >= 1"));
    }
    let inst = Instance::new(topology, demand)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for _ in 0..trials {
        let sigma = inst.random_sigma(&mut rng);
        let value = inst.objective(&sigma);
        sum += value;
        min = min.min(value);
        max = max.max(value);
    }
    Ok(BaselineStats {
        mean: sum / trials as f64,
        min,
        max,
        trials,
    })
}

/// Complete topology graph with link-infidelity weights drawn from
/// `Beta(beta, beta)`, clamped into the open unit interval.
pub fn gen_topology(nodes: usize, beta: f64, seed: u64) -> Result<WeightedGraph> {
    if nodes < 2 {
        return Err(Error::invalid("topology needs at least 2 nodes"));
    }
    let dist = Beta::new(beta, beta)
        .map_err(|_| Error::invalid("beta parameter must be positive and finite"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = WeightedGraph::new(nodes);
    for u in 0..nodes {
        for v in (u + 1)..nodes {
            let sample: f64 = dist.sample(&mut rng);
            graph.add_weight(u, v, sample.clamp(1e-12, 1.0 - 1e-12));
        }
    }
    Ok(graph)
}

/// Complete demand graph with integer EPR demands `round(l_max * Beta(beta,
/// beta))`; zero-demand pairs stay absent (the ILP padding re-materializes
/// them).
pub fn gen_demand(nodes: usize, beta: f64, seed: u64, l_max: usize) -> Result<WeightedGraph> {
    if nodes < 2 {
        return Err(Error::invalid("demand graph needs at least 2 nodes"));
    }
    if l_max == 0 {
        return Err(Error::invalid("l_max must be positive"));
    }
    let dist = Beta::new(beta, beta)
        .map_err(|_| Error::invalid("beta parameter must be positive and finite"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = WeightedGraph::new(nodes);
    for u in 0..nodes {
        for v in (u + 1)..nodes {
            let sample: f64 = dist.sample(&mut rng);
            let weight = (l_max as f64 * sample).round();
            graph.add_weight(u, v, weight);
        }
    }
    Ok(graph)
}

/// Percentage improvement of the optimized placement over the random
/// baseline mean. All-zero demand is defined as 0%.
pub fn improvement_pct(
    topology: &WeightedGraph,
    demand: &WeightedGraph,
    seed: u64,
    trials: usize,
) -> Result<f64> {
    let exact = solve_exact(topology, demand)?;
    let baseline = random_baseline(topology, demand, seed, trials)?;
    if baseline.mean == 0.0 {
        return Ok(0.0);
    }
    Ok(100.0 * (baseline.mean - exact.objective) / baseline.mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Triangle instance used throughout: optimum 25 with the heavy demand
    /// on the quiet link.
    fn triangle() -> (WeightedGraph, WeightedGraph) {
        let mut topology = WeightedGraph::new(3);
        topology.add_weight(0, 1, 1.0);
        topology.add_weight(1, 2, 10.0);
        topology.add_weight(0, 2, 10.0);
        let mut demand = WeightedGraph::new(3);
        demand.add_weight(0, 1, 5.0);
        demand.add_weight(1, 2, 1.0);
        demand.add_weight(0, 2, 1.0);
        (topology, demand)
    }

    #[test]
    fn variable_counts_match_the_padded_sizes() {
        let (t, d) = triangle();
        let model = build_ilp(&t, &d).unwrap();
        assert_eq!(model.num_y(), 9);
        assert_eq!(model.num_x(), 9);
        assert_eq!(model.num_z1(), 9);
        assert_eq!(model.num_z2(), 9);

        let mut t2 = WeightedGraph::new(2);
        t2.add_weight(0, 1, 0.5);
        let mut d2 = WeightedGraph::new(2);
        d2.add_weight(0, 1, 3.0);
        let model = build_ilp(&t2, &d2).unwrap();
        assert_eq!(model.num_y(), 4);
        assert_eq!(model.num_x(), 1);
        assert_eq!(model.num_z1(), 1);
        assert_eq!(model.num_z2(), 1);
    }

    #[test]
    fn identity_mapping_is_feasible() {
        let (t, d) = triangle();
        let model = build_ilp(&t, &d).unwrap();
        let point = model.point_for(&[0, 1, 2]);
        assert!(model.check_point(&point).is_empty());
    }

    #[test]
    fn ilp_rejects_oversized_demand() {
        let t = WeightedGraph::new(2);
        let d = WeightedGraph::new(3);
        assert!(build_ilp(&t, &d).is_err());
    }

    #[test]
    fn exact_solves_the_triangle() {
        let (t, d) = triangle();
        let mapping = solve_exact(&t, &d).unwrap();
        assert_eq!(mapping.objective, 25.0);
        // The heavy demand edge (0,1) must land on the quiet link (0,1).
        let (p, q) = (mapping.assignment[0], mapping.assignment[1]);
        assert_eq!((p.min(q), p.max(q)), (0, 1));
    }

    #[test]
    fn symmetric_topology_falls_back_to_lexicographic() {
        let mut t = WeightedGraph::new(3);
        t.add_weight(0, 1, 2.0);
        t.add_weight(1, 2, 2.0);
        t.add_weight(0, 2, 2.0);
        let (_, d) = triangle();
        let mapping = solve_exact(&t, &d).unwrap();
        assert_eq!(mapping.objective, 2.0 * 7.0);
        assert_eq!(mapping.assignment, vec![0, 1, 2]);
    }

    #[test]
    fn forced_single_edge_lands_on_the_quietest_link() {
        let mut t = WeightedGraph::new(3);
        t.add_weight(0, 1, 0.9);
        t.add_weight(1, 2, 0.2);
        t.add_weight(0, 2, 0.5);
        let mut d = WeightedGraph::new(2);
        d.add_weight(0, 1, 7.0);
        let mapping = solve_exact(&t, &d).unwrap();
        assert!((mapping.objective - 1.4).abs() < 1e-12);
    }

    #[test]
    fn exact_guard_trips_and_annealing_still_answers() {
        let t = gen_topology(12, 1.0, 0).unwrap();
        let d = gen_demand(12, 1.0, 1, 10).unwrap();
        assert!(matches!(
            solve_exact(&t, &d),
            Err(Error::InstanceTooLarge(_))
        ));
        let a = solve_annealing(&t, &d, 3, 2000).unwrap();
        let b = solve_annealing(&t, &d, 3, 2000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.method, "annealing");
    }

    #[test]
    fn annealing_zero_iterations_returns_the_seeded_start() {
        let (t, d) = triangle();
        let zero = solve_annealing(&t, &d, 11, 0).unwrap();
        // The initial bijection is the first sample of the baseline stream.
        let one_trial = random_baseline(&t, &d, 11, 1).unwrap();
        assert_eq!(zero.objective, one_trial.mean);

        let exact = solve_exact(&t, &d).unwrap();
        let annealed = solve_annealing(&t, &d, 11, 500).unwrap();
        assert!(annealed.objective >= exact.objective);
    }

    #[test]
    fn baseline_statistics_cover_the_bijection_set() {
        let (t, d) = triangle();
        // Enumerated objective values: two bijections at 25, four at 61.
        let mean_true = (2.0 * 25.0 + 4.0 * 61.0) / 6.0;
        let stats = random_baseline(&t, &d, 5, 2000).unwrap();
        assert!(stats.min >= 25.0);
        assert!(stats.max <= 61.0);
        assert!((stats.mean - mean_true).abs() < 3.0, "mean {}", stats.mean);

        let single = random_baseline(&t, &d, 5, 1).unwrap();
        assert_eq!(single.mean, single.min);
        assert_eq!(single.mean, single.max);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_topology(6, 0.2, 9).unwrap();
        let b = gen_topology(6, 0.2, 9).unwrap();
        assert_eq!(a, b);
        let a = gen_demand(6, 0.2, 9, 50).unwrap();
        let b = gen_demand(6, 0.2, 9, 50).unwrap();
        assert_eq!(a, b);
        for (_, _, w) in a.edges() {
            assert_eq!(w, w.round());
            assert!(w >= 0.0 && w <= 50.0);
        }
    }

    #[test]
    fn improvement_is_zero_for_degenerate_demand() {
        let (t, _) = triangle();
        let zero_demand = WeightedGraph::new(3);
        assert_eq!(improvement_pct(&t, &zero_demand, 0, 100).unwrap(), 0.0);

        let mut flat = WeightedGraph::new(3);
        flat.add_weight(0, 1, 2.0);
        flat.add_weight(1, 2, 2.0);
        flat.add_weight(0, 2, 2.0);
        let (_, d) = triangle();
        let pct = improvement_pct(&flat, &d, 0, 200).unwrap();
        assert!(pct.abs() < 1e-9, "symmetric instance improves by {pct}%");
    }
}
