//! Structure-aware distributed-QFT planners.
//!
//! Both planners emit explicit event lists that a replay validator can check:
//! teleports (one EPR each), controlled rotations that must be co-located at
//! event time, and Hadamards. The multi-QPU planner's second phase applies
//! remote rotation groups through cat-entangler sessions: a session projects
//! the target onto the control block's QPU through one EPR pair, every
//! rotation of the group runs there, and the disentangling measurement is
//! free. Qubits therefore never leave their final position in phase 2, which
//! is what keeps the total at `n*m/2` while the final layout comes out in
//! reversed order with no SWAP gates at all.
//!
//! Occupancy accounting: teleported qubits land in computation slots; a cat
//! session occupies the communication qubit of each end, not a computation
//! slot. One communication qubit per QPU serializes the sessions, and the
//! plans are sequential event lists, so no contention arises.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum QftEvent {
    /// Hadamard on a resident qubit.
    Hadamard { qubit: usize, qpu: usize },
    /// Controlled rotation applied on `qpu`; control and target must both be
    /// present there (resident or cat-linked).
    ControlledRotation {
        control: usize,
        target: usize,
        qpu: usize,
    },
    /// State teleportation. One EPR pair.
    Teleport { qubit: usize, from: usize, to: usize },
    /// Opens a cat-entangler session: `qubit` stays home but becomes present
    /// at `remote`. One EPR pair.
    CatLink {
        qubit: usize,
        home: usize,
        remote: usize,
    },
    /// Closes a cat session (measurement plus classical correction; free).
    CatUnlink {
        qubit: usize,
        home: usize,
        remote: usize,
    },
}

/// A distributed-QFT execution plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QftPlan {
    pub n: usize,
    pub m: usize,
    /// Qubits per QPU in the initial block layout (`n / m`).
    pub qubits_per_qpu: usize,
    /// Declared computational capacity per QPU.
    pub capacity: usize,
    pub initial_layout: Vec<usize>,
    pub events: Vec<QftEvent>,
    pub epr_used: u64,
    /// `qubit -> (qpu, slot)`; global position `qpu * (n/m) + slot` realizes
    /// the reversed QFT output order.
    pub final_layout: Vec<(usize, usize)>,
    /// EPR pairs consumed per first-phase iteration (multi-QPU planner).
    pub phase1_epr: Vec<u64>,
    /// EPR pairs consumed per second-phase iteration (multi-QPU planner).
    pub phase2_epr: Vec<u64>,
}

impl QftPlan {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    /// `n,m,epr_used,formula` row for CSV aggregation.
    pub fn summary_csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.n,
            self.m,
            self.epr_used,
            self.n * self.m / 2
        )
    }
}

/// EPR pairs used by the two-QPU plan: exactly `n`.
pub fn epr_two(n: usize) -> Result<u64> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid("epr_two is defined for even n >= 2"));
    }
    Ok(n as u64)
}

/// EPR pairs used by the multi-QPU plan: `n*m/2`.
pub fn epr_multi(n: usize, m: usize) -> Result<u64> {
    check_multi_domain(n, m)?;
    Ok((n * m / 2) as u64)
}

/// EPR pairs for the block-pairwise scheme extended with the final swap
/// layer: `n*m/2 + n/2`.
pub fn epr_neumann(n: usize, m: usize) -> Result<u64> {
    check_multi_domain(n, m)?;
    Ok((n * m / 2 + n / 2) as u64)
}

fn check_multi_domain(n: usize, m: usize) -> Result<()> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::invalid("QPU count m must be even and >= 2"));
    }
    if n == 0 || n % m != 0 {
        return Err(Error::invalid("n must be a positive multiple of m"));
    }
    Ok(())
}

struct PlanBuilder {
    events: Vec<QftEvent>,
    location: Vec<usize>,
    epr: u64,
}

impl PlanBuilder {
    fn new(initial: Vec<usize>) -> Self {
        PlanBuilder {
            events: Vec::new(),
            location: initial,
            epr: 0,
        }
    }

    fn h(&mut self, qubit: usize) {
        self.events.push(QftEvent::Hadamard {
            qubit,
            qpu: self.location[qubit],
        });
    }

    fn cr(&mut self, control: usize, target: usize, qpu: usize) {
        self.events.push(QftEvent::ControlledRotation {
            control,
            target,
            qpu,
        });
    }

    fn teleport(&mut self, qubit: usize, to: usize) {
        let from = self.location[qubit];
        debug_assert_ne!(from, to);
        self.events.push(QftEvent::Teleport { qubit, from, to });
        self.location[qubit] = to;
        self.epr += 1;
    }

    fn cat(&mut self, qubit: usize, remote: usize, body: impl FnOnce(&mut Self)) {
        let home = self.location[qubit];
        self.events.push(QftEvent::CatLink {
            qubit,
            home,
            remote,
        });
        self.epr += 1;
        body(self);
        self.events.push(QftEvent::CatUnlink {
            qubit,
            home,
            remote,
        });
    }
}

/// Distributes QFT(n) over two QPUs of capacity `n/2 + 1` using `n` EPR
/// pairs: each second-half qubit teleports to QPU 0 for its controlled
/// rotations, and a first-half qubit teleports the other way, landing in its
/// reversed output position.
pub fn plan_qft_two(n: usize) -> Result<QftPlan> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid(
            "the two-QPU construction needs an even n >= 2",
        ));
    }
    let h = n / 2;
    let initial: Vec<usize> = (0..n).map(|q| usize::from(q >= h)).collect();
    let mut b = PlanBuilder::new(initial.clone());

    // First-half stages: H plus the rotations available inside QPU 0.
    for target in 0..h {
        b.h(target);
        for control in (target + 1)..h {
            b.cr(control, target, 0);
        }
    }

    // Interleaved exchange: control j comes over, fans out, and frees its
    // slot by sending qubit n-1-j to QPU 1, where that qubit's remaining
    // controls still live.
    for j in h..n {
        b.teleport(j, 0);
        for target in 0..=(n - 1 - j) {
            b.cr(j, target, 0);
        }
        let out = n - 1 - j;
        b.teleport(out, 1);
        for control in (j + 1)..n {
            b.cr(control, out, 1);
        }
    }

    // Second-half stages are local on QPU 0 by now.
    for target in h..n {
        b.h(target);
        for control in (target + 1)..n {
            b.cr(control, target, 0);
        }
    }

    let final_layout = reversed_layout(n, 2);
    Ok(QftPlan {
        n,
        m: 2,
        qubits_per_qpu: h,
        capacity: h + 1,
        initial_layout: initial,
        epr_used: b.epr,
        events: b.events,
        final_layout,
        phase1_epr: Vec::new(),
        phase2_epr: Vec::new(),
    })
}

/// Distributes QFT(n) over `m` QPUs (m even, k = n/m qubits each, capacity
/// k+1) using exactly `n*m/2` EPR pairs.
///
/// Phase 1 (iterations p = 0..m/2): block p's qubits travel
/// `p -> p-1 -> ... -> 0 -> p+1 -> ... -> m-1-p`, collecting their rotation
/// fans, and settle at QPU `m-1-p`; after each traveler, the lowest-index
/// remaining qubit of block `m-1-p` backfills to QPU p and fans onto the
/// targets still waiting there. Phase 2 (iterations p = m/2-1..0): block
/// `m-1-p`, now sitting at QPU p, takes its remaining rotations from the
/// relocated higher blocks via one cat session per (qubit, block).
pub fn plan_qft_multi(n: usize, m: usize) -> Result<QftPlan> {
    check_multi_domain(n, m)?;
    let k = n / m;
    let block = |g: usize| (g * k)..((g + 1) * k);
    let initial: Vec<usize> = (0..n).map(|q| q / k).collect();
    let mut b = PlanBuilder::new(initial.clone());

    // Control-eligible residents per QPU: qubits that still owe rotations to
    // visiting targets.
    let mut pool: Vec<BTreeSet<usize>> = (0..m).map(|g| block(g).collect()).collect();
    let mut phase1_epr = Vec::with_capacity(m / 2);
    let mut phase2_epr = Vec::with_capacity(m / 2);

    // Phase 1.
    for p in 0..m / 2 {
        let epr_before = b.epr;
        let partner = m - 1 - p;

        for target in block(p) {
            b.h(target);
            for control in (target + 1)..block(p).end {
                b.cr(control, target, p);
            }
        }

        let route: Vec<usize> = (0..p).rev().chain((p + 1)..=partner).collect();
        let targets: Vec<usize> = block(p).collect();
        for (j, &target) in targets.iter().enumerate() {
            pool[p].remove(&target);
            for &stop in &route {
                b.teleport(target, stop);
                for &control in &pool[stop] {
                    b.cr(control, target, stop);
                }
            }
            // Backfill: the lowest-index original of the partner block moves
            // into the freed slot and fans onto the targets still waiting.
            let fill = *pool[partner].iter().next().expect("partner block not empty");
            pool[partner].remove(&fill);
            b.teleport(fill, p);
            for &waiting in &targets[j + 1..] {
                b.cr(fill, waiting, p);
            }
            pool[p].insert(fill);
        }
        phase1_epr.push(b.epr - epr_before);
    }

    // Phase 2.
    for p in (0..m / 2).rev() {
        let epr_before = b.epr;
        let home_block = m - 1 - p;

        for target in block(home_block) {
            b.h(target);
            for control in (target + 1)..block(home_block).end {
                b.cr(control, target, p);
            }
        }
        for target in block(home_block) {
            for remote in (0..p).rev() {
                b.cat(target, remote, |b| {
                    let controls: Vec<usize> = pool[remote].iter().copied().collect();
                    for control in controls {
                        b.cr(control, target, remote);
                    }
                });
            }
        }
        phase2_epr.push(b.epr - epr_before);
    }

    let final_layout = reversed_layout(n, m);
    Ok(QftPlan {
        n,
        m,
        qubits_per_qpu: k,
        capacity: k + 1,
        initial_layout: initial,
        epr_used: b.epr,
        events: b.events,
        final_layout,
        phase1_epr,
        phase2_epr,
    })
}

/// Layout that realizes the reversed output order: qubit `q` sits at global
/// position `n-1-q`.
fn reversed_layout(n: usize, m: usize) -> Vec<(usize, usize)> {
    let per = n / m;
    (0..n)
        .map(|q| {
            let pos = n - 1 - q;
            (pos / per, pos % per)
        })
        .collect()
}

/// Replays a plan and checks the full distributed-QFT contract: rotation
/// coverage equals the QFT's controlled-rotation set exactly, every rotation
/// is applied co-located and between the target's and control's Hadamards,
/// occupancy stays within the declared capacity, there are no SWAPs (the
/// event vocabulary has none), and the final layout realizes the reversed
/// order.
pub fn validate_qft_plan(n: usize, plan: &QftPlan) -> Vec<String> {
    let mut violations = Vec::new();
    if plan.n != n {
        violations.push(format!("plan is for n={}, expected n={n}", plan.n));
        return violations;
    }
    if plan.m == 0 || n % plan.m != 0 {
        violations.push(format!("QPU count {} does not divide n={n}", plan.m));
        return violations;
    }
    if plan.initial_layout.len() != n || plan.final_layout.len() != n {
        violations.push("layout vectors must cover every qubit".into());
        return violations;
    }

    let mut location = plan.initial_layout.clone();
    let mut occupancy = vec![0usize; plan.m];
    for &qpu in &location {
        if qpu >= plan.m {
            violations.push(format!("initial layout references QPU {qpu}"));
            return violations;
        }
        occupancy[qpu] += 1;
    }
    for (qpu, &occ) in occupancy.iter().enumerate() {
        if occ > plan.capacity {
            violations.push(format!(
                "capacity exceeded on QPU {qpu} at start ({occ} > {})",
                plan.capacity
            ));
        }
    }

    let mut h_done = vec![false; n];
    let mut cat_links: BTreeMap<usize, usize> = BTreeMap::new(); // qubit -> remote
    let mut busy_comm: BTreeSet<usize> = BTreeSet::new();
    let mut coverage: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut epr = 0u64;

    let present = |q: usize, qpu: usize, location: &[usize], cat: &BTreeMap<usize, usize>| {
        location[q] == qpu || cat.get(&q) == Some(&qpu)
    };

    for (i, event) in plan.events.iter().enumerate() {
        match *event {
            QftEvent::Hadamard { qubit, qpu } => {
                if qubit >= n {
                    violations.push(format!("event {i}: unknown qubit {qubit}"));
                    continue;
                }
                if location[qubit] != qpu {
                    violations.push(format!("event {i}: H on qubit {qubit} away from its QPU"));
                }
                if h_done[qubit] {
                    violations.push(format!("event {i}: ordering: second H on qubit {qubit}"));
                }
                h_done[qubit] = true;
            }
            QftEvent::ControlledRotation { control, target, qpu } => {
                if control >= n || target >= n || control == target {
                    violations.push(format!("event {i}: malformed rotation"));
                    continue;
                }
                if !present(control, qpu, &location, &cat_links)
                    || !present(target, qpu, &location, &cat_links)
                {
                    violations.push(format!(
                        "event {i}: rotation ({control} -> {target}) not co-located on QPU {qpu}"
                    ));
                }
                if !h_done[target] {
                    violations.push(format!(
                        "event {i}: ordering: rotation targets qubit {target} before its H"
                    ));
                }
                if h_done[control] {
                    violations.push(format!(
                        "event {i}: ordering: control {control} already passed its H"
                    ));
                }
                *coverage.entry((control, target)).or_insert(0) += 1;
            }
            QftEvent::Teleport { qubit, from, to } => {
                if qubit >= n || from >= plan.m || to >= plan.m || from == to {
                    violations.push(format!("event {i}: malformed teleport"));
                    continue;
                }
                if location[qubit] != from {
                    violations.push(format!("event {i}: teleport of qubit {qubit} from the wrong QPU"));
                }
                if cat_links.contains_key(&qubit) {
                    violations.push(format!("event {i}: teleport during a cat session"));
                }
                occupancy[location[qubit]] -= 1;
                occupancy[to] += 1;
                location[qubit] = to;
                if occupancy[to] > plan.capacity {
                    violations.push(format!(
                        "event {i}: capacity exceeded on QPU {to} ({} > {})",
                        occupancy[to], plan.capacity
                    ));
                }
                epr += 1;
            }
            QftEvent::CatLink { qubit, home, remote } => {
                if qubit >= n || home >= plan.m || remote >= plan.m || home == remote {
                    violations.push(format!("event {i}: malformed cat link"));
                    continue;
                }
                if location[qubit] != home {
                    violations.push(format!("event {i}: cat link from the wrong home QPU"));
                }
                if cat_links.contains_key(&qubit) {
                    violations.push(format!("event {i}: qubit {qubit} already cat-linked"));
                }
                if busy_comm.contains(&home) || busy_comm.contains(&remote) {
                    violations.push(format!("event {i}: communication qubit already in use"));
                }
                cat_links.insert(qubit, remote);
                busy_comm.insert(home);
                busy_comm.insert(remote);
                epr += 1;
            }
            QftEvent::CatUnlink { qubit, home, remote } => {
                if cat_links.get(&qubit) != Some(&remote) || location.get(qubit) != Some(&home) {
                    violations.push(format!("event {i}: cat unlink without a matching session"));
                    continue;
                }
                cat_links.remove(&qubit);
                busy_comm.remove(&home);
                busy_comm.remove(&remote);
            }
        }
    }

    if !cat_links.is_empty() {
        violations.push("cat sessions left open at the end of the plan".into());
    }
    if epr != plan.epr_used {
        violations.push(format!(
            "plan claims {} EPR pairs, replay counts {epr}",
            plan.epr_used
        ));
    }

    // Coverage: exactly the QFT rotation set, each pair once.
    for target in 0..n {
        for control in (target + 1)..n {
            match coverage.remove(&(control, target)) {
                Some(1) => {}
                Some(times) => violations.push(format!(
                    "coverage: rotation ({control} -> {target}) applied {times} times"
                )),
                None => violations.push(format!(
                    "coverage: rotation ({control} -> {target}) missing"
                )),
            }
        }
    }
    for ((control, target), _) in coverage {
        violations.push(format!(
            "coverage: unexpected rotation ({control} -> {target})"
        ));
    }
    for (qubit, done) in h_done.iter().enumerate() {
        if !done {
            violations.push(format!("coverage: qubit {qubit} never receives its H"));
        }
    }

    // Final layout: replayed residency must match, slots must be a bijection,
    // and positions must realize the reversed order.
    let per = n / plan.m;
    let mut used_slots: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (q, &(qpu, slot)) in plan.final_layout.iter().enumerate() {
        if location[q] != qpu {
            violations.push(format!(
                "layout: qubit {q} ends on QPU {} but final_layout says {qpu}",
                location[q]
            ));
        }
        if slot >= per || !used_slots.insert((qpu, slot)) {
            violations.push(format!("layout: bad or duplicate slot for qubit {q}"));
            continue;
        }
        if qpu * per + slot != n - 1 - q {
            violations.push(format!(
                "layout: qubit {q} sits at global position {} instead of {}",
                qpu * per + slot,
                n - 1 - q
            ));
        }
    }

    violations
}

/// `n,m,epr_used,formula` header matching [`QftPlan::summary_csv_row`].
pub fn summary_csv_header() -> String {
    let mut s = String::new();
    let _ = write!(s, "n,m,epr_used,formula");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qpu_plan_uses_n_pairs() {
        for n in (2..=16).step_by(2) {
            let plan = plan_qft_two(n).unwrap();
            assert_eq!(plan.epr_used, n as u64);
            let violations = validate_qft_plan(n, &plan);
            assert!(violations.is_empty(), "n={n}: {violations:?}");
        }
    }

    #[test]
    fn two_qpu_smallest_case() {
        let plan = plan_qft_two(2).unwrap();
        assert_eq!(plan.epr_used, 2);
        let rotations = plan
            .events
            .iter()
            .filter(|e| matches!(e, QftEvent::ControlledRotation { .. }))
            .count();
        assert_eq!(rotations, 1);
        assert!(validate_qft_plan(2, &plan).is_empty());
    }

    #[test]
    fn odd_or_tiny_inputs_are_rejected() {
        assert!(plan_qft_two(7).is_err());
        assert!(plan_qft_two(0).is_err());
        assert!(plan_qft_multi(12, 3).is_err());
        assert!(plan_qft_multi(10, 4).is_err());
    }

    #[test]
    fn multi_matches_the_closed_forms() {
        for m in [2usize, 4, 6, 8] {
            for k in 1..=4 {
                let n = k * m;
                let plan = plan_qft_multi(n, m).unwrap();
                assert_eq!(plan.epr_used, epr_multi(n, m).unwrap(), "n={n} m={m}");
                assert!(plan.epr_used <= (k * m * m / 2) as u64);
                assert!(epr_multi(n, m).unwrap() < epr_neumann(n, m).unwrap());
                let violations = validate_qft_plan(n, &plan);
                assert!(violations.is_empty(), "n={n} m={m}: {violations:?}");
            }
        }
    }

    #[test]
    fn multi_with_two_qpus_matches_the_two_qpu_cost() {
        let plan = plan_qft_multi(8, 2).unwrap();
        assert_eq!(plan.epr_used, 8);
        assert_eq!(plan.epr_used, plan_qft_two(8).unwrap().epr_used);
    }

    #[test]
    fn phase_budgets_hold() {
        let n = 16;
        let m = 4;
        let k = n / m;
        let plan = plan_qft_multi(n, m).unwrap();
        for (idx, &used) in plan.phase1_epr.iter().enumerate() {
            let i = idx + 1; // 1-based iteration
            assert!(used <= (k * (m + 1 - i)) as u64, "phase 1 iteration {i}");
        }
        for (idx, &used) in plan.phase2_epr.iter().enumerate() {
            let i = m / 2 - idx; // iterations run m/2 down to 1
            assert!(used <= (k * (i - 1)) as u64, "phase 2 iteration {i}");
        }
        let total: u64 = plan.phase1_epr.iter().sum::<u64>() + plan.phase2_epr.iter().sum::<u64>();
        assert_eq!(total, plan.epr_used);
    }

    #[test]
    fn validator_catches_mutations() {
        let n = 8;
        let mut plan = plan_qft_two(n).unwrap();
        // Remove the rotation (7 -> 0).
        let idx = plan
            .events
            .iter()
            .position(|e| {
                matches!(e, QftEvent::ControlledRotation { control: 7, target: 0, .. })
            })
            .unwrap();
        plan.events.remove(idx);
        let violations = validate_qft_plan(n, &plan);
        assert!(
            violations.iter().any(|v| v.contains("coverage") && v.contains("(7 -> 0)")),
            "{violations:?}"
        );

        // Understate the declared capacity: occupancy n/2+1 must be flagged.
        let mut plan = plan_qft_two(n).unwrap();
        plan.capacity = n / 2;
        let violations = validate_qft_plan(n, &plan);
        assert!(violations.iter().any(|v| v.contains("capacity")), "{violations:?}");

        let mut plan = plan_qft_two(n).unwrap();
        plan.epr_used += 1;
        let violations = validate_qft_plan(n, &plan);
        assert!(violations.iter().any(|v| v.contains("EPR")), "{violations:?}");
    }

    #[test]
    fn formulas_match_the_summary_values() {
        assert_eq!(epr_multi(16, 4).unwrap(), 32);
        assert_eq!(epr_neumann(16, 4).unwrap(), 40);
        assert_eq!(epr_two(8).unwrap(), 8);
        assert_eq!(epr_two(8).unwrap(), epr_multi(8, 2).unwrap());
        for m in [2usize, 4, 6, 8] {
            for k in 1..=8 {
                let n = k * m;
                assert_eq!(
                    epr_neumann(n, m).unwrap() - epr_multi(n, m).unwrap(),
                    (n / 2) as u64
                );
            }
        }
    }

    #[test]
    fn plan_json_roundtrip() {
        let plan = plan_qft_multi(8, 4).unwrap();
        let text = plan.to_json();
        let back: QftPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(plan, back);
        assert_eq!(plan.summary_csv_row(), "8,4,16,16");
    }
}
