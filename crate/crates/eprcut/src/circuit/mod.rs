//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered gate list over `num_qubits` logical qubits.
//! Gate order is execution order; all cost models in this crate are driven by
//! the sequence of two-qubit gates. Angles are carried through parsing and
//! generation but ignored by every cost model (entanglement cost does not
//! depend on rotation angles).

mod generators;
mod parse;

pub use generators::{gen_qaoa, gen_qft, gen_qv};
pub use parse::{parse_circuit, CircuitFormat};

use crate::error::{Error, Result};
use std::fmt::Write as _;

/// Supported gate kinds. `Cr` is a controlled rotation (controlled-phase
/// family); `Swap` is kept first-class because swap accounting matters for
/// QFT cost analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Z,
    Rz,
    Cx,
    Cr,
    Swap,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::Rz => "rz",
            GateKind::Cx => "cx",
            GateKind::Cr => "cr",
            GateKind::Swap => "swap",
        }
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::Cx | GateKind::Cr | GateKind::Swap)
    }

    fn has_angle(self) -> bool {
        matches!(self, GateKind::Rz | GateKind::Cr)
    }
}

/// One gate. For `Cx`/`Cr` the first qubit is the control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    qubits: (usize, Option<usize>),
    angle: Option<f64>,
}

impl Gate {
    pub fn h(q: usize) -> Self {
        Self::one(GateKind::H, q, None)
    }

    pub fn x(q: usize) -> Self {
        Self::one(GateKind::X, q, None)
    }

    pub fn z(q: usize) -> Self {
        Self::one(GateKind::Z, q, None)
    }

    pub fn rz(q: usize, angle: f64) -> Self {
        Self::one(GateKind::Rz, q, Some(angle))
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::two(GateKind::Cx, control, target, None)
    }

    pub fn cr(control: usize, target: usize, angle: f64) -> Self {
        Self::two(GateKind::Cr, control, target, Some(angle))
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::two(GateKind::Swap, a, b, None)
    }

    fn one(kind: GateKind, q: usize, angle: Option<f64>) -> Self {
        Gate {
            kind,
            qubits: (q, None),
            angle,
        }
    }

    fn two(kind: GateKind, a: usize, b: usize, angle: Option<f64>) -> Self {
        assert_ne!(a, b, "two-qubit gate needs distinct qubits");
        Gate {
            kind,
            qubits: (a, Some(b)),
            angle,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits.1.is_some()
    }

    /// Qubit pair of a two-qubit gate (control first for `Cx`/`Cr`).
    pub fn qubit_pair(&self) -> Option<(usize, usize)> {
        self.qubits.1.map(|b| (self.qubits.0, b))
    }

    /// First (or only) qubit the gate acts on.
    pub fn qubit(&self) -> usize {
        self.qubits.0
    }

    pub fn angle(&self) -> Option<f64> {
        self.angle
    }

    pub fn max_qubit(&self) -> usize {
        match self.qubits.1 {
            Some(b) => self.qubits.0.max(b),
            None => self.qubits.0,
        }
    }
}

/// Ordered gate list over `num_qubits` logical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Builds a circuit, checking that every gate index is in range.
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::invalid("circuit needs at least one qubit"));
        }
        for gate in &gates {
            if gate.max_qubit() >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: gate.max_qubit(),
                    num_qubits,
                });
            }
        }
        Ok(Circuit { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of two-qubit gates (the `n` that windows are measured in).
    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Qubit pairs of all two-qubit gates, in execution order.
    pub fn two_qubit_pairs(&self) -> Vec<(usize, usize)> {
        self.gates.iter().filter_map(|g| g.qubit_pair()).collect()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// Renders the circuit in gatelist format. `parse_circuit` of the output
    /// reproduces the circuit exactly, including the qubit count.
    pub fn to_gatelist(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "qubits {}", self.num_qubits);
        for gate in &self.gates {
            match (gate.qubit_pair(), gate.angle) {
                (Some((a, b)), Some(angle)) => {
                    let _ = writeln!(out, "{} {} {} {}", gate.kind.name(), a, b, angle);
                }
                (Some((a, b)), None) => {
                    let _ = writeln!(out, "{} {} {}", gate.kind.name(), a, b);
                }
                (None, Some(angle)) => {
                    let _ = writeln!(out, "{} {} {}", gate.kind.name(), gate.qubit(), angle);
                }
                (None, None) => {
                    let _ = writeln!(out, "{} {}", gate.kind.name(), gate.qubit());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_constructors_track_roles() {
        let g = Gate::cr(2, 5, 0.25);
        assert_eq!(g.qubit_pair(), Some((2, 5)));
        assert_eq!(g.angle(), Some(0.25));
        assert!(g.is_two_qubit());
        assert!(!Gate::h(3).is_two_qubit());
    }

    #[test]
    #[should_panic]
    fn two_qubit_gate_rejects_identical_qubits() {
        let _ = Gate::cx(1, 1);
    }

    #[test]
    fn circuit_rejects_out_of_range_indices() {
        let err = Circuit::new(2, vec![Gate::cx(0, 2)]).unwrap_err();
        assert!(matches!(err, Error::QubitOutOfRange { index: 2, .. }));
    }

    #[test]
    fn two_qubit_counting_ignores_single_qubit_gates() {
        let c = Circuit::new(3, vec![Gate::h(0), Gate::cx(0, 1), Gate::rz(2, 0.1)]).unwrap();
        assert_eq!(c.two_qubit_count(), 1);
        assert_eq!(c.two_qubit_pairs(), vec![(0, 1)]);
    }
}
