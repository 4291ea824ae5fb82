//! Parameterized circuit templates and their execution.

use crate::state::{apply_gate_in_place, GateDescriptor, Statevector};
use crate::{prepare_basis_state, Result, SimError};

/// An ordered gate list with parameter-slot bindings and a fixed initial
/// basis state. Every slot in 0..num_params is used by exactly one gate.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitTemplate {
    num_qubits: usize,
    gates: Vec<GateDescriptor>,
    num_params: usize,
    initial_basis_index: usize,
}

impl CircuitTemplate {
    /// Validate every gate, the slot cover {0..num_params-1}, and the
    /// initial index.
    pub fn new(
        num_qubits: usize,
        gates: Vec<GateDescriptor>,
        initial_basis_index: usize,
    ) -> Result<Self> {
        if initial_basis_index >= 1usize << num_qubits {
            return Err(SimError::BasisIndexOutOfRange {
                index: initial_basis_index,
                num_qubits,
            });
        }
        let mut slots: Vec<usize> = Vec::new();
        for g in &gates {
            g.validate(num_qubits)?;
            if let Some(s) = g.param_slot {
                slots.push(s);
            }
        }
        let num_params = slots.len();
        let mut seen = vec![false; num_params];
        for s in slots {
            if s >= num_params || seen[s] {
                return Err(SimError::SlotOutOfRange {
                    slot: s,
                    num_params,
                });
            }
            seen[s] = true;
        }
        Ok(Self {
            num_qubits,
            gates,
            num_params,
            initial_basis_index,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateDescriptor] {
        &self.gates
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn initial_basis_index(&self) -> usize {
        self.initial_basis_index
    }

    /// The template's fixed initial state.
    pub fn initial_state(&self) -> Statevector {
        prepare_basis_state(self.num_qubits, self.initial_basis_index)
            .expect("validated on construction")
    }

    /// Gate kind owning each slot, indexed by slot.
    pub(crate) fn slot_kinds(&self) -> Vec<crate::state::GateKind> {
        let mut kinds = vec![crate::state::GateKind::Rx; self.num_params];
        for g in &self.gates {
            if let Some(s) = g.param_slot {
                kinds[s] = g.kind;
            }
        }
        kinds
    }

    /// Index into `gates` of the gate owning each slot.
    pub(crate) fn slot_gate_positions(&self) -> Vec<usize> {
        let mut pos = vec![0usize; self.num_params];
        for (i, g) in self.gates.iter().enumerate() {
            if let Some(s) = g.param_slot {
                pos[s] = i;
            }
        }
        pos
    }

    /// Apply gates `from..to` to `state` in place, reading angles from `theta`.
    pub(crate) fn apply_range(&self, state: &mut Statevector, theta: &[f64], from: usize, to: usize) {
        for g in &self.gates[from..to] {
            let angle = g.param_slot.map(|s| theta[s]).unwrap_or(0.0);
            apply_gate_in_place(state, g.kind, &g.targets, angle);
        }
    }

    /// Apply gates `from..` to `state` in place.
    pub(crate) fn apply_suffix(&self, state: &mut Statevector, theta: &[f64], from: usize) {
        self.apply_range(state, theta, from, self.gates.len());
    }
}

/// Run the template on `initial`, applying gates in order with angles from
/// `theta`. Pure: the input state is not modified.
pub fn run_circuit(
    template: &CircuitTemplate,
    theta: &[f64],
    initial: &Statevector,
) -> Result<Statevector> {
    if theta.len() != template.num_params {
        return Err(SimError::LengthMismatch {
            expected: template.num_params,
            got: theta.len(),
            context: "parameter vector",
        });
    }
    if initial.num_qubits() != template.num_qubits {
        return Err(SimError::LengthMismatch {
            expected: template.num_qubits,
            got: initial.num_qubits(),
            context: "initial state qubits",
        });
    }
    let mut state = initial.clone();
    template.apply_suffix(&mut state, theta, 0);
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::build_heisenberg_ansatz;
    use crate::state::{GateDescriptor, GateKind};
    use num_complex::Complex64;

    #[test]
    fn empty_template_is_identity() {
        let t = CircuitTemplate::new(2, vec![], 0).unwrap();
        let s = t.initial_state();
        let out = run_circuit(&t, &[], &s).unwrap();
        assert_eq!(out.amplitudes(), s.amplitudes());
    }

    #[test]
    fn heisenberg_ansatz_at_zero_fixes_vacuum() {
        let t = build_heisenberg_ansatz(2, 1).unwrap();
        let out = run_circuit(&t, &vec![0.0; t.num_params()], &t.initial_state()).unwrap();
        assert_eq!(out.amplitudes()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn single_gate_template_matches_gate_oracle() {
        let t = CircuitTemplate::new(
            1,
            vec![GateDescriptor::new(GateKind::Rx, vec![0], Some(0))],
            0,
        )
        .unwrap();
        let out = run_circuit(&t, &[std::f64::consts::PI], &t.initial_state()).unwrap();
        assert!((out.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn slot_validation() {
        // Gap in slots: only slot 1 used.
        let r = CircuitTemplate::new(
            1,
            vec![GateDescriptor::new(GateKind::Rx, vec![0], Some(1))],
            0,
        );
        assert!(r.is_err());
        // Shared slot.
        let r = CircuitTemplate::new(
            2,
            vec![
                GateDescriptor::new(GateKind::Rx, vec![0], Some(0)),
                GateDescriptor::new(GateKind::Ry, vec![1], Some(0)),
            ],
            0,
        );
        assert!(r.is_err());
    }

    #[test]
    fn theta_length_checked() {
        let t = build_heisenberg_ansatz(2, 1).unwrap();
        assert!(run_circuit(&t, &[0.0], &t.initial_state()).is_err());
    }
}
