//! Builders for the two circuit families under study.
//!
//! - The layered hardware-efficient ansatz: per layer a ring of CZ gates
//!   over neighboring pairs (including the wrap pair), then RX on every
//!   qubit, then RY on every qubit; 2·N·L parameters on |0⟩^⊗N.
//! - The Givens-rotation chemistry ansatz: particle-conserving single and
//!   double excitation rotations applied to a Hartree-Fock reference
//!   |1⟩^⊗n_e ⊗ |0⟩^⊗(n_0-n_e), one parameter per rotation.

use crate::circuit::CircuitTemplate;
use crate::state::{GateDescriptor, GateKind};
use crate::{Result, SimError};

/// Layered CZ-ring + RX + RY ansatz over `num_qubits` and `num_layers`.
///
/// At N=2 the ring pair set {(0,1),(1,0)} collapses to a single CZ: CZ is
/// symmetric and self-inverse, so applying both members would cancel.
pub fn build_heisenberg_ansatz(num_qubits: usize, num_layers: usize) -> Result<CircuitTemplate> {
    if num_qubits < 2 || num_layers < 1 {
        return Err(SimError::Invalid(
            "layered ansatz needs N ≥ 2 and L ≥ 1".into(),
        ));
    }
    let mut gates = Vec::new();
    let mut slot = 0;
    for _ in 0..num_layers {
        if num_qubits == 2 {
            gates.push(GateDescriptor::new(GateKind::Cz, vec![0, 1], None));
        } else {
            for q in 0..num_qubits {
                gates.push(GateDescriptor::new(
                    GateKind::Cz,
                    vec![q, (q + 1) % num_qubits],
                    None,
                ));
            }
        }
        for q in 0..num_qubits {
            gates.push(GateDescriptor::new(GateKind::Rx, vec![q], Some(slot)));
            slot += 1;
        }
        for q in 0..num_qubits {
            gates.push(GateDescriptor::new(GateKind::Ry, vec![q], Some(slot)));
            slot += 1;
        }
    }
    CircuitTemplate::new(num_qubits, gates, 0)
}

/// Kind of excitation rotation in a Givens ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationKind {
    Single,
    Double,
}

/// One particle-conserving rotation: SINGLE acts on (occupied, virtual),
/// DOUBLE on (occ, occ, virt, virt).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GivensRotation {
    pub kind: RotationKind,
    pub targets: Vec<usize>,
}

/// Electron/orbital counts plus an ordered rotation list.
#[derive(Debug, Clone, PartialEq)]
pub struct GivensAnsatzSpec {
    pub num_electrons: usize,
    pub num_orbitals: usize,
    pub rotations: Vec<GivensRotation>,
}

impl GivensAnsatzSpec {
    fn validate(&self) -> Result<()> {
        if self.num_electrons > self.num_orbitals {
            return Err(SimError::Invalid(format!(
                "{} electrons exceed {} orbitals",
                self.num_electrons, self.num_orbitals
            )));
        }
        for r in &self.rotations {
            let expected = match r.kind {
                RotationKind::Single => 2,
                RotationKind::Double => 4,
            };
            if r.targets.len() != expected {
                return Err(SimError::Invalid(format!(
                    "{:?} rotation needs {expected} targets, got {}",
                    r.kind,
                    r.targets.len()
                )));
            }
            for &t in &r.targets {
                if t >= self.num_orbitals {
                    return Err(SimError::QubitOutOfRange {
                        qubit: t,
                        num_qubits: self.num_orbitals,
                    });
                }
            }
        }
        Ok(())
    }

    /// Index of the Hartree-Fock ket |1⟩^⊗n_e ⊗ |0⟩^⊗(n_0-n_e) under the
    /// qubit-to-bit convention (qubit i is bit N-1-i).
    pub fn hartree_fock_index(&self) -> usize {
        let mut index = 0usize;
        for q in 0..self.num_electrons {
            index |= 1usize << (self.num_orbitals - 1 - q);
        }
        index
    }
}

/// Compile a Givens spec into a template: one parameter per rotation, in
/// listed order, starting from the Hartree-Fock state.
pub fn build_givens_ansatz(spec: &GivensAnsatzSpec) -> Result<CircuitTemplate> {
    spec.validate()?;
    let gates = spec
        .rotations
        .iter()
        .enumerate()
        .map(|(slot, r)| {
            let kind = match r.kind {
                RotationKind::Single => GateKind::GivensSingle,
                RotationKind::Double => GateKind::GivensDouble,
            };
            GateDescriptor::new(kind, r.targets.clone(), Some(slot))
        })
        .collect();
    CircuitTemplate::new(spec.num_orbitals, gates, spec.hartree_fock_index())
}

/// The pinned default rotation layout for the 2-electron, 10-spin-orbital
/// chemistry task: 24 rotations.
///
/// Spin orbitals alternate up/down with qubit parity; the occupied set is
/// {0, 1}. The layout enumerates, in lexicographic target order:
///
/// - 8 spin-conserving single excitations: 0 → {2,4,6,8} and 1 → {3,5,7,9}
///   (SINGLE on (occupied, virtual));
/// - 16 spin-conserving double excitations (0,1) → (v1,v2) over all
///   opposite-parity virtual pairs v1 < v2 (DOUBLE on (0, 1, v1, v2)).
///
/// Every rotation preserves Hamming weight, so the 24-parameter circuit
/// explores exactly the 2-particle sector reachable from Hartree-Fock.
pub fn default_lih_rotation_layout() -> GivensAnsatzSpec {
    let num_electrons = 2;
    let num_orbitals = 10;
    let mut rotations = Vec::with_capacity(24);
    for occ in 0..num_electrons {
        for virt in (num_electrons..num_orbitals).filter(|v| v % 2 == occ % 2) {
            rotations.push(GivensRotation {
                kind: RotationKind::Single,
                targets: vec![occ, virt],
            });
        }
    }
    for v1 in num_electrons..num_orbitals {
        for v2 in v1 + 1..num_orbitals {
            if (v1 + v2) % 2 == 1 {
                rotations.push(GivensRotation {
                    kind: RotationKind::Double,
                    targets: vec![0, 1, v1, v2],
                });
            }
        }
    }
    debug_assert_eq!(rotations.len(), 24);
    GivensAnsatzSpec {
        num_electrons,
        num_orbitals,
        rotations,
    }
}
