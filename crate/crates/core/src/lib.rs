//! Exact statevector simulation for variational quantum circuits, together
//! with reinforcement-learning-based parameter initializers and a training
//! harness for barren-plateau experiments.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`state`] / [`circuit`]: a dense statevector simulator (RX, RY, CZ and
//!   Givens rotations) with Pauli-sum expectation values.
//! - [`pauli`]: Pauli-sum observables, a line-oriented text format for
//!   external Hamiltonians, and the Heisenberg chain builder.
//! - [`eig`]: an in-repo dense/Lanczos eigensolver used as a ground-energy
//!   oracle for small systems.
//! - [`ansatz`]: the layered hardware-efficient ansatz and the
//!   Givens-rotation chemistry ansatz with a Hartree-Fock reference.
//! - [`engine`]: the cost function f(θ) = ⟨ψ(θ)|H|ψ(θ)⟩, parameter-shift
//!   gradients, gradient-noise models, and GD/Adam training loops.
//! - [`rl`]: nine initializers producing θ₀: zero / uniform / Gaussian
//!   baselines and six single-step RL methods (DPG, DDPG, PPO, SAC, A2C,
//!   TRPO) that treat the parameter vector as a continuous action with
//!   reward = −cost.
//! - [`harness`]: experiment configuration, multi-round seeded runs, CSV
//!   traces, summary statistics and SVG comparison plots.

pub mod ansatz;
pub mod circuit;
pub mod eig;
pub mod engine;
pub mod harness;
pub mod pauli;
pub mod rl;
pub mod state;

pub use circuit::{run_circuit, CircuitTemplate};
pub use eig::{exact_ground_energy, spectral_norm};
pub use engine::{cost, gradient, run_training, NoiseModel, OptimizerState, RunTrace};
pub use pauli::{build_heisenberg, hamiltonian_norm, NormMode, PauliString, PauliSum};
pub use state::{apply_gate, pauli_expectation, prepare_basis_state, GateDescriptor, GateKind, Statevector};

/// Errors produced by the simulator and training engine.
#[derive(Debug, Clone, thiserror::Error)]
pub enum SimError {
    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("basis index {index} out of range for {num_qubits} qubits")]
    BasisIndexOutOfRange { index: usize, num_qubits: usize },
    #[error("gate {kind:?} expects {expected} distinct targets, got {got}")]
    BadTargets {
        kind: state::GateKind,
        expected: usize,
        got: usize,
    },
    #[error("gate {kind:?} {}", if *.needs_angle { "requires an angle" } else { "takes no angle" })]
    AngleMismatch {
        kind: state::GateKind,
        needs_angle: bool,
    },
    #[error("parameter slot {slot} out of range for {num_params} parameters")]
    SlotOutOfRange { slot: usize, num_params: usize },
    #[error("expected {expected} values, got {got} ({context})")]
    LengthMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },
    #[error("system of {num_qubits} qubits exceeds the {max}-qubit solver bound")]
    SystemTooLarge { num_qubits: usize, max: usize },
    #[error("non-finite cost encountered ({context})")]
    NonFinite { context: &'static str },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
