//! The training engine: cost f(θ) = ⟨ψ(θ)|H|ψ(θ)⟩, its gradient, gradient
//! noise, and the classical optimizers consuming it.
//!
//! Gradients use the two-term parameter-shift rule for RX/RY slots (exact
//! for gates generated by two-eigenvalue operators) and a central finite
//! difference with step 1e-4 for Givens slots, whose generators break the
//! two-term rule. Shifted evaluations reuse a cached prefix state per slot
//! and run in parallel; the values are bit-identical to evaluating each
//! shifted circuit from scratch.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{run_circuit, CircuitTemplate};
use crate::pauli::{hamiltonian_norm, NormMode, PauliSum};
use crate::state::{apply_gate_in_place, ExpectationPlan, GateKind, Statevector};
use crate::{Result, SimError};

/// Finite-difference step for Givens parameter slots.
pub const GIVENS_FD_STEP: f64 = 1e-4;

/// Adaptive-noise prefactor for the chemistry task: 1/(96 · 24 · 8²).
pub const CHEMISTRY_NOISE_PREFACTOR: f64 = 1.0 / (96.0 * 24.0 * 64.0);

/// f(θ) = ⟨ψ(θ)|H|ψ(θ)⟩ with ψ(θ) the template run on its initial state.
pub fn cost(template: &CircuitTemplate, h: &PauliSum, theta: &[f64]) -> Result<f64> {
    let state = run_circuit(template, theta, &template.initial_state())?;
    let plan = ExpectationPlan::new(h, template.num_qubits())?;
    Ok(plan.evaluate(&state))
}

/// ∂f/∂θ, one component per parameter slot.
pub fn gradient(template: &CircuitTemplate, h: &PauliSum, theta: &[f64]) -> Result<Vec<f64>> {
    if theta.len() != template.num_params() {
        return Err(SimError::LengthMismatch {
            expected: template.num_params(),
            got: theta.len(),
            context: "parameter vector",
        });
    }
    let kinds = template.slot_kinds();
    let positions = template.slot_gate_positions();
    let plan = ExpectationPlan::new(h, template.num_qubits())?;
    // Slots visited in gate order so the running prefix state advances
    // monotonically through the circuit.
    let mut order: Vec<usize> = (0..template.num_params()).collect();
    order.sort_by_key(|&s| positions[s]);

    let mut grad = vec![0.0; template.num_params()];
    let mut cursor = template.initial_state();
    let mut applied = 0usize;
    for chunk in order.chunks(32) {
        let mut prefixes: Vec<(usize, Statevector)> = Vec::with_capacity(chunk.len());
        for &slot in chunk {
            let pos = positions[slot];
            template.apply_range(&mut cursor, theta, applied, pos);
            applied = pos;
            prefixes.push((slot, cursor.clone()));
        }
        let parts: Vec<(usize, f64)> = prefixes
            .par_iter()
            .map(|(slot, prefix)| {
                let pos = positions[*slot];
                let (step, denom) = match kinds[*slot] {
                    GateKind::Rx | GateKind::Ry => {
                        (std::f64::consts::FRAC_PI_2, 2.0)
                    }
                    _ => (GIVENS_FD_STEP, 2.0 * GIVENS_FD_STEP),
                };
                let plus = shifted_cost(template, &plan, theta, prefix, pos, theta[*slot] + step);
                let minus = shifted_cost(template, &plan, theta, prefix, pos, theta[*slot] - step);
                (*slot, (plus - minus) / denom)
            })
            .collect();
        for (slot, g) in parts {
            grad[slot] = g;
        }
    }
    Ok(grad)
}

/// Cost with the gate at `pos` run at `angle` instead of its bound value,
/// starting from the cached prefix state.
fn shifted_cost(
    template: &CircuitTemplate,
    plan: &ExpectationPlan,
    theta: &[f64],
    prefix: &Statevector,
    pos: usize,
    angle: f64,
) -> f64 {
    let mut state = prefix.clone();
    let gate = &template.gates()[pos];
    apply_gate_in_place(&mut state, gate.kind, &gate.targets, angle);
    template.apply_suffix(&mut state, theta, pos + 1);
    plan.evaluate(&state)
}

/// Which gradient-noise model a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    None,
    Constant,
    Adaptive,
}

/// Gaussian gradient-noise configuration.
///
/// CONSTANT adds i.i.d. Normal(0, `constant_variance`) to each component.
/// ADAPTIVE scales per-component variance as
/// `adaptive_prefactor · ‖H‖² · g_j²`, so a vanishing component receives
/// exactly zero noise.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub constant_variance: f64,
    pub adaptive_prefactor: f64,
    pub norm_mode: NormMode,
}

impl NoiseModel {
    pub fn none() -> Self {
        Self {
            kind: NoiseKind::None,
            constant_variance: 0.0,
            adaptive_prefactor: 0.0,
            norm_mode: NormMode::CoeffL1,
        }
    }

    pub fn constant(variance: f64) -> Self {
        Self {
            kind: NoiseKind::Constant,
            constant_variance: variance,
            adaptive_prefactor: 0.0,
            norm_mode: NormMode::CoeffL1,
        }
    }

    pub fn adaptive(prefactor: f64, norm_mode: NormMode) -> Self {
        Self {
            kind: NoiseKind::Adaptive,
            constant_variance: 0.0,
            adaptive_prefactor: prefactor,
            norm_mode,
        }
    }

    /// ‖H‖ under this model's norm mode (0 when unused).
    pub fn resolve_norm(&self, h: &PauliSum) -> Result<f64> {
        match self.kind {
            NoiseKind::Adaptive => hamiltonian_norm(h, self.norm_mode),
            _ => Ok(0.0),
        }
    }
}

/// Standard normal draw via the Box-Muller transform on the seeded
/// generator's uniform stream; identical seeds give identical draws.
pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    use rand::Rng;
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Perturb a gradient under the model. `h_norm` is ‖H‖ for ADAPTIVE (see
/// [`NoiseModel::resolve_norm`]); it is ignored otherwise.
pub fn inject_noise(grad: &[f64], model: &NoiseModel, h_norm: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match model.kind {
        NoiseKind::None => grad.to_vec(),
        NoiseKind::Constant => {
            let std = model.constant_variance.sqrt();
            grad.iter()
                .map(|g| g + std * standard_normal(rng))
                .collect()
        }
        NoiseKind::Adaptive => {
            let scale = model.adaptive_prefactor.sqrt() * h_norm;
            grad.iter()
                .map(|g| {
                    if *g == 0.0 {
                        *g
                    } else {
                        g + scale * g.abs() * standard_normal(rng)
                    }
                })
                .collect()
        }
    }
}

/// Which first-order optimizer to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizerKind {
    Gd,
    Adam,
}

/// Optimizer state: plain gradient descent or Adam with bias-corrected
/// moments ((β1, β2, ε) = (0.9, 0.999, 1e-8) by default).
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub kind: OptimizerKind,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
}

impl OptimizerState {
    pub fn gd(learning_rate: f64) -> Self {
        Self::new(OptimizerKind::Gd, learning_rate)
    }

    pub fn adam(learning_rate: f64) -> Self {
        Self::new(OptimizerKind::Adam, learning_rate)
    }

    pub fn new(kind: OptimizerKind, learning_rate: f64) -> Self {
        Self {
            kind,
            learning_rate,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            first_moment: Vec::new(),
            second_moment: Vec::new(),
            step_count: 0,
        }
    }
}

/// One optimizer update: returns the advanced state and new parameters.
pub fn optimizer_step(
    mut state: OptimizerState,
    theta: &[f64],
    grad: &[f64],
) -> Result<(OptimizerState, Vec<f64>)> {
    if theta.len() != grad.len() {
        return Err(SimError::LengthMismatch {
            expected: theta.len(),
            got: grad.len(),
            context: "gradient length",
        });
    }
    let lr = state.learning_rate;
    let next = match state.kind {
        OptimizerKind::Gd => theta
            .iter()
            .zip(grad)
            .map(|(t, g)| t - lr * g)
            .collect(),
        OptimizerKind::Adam => {
            if state.first_moment.is_empty() {
                state.first_moment = vec![0.0; theta.len()];
                state.second_moment = vec![0.0; theta.len()];
            }
            if state.first_moment.len() != theta.len() {
                return Err(SimError::LengthMismatch {
                    expected: state.first_moment.len(),
                    got: theta.len(),
                    context: "optimizer moment length",
                });
            }
            state.step_count += 1;
            let (b1, b2) = (state.adam_beta1, state.adam_beta2);
            let bc1 = 1.0 - b1.powi(state.step_count as i32);
            let bc2 = 1.0 - b2.powi(state.step_count as i32);
            let mut next = Vec::with_capacity(theta.len());
            for i in 0..theta.len() {
                let m = b1 * state.first_moment[i] + (1.0 - b1) * grad[i];
                let v = b2 * state.second_moment[i] + (1.0 - b2) * grad[i] * grad[i];
                state.first_moment[i] = m;
                state.second_moment[i] = v;
                let m_hat = m / bc1;
                let v_hat = v / bc2;
                next.push(theta[i] - lr * m_hat / (v_hat.sqrt() + state.adam_epsilon));
            }
            next
        }
    };
    if state.kind == OptimizerKind::Gd {
        state.step_count += 1;
    }
    Ok((state, next))
}

/// Per-epoch (loss, ‖grad‖₂) records of one seeded optimization round.
///
/// Epoch 0 logs pre-step metrics with the clean gradient; each later row
/// logs the loss after that optimizer step and the norm of the (possibly
/// noisy) gradient the step consumed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub epoch: usize,
    pub loss: f64,
    pub grad_l2_norm: f64,
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Run `epochs` optimizer steps from `theta0`, deterministic given `seed`.
pub fn run_training(
    template: &CircuitTemplate,
    h: &PauliSum,
    theta0: &[f64],
    optimizer: OptimizerState,
    noise: &NoiseModel,
    epochs: usize,
    seed: u64,
) -> Result<RunTrace> {
    if epochs < 1 {
        return Err(SimError::Invalid("epochs must be ≥ 1".into()));
    }
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_norm = noise.resolve_norm(h)?;

    let mut theta = theta0.to_vec();
    let mut opt = optimizer;
    let mut grad_clean = gradient(template, h, &theta)?;
    let loss0 = cost(template, h, &theta)?;
    if !loss0.is_finite() {
        return Err(SimError::NonFinite {
            context: "initial loss",
        });
    }
    let mut rows = Vec::with_capacity(epochs + 1);
    rows.push(TraceRow {
        epoch: 0,
        loss: loss0,
        grad_l2_norm: l2_norm(&grad_clean),
    });
    for epoch in 1..=epochs {
        if epoch > 1 {
            grad_clean = gradient(template, h, &theta)?;
        }
        let noisy = inject_noise(&grad_clean, noise, h_norm, &mut rng);
        let (next_opt, next_theta) = optimizer_step(opt, &theta, &noisy)?;
        opt = next_opt;
        theta = next_theta;
        let loss = cost(template, h, &theta)?;
        if !loss.is_finite() {
            return Err(SimError::NonFinite {
                context: "training loss",
            });
        }
        rows.push(TraceRow {
            epoch,
            loss,
            grad_l2_norm: l2_norm(&noisy),
        });
    }
    Ok(RunTrace { rows })
}
