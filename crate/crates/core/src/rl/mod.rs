//! Parameter initializers: classical baselines plus six single-step RL
//! methods that treat the circuit parameter vector as one continuous
//! action with reward = -cost.
//!
//! Every RL method keeps a policy parameter vector φ and emits the action
//! mean a = tanh(φ) componentwise, so returned parameters lie in (-1, 1);
//! an optional affine remap to [0, 2π] is available via [`remap_action`].
//! Stochastic methods (PPO, SAC, A2C, TRPO) sample actions from
//! Normal(tanh(φ), σ²I) with a fixed σ. Methods are deterministic given
//! their seed.

mod a2c;
mod baseline;
mod critic;
mod ddpg;
mod dpg;
mod ppo;
mod sac;
mod trpo;

pub use a2c::a2c_init;
pub use baseline::{baseline_init, BaselineKind, GaussianDerivation, GaussianInitParams, UniformRange};
pub use critic::{CriticGradients, CriticNet};
pub use ddpg::ddpg_init;
pub use dpg::dpg_init;
pub use ppo::ppo_init;
pub use sac::{entropy_bonus_gradient, sac_init};
pub use trpo::{trpo_init, trpo_init_with_diagnostics, TrpoDiagnostics};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::CircuitTemplate;
use crate::engine::{self, standard_normal, NoiseModel};
use crate::pauli::PauliSum;
use crate::{Result, SimError};

/// A black-box cost over length-P action vectors. RL methods only ever
/// evaluate it (and, for the deterministic-policy methods, its gradient).
/// Implementations may panic if `action.len() != dim()`; the initializers
/// always pass `dim()`-length actions.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn cost(&self, action: &[f64]) -> f64;
    fn cost_gradient(&self, action: &[f64]) -> Vec<f64>;
}

/// The circuit cost f(θ) as an [`Objective`].
///
/// With `remap` set, the RL action a ∈ (-1,1) is mapped to angles
/// π(a + 1) ∈ (0, 2π) before evaluation, so pre-training optimizes the
/// same landscape the returned initialization is used on.
pub struct VqaObjective<'a> {
    template: &'a CircuitTemplate,
    observable: &'a PauliSum,
    remap: bool,
    noise: Option<NoisyGradient>,
}

struct NoisyGradient {
    model: NoiseModel,
    h_norm: f64,
    rng: std::sync::Mutex<ChaCha8Rng>,
}

impl<'a> VqaObjective<'a> {
    pub fn new(template: &'a CircuitTemplate, observable: &'a PauliSum, remap: bool) -> Result<Self> {
        if observable.num_qubits() > template.num_qubits() {
            return Err(SimError::QubitOutOfRange {
                qubit: observable.num_qubits() - 1,
                num_qubits: template.num_qubits(),
            });
        }
        Ok(Self {
            template,
            observable,
            remap,
            noise: None,
        })
    }

    /// Route a gradient-noise model into pre-training gradients.
    pub fn with_noise(mut self, model: NoiseModel, seed: u64) -> Result<Self> {
        let h_norm = model.resolve_norm(self.observable)?;
        self.noise = Some(NoisyGradient {
            model,
            h_norm,
            rng: std::sync::Mutex::new(ChaCha8Rng::seed_from_u64(seed)),
        });
        Ok(self)
    }

    fn angles(&self, action: &[f64]) -> Vec<f64> {
        if self.remap {
            remap_action(action)
        } else {
            action.to_vec()
        }
    }
}

impl Objective for VqaObjective<'_> {
    fn dim(&self) -> usize {
        self.template.num_params()
    }

    fn cost(&self, action: &[f64]) -> f64 {
        engine::cost(self.template, self.observable, &self.angles(action))
            .expect("validated objective")
    }

    fn cost_gradient(&self, action: &[f64]) -> Vec<f64> {
        let mut g = engine::gradient(self.template, self.observable, &self.angles(action))
            .expect("validated objective");
        if let Some(noisy) = &self.noise {
            let mut rng = noisy.rng.lock().expect("rng mutex");
            g = engine::inject_noise(&g, &noisy.model, noisy.h_norm, &mut rng);
        }
        if self.remap {
            // d angle / d action = π
            for x in &mut g {
                *x *= std::f64::consts::PI;
            }
        }
        g
    }
}

/// The nine supported initializers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitMethod {
    Zero,
    Uniform,
    Gaussian,
    Dpg,
    Ddpg,
    Ppo,
    Sac,
    A2c,
    Trpo,
}

impl InitMethod {
    pub const ALL: [InitMethod; 9] = [
        InitMethod::Zero,
        InitMethod::Uniform,
        InitMethod::Gaussian,
        InitMethod::Dpg,
        InitMethod::Ddpg,
        InitMethod::Ppo,
        InitMethod::Sac,
        InitMethod::A2c,
        InitMethod::Trpo,
    ];

    pub const RL: [InitMethod; 6] = [
        InitMethod::Dpg,
        InitMethod::Ddpg,
        InitMethod::Ppo,
        InitMethod::Sac,
        InitMethod::A2c,
        InitMethod::Trpo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InitMethod::Zero => "zero",
            InitMethod::Uniform => "uniform",
            InitMethod::Gaussian => "gaussian",
            InitMethod::Dpg => "dpg",
            InitMethod::Ddpg => "ddpg",
            InitMethod::Ppo => "ppo",
            InitMethod::Sac => "sac",
            InitMethod::A2c => "a2c",
            InitMethod::Trpo => "trpo",
        }
    }

    pub fn is_rl(self) -> bool {
        InitMethod::RL.contains(&self)
    }
}

/// Hyperparameters shared by the RL initializers. Defaults follow the
/// fixed experimental budget: 50 episodes, step size α = 0.05, DDPG
/// actor/critic rates 0.02, KL target δ = 0.01, PPO clip ε = 0.20 and SAC
/// entropy coefficient 0.01.
#[derive(Debug, Clone, PartialEq)]
pub struct RLHyperparams {
    pub episodes: usize,
    pub step_size_alpha: f64,
    pub ddpg_actor_lr: f64,
    pub ddpg_critic_lr: f64,
    pub trpo_kl_delta: f64,
    pub ppo_clip_epsilon: f64,
    pub sac_entropy_alpha: f64,
    /// Fixed std-dev of the Gaussian policy (stochastic methods).
    pub policy_sigma: f64,
    /// Samples per episode for the batched methods (PPO, TRPO).
    pub batch_size: usize,
    /// Learning rate of the scalar reward baseline.
    pub baseline_lr_beta: f64,
    /// Ascent passes over each PPO batch.
    pub ppo_inner_epochs: usize,
    /// Hidden width of the critic network.
    pub critic_hidden: usize,
    /// Learning rate of the SAC / A2C critics.
    pub critic_lr: f64,
    /// Critic weights start at Normal(0, (scale²)/P); small scales make
    /// the early critic bias-dominated, which stabilizes its input
    /// gradients.
    pub critic_init_scale: f64,
    /// Std-dev of DDPG's exploration noise.
    pub ddpg_explore_std: f64,
    /// Std-dev of the random policy start φ₀ (0 starts every method at the
    /// zero action exactly, which is a stationary point of the layered
    /// ansatz cost).
    pub phi_init_std: f64,
}

impl Default for RLHyperparams {
    fn default() -> Self {
        Self {
            episodes: 50,
            step_size_alpha: 0.05,
            ddpg_actor_lr: 0.02,
            ddpg_critic_lr: 0.02,
            trpo_kl_delta: 0.01,
            ppo_clip_epsilon: 0.20,
            sac_entropy_alpha: 0.01,
            policy_sigma: 0.3,
            batch_size: 16,
            baseline_lr_beta: 0.1,
            ppo_inner_epochs: 4,
            critic_hidden: 32,
            critic_lr: 0.1,
            critic_init_scale: 0.1,
            ddpg_explore_std: 0.4,
            phi_init_std: 0.3,
        }
    }
}

/// Policy parameters φ plus the fixed sampling σ; the action mean is
/// tanh(φ) componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyState {
    pub phi: Vec<f64>,
    pub sigma: f64,
}

impl PolicyState {
    pub(crate) fn start(dim: usize, hp: &RLHyperparams, rng: &mut ChaCha8Rng) -> Self {
        let phi = (0..dim)
            .map(|_| hp.phi_init_std * standard_normal(rng))
            .collect();
        Self {
            phi,
            sigma: hp.policy_sigma,
        }
    }

    pub fn mean(&self) -> Vec<f64> {
        tanh_vec(&self.phi)
    }

    /// Draw a = μ + σε with ε ~ N(0, I).
    pub(crate) fn sample(&self, mean: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
        mean.iter()
            .map(|m| m + self.sigma * standard_normal(rng))
            .collect()
    }
}

pub(crate) fn tanh_vec(phi: &[f64]) -> Vec<f64> {
    phi.iter().map(|x| x.tanh()).collect()
}

/// log π_φ(a) of the fixed-σ Gaussian policy:
/// -½ Σ ((a_i - μ_i)/σ)² - (d/2)·log(2πσ²).
pub fn gaussian_log_likelihood(action: &[f64], mean: &[f64], sigma: f64) -> f64 {
    let d = action.len() as f64;
    let quad: f64 = action
        .iter()
        .zip(mean)
        .map(|(a, m)| ((a - m) / sigma).powi(2))
        .sum();
    -0.5 * quad - 0.5 * d * (2.0 * std::f64::consts::PI * sigma * sigma).ln()
}

/// ∇_φ log π_φ(a) = ((a - μ)/σ²) ⊙ (1 - μ²) with μ = tanh(φ).
pub fn score_gradient(action: &[f64], mean: &[f64], sigma: f64) -> Vec<f64> {
    action
        .iter()
        .zip(mean)
        .map(|(a, m)| (a - m) / (sigma * sigma) * (1.0 - m * m))
        .collect()
}

/// Affine remap (-1,1) → (0, 2π): θ ↦ π(θ + 1).
pub fn remap_action(action: &[f64]) -> Vec<f64> {
    action
        .iter()
        .map(|a| std::f64::consts::PI * (a + 1.0))
        .collect()
}

/// Evaluate the objective, rejecting non-finite values with context.
pub(crate) fn finite_cost(objective: &dyn Objective, action: &[f64], context: &'static str) -> Result<f64> {
    let c = objective.cost(action);
    if c.is_finite() {
        Ok(c)
    } else {
        Err(SimError::NonFinite { context })
    }
}

/// The action every RL method starts from under `seed`: each initializer
/// derives φ₀ as the first draws from its seeded generator, so the start
/// is reproducible without running the method.
pub fn initial_action(dim: usize, hp: &RLHyperparams, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PolicyState::start(dim, hp, &mut rng).mean()
}

/// Dispatch an initializer by method; deterministic in `seed`.
pub fn initialize(
    method: InitMethod,
    objective: &dyn Objective,
    hp: &RLHyperparams,
    gaussian: &GaussianInitParams,
    uniform_range: UniformRange,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = objective.dim();
    match method {
        InitMethod::Zero => baseline_init(BaselineKind::Zero, p, gaussian, uniform_range, &mut rng),
        InitMethod::Uniform => {
            baseline_init(BaselineKind::Uniform, p, gaussian, uniform_range, &mut rng)
        }
        InitMethod::Gaussian => {
            baseline_init(BaselineKind::Gaussian, p, gaussian, uniform_range, &mut rng)
        }
        InitMethod::Dpg => dpg_init(objective, hp, &mut rng),
        InitMethod::Ddpg => ddpg_init(objective, hp, &mut rng),
        InitMethod::Ppo => ppo_init(objective, hp, &mut rng),
        InitMethod::Sac => sac_init(objective, hp, &mut rng),
        InitMethod::A2c => a2c_init(objective, hp, &mut rng),
        InitMethod::Trpo => trpo_init(objective, hp, &mut rng),
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::Objective;

    /// cost(a) = ‖a - c‖², the convex probe used across method tests.
    pub struct QuadraticProbe {
        pub center: Vec<f64>,
    }

    impl Objective for QuadraticProbe {
        fn dim(&self) -> usize {
            self.center.len()
        }

        fn cost(&self, action: &[f64]) -> f64 {
            action
                .iter()
                .zip(&self.center)
                .map(|(a, c)| (a - c) * (a - c))
                .sum()
        }

        fn cost_gradient(&self, action: &[f64]) -> Vec<f64> {
            action
                .iter()
                .zip(&self.center)
                .map(|(a, c)| 2.0 * (a - c))
                .collect()
        }
    }
}
