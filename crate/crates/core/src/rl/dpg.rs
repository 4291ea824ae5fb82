//! Deterministic policy gradient, single-step form.
//!
//! The policy is the deterministic action a = tanh(φ); gradient ascent on
//! the reward R(φ) = -cost(tanh(φ)) uses the chain rule
//! ∇_φ R = -(∂cost/∂a) ⊙ (1 - a²).

use rand_chacha::ChaCha8Rng;

use super::{tanh_vec, Objective, PolicyState, RLHyperparams};
use crate::{Result, SimError};

pub fn dpg_init(
    objective: &dyn Objective,
    hp: &RLHyperparams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let mut policy = PolicyState::start(objective.dim(), hp, rng);
    for _ in 0..hp.episodes {
        let action = tanh_vec(&policy.phi);
        let cost_grad = objective.cost_gradient(&action);
        if cost_grad.iter().any(|g| !g.is_finite()) {
            return Err(SimError::NonFinite {
                context: "dpg cost gradient",
            });
        }
        for (phi, (g, a)) in policy.phi.iter_mut().zip(cost_grad.iter().zip(&action)) {
            *phi += hp.step_size_alpha * (-g) * (1.0 - a * a);
        }
    }
    Ok(tanh_vec(&policy.phi))
}
