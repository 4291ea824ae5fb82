//! Deep deterministic policy gradient, single-step form.
//!
//! Per episode: explore with a = tanh(φ) + noise, observe r = -cost(a),
//! regress the critic on (Q(a) - r)², then ascend Q(tanh(φ)) through the
//! critic's analytic input gradient and the tanh chain factor.

use rand_chacha::ChaCha8Rng;

use super::{finite_cost, tanh_vec, CriticNet, Objective, PolicyState, RLHyperparams};
use crate::engine::standard_normal;
use crate::Result;

pub fn ddpg_init(
    objective: &dyn Objective,
    hp: &RLHyperparams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let p = objective.dim();
    let mut policy = PolicyState::start(p, hp, rng);
    let mut critic = CriticNet::random(hp.critic_hidden, p, hp.critic_init_scale, rng);
    for _ in 0..hp.episodes {
        let mean = tanh_vec(&policy.phi);
        let explored: Vec<f64> = mean
            .iter()
            .map(|m| m + hp.ddpg_explore_std * standard_normal(rng))
            .collect();
        let reward = -finite_cost(objective, &explored, "ddpg reward")?;

        let q = critic.forward(&explored)?;
        let grads = critic.backward(&explored, 2.0 * (q - reward))?;
        critic.descend(&grads, hp.ddpg_critic_lr);

        let dq_da = critic.input_gradient(&mean)?;
        for (phi, (g, a)) in policy.phi.iter_mut().zip(dq_da.iter().zip(&mean)) {
            *phi += hp.ddpg_actor_lr * g * (1.0 - a * a);
        }
    }
    Ok(tanh_vec(&policy.phi))
}
