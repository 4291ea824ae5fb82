//! Advantage actor-critic, single-actor synchronous form.
//!
//! Per episode a batch of actions is sampled from the Gaussian policy,
//! the critic V(a) regresses each observed reward, and the actor ascends
//! the batch-mean advantage-weighted score
//! A(a) · ((a - μ)/σ²) ⊙ (1 - μ²).
//!
//! A single sampled action per episode makes the score estimator's
//! variance grow as √P and the update diverges on convex probes for
//! P ≥ 8; the synchronous batch restores a usable signal-to-noise ratio
//! at the fixed 50-episode budget.

use rand_chacha::ChaCha8Rng;

use super::{finite_cost, score_gradient, tanh_vec, CriticNet, Objective, PolicyState, RLHyperparams};
use crate::Result;

pub fn a2c_init(
    objective: &dyn Objective,
    hp: &RLHyperparams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let p = objective.dim();
    let mut policy = PolicyState::start(p, hp, rng);
    let sigma = policy.sigma;
    let mut critic = CriticNet::random(hp.critic_hidden, p, hp.critic_init_scale, rng);
    let batch = hp.batch_size.max(1) as f64;

    for _ in 0..hp.episodes {
        let mean = tanh_vec(&policy.phi);
        let mut ascent = vec![0.0f64; p];
        let mut critic_grads: Option<super::CriticGradients> = None;
        for _ in 0..hp.batch_size.max(1) {
            let action = policy.sample(&mean, rng);
            let reward = -finite_cost(objective, &action, "a2c reward")?;

            let value = critic.forward(&action)?;
            let advantage = reward - value;

            let grads = critic.backward(&action, 2.0 * (value - reward) / batch)?;
            match &mut critic_grads {
                None => critic_grads = Some(grads),
                Some(acc) => {
                    for (a, g) in acc.w1.iter_mut().zip(&grads.w1) {
                        *a += g;
                    }
                    for (a, g) in acc.b1.iter_mut().zip(&grads.b1) {
                        *a += g;
                    }
                    for (a, g) in acc.w2.iter_mut().zip(&grads.w2) {
                        *a += g;
                    }
                    acc.b2 += grads.b2;
                    for (a, g) in acc.input.iter_mut().zip(&grads.input) {
                        *a += g;
                    }
                }
            }

            let score = score_gradient(&action, &mean, sigma);
            for (acc, s) in ascent.iter_mut().zip(&score) {
                *acc += advantage * s / batch;
            }
        }
        critic.descend(&critic_grads.expect("batch is non-empty"), hp.critic_lr);
        for (phi, g) in policy.phi.iter_mut().zip(&ascent) {
            *phi += hp.step_size_alpha * g;
        }
    }
    Ok(tanh_vec(&policy.phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rl::test_support::QuadraticProbe;
    use rand::SeedableRng;

    #[test]
    fn perfect_critic_freezes_the_actor() {
        // A(a) = r - V(a) = 0 → the actor update vanishes.
        let advantage = 0.0;
        let score = [1.3, -0.4];
        let update: Vec<f64> = score.iter().map(|s| 0.05 * advantage * s).collect();
        assert!(update.iter().all(|u| *u == 0.0));
    }

    #[test]
    fn saturated_mean_kills_the_update() {
        // (1 - μ²) → 0 as μ → ±1.
        let mean = vec![1.0 - 1e-12, -1.0 + 1e-12];
        let action = vec![0.9, -0.9];
        let score = score_gradient(&action, &mean, 0.1);
        assert!(score.iter().all(|s| s.abs() < 1e-9));
    }

    #[test]
    fn reduces_cost_on_quadratic_probe() {
        let probe = QuadraticProbe {
            center: vec![0.6, -0.3, 0.1, 0.4],
        };
        let hp = RLHyperparams {
            phi_init_std: 0.0,
            ..RLHyperparams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let start_cost = probe.cost(&[0.0; 4]);
        let theta = a2c_init(&probe, &hp, &mut rng).unwrap();
        assert!(
            probe.cost(&theta) < start_cost,
            "final {} start {start_cost}",
            probe.cost(&theta)
        );
    }
}
