//! Soft actor-critic, single-step form.
//!
//! Per episode: sample a = tanh(φ) + σε, fit the critic on (Q(a) - r)²,
//! then descend the actor loss -[Q(a) + α_ent·(-log π_φ(a))]. Following
//! the single-step derivation, both the value and entropy terms are
//! differentiated through the action: the ascent direction is
//! [∂Q/∂a + α_ent·(a - μ)/σ²] ⊙ (1 - μ²).

use rand_chacha::ChaCha8Rng;

use super::{finite_cost, tanh_vec, CriticNet, Objective, PolicyState, RLHyperparams};
use crate::Result;

pub fn sac_init(
    objective: &dyn Objective,
    hp: &RLHyperparams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let p = objective.dim();
    let mut policy = PolicyState::start(p, hp, rng);
    let sigma = policy.sigma;
    let mut critic = CriticNet::random(hp.critic_hidden, p, hp.critic_init_scale, rng);

    for _ in 0..hp.episodes {
        let mean = tanh_vec(&policy.phi);
        let action = policy.sample(&mean, rng);
        let reward = -finite_cost(objective, &action, "sac reward")?;

        let q = critic.forward(&action)?;
        let grads = critic.backward(&action, 2.0 * (q - reward))?;
        critic.descend(&grads, hp.critic_lr);

        let dq_da = critic.input_gradient(&action)?;
        for i in 0..p {
            let entropy_term = hp.sac_entropy_alpha * (action[i] - mean[i]) / (sigma * sigma);
            let ascent = (dq_da[i] + entropy_term) * (1.0 - mean[i] * mean[i]);
            policy.phi[i] += hp.step_size_alpha * ascent;
        }
    }
    Ok(tanh_vec(&policy.phi))
}

/// ∇_φ of the entropy bonus -α·log π_φ(a) at fixed action a; this is the
/// analytic counterpart checked against finite differences in tests.
pub fn entropy_bonus_gradient(action: &[f64], phi: &[f64], sigma: f64, alpha: f64) -> Vec<f64> {
    let mean = tanh_vec(phi);
    super::score_gradient(action, &mean, sigma)
        .into_iter()
        .map(|s| -alpha * s)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rl::{gaussian_log_likelihood, test_support::QuadraticProbe};
    use rand::SeedableRng;

    #[test]
    fn log_likelihood_at_mean_is_normalization_only() {
        let mean = vec![0.1, 0.2, -0.3, 0.4];
        let sigma = 0.25;
        let d = mean.len() as f64;
        let lp = gaussian_log_likelihood(&mean, &mean, sigma);
        let expected = -(d / 2.0) * (2.0 * std::f64::consts::PI * sigma * sigma).ln();
        assert!((lp - expected).abs() < 1e-12);
    }

    #[test]
    fn entropy_gradient_matches_finite_differences() {
        let phi = vec![0.4, -0.2, 0.7];
        let action = vec![0.5, -0.1, 0.3];
        let (sigma, alpha) = (0.15, 0.01);
        let analytic = entropy_bonus_gradient(&action, &phi, sigma, alpha);
        let h = 1e-6;
        for i in 0..phi.len() {
            let f = |phi: &[f64]| -alpha * gaussian_log_likelihood(&action, &tanh_vec(phi), sigma);
            let mut plus = phi.clone();
            plus[i] += h;
            let mut minus = phi.clone();
            minus[i] -= h;
            let fd = (f(&plus) - f(&minus)) / (2.0 * h);
            assert!(
                ((analytic[i] - fd) / fd).abs() < 1e-6,
                "component {i}: {} vs {fd}",
                analytic[i]
            );
        }
    }

    #[test]
    fn reduces_cost_on_quadratic_probe() {
        let probe = QuadraticProbe {
            center: vec![-0.5, 0.3, 0.7, -0.2],
        };
        let hp = RLHyperparams {
            phi_init_std: 0.0,
            ..RLHyperparams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let start_cost = probe.cost(&[0.0; 4]);
        let theta = sac_init(&probe, &hp, &mut rng).unwrap();
        assert!(probe.cost(&theta) < start_cost, "{}", probe.cost(&theta));
    }
}
