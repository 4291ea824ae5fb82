//! Proximal policy optimization, single-step form.
//!
//! Per episode a batch is sampled from the old policy; several ascent
//! passes maximize the clipped surrogate
//! E[min(r_t·A_t, clip(r_t, 1-ε, 1+ε)·A_t)] with r_t the likelihood ratio
//! and A_t = r_t - V̂ against a learned scalar baseline.

use rand_chacha::ChaCha8Rng;

use super::{
    finite_cost, gaussian_log_likelihood, score_gradient, tanh_vec, Objective, PolicyState,
    RLHyperparams,
};
use crate::Result;

pub fn ppo_init(
    objective: &dyn Objective,
    hp: &RLHyperparams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let p = objective.dim();
    let mut policy = PolicyState::start(p, hp, rng);
    let sigma = policy.sigma;
    let mut baseline = 0.0f64;

    for _ in 0..hp.episodes {
        let mean_old = tanh_vec(&policy.phi);
        let actions: Vec<Vec<f64>> = (0..hp.batch_size)
            .map(|_| policy.sample(&mean_old, rng))
            .collect();
        let mut rewards = Vec::with_capacity(actions.len());
        for a in &actions {
            rewards.push(-finite_cost(objective, a, "ppo reward")?);
        }
        let advantages: Vec<f64> = rewards.iter().map(|r| r - baseline).collect();
        let logp_old: Vec<f64> = actions
            .iter()
            .map(|a| gaussian_log_likelihood(a, &mean_old, sigma))
            .collect();

        for _ in 0..hp.ppo_inner_epochs {
            let mean = tanh_vec(&policy.phi);
            let mut ascent = vec![0.0f64; p];
            for ((action, &adv), &lp_old) in actions.iter().zip(&advantages).zip(&logp_old) {
                let ratio = (gaussian_log_likelihood(action, &mean, sigma) - lp_old).exp();
                let surrogate1 = ratio * adv;
                let surrogate2 = ratio.clamp(1.0 - hp.ppo_clip_epsilon, 1.0 + hp.ppo_clip_epsilon) * adv;
                // min picks surrogate1 → unclipped gradient; otherwise the
                // clipped branch is active and its derivative is zero.
                if surrogate1 <= surrogate2 {
                    let score = score_gradient(action, &mean, sigma);
                    for (acc, s) in ascent.iter_mut().zip(&score) {
                        *acc += adv * ratio * s;
                    }
                }
            }
            let scale = hp.step_size_alpha / hp.batch_size as f64;
            for (phi, g) in policy.phi.iter_mut().zip(&ascent) {
                *phi += scale * g;
            }
        }

        // V̂ ← V̂ - β·∇_V̂ mean (r_t - V̂)².
        let mean_residual: f64 = advantages.iter().sum::<f64>() / hp.batch_size as f64;
        baseline += 2.0 * hp.baseline_lr_beta * mean_residual;
    }
    Ok(tanh_vec(&policy.phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rl::test_support::QuadraticProbe;
    use rand::SeedableRng;

    #[test]
    fn ratio_is_one_at_old_policy() {
        let phi = vec![0.3, -0.2];
        let mean = tanh_vec(&phi);
        let action = vec![0.25, -0.4];
        let sigma = 0.1;
        let lp = gaussian_log_likelihood(&action, &mean, sigma);
        let ratio = (lp - lp).exp();
        assert_eq!(ratio, 1.0);
    }

    #[test]
    fn clipped_surrogate_never_exceeds_unclipped() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        use rand::Rng;
        for _ in 0..1000 {
            let ratio: f64 = rng.gen::<f64>() * 3.0;
            let adv: f64 = rng.gen::<f64>() * 4.0 - 2.0;
            let eps = 0.2;
            let s1 = ratio * adv;
            let s2 = ratio.clamp(1.0 - eps, 1.0 + eps) * adv;
            assert!(s1.min(s2) <= s1 + 1e-15);
        }
    }

    #[test]
    fn baseline_converges_to_constant_reward() {
        // With r_t ≡ c the scalar update V̂ += 2β·(c - V̂) is a contraction.
        let beta = 0.1;
        let c = 1.7;
        let mut v = 0.0f64;
        for _ in 0..50 {
            v += 2.0 * beta * (c - v);
        }
        assert!((v - c).abs() < 1e-3, "baseline {v}");
    }

    #[test]
    fn reduces_cost_on_quadratic_probe() {
        let probe = QuadraticProbe {
            center: vec![0.5, -0.4, 0.2, 0.6],
        };
        let hp = RLHyperparams {
            phi_init_std: 0.0,
            ..RLHyperparams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let start_cost = probe.cost(&[0.0; 4]);
        let theta = ppo_init(&probe, &hp, &mut rng).unwrap();
        assert!(probe.cost(&theta) < start_cost);
    }
}
