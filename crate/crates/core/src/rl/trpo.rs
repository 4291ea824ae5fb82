//! Trust region policy optimization, single-step form.
//!
//! Per episode: sample a batch from the old policy, form the surrogate
//! gradient g = ∇_φ E[r_t(φ)·A_t] at φ_old, solve F·x = g by conjugate
//! gradient with Fisher-vector products of the quadratic KL model, scale
//! the step by √(2δ / gᵀx), and backtrack (halving, at most 10 tries)
//! until the analytic KL is within δ and the surrogate improved.
//!
//! For the fixed-σ Gaussian policy with mean tanh(φ) the KL between old
//! and new policies is ‖μ_new - μ_old‖²/(2σ²) and the Fisher matrix at
//! φ_old is diagonal with entries (1 - μ_i²)²/σ².

use rand_chacha::ChaCha8Rng;

use super::{
    finite_cost, gaussian_log_likelihood, score_gradient, tanh_vec, Objective, PolicyState,
    RLHyperparams,
};
use crate::Result;

const CG_MAX_ITER: usize = 64;
const CG_TOL: f64 = 1e-12;
const FISHER_DAMPING: f64 = 1e-8;
const LINE_SEARCH_TRIES: usize = 10;

/// Per-run diagnostics: one KL entry per accepted update.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrpoDiagnostics {
    pub accepted_kls: Vec<f64>,
    pub cg_fallbacks: usize,
    pub rejected_episodes: usize,
    pub skipped_episodes: usize,
}

pub fn trpo_init(
    objective: &dyn Objective,
    hp: &RLHyperparams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    Ok(trpo_init_with_diagnostics(objective, hp, rng)?.0)
}

pub fn trpo_init_with_diagnostics(
    objective: &dyn Objective,
    hp: &RLHyperparams,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<f64>, TrpoDiagnostics)> {
    let p = objective.dim();
    let mut policy = PolicyState::start(p, hp, rng);
    let sigma = policy.sigma;
    let delta = hp.trpo_kl_delta;
    let mut diag = TrpoDiagnostics::default();

    for _ in 0..hp.episodes {
        let mean_old = tanh_vec(&policy.phi);
        let actions: Vec<Vec<f64>> = (0..hp.batch_size)
            .map(|_| policy.sample(&mean_old, rng))
            .collect();
        let mut rewards = Vec::with_capacity(actions.len());
        for a in &actions {
            rewards.push(-finite_cost(objective, a, "trpo reward")?);
        }
        // Batch-mean baseline; advantages sum to zero.
        let baseline: f64 = rewards.iter().sum::<f64>() / rewards.len() as f64;
        let advantages: Vec<f64> = rewards.iter().map(|r| r - baseline).collect();
        let logp_old: Vec<f64> = actions
            .iter()
            .map(|a| gaussian_log_likelihood(a, &mean_old, sigma))
            .collect();

        // g = mean_t A_t · ∇_φ log π(a_t) (ratios are 1 at φ_old).
        let mut g = vec![0.0f64; p];
        for (action, &adv) in actions.iter().zip(&advantages) {
            let score = score_gradient(action, &mean_old, sigma);
            for (gi, s) in g.iter_mut().zip(&score) {
                *gi += adv * s;
            }
        }
        for gi in &mut g {
            *gi /= hp.batch_size as f64;
        }
        let g_norm_sqr: f64 = g.iter().map(|x| x * x).sum();
        if g_norm_sqr == 0.0 {
            diag.skipped_episodes += 1;
            continue;
        }

        let fisher_diag: Vec<f64> = mean_old
            .iter()
            .map(|m| {
                let j = 1.0 - m * m;
                j * j / (sigma * sigma) + FISHER_DAMPING
            })
            .collect();
        let (x, converged) = conjugate_gradient(&fisher_diag, &g);
        let direction = if converged {
            x
        } else {
            // Plain gradient step scaled to the quadratic KL model.
            diag.cg_fallbacks += 1;
            let g_f_g: f64 = g.iter().zip(&fisher_diag).map(|(gi, f)| gi * gi * f).sum();
            let scale = (2.0 * delta / g_f_g).sqrt();
            g.iter().map(|gi| gi * scale).collect()
        };
        let g_dot_x: f64 = g.iter().zip(&direction).map(|(a, b)| a * b).sum();
        if g_dot_x <= 0.0 {
            diag.skipped_episodes += 1;
            continue;
        }
        let step_scale = if converged {
            (2.0 * delta / g_dot_x).sqrt()
        } else {
            1.0
        };

        // Surrogate at φ_old: ratios are 1, so it equals mean advantage = 0.
        let surrogate_old = 0.0;
        let mut accepted = false;
        for k in 0..=LINE_SEARCH_TRIES {
            let shrink = 0.5f64.powi(k as i32);
            let candidate: Vec<f64> = policy
                .phi
                .iter()
                .zip(&direction)
                .map(|(phi, d)| phi + shrink * step_scale * d)
                .collect();
            let mean_new = tanh_vec(&candidate);
            let kl = gaussian_kl(&mean_old, &mean_new, sigma);
            if kl > delta {
                continue;
            }
            let mut surrogate = 0.0;
            for ((action, &adv), &lp_old) in actions.iter().zip(&advantages).zip(&logp_old) {
                let ratio = (gaussian_log_likelihood(action, &mean_new, sigma) - lp_old).exp();
                surrogate += ratio * adv;
            }
            surrogate /= hp.batch_size as f64;
            if surrogate > surrogate_old {
                policy.phi = candidate;
                diag.accepted_kls.push(kl);
                accepted = true;
                break;
            }
        }
        if !accepted {
            diag.rejected_episodes += 1;
        }
    }
    Ok((tanh_vec(&policy.phi), diag))
}

/// KL(π_old ‖ π_new) for fixed-σ Gaussians: ‖μ_new - μ_old‖²/(2σ²).
pub fn gaussian_kl(mean_old: &[f64], mean_new: &[f64], sigma: f64) -> f64 {
    mean_old
        .iter()
        .zip(mean_new)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / (2.0 * sigma * sigma)
}

/// Solve F·x = b for diagonal F via conjugate gradient (kept generic in
/// structure so only the Fisher-vector product encodes the model).
fn conjugate_gradient(fisher_diag: &[f64], b: &[f64]) -> (Vec<f64>, bool) {
    let n = b.len();
    let fvp = |v: &[f64]| -> Vec<f64> { v.iter().zip(fisher_diag).map(|(x, f)| x * f).collect() };
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs: f64 = r.iter().map(|v| v * v).sum();
    let scale: f64 = rs.sqrt().max(1.0);
    for _ in 0..CG_MAX_ITER {
        if rs.sqrt() <= CG_TOL * scale {
            return (x, true);
        }
        let ap = fvp(&p);
        let p_ap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if p_ap <= 0.0 {
            return (x, false);
        }
        let alpha = rs / p_ap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rs_new / rs;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rs = rs_new;
    }
    (x, rs.sqrt() <= CG_TOL * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rl::test_support::QuadraticProbe;
    use rand::SeedableRng;

    #[test]
    fn kl_vanishes_for_identical_policies() {
        let mean = vec![0.2, -0.5, 0.8];
        assert_eq!(gaussian_kl(&mean, &mean, 0.1), 0.0);
    }

    #[test]
    fn quadratic_model_matches_analytic_kl_for_small_steps() {
        // ½ΔφᵀFΔφ / KL(φ_old, φ_old+Δφ) → 1 as ‖Δφ‖ → 0.
        let phi_old = vec![0.3, -0.4, 0.1];
        let sigma = 0.2;
        let mean_old = tanh_vec(&phi_old);
        let fisher: Vec<f64> = mean_old
            .iter()
            .map(|m| (1.0 - m * m) * (1.0 - m * m) / (sigma * sigma))
            .collect();
        // The error in the ratio is O(‖Δφ‖): absolute KL error is cubic.
        let direction = [0.7, -0.3, 0.5];
        let mut prev_ratio_err = f64::INFINITY;
        for &eps in &[1e-1, 1e-2, 1e-3, 1e-4] {
            let phi_new: Vec<f64> = phi_old
                .iter()
                .zip(&direction)
                .map(|(p, d)| p + eps * d)
                .collect();
            let kl = gaussian_kl(&mean_old, &tanh_vec(&phi_new), sigma);
            let quad: f64 = direction
                .iter()
                .zip(&fisher)
                .map(|(d, f)| 0.5 * f * (eps * d) * (eps * d))
                .sum();
            let ratio = quad / kl;
            let err = (ratio - 1.0).abs();
            assert!(err < prev_ratio_err, "ratio error must shrink: {err}");
            assert!(err < 10.0 * eps, "ratio error {err} not O(eps) at {eps}");
            prev_ratio_err = err;
        }
        assert!(prev_ratio_err < 1e-3);
    }

    #[test]
    fn conjugate_gradient_solves_diagonal_system() {
        let f = vec![2.0, 5.0, 0.5];
        let b = vec![1.0, -2.0, 4.0];
        let (x, ok) = conjugate_gradient(&f, &b);
        assert!(ok);
        for i in 0..3 {
            assert!((x[i] - b[i] / f[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn accepted_updates_respect_the_trust_region() {
        let probe = QuadraticProbe {
            center: vec![0.5, -0.6, 0.3, 0.2, -0.1, 0.4],
        };
        let hp = RLHyperparams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let (_, diag) = trpo_init_with_diagnostics(&probe, &hp, &mut rng).unwrap();
        assert!(!diag.accepted_kls.is_empty());
        for kl in &diag.accepted_kls {
            assert!(*kl <= hp.trpo_kl_delta + 1e-6, "kl {kl}");
        }
    }

    #[test]
    fn reduces_cost_on_quadratic_probe() {
        let probe = QuadraticProbe {
            center: vec![0.4, -0.5, 0.6, -0.2],
        };
        let hp = RLHyperparams {
            phi_init_std: 0.0,
            ..RLHyperparams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let start_cost = probe.cost(&[0.0; 4]);
        let theta = trpo_init(&probe, &hp, &mut rng).unwrap();
        assert!(probe.cost(&theta) < start_cost);
    }
}
