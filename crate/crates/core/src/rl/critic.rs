//! The small feedforward critic Q(a) = w2ᵀ tanh(W1 a + b1) + b2, with
//! exact analytic gradients. The same scalar-output shape serves as the
//! DDPG/SAC action-value critic and the A2C value function.

use rand_chacha::ChaCha8Rng;

use crate::engine::standard_normal;
use crate::{Result, SimError};

#[derive(Debug, Clone, PartialEq)]
pub struct CriticNet {
    /// Hidden weights, row-major H x P.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
    pub hidden: usize,
    pub input_dim: usize,
}

/// Gradients of a scalar loss with respect to every parameter block and
/// the input.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticGradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
    pub input: Vec<f64>,
}

impl CriticNet {
    /// Zero-initialized network (Q ≡ 0).
    pub fn zeros(hidden: usize, input_dim: usize) -> Self {
        Self {
            w1: vec![0.0; hidden * input_dim],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
            hidden,
            input_dim,
        }
    }

    /// Weights ~ Normal(0, scale²/P), biases zero.
    pub fn random(hidden: usize, input_dim: usize, scale: f64, rng: &mut ChaCha8Rng) -> Self {
        let std = scale * (1.0 / input_dim as f64).sqrt();
        let mut net = Self::zeros(hidden, input_dim);
        for w in &mut net.w1 {
            *w = std * standard_normal(rng);
        }
        for w in &mut net.w2 {
            *w = std * standard_normal(rng);
        }
        net
    }

    fn check_input(&self, a: &[f64]) -> Result<()> {
        if a.len() != self.input_dim {
            return Err(SimError::LengthMismatch {
                expected: self.input_dim,
                got: a.len(),
                context: "critic input",
            });
        }
        Ok(())
    }

    fn hidden_activations(&self, a: &[f64]) -> Vec<f64> {
        (0..self.hidden)
            .map(|j| {
                let row = &self.w1[j * self.input_dim..(j + 1) * self.input_dim];
                let z: f64 = row.iter().zip(a).map(|(w, x)| w * x).sum::<f64>() + self.b1[j];
                z.tanh()
            })
            .collect()
    }

    /// Q(a).
    pub fn forward(&self, a: &[f64]) -> Result<f64> {
        self.check_input(a)?;
        let h = self.hidden_activations(a);
        Ok(self.w2.iter().zip(&h).map(|(w, x)| w * x).sum::<f64>() + self.b2)
    }

    /// Gradients of `upstream · Q(a)` with respect to all parameter blocks
    /// and the input.
    pub fn backward(&self, a: &[f64], upstream: f64) -> Result<CriticGradients> {
        self.check_input(a)?;
        let h = self.hidden_activations(a);
        let mut grads = CriticGradients {
            w1: vec![0.0; self.w1.len()],
            b1: vec![0.0; self.hidden],
            w2: vec![0.0; self.hidden],
            b2: upstream,
            input: vec![0.0; self.input_dim],
        };
        for j in 0..self.hidden {
            grads.w2[j] = upstream * h[j];
            let delta = upstream * self.w2[j] * (1.0 - h[j] * h[j]);
            grads.b1[j] = delta;
            let row = &self.w1[j * self.input_dim..(j + 1) * self.input_dim];
            for i in 0..self.input_dim {
                grads.w1[j * self.input_dim + i] = delta * a[i];
                grads.input[i] += delta * row[i];
            }
        }
        Ok(grads)
    }

    /// dQ/da at `a`.
    pub fn input_gradient(&self, a: &[f64]) -> Result<Vec<f64>> {
        Ok(self.backward(a, 1.0)?.input)
    }

    /// Gradient-descent update: subtract `lr` times the given gradients.
    pub fn descend(&mut self, grads: &CriticGradients, lr: f64) {
        for (w, g) in self.w1.iter_mut().zip(&grads.w1) {
            *w -= lr * g;
        }
        for (b, g) in self.b1.iter_mut().zip(&grads.b1) {
            *b -= lr * g;
        }
        for (w, g) in self.w2.iter_mut().zip(&grads.w2) {
            *w -= lr * g;
        }
        self.b2 -= lr * grads.b2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn zero_net_outputs_bias() {
        let net = CriticNet::zeros(4, 3);
        assert_eq!(net.forward(&[0.5, -1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn single_unit_reduces_to_tanh() {
        let mut net = CriticNet::zeros(1, 2);
        net.w1[0] = 1.0;
        net.w2[0] = 1.0;
        let a = [0.6, 0.9];
        assert!((net.forward(&a).unwrap() - 0.6f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let (hidden, dim) = (5, 4);
            let net = CriticNet::random(hidden, dim, 1.0, &mut rng);
            let a: Vec<f64> = (0..dim).map(|_| standard_normal(&mut rng)).collect();
            let upstream = 1.0 + standard_normal(&mut rng).abs();
            let grads = net.backward(&a, upstream).unwrap();
            let h = 1e-6;

            let check = |analytic: f64, fd: f64, what: &str| {
                let denom = fd.abs().max(1e-4);
                assert!(
                    ((analytic - fd) / denom).abs() < 1e-6,
                    "{what}: {analytic} vs {fd}"
                );
            };

            for idx in 0..net.w1.len() {
                let mut plus = net.clone();
                plus.w1[idx] += h;
                let mut minus = net.clone();
                minus.w1[idx] -= h;
                let fd = upstream * (plus.forward(&a).unwrap() - minus.forward(&a).unwrap()) / (2.0 * h);
                check(grads.w1[idx], fd, "w1");
            }
            for idx in 0..hidden {
                let mut plus = net.clone();
                plus.b1[idx] += h;
                let mut minus = net.clone();
                minus.b1[idx] -= h;
                let fd = upstream * (plus.forward(&a).unwrap() - minus.forward(&a).unwrap()) / (2.0 * h);
                check(grads.b1[idx], fd, "b1");

                let mut plus = net.clone();
                plus.w2[idx] += h;
                let mut minus = net.clone();
                minus.w2[idx] -= h;
                let fd = upstream * (plus.forward(&a).unwrap() - minus.forward(&a).unwrap()) / (2.0 * h);
                check(grads.w2[idx], fd, "w2");
            }
            {
                let mut plus = net.clone();
                plus.b2 += h;
                let mut minus = net.clone();
                minus.b2 -= h;
                let fd = upstream * (plus.forward(&a).unwrap() - minus.forward(&a).unwrap()) / (2.0 * h);
                check(grads.b2, fd, "b2");
            }
            for idx in 0..dim {
                let mut plus = a.clone();
                plus[idx] += h;
                let mut minus = a.clone();
                minus[idx] -= h;
                let fd = upstream * (net.forward(&plus).unwrap() - net.forward(&minus).unwrap()) / (2.0 * h);
                check(grads.input[idx], fd, "input");
            }
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let net = CriticNet::zeros(2, 3);
        assert!(net.forward(&[1.0]).is_err());
        assert!(net.backward(&[1.0, 2.0], 1.0).is_err());
    }
}
