//! Classical initialization baselines: zero, uniform, and Gaussian with
//! the task-derived variance presets.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::standard_normal;
use crate::{Result, SimError};

/// The three non-RL initializers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Zero,
    Uniform,
    Gaussian,
}

/// Range the uniform baseline samples from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UniformRange {
    /// [0, 2π), the stated action range.
    #[default]
    ZeroTwoPi,
    /// (-1, 1), matching the tanh image used by the RL methods.
    SymmetricUnit,
}

/// How the Gaussian variance γ² was derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianDerivation {
    /// γ² = 1/(4·S·(K+2)) from the (S, K) circuit shape parameters.
    HeisenbergSk { s: f64, k: f64 },
    /// γ² = h³·e / (48·a²·L) from the (L, h, a, e) gate labels.
    ChemistryLhae { l: f64, h: f64, a: f64, e: f64 },
    Explicit,
}

/// Variance preset for the Gaussian baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianInitParams {
    pub variance_gamma2: f64,
    pub derivation: GaussianDerivation,
}

impl GaussianInitParams {
    pub fn heisenberg_sk(s: f64, k: f64) -> Self {
        Self {
            variance_gamma2: 1.0 / (4.0 * s * (k + 2.0)),
            derivation: GaussianDerivation::HeisenbergSk { s, k },
        }
    }

    pub fn chemistry_lhae(l: f64, h: f64, a: f64, e: f64) -> Self {
        Self {
            variance_gamma2: h.powi(3) * e / (48.0 * a * a * l),
            derivation: GaussianDerivation::ChemistryLhae { l, h, a, e },
        }
    }

    pub fn explicit(variance_gamma2: f64) -> Self {
        Self {
            variance_gamma2,
            derivation: GaussianDerivation::Explicit,
        }
    }

    /// (S, K) = (2, 18): γ² = 1/160.
    pub fn heisenberg_default() -> Self {
        Self::heisenberg_sk(2.0, 18.0)
    }

    /// (L, h, a, e) = (24, 8, 8, ½): γ² = 1/288.
    pub fn chemistry_default() -> Self {
        Self::chemistry_lhae(24.0, 8.0, 8.0, 0.5)
    }
}

/// Draw a length-`p` parameter vector from the chosen baseline.
pub fn baseline_init(
    kind: BaselineKind,
    p: usize,
    params: &GaussianInitParams,
    uniform_range: UniformRange,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(SimError::Invalid("initializer needs P ≥ 1".into()));
    }
    Ok(match kind {
        BaselineKind::Zero => vec![0.0; p],
        BaselineKind::Uniform => {
            let (lo, width) = match uniform_range {
                UniformRange::ZeroTwoPi => (0.0, 2.0 * std::f64::consts::PI),
                UniformRange::SymmetricUnit => (-1.0, 2.0),
            };
            (0..p).map(|_| lo + width * rng.gen::<f64>()).collect()
        }
        BaselineKind::Gaussian => {
            let std = params.variance_gamma2.sqrt();
            (0..p).map(|_| std * standard_normal(rng)).collect()
        }
    })
}
