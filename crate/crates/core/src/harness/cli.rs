//! Flag parsing for the experiment runner.
//!
//! Flags may also be given in a `--config <path>` file of `key = value`
//! lines mirroring the flag names (without the leading dashes, `#` starts
//! a comment); explicit flags override file entries, which override
//! defaults. Exit codes: 0 success / --help, 1 runtime error, 2 usage
//! error.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use super::{AnsatzKind, ExperimentConfig, PlotMetric, Task};
use crate::engine::{NoiseKind, NoiseModel, OptimizerKind, CHEMISTRY_NOISE_PREFACTOR};
use crate::pauli::NormMode;
use crate::rl::{GaussianInitParams, InitMethod, RLHyperparams, UniformRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Heisenberg,
    PauliFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnsatzArg {
    Layered,
    Givens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitArg {
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

impl From<InitArg> for InitMethod {
    fn from(a: InitArg) -> Self {
        match a {
            InitArg::Zero => InitMethod::Zero,
            InitArg::Uniform => InitMethod::Uniform,
            InitArg::Gaussian => InitMethod::Gaussian,
            InitArg::Dpg => InitMethod::Dpg,
            InitArg::Ddpg => InitMethod::Ddpg,
            InitArg::Ppo => InitMethod::Ppo,
            InitArg::Sac => InitMethod::Sac,
            InitArg::A2c => InitMethod::A2c,
            InitArg::Trpo => InitMethod::Trpo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizerArg {
    Gd,
    Adam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseArg {
    None,
    Constant,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    CoeffL1,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Loss,
    GradNorm,
    LossMinusFstar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RangeArg {
    #[value(name = "zero-2pi")]
    ZeroTwoPi,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GaussianPresetArg {
    Heisenberg,
    Chemistry,
}

/// Seeded multi-round training of a variational circuit from one of nine
/// initializers (zero / uniform / gaussian baselines and the RL methods
/// dpg, ddpg, ppo, sac, a2c, trpo).
#[derive(Debug, Default, Parser)]
#[command(
    name = "qinit",
    version,
    about = "Train a variational quantum circuit from RL-produced or classical initializations",
    after_help = "Trace rows: epoch 0 logs pre-step metrics (loss and clean-gradient norm at \
the initialization); each later row logs the loss after that optimizer step and the norm of \
the gradient the step consumed (noisy when noise is enabled).\n\nOutputs written under --out: \
trace.csv, summary.csv, config.txt, loss.svg, grad_norm.svg."
)]
struct Cli {
    /// Observable source.
    #[arg(long, value_enum)]
    task: Option<TaskArg>,
    /// Heisenberg chain length N.
    #[arg(long)]
    qubits: Option<usize>,
    /// Layer count L of the layered ansatz.
    #[arg(long)]
    layers: Option<usize>,
    /// Pauli-sum text file (pauli-file task).
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Circuit family (default: layered for heisenberg, givens for pauli-file).
    #[arg(long, value_enum)]
    ansatz: Option<AnsatzArg>,
    /// Initialization method.
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    /// Classical optimizer.
    #[arg(long, value_enum)]
    optimizer: Option<OptimizerArg>,
    /// Learning rate (default 0.01; 0.1 for GD on the pauli-file task).
    #[arg(long)]
    lr: Option<f64>,
    /// Gradient-noise model.
    #[arg(long, value_enum)]
    noise: Option<NoiseArg>,
    /// Variance of constant noise.
    #[arg(long)]
    noise_var: Option<f64>,
    /// Prefactor of adaptive noise.
    #[arg(long)]
    noise_prefactor: Option<f64>,
    /// Norm standing in for the Hamiltonian magnitude in adaptive noise.
    #[arg(long, value_enum)]
    norm_mode: Option<NormArg>,
    /// Optimizer steps per round.
    #[arg(long)]
    epochs: Option<usize>,
    /// Independent seeded rounds.
    #[arg(long)]
    rounds: Option<usize>,
    /// Base seed; round k initializes with seed+k and trains with seed+1000+k.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional key = value file mirroring these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Metric of the emitted loss plot.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Gaussian baseline variance preset (default follows the task).
    #[arg(long, value_enum)]
    gaussian_preset: Option<GaussianPresetArg>,
    /// Explicit Gaussian baseline variance γ² (overrides the preset).
    #[arg(long)]
    gaussian_variance: Option<f64>,
    /// Sampling range of the uniform baseline.
    #[arg(long, value_enum)]
    uniform_range: Option<RangeArg>,
    /// Remap RL actions from (-1,1) to (0,2π) for training.
    #[arg(long)]
    remap_to_0_2pi: Option<bool>,
    /// Feed the configured noise model into RL pre-training gradients.
    #[arg(long)]
    rl_sees_noise: Option<bool>,
    /// RL episode budget.
    #[arg(long)]
    rl_episodes: Option<usize>,
    /// RL step size α.
    #[arg(long)]
    rl_alpha: Option<f64>,
    /// Fixed policy std-dev σ.
    #[arg(long)]
    rl_sigma: Option<f64>,
    /// Batch size of the batched methods.
    #[arg(long)]
    rl_batch: Option<usize>,
    /// Learning rate β of the scalar reward baseline.
    #[arg(long)]
    rl_baseline_beta: Option<f64>,
    /// PPO ascent passes per batch.
    #[arg(long)]
    rl_inner_epochs: Option<usize>,
    /// Std-dev of the random policy start φ₀.
    #[arg(long)]
    rl_phi_std: Option<f64>,
    /// DDPG actor and critic learning rate.
    #[arg(long)]
    ddpg_lr: Option<f64>,
    /// TRPO KL target δ.
    #[arg(long)]
    trpo_delta: Option<f64>,
    /// PPO clipping ratio ε.
    #[arg(long)]
    ppo_clip: Option<f64>,
    /// SAC entropy coefficient.
    #[arg(long)]
    sac_entropy: Option<f64>,
}

impl Cli {
    /// file-provided values fill any flag the command line left unset.
    fn merge_from(&mut self, fallback: Cli) {
        macro_rules! fill {
            ($($field:ident),+ $(,)?) => {
                $(if self.$field.is_none() { self.$field = fallback.$field; })+
            };
        }
        fill!(
            task, qubits, layers, hamiltonian, ansatz, init, optimizer, lr, noise, noise_var,
            noise_prefactor, norm_mode, epochs, rounds, seed, out, metric, gaussian_preset,
            gaussian_variance, uniform_range, remap_to_0_2pi, rl_sees_noise, rl_episodes,
            rl_alpha, rl_sigma, rl_batch, rl_baseline_beta, rl_inner_epochs, rl_phi_std, ddpg_lr,
            trpo_delta, ppo_clip, sac_entropy,
        );
    }
}

/// Parse failure with the exit code the process should use.
#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            exit_code: 2,
            message: message.into(),
        }
    }
}

/// Parse argv (including the program name) into a resolved config.
/// `--help`/`--version` surface as a `CliError` with exit code 0.
pub fn parse_cli<I, S>(argv: I) -> Result<ExperimentConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut cli = Cli::try_parse_from(argv).map_err(|e| {
        let code = match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
            _ => 2,
        };
        CliError {
            exit_code: code,
            message: e.render().to_string(),
        }
    })?;
    if let Some(path) = &cli.config {
        let fallback = parse_config_file(path)?;
        cli.merge_from(fallback);
    }
    resolve(cli)
}

/// Read a `key = value` file into a `Cli` by replaying it as flags.
fn parse_config_file(path: &std::path::Path) -> Result<Cli, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut argv: Vec<String> = vec!["qinit".into()];
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!(
                "{}:{}: expected `key = value`, got `{line}`",
                path.display(),
                idx + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        if key == "config" {
            return Err(CliError::usage(format!(
                "{}:{}: config files cannot nest",
                path.display(),
                idx + 1
            )));
        }
        argv.push(format!("--{key}"));
        argv.push(value.to_string());
    }
    Cli::try_parse_from(&argv).map_err(|e| {
        CliError::usage(format!("in config {}: {}", path.display(), e.render()))
    })
}

/// Apply defaults and cross-field rules.
fn resolve(cli: Cli) -> Result<ExperimentConfig, CliError> {
    let task_arg = cli.task.unwrap_or(TaskArg::Heisenberg);
    let task = match task_arg {
        TaskArg::Heisenberg => Task::Heisenberg {
            num_qubits: cli.qubits.unwrap_or(4),
            num_layers: cli.layers.unwrap_or(2),
        },
        TaskArg::PauliFile => {
            let path = cli
                .hamiltonian
                .clone()
                .ok_or_else(|| CliError::usage("--task pauli-file requires --hamiltonian <path>"))?;
            Task::PauliFile { path }
        }
    };
    let ansatz = match cli.ansatz {
        Some(AnsatzArg::Layered) => AnsatzKind::Layered,
        Some(AnsatzArg::Givens) => AnsatzKind::Givens,
        None => match task_arg {
            TaskArg::Heisenberg => AnsatzKind::Layered,
            TaskArg::PauliFile => AnsatzKind::Givens,
        },
    };
    let optimizer = match cli.optimizer.unwrap_or(OptimizerArg::Gd) {
        OptimizerArg::Gd => OptimizerKind::Gd,
        OptimizerArg::Adam => OptimizerKind::Adam,
    };
    let learning_rate = cli.lr.unwrap_or(match (task_arg, optimizer) {
        (TaskArg::PauliFile, OptimizerKind::Gd) => 0.1,
        _ => 0.01,
    });
    if learning_rate <= 0.0 {
        return Err(CliError::usage("--lr must be positive"));
    }

    let noise_kind = match cli.noise.unwrap_or(NoiseArg::None) {
        NoiseArg::None => NoiseKind::None,
        NoiseArg::Constant => NoiseKind::Constant,
        NoiseArg::Adaptive => NoiseKind::Adaptive,
    };
    let constant_variance = cli.noise_var.unwrap_or(0.001);
    let adaptive_prefactor = cli.noise_prefactor.unwrap_or(CHEMISTRY_NOISE_PREFACTOR);
    if constant_variance < 0.0 || adaptive_prefactor < 0.0 {
        return Err(CliError::usage("noise variances must be non-negative"));
    }
    let norm_mode = match cli.norm_mode.unwrap_or(NormArg::CoeffL1) {
        NormArg::CoeffL1 => NormMode::CoeffL1,
        NormArg::Spectral => NormMode::Spectral,
    };
    let noise = NoiseModel {
        kind: noise_kind,
        constant_variance,
        adaptive_prefactor,
        norm_mode,
    };

    let mut rl = RLHyperparams::default();
    if let Some(v) = cli.rl_episodes {
        rl.episodes = v;
    }
    if let Some(v) = cli.rl_alpha {
        rl.step_size_alpha = v;
    }
    if let Some(v) = cli.rl_sigma {
        rl.policy_sigma = v;
    }
    if let Some(v) = cli.rl_batch {
        rl.batch_size = v;
    }
    if let Some(v) = cli.rl_baseline_beta {
        rl.baseline_lr_beta = v;
    }
    if let Some(v) = cli.rl_inner_epochs {
        rl.ppo_inner_epochs = v;
    }
    if let Some(v) = cli.rl_phi_std {
        rl.phi_init_std = v;
    }
    if let Some(v) = cli.ddpg_lr {
        rl.ddpg_actor_lr = v;
        rl.ddpg_critic_lr = v;
    }
    if let Some(v) = cli.trpo_delta {
        rl.trpo_kl_delta = v;
    }
    if let Some(v) = cli.ppo_clip {
        rl.ppo_clip_epsilon = v;
    }
    if let Some(v) = cli.sac_entropy {
        rl.sac_entropy_alpha = v;
    }
    if rl.episodes == 0 || rl.batch_size == 0 {
        return Err(CliError::usage("--rl-episodes and --rl-batch must be ≥ 1"));
    }
    if !(0.0..1.0).contains(&rl.ppo_clip_epsilon) {
        return Err(CliError::usage("--ppo-clip must lie in (0, 1)"));
    }
    if rl.policy_sigma <= 0.0
        || rl.step_size_alpha <= 0.0
        || rl.trpo_kl_delta <= 0.0
        || rl.sac_entropy_alpha <= 0.0
        || rl.ddpg_actor_lr <= 0.0
    {
        return Err(CliError::usage("RL hyperparameters must be positive"));
    }

    let gaussian = if let Some(v) = cli.gaussian_variance {
        if v <= 0.0 {
            return Err(CliError::usage("--gaussian-variance must be positive"));
        }
        GaussianInitParams::explicit(v)
    } else {
        match cli.gaussian_preset {
            Some(GaussianPresetArg::Heisenberg) => GaussianInitParams::heisenberg_default(),
            Some(GaussianPresetArg::Chemistry) => GaussianInitParams::chemistry_default(),
            None => match task_arg {
                TaskArg::Heisenberg => GaussianInitParams::heisenberg_default(),
                TaskArg::PauliFile => GaussianInitParams::chemistry_default(),
            },
        }
    };

    let epochs = cli.epochs.unwrap_or(100);
    let rounds = cli.rounds.unwrap_or(5);
    if epochs < 1 || rounds < 1 {
        return Err(CliError::usage("--epochs and --rounds must be ≥ 1"));
    }

    Ok(ExperimentConfig {
        task,
        ansatz,
        init_method: cli.init.unwrap_or(InitArg::Zero).into(),
        optimizer,
        learning_rate,
        noise,
        epochs,
        rounds,
        base_seed: cli.seed.unwrap_or(42),
        rl,
        gaussian,
        uniform_range: match cli.uniform_range.unwrap_or(RangeArg::ZeroTwoPi) {
            RangeArg::ZeroTwoPi => UniformRange::ZeroTwoPi,
            RangeArg::Unit => UniformRange::SymmetricUnit,
        },
        remap_to_0_2pi: cli.remap_to_0_2pi.unwrap_or(false),
        rl_sees_noise: cli.rl_sees_noise.unwrap_or(false),
        plot_metric: match cli.metric.unwrap_or(MetricArg::Loss) {
            MetricArg::Loss => PlotMetric::Loss,
            MetricArg::GradNorm => PlotMetric::GradNorm,
            MetricArg::LossMinusFstar => PlotMetric::LossMinusFstar,
        },
        output_dir: cli.out.unwrap_or_else(|| PathBuf::from("qinit-runs")),
    })
}
