//! Experiment harness: composes Hamiltonian, ansatz, initializer,
//! optimizer and noise model; runs multi-round seeded training; persists
//! CSV traces, summary statistics, an echo of the effective
//! configuration, and SVG comparison plots.
//!
//! Seeding layout: round k draws its initialization with seed
//! `base_seed + k` and its training noise with seed `base_seed + 1000 + k`,
//! so runs are reproducible and rounds are independent.

pub mod cli;
pub mod plot;

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::ansatz::{build_givens_ansatz, build_heisenberg_ansatz, default_lih_rotation_layout};
use crate::circuit::CircuitTemplate;
use crate::eig::{exact_ground_energy, MAX_ORACLE_QUBITS};
use crate::engine::{run_training, NoiseModel, OptimizerKind, OptimizerState, RunTrace};
use crate::pauli::{build_heisenberg, PauliSum};
use crate::rl::{
    initialize, remap_action, GaussianInitParams, InitMethod, RLHyperparams,
    UniformRange, VqaObjective,
};
use crate::{Result, SimError};

pub use plot::{emit_comparison_plot, PlotMetric};

/// What provides the observable.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Heisenberg { num_qubits: usize, num_layers: usize },
    PauliFile { path: PathBuf },
}

/// Which circuit family to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzKind {
    Layered,
    Givens,
}

/// A fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub task: Task,
    pub ansatz: AnsatzKind,
    pub init_method: InitMethod,
    pub optimizer: OptimizerKind,
    pub learning_rate: f64,
    pub noise: NoiseModel,
    pub epochs: usize,
    pub rounds: usize,
    pub base_seed: u64,
    pub rl: RLHyperparams,
    pub gaussian: GaussianInitParams,
    pub uniform_range: UniformRange,
    pub remap_to_0_2pi: bool,
    /// Route the configured noise model into RL pre-training gradients.
    pub rl_sees_noise: bool,
    pub plot_metric: PlotMetric,
    pub output_dir: PathBuf,
}

/// Per-epoch statistics across rounds plus final-epoch aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRecord {
    pub epochs: Vec<usize>,
    pub loss_mean: Vec<f64>,
    pub loss_std: Vec<f64>,
    pub grad_mean: Vec<f64>,
    pub grad_std: Vec<f64>,
    pub final_loss_mean: f64,
    pub final_loss_std: f64,
    pub final_grad_mean: f64,
    pub final_grad_std: f64,
    /// Exact ground energy when the system is small enough to solve.
    pub fstar: Option<f64>,
    pub loss_minus_fstar_mean: Option<Vec<f64>>,
}

/// Mean and sample standard deviation (0 for a single round).
fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Aggregate per-epoch statistics over equal-length traces.
pub fn summarize(traces: &[RunTrace], fstar: Option<f64>) -> Result<SummaryRecord> {
    if traces.is_empty() {
        return Err(SimError::Invalid("no traces to summarize".into()));
    }
    let len = traces[0].rows.len();
    if traces.iter().any(|t| t.rows.len() != len) {
        return Err(SimError::Invalid("traces have unequal epoch counts".into()));
    }
    let mut record = SummaryRecord {
        epochs: (0..len).map(|i| traces[0].rows[i].epoch).collect(),
        loss_mean: Vec::with_capacity(len),
        loss_std: Vec::with_capacity(len),
        grad_mean: Vec::with_capacity(len),
        grad_std: Vec::with_capacity(len),
        final_loss_mean: 0.0,
        final_loss_std: 0.0,
        final_grad_mean: 0.0,
        final_grad_std: 0.0,
        fstar,
        loss_minus_fstar_mean: fstar.map(|_| Vec::with_capacity(len)),
    };
    for i in 0..len {
        let losses: Vec<f64> = traces.iter().map(|t| t.rows[i].loss).collect();
        let grads: Vec<f64> = traces.iter().map(|t| t.rows[i].grad_l2_norm).collect();
        let (lm, ls) = mean_std(&losses);
        let (gm, gs) = mean_std(&grads);
        record.loss_mean.push(lm);
        record.loss_std.push(ls);
        record.grad_mean.push(gm);
        record.grad_std.push(gs);
        if let (Some(f), Some(series)) = (fstar, record.loss_minus_fstar_mean.as_mut()) {
            series.push(lm - f);
        }
    }
    record.final_loss_mean = *record.loss_mean.last().unwrap();
    record.final_loss_std = *record.loss_std.last().unwrap();
    record.final_grad_mean = *record.grad_mean.last().unwrap();
    record.final_grad_std = *record.grad_std.last().unwrap();
    Ok(record)
}

/// Build the observable and circuit template for a config.
pub fn build_problem(config: &ExperimentConfig) -> Result<(PauliSum, CircuitTemplate)> {
    let h = match &config.task {
        Task::Heisenberg { num_qubits, .. } => build_heisenberg(*num_qubits)?,
        Task::PauliFile { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                SimError::Invalid(format!("cannot read {}: {e}", path.display()))
            })?;
            PauliSum::parse_str(&text)
                .map_err(|e| SimError::Invalid(format!("{}: {e}", path.display())))?
        }
    };
    let template = match config.ansatz {
        AnsatzKind::Layered => {
            let (n, l) = match &config.task {
                Task::Heisenberg {
                    num_qubits,
                    num_layers,
                } => (*num_qubits, *num_layers),
                Task::PauliFile { .. } => {
                    return Err(SimError::Invalid(
                        "layered ansatz over a Pauli file is not wired to --qubits/--layers; \
                         use the heisenberg task or the givens ansatz".into(),
                    ))
                }
            };
            build_heisenberg_ansatz(n, l)?
        }
        AnsatzKind::Givens => build_givens_ansatz(&default_lih_rotation_layout())?,
    };
    if h.num_qubits() != template.num_qubits() {
        return Err(SimError::Invalid(format!(
            "observable acts on {} qubits but the ansatz has {}",
            h.num_qubits(),
            template.num_qubits()
        )));
    }
    Ok((h, template))
}

/// Draw the round-k initialization for a prepared problem.
fn round_initialization(
    config: &ExperimentConfig,
    template: &CircuitTemplate,
    h: &PauliSum,
    round: u64,
) -> Result<Vec<f64>> {
    let seed = config.base_seed.wrapping_add(round);
    if config.init_method.is_rl() {
        let mut objective = VqaObjective::new(template, h, config.remap_to_0_2pi)?;
        if config.rl_sees_noise {
            objective = objective.with_noise(config.noise.clone(), config.base_seed.wrapping_add(2000 + round))?;
        }
        let action = initialize(
            config.init_method,
            &objective,
            &config.rl,
            &config.gaussian,
            config.uniform_range,
            seed,
        )?;
        Ok(if config.remap_to_0_2pi {
            remap_action(&action)
        } else {
            action
        })
    } else {
        let objective = VqaObjective::new(template, h, false)?;
        initialize(
            config.init_method,
            &objective,
            &config.rl,
            &config.gaussian,
            config.uniform_range,
            seed,
        )
    }
}

/// Run all rounds, write outputs under `output_dir`, and return the
/// traces with their summary.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(Vec<RunTrace>, SummaryRecord)> {
    if config.rounds < 1 {
        return Err(SimError::Invalid("rounds must be ≥ 1".into()));
    }
    let (h, template) = build_problem(config)?;

    let needs_fstar = config.plot_metric == PlotMetric::LossMinusFstar;
    if needs_fstar && template.num_qubits() > MAX_ORACLE_QUBITS {
        return Err(SimError::Invalid(format!(
            "loss-minus-fstar needs the exact ground energy, unavailable beyond {MAX_ORACLE_QUBITS} qubits"
        )));
    }
    let fstar = if needs_fstar || template.num_qubits() <= 12 {
        Some(exact_ground_energy(&h, template.num_qubits())?)
    } else {
        None
    };

    let mut traces = Vec::with_capacity(config.rounds);
    for round in 0..config.rounds as u64 {
        let theta0 = round_initialization(config, &template, &h, round)?;
        let optimizer = OptimizerState::new(config.optimizer, config.learning_rate);
        let trace = run_training(
            &template,
            &h,
            &theta0,
            optimizer,
            &config.noise,
            config.epochs,
            config.base_seed.wrapping_add(1000 + round),
        )?;
        traces.push(trace);
    }
    let summary = summarize(&traces, fstar)?;

    std::fs::create_dir_all(&config.output_dir)
        .map_err(|e| SimError::Invalid(format!("cannot create {}: {e}", config.output_dir.display())))?;
    write_trace_csv(&traces, &config.output_dir.join("trace.csv"))?;
    write_summary_csv(&summary, &config.output_dir.join("summary.csv"))?;
    write_config_dump(config, &config.output_dir.join("config.txt"))?;
    let label = config.init_method.name().to_string();
    emit_comparison_plot(
        &[(label.clone(), summary.clone())],
        config.plot_metric,
        &config.output_dir.join("loss.svg"),
    )?;
    emit_comparison_plot(
        &[(label, summary.clone())],
        PlotMetric::GradNorm,
        &config.output_dir.join("grad_norm.svg"),
    )?;
    Ok((traces, summary))
}

/// 17 significant digits; round-trips f64 exactly.
pub(crate) fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `round,epoch,loss,grad_l2_norm` rows for every round and epoch.
pub fn write_trace_csv(traces: &[RunTrace], path: &Path) -> Result<()> {
    if traces.is_empty() {
        return Err(SimError::Invalid("no traces to write".into()));
    }
    let mut out = String::from("round,epoch,loss,grad_l2_norm\n");
    for (round, trace) in traces.iter().enumerate() {
        for row in &trace.rows {
            out.push_str(&format!(
                "{round},{},{},{}\n",
                row.epoch,
                fmt_float(row.loss),
                fmt_float(row.grad_l2_norm)
            ));
        }
    }
    write_file(path, out.as_bytes())
}

/// Per-epoch mean/std columns (plus `loss_minus_fstar_mean` when known).
pub fn write_summary_csv(summary: &SummaryRecord, path: &Path) -> Result<()> {
    let mut out = String::from("epoch,loss_mean,loss_std,grad_norm_mean,grad_norm_std");
    if summary.loss_minus_fstar_mean.is_some() {
        out.push_str(",loss_minus_fstar_mean");
    }
    out.push('\n');
    for i in 0..summary.epochs.len() {
        out.push_str(&format!(
            "{},{},{},{},{}",
            summary.epochs[i],
            fmt_float(summary.loss_mean[i]),
            fmt_float(summary.loss_std[i]),
            fmt_float(summary.grad_mean[i]),
            fmt_float(summary.grad_std[i])
        ));
        if let Some(series) = &summary.loss_minus_fstar_mean {
            out.push_str(&format!(",{}", fmt_float(series[i])));
        }
        out.push('\n');
    }
    write_file(path, out.as_bytes())
}

/// Echo the effective configuration in the same `key = value` format the
/// `--config` file accepts.
pub fn write_config_dump(config: &ExperimentConfig, path: &Path) -> Result<()> {
    let mut out = String::new();
    match &config.task {
        Task::Heisenberg {
            num_qubits,
            num_layers,
        } => {
            out.push_str("task = heisenberg\n");
            out.push_str(&format!("qubits = {num_qubits}\n"));
            out.push_str(&format!("layers = {num_layers}\n"));
        }
        Task::PauliFile { path } => {
            out.push_str("task = pauli-file\n");
            out.push_str(&format!("hamiltonian = {}\n", path.display()));
        }
    }
    out.push_str(&format!(
        "ansatz = {}\n",
        match config.ansatz {
            AnsatzKind::Layered => "layered",
            AnsatzKind::Givens => "givens",
        }
    ));
    out.push_str(&format!("init = {}\n", config.init_method.name()));
    out.push_str(&format!(
        "optimizer = {}\n",
        match config.optimizer {
            OptimizerKind::Gd => "gd",
            OptimizerKind::Adam => "adam",
        }
    ));
    out.push_str(&format!("lr = {}\n", config.learning_rate));
    out.push_str(&format!(
        "noise = {}\n",
        match config.noise.kind {
            crate::engine::NoiseKind::None => "none",
            crate::engine::NoiseKind::Constant => "constant",
            crate::engine::NoiseKind::Adaptive => "adaptive",
        }
    ));
    out.push_str(&format!("noise-var = {}\n", config.noise.constant_variance));
    out.push_str(&format!(
        "noise-prefactor = {}\n",
        config.noise.adaptive_prefactor
    ));
    out.push_str(&format!(
        "norm-mode = {}\n",
        match config.noise.norm_mode {
            crate::pauli::NormMode::CoeffL1 => "coeff-l1",
            crate::pauli::NormMode::Spectral => "spectral",
        }
    ));
    out.push_str(&format!("epochs = {}\n", config.epochs));
    out.push_str(&format!("rounds = {}\n", config.rounds));
    out.push_str(&format!("seed = {}\n", config.base_seed));
    out.push_str(&format!("gaussian-variance = {}\n", config.gaussian.variance_gamma2));
    out.push_str(&format!(
        "uniform-range = {}\n",
        match config.uniform_range {
            UniformRange::ZeroTwoPi => "zero-2pi",
            UniformRange::SymmetricUnit => "unit",
        }
    ));
    out.push_str(&format!("remap-to-0-2pi = {}\n", config.remap_to_0_2pi));
    out.push_str(&format!("rl-sees-noise = {}\n", config.rl_sees_noise));
    out.push_str(&format!(
        "metric = {}\n",
        match config.plot_metric {
            PlotMetric::Loss => "loss",
            PlotMetric::GradNorm => "grad-norm",
            PlotMetric::LossMinusFstar => "loss-minus-fstar",
        }
    ));
    out.push_str(&format!("rl-episodes = {}\n", config.rl.episodes));
    out.push_str(&format!("rl-alpha = {}\n", config.rl.step_size_alpha));
    out.push_str(&format!("rl-sigma = {}\n", config.rl.policy_sigma));
    out.push_str(&format!("rl-batch = {}\n", config.rl.batch_size));
    out.push_str(&format!("rl-baseline-beta = {}\n", config.rl.baseline_lr_beta));
    out.push_str(&format!("rl-inner-epochs = {}\n", config.rl.ppo_inner_epochs));
    out.push_str(&format!("rl-phi-std = {}\n", config.rl.phi_init_std));
    out.push_str(&format!("ddpg-lr = {}\n", config.rl.ddpg_actor_lr));
    out.push_str(&format!("trpo-delta = {}\n", config.rl.trpo_kl_delta));
    out.push_str(&format!("ppo-clip = {}\n", config.rl.ppo_clip_epsilon));
    out.push_str(&format!("sac-entropy = {}\n", config.rl.sac_entropy_alpha));
    write_file(path, out.as_bytes())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| SimError::Invalid(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(bytes)
        .map_err(|e| SimError::Invalid(format!("cannot write {}: {e}", path.display())))
}
