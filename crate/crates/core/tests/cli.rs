//! End-to-end checks of the installed binary: exit codes, file outputs,
//! and reproducibility.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qinit"))
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("qinit-cli-e2e").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("--task"));
    assert!(text.contains("epoch 0"), "epoch-0 convention must be documented");
}

#[test]
fn unknown_flag_exits_two_with_usage() {
    let out = bin().arg("--frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn invalid_init_exits_two_and_lists_names() {
    let out = bin().args(["--init", "dqg"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in ["dpg", "ddpg", "ppo", "sac", "a2c", "trpo"] {
        assert!(err.contains(name), "stderr must list {name}: {err}");
    }
}

#[test]
fn small_experiment_writes_outputs() {
    let dir = tmp_dir("small");
    let out = bin()
        .args([
            "--task", "heisenberg", "--qubits", "3", "--layers", "1", "--init", "gaussian",
            "--optimizer", "adam", "--lr", "0.01", "--epochs", "3", "--rounds", "2", "--seed",
            "7", "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["trace.csv", "summary.csv", "config.txt", "loss.svg", "grad_norm.svg"] {
        assert!(dir.join(file).is_file(), "missing {file}");
    }
    let trace = std::fs::read_to_string(dir.join("trace.csv")).unwrap();
    // Header plus (epochs + 1) rows per round.
    assert_eq!(trace.lines().count(), 1 + 2 * 4);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir_a = tmp_dir("det-a");
    let dir_b = tmp_dir("det-b");
    for dir in [&dir_a, &dir_b] {
        let out = bin()
            .args([
                "--qubits", "3", "--layers", "1", "--init", "ppo", "--noise", "constant",
                "--epochs", "4", "--rounds", "2", "--seed", "11", "--out",
            ])
            .arg(dir)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["trace.csv", "summary.csv", "loss.svg"] {
        assert_eq!(
            std::fs::read(dir_a.join(file)).unwrap(),
            std::fs::read(dir_b.join(file)).unwrap(),
            "{file} differs"
        );
    }
}

#[test]
fn pauli_file_task_end_to_end() {
    let dir = tmp_dir("pauli");
    let ham = dir.join("ham.txt");
    // A 10-qubit observable compatible with the default Givens ansatz.
    let mut text = String::from("qubits 10\n-1.0 Z0\n-0.8 Z1\n0.4 Z0 Z1\n");
    text.push_str("0.25 X0 X2\n0.25 Y0 Y2\n0.15 X1 X3\n0.15 Y1 Y3\n-0.5 I\n");
    std::fs::write(&ham, text).unwrap();
    let out = bin()
        .args(["--task", "pauli-file", "--hamiltonian"])
        .arg(&ham)
        .args([
            "--init", "trpo", "--optimizer", "gd", "--epochs", "3", "--rounds", "1", "--metric",
            "loss-minus-fstar", "--out",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert!(summary.lines().next().unwrap().contains("loss_minus_fstar_mean"));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("exact ground energy"));
}

#[test]
fn malformed_hamiltonian_exits_one_with_line_number() {
    let dir = tmp_dir("badham");
    let ham = dir.join("bad.txt");
    std::fs::write(&ham, "qubits 2\n0.3 X0 X0\n").unwrap();
    let out = bin()
        .args(["--task", "pauli-file", "--hamiltonian"])
        .arg(&ham)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn config_file_drives_the_run() {
    let dir = tmp_dir("conf");
    let conf = dir.join("exp.conf");
    std::fs::write(
        &conf,
        "task = heisenberg\nqubits = 3\nlayers = 1\ninit = zero\nepochs = 2\nrounds = 1\n",
    )
    .unwrap();
    let out = bin()
        .args(["--config"])
        .arg(&conf)
        .args(["--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dump = std::fs::read_to_string(dir.join("config.txt")).unwrap();
    assert!(dump.contains("qubits = 3"));
    assert!(dump.contains("init = zero"));
}
