//! Dense statevector simulation.
//!
//! A state over N qubits is stored as 2^N complex amplitudes. Qubit `i`
//! maps to bit `N-1-i` of the amplitude index (qubit 0 is the most
//! significant bit), so ket literals read left to right: for N=3 the index
//! of |110⟩ is 0b110 = 6.
//!
//! Gate conventions:
//! - `RX(θ) = exp(-iθX/2)`, `RY(θ) = exp(-iθY/2)`
//! - `CZ = diag(1, 1, 1, -1)` in the two-qubit computational basis
//! - `GIVENS_SINGLE(θ)` rotates the {|01⟩, |10⟩} subspace:
//!   |01⟩ ↦ cos(θ/2)|01⟩ + sin(θ/2)|10⟩, identity elsewhere
//! - `GIVENS_DOUBLE(θ)` rotates {|0011⟩, |1100⟩} the same way
//!
//! Gates are applied by stride iteration over the amplitude array; no gate
//! matrix is ever materialized.

use num_complex::Complex64;

use crate::pauli::{Axis, PauliSum};
use crate::{Result, SimError};

/// Tolerance used by internal norm assertions.
pub const NORM_TOL: f64 = 1e-10;

/// A pure state of `num_qubits` qubits: 2^N unit-norm complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Squared l2 norm; 1 within [`NORM_TOL`] for any state produced here.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Build a state from raw amplitudes. Intended for tests and oracles;
    /// the length must be a power of two matching `num_qubits`.
    pub fn from_amplitudes(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1usize << num_qubits {
            return Err(SimError::LengthMismatch {
                expected: 1usize << num_qubits,
                got: amplitudes.len(),
                context: "statevector amplitudes",
            });
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }
}

/// The gate alphabet of the two ansatz families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Ry,
    Cz,
    GivensSingle,
    GivensDouble,
}

impl GateKind {
    /// Number of target qubits the kind acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry => 1,
            GateKind::Cz | GateKind::GivensSingle => 2,
            GateKind::GivensDouble => 4,
        }
    }

    /// Whether the gate consumes an angle (all kinds except CZ).
    pub fn parameterized(self) -> bool {
        !matches!(self, GateKind::Cz)
    }
}

/// One gate in a circuit: kind, target qubits, and (for parameterized
/// kinds) the index of its angle in the parameter vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateDescriptor {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub param_slot: Option<usize>,
}

impl GateDescriptor {
    pub fn new(kind: GateKind, targets: Vec<usize>, param_slot: Option<usize>) -> Self {
        Self {
            kind,
            targets,
            param_slot,
        }
    }

    /// Check arity, target distinctness/range and slot presence.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(SimError::BadTargets {
                kind: self.kind,
                expected: self.kind.arity(),
                got: self.targets.len(),
            });
        }
        for (i, &t) in self.targets.iter().enumerate() {
            if t >= num_qubits {
                return Err(SimError::QubitOutOfRange {
                    qubit: t,
                    num_qubits,
                });
            }
            if self.targets[..i].contains(&t) {
                return Err(SimError::BadTargets {
                    kind: self.kind,
                    expected: self.kind.arity(),
                    got: self.targets.len(),
                });
            }
        }
        if self.param_slot.is_some() != self.kind.parameterized() {
            return Err(SimError::AngleMismatch {
                kind: self.kind,
                needs_angle: self.kind.parameterized(),
            });
        }
        Ok(())
    }
}

/// Bit mask of `qubit` in the amplitude index (qubit 0 = most significant).
#[inline]
pub(crate) fn qubit_mask(num_qubits: usize, qubit: usize) -> usize {
    1usize << (num_qubits - 1 - qubit)
}

/// Computational basis state |basis_index⟩.
pub fn prepare_basis_state(num_qubits: usize, basis_index: usize) -> Result<Statevector> {
    let dim = 1usize << num_qubits;
    if basis_index >= dim {
        return Err(SimError::BasisIndexOutOfRange {
            index: basis_index,
            num_qubits,
        });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[basis_index] = Complex64::new(1.0, 0.0);
    Ok(Statevector {
        num_qubits,
        amplitudes,
    })
}

/// Apply a single gate, returning the new state. `angle` must be present
/// exactly for parameterized kinds.
pub fn apply_gate(state: &Statevector, gate: &GateDescriptor, angle: Option<f64>) -> Result<Statevector> {
    gate.validate(state.num_qubits)?;
    if angle.is_some() != gate.kind.parameterized() {
        return Err(SimError::AngleMismatch {
            kind: gate.kind,
            needs_angle: gate.kind.parameterized(),
        });
    }
    let mut out = state.clone();
    apply_gate_in_place(&mut out, gate.kind, &gate.targets, angle.unwrap_or(0.0));
    Ok(out)
}

/// In-place gate kernel. Targets are assumed validated.
pub(crate) fn apply_gate_in_place(state: &mut Statevector, kind: GateKind, targets: &[usize], angle: f64) {
    let n = state.num_qubits;
    let amps = &mut state.amplitudes;
    match kind {
        GateKind::Rx => {
            // [[c, -i s], [-i s, c]] with c = cos(θ/2), s = sin(θ/2)
            let (s, c) = (angle * 0.5).sin_cos();
            let block = qubit_mask(n, targets[0]);
            for pair_block in amps.chunks_exact_mut(2 * block) {
                let (lows, highs) = pair_block.split_at_mut(block);
                for (a0, a1) in lows.iter_mut().zip(highs.iter_mut()) {
                    let (x, y) = (*a0, *a1);
                    *a0 = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
                    *a1 = Complex64::new(s * x.im + c * y.re, -s * x.re + c * y.im);
                }
            }
        }
        GateKind::Ry => {
            // [[c, -s], [s, c]]
            let (s, c) = (angle * 0.5).sin_cos();
            let block = qubit_mask(n, targets[0]);
            for pair_block in amps.chunks_exact_mut(2 * block) {
                let (lows, highs) = pair_block.split_at_mut(block);
                for (a0, a1) in lows.iter_mut().zip(highs.iter_mut()) {
                    let (x, y) = (*a0, *a1);
                    *a0 = Complex64::new(c * x.re - s * y.re, c * x.im - s * y.im);
                    *a1 = Complex64::new(s * x.re + c * y.re, s * x.im + c * y.im);
                }
            }
        }
        GateKind::Cz => {
            // Enumerate exactly the dim/4 indices with both target bits
            // set by spreading a compact counter around the fixed bits.
            let m1 = qubit_mask(n, targets[0]).max(qubit_mask(n, targets[1]));
            let m2 = qubit_mask(n, targets[0]).min(qubit_mask(n, targets[1]));
            for u in 0..amps.len() / 4 {
                let x = (u & (m2 - 1)) | ((u & !(m2 - 1)) << 1);
                let x = (x & (m1 - 1)) | ((x & !(m1 - 1)) << 1);
                let i = x | m1 | m2;
                amps[i] = -amps[i];
            }
        }
        GateKind::GivensSingle => {
            // Mixes |01⟩ and |10⟩ on (targets[0], targets[1]).
            let ma = qubit_mask(n, targets[0]);
            let mb = qubit_mask(n, targets[1]);
            let (s, c) = (angle * 0.5).sin_cos();
            let flip = ma | mb;
            for i in 0..amps.len() {
                if i & ma == 0 && i & mb != 0 {
                    let j = i ^ flip;
                    let a01 = amps[i];
                    let a10 = amps[j];
                    amps[i] = c * a01 - s * a10;
                    amps[j] = s * a01 + c * a10;
                }
            }
        }
        GateKind::GivensDouble => {
            // Mixes |0011⟩ and |1100⟩ on (targets[0..4]).
            let ma = qubit_mask(n, targets[0]);
            let mb = qubit_mask(n, targets[1]);
            let mc = qubit_mask(n, targets[2]);
            let md = qubit_mask(n, targets[3]);
            let lo_pair = mc | md;
            let hi_pair = ma | mb;
            let flip = lo_pair | hi_pair;
            let (s, c) = (angle * 0.5).sin_cos();
            for i in 0..amps.len() {
                if i & hi_pair == 0 && i & lo_pair == lo_pair {
                    let j = i ^ flip;
                    let a0011 = amps[i];
                    let a1100 = amps[j];
                    amps[i] = c * a0011 - s * a1100;
                    amps[j] = s * a0011 + c * a1100;
                }
            }
        }
    }
}

/// ⟨ψ| Σ_k c_k P_k |ψ⟩ for a real-coefficient Pauli sum.
///
/// Builds an [`ExpectationPlan`] and evaluates it once; callers that
/// evaluate the same observable repeatedly should build the plan
/// themselves.
pub fn pauli_expectation(state: &Statevector, observable: &PauliSum) -> Result<f64> {
    Ok(ExpectationPlan::new(observable, state.num_qubits)?.evaluate(state))
}

/// Precompiled evaluation of ⟨ψ|H|ψ⟩ for a fixed observable.
///
/// Diagonal terms (Z/identity factors only) are folded into one cached
/// table d with contribution Σ_i d_i·|ψ_i|². Off-diagonal terms are
/// grouped by bit-flip mask; Hermiticity pairs index i with i^flip, so
/// each group is accumulated as 2·Re(w(i)·conj(ψ_{i^flip})·ψ_i) over the
/// half-space where the top flip bit is clear. The value is real by
/// construction, satisfying the ≤ 1e-10 imaginary-residue contract
/// exactly.
pub struct ExpectationPlan {
    num_qubits: usize,
    diag: Vec<f64>,
    pair_groups: Vec<PairGroup>,
}

struct PairGroup {
    flip: usize,
    /// Highest set bit of `flip`; indices with it clear enumerate pairs.
    top: usize,
    members: Vec<(Complex64, usize)>,
}

impl ExpectationPlan {
    pub fn new(observable: &PauliSum, num_qubits: usize) -> Result<Self> {
        if observable.num_qubits() > num_qubits {
            return Err(SimError::QubitOutOfRange {
                qubit: observable.num_qubits() - 1,
                num_qubits,
            });
        }
        let dim = 1usize << num_qubits;
        let mut diag: Vec<f64> = Vec::new();
        // BTreeMap keeps group order (and so float accumulation order)
        // deterministic run to run.
        let mut groups: std::collections::BTreeMap<usize, Vec<(Complex64, usize)>> =
            std::collections::BTreeMap::new();
        for term in observable.terms() {
            let masks = TermMasks::build(num_qubits, term.factors());
            if masks.flip == 0 {
                if diag.is_empty() {
                    diag = vec![0.0; dim];
                }
                let c = term.coefficient();
                for (i, d) in diag.iter_mut().enumerate() {
                    let sign = 1.0 - 2.0 * ((i & masks.sign).count_ones() & 1) as f64;
                    *d += c * sign;
                }
            } else {
                groups
                    .entry(masks.flip)
                    .or_default()
                    .push((masks.phase * term.coefficient(), masks.sign));
            }
        }
        let pair_groups = groups
            .into_iter()
            .map(|(flip, members)| PairGroup {
                flip,
                top: 1usize << (usize::BITS - 1 - flip.leading_zeros()),
                members,
            })
            .collect();
        Ok(Self {
            num_qubits,
            diag,
            pair_groups,
        })
    }

    pub fn evaluate(&self, state: &Statevector) -> f64 {
        debug_assert!(state.num_qubits == self.num_qubits);
        let amps = &state.amplitudes;
        let mut total = 0.0f64;
        if !self.diag.is_empty() {
            total += self
                .diag
                .iter()
                .zip(amps)
                .map(|(d, a)| d * a.norm_sqr())
                .sum::<f64>();
        }
        for group in &self.pair_groups {
            let block = group.top;
            let mut acc = 0.0f64;
            let mut base = 0;
            while base < amps.len() {
                for i in base..base + block {
                    let ai = amps[i];
                    let aj = amps[i ^ group.flip];
                    // prod = conj(a_j) · a_i
                    let prod_re = aj.re * ai.re + aj.im * ai.im;
                    let prod_im = aj.re * ai.im - aj.im * ai.re;
                    let mut w_re = 0.0;
                    let mut w_im = 0.0;
                    for &(scale, sign_mask) in &group.members {
                        let sign = 1.0 - 2.0 * ((i & sign_mask).count_ones() & 1) as f64;
                        w_re += sign * scale.re;
                        w_im += sign * scale.im;
                    }
                    acc += w_re * prod_re - w_im * prod_im;
                }
                base += 2 * block;
            }
            total += 2.0 * acc;
        }
        total
    }
}

/// y = H·x for a Pauli sum, used by the eigensolver's matrix-free path.
pub(crate) fn apply_pauli_sum(observable: &PauliSum, x: &[Complex64], num_qubits: usize) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
    for term in observable.terms() {
        let masks = TermMasks::build(num_qubits, term.factors());
        let scale = masks.phase * term.coefficient();
        for (i, &xi) in x.iter().enumerate() {
            let sign = 1.0 - 2.0 * ((i & masks.sign).count_ones() & 1) as f64;
            y[i ^ masks.flip] += scale * sign * xi;
        }
    }
    y
}

/// Per-term bit masks: P|i⟩ = i^{n_Y} (-1)^{popcount(i & sign)} |i ^ flip⟩.
struct TermMasks {
    flip: usize,
    sign: usize,
    phase: Complex64,
}

impl TermMasks {
    fn build(num_qubits: usize, factors: &[(usize, Axis)]) -> Self {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut n_y = 0u32;
        for &(q, axis) in factors {
            let m = qubit_mask(num_qubits, q);
            match axis {
                Axis::X => flip |= m,
                Axis::Y => {
                    flip |= m;
                    sign |= m;
                    n_y += 1;
                }
                Axis::Z => sign |= m,
            }
        }
        let phase = match n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        Self { flip, sign, phase }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{build_heisenberg, PauliString, PauliSum};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> Statevector {
        let dim = 1usize << n;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Statevector::from_amplitudes(n, amps).unwrap()
    }

    #[test]
    fn basis_state_examples() {
        let s = prepare_basis_state(2, 0).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm_sqr() == 0.0));

        let s = prepare_basis_state(1, 1).unwrap();
        assert_eq!(s.amplitudes()[1], Complex64::new(1.0, 0.0));

        // Hartree-Fock ket |1100000000⟩: qubits 0,1 set → bits 9,8.
        let s = prepare_basis_state(10, 768).unwrap();
        assert_eq!(s.amplitudes()[768], Complex64::new(1.0, 0.0));
        assert!(prepare_basis_state(2, 4).is_err());
    }

    #[test]
    fn rx_closed_forms() {
        let zero = prepare_basis_state(1, 0).unwrap();
        let rx = GateDescriptor::new(GateKind::Rx, vec![0], Some(0));

        let same = apply_gate(&zero, &rx, Some(0.0)).unwrap();
        assert_eq!(same.amplitudes(), zero.amplitudes());

        // RX(π)|0⟩ = -i|1⟩
        let flipped = apply_gate(&zero, &rx, Some(std::f64::consts::PI)).unwrap();
        assert!((flipped.amplitudes()[1] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!(flipped.amplitudes()[0].norm() < 1e-12);
    }

    #[test]
    fn cz_flips_sign_of_11() {
        let s = prepare_basis_state(2, 3).unwrap();
        let cz = GateDescriptor::new(GateKind::Cz, vec![0, 1], None);
        let out = apply_gate(&s, &cz, None).unwrap();
        assert_eq!(out.amplitudes()[3], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn givens_single_rotates_excitation_subspace() {
        // |01⟩ on qubits (0,1) of a 2-qubit register is index 0b01 = 1.
        let s = prepare_basis_state(2, 1).unwrap();
        let g = GateDescriptor::new(GateKind::GivensSingle, vec![0, 1], Some(0));
        let theta = 0.7;
        let out = apply_gate(&s, &g, Some(theta)).unwrap();
        let (sn, cs) = (theta / 2.0).sin_cos();
        assert!((out.amplitudes()[1].re - cs).abs() < 1e-12);
        assert!((out.amplitudes()[2].re - sn).abs() < 1e-12);
        // |00⟩ and |11⟩ are untouched.
        let s = prepare_basis_state(2, 3).unwrap();
        let out = apply_gate(&s, &g, Some(theta)).unwrap();
        assert_eq!(out.amplitudes()[3], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn givens_double_rotates_between_0011_and_1100() {
        let s = prepare_basis_state(4, 0b1100).unwrap();
        let g = GateDescriptor::new(GateKind::GivensDouble, vec![0, 1, 2, 3], Some(0));
        let theta = 1.3;
        let out = apply_gate(&s, &g, Some(theta)).unwrap();
        let (sn, cs) = (theta / 2.0).sin_cos();
        assert!((out.amplitudes()[0b1100].re - cs).abs() < 1e-12);
        assert!((out.amplitudes()[0b0011].re - (-sn)).abs() < 1e-12);
    }

    #[test]
    fn gate_errors() {
        let s = prepare_basis_state(2, 0).unwrap();
        let rx = GateDescriptor::new(GateKind::Rx, vec![0], Some(0));
        assert!(apply_gate(&s, &rx, None).is_err());
        let cz = GateDescriptor::new(GateKind::Cz, vec![0, 1], None);
        assert!(apply_gate(&s, &cz, Some(1.0)).is_err());
        let bad = GateDescriptor::new(GateKind::Rx, vec![5], Some(0));
        assert!(apply_gate(&s, &bad, Some(1.0)).is_err());
        let dup = GateDescriptor::new(GateKind::Cz, vec![1, 1], None);
        assert!(apply_gate(&s, &dup, None).is_err());
    }

    #[test]
    fn unitarity_over_random_states_and_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let gates = [
            (GateKind::Rx, vec![2]),
            (GateKind::Ry, vec![0]),
            (GateKind::Cz, vec![1, 3]),
            (GateKind::GivensSingle, vec![0, 2]),
            (GateKind::GivensDouble, vec![3, 1, 0, 2]),
        ];
        for _ in 0..40 {
            let s = random_state(4, &mut rng);
            for (kind, targets) in &gates {
                let angle = kind.parameterized().then(|| rng.gen::<f64>() * 12.0 - 6.0);
                let g = GateDescriptor::new(*kind, targets.clone(), angle.map(|_| 0));
                let out = apply_gate(&s, &g, angle).unwrap();
                assert!((out.norm_sqr() - 1.0).abs() < NORM_TOL);
            }
        }
    }

    #[test]
    fn rx_periodicity_4pi() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let s = random_state(3, &mut rng);
            let theta = rng.gen::<f64>() * 6.0 - 3.0;
            let g = GateDescriptor::new(GateKind::Rx, vec![1], Some(0));
            let a = apply_gate(&s, &g, Some(theta)).unwrap();
            let b = apply_gate(&s, &g, Some(theta + 4.0 * std::f64::consts::PI)).unwrap();
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert!((x - y).norm() < NORM_TOL);
            }
        }
    }

    #[test]
    fn expectation_trivial_cases() {
        let n = 3;
        let zero = prepare_basis_state(n, 0).unwrap();
        let z0 = PauliSum::new(n, vec![PauliString::new(1.0, vec![(0, Axis::Z)])]).unwrap();
        assert!((pauli_expectation(&zero, &z0).unwrap() - 1.0).abs() < 1e-12);

        let xx = PauliSum::new(2, vec![PauliString::new(1.0, vec![(0, Axis::X), (1, Axis::X)])]).unwrap();
        let s00 = prepare_basis_state(2, 0).unwrap();
        assert!(pauli_expectation(&s00, &xx).unwrap().abs() < 1e-12);

        let h = build_heisenberg(2).unwrap();
        assert!((pauli_expectation(&s00, &h).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_is_real_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let h = build_heisenberg(4).unwrap();
        for _ in 0..25 {
            let s = random_state(4, &mut rng);
            // Result is declared real; here we re-derive it through the
            // matrix-free application and compare with ⟨ψ|(Hψ)⟩.
            let hs = apply_pauli_sum(&h, s.amplitudes(), 4);
            let mut ip = Complex64::new(0.0, 0.0);
            for (a, b) in s.amplitudes().iter().zip(&hs) {
                ip += a.conj() * b;
            }
            assert!(ip.im.abs() < NORM_TOL);
            let e = pauli_expectation(&s, &h).unwrap();
            assert!((e - ip.re).abs() < 1e-10);
        }
    }
}
