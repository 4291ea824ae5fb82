//! Pauli-sum observables: H = Σ_k c_k P_k with real coefficients.
//!
//! Includes the open-chain Heisenberg builder, a line-oriented text format
//! for ingesting external Hamiltonians, and the norms used by the adaptive
//! gradient-noise model.
//!
//! Text format (UTF-8, newline-delimited, `#` starts a comment):
//!
//! ```text
//! qubits 2
//! 1.0 X0 X1
//! 1.0 Y0 Y1
//! 1.0 Z0 Z1
//! -0.5 I
//! ```
//!
//! The header `qubits <N>` must come first; each term line is a real
//! coefficient followed by `<axis><index>` factors, or the single token `I`
//! for an identity term. Terms with an identical factor set are merged by
//! summing coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::{Result, SimError};

/// One of the three non-identity Pauli axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// A weighted Pauli string: c · Π (axis on qubit). An empty factor list is
/// a multiple of the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    coefficient: f64,
    factors: Vec<(usize, Axis)>,
}

impl PauliString {
    /// Factors are sorted by qubit index on construction.
    pub fn new(coefficient: f64, mut factors: Vec<(usize, Axis)>) -> Self {
        factors.sort_by_key(|&(q, _)| q);
        Self {
            coefficient,
            factors,
        }
    }

    pub fn identity(coefficient: f64) -> Self {
        Self::new(coefficient, Vec::new())
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn factors(&self) -> &[(usize, Axis)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        for (i, &(q, _)) in self.factors.iter().enumerate() {
            if q >= num_qubits {
                return Err(SimError::QubitOutOfRange {
                    qubit: q,
                    num_qubits,
                });
            }
            if i > 0 && self.factors[i - 1].0 == q {
                return Err(SimError::Invalid(format!(
                    "repeated qubit index {q} in one Pauli term"
                )));
            }
        }
        Ok(())
    }
}

/// A Hermitian observable as a merged list of Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    num_qubits: usize,
    terms: Vec<PauliString>,
}

impl PauliSum {
    /// Validate indices and merge terms with identical factor sets.
    pub fn new(num_qubits: usize, terms: Vec<PauliString>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(SimError::Invalid("observable needs at least one qubit".into()));
        }
        let mut merged: BTreeMap<Vec<(usize, Axis)>, f64> = BTreeMap::new();
        for t in terms {
            t.validate(num_qubits)?;
            *merged.entry(t.factors).or_insert(0.0) += t.coefficient;
        }
        let terms = merged
            .into_iter()
            .map(|(factors, coefficient)| PauliString {
                coefficient,
                factors,
            })
            .collect();
        Ok(Self { num_qubits, terms })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// Σ|c_k| -- always computable, upper-bounds the spectral norm.
    pub fn coeff_l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// Parse the text format described in the module docs.
    pub fn parse_str(text: &str) -> std::result::Result<Self, ParseError> {
        let mut num_qubits: Option<usize> = None;
        let mut terms: Vec<PauliString> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let first = tokens.next().expect("non-empty line");
            if first == "qubits" {
                if num_qubits.is_some() {
                    return Err(ParseError::new(line_no, "duplicate `qubits` header"));
                }
                let count = tokens
                    .next()
                    .ok_or_else(|| ParseError::new(line_no, "missing qubit count"))?;
                let n: usize = count
                    .parse()
                    .map_err(|_| ParseError::new(line_no, format!("invalid qubit count `{count}`")))?;
                if n == 0 {
                    return Err(ParseError::new(line_no, "qubit count must be positive"));
                }
                if tokens.next().is_some() {
                    return Err(ParseError::new(line_no, "trailing tokens after qubit count"));
                }
                num_qubits = Some(n);
                continue;
            }
            let n = num_qubits
                .ok_or_else(|| ParseError::new(line_no, "term before `qubits <N>` header"))?;
            let coefficient: f64 = first
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("invalid coefficient `{first}`")))?;
            let mut factors: Vec<(usize, Axis)> = Vec::new();
            let mut identity = false;
            for tok in tokens {
                if tok == "I" {
                    identity = true;
                    continue;
                }
                let axis = match tok.chars().next() {
                    Some('X') => Axis::X,
                    Some('Y') => Axis::Y,
                    Some('Z') => Axis::Z,
                    _ => {
                        return Err(ParseError::new(
                            line_no,
                            format!("unknown factor `{tok}` (expected X<i>, Y<i>, Z<i> or I)"),
                        ))
                    }
                };
                let qubit: usize = tok[1..]
                    .parse()
                    .map_err(|_| ParseError::new(line_no, format!("invalid qubit index in `{tok}`")))?;
                if qubit >= n {
                    return Err(ParseError::new(
                        line_no,
                        format!("qubit index {qubit} ≥ declared count {n}"),
                    ));
                }
                if factors.iter().any(|&(q, _)| q == qubit) {
                    return Err(ParseError::new(
                        line_no,
                        format!("repeated qubit index {qubit} in one term"),
                    ));
                }
                factors.push((qubit, axis));
            }
            if identity && !factors.is_empty() {
                return Err(ParseError::new(line_no, "`I` must be the sole factor of a term"));
            }
            if !identity && factors.is_empty() {
                return Err(ParseError::new(line_no, "term has no factors (use `I` for identity)"));
            }
            terms.push(PauliString::new(coefficient, factors));
        }
        let n = num_qubits.ok_or_else(|| ParseError::new(0, "missing `qubits <N>` header"))?;
        PauliSum::new(n, terms).map_err(|e| ParseError::new(0, e.to_string()))
    }
}

impl fmt::Display for PauliSum {
    /// Canonical serialization; parses back to an equal sum.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.num_qubits)?;
        for t in &self.terms {
            write!(f, "{}", t.coefficient)?;
            if t.is_identity() {
                write!(f, " I")?;
            } else {
                for &(q, axis) in &t.factors {
                    write!(f, " {}{}", axis.symbol(), q)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Parse failure with a 1-based line number (0 for end-of-input errors).
#[derive(Debug, Clone, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// Which norm stands in for ‖H‖ in the adaptive noise model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    /// Σ|c_k|; cheap at any size.
    CoeffL1,
    /// Largest |eigenvalue| via the dense/Lanczos oracle; N ≤ 14 only.
    Spectral,
}

/// ‖H‖ under the selected mode.
pub fn hamiltonian_norm(h: &PauliSum, mode: NormMode) -> Result<f64> {
    match mode {
        NormMode::CoeffL1 => Ok(h.coeff_l1_norm()),
        NormMode::Spectral => crate::eig::spectral_norm(h),
    }
}

/// Open-chain Heisenberg Hamiltonian Σ_i (X_iX_{i+1} + Y_iY_{i+1} + Z_iZ_{i+1})
/// with unit couplings: 3(N-1) terms.
pub fn build_heisenberg(num_qubits: usize) -> Result<PauliSum> {
    if num_qubits < 2 {
        return Err(SimError::Invalid(
            "Heisenberg chain needs at least two qubits".into(),
        ));
    }
    let mut terms = Vec::with_capacity(3 * (num_qubits - 1));
    for i in 0..num_qubits - 1 {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            terms.push(PauliString::new(1.0, vec![(i, axis), (i + 1, axis)]));
        }
    }
    PauliSum::new(num_qubits, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn heisenberg_term_counts() {
        let h = build_heisenberg(2).unwrap();
        assert_eq!(h.terms().len(), 3);
        assert!(h.terms().iter().all(|t| t.coefficient() == 1.0));
        assert_eq!(build_heisenberg(15).unwrap().terms().len(), 42);
        assert_eq!(build_heisenberg(3).unwrap().terms().len(), 6);
        assert!(build_heisenberg(1).is_err());
    }

    #[test]
    fn parse_matches_builder() {
        let parsed = PauliSum::parse_str("qubits 2\n1.0 X0 X1\n1.0 Y0 Y1\n1.0 Z0 Z1\n").unwrap();
        assert_eq!(parsed, build_heisenberg(2).unwrap());
    }

    #[test]
    fn parse_identity_term() {
        let h = PauliSum::parse_str("qubits 1\n-0.5 I\n").unwrap();
        assert_eq!(h.terms().len(), 1);
        assert!(h.terms()[0].is_identity());
        assert_eq!(h.terms()[0].coefficient(), -0.5);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = PauliSum::parse_str("qubits 2\n0.3 X0 X0\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = PauliSum::parse_str("qubits 2\n0.3 X5\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = PauliSum::parse_str("qubits 2\nqubits 3\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(PauliSum::parse_str("1.0 X0\n").is_err());
        let err = PauliSum::parse_str("qubits 2\nfoo X0\n").unwrap_err();
        assert!(err.message.contains("coefficient"));
    }

    #[test]
    fn duplicate_terms_merge() {
        let h = PauliSum::parse_str("qubits 2\n0.25 Z0 Z1\n0.5 Z1 Z0\n").unwrap();
        assert_eq!(h.terms().len(), 1);
        assert!((h.terms()[0].coefficient() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn serialization_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.gen_range(1..=5);
            let terms: Vec<PauliString> = (0..rng.gen_range(1..=8))
                .map(|_| {
                    let k = rng.gen_range(0..=n.min(3));
                    let mut qubits: Vec<usize> = (0..n).collect();
                    let mut factors = Vec::new();
                    for _ in 0..k {
                        let q = qubits.remove(rng.gen_range(0..qubits.len()));
                        let axis = [Axis::X, Axis::Y, Axis::Z][rng.gen_range(0..3)];
                        factors.push((q, axis));
                    }
                    PauliString::new(rng.gen::<f64>() * 4.0 - 2.0, factors)
                })
                .collect();
            let h = PauliSum::new(n, terms).unwrap();
            let reparsed = PauliSum::parse_str(&h.to_string()).unwrap();
            assert_eq!(h, reparsed);
        }
    }

    #[test]
    fn l1_norm_examples() {
        let h = build_heisenberg(2).unwrap();
        assert_eq!(h.coeff_l1_norm(), 3.0);
        let z = PauliSum::parse_str("qubits 1\n2.0 Z0\n").unwrap();
        assert_eq!(z.coeff_l1_norm(), 2.0);
    }

    #[test]
    fn norm_modes_agree_on_small_systems() {
        let h = build_heisenberg(2).unwrap();
        assert_eq!(hamiltonian_norm(&h, NormMode::CoeffL1).unwrap(), 3.0);
        assert!((hamiltonian_norm(&h, NormMode::Spectral).unwrap() - 3.0).abs() < 1e-10);
        let z = PauliSum::parse_str("qubits 1\n2.0 Z0\n").unwrap();
        assert_eq!(hamiltonian_norm(&z, NormMode::Spectral).unwrap(), 2.0);
    }

    #[test]
    fn spectral_norm_rejects_large_systems() {
        let big = PauliSum::new(15, vec![PauliString::new(1.0, vec![(0, Axis::Z)])]).unwrap();
        assert!(hamiltonian_norm(&big, NormMode::Spectral).is_err());
        assert_eq!(hamiltonian_norm(&big, NormMode::CoeffL1).unwrap(), 1.0);
    }
}
