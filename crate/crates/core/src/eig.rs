//! Extreme eigenvalues of Pauli-sum observables, implemented in-repo.
//!
//! Two routes sit behind [`exact_ground_energy`] and [`spectral_norm`]:
//!
//! - dense: the 2^N x 2^N Hermitian matrix H = A + iB is embedded into the
//!   real symmetric matrix [[A, -B], [B, A]] (same spectrum, doubled),
//!   Householder-tridiagonalized, and solved by implicit-shift QL;
//! - Lanczos: matrix-free H·v products with full reorthogonalization,
//!   extracting the extreme Ritz values of the Krylov tridiagonal.
//!
//! The dense route is used up to dim 256; both agree to ~1e-10 where they
//! overlap, which the tests exercise as a cross-check.

use num_complex::Complex64;

use crate::pauli::PauliSum;
use crate::state::apply_pauli_sum;
use crate::{Result, SimError};

/// Largest system the oracle accepts.
pub const MAX_ORACLE_QUBITS: usize = 14;

const DENSE_DIM_LIMIT: usize = 256;

/// Smallest eigenvalue of the observable over `num_qubits` qubits.
pub fn exact_ground_energy(observable: &PauliSum, num_qubits: usize) -> Result<f64> {
    let (lo, _hi) = extreme_eigenvalues(observable, num_qubits)?;
    Ok(lo)
}

/// Largest |eigenvalue| of the observable.
pub fn spectral_norm(observable: &PauliSum) -> Result<f64> {
    let (lo, hi) = extreme_eigenvalues(observable, observable.num_qubits())?;
    Ok(lo.abs().max(hi.abs()))
}

/// (smallest, largest) eigenvalue.
pub fn extreme_eigenvalues(observable: &PauliSum, num_qubits: usize) -> Result<(f64, f64)> {
    if num_qubits > MAX_ORACLE_QUBITS {
        return Err(SimError::SystemTooLarge {
            num_qubits,
            max: MAX_ORACLE_QUBITS,
        });
    }
    if observable.num_qubits() > num_qubits {
        return Err(SimError::QubitOutOfRange {
            qubit: observable.num_qubits() - 1,
            num_qubits,
        });
    }
    let dim = 1usize << num_qubits;
    if dim <= DENSE_DIM_LIMIT {
        let eigs = dense_eigenvalues(observable, num_qubits);
        let lo = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok((lo, hi))
    } else {
        Ok(lanczos_extremes(observable, num_qubits))
    }
}

/// Row-major dense matrix of the observable (2^N x 2^N complex entries).
pub fn dense_matrix(observable: &PauliSum, num_qubits: usize) -> Vec<Complex64> {
    let dim = 1usize << num_qubits;
    let mut mat = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut basis = vec![Complex64::new(0.0, 0.0); dim];
    for col in 0..dim {
        basis[col] = Complex64::new(1.0, 0.0);
        let column = apply_pauli_sum(observable, &basis, num_qubits);
        basis[col] = Complex64::new(0.0, 0.0);
        for row in 0..dim {
            mat[row * dim + col] = column[row];
        }
    }
    mat
}

/// All eigenvalues of the dense Hermitian matrix, each appearing twice
/// (an artifact of the real embedding; extremes are unaffected).
fn dense_eigenvalues(observable: &PauliSum, num_qubits: usize) -> Vec<f64> {
    let dim = 1usize << num_qubits;
    let h = dense_matrix(observable, num_qubits);
    // Embed A + iB as [[A, -B], [B, A]].
    let m = 2 * dim;
    let mut s = vec![0.0f64; m * m];
    for r in 0..dim {
        for c in 0..dim {
            let v = h[r * dim + c];
            s[r * m + c] = v.re;
            s[r * m + dim + c] = -v.im;
            s[(dim + r) * m + c] = v.im;
            s[(dim + r) * m + dim + c] = v.re;
        }
    }
    let (d, e) = householder_tridiagonalize(&mut s, m);
    tridiagonal_eigenvalues(d, e)
}

/// Reduce a real symmetric matrix (row-major, n x n) to tridiagonal form,
/// returning (diagonal, subdiagonal). The input buffer is clobbered.
fn householder_tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i;
        let mut h = 0.0;
        if l > 1 {
            let scale: f64 = (0..l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l - 1];
            } else {
                for k in 0..l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l - 1];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l - 1] = f - g;
                f = 0.0;
                for j in 0..l {
                    // u = a[i][0..l]; form p = A·u / h
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l - 1];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
/// `e[0]` is unused; `e[i]` couples rows i-1 and i.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    if n == 0 {
        return d;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

/// Extreme Ritz values by Lanczos with full reorthogonalization and a
/// deterministic start vector.
fn lanczos_extremes(observable: &PauliSum, num_qubits: usize) -> (f64, f64) {
    let dim = 1usize << num_qubits;
    let max_iter = dim.min(260);
    let scale = observable.coeff_l1_norm().max(1.0);

    let mut v = deterministic_unit_vector(dim);
    let mut v_prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); dim];
    let mut beta_prev = 0.0f64;
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut last = (f64::INFINITY, f64::NEG_INFINITY);

    for k in 0..max_iter {
        let mut w = apply_pauli_sum(observable, &v, num_qubits);
        if beta_prev != 0.0 {
            for (wi, pi) in w.iter_mut().zip(&v_prev) {
                *wi -= beta_prev * pi;
            }
        }
        let alpha: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= alpha * vi;
        }
        basis.push(v.clone());
        alphas.push(alpha);
        // Two reorthogonalization sweeps keep the basis numerically
        // orthogonal even for clustered spectra.
        for _ in 0..2 {
            for u in &basis {
                let proj: Complex64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                if proj.norm_sqr() > 0.0 {
                    for (wi, ui) in w.iter_mut().zip(u) {
                        *wi -= proj * ui;
                    }
                }
            }
        }
        let beta = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();

        if k % 8 == 7 || beta <= 1e-13 * scale || k + 1 == max_iter {
            let eigs = tridiagonal_eigenvalues(alphas.clone(), lanczos_offdiag(&betas));
            let lo = eigs[0];
            let hi = *eigs.last().unwrap();
            let converged =
                (lo - last.0).abs() <= 1e-12 * scale && (hi - last.1).abs() <= 1e-12 * scale;
            last = (lo, hi);
            if converged || beta <= 1e-13 * scale {
                return last;
            }
        }
        betas.push(beta);
        v_prev = std::mem::replace(&mut v, w);
        for x in &mut v {
            *x /= beta;
        }
        beta_prev = beta;
    }
    last
}

/// Subdiagonal layout expected by `tridiagonal_eigenvalues` (e[i] couples
/// rows i-1 and i; e[0] unused).
fn lanczos_offdiag(betas: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; betas.len() + 1];
    for (i, &b) in betas.iter().enumerate() {
        e[i + 1] = b;
    }
    e
}

/// Fixed pseudo-random unit vector so the oracle is deterministic.
fn deterministic_unit_vector(dim: usize) -> Vec<Complex64> {
    let mut state = 0x243F6A8885A308D3u64;
    let mut next = move || {
        state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut v: Vec<Complex64> = (0..dim).map(|_| Complex64::new(next(), next())).collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}
