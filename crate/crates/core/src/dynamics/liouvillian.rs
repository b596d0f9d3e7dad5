//! Vectorized Lindblad superoperator and exact propagation for small systems.
//!
//! Column stacking: `vec(ρ)[i + j·d] = ρ[i, j]`, so that
//! `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::JumpChannel;
use crate::operators::{kron, DenseOperator, I};

/// Largest Hilbert-space dimension the exact propagator accepts.
pub const ORACLE_DIM_CAP: usize = 16;

/// `d² × d²` matrix acting on column-stacked density matrices.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    hilbert_dim: usize,
    matrix: DenseOperator,
}

impl Liouvillian {
    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.matrix
    }

    pub fn apply(&self, rho: &DenseOperator) -> DenseOperator {
        unvec(&matvec(&self.matrix, &vec_col(rho)), self.hilbert_dim)
    }
}

pub fn vec_col(rho: &DenseOperator) -> Vec<Complex64> {
    let d = rho.dim();
    let mut v = vec![Complex64::default(); d * d];
    for i in 0..d {
        for j in 0..d {
            v[i + j * d] = rho[(i, j)];
        }
    }
    v
}

pub fn unvec(v: &[Complex64], d: usize) -> DenseOperator {
    let mut m = DenseOperator::zeros(d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = v[i + j * d];
        }
    }
    m
}

fn matvec(m: &DenseOperator, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.dim())
        .map(|r| m.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// `−i(I⊗H − Hᵀ⊗I) + Σ_c r_c (L̄_c⊗L_c − ½ I⊗L_c†L_c − ½ (L_c†L_c)ᵀ⊗I)`.
pub fn build_liouvillian(h: &DenseOperator, channels: &[JumpChannel]) -> Result<Liouvillian> {
    let d = h.dim();
    if d > ORACLE_DIM_CAP {
        return Err(Error::OracleCap {
            dim: d,
            cap: ORACLE_DIM_CAP,
        });
    }
    let n = h.n_qubits().ok_or(Error::NotQubitDimension(d))?;
    let id = DenseOperator::identity(d);
    let mut l = (&kron(&id, h) - &kron(&h.transpose(), &id)).scale(-I);
    for ch in channels {
        let op = ch.operator.to_dense(n)?;
        let ldl = op.adjoint().matmul(&op);
        let r = Complex64::new(ch.rate, 0.0);
        let half = Complex64::new(0.5 * ch.rate, 0.0);
        l += &kron(&op.conj(), &op).scale(r);
        l += &kron(&id, &ldl).scale(-half);
        l += &kron(&ldl.transpose(), &id).scale(-half);
    }
    Ok(Liouvillian {
        hilbert_dim: d,
        matrix: l,
    })
}

fn norm1(m: &DenseOperator) -> f64 {
    let n = m.dim();
    (0..n)
        .map(|c| (0..n).map(|r| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &DenseOperator) -> DenseOperator {
    let n = a.dim();
    let norm = norm1(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    // ‖scaled‖₁ ≤ 0.5: 30 terms put the remainder far below f64 resolution
    let mut result = DenseOperator::identity(n);
    let mut term = DenseOperator::identity(n);
    for k in 1..=30 {
        term = term.matmul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        result += &term;
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

/// `unvec(exp(L t) vec(ρ₀))`.
pub fn evolve_exact(rho0: &DenseOperator, l: &Liouvillian, t: f64) -> Result<DenseOperator> {
    if rho0.dim() != l.hilbert_dim {
        return Err(Error::DimensionMismatch {
            expected: l.hilbert_dim,
            found: rho0.dim(),
        });
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let prop = expm(&l.matrix.scale(Complex64::new(t, 0.0)));
    Ok(unvec(&matvec(&prop, &vec_col(rho0)), l.hilbert_dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{jump_channels, DecayJump};
    use crate::operators::{pauli, Axis, PauliString, SiteOp, ONE, ZERO};
    use crate::states::diagonal_qubit;

    #[test]
    fn expm_of_diagonal_and_rotation() {
        let a = DenseOperator::from_diagonal(&[Complex64::new(-3.0, 0.0), Complex64::new(0.0, 20.0)]);
        let e = expm(&a);
        assert!((e[(0, 0)] - Complex64::new((-3.0f64).exp(), 0.0)).norm() < 1e-14);
        assert!((e[(1, 1)] - Complex64::from_polar(1.0, 20.0)).norm() < 1e-13);
        // exp(-iθσx) = cosθ − i sinθ σx
        let theta = 7.3;
        let e = expm(&pauli(Axis::X).scale(Complex64::new(0.0, -theta)));
        assert!((e[(0, 0)] - Complex64::new(theta.cos(), 0.0)).norm() < 1e-13);
        assert!((e[(0, 1)] - Complex64::new(0.0, -theta.sin())).norm() < 1e-13);
        assert_eq!(expm(&DenseOperator::zeros(3)), DenseOperator::identity(3));
    }

    #[test]
    fn dephasing_spectrum() {
        let ch = JumpChannel {
            operator: PauliString::single(0, SiteOp::Z, 1.0),
            rate: 0.0075,
        };
        let l = build_liouvillian(&DenseOperator::zeros(2), &[ch]).unwrap();
        let m = l.matrix();
        // diagonal superoperator: spectrum is its diagonal
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    assert_eq!(m[(r, c)], ZERO);
                }
            }
        }
        let mut spec: Vec<f64> = (0..4).map(|k| m[(k, k)].re).collect();
        spec.sort_by(f64::total_cmp);
        let expected = [-0.015, -0.015, 0.0, 0.0];
        for (a, b) in spec.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn free_precession_spectrum_is_imaginary() {
        let h = pauli(Axis::Z).scale(Complex64::new(0.5, 0.0));
        let l = build_liouvillian(&h, &[]).unwrap();
        let m = l.matrix();
        let mut spec: Vec<Complex64> = (0..4).map(|k| m[(k, k)]).collect();
        spec.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((spec[0] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(spec[1].norm() < 1e-15 && spec[2].norm() < 1e-15);
        assert!((spec[3] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn amplitude_damping_population() {
        let gamma = 0.015;
        let channels = jump_channels(1, gamma, 0.0, DecayJump::Lowering);
        let l = build_liouvillian(&DenseOperator::zeros(2), &channels).unwrap();
        let rho = evolve_exact(&diagonal_qubit(1.0).unwrap(), &l, 1.0 / gamma).unwrap();
        assert!((rho[(0, 0)].re - (-1.0f64).exp()).abs() < 1e-12);
        assert!((rho[(0, 0)].re - 0.367879).abs() < 1e-6);
        assert!((rho.trace() - ONE).norm() < 1e-12);
    }

    #[test]
    fn zero_time_is_identity() {
        let rho = diagonal_qubit(0.3).unwrap();
        let l = build_liouvillian(&pauli(Axis::X), &jump_channels(1, 0.1, 0.1, DecayJump::Lowering))
            .unwrap();
        assert_eq!(evolve_exact(&rho, &l, 0.0).unwrap(), *rho.as_operator());
    }

    #[test]
    fn trace_is_annihilated() {
        let h = pauli(Axis::Y).scale(Complex64::new(0.3, 0.0));
        let l = build_liouvillian(&h, &jump_channels(1, 0.2, 0.1, DecayJump::Lowering)).unwrap();
        // trace functional picks vec indices i + i·d
        let m = l.matrix();
        for c in 0..4 {
            let s = m[(0, c)] + m[(3, c)];
            assert!(s.norm() < 1e-15);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let h = DenseOperator::zeros(32);
        assert!(matches!(build_liouvillian(&h, &[]), Err(Error::OracleCap { .. })));
    }
}
