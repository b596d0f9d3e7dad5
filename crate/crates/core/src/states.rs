//! Initial density matrices.

use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{AmbientState, ModelConfig};
use crate::operators::{kron, DenseOperator};

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(DenseOperator);

impl DensityMatrix {
    pub const HERMITICITY_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;
    pub const PSD_TOL: f64 = 1e-10;

    /// Checks Hermiticity and unit trace. Positivity is checked separately
    /// by [`DensityMatrix::min_eigenvalue`] since it costs a diagonalization.
    pub fn new(op: DenseOperator) -> Result<Self> {
        if op.n_qubits().is_none() {
            return Err(Error::NotQubitDimension(op.dim()));
        }
        let herm = op.hermiticity_error();
        if herm > Self::HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (error {herm:e})")));
        }
        let tr = op.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > Self::TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        Ok(Self(op))
    }

    /// Wraps without checks; for states produced by the integrator.
    pub(crate) fn new_unchecked(op: DenseOperator) -> Self {
        Self(op)
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let n = psi.len();
        let mut m = DenseOperator::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Self::new(m)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self(DenseOperator::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn as_operator(&self) -> &DenseOperator {
        &self.0
    }

    pub fn into_operator(self) -> DenseOperator {
        self.0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.hermitian_eigenvalues()[0]
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.min_eigenvalue() >= -Self::PSD_TOL
    }

    /// `tr(ρ²)`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.0.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

impl Deref for DensityMatrix {
    type Target = DenseOperator;
    fn deref(&self) -> &DenseOperator {
        &self.0
    }
}

/// `|+⟩⟨+|` with `|+⟩ = (|↑⟩ + |↓⟩)/√2`.
pub fn plus_state() -> DensityMatrix {
    let h = Complex64::new(0.5, 0.0);
    DensityMatrix(DenseOperator::from_rows(&[[h, h], [h, h]]))
}

/// Gibbs state of `H = (ω/2)σz` at inverse temperature `beta`:
/// `diag(e^{−βω/2}, e^{βω/2}) / Z`, index 0 being the excited level.
pub fn thermal_state(beta: f64, omega: f64) -> Result<DensityMatrix> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::config(format!("beta must be > 0, got {beta}")));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::config(format!("omega must be > 0, got {omega}")));
    }
    // e^{-x/2} / (e^{-x/2} + e^{x/2}) = 1 / (1 + e^x); stays finite for large x
    let x = beta * omega;
    let p_up = 1.0 / (1.0 + x.exp());
    let p_down = 1.0 / (1.0 + (-x).exp());
    Ok(DensityMatrix(DenseOperator::from_diagonal(&[
        Complex64::new(p_up, 0.0),
        Complex64::new(p_down, 0.0),
    ])))
}

/// `central ⊗ ambient^{⊗M}`, central spin leftmost.
pub fn product_state(
    central: &DensityMatrix,
    ambient: &DensityMatrix,
    ambient_count: usize,
) -> Result<DensityMatrix> {
    if ambient_count < 1 {
        return Err(Error::config("product state needs at least one ambient spin"));
    }
    for (name, s) in [("central", central), ("ambient", ambient)] {
        if s.dim() != 2 {
            return Err(Error::InvalidState(format!(
                "{name} state must be a single qubit, got dimension {}",
                s.dim()
            )));
        }
    }
    let mut out = central.0.clone();
    for _ in 0..ambient_count {
        out = kron(&out, &ambient.0);
    }
    Ok(DensityMatrix(out))
}

/// Initial state for a configuration: central `|+⟩`, ambient spins thermal or `|+⟩`.
pub fn initial_state(cfg: &ModelConfig) -> Result<DensityMatrix> {
    cfg.validate()?;
    let ambient = match cfg.ambient_state {
        AmbientState::Thermal => thermal_state(cfg.beta, cfg.omega)?,
        AmbientState::Plus => plus_state(),
    };
    product_state(&plus_state(), &ambient, cfg.ambient_count)
}

/// Single-qubit state `diag(p, 1 − p)`.
pub fn diagonal_qubit(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidState(format!("population {p} outside [0, 1]")));
    }
    DensityMatrix::new(DenseOperator::from_diagonal(&[
        Complex64::new(p, 0.0),
        Complex64::new(1.0 - p, 0.0),
    ]))
}
