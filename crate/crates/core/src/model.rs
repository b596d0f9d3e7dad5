//! Spin-star Hamiltonian and Lindblad jump channels.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operators::{Axis, DenseOperator, PauliString, SiteOp};

/// Largest supported number of ambient spins.
pub const MAX_AMBIENT: usize = 12;

/// Two-spin interaction between the central spin and each ambient spin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coupling {
    /// `(0, 0, J)`
    Ising,
    /// `(J, J, J)`
    Xxx,
    /// `(J, J, 0)`
    Xx,
}

/// Initial state of every ambient spin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AmbientState {
    Thermal,
    Plus,
}

/// Jump operator used for the decay channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DecayJump {
    /// σ₋, relaxation toward `|↓⟩`.
    #[default]
    Lowering,
    /// σx, symmetric bit-flip noise.
    SigmaX,
}

macro_rules! keyword_enum {
    ($ty:ty, $what:literal, { $($name:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name => Ok($variant),)+
                    other => Err(Error::config(format!(concat!("unknown ", $what, " '{}'"), other))),
                }
            }
        }
    };
}

keyword_enum!(Coupling, "coupling", { "ising" => Coupling::Ising, "xxx" => Coupling::Xxx, "xx" => Coupling::Xx });
keyword_enum!(AmbientState, "ambient state", { "thermal" => AmbientState::Thermal, "plus" => AmbientState::Plus });
keyword_enum!(DecayJump, "decay jump", {
    "lowering" => DecayJump::Lowering,
    "sigma-x" => DecayJump::SigmaX,
    "sigma_x" => DecayJump::SigmaX,
});

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coupling::Ising => "ising",
            Coupling::Xxx => "xxx",
            Coupling::Xx => "xx",
        })
    }
}

impl fmt::Display for AmbientState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AmbientState::Thermal => "thermal",
            AmbientState::Plus => "plus",
        })
    }
}

impl fmt::Display for DecayJump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecayJump::Lowering => "lowering",
            DecayJump::SigmaX => "sigma-x",
        })
    }
}

/// Full description of a spin-star experiment. Rates, couplings and times are
/// in units of the Bohr frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelConfig {
    /// Number of ambient spins; the system has `ambient_count + 1` qubits.
    pub ambient_count: usize,
    pub coupling: Coupling,
    pub j: f64,
    pub omega: f64,
    pub gamma: f64,
    pub gamma_phi: f64,
    pub ambient_state: AmbientState,
    /// Inverse temperature, used only for thermal ambient spins.
    pub beta: f64,
    pub decay_jump: DecayJump,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            ambient_count: 2,
            coupling: Coupling::Xx,
            j: 0.05,
            omega: 1.0,
            gamma: 0.015,
            gamma_phi: 0.015,
            ambient_state: AmbientState::Plus,
            beta: 0.5,
            decay_jump: DecayJump::Lowering,
        }
    }
}

impl ModelConfig {
    pub fn n_qubits(&self) -> usize {
        self.ambient_count + 1
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_AMBIENT).contains(&self.ambient_count) {
            return Err(Error::config(format!(
                "ambient_count must be in 1..={MAX_AMBIENT}, got {}",
                self.ambient_count
            )));
        }
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be > 0, got {v}")))
            }
        };
        let non_negative = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be >= 0, got {v}")))
            }
        };
        positive("j", self.j)?;
        positive("omega", self.omega)?;
        non_negative("gamma", self.gamma)?;
        non_negative("gamma_phi", self.gamma_phi)?;
        if self.ambient_state == AmbientState::Thermal {
            positive("beta", self.beta)?;
        }
        Ok(())
    }
}

/// A Lindblad channel `rate · D[operator]`.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpChannel {
    pub operator: PauliString,
    pub rate: f64,
}

/// Interaction strengths `(Jx, Jy, Jz)` for a coupling type.
pub fn coupling_vector(coupling: Coupling, j: f64) -> [f64; 3] {
    match coupling {
        Coupling::Ising => [0.0, 0.0, j],
        Coupling::Xxx => [j, j, j],
        Coupling::Xx => [j, j, 0.0],
    }
}

/// Hamiltonian as a sum of Pauli strings on a fixed number of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<PauliString>,
}

impl Hamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<PauliString>) -> Result<Self> {
        for t in &terms {
            t.validate(n_qubits)?;
        }
        Ok(Self { n_qubits, terms })
    }

    /// Free precession `Σ_i ω S_z^i` on `n_qubits` with no interactions.
    pub fn free(n_qubits: usize, omega: f64) -> Self {
        let terms = (0..n_qubits)
            .map(|i| PauliString::single(i, SiteOp::Z, omega * 0.5))
            .collect();
        Self { n_qubits, terms }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn to_dense(&self) -> DenseOperator {
        let mut h = DenseOperator::zeros(self.dim());
        for t in &self.terms {
            h += &t.to_dense(self.n_qubits).expect("terms validated on construction");
        }
        h
    }
}

/// `Σ_{i=0}^{M} ω S_z^i + Σ_{i=1}^{M} Σ_v J_v S_v^0 S_v^i` with `S = σ/2`.
/// Ambient spins couple only to the central spin.
pub fn build_hamiltonian(cfg: &ModelConfig) -> Result<Hamiltonian> {
    cfg.validate()?;
    let n = cfg.n_qubits();
    let mut terms: Vec<PauliString> = (0..n)
        .map(|i| PauliString::single(i, SiteOp::Z, cfg.omega * 0.5))
        .collect();
    let jv = coupling_vector(cfg.coupling, cfg.j);
    for i in 1..n {
        for (axis, &jc) in Axis::ALL.iter().zip(&jv) {
            if jc != 0.0 {
                let op = SiteOp::from(*axis);
                terms.push(PauliString::pair((0, op), (i, op), jc * 0.25)?);
            }
        }
    }
    Hamiltonian::new(n, terms)
}

/// One decay and one dephasing channel per qubit. Dephasing uses σz at
/// rate `γφ/2`; decay uses σ₋ (or σx) at rate `γ`.
pub fn jump_channels(
    n_qubits: usize,
    gamma: f64,
    gamma_phi: f64,
    decay_jump: DecayJump,
) -> Vec<JumpChannel> {
    let decay_op = match decay_jump {
        DecayJump::Lowering => SiteOp::Minus,
        DecayJump::SigmaX => SiteOp::X,
    };
    let decay = (0..n_qubits).map(|i| JumpChannel {
        operator: PauliString::single(i, decay_op, 1.0),
        rate: gamma,
    });
    let dephasing = (0..n_qubits).map(|i| JumpChannel {
        operator: PauliString::single(i, SiteOp::Z, 1.0),
        rate: gamma_phi * 0.5,
    });
    decay.chain(dephasing).collect()
}

pub fn build_jump_channels(cfg: &ModelConfig) -> Result<Vec<JumpChannel>> {
    cfg.validate()?;
    Ok(jump_channels(
        cfg.n_qubits(),
        cfg.gamma,
        cfg.gamma_phi,
        cfg.decay_jump,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{embed, kron, pauli, spin_op, ZERO};
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn cfg(m: usize, coupling: Coupling) -> ModelConfig {
        ModelConfig {
            ambient_count: m,
            coupling,
            ..ModelConfig::default()
        }
    }

    /// Independent Kronecker-sum construction of the star Hamiltonian.
    fn kron_sum_hamiltonian(cfg: &ModelConfig) -> DenseOperator {
        let n = cfg.n_qubits();
        let id = DenseOperator::identity(2);
        let chain = |ops: &[(usize, &DenseOperator)]| {
            let mut out = DenseOperator::identity(1);
            for s in 0..n {
                let f = ops.iter().find(|(site, _)| *site == s).map_or(&id, |(_, o)| *o);
                out = kron(&out, f);
            }
            out
        };
        let mut h = DenseOperator::zeros(1 << n);
        let sz = spin_op(Axis::Z).scale(c(cfg.omega));
        for i in 0..n {
            h += &chain(&[(i, &sz)]);
        }
        let jv = coupling_vector(cfg.coupling, cfg.j);
        for i in 1..n {
            for (axis, &jc) in Axis::ALL.iter().zip(&jv) {
                let s = spin_op(*axis);
                h += &chain(&[(0, &s), (i, &s)]).scale(c(jc));
            }
        }
        h
    }

    #[test]
    fn coupling_vectors() {
        assert_eq!(coupling_vector(Coupling::Ising, 0.05), [0.0, 0.0, 0.05]);
        assert_eq!(coupling_vector(Coupling::Xxx, 0.05), [0.05, 0.05, 0.05]);
        assert_eq!(coupling_vector(Coupling::Xx, 1.0), [1.0, 1.0, 0.0]);
    }

    #[test]
    fn xx_two_qubit_hamiltonian() {
        let h = build_hamiltonian(&cfg(1, Coupling::Xx)).unwrap().to_dense();
        let expected = DenseOperator::from_rows(&[
            [c(1.0), ZERO, ZERO, ZERO],
            [ZERO, ZERO, c(0.025), ZERO],
            [ZERO, c(0.025), ZERO, ZERO],
            [ZERO, ZERO, ZERO, c(-1.0)],
        ]);
        assert!(h.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn ising_two_qubit_hamiltonian() {
        let h = build_hamiltonian(&cfg(1, Coupling::Ising)).unwrap().to_dense();
        let expected =
            DenseOperator::from_diagonal(&[c(1.0125), c(-0.0125), c(-0.0125), c(-1.0 + 0.0125)]);
        assert!(h.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn hamiltonian_matches_kronecker_sum() {
        for m in 1..=3 {
            for coupling in [Coupling::Ising, Coupling::Xxx, Coupling::Xx] {
                let cfg = cfg(m, coupling);
                let h = build_hamiltonian(&cfg).unwrap().to_dense();
                assert!(h.max_abs_diff(&kron_sum_hamiltonian(&cfg)) < 1e-12);
                assert!(h.is_hermitian(1e-12));
            }
        }
    }

    #[test]
    fn hamiltonian_conserves_total_magnetization() {
        for m in 1..=3 {
            for coupling in [Coupling::Ising, Coupling::Xxx, Coupling::Xx] {
                let cfg = cfg(m, coupling);
                let h = build_hamiltonian(&cfg).unwrap().to_dense();
                let mut mz = DenseOperator::zeros(cfg.dim());
                for i in 0..cfg.n_qubits() {
                    mz += &embed(&pauli(Axis::Z), i, cfg.n_qubits()).unwrap();
                }
                assert!(h.commutator(&mz).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ambient_spins_do_not_couple_to_each_other() {
        let h = build_hamiltonian(&cfg(4, Coupling::Xxx)).unwrap();
        for t in h.terms() {
            if t.terms().len() == 2 {
                assert_eq!(t.terms()[0].0, 0);
            }
        }
    }

    #[test]
    fn channels_with_default_rates() {
        let channels = build_jump_channels(&cfg(1, Coupling::Xx)).unwrap();
        let summary: Vec<(usize, SiteOp, f64)> = channels
            .iter()
            .map(|ch| (ch.operator.terms()[0].0, ch.operator.terms()[0].1, ch.rate))
            .collect();
        assert_eq!(
            summary,
            vec![
                (0, SiteOp::Minus, 0.015),
                (1, SiteOp::Minus, 0.015),
                (0, SiteOp::Z, 0.0075),
                (1, SiteOp::Z, 0.0075),
            ]
        );
    }

    #[test]
    fn zero_rates_keep_channels() {
        let mut c = cfg(2, Coupling::Ising);
        c.gamma = 0.0;
        c.gamma_phi = 0.0;
        let channels = build_jump_channels(&c).unwrap();
        assert_eq!(channels.len(), 6);
        assert!(channels.iter().all(|ch| ch.rate == 0.0));
    }

    #[test]
    fn sigma_x_decay_convention() {
        let channels = jump_channels(1, 0.015, 0.015, DecayJump::SigmaX);
        assert_eq!(channels[0].operator.terms(), &[(0, SiteOp::X)]);
    }

    #[test]
    fn channel_count_and_rate_budget() {
        for m in 1..=5 {
            let c = cfg(m, Coupling::Xx);
            let channels = build_jump_channels(&c).unwrap();
            assert_eq!(channels.len(), 2 * (m + 1));
            let total: f64 = channels.iter().map(|ch| ch.rate).sum();
            let budget = (m + 1) as f64 * (c.gamma + c.gamma_phi / 2.0);
            assert!((total - budget).abs() < 1e-12);
            assert!(channels.iter().all(|ch| ch.operator.terms().len() == 1));
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(0, Coupling::Xx).validate().is_err());
        assert!(cfg(13, Coupling::Xx).validate().is_err());
        let mut c = cfg(2, Coupling::Xx);
        c.j = 0.0;
        assert!(c.validate().is_err());
        c.j = 0.05;
        c.gamma = -1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn keywords_parse() {
        assert_eq!("XXX".parse::<Coupling>().unwrap(), Coupling::Xxx);
        assert_eq!("sigma-x".parse::<DecayJump>().unwrap(), DecayJump::SigmaX);
        assert!("xyz".parse::<Coupling>().is_err());
    }
}
