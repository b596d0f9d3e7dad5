//! Time evolution under the Lindblad master equation.

mod generator;
mod liouvillian;

pub use generator::{Frame, LindbladGenerator};
pub use liouvillian::{
    build_liouvillian, evolve_exact, expm, unvec, vec_col, Liouvillian, ORACLE_DIM_CAP,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::CoherenceSample;
use crate::model::{Hamiltonian, JumpChannel};
use crate::operators::{apply_string, DenseOperator, Side, I};
use crate::states::DensityMatrix;

/// Uniform time grid with sampling stride, in units of `1/ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub dt: f64,
    pub sample_stride: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_max: 200.0,
            dt: 0.01,
            sample_stride: 10,
        }
    }
}

impl TimeGrid {
    pub fn new(t_max: f64, dt: f64, sample_stride: usize) -> Result<Self> {
        let grid = Self {
            t_max,
            dt,
            sample_stride,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::config(format!("t_max must be > 0, got {}", self.t_max)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= self.t_max) {
            return Err(Error::config(format!(
                "dt must be in (0, t_max], got {}",
                self.dt
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::config("sample_stride must be >= 1"));
        }
        if self.t_max / self.dt > u32::MAX as f64 {
            return Err(Error::config("too many time steps"));
        }
        Ok(())
    }

    /// `ceil(t_max / dt)`, tolerant of representation error in the ratio.
    pub fn n_steps(&self) -> usize {
        let ratio = self.t_max / self.dt;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            ratio.ceil() as usize
        }
    }

    /// Whether step index `k` is recorded.
    pub fn is_sample(&self, k: usize) -> bool {
        k.is_multiple_of(self.sample_stride) || k == self.n_steps()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

/// Right-hand side of a matrix ODE `ρ' = f(ρ)`.
pub trait MatrixOde {
    fn eval(&self, rho: &DenseOperator, out: &mut DenseOperator);
}

impl<F> MatrixOde for F
where
    F: Fn(&DenseOperator, &mut DenseOperator),
{
    fn eval(&self, rho: &DenseOperator, out: &mut DenseOperator) {
        self(rho, out)
    }
}

impl MatrixOde for LindbladGenerator {
    fn eval(&self, rho: &DenseOperator, out: &mut DenseOperator) {
        self.apply(rho, out)
    }
}

/// Scratch buffers for repeated RK4 steps of one dimension.
#[derive(Clone, Debug)]
pub struct Rk4 {
    k: DenseOperator,
    stage: DenseOperator,
    acc: DenseOperator,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Self {
            k: DenseOperator::zeros(dim),
            stage: DenseOperator::zeros(dim),
            acc: DenseOperator::zeros(dim),
        }
    }

    /// Classical fourth-order Runge–Kutta step in place, followed by
    /// `ρ ← (ρ + ρ†)/2`.
    pub fn step(&mut self, rho: &mut DenseOperator, dt: f64, ode: &impl MatrixOde) {
        let Self { k, stage, acc } = self;
        // acc accumulates k1 + 2k2 + 2k3; stage holds the next evaluation point
        ode.eval(rho, k);
        for (((a, s), &r), &kv) in acc
            .as_mut_slice()
            .iter_mut()
            .zip(stage.as_mut_slice())
            .zip(rho.as_slice())
            .zip(k.as_slice())
        {
            *a = kv;
            *s = r + kv * (0.5 * dt);
        }
        for h in [0.5 * dt, dt] {
            ode.eval(stage, k);
            for (((a, s), &r), &kv) in acc
                .as_mut_slice()
                .iter_mut()
                .zip(stage.as_mut_slice())
                .zip(rho.as_slice())
                .zip(k.as_slice())
            {
                *a += kv * 2.0;
                *s = r + kv * h;
            }
        }
        ode.eval(stage, k);
        for ((r, &a), &kv) in rho.as_mut_slice().iter_mut().zip(acc.as_slice()).zip(k.as_slice()) {
            *r += (a + kv) * (dt / 6.0);
        }
        rho.hermitize();
    }
}

/// One RK4 step of `ρ' = ode(ρ)` from `rho`.
pub fn step_rk4(rho: &DenseOperator, dt: f64, ode: &impl MatrixOde) -> DenseOperator {
    let mut next = rho.clone();
    Rk4::new(rho.dim()).step(&mut next, dt, ode);
    next
}

/// `−i[H, ρ] + Σ_c r_c (L_c ρ L_c† − ½{L_c†L_c, ρ})`, every product formed
/// by [`apply_string`].
pub fn lindblad_rhs(
    rho: &DenseOperator,
    h: &Hamiltonian,
    channels: &[JumpChannel],
) -> Result<DenseOperator> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    let mut out = DenseOperator::zeros(rho.dim());
    for term in h.terms() {
        let left = apply_string(term, rho, Side::Left)?;
        let right = apply_string(term, rho, Side::Right)?;
        out += &(&left - &right).scale(-I);
    }
    for ch in channels {
        if ch.rate == 0.0 {
            continue;
        }
        let op = &ch.operator;
        // only P·X and X·P are available, so L†X is formed as (X†L)†
        let l_rho = apply_string(op, rho, Side::Left)?;
        let jump = apply_string(op, &l_rho.adjoint(), Side::Left)?.adjoint();
        let ldl_rho = apply_string(op, &l_rho.adjoint(), Side::Right)?.adjoint();
        let rho_ldag = apply_string(op, &rho.adjoint(), Side::Left)?.adjoint();
        let rho_ldl = apply_string(op, &rho_ldag, Side::Right)?;
        let r = Complex64::new(ch.rate, 0.0);
        let anti = &ldl_rho + &rho_ldl;
        out += &jump.scale(r);
        out += &anti.scale(-0.5 * r);
    }
    Ok(out)
}

/// Knobs for [`evolve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub frame: Frame,
    /// Diagonalize the state at `audit_points` evenly spaced samples.
    pub psd_audit: bool,
    pub audit_points: usize,
    /// Abort if `|tr ρ − 1|` exceeds this.
    pub trace_tolerance: f64,
    /// Abort if an audited eigenvalue falls below `−psd_tolerance`.
    pub psd_tolerance: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            frame: Frame::Auto,
            psd_audit: false,
            audit_points: 10,
            trace_tolerance: 1e-6,
            psd_tolerance: 1e-6,
        }
    }
}

/// Smallest eigenvalue of the state at an audited sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdAudit {
    pub t: f64,
    pub min_eigenvalue: f64,
}

/// Output of [`evolve`].
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<CoherenceSample>,
    pub final_state: DensityMatrix,
    /// Largest `|ρ − ρ†|` entry over all samples.
    pub max_hermiticity_error: f64,
    pub audits: Vec<PsdAudit>,
}

/// Integrates from `t = 0` to the end of `grid` with fixed-step RK4,
/// recording central-spin measures and calling `observer` with the
/// laboratory-frame state at every sample.
pub fn evolve(
    rho0: &DensityMatrix,
    h: &Hamiltonian,
    channels: &[JumpChannel],
    grid: &TimeGrid,
    options: &EvolveOptions,
    mut observer: impl FnMut(f64, &DensityMatrix),
) -> Result<Trajectory> {
    grid.validate()?;
    if rho0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho0.dim(),
        });
    }
    let generator = LindbladGenerator::new(h, channels, options.frame)?;
    let n_steps = grid.n_steps();
    let n_samples = (0..=n_steps).filter(|&k| grid.is_sample(k)).count();
    let audit_ordinals: Vec<usize> = if options.psd_audit && options.audit_points > 0 {
        let a = options.audit_points.min(n_samples);
        let mut v: Vec<usize> = (0..a)
            .map(|q| {
                if a == 1 {
                    n_samples - 1
                } else {
                    ((q * (n_samples - 1)) as f64 / (a - 1) as f64).round() as usize
                }
            })
            .collect();
        v.dedup();
        v
    } else {
        Vec::new()
    };

    let mut rho = rho0.as_operator().clone();
    generator.to_rotating_frame(&mut rho, 0.0);
    let mut rk4 = Rk4::new(rho.dim());
    let mut samples = Vec::with_capacity(n_samples);
    let mut audits = Vec::with_capacity(audit_ordinals.len());
    let mut max_herm = 0.0f64;
    let mut lab = DensityMatrix::new_unchecked(rho.clone());

    for k in 0..=n_steps {
        if grid.is_sample(k) {
            let t = grid.time(k);
            let mut op = rho.clone();
            generator.to_lab_frame(&mut op, t);
            lab = DensityMatrix::new_unchecked(op);
            let sample = CoherenceSample::from_state(t, &lab)?;
            if sample.trace_dev.is_nan() || sample.trace_dev > options.trace_tolerance {
                return Err(Error::InvariantBreach {
                    t,
                    detail: format!("trace deviates from 1 by {:e}", sample.trace_dev),
                });
            }
            max_herm = max_herm.max(lab.hermiticity_error());
            if audit_ordinals.contains(&samples.len()) {
                let min_eigenvalue = lab.min_eigenvalue();
                if min_eigenvalue < -options.psd_tolerance {
                    return Err(Error::InvariantBreach {
                        t,
                        detail: format!("minimum eigenvalue {min_eigenvalue:e}"),
                    });
                }
                audits.push(PsdAudit { t, min_eigenvalue });
            }
            samples.push(sample);
            observer(t, &lab);
        }
        if k < n_steps {
            rk4.step(&mut rho, grid.dt, &generator);
        }
    }

    Ok(Trajectory {
        samples,
        final_state: lab,
        max_hermiticity_error: max_herm,
        audits,
    })
}
