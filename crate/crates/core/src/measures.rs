//! Reduced central-spin state, coherence quantifiers and summary statistics.

use num_complex::Complex64;

use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::operators::DenseOperator;
use crate::states::DensityMatrix;

/// Default threshold for [`coherence_time`]: the 1/e point of the envelope.
pub const DEFAULT_THRESHOLD: f64 = 0.367_879_441_171_442_33;
/// Samples that must stay below threshold after a crossing.
pub const PERSISTENCE_SAMPLES: usize = 5;
/// Minimum prominence of a revival peak in `l1`.
pub const REVIVAL_PROMINENCE: f64 = 0.01;

/// Measures of the reduced central spin at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceSample {
    pub t: f64,
    /// `⟨σx⟩` of the central spin.
    pub sx: f64,
    /// l1 norm of coherence of the central spin.
    pub l1: f64,
    /// `|tr ρ − 1|` of the full state.
    pub trace_dev: f64,
    /// `tr ρ₁²` of the central spin.
    pub purity: f64,
}

impl CoherenceSample {
    /// Measures the central spin of a full `(M+1)`-qubit state.
    pub fn from_state(t: f64, rho: &DenseOperator) -> Result<Self> {
        let n = rho.n_qubits().ok_or(Error::NotQubitDimension(rho.dim()))?;
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: 1,
            });
        }
        let reduced = partial_trace_to_central(rho, n - 1)?;
        Ok(Self {
            t,
            sx: expect_sigma_x(&reduced)?,
            l1: l1_coherence(&reduced),
            trace_dev: (rho.trace().re - 1.0).abs(),
            purity: reduced.as_slice().iter().map(|z| z.norm_sqr()).sum(),
        })
    }
}

/// Sampled central-spin trajectory of one configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub config: ModelConfig,
    pub grid: TimeGrid,
    pub samples: Vec<CoherenceSample>,
}

impl SimulationResult {
    pub fn coherence_time(&self) -> Result<Option<f64>> {
        coherence_time(&self.samples, DEFAULT_THRESHOLD)
    }

    pub fn revivals(&self) -> usize {
        detect_revivals(&self.samples)
    }
}

/// `(ρ₁)_{ab} = Σ_k ρ_{a·2^M + k, b·2^M + k}`: traces out every ambient spin.
pub fn partial_trace_to_central(rho: &DenseOperator, ambient_count: usize) -> Result<DenseOperator> {
    let expected = 2usize << ambient_count;
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    let block = 1usize << ambient_count;
    let mut out = DenseOperator::zeros(2);
    for a in 0..2 {
        for b in 0..2 {
            out[(a, b)] = (0..block).map(|k| rho[(a * block + k, b * block + k)]).sum();
        }
    }
    Ok(out)
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence(rho: &DenseOperator) -> f64 {
    let n = rho.dim();
    let total: f64 = rho.as_slice().iter().map(|z| z.norm()).sum();
    let diag: f64 = (0..n).map(|i| rho[(i, i)].norm()).sum();
    total - diag
}

/// `tr(ρσx) = 2 Re ρ₀₁` for a single qubit.
pub fn expect_sigma_x(rho: &DenseOperator) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let off: Complex64 = rho[(0, 1)];
    Ok(2.0 * off.re)
}

/// First time the coherence envelope `l1/2` drops below
/// `threshold_fraction · l1(0)/2` and stays there for the following
/// [`PERSISTENCE_SAMPLES`] samples. `None` if it never does.
pub fn coherence_time(samples: &[CoherenceSample], threshold_fraction: f64) -> Result<Option<f64>> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::config(format!(
            "threshold fraction must be in (0, 1), got {threshold_fraction}"
        )));
    }
    let first = samples
        .first()
        .ok_or_else(|| Error::config("coherence time of an empty series"))?;
    if first.l1 <= 0.0 {
        return Err(Error::NoInitialCoherence);
    }
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let envelope: Vec<f64> = samples.iter().map(|s| s.l1 / 2.0).collect();
    Ok(envelope_crossing(
        &times,
        &envelope,
        threshold_fraction * envelope[0],
    ))
}

/// Persistent downward crossing of an absolute `threshold`, linearly
/// interpolated between the bracketing samples. Near the end of the series
/// the persistence window shrinks to whatever samples remain.
pub fn envelope_crossing(times: &[f64], values: &[f64], threshold: f64) -> Option<f64> {
    assert_eq!(times.len(), values.len());
    let n = values.len();
    let k = (0..n).find(|&k| {
        let end = (k + 1 + PERSISTENCE_SAMPLES).min(n);
        values[k..end].iter().all(|&v| v < threshold)
    })?;
    if k == 0 {
        return Some(times[0]);
    }
    let (t0, t1) = (times[k - 1], times[k]);
    let (v0, v1) = (values[k - 1], values[k]);
    Some(t0 + (v0 - threshold) / (v0 - v1) * (t1 - t0))
}

/// Number of coherence revivals: peaks of `l1` after it first falls below
/// half its initial value that stand at least [`REVIVAL_PROMINENCE`] above
/// the lower of their two adjacent local minima.
pub fn detect_revivals(samples: &[CoherenceSample]) -> usize {
    let values: Vec<f64> = samples.iter().map(|s| s.l1).collect();
    count_revivals(&values, REVIVAL_PROMINENCE)
}

pub fn count_revivals(values: &[f64], min_prominence: f64) -> usize {
    let Some(&initial) = values.first() else {
        return 0;
    };
    let Some(start) = values.iter().position(|&v| v < 0.5 * initial) else {
        return 0;
    };
    let window = &values[start..];
    (1..window.len().saturating_sub(1))
        .filter(|&k| window[k] > window[k - 1] && window[k] > window[k + 1])
        .filter(|&k| prominence(window, k) >= min_prominence)
        .count()
}

/// Height of `values[peak]` above the lower of the two adjacent minima,
/// found by descending from the peak on each side. A side without a
/// minimum bottoms out at the window edge.
fn prominence(values: &[f64], peak: usize) -> f64 {
    let mut l = peak;
    while l > 0 && values[l - 1] <= values[l] {
        l -= 1;
    }
    let mut r = peak;
    while r + 1 < values.len() && values[r + 1] <= values[r] {
        r += 1;
    }
    values[peak] - values[l].min(values[r])
}

/// Central-spin measures for a full density matrix.
pub fn measure(t: f64, rho: &DensityMatrix) -> Result<CoherenceSample> {
    CoherenceSample::from_state(t, rho.as_operator())
}
