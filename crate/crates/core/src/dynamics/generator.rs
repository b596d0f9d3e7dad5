//! Fused evaluation of the Lindblad right-hand side.
//!
//! Every Pauli string maps basis state `|k⟩` to `amp(k) |k ^ mask⟩`, so the
//! Hamiltonian, the anticommutator terms and the jump terms reduce to
//! gathers along a handful of flip masks. [`LindbladGenerator`] groups them
//! once and then evaluates `−i(Kρ − ρK†) + Σ_c r_c L_c ρ L_c†`, with
//! `K = H − (i/2) Σ_c r_c L_c†L_c`. Rows of `X = Kρ` are built from
//! contiguous row updates, jump terms are added to the upper triangle of `X`,
//! and a final blocked pass forms `−i(X − X†)` and mirrors it, so the result
//! is exactly Hermitian.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Hamiltonian, JumpChannel};
use crate::operators::{site_bit, DenseOperator, PauliString, SiteOp, I, ZERO};

/// Reference frame the state is integrated in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Frame {
    /// Rotating frame of the single-site `σz` terms when they commute with
    /// everything else; laboratory frame otherwise.
    #[default]
    Auto,
    /// Laboratory frame.
    Lab,
    /// Rotating frame; construction fails if the field terms do not split off.
    Rotating,
}

/// Gather source for one row of `Kρ`: `K[i, src] · ρ[src, :]`.
#[derive(Clone, Copy, Debug)]
struct RowHop {
    src: usize,
    amp: Complex64,
}

/// Columns `start..start + len` of a flip jump, all with the same weight
/// `conj(w[j])` and contiguous sources `(start ^ mask)..`.
#[derive(Clone, Copy, Debug)]
struct ColumnRun {
    start: usize,
    len: usize,
    src: usize,
    weight: Complex64,
}

#[derive(Clone, Debug)]
struct FlipJump {
    mask: usize,
    /// `i · w[i]` per row, zero where the jump does not act
    row_weight: Vec<Complex64>,
    runs: Vec<ColumnRun>,
}

fn column_runs(weight: &[Complex64], mask: usize) -> Vec<ColumnRun> {
    let mut runs: Vec<ColumnRun> = Vec::new();
    for (j, w) in weight.iter().enumerate().filter(|(_, w)| **w != ZERO) {
        let wc = w.conj();
        match runs.last_mut() {
            Some(r) if r.start + r.len == j && r.src + r.len == j ^ mask && r.weight == wc => {
                r.len += 1
            }
            _ => runs.push(ColumnRun {
                start: j,
                len: 1,
                src: j ^ mask,
                weight: wc,
            }),
        }
    }
    runs
}

/// Precompiled Lindblad generator on `n_qubits`.
#[derive(Clone, Debug)]
pub struct LindbladGenerator {
    n_qubits: usize,
    dim: usize,
    k_diag: Vec<Complex64>,
    /// off-diagonal entries of `K`, grouped by row
    row_hops: Vec<Vec<RowHop>>,
    /// `Σ_c r_c L_c[i,i] conj(L_c[j,j])` as a function of `i ^ j` for
    /// diagonal (z-type) jumps.
    diagonal_jumps: Vec<f64>,
    flip_jumps: Vec<FlipJump>,
    /// Energies of the split-off field terms when integrating in the
    /// rotating frame.
    frame_energies: Option<Vec<f64>>,
}

impl LindbladGenerator {
    pub fn new(h: &Hamiltonian, channels: &[JumpChannel], frame: Frame) -> Result<Self> {
        let n = h.n_qubits();
        let dim = h.dim();
        for ch in channels {
            ch.operator.validate(n)?;
            if !(ch.rate.is_finite() && ch.rate >= 0.0) {
                return Err(Error::config(format!("negative channel rate {}", ch.rate)));
            }
        }

        let is_field = |t: &PauliString| {
            t.terms().len() == 1 && t.terms()[0].1 == SiteOp::Z && t.coefficient().im == 0.0
        };
        let mut field = vec![0.0f64; dim];
        for t in h.terms().iter().filter(|t| is_field(t)) {
            for (k, e) in field.iter_mut().enumerate() {
                *e += t.amplitude(k, n).re;
            }
        }

        // H without the field terms, grouped by flip mask: rest[m][i] = H[i, i^m]
        let mut rest: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
        for t in h.terms().iter().filter(|t| !is_field(t)) {
            let mask = t.flip_mask(n);
            let row = rest.entry(mask).or_insert_with(|| vec![ZERO; dim]);
            for (i, v) in row.iter_mut().enumerate() {
                *v += t.amplitude(i ^ mask, n);
            }
        }

        let split = match frame {
            Frame::Lab => false,
            Frame::Auto | Frame::Rotating => {
                let ok = frame_splits(n, &rest, channels, &field);
                if frame == Frame::Rotating && !ok {
                    return Err(Error::config(
                        "field terms do not commute with the rest of the generator",
                    ));
                }
                ok
            }
        };

        // K = H' − (i/2) Σ r L†L
        let mut k_diag = rest.remove(&0).unwrap_or_else(|| vec![ZERO; dim]);
        if !split {
            for (k, e) in k_diag.iter_mut().zip(&field) {
                *k += e;
            }
        }
        let mut row_hops = vec![Vec::new(); dim];
        for (&mask, amp) in &rest {
            for (i, a) in amp.iter().enumerate() {
                if *a != ZERO {
                    row_hops[i].push(RowHop { src: i ^ mask, amp: *a });
                }
            }
        }

        let mut diagonal_jumps = vec![0.0f64; dim];
        let mut flip_jumps = Vec::new();
        for ch in channels.iter().filter(|ch| ch.rate > 0.0) {
            let op = &ch.operator;
            let mask = op.flip_mask(n);
            for (k, v) in k_diag.iter_mut().enumerate() {
                *v -= I * (0.5 * ch.rate * op.amplitude(k, n).norm_sqr());
            }
            if mask == 0 {
                // only z and identity factors: L[i,i] conj(L[j,j]) = |c|² (−1)^{popcount((i^j) & zmask)}
                let zmask = op
                    .terms()
                    .iter()
                    .filter(|(_, o)| *o == SiteOp::Z)
                    .fold(0usize, |m, &(s, _)| m | site_bit(s, n));
                let w = ch.rate * op.coefficient().norm_sqr();
                for (x, v) in diagonal_jumps.iter_mut().enumerate() {
                    *v += if (x & zmask).count_ones() % 2 == 0 { w } else { -w };
                }
            } else {
                let sr = ch.rate.sqrt();
                let weight: Vec<Complex64> =
                    (0..dim).map(|i| op.amplitude(i ^ mask, n) * sr).collect();
                flip_jumps.push(FlipJump {
                    mask,
                    row_weight: weight.iter().map(|w| I * w).collect(),
                    runs: column_runs(&weight, mask),
                });
            }
        }

        Ok(Self {
            n_qubits: n,
            dim,
            k_diag,
            row_hops,
            diagonal_jumps,
            flip_jumps,
            frame_energies: split.then_some(field),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_rotating(&self) -> bool {
        self.frame_energies.is_some()
    }

    /// Writes the generator applied to a Hermitian `rho` into `out`.
    ///
    /// For Hermitian `ρ`, `ρK† = (Kρ)†`, so the coherent part is
    /// `−i(X − X†)` with `X = Kρ`. `X` is built row by row from contiguous
    /// gathers; the jump terms `J` enter the upper triangle of `X` as `iJ`
    /// (half of it on the diagonal) so that the final combine pass yields
    /// the full right-hand side.
    pub fn apply(&self, rho: &DenseOperator, out: &mut DenseOperator) {
        let d = self.dim;
        assert_eq!(rho.dim(), d, "state dimension does not match generator");
        assert_eq!(out.dim(), d, "output dimension does not match generator");
        #[cfg(target_arch = "x86_64")]
        if is_x86_feature_detected!("avx2") {
            // SAFETY: the required CPU feature was detected at run time.
            unsafe { self.apply_avx2(rho.as_slice(), out.as_mut_slice()) };
            return;
        }
        self.kernel(rho.as_slice(), out.as_mut_slice());
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn apply_avx2(&self, src: &[Complex64], dst: &mut [Complex64]) {
        self.kernel(src, dst);
    }

    #[inline(always)]
    fn kernel(&self, src: &[Complex64], dst: &mut [Complex64]) {
        let d = self.dim;
        for i in 0..d {
            let row_i = &src[i * d..(i + 1) * d];
            let x = &mut dst[i * d..(i + 1) * d];
            let kd = self.k_diag[i];
            let (lower, upper) = x.split_at_mut(i);
            for (o, r) in lower.iter_mut().zip(&row_i[..i]) {
                *o = kd * r;
            }
            let dj = &self.diagonal_jumps;
            for (j, (o, r)) in (i..).zip(upper.iter_mut().zip(&row_i[i..])) {
                *o = (kd + I * dj[i ^ j]) * r;
            }
            upper[0] -= I * (0.5 * dj[0]) * row_i[i];
            for hop in &self.row_hops[i] {
                axpy(x, &src[hop.src * d..(hop.src + 1) * d], hop.amp);
            }
            for jump in &self.flip_jumps {
                let wi = jump.row_weight[i];
                if wi == ZERO {
                    continue;
                }
                let g = &src[(i ^ jump.mask) * d..((i ^ jump.mask) + 1) * d];
                let from = jump.runs.partition_point(|r| r.start + r.len <= i);
                for run in &jump.runs[from..] {
                    // clip the run to the upper triangle
                    let skip = i.saturating_sub(run.start);
                    let (j0, s0) = (run.start + skip, run.src + skip);
                    let len = run.len - skip;
                    let c = wi * run.weight;
                    axpy(&mut x[j0..j0 + len], &g[s0..s0 + len], c);
                    if j0 == i {
                        x[i] -= 0.5 * c * g[s0];
                    }
                }
            }
        }
        combine_upper(dst, d);
    }

    /// Converts a rotating-frame state at time `t` into the laboratory frame
    /// in place. No-op in the laboratory frame.
    pub fn to_lab_frame(&self, rho: &mut DenseOperator, t: f64) {
        self.rotate(rho, t, -1.0);
    }

    /// Inverse of [`LindbladGenerator::to_lab_frame`].
    pub fn to_rotating_frame(&self, rho: &mut DenseOperator, t: f64) {
        self.rotate(rho, t, 1.0);
    }

    fn rotate(&self, rho: &mut DenseOperator, t: f64, sign: f64) {
        let Some(e) = &self.frame_energies else {
            return;
        };
        let d = self.dim;
        let phases: Vec<Complex64> = e
            .iter()
            .map(|&ei| Complex64::from_polar(1.0, sign * ei * t))
            .collect();
        let data = rho.as_mut_slice();
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    data[i * d + j] *= phases[i] * phases[j].conj();
                }
            }
        }
    }
}

/// Whether removing the single-site field terms (energies `field`) leaves a
/// generator that commutes with them: every remaining block of `H` must
/// conserve the field energy and every jump must shift it by a constant.
fn frame_splits(
    n: usize,
    rest: &BTreeMap<usize, Vec<Complex64>>,
    channels: &[JumpChannel],
    field: &[f64],
) -> bool {
    let dim = field.len();
    let scale = field.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let tol = 1e-12 * scale;
    let amp_tol = 1e-14 * rest
        .values()
        .flatten()
        .fold(1.0f64, |m, a| m.max(a.norm()));
    let hop_ok = rest.iter().all(|(&mask, amp)| {
        amp.iter()
            .enumerate()
            .all(|(i, a)| a.norm() <= amp_tol || (field[i] - field[i ^ mask]).abs() <= tol)
    });
    let jump_ok = channels.iter().filter(|ch| ch.rate > 0.0).all(|ch| {
        let op = &ch.operator;
        let mask = op.flip_mask(n);
        let mut shifts = (0..dim)
            .filter(|&k| op.amplitude(k, n) != ZERO)
            .map(|k| field[k ^ mask] - field[k]);
        match shifts.next() {
            None => true,
            Some(first) => shifts.all(|s| (s - first).abs() <= tol),
        }
    });
    hop_ok && jump_ok
}

/// `x += a·g`, with cheaper loops for purely real or imaginary `a`.
#[inline(always)]
fn axpy(x: &mut [Complex64], g: &[Complex64], a: Complex64) {
    if a.im == 0.0 {
        let s = a.re;
        for (o, v) in x.iter_mut().zip(g) {
            o.re += s * v.re;
            o.im += s * v.im;
        }
    } else if a.re == 0.0 {
        let s = a.im;
        for (o, v) in x.iter_mut().zip(g) {
            o.re -= s * v.im;
            o.im += s * v.re;
        }
    } else {
        for (o, v) in x.iter_mut().zip(g) {
            *o += a * v;
        }
    }
}

/// In place `A ← −i(X − X†)` on the upper triangle, mirrored into the lower
/// one, so the result is exactly Hermitian.
#[inline(always)]
fn combine_upper(data: &mut [Complex64], d: usize) {
    // see DenseOperator::hermitize for the tile size
    const BLOCK: usize = 8;
    for bi in (0..d).step_by(BLOCK) {
        for bj in (bi..d).step_by(BLOCK) {
            for i in bi..(bi + BLOCK).min(d) {
                for j in bj.max(i + 1)..(bj + BLOCK).min(d) {
                    let x = data[i * d + j];
                    let y = data[j * d + i];
                    // −i x + i conj(y)
                    let v = Complex64::new(x.im + y.im, y.re - x.re);
                    data[i * d + j] = v;
                    data[j * d + i] = v.conj();
                }
            }
        }
    }
    for i in 0..d {
        let x = data[i * d + i];
        data[i * d + i] = Complex64::new(2.0 * x.im, 0.0);
    }
}
