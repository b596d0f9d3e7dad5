//! Pauli and spin operators, Kronecker embeddings, and structured
//! Pauli-string application.
//!
//! Qubit `0` is the central spin and owns the most-significant bit of a
//! basis index. Basis index `0` of a single qubit is `|↑⟩` (σz = +1).

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Cartesian axis of a Pauli or spin operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Single-site factor of a [`PauliString`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SiteOp {
    X,
    Y,
    Z,
    /// Lowering operator σ₋ = (σx − iσy)/2, mapping |↑⟩ to |↓⟩.
    Minus,
    Identity,
}

impl From<Axis> for SiteOp {
    fn from(axis: Axis) -> Self {
        match axis {
            Axis::X => SiteOp::X,
            Axis::Y => SiteOp::Y,
            Axis::Z => SiteOp::Z,
        }
    }
}

impl SiteOp {
    /// Dense 2×2 matrix of this factor.
    pub fn matrix(self) -> DenseOperator {
        match self {
            SiteOp::X => pauli(Axis::X),
            SiteOp::Y => pauli(Axis::Y),
            SiteOp::Z => pauli(Axis::Z),
            SiteOp::Minus => DenseOperator::from_rows(&[[ZERO, ZERO], [ONE, ZERO]]),
            SiteOp::Identity => DenseOperator::identity(2),
        }
    }

    /// Action on a single-qubit basis state `bit`: returns `(flips, amplitude)`
    /// so that `op|bit⟩ = amplitude |bit ^ flips⟩`.
    #[inline]
    fn act(self, bit: usize) -> (bool, Complex64) {
        match (self, bit) {
            (SiteOp::X, _) => (true, ONE),
            // σy|↑⟩ = i|↓⟩, σy|↓⟩ = −i|↑⟩
            (SiteOp::Y, 0) => (true, I),
            (SiteOp::Y, _) => (true, -I),
            (SiteOp::Z, 0) => (false, ONE),
            (SiteOp::Z, _) => (false, -ONE),
            (SiteOp::Minus, 0) => (true, ONE),
            (SiteOp::Minus, _) => (true, ZERO),
            (SiteOp::Identity, _) => (false, ONE),
        }
    }

    fn flips(self) -> bool {
        matches!(self, SiteOp::X | SiteOp::Y | SiteOp::Minus)
    }
}

/// Complex square matrix stored flat in row-major order.
#[derive(Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for DenseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseOperator({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim.min(8) {
            let row: Vec<String> = self
                .row(r)
                .iter()
                .take(8)
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_rows<const N: usize>(rows: &[[Complex64; N]; N]) -> Self {
        Self {
            dim: N,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Builds a matrix from flat row-major data; `data.len()` must be a square.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits if the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Dense product `self · rhs`. Cubic cost; meant for small matrices
    /// and test oracles, not the time-stepping path.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Replaces `self` by `(self + self†)/2`.
    pub fn hermitize(&mut self) {
        // small tiles: rows are a power-of-two stride apart and would
        // otherwise contend for the same cache sets
        const TILE: usize = 8;
        let n = self.dim;
        let data = &mut self.data;
        for bi in (0..n).step_by(TILE) {
            for bj in (bi..n).step_by(TILE) {
                for i in bi..(bi + TILE).min(n) {
                    for j in bj.max(i + 1)..(bj + TILE).min(n) {
                        let avg = (data[i * n + j] + data[j * n + i].conj()) * 0.5;
                        data[i * n + j] = avg;
                        data[j * n + i] = avg.conj();
                    }
                }
            }
        }
        for i in 0..n {
            data[i * n + i].im = 0.0;
        }
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Only the Hermitian part
    /// of `self` is used.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        });
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

impl Index<(usize, usize)> for DenseOperator {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for DenseOperator {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim);
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim);
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&DenseOperator> for DenseOperator {
    fn add_assign(&mut self, rhs: &DenseOperator) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.matmul(rhs)
    }
}

/// Standard Pauli matrix.
pub fn pauli(axis: Axis) -> DenseOperator {
    match axis {
        Axis::X => DenseOperator::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        Axis::Y => DenseOperator::from_rows(&[[ZERO, -I], [I, ZERO]]),
        Axis::Z => DenseOperator::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
    }
}

/// Spin-½ operator `S = σ/2`.
pub fn spin_op(axis: Axis) -> DenseOperator {
    pauli(axis).scale(Complex64::new(0.5, 0.0))
}

/// Kronecker product; the left factor owns the most-significant index bits.
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> DenseOperator {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut out = DenseOperator::zeros(n);
    for ia in 0..na {
        for ja in 0..na {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..nb {
                for jb in 0..nb {
                    out[(ia * nb + ib, ja * nb + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` at position `site` of `n_qubits`.
pub fn embed(op: &DenseOperator, site: usize, n_qubits: usize) -> Result<DenseOperator> {
    if site >= n_qubits {
        return Err(Error::InvalidSite { site, n_qubits });
    }
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: op.dim(),
        });
    }
    let id = DenseOperator::identity(2);
    let mut out = DenseOperator::identity(1);
    for s in 0..n_qubits {
        out = kron(&out, if s == site { op } else { &id });
    }
    Ok(out)
}

/// Which side of a matrix an operator multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Product of single-site factors with a scalar coefficient, applied to
/// matrices by index manipulation instead of materializing the operator.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    terms: Vec<(usize, SiteOp)>,
    coefficient: Complex64,
}

impl PauliString {
    pub fn new(terms: Vec<(usize, SiteOp)>, coefficient: Complex64) -> Result<Self> {
        let mut sites: Vec<usize> = terms.iter().map(|&(s, _)| s).collect();
        sites.sort_unstable();
        if let Some(w) = sites.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSite(w[0]));
        }
        Ok(Self { terms, coefficient })
    }

    pub fn identity(coefficient: Complex64) -> Self {
        Self {
            terms: Vec::new(),
            coefficient,
        }
    }

    pub fn single(site: usize, op: SiteOp, coefficient: f64) -> Self {
        Self {
            terms: vec![(site, op)],
            coefficient: Complex64::new(coefficient, 0.0),
        }
    }

    pub fn pair(a: (usize, SiteOp), b: (usize, SiteOp), coefficient: f64) -> Result<Self> {
        Self::new(vec![a, b], Complex64::new(coefficient, 0.0))
    }

    pub fn terms(&self) -> &[(usize, SiteOp)] {
        &self.terms
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    /// Largest site index plus one (zero for identity strings).
    pub fn min_qubits(&self) -> usize {
        self.terms.iter().map(|&(s, _)| s + 1).max().unwrap_or(0)
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        match self.terms.iter().find(|&&(s, _)| s >= n_qubits) {
            Some(&(site, _)) => Err(Error::InvalidSite { site, n_qubits }),
            None => Ok(()),
        }
    }

    /// Bit mask of basis-index bits flipped by this string on `n_qubits`.
    pub fn flip_mask(&self, n_qubits: usize) -> usize {
        self.terms
            .iter()
            .filter(|(_, op)| op.flips())
            .fold(0, |m, &(s, _)| m | site_bit(s, n_qubits))
    }

    /// Action on basis state `k`: `P|k⟩ = amplitude · |k ^ flip_mask⟩`.
    /// The coefficient is included.
    #[inline]
    pub fn amplitude(&self, k: usize, n_qubits: usize) -> Complex64 {
        let mut amp = self.coefficient;
        for &(s, op) in &self.terms {
            let bit = (k >> (n_qubits - 1 - s)) & 1;
            amp *= op.act(bit).1;
        }
        amp
    }

    /// `P` as an explicit matrix, via Kronecker products.
    pub fn to_dense(&self, n_qubits: usize) -> Result<DenseOperator> {
        self.validate(n_qubits)?;
        let mut out = DenseOperator::identity(1);
        for s in 0..n_qubits {
            let factor = self
                .terms
                .iter()
                .find(|&&(site, _)| site == s)
                .map_or(SiteOp::Identity, |&(_, op)| op);
            out = kron(&out, &factor.matrix());
        }
        Ok(out.scale(self.coefficient))
    }
}

/// Bit of basis index owned by `site` (site 0 is most significant).
#[inline]
pub fn site_bit(site: usize, n_qubits: usize) -> usize {
    1 << (n_qubits - 1 - site)
}

/// Returns `coefficient · P·m` (left) or `coefficient · m·P` (right) for the
/// embedded operator `P` of `ps`, in O(dim²) without forming `P`.
pub fn apply_string(ps: &PauliString, m: &DenseOperator, side: Side) -> Result<DenseOperator> {
    let n_qubits = m.n_qubits().ok_or(Error::NotQubitDimension(m.dim()))?;
    ps.validate(n_qubits)?;
    let dim = m.dim();
    let mask = ps.flip_mask(n_qubits);
    let mut out = DenseOperator::zeros(dim);
    match side {
        Side::Left => {
            // (P m)_{ij} = P_{i, i^mask} m_{i^mask, j},  P_{i, i^mask} = amp(i^mask)
            for i in 0..dim {
                let src = i ^ mask;
                let a = ps.amplitude(src, n_qubits);
                if a == ZERO {
                    continue;
                }
                let src_row = m.row(src);
                let out_row = &mut out.data[i * dim..(i + 1) * dim];
                for (o, &x) in out_row.iter_mut().zip(src_row) {
                    *o = a * x;
                }
            }
        }
        Side::Right => {
            // (m P)_{ij} = m_{i, j^mask} amp(j)
            let amps: Vec<Complex64> = (0..dim).map(|j| ps.amplitude(j, n_qubits)).collect();
            for i in 0..dim {
                let row = m.row(i);
                let out_row = &mut out.data[i * dim..(i + 1) * dim];
                for (j, o) in out_row.iter_mut().enumerate() {
                    *o = row[j ^ mask] * amps[j];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(dim: usize, seed: u64) -> DenseOperator {
        // xorshift; enough for structural tests
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let data = (0..dim * dim).map(|_| c(next(), next())).collect();
        DenseOperator::from_vec(dim, data).unwrap()
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli(Axis::X), DenseOperator::from_rows(&[[ZERO, ONE], [ONE, ZERO]]));
        assert_eq!(pauli(Axis::Z), DenseOperator::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]));
        assert_eq!(pauli(Axis::Y), DenseOperator::from_rows(&[[ZERO, -I], [I, ZERO]]));
    }

    #[test]
    fn spin_operators_are_half_paulis() {
        let h = c(0.5, 0.0);
        assert_eq!(spin_op(Axis::Z), DenseOperator::from_rows(&[[h, ZERO], [ZERO, -h]]));
        assert_eq!(spin_op(Axis::X), DenseOperator::from_rows(&[[ZERO, h], [h, ZERO]]));
        assert_eq!(
            spin_op(Axis::Y),
            DenseOperator::from_rows(&[[ZERO, c(0.0, -0.5)], [c(0.0, 0.5), ZERO]])
        );
    }

    #[test]
    fn kron_examples() {
        let id2 = DenseOperator::identity(2);
        assert_eq!(kron(&id2, &id2), DenseOperator::identity(4));
        assert_eq!(
            kron(&pauli(Axis::Z), &id2),
            DenseOperator::from_diagonal(&[ONE, ONE, -ONE, -ONE])
        );
        let xx = kron(&pauli(Axis::X), &pauli(Axis::X));
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { ONE } else { ZERO };
                assert_eq!(xx[(i, j)], expected);
            }
        }
    }

    #[test]
    fn kron_is_associative() {
        let a = random_matrix(2, 1);
        let b = random_matrix(4, 2);
        let cm = random_matrix(2, 3);
        let lhs = kron(&kron(&a, &b), &cm);
        let rhs = kron(&a, &kron(&b, &cm));
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(&pauli(Axis::X), 0, 1).unwrap(), pauli(Axis::X));
        assert_eq!(
            embed(&pauli(Axis::Z), 1, 2).unwrap(),
            DenseOperator::from_diagonal(&[ONE, -ONE, ONE, -ONE])
        );
        assert_eq!(
            embed(&pauli(Axis::Z), 0, 2).unwrap(),
            DenseOperator::from_diagonal(&[ONE, ONE, -ONE, -ONE])
        );
        assert!(matches!(
            embed(&pauli(Axis::Z), 2, 2),
            Err(Error::InvalidSite { site: 2, n_qubits: 2 })
        ));
    }

    #[test]
    fn embedded_paulis_are_hermitian_involutions() {
        for n in 1..=4 {
            for s in 0..n {
                for axis in Axis::ALL {
                    let p = embed(&pauli(axis), s, n).unwrap();
                    assert!(p.is_hermitian(1e-12));
                    let sq = p.matmul(&p);
                    assert!(sq.max_abs_diff(&DenseOperator::identity(p.dim())) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn lowering_number_operator_is_a_projector_diagonal() {
        for n in 1..=4 {
            for s in 0..n {
                let p = embed(&SiteOp::Minus.matrix(), s, n).unwrap();
                let pdp = p.adjoint().matmul(&p);
                for i in 0..pdp.dim() {
                    for j in 0..pdp.dim() {
                        let v = pdp[(i, j)];
                        if i == j {
                            assert!(v == ZERO || v == ONE);
                        } else {
                            assert_eq!(v, ZERO);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn minus_is_lowering_combination() {
        let expected = &pauli(Axis::X) - &pauli(Axis::Y).scale(I);
        assert!(SiteOp::Minus.matrix().max_abs_diff(&expected.scale(c(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn identity_string_leaves_matrix_unchanged() {
        let m = random_matrix(8, 11);
        let id = PauliString::identity(ONE);
        assert_eq!(apply_string(&id, &m, Side::Left).unwrap(), m);
        assert_eq!(apply_string(&id, &m, Side::Right).unwrap(), m);
    }

    #[test]
    fn sigma_x_times_sigma_z() {
        let ps = PauliString::single(0, SiteOp::X, 1.0);
        let out = apply_string(&ps, &pauli(Axis::Z), Side::Left).unwrap();
        assert_eq!(out, DenseOperator::from_rows(&[[ZERO, -ONE], [ONE, ZERO]]));
    }

    #[test]
    fn apply_string_matches_dense_product() {
        let ops = [SiteOp::X, SiteOp::Y, SiteOp::Z, SiteOp::Minus, SiteOp::Identity];
        for n in 1..=4 {
            let dim = 1 << n;
            let m = random_matrix(dim, 7 + n as u64);
            for s in 0..n {
                for &op in &ops {
                    let ps = PauliString::single(s, op, 0.7);
                    let dense = ps.to_dense(n).unwrap();
                    let left = apply_string(&ps, &m, Side::Left).unwrap();
                    let right = apply_string(&ps, &m, Side::Right).unwrap();
                    assert!(left.max_abs_diff(&dense.matmul(&m)) < 1e-12);
                    assert!(right.max_abs_diff(&m.matmul(&dense)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn apply_string_two_site_matches_dense() {
        let m = random_matrix(8, 99);
        let ps = PauliString::new(vec![(0, SiteOp::Y), (2, SiteOp::Minus)], c(0.3, -0.2)).unwrap();
        let dense = ps.to_dense(3).unwrap();
        let left = apply_string(&ps, &m, Side::Left).unwrap();
        let right = apply_string(&ps, &m, Side::Right).unwrap();
        assert!(left.max_abs_diff(&dense.matmul(&m)) < 1e-12);
        assert!(right.max_abs_diff(&m.matmul(&dense)) < 1e-12);
    }

    #[test]
    fn invalid_strings_are_rejected() {
        assert!(matches!(
            PauliString::new(vec![(1, SiteOp::X), (1, SiteOp::Z)], ONE),
            Err(Error::DuplicateSite(1))
        ));
        let ps = PauliString::single(3, SiteOp::X, 1.0);
        assert!(matches!(
            apply_string(&ps, &DenseOperator::identity(4), Side::Left),
            Err(Error::InvalidSite { site: 3, n_qubits: 2 })
        ));
        assert!(matches!(
            apply_string(&PauliString::identity(ONE), &DenseOperator::identity(3), Side::Left),
            Err(Error::NotQubitDimension(3))
        ));
    }
}
