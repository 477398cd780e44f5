//! Dense complex linear algebra: square matrices, kets, tensor products,
//! partial traces, Hermitian eigendecomposition and toleranced kernels.
//!
//! Everything here is desk scale. Matrices are square, row-major and capped
//! at [`MAX_DIM`](crate::tol::MAX_DIM); the eigensolver is a cyclic Jacobi
//! iteration, which at these sizes is both fast and gives eigenvectors that
//! are orthonormal to machine precision.
//!
//! Tensor index convention: subsystem A always comes first, i.e. the flat
//! index of A varies slowest. Every module of this crate inherits that
//! convention.

use num_complex::Complex64;

use crate::error::{Result, SteerError};
use crate::tol::{HERM_TOL, KERNEL_TOL, MAX_DIM, NORM_TOL};

/// Ordered subsystem dimensions (A first, then B, then C).
///
/// The product of the factors must equal the total dimension of any matrix or
/// vector the factorization is paired with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionFactorization {
    dims: Vec<usize>,
}

impl DimensionFactorization {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(SteerError::InvalidParameter {
                name: "dims",
                detail: format!("every factor must be >= 1, got {dims:?}"),
            });
        }
        Ok(Self { dims })
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b])
    }

    pub fn tripartite(d_a: usize, d_b: usize, d_c: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b, d_c])
    }

    /// A single undivided system of dimension `d`.
    pub fn single(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Errors unless the total dimension equals `expected`.
    pub fn check_total(&self, expected: usize) -> Result<()> {
        let total = self.total();
        if total != expected {
            return Err(SteerError::InconsistentFactorization {
                dims: self.dims.clone(),
                total,
                expected,
            });
        }
        Ok(())
    }
}

fn check_finite(entries: &[Complex64]) -> Result<()> {
    for (index, z) in entries.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(SteerError::NonFinite { index });
        }
    }
    Ok(())
}

/// A complex column vector (a ket).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(SteerError::InvalidParameter {
                name: "entries",
                detail: "vector must have positive dimension".into(),
            });
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_real(reals: &[f64]) -> Result<Self> {
        Self::new(reals.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![Complex64::ZERO; dim.max(1)] }
    }

    /// Computational basis vector |k> in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut entries = vec![Complex64::ZERO; dim];
        entries[k] = Complex64::ONE;
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Complex64 {
        self.entries[k]
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Checks | ||v|| - 1 | <= tol.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > tol {
            return Err(SteerError::NotNormalized { norm });
        }
        Ok(())
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= 0.0 {
            return Err(SteerError::ZeroVector);
        }
        Ok(Self {
            entries: self.entries.iter().map(|z| z / norm).collect(),
        })
    }

    /// Inner product <self|other> (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Outer product |self><other|.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        assert_eq!(self.dim(), other.dim(), "outer product dimension mismatch");
        let n = self.dim();
        let mut entries = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.entries[i] * other.entries[j].conj();
            }
        }
        ComplexMatrix { dim: n, entries }
    }

    /// Projector |self><self|.
    pub fn projector(&self) -> ComplexMatrix {
        self.outer(self)
    }

    /// Tensor product, A-first ordering.
    pub fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Self { entries }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector addition dimension mismatch");
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector subtraction dimension mismatch");
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Rotates the global phase so the largest-magnitude entry is real
    /// positive (ties broken by the lowest index). Physically equivalent,
    /// but deterministic and comparable across runs.
    pub fn canonical_phase(&self) -> Self {
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for (k, z) in self.entries.iter().enumerate() {
            let mag = z.norm();
            if mag > best_mag + 1e-15 {
                best_mag = mag;
                best = k;
            }
        }
        if best_mag == 0.0 {
            return self.clone();
        }
        let phase = self.entries[best] / best_mag;
        self.scale(phase.conj())
    }

    /// Contracts the first factor: returns (<alpha| (x) I) |self>.
    ///
    /// `self` lives on a space of dimension `alpha.dim() * rest`, A-first.
    pub fn contract_first(&self, alpha: &Self, rest: usize) -> Self {
        assert_eq!(self.dim(), alpha.dim() * rest, "contraction dimension mismatch");
        let mut entries = vec![Complex64::ZERO; rest];
        for i in 0..alpha.dim() {
            let c = alpha.entries[i].conj();
            for (r, e) in entries.iter_mut().enumerate() {
                *e += c * self.entries[i * rest + r];
            }
        }
        Self { entries }
    }
}

/// Result of a Hermitian eigendecomposition, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct Eigh {
    /// Real eigenvalues, sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, matching the eigenvalue order, each with
    /// canonical phase.
    pub eigenvectors: Vec<ComplexVector>,
}

/// A dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(SteerError::InvalidParameter {
                name: "dim",
                detail: "matrix dimension must be positive".into(),
            });
        }
        if dim > MAX_DIM {
            return Err(SteerError::DimensionOverflow { requested: dim, max: MAX_DIM });
        }
        if entries.len() != dim * dim {
            return Err(SteerError::EntryCount {
                dim,
                expected: dim * dim,
                got: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.entries[k * dim + k] = Complex64::ONE;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (k, &v) in values.iter().enumerate() {
            m.entries[k * dim + k] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix addition dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix subtraction dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.entries[j * n + i].conj())
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.entries[j * n + i])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.entries[k * self.dim + k]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim, v.dim(), "matrix-vector dimension mismatch");
        let n = self.dim;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.entries[i * n + j] * v.entries[j])
                    .sum()
            })
            .collect();
        ComplexVector { entries }
    }

    /// Expectation value <v|M|v>.
    pub fn expectation(&self, v: &ComplexVector) -> Complex64 {
        v.inner(&self.apply(v))
    }

    /// max_ij |M_ij - conj(M_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[i * n + j] - self.entries[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// (M + M^dagger)/2; used to scrub rounding noise before eigensolves.
    pub fn hermitized(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| {
            (self.entries[i * n + j] + self.entries[j * n + i].conj()) * 0.5
        })
    }

    /// max |(U^dagger U - I)_ij|.
    pub fn unitary_deviation(&self) -> f64 {
        self.adjoint().matmul(self).sub(&Self::identity(self.dim)).max_abs_entry()
    }
}

/// Tensor product a (x) b with A-first ordering: entry
/// ((i1 i2),(j1 j2)) = a\[i1,j1\] * b\[i2,j2\].
///
/// Errors when the product dimension exceeds [`MAX_DIM`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim * b.dim;
    if dim > MAX_DIM {
        return Err(SteerError::DimensionOverflow { requested: dim, max: MAX_DIM });
    }
    let mut out = ComplexMatrix::zeros(dim);
    for i1 in 0..a.dim {
        for j1 in 0..a.dim {
            let av = a.entries[i1 * a.dim + j1];
            if av == Complex64::ZERO {
                continue;
            }
            for i2 in 0..b.dim {
                for j2 in 0..b.dim {
                    let row = i1 * b.dim + i2;
                    let col = j1 * b.dim + j2;
                    out.entries[row * dim + col] = av * b.entries[i2 * b.dim + j2];
                }
            }
        }
    }
    Ok(out)
}

fn decompose_index(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = flat % dims[k];
        flat /= dims[k];
    }
}

fn compose_index(digits: &[usize], dims: &[usize]) -> usize {
    let mut flat = 0usize;
    for (d, &digit) in dims.iter().zip(digits) {
        flat = flat * d + digit;
    }
    flat
}

/// Partial trace keeping the subsystems listed in `keep` (0-based, in
/// ascending order of the factorization). Trace is preserved.
pub fn partial_trace(
    m: &ComplexMatrix,
    fact: &DimensionFactorization,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    fact.check_total(m.dim)?;
    let n_sub = fact.len();
    for &k in keep {
        if k >= n_sub {
            return Err(SteerError::SubsystemIndex { index: k, count: n_sub });
        }
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced: Vec<usize> = (0..n_sub).filter(|k| !keep_sorted.contains(k)).collect();

    let dims = fact.dims();
    let keep_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let keep_total: usize = keep_dims.iter().product::<usize>().max(1);
    let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

    let mut out = ComplexMatrix::zeros(keep_total);
    let mut row_digits = vec![0usize; n_sub];
    let mut col_digits = vec![0usize; n_sub];
    let mut keep_row = vec![0usize; keep_sorted.len()];
    let mut keep_col = vec![0usize; keep_sorted.len()];
    let mut traced_digits = vec![0usize; traced.len()];

    for kr in 0..keep_total {
        decompose_index(kr, &keep_dims, &mut keep_row);
        for kc in 0..keep_total {
            decompose_index(kc, &keep_dims, &mut keep_col);
            let mut acc = Complex64::ZERO;
            for t in 0..traced_total {
                decompose_index(t, &traced_dims, &mut traced_digits);
                for (pos, &sub) in keep_sorted.iter().enumerate() {
                    row_digits[sub] = keep_row[pos];
                    col_digits[sub] = keep_col[pos];
                }
                for (pos, &sub) in traced.iter().enumerate() {
                    row_digits[sub] = traced_digits[pos];
                    col_digits[sub] = traced_digits[pos];
                }
                let row = compose_index(&row_digits, dims);
                let col = compose_index(&col_digits, dims);
                acc += m.entries[row * m.dim + col];
            }
            out.entries[kr * keep_total + kc] = acc;
        }
    }
    Ok(out)
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Hermitian eigendecomposition via cyclic Jacobi rotations.
///
/// Errors when the input deviates from Hermitian by more than
/// [`HERM_TOL`]; pass a different bound via [`eigh_with_tol`].
pub fn eigh(m: &ComplexMatrix) -> Result<Eigh> {
    eigh_with_tol(m, HERM_TOL)
}

/// [`eigh`] with an explicit Hermiticity tolerance.
pub fn eigh_with_tol(m: &ComplexMatrix, herm_tol: f64) -> Result<Eigh> {
    let deviation = m.hermitian_deviation();
    if deviation > herm_tol {
        return Err(SteerError::NotHermitian { deviation });
    }
    let n = m.dim;
    let mut h = m.hermitized();
    let mut v = ComplexMatrix::identity(n);
    let scale = h.frobenius_norm().max(1.0);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h.entries[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = h.entries[p * n + q];
                let beta = b.norm();
                if beta == 0.0 {
                    continue;
                }
                let app = h.entries[p * n + p].re;
                let aqq = h.entries[q * n + q].re;
                let f = b / beta; // e^{i phi}
                let theta = 0.5 * (2.0 * beta).atan2(app - aqq);
                let c = theta.cos();
                let s = theta.sin();
                let fs = f * s;
                let cfs = f.conj() * s;

                // columns p and q of H and V (right-multiplication by U)
                for k in 0..n {
                    let hp = h.entries[k * n + p];
                    let hq = h.entries[k * n + q];
                    h.entries[k * n + p] = hp * c + hq * cfs;
                    h.entries[k * n + q] = hq * c - hp * fs;

                    let vp = v.entries[k * n + p];
                    let vq = v.entries[k * n + q];
                    v.entries[k * n + p] = vp * c + vq * cfs;
                    v.entries[k * n + q] = vq * c - vp * fs;
                }
                // rows p and q of H (left-multiplication by U^dagger)
                for k in 0..n {
                    let mp = h.entries[p * n + k];
                    let mq = h.entries[q * n + k];
                    h.entries[p * n + k] = mp * c + mq * fs;
                    h.entries[q * n + k] = mq * c - mp * cfs;
                }
                h.entries[p * n + q] = Complex64::ZERO;
                h.entries[q * n + p] = Complex64::ZERO;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        h.entries[b * n + b]
            .re
            .partial_cmp(&h.entries[a * n + a].re)
            .expect("eigenvalues are finite")
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&k| h.entries[k * n + k].re).collect();
    let eigenvectors: Vec<ComplexVector> = order
        .iter()
        .map(|&k| {
            let column = (0..n).map(|row| v.entries[row * n + k]).collect();
            ComplexVector { entries: column }.canonical_phase()
        })
        .collect();

    Ok(Eigh { eigenvalues, eigenvectors })
}

/// Orthonormal basis of the numerical null space of a Hermitian PSD matrix.
///
/// A vector belongs to the kernel when its eigenvalue is at most
/// `tol * lambda_max`; when the largest eigenvalue is not positive the whole
/// space is returned. An empty basis is a valid result.
pub fn kernel(m: &ComplexMatrix, tol: f64) -> Result<Vec<ComplexVector>> {
    let eig = eigh(m)?;
    let lambda_max = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 {
        return Ok(eig.eigenvectors);
    }
    let cut = tol * lambda_max;
    Ok(eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors)
        .filter(|(&lambda, _)| lambda <= cut)
        .map(|(_, v)| v)
        .collect())
}

/// [`kernel`] with the default relative threshold.
pub fn kernel_default(m: &ComplexMatrix) -> Result<Vec<ComplexVector>> {
    kernel(m, KERNEL_TOL)
}

/// Gram-Schmidt completion: extends `seed` vectors to an orthonormal basis
/// of the full space, scanning the standard basis in order and skipping
/// near-dependent candidates.
pub fn complete_orthonormal_basis(seed: &[ComplexVector], dim: usize) -> Result<Vec<ComplexVector>> {
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(dim);
    for v in seed {
        if v.dim() != dim {
            return Err(SteerError::DimensionMismatch { expected: dim, got: v.dim() });
        }
        basis.push(v.normalized()?);
    }
    let mut candidate = 0usize;
    while basis.len() < dim && candidate < dim {
        let mut w = ComplexVector::basis(dim, candidate);
        for b in &basis {
            let overlap = b.inner(&w);
            w = w.sub(&b.scale(overlap));
        }
        // re-orthogonalise once; plain Gram-Schmidt loses digits
        for b in &basis {
            let overlap = b.inner(&w);
            w = w.sub(&b.scale(overlap));
        }
        if w.norm() > 1e-8 {
            basis.push(w.normalized()?);
        }
        candidate += 1;
    }
    if basis.len() != dim {
        return Err(SteerError::InternalInconsistency {
            detail: format!("basis completion stalled at {} of {dim}", basis.len()),
        });
    }
    Ok(basis)
}

/// Checks | ||v|| - 1 | <= NORM_TOL, the crate-wide default.
pub fn check_normalized_default(v: &ComplexVector) -> Result<()> {
    v.check_normalized(NORM_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::diag_real(&[1.0, -1.0])
    }

    #[test]
    fn constructor_rejects_non_finite() {
        let err = ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, SteerError::NonFinite { index: 0 }));
        let err = ComplexVector::new(vec![c(0.0, f64::INFINITY)]).unwrap_err();
        assert!(matches!(err, SteerError::NonFinite { .. }));
    }

    #[test]
    fn constructor_rejects_bad_entry_count() {
        let err = ComplexMatrix::new(2, vec![c(1., 0.); 3]).unwrap_err();
        assert!(matches!(err, SteerError::EntryCount { expected: 4, got: 3, .. }));
    }

    #[test]
    fn kron_identity_cases() {
        let i2 = ComplexMatrix::identity(2);
        let i4 = kron(&i2, &i2).unwrap();
        assert_eq!(i4, ComplexMatrix::identity(4));

        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let got = kron(&p0, &i2).unwrap();
        assert_eq!(got, ComplexMatrix::diag_real(&[1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_sigma_z_sigma_x_by_hand() {
        // sigma_z (x) sigma_x = [[sigma_x, 0], [0, -sigma_x]], expanded by hand.
        let got = kron(&sigma_z(), &sigma_x()).unwrap();
        let want = ComplexMatrix::new(
            4,
            vec![
                c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.),
                c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.),
                c(0., 0.), c(0., 0.), c(0., 0.), c(-1., 0.),
                c(0., 0.), c(0., 0.), c(-1., 0.), c(0., 0.),
            ],
        )
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn kron_overflow_is_an_error() {
        let m = ComplexMatrix::identity(9);
        let err = kron(&m, &m).unwrap_err();
        assert!(matches!(err, SteerError::DimensionOverflow { requested: 81, .. }));
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho_a = ComplexMatrix::diag_real(&[0.25, 0.75]);
        let rho_b = ComplexMatrix::new(
            2,
            vec![c(0.5, 0.), c(0.1, 0.2), c(0.1, -0.2), c(0.5, 0.)],
        )
        .unwrap();
        let rho = kron(&rho_a, &rho_b).unwrap();
        let fact = DimensionFactorization::bipartite(2, 2).unwrap();
        let got = partial_trace(&rho, &fact, &[1]).unwrap();
        assert!(got.sub(&rho_b).max_abs_entry() < 1e-14);
        let got_a = partial_trace(&rho, &fact, &[0]).unwrap();
        assert!(got_a.sub(&rho_a).max_abs_entry() < 1e-14);
    }

    #[test]
    fn partial_trace_of_maximally_entangled() {
        let mut phi = ComplexVector::zeros(4);
        phi.entries[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        phi.entries[3] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho = phi.projector();
        let fact = DimensionFactorization::bipartite(2, 2).unwrap();
        let got = partial_trace(&rho, &fact, &[0]).unwrap();
        assert!(got.sub(&ComplexMatrix::identity(2).scale_real(0.5)).max_abs_entry() < 1e-14);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let m = ComplexMatrix::from_fn(6, |i, j| c((i + j) as f64, (i as f64) - (j as f64)));
        let fact = DimensionFactorization::bipartite(2, 3).unwrap();
        let reduced = partial_trace(&m, &fact, &[1]).unwrap();
        assert!((reduced.trace() - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_factorization() {
        let m = ComplexMatrix::identity(6);
        let fact = DimensionFactorization::bipartite(2, 2).unwrap();
        let err = partial_trace(&m, &fact, &[0]).unwrap_err();
        assert!(matches!(err, SteerError::InconsistentFactorization { .. }));
    }

    #[test]
    fn eigh_diagonal_matrix() {
        let m = ComplexMatrix::diag_real(&[3.0, 1.0, 2.0]);
        let eig = eigh(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 2.0, 1.0]);
        // permuted standard basis
        assert!((eig.eigenvectors[0].get(0).re - 1.0).abs() < 1e-12);
        assert!((eig.eigenvectors[1].get(2).re - 1.0).abs() < 1e-12);
        assert!((eig.eigenvectors[2].get(1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_sigma_x() {
        let eig = eigh(&sigma_x()).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
        let plus = ComplexVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap();
        assert!((eig.eigenvectors[0].inner(&plus).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(eigh(&m).unwrap_err(), SteerError::NotHermitian { .. }));
    }

    #[test]
    fn eigh_reconstruction_and_orthonormality() {
        // seeded LCG keeps the test deterministic without pulling in rand here
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for dim in [2usize, 3, 5, 8, 16] {
            let raw = ComplexMatrix::from_fn(dim, |_, _| c(next(), next()));
            let m = raw.hermitized();
            let eig = eigh(&m).unwrap();
            let mut recon = ComplexMatrix::zeros(dim);
            for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
                recon = recon.add(&v.projector().scale_real(*lambda));
            }
            assert!(
                recon.sub(&m).frobenius_norm() <= 1e-10 * dim as f64,
                "reconstruction failed at dim {dim}"
            );
            for i in 0..dim {
                for j in 0..dim {
                    let g = eig.eigenvectors[i].inner(&eig.eigenvectors[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g.norm() - want).abs() < 1e-10, "gram failed at dim {dim}");
                }
            }
        }
    }

    #[test]
    fn eigh_descending_order() {
        let m = ComplexMatrix::diag_real(&[-1.0, 4.0, 0.5, 2.0]);
        let eig = eigh(&m).unwrap();
        for pair in eig.eigenvalues.windows(2) {
            assert!(pair[0] >= pair[1]);
        }
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let basis = kernel(&ComplexMatrix::zeros(3), 1e-9).unwrap();
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn kernel_of_rank_one_projector() {
        let basis = kernel(&ComplexMatrix::diag_real(&[1.0, 0.0]), 1e-9).unwrap();
        assert_eq!(basis.len(), 1);
        assert!((basis[0].get(1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_threshold_arithmetic() {
        let basis = kernel(&ComplexMatrix::diag_real(&[1.0, 1e-14]), 1e-9).unwrap();
        assert_eq!(basis.len(), 1);
        assert!((basis[0].get(1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_orthogonal_to_range() {
        let m = ComplexMatrix::new(
            3,
            vec![
                c(1.0, 0.0), c(0.5, 0.1), c(0.0, 0.0),
                c(0.5, -0.1), c(1.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
            ],
        )
        .unwrap();
        let eig = eigh(&m).unwrap();
        let null = kernel(&m, 1e-9).unwrap();
        for v in &null {
            assert!(m.apply(v).norm() <= 1e-9 * m.frobenius_norm().max(1.0));
            for (lambda, w) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
                if *lambda > 1e-9 {
                    assert!(w.inner(v).norm() <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn contract_first_matches_definition() {
        let psi = ComplexVector::new(vec![c(1., 0.), c(2., 0.), c(3., 0.), c(4., 0.)]).unwrap();
        let alpha = ComplexVector::new(vec![c(0., 1.), c(1., 0.)]).unwrap();
        let got = psi.contract_first(&alpha, 2);
        // conj(i)*(1,2) + 1*(3,4) = (3 - i, 4 - 2i)
        assert!((got.get(0) - c(3., -1.)).norm() < 1e-14);
        assert!((got.get(1) - c(4., -2.)).norm() < 1e-14);
    }

    #[test]
    fn canonical_phase_makes_largest_entry_real() {
        let v = ComplexVector::new(vec![c(0.0, 0.8), c(0.6, 0.0)]).unwrap();
        let canon = v.canonical_phase();
        assert!((canon.get(0).re - 0.8).abs() < 1e-14);
        assert!(canon.get(0).im.abs() < 1e-14);
    }

    #[test]
    fn basis_completion_from_plus_state() {
        let plus = ComplexVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap();
        let basis = complete_orthonormal_basis(std::slice::from_ref(&plus), 2).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(basis[0].inner(&basis[1]).norm() < 1e-12);
        assert!((basis[1].inner(&plus)).norm() < 1e-12);
    }
}
