//! Effects, POVMs and non-degenerate projective measurements on Alice's
//! subsystem, including PVM generation from unitaries and Gram-Schmidt
//! completion around a given vector.

use num_complex::Complex64;

use crate::error::{Result, SteerError};
use crate::linalg::{complete_orthonormal_basis, eigh, ComplexMatrix, ComplexVector};
use crate::tol::NORM_TOL;

/// A measurement-outcome operator E with 0 <= E <= I.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::validated(matrix, 0)
    }

    fn validated(matrix: ComplexMatrix, index: usize) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > 1e-9 {
            return Err(SteerError::NotHermitian { deviation });
        }
        let eig = eigh(&matrix)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        let max = eig.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -1e-9 {
            return Err(SteerError::EffectNotPsd { index, min_eigenvalue: min });
        }
        if max > 1.0 + 1e-9 {
            return Err(SteerError::EffectExceedsIdentity { index, max_eigenvalue: max });
        }
        Ok(Self { matrix })
    }

    /// The rank-1 projector |alpha><alpha| of a normalised vector.
    pub fn from_vector(alpha: &ComplexVector) -> Result<Self> {
        alpha.check_normalized(NORM_TOL)?;
        Ok(Self { matrix: alpha.projector() })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// True when the effect is a rank-1 projector within `tol`:
    /// E^2 = E and Tr E = 1.
    pub fn is_rank_one_projector(&self, tol: f64) -> bool {
        let idempotency = self.matrix.matmul(&self.matrix).sub(&self.matrix).frobenius_norm();
        idempotency <= tol && (self.matrix.trace().re - 1.0).abs() <= tol
    }

    /// Dominant eigenvector; for a rank-1 projector this is its defining ket.
    pub fn dominant_vector(&self) -> ComplexVector {
        eigh(&self.matrix).expect("validated effect is Hermitian").eigenvectors[0].clone()
    }
}

/// An ordered list of effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<Effect>,
}

impl Povm {
    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// The trivial single-outcome POVM {I}.
    pub fn trivial(dim: usize) -> Self {
        Self { effects: vec![Effect::identity(dim)] }
    }
}

/// Validates a list of matrices as a POVM, reporting which invariant failed
/// and by how much.
pub fn povm_validate(effects: &[ComplexMatrix]) -> Result<Povm> {
    let first = effects.first().ok_or(SteerError::InvalidParameter {
        name: "effects",
        detail: "a POVM needs at least one effect".into(),
    })?;
    let dim = first.dim();
    let mut validated = Vec::with_capacity(effects.len());
    let mut sum = ComplexMatrix::zeros(dim);
    for (index, m) in effects.iter().enumerate() {
        if m.dim() != dim {
            return Err(SteerError::DimensionMismatch { expected: dim, got: m.dim() });
        }
        sum = sum.add(m);
        validated.push(Effect::validated(m.clone(), index)?);
    }
    let residual = sum.sub(&ComplexMatrix::identity(dim));
    let deviation = residual.frobenius_norm();
    if deviation > 1e-9 {
        // report the direction in which the sum deviates most from I
        let eig = eigh(&residual.hermitized())?;
        let worst = eig
            .eigenvalues
            .iter()
            .copied()
            .max_by(|a, b| a.abs().partial_cmp(&b.abs()).expect("finite"))
            .unwrap_or(0.0);
        return Err(SteerError::IncompleteMeasurement { deviation, worst_eigenvalue: worst });
    }
    Ok(Povm { effects: validated })
}

/// A non-degenerate projective measurement: d orthonormal vectors
/// |alpha_i> whose projectors resolve the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct NonDegeneratePvm {
    vectors: Vec<ComplexVector>,
}

impl NonDegeneratePvm {
    pub fn new(vectors: Vec<ComplexVector>) -> Result<Self> {
        let dim = vectors
            .first()
            .ok_or(SteerError::InvalidParameter {
                name: "vectors",
                detail: "a PVM needs at least one vector".into(),
            })?
            .dim();
        if vectors.len() != dim {
            return Err(SteerError::PvmSize { dim, got: vectors.len() });
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.dim() != dim {
                return Err(SteerError::DimensionMismatch { expected: dim, got: v.dim() });
            }
            for (j, w) in vectors.iter().enumerate().take(i + 1) {
                let want = if i == j { 1.0 } else { 0.0 };
                let deviation = (v.inner(w).norm() - want).abs();
                if deviation > 1e-9 {
                    return Err(SteerError::NotOrthonormal { i, j, deviation });
                }
            }
        }
        Ok(Self { vectors })
    }

    /// The computational-basis PVM.
    pub fn computational(dim: usize) -> Self {
        Self {
            vectors: (0..dim).map(|k| ComplexVector::basis(dim, k)).collect(),
        }
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// View as a POVM of rank-1 projectors.
    pub fn to_povm(&self) -> Povm {
        Povm {
            effects: self
                .vectors
                .iter()
                .map(|v| Effect { matrix: v.projector() })
                .collect(),
        }
    }
}

/// Rotates a PVM by a unitary: |alpha'_{a'}> = sum_a |alpha_a> U_{a a'}.
pub fn pvm_from_unitary(base: &NonDegeneratePvm, u: &ComplexMatrix) -> Result<NonDegeneratePvm> {
    let d = base.dim();
    if u.dim() != d {
        return Err(SteerError::DimensionMismatch { expected: d, got: u.dim() });
    }
    let deviation = u.unitary_deviation();
    if deviation > 1e-9 {
        return Err(SteerError::NotUnitary { deviation });
    }
    let mut vectors = Vec::with_capacity(d);
    for a_new in 0..d {
        let mut entries = vec![Complex64::ZERO; d];
        for (a, alpha) in base.vectors.iter().enumerate() {
            let coeff = u.get(a, a_new);
            for (k, e) in entries.iter_mut().enumerate() {
                *e += alpha.get(k) * coeff;
            }
        }
        vectors.push(ComplexVector::new(entries)?);
    }
    NonDegeneratePvm::new(vectors)
}

/// Completes a normalised vector into a full non-degenerate PVM whose first
/// element is the given vector, via Gram-Schmidt over the standard basis.
pub fn pvm_containing(vector: &ComplexVector) -> Result<NonDegeneratePvm> {
    if vector.norm() <= 0.0 {
        return Err(SteerError::ZeroVector);
    }
    vector.check_normalized(NORM_TOL)?;
    let basis = complete_orthonormal_basis(std::slice::from_ref(vector), vector.dim())?;
    NonDegeneratePvm::new(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> ComplexVector {
        ComplexVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap()
    }

    #[test]
    fn trivial_povm_is_valid() {
        let povm = povm_validate(&[ComplexMatrix::identity(3)]).unwrap();
        assert_eq!(povm.len(), 1);
    }

    #[test]
    fn projective_pair_is_valid() {
        let p0 = ComplexVector::basis(2, 0).projector();
        let p1 = ComplexVector::basis(2, 1).projector();
        let povm = povm_validate(&[p0, p1]).unwrap();
        assert_eq!(povm.len(), 2);
    }

    #[test]
    fn incomplete_povm_reports_deficit_direction() {
        let p0 = ComplexVector::basis(2, 0).projector();
        let err = povm_validate(&[p0.clone(), p0]).unwrap_err();
        match err {
            SteerError::IncompleteMeasurement { deviation, worst_eigenvalue } => {
                // sum - I = diag(1, -1): Frobenius sqrt(2), extreme eigenvalue +-1
                assert!((deviation - 2.0f64.sqrt()).abs() < 1e-12);
                assert!((worst_eigenvalue.abs() - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn effect_validation_catches_violations() {
        let err = povm_validate(&[ComplexMatrix::diag_real(&[2.0, 0.0]), ComplexMatrix::diag_real(&[-1.0, 1.0])])
            .unwrap_err();
        assert!(matches!(
            err,
            SteerError::EffectExceedsIdentity { .. } | SteerError::EffectNotPsd { .. }
        ));
    }

    #[test]
    fn pvm_from_identity_is_unchanged() {
        let base = NonDegeneratePvm::computational(3);
        let rotated = pvm_from_unitary(&base, &ComplexMatrix::identity(3)).unwrap();
        for (a, b) in base.vectors().iter().zip(rotated.vectors()) {
            assert!((a.inner(b).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pvm_from_two_level_rotation_block() {
        // the rotation used in the steerable-or-separable dichotomy proof:
        // U_bb = U_bd = 1/sqrt(2) = U_dd = -U_db on a 2-block, identity elsewhere
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (b, d) = (0usize, 1usize);
        let mut u = ComplexMatrix::identity(3);
        u.set(b, b, c(s, 0.));
        u.set(b, d, c(s, 0.));
        u.set(d, d, c(s, 0.));
        u.set(d, b, c(-s, 0.));
        let base = NonDegeneratePvm::computational(3);
        let rotated = pvm_from_unitary(&base, &u).unwrap();
        // alpha'_b = (|0> - |1>)/sqrt(2), alpha'_d = (|0> + |1>)/sqrt(2), alpha'_2 = |2>
        let want_b = ComplexVector::new(vec![c(s, 0.), c(-s, 0.), c(0., 0.)]).unwrap();
        let want_d = ComplexVector::new(vec![c(s, 0.), c(s, 0.), c(0., 0.)]).unwrap();
        assert!((rotated.vectors()[0].inner(&want_b).norm() - 1.0).abs() < 1e-12);
        assert!((rotated.vectors()[1].inner(&want_d).norm() - 1.0).abs() < 1e-12);
        assert!((rotated.vectors()[2].get(2).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pvm_rotation_composes() {
        let base = NonDegeneratePvm::computational(2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::new(2, vec![c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]).unwrap();
        let v = ComplexMatrix::new(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let one_then_other = pvm_from_unitary(&pvm_from_unitary(&base, &u).unwrap(), &v).unwrap();
        let uv = u.matmul(&v);
        let combined = pvm_from_unitary(&base, &uv).unwrap();
        for (a, b) in one_then_other.vectors().iter().zip(combined.vectors()) {
            assert!(a.sub(b).norm() < 1e-10);
        }
    }

    #[test]
    fn pvm_from_unitary_rejects_non_unitary() {
        let base = NonDegeneratePvm::computational(2);
        let bad = ComplexMatrix::diag_real(&[1.0, 0.5]);
        assert!(matches!(
            pvm_from_unitary(&base, &bad).unwrap_err(),
            SteerError::NotUnitary { .. }
        ));
    }

    #[test]
    fn pvm_containing_basis_vector() {
        let pvm = pvm_containing(&ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(pvm.len(), 2);
        assert!((pvm.vectors()[0].get(0).norm() - 1.0).abs() < 1e-12);
        assert!((pvm.vectors()[1].get(1).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pvm_containing_plus_state() {
        let pvm = pvm_containing(&plus()).unwrap();
        let minus = ComplexVector::new(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.),
            c(-std::f64::consts::FRAC_1_SQRT_2, 0.),
        ])
        .unwrap();
        assert!((pvm.vectors()[1].inner(&minus).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pvm_containing_random_qutrit_vector() {
        let v = ComplexVector::new(vec![c(0.3, 0.4), c(0.5, -0.1), c(0.2, 0.67)])
            .unwrap()
            .normalized()
            .unwrap();
        let pvm = pvm_containing(&v).unwrap();
        assert_eq!(pvm.len(), 3);
        assert!(pvm.vectors()[0].sub(&v).norm() < 1e-12);
    }

    #[test]
    fn pvm_containing_rejects_zero() {
        assert!(matches!(
            pvm_containing(&ComplexVector::zeros(2)).unwrap_err(),
            SteerError::ZeroVector
        ));
    }

    #[test]
    fn pvm_resolves_identity() {
        let v = ComplexVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let pvm = pvm_containing(&v).unwrap();
        let mut sum = ComplexMatrix::zeros(2);
        for w in pvm.vectors() {
            sum = sum.add(&w.projector());
        }
        assert!(sum.sub(&ComplexMatrix::identity(2)).frobenius_norm() < 1e-9);
    }
}
