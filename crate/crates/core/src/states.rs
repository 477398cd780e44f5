//! Density operators, pure states, purification, and constructors for the
//! two-qubit and two-qutrit state families used throughout the crate.

use num_complex::Complex64;

use crate::error::{Result, SteerError};
use crate::linalg::{eigh, kron, partial_trace, ComplexMatrix, ComplexVector, DimensionFactorization};
use crate::tol::{HERM_TOL, NORM_TOL, RANK_TOL};

/// A positive semi-definite, unit-trace operator together with its
/// subsystem factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    fact: DimensionFactorization,
}

impl DensityOperator {
    /// Validates Hermiticity, positivity and unit trace before accepting.
    pub fn new(matrix: ComplexMatrix, fact: DimensionFactorization) -> Result<Self> {
        fact.check_total(matrix.dim())?;
        let deviation = matrix.hermitian_deviation();
        if deviation > HERM_TOL {
            return Err(SteerError::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-9 || trace.im.abs() > 1e-9 {
            return Err(SteerError::TraceNotOne { trace: trace.re });
        }
        let eig = eigh(&matrix)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -1e-9 {
            return Err(SteerError::NotPositiveSemidefinite { min_eigenvalue: min });
        }
        Ok(Self { matrix, fact })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn fact(&self) -> &DimensionFactorization {
        &self.fact
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Dimension of subsystem A (the first factor).
    pub fn dim_a(&self) -> usize {
        self.fact.dims()[0]
    }

    /// Product of the dimensions of everything after subsystem A.
    pub fn dim_rest(&self) -> usize {
        self.dim() / self.dim_a()
    }

    /// Tr(rho^2), in [1/dim, 1].
    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    /// True when 1 - Tr(rho^2) <= tol; also returns the dominant
    /// eigenvector (canonical phase) in that case.
    pub fn is_pure(&self, tol: f64) -> (bool, Option<ComplexVector>) {
        if 1.0 - self.purity() <= tol {
            let eig = eigh(&self.matrix).expect("validated density operator is Hermitian");
            (true, Some(eig.eigenvectors[0].clone()))
        } else {
            (false, None)
        }
    }

    /// Rank at the crate-wide relative eigenvalue threshold.
    pub fn rank(&self) -> usize {
        let eig = eigh(&self.matrix).expect("validated density operator is Hermitian");
        let lambda_max = eig.eigenvalues.first().copied().unwrap_or(0.0);
        if lambda_max <= 0.0 {
            return 0;
        }
        eig.eigenvalues.iter().filter(|&&l| l > RANK_TOL * lambda_max).count()
    }

    /// Canonical purification on A (x) B (x) C with d_C = rank(rho):
    /// |Psi> = sum_k sqrt(lambda_k) |u_k> |k>_C, eigenvalues descending,
    /// global phase fixed so the largest amplitude is real positive.
    pub fn purify(&self) -> Result<PureState> {
        let eig = eigh(&self.matrix)?;
        let lambda_max = eig.eigenvalues.first().copied().unwrap_or(0.0);
        let rank = if lambda_max <= 0.0 {
            0
        } else {
            eig.eigenvalues.iter().filter(|&&l| l > RANK_TOL * lambda_max).count()
        };
        let d_c = rank.max(1);
        let d_ab = self.dim();
        let mut entries = vec![Complex64::ZERO; d_ab * d_c];
        for k in 0..rank {
            let amp = eig.eigenvalues[k].max(0.0).sqrt();
            for (ab, &u) in eig.eigenvectors[k].entries().iter().enumerate() {
                entries[ab * d_c + k] = u * amp;
            }
        }
        let vector = ComplexVector::new(entries)?.canonical_phase();
        let mut dims = self.fact.dims().to_vec();
        dims.push(d_c);
        PureState::new(vector, DimensionFactorization::new(dims)?)
    }
}

/// A normalised state vector with a declared subsystem factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: ComplexVector,
    fact: DimensionFactorization,
}

impl PureState {
    pub fn new(vector: ComplexVector, fact: DimensionFactorization) -> Result<Self> {
        fact.check_total(vector.dim())?;
        vector.check_normalized(NORM_TOL)?;
        Ok(Self { vector, fact })
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.vector
    }

    pub fn fact(&self) -> &DimensionFactorization {
        &self.fact
    }

    pub fn dim(&self) -> usize {
        self.vector.dim()
    }

    /// |Psi><Psi| as a density operator over the same factorization.
    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            matrix: self.vector.projector(),
            fact: self.fact.clone(),
        }
    }

    /// Reduced state on the subsystems listed in `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        let matrix = partial_trace(&self.vector.projector(), &self.fact, keep)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let dims: Vec<usize> = keep_sorted.iter().map(|&k| self.fact.dims()[k]).collect();
        DensityOperator::new(matrix, DimensionFactorization::new(dims)?)
    }
}

/// Parameters of the two-qubit family
/// rho = eta |0,b1><0,b1| + (1-eta) |1,b2><1,b2|
///     + sqrt(eta(1-eta)) (z |0,b1><1,b2| + conj(z) |1,b2><0,b1|).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitFamilyParams {
    pub eta: f64,
    pub z: Complex64,
    pub beta1: ComplexVector,
    pub beta2: ComplexVector,
}

impl TwoQubitFamilyParams {
    /// beta1 = |0>, beta2 = |1>.
    pub fn computational(eta: f64, z: Complex64) -> Self {
        Self {
            eta,
            z,
            beta1: ComplexVector::basis(2, 0),
            beta2: ComplexVector::basis(2, 1),
        }
    }
}

fn check_family_params(eta: f64, z: Complex64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
        return Err(SteerError::InvalidParameter {
            name: "eta",
            detail: format!("must lie in [0, 1], got {eta}"),
        });
    }
    if z.norm() > 1.0 + 1e-12 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(SteerError::InvalidParameter {
            name: "z",
            detail: format!("must satisfy |z| <= 1, got |z| = {}", z.norm()),
        });
    }
    Ok(())
}

/// Builds the two-qubit family state. Out-of-range parameters are errors,
/// never clamped: clamping would hide positivity violations.
pub fn two_qubit_family(p: &TwoQubitFamilyParams) -> Result<DensityOperator> {
    check_family_params(p.eta, p.z)?;
    if p.beta1.dim() != 2 || p.beta2.dim() != 2 {
        return Err(SteerError::DimensionMismatch {
            expected: 2,
            got: p.beta1.dim().max(p.beta2.dim()),
        });
    }
    p.beta1.check_normalized(NORM_TOL)?;
    p.beta2.check_normalized(NORM_TOL)?;

    let v1 = ComplexVector::basis(2, 0).kron(&p.beta1);
    let v2 = ComplexVector::basis(2, 1).kron(&p.beta2);
    let cross = (p.eta * (1.0 - p.eta)).sqrt();

    let m = v1
        .projector()
        .scale_real(p.eta)
        .add(&v2.projector().scale_real(1.0 - p.eta))
        .add(&v1.outer(&v2).scale(p.z * cross))
        .add(&v2.outer(&v1).scale(p.z.conj() * cross));
    DensityOperator::new(m, DimensionFactorization::bipartite(2, 2)?)
}

/// Parameters of the two-qutrit family built on
/// |psi-> = (|+1,-1> - |-1,+1>)/sqrt(2), basis order |+1>, |0>, |-1>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritFamilyParams {
    pub eta: f64,
    pub z: Complex64,
}

/// The singlet-like two-qutrit vector (|+1,-1> - |-1,+1>)/sqrt(2).
pub fn qutrit_psi_minus() -> ComplexVector {
    let mut entries = vec![Complex64::ZERO; 9];
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    // basis order |+1>, |0>, |-1>: |+1,-1> sits at flat index 2, |-1,+1> at 6
    entries[2] = Complex64::new(amp, 0.0);
    entries[6] = Complex64::new(-amp, 0.0);
    ComplexVector::new(entries).expect("static vector is finite")
}

/// Builds the two-qutrit family state
/// rho = eta |psi-><psi-| + (1-eta) |00><00|
///     + sqrt(eta(1-eta)) (z |psi-><00| + conj(z) |00><psi-|),
/// where |0> is the m = 0 basis state (index 1).
pub fn qutrit_family(p: &QutritFamilyParams) -> Result<DensityOperator> {
    check_family_params(p.eta, p.z)?;
    let psi = qutrit_psi_minus();
    let zero_zero = ComplexVector::basis(3, 1).kron(&ComplexVector::basis(3, 1));
    let cross = (p.eta * (1.0 - p.eta)).sqrt();

    let m = psi
        .projector()
        .scale_real(p.eta)
        .add(&zero_zero.projector().scale_real(1.0 - p.eta))
        .add(&psi.outer(&zero_zero).scale(p.z * cross))
        .add(&zero_zero.outer(&psi).scale(p.z.conj() * cross));
    DensityOperator::new(m, DimensionFactorization::bipartite(3, 3)?)
}

/// The explicit rank-two purification of the two-qubit family:
/// |Psi> = sqrt(eta)|0,b1,g1> + sqrt(1-eta)|1,b2,g2> with <g2|g1> = z.
pub fn two_qubit_family_purified(p: &TwoQubitFamilyParams) -> Result<PureState> {
    check_family_params(p.eta, p.z)?;
    let g1 = ComplexVector::basis(2, 0);
    let g2 = ComplexVector::new(vec![
        p.z.conj(),
        Complex64::new((1.0 - p.z.norm_sqr()).max(0.0).sqrt(), 0.0),
    ])?;
    let term1 = ComplexVector::basis(2, 0)
        .kron(&p.beta1)
        .kron(&g1)
        .scale(Complex64::new(p.eta.sqrt(), 0.0));
    let term2 = ComplexVector::basis(2, 1)
        .kron(&p.beta2)
        .kron(&g2)
        .scale(Complex64::new((1.0 - p.eta).sqrt(), 0.0));
    PureState::new(term1.add(&term2), DimensionFactorization::tripartite(2, 2, 2)?)
}

/// The maximally mixed state on a given factorization.
pub fn maximally_mixed(fact: DimensionFactorization) -> DensityOperator {
    let dim = fact.total();
    DensityOperator {
        matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        fact,
    }
}

/// Product state rho_A (x) rho_B from two single-system density operators.
pub fn product_state(rho_a: &DensityOperator, rho_b: &DensityOperator) -> Result<DensityOperator> {
    let matrix = kron(rho_a.matrix(), rho_b.matrix())?;
    let fact = DimensionFactorization::bipartite(rho_a.dim(), rho_b.dim())?;
    DensityOperator::new(matrix, fact)
}
