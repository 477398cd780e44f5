//! The steering map and everything built on top of it: conditional states,
//! steered assemblages, maximal pure-steering probabilities via the kernel
//! construction, purified decompositions, orthogonal-complete families,
//! pure-steered subspaces and the steerable-or-separable classifier.
//!
//! The central object is the linear map E |-> E' = Tr_A[rho (E (x) I_B)]
//! sending Alice's effects to (unnormalised) conditional states of Bob's
//! system. A conditional state E' is summarised by its steering probability
//! p = Tr(E') and steered state sigma = E'/p; the analyses here concentrate
//! on the effects whose steered states are pure.

use num_complex::Complex64;

use crate::error::{Result, SteerError};
use crate::linalg::{
    complete_orthonormal_basis, eigh, kernel, kron, partial_trace, ComplexMatrix, ComplexVector,
    DimensionFactorization,
};
use crate::measurements::{Effect, NonDegeneratePvm, Povm};
use crate::random::{complex_normal, seeded_rng};
use crate::states::DensityOperator;
use crate::tol::Tolerances;

/// One outcome of the steering map: Alice's effect (when known), the raw
/// conditional state E', its steering probability, and the normalised
/// steered state with purity information.
#[derive(Debug, Clone)]
pub struct SteeredOutcome {
    /// The effect that produced this outcome. Absent for simulated
    /// assemblages reconstructed from a hidden-state model.
    pub effect: Option<Effect>,
    /// Unnormalised conditional state E' on Bob's side.
    pub conditional: ComplexMatrix,
    /// Steering probability p = Tr(E').
    pub probability: f64,
    /// E'/p, absent when p is below the probability floor.
    pub steered_state: Option<DensityOperator>,
    /// Whether the steered state is pure within the purity tolerance.
    pub pure: bool,
    /// Canonical-phase ket of the steered state when pure.
    pub pure_vector: Option<ComplexVector>,
}

impl SteeredOutcome {
    /// Builds an outcome from a raw conditional state, normalising and
    /// classifying purity. `fact` is the factorization of Bob's side.
    pub fn from_conditional(
        effect: Option<Effect>,
        conditional: ComplexMatrix,
        fact: DimensionFactorization,
        tol: &Tolerances,
    ) -> Result<Self> {
        let conditional = conditional.hermitized();
        let probability = conditional.trace().re;
        if probability < -tol.prob_floor {
            return Err(SteerError::NotPositiveSemidefinite { min_eigenvalue: probability });
        }
        if probability <= tol.prob_floor {
            return Ok(Self {
                effect,
                conditional,
                probability: probability.max(0.0),
                steered_state: None,
                pure: false,
                pure_vector: None,
            });
        }
        let sigma = DensityOperator::new(conditional.scale_real(1.0 / probability), fact)?;
        let (pure, pure_vector) = sigma.is_pure(tol.purity);
        Ok(Self {
            effect,
            conditional,
            probability,
            steered_state: Some(sigma),
            pure,
            pure_vector,
        })
    }
}

/// Applies the steering map: E' = Tr_A[rho (E (x) I_B)].
///
/// The first factor of `rho` is Alice's; everything after it is treated as
/// Bob's side (so steering a purified state steers B (x) C jointly).
pub fn conditional_state(
    rho: &DensityOperator,
    effect: &Effect,
    tol: &Tolerances,
) -> Result<SteeredOutcome> {
    let d_a = rho.dim_a();
    let d_rest = rho.dim_rest();
    if effect.dim() != d_a {
        return Err(SteerError::DimensionMismatch { expected: d_a, got: effect.dim() });
    }
    let lifted = kron(effect.matrix(), &ComplexMatrix::identity(d_rest))?;
    let product = rho.matrix().matmul(&lifted);
    let ab = DimensionFactorization::bipartite(d_a, d_rest)?;
    let conditional = partial_trace(&product, &ab, &[1])?;
    let rest_dims: Vec<usize> = rho.fact().dims()[1..].to_vec();
    SteeredOutcome::from_conditional(
        Some(effect.clone()),
        conditional,
        DimensionFactorization::new(rest_dims)?,
        tol,
    )
}

/// The collection of conditional states over a list of measurements,
/// with the no-signalling consistency enforced at construction.
#[derive(Debug, Clone)]
pub struct Assemblage {
    rows: Vec<Vec<SteeredOutcome>>,
    reduced_b: ComplexMatrix,
}

impl Assemblage {
    /// Validates that every measurement row sums to the same reduced state.
    pub fn from_rows(rows: Vec<Vec<SteeredOutcome>>) -> Result<Self> {
        let first = rows.first().and_then(|r| r.first()).ok_or_else(|| {
            SteerError::InvalidParameter {
                name: "rows",
                detail: "assemblage needs at least one outcome".into(),
            }
        })?;
        let dim = first.conditional.dim();
        let mut reduced: Option<ComplexMatrix> = None;
        for (x, row) in rows.iter().enumerate() {
            let mut sum = ComplexMatrix::zeros(dim);
            for outcome in row {
                if outcome.conditional.dim() != dim {
                    return Err(SteerError::DimensionMismatch {
                        expected: dim,
                        got: outcome.conditional.dim(),
                    });
                }
                sum = sum.add(&outcome.conditional);
            }
            match &reduced {
                None => reduced = Some(sum),
                Some(r) => {
                    let deviation = r.sub(&sum).frobenius_norm();
                    if deviation > 1e-9 {
                        return Err(SteerError::InternalInconsistency {
                            detail: format!(
                                "no-signalling violated: measurement {x} sums to a reduced state \
                                 deviating by {deviation:.3e}"
                            ),
                        });
                    }
                }
            }
        }
        Ok(Self { rows, reduced_b: reduced.expect("at least one row") })
    }

    pub fn rows(&self) -> &[Vec<SteeredOutcome>] {
        &self.rows
    }

    /// The common row sum, i.e. Bob's reduced state.
    pub fn reduced_bob(&self) -> &ComplexMatrix {
        &self.reduced_b
    }

    pub fn bob_dim(&self) -> usize {
        self.reduced_b.dim()
    }
}

/// Steers `rho` with every effect of every listed measurement.
pub fn assemblage(
    rho: &DensityOperator,
    measurements: &[Povm],
    tol: &Tolerances,
) -> Result<Assemblage> {
    if measurements.is_empty() {
        return Err(SteerError::InvalidParameter {
            name: "measurements",
            detail: "need at least one measurement".into(),
        });
    }
    let mut rows = Vec::with_capacity(measurements.len());
    for povm in measurements {
        let mut row = Vec::with_capacity(povm.len());
        for effect in povm.effects() {
            row.push(conditional_state(rho, effect, tol)?);
        }
        rows.push(row);
    }
    let asm = Assemblage::from_rows(rows)?;
    // the rows must also sum to Tr_A(rho)
    let ab = DimensionFactorization::bipartite(rho.dim_a(), rho.dim_rest())?;
    let rho_b = partial_trace(rho.matrix(), &ab, &[1])?;
    let deviation = asm.reduced_bob().sub(&rho_b).frobenius_norm();
    if deviation > 1e-9 {
        return Err(SteerError::InternalInconsistency {
            detail: format!("assemblage does not sum to Tr_A(rho): deviation {deviation:.3e}"),
        });
    }
    Ok(asm)
}

/// Convenience: assemblage of a list of non-degenerate PVMs.
pub fn assemblage_of_pvms(
    rho: &DensityOperator,
    pvms: &[NonDegeneratePvm],
    tol: &Tolerances,
) -> Result<Assemblage> {
    let povms: Vec<Povm> = pvms.iter().map(|p| p.to_povm()).collect();
    assemblage(rho, &povms, tol)
}

/// Result of the maximal pure-steering construction.
#[derive(Debug, Clone)]
pub struct MaxPureSteering {
    /// The maximal probability of steering Bob to the target.
    pub p_max: f64,
    /// The optimal effect: the projector onto the kernel subspace. It is the
    /// accumulation of the rank-1 members listed in `subspace`.
    pub effect: Effect,
    /// Orthonormal basis of Alice's subspace of effects steering to the
    /// target; each member belongs to some non-degenerate PVM. Empty when
    /// the target is unreachable.
    pub subspace: Vec<ComplexVector>,
}

/// Finds the maximal probability with which Alice can steer Bob to the pure
/// target `beta`, together with the optimal projective effect.
///
/// Construction: K = Tr_B[rho (I_A (x) (I_B - |beta><beta|))] is PSD, and
/// alpha steers to a multiple of |beta><beta| exactly when K alpha = 0. The
/// projector onto the kernel of K therefore accumulates every contributing
/// rank-1 effect, and p_max = Tr[rho (P_S (x) I_B)].
pub fn max_pure_steering(
    rho: &DensityOperator,
    beta: &ComplexVector,
    tol: &Tolerances,
) -> Result<MaxPureSteering> {
    let d_a = rho.dim_a();
    let d_rest = rho.dim_rest();
    if beta.dim() != d_rest {
        return Err(SteerError::DimensionMismatch { expected: d_rest, got: beta.dim() });
    }
    beta.check_normalized(tol.norm)?;

    let complement = ComplexMatrix::identity(d_rest).sub(&beta.projector());
    let lifted = kron(&ComplexMatrix::identity(d_a), &complement)?;
    let ab = DimensionFactorization::bipartite(d_a, d_rest)?;
    let k = partial_trace(&rho.matrix().matmul(&lifted), &ab, &[0])?.hermitized();

    let subspace = kernel(&k, tol.kernel)?;
    if subspace.is_empty() {
        return Ok(MaxPureSteering {
            p_max: 0.0,
            effect: Effect::new(ComplexMatrix::zeros(d_a))?,
            subspace: Vec::new(),
        });
    }
    let mut projector = ComplexMatrix::zeros(d_a);
    for v in &subspace {
        projector = projector.add(&v.projector());
    }
    let lifted_projector = kron(&projector, &ComplexMatrix::identity(d_rest))?;
    let p_max = rho.matrix().matmul(&lifted_projector).trace().re;
    if p_max <= tol.prob_floor {
        return Ok(MaxPureSteering {
            p_max: 0.0,
            effect: Effect::new(ComplexMatrix::zeros(d_a))?,
            subspace: Vec::new(),
        });
    }
    Ok(MaxPureSteering { p_max, effect: Effect::new(projector)?, subspace })
}

/// The structure of the purified state exposed by a PVM whose outcomes all
/// steer Bob to pure states: |Psi> = sum_i c_i |alpha_i, beta_i, gamma_i>.
///
/// Only the Gram matrix of the ancilla kets is observable from rho; it is
/// recovered through <alpha_i, beta_i| rho |alpha_j, beta_j> = c_i conj(c_j)
/// <gamma_j|gamma_i>.
#[derive(Debug, Clone)]
pub struct PurifiedDecomposition {
    /// Coefficients c_i, real non-negative by convention (phases are
    /// absorbed into the canonical-phase steered kets).
    pub coefficients: Vec<Complex64>,
    /// Alice's PVM kets for the contributing outcomes.
    pub alice_vectors: Vec<ComplexVector>,
    /// Bob's pure steered kets, canonical phase.
    pub bob_vectors: Vec<ComplexVector>,
    /// Gram matrix of the ancilla kets: entry (i, j) holds <gamma_j|gamma_i>.
    pub ancilla_gram: ComplexMatrix,
    /// Residual ket orthogonal to every |alpha_i>; zero whenever the
    /// contributing probabilities sum to one (always the case for a full
    /// PVM).
    pub residual: ComplexVector,
    /// Indices of the contributing outcomes in the original PVM.
    pub outcome_indices: Vec<usize>,
}

impl PurifiedDecomposition {
    /// Number of contributing terms.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Rebuilds rho' = sum_ij c_i conj(c_j) <gamma_j|gamma_i>
    /// |alpha_i, beta_i><alpha_j, beta_j|.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let m = self.len();
        let dim = self.alice_vectors[0].dim() * self.bob_vectors[0].dim();
        let products: Vec<ComplexVector> = self
            .alice_vectors
            .iter()
            .zip(&self.bob_vectors)
            .map(|(a, b)| a.kron(b))
            .collect();
        let mut out = ComplexMatrix::zeros(dim);
        for i in 0..m {
            for j in 0..m {
                let weight =
                    self.coefficients[i] * self.coefficients[j].conj() * self.ancilla_gram.get(i, j);
                out = out.add(&products[i].outer(&products[j]).scale(weight));
            }
        }
        out
    }
}

/// Extracts the purified decomposition of `rho` exposed by `pvm`.
///
/// Every outcome with probability above the floor must steer Bob to a pure
/// state; otherwise `NonPureOutcome` reports the offending index.
pub fn purified_decomposition(
    rho: &DensityOperator,
    pvm: &NonDegeneratePvm,
    tol: &Tolerances,
) -> Result<PurifiedDecomposition> {
    if pvm.dim() != rho.dim_a() {
        return Err(SteerError::DimensionMismatch { expected: rho.dim_a(), got: pvm.dim() });
    }
    let mut coefficients = Vec::new();
    let mut alice_vectors = Vec::new();
    let mut bob_vectors = Vec::new();
    let mut outcome_indices = Vec::new();
    let mut captured = 0.0f64;

    for (index, alpha) in pvm.vectors().iter().enumerate() {
        let outcome = conditional_state(rho, &Effect::from_vector(alpha)?, tol)?;
        if outcome.probability <= tol.prob_floor {
            continue;
        }
        if !outcome.pure {
            let sigma = outcome.steered_state.as_ref().expect("probability above floor");
            return Err(SteerError::NonPureOutcome {
                index,
                deficit: 1.0 - sigma.purity(),
            });
        }
        captured += outcome.probability;
        coefficients.push(Complex64::new(outcome.probability.sqrt(), 0.0));
        alice_vectors.push(alpha.clone());
        bob_vectors.push(outcome.pure_vector.expect("pure outcome carries its ket"));
        outcome_indices.push(index);
    }

    if (captured - 1.0).abs() > 1e-9 {
        return Err(SteerError::PremiseViolation {
            detail: format!(
                "contributing probabilities sum to {captured:.12}; outcomes below the floor \
                 carry too much weight"
            ),
        });
    }

    let m = coefficients.len();
    let mut gram = ComplexMatrix::identity(m);
    for i in 0..m {
        let vi = alice_vectors[i].kron(&bob_vectors[i]);
        for j in 0..m {
            if i == j {
                continue;
            }
            let vj = alice_vectors[j].kron(&bob_vectors[j]);
            let overlap = vi.inner(&rho.matrix().apply(&vj));
            gram.set(i, j, overlap / (coefficients[i] * coefficients[j].conj()));
        }
    }
    let gram_eig = eigh(&gram.hermitized())?;
    let min = gram_eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -1e-9 {
        return Err(SteerError::InternalInconsistency {
            detail: format!("ancilla Gram matrix has eigenvalue {min:.3e} < 0"),
        });
    }

    let residual = ComplexVector::zeros(rho.dim() * m.max(1));
    Ok(PurifiedDecomposition {
        coefficients,
        alice_vectors,
        bob_vectors,
        ancilla_gram: gram,
        residual,
        outcome_indices,
    })
}

/// Outcome of checking a family of pure steered states for the
/// orthogonal-complete property.
#[derive(Debug, Clone)]
pub enum FamilyCheck {
    /// The family is orthogonal and complete; the supplied effects were
    /// verified to be pairwise orthogonal and extended to a full PVM.
    Complete { pvm: NonDegeneratePvm },
    /// Steering probabilities do not sum to one.
    ProbabilityDeficit { total: f64 },
    /// Two steered kets overlap.
    NonOrthogonal { i: usize, j: usize, overlap: f64 },
}

impl FamilyCheck {
    pub fn holds(&self) -> bool {
        matches!(self, FamilyCheck::Complete { .. })
    }
}

/// Checks the premises and conclusion of the orthogonal-complete family
/// property: pure steered states from single rank-1 projective effects that
/// are mutually orthogonal with probabilities summing to one must come from
/// one non-degenerate projective measurement (so Alice's effects come out
/// pairwise orthogonal).
///
/// Premise violations are reported as errors; conclusion violations are
/// ordinary `false` results with a witness. If the premises hold, the states
/// are orthogonal, the probabilities are complete and yet the effects fail
/// to be orthogonal, an internal-consistency error is raised: that would be
/// a counterexample to the theory.
pub fn orthogonal_complete_check(
    outcomes: &[SteeredOutcome],
    tol: &Tolerances,
) -> Result<FamilyCheck> {
    if outcomes.is_empty() {
        return Err(SteerError::PremiseViolation { detail: "empty family".into() });
    }
    let mut alices = Vec::with_capacity(outcomes.len());
    let mut betas = Vec::with_capacity(outcomes.len());
    for (i, outcome) in outcomes.iter().enumerate() {
        let effect = outcome.effect.as_ref().ok_or_else(|| SteerError::PremiseViolation {
            detail: format!("outcome {i} carries no effect"),
        })?;
        if !effect.is_rank_one_projector(1e-8) {
            return Err(SteerError::PremiseViolation {
                detail: format!("effect {i} is not a rank-1 projector"),
            });
        }
        if outcome.probability <= tol.prob_floor {
            return Err(SteerError::PremiseViolation {
                detail: format!("outcome {i} has probability {} below the floor", outcome.probability),
            });
        }
        if !outcome.pure {
            return Err(SteerError::PremiseViolation {
                detail: format!("outcome {i} does not steer to a pure state"),
            });
        }
        alices.push(effect.dominant_vector());
        betas.push(outcome.pure_vector.clone().expect("pure outcome carries its ket"));
    }

    for i in 0..betas.len() {
        for j in (i + 1)..betas.len() {
            let overlap = betas[i].inner(&betas[j]).norm();
            if overlap > 1e-8 {
                return Ok(FamilyCheck::NonOrthogonal { i, j, overlap });
            }
        }
    }
    let total: f64 = outcomes.iter().map(|o| o.probability).sum();
    if (total - 1.0).abs() > 1e-8 {
        return Ok(FamilyCheck::ProbabilityDeficit { total });
    }

    // premises and steered-state conclusion hold; the effects must now be
    // pairwise orthogonal
    for i in 0..alices.len() {
        for j in (i + 1)..alices.len() {
            let overlap = alices[i].inner(&alices[j]).norm();
            if overlap > 1e-8 {
                return Err(SteerError::InternalInconsistency {
                    detail: format!(
                        "orthogonal complete family with non-orthogonal effects \
                         ({i}, {j}): overlap {overlap:.3e}; this would falsify the \
                         orthogonality lemma"
                    ),
                });
            }
        }
    }
    let d_a = alices[0].dim();
    let basis = complete_orthonormal_basis(&alices, d_a)?;
    Ok(FamilyCheck::Complete { pvm: NonDegeneratePvm::new(basis)? })
}

/// The span of reachable pure steered states selected by an extra target.
#[derive(Debug, Clone)]
pub struct SubspaceReport {
    /// Orthonormal basis of the span on Bob's side.
    pub basis: Vec<ComplexVector>,
    /// Which members of the family overlap the extra target.
    pub member_indices: Vec<usize>,
    /// How many random span members were verified reachable.
    pub samples_checked: usize,
    /// The smallest steering probability seen across the samples.
    pub min_sample_probability: f64,
}

/// Given an orthogonal-complete family and one more reachable pure steered
/// state, Alice can steer Bob to anything in the span of the family members
/// that overlap it. Returns that span and verifies it constructively on a
/// random sample.
pub fn pure_steered_subspace(
    rho: &DensityOperator,
    family: &[SteeredOutcome],
    extra_beta: &ComplexVector,
    seed: u64,
    tol: &Tolerances,
) -> Result<SubspaceReport> {
    let check = orthogonal_complete_check(family, tol)?;
    if !check.holds() {
        return Err(SteerError::PremiseViolation {
            detail: format!("family is not orthogonal complete: {check:?}"),
        });
    }
    let reach = max_pure_steering(rho, extra_beta, tol)?;
    if reach.p_max <= tol.prob_floor {
        return Err(SteerError::UnreachableTarget { p_max: reach.p_max });
    }

    let mut members = Vec::new();
    let mut member_indices = Vec::new();
    for (i, outcome) in family.iter().enumerate() {
        let beta = outcome.pure_vector.clone().expect("validated family outcome is pure");
        if beta.inner(extra_beta).norm() > tol.overlap {
            members.push(beta);
            member_indices.push(i);
        }
    }
    // re-orthonormalise: family members are orthogonal within 1e-8, not exactly
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(members.len());
    for v in &members {
        let mut w = v.clone();
        for b in &basis {
            let overlap = b.inner(&w);
            w = w.sub(&b.scale(overlap));
        }
        basis.push(w.normalized()?);
    }

    const SAMPLES: usize = 20;
    let mut rng = seeded_rng(seed);
    let mut min_p = f64::INFINITY;
    for _ in 0..SAMPLES {
        let sample = loop {
            let mut draw = ComplexVector::zeros(extra_beta.dim());
            for b in &basis {
                draw = draw.add(&b.scale(complex_normal(&mut rng)));
            }
            if draw.norm() > 1e-6 {
                break draw;
            }
        };
        let sample = sample.normalized()?;
        let result = max_pure_steering(rho, &sample, tol)?;
        if result.p_max <= tol.prob_floor {
            return Err(SteerError::InternalInconsistency {
                detail: format!(
                    "span member unreachable (p = {:.3e}); this would falsify the \
                     span theorem",
                    result.p_max
                ),
            });
        }
        min_p = min_p.min(result.p_max);
    }
    Ok(SubspaceReport {
        basis,
        member_indices,
        samples_checked: SAMPLES,
        min_sample_probability: min_p,
    })
}

/// Why the classifier refused to give a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum UndeterminedReason {
    /// The steered kets are linearly dependent; the dichotomy's premise
    /// fails.
    DependentSteeredStates { rank: usize, count: usize },
    /// The largest off-diagonal magnitude sits between the separability
    /// floor and the steerability threshold.
    GrayZone { magnitude: f64 },
}

/// Verdict of the steerable-or-separable dichotomy.
#[derive(Debug, Clone)]
pub enum SteerabilityVerdict {
    /// The state is steerable (hence nonseparable); the witnessing matrix
    /// element <alpha_i, beta_i| rho |alpha_j, beta_j> is reported.
    Steerable { i: usize, j: usize, magnitude: f64 },
    /// The state is separable with an explicit product ensemble
    /// {p_i, |alpha_i, beta_i>}, verified against rho.
    SeparableExplicit {
        ensemble: Vec<(f64, ComplexVector)>,
        reconstruction_error: f64,
    },
    /// No verdict; see the reason.
    Undetermined { reason: UndeterminedReason },
}

impl SteerabilityVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            SteerabilityVerdict::Steerable { .. } => "steerable",
            SteerabilityVerdict::SeparableExplicit { .. } => "separable_explicit",
            SteerabilityVerdict::Undetermined { .. } => "undetermined",
        }
    }
}

/// The steerable-or-separable classifier.
///
/// Premise: every PVM outcome above the probability floor steers Bob to a
/// pure state, and the steered kets are linearly independent. Then the state
/// is steerable exactly when some off-diagonal
/// M_ij = <alpha_i, beta_i| rho |alpha_j, beta_j> survives; otherwise rho is
/// explicitly separable as sum_i p_i |alpha_i, beta_i><alpha_i, beta_i|.
///
/// Off-diagonal magnitudes between `tol.offdiag_floor` and `tol.offdiag` are
/// a numerical gray zone and yield `Undetermined` rather than a guess.
pub fn classify(
    rho: &DensityOperator,
    pvm: &NonDegeneratePvm,
    tol: &Tolerances,
) -> Result<SteerabilityVerdict> {
    if pvm.dim() != rho.dim_a() {
        return Err(SteerError::DimensionMismatch { expected: rho.dim_a(), got: pvm.dim() });
    }
    let mut alices = Vec::new();
    let mut betas = Vec::new();
    let mut probs = Vec::new();
    for (index, alpha) in pvm.vectors().iter().enumerate() {
        let outcome = conditional_state(rho, &Effect::from_vector(alpha)?, tol)?;
        if outcome.probability <= tol.prob_floor {
            continue;
        }
        if !outcome.pure {
            let sigma = outcome.steered_state.as_ref().expect("probability above floor");
            return Err(SteerError::NonPureOutcome { index, deficit: 1.0 - sigma.purity() });
        }
        alices.push(alpha.clone());
        betas.push(outcome.pure_vector.expect("pure outcome carries its ket"));
        probs.push(outcome.probability);
    }
    let m = betas.len();

    // independence of the steered kets via the rank of their Gram matrix
    let gram = ComplexMatrix::from_fn(m, |i, j| betas[i].inner(&betas[j]));
    let gram_eig = eigh(&gram.hermitized())?;
    let lambda_max = gram_eig.eigenvalues.first().copied().unwrap_or(0.0);
    let rank = gram_eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > crate::tol::RANK_TOL * lambda_max.max(1e-300))
        .count();
    if rank < m {
        return Ok(SteerabilityVerdict::Undetermined {
            reason: UndeterminedReason::DependentSteeredStates { rank, count: m },
        });
    }

    let products: Vec<ComplexVector> =
        alices.iter().zip(&betas).map(|(a, b)| a.kron(b)).collect();
    let mut worst = 0.0f64;
    let mut witness = (0usize, 0usize);
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let magnitude = products[i].inner(&rho.matrix().apply(&products[j])).norm();
            if magnitude > worst {
                worst = magnitude;
                witness = (i, j);
            }
        }
    }

    if worst > tol.offdiag {
        return Ok(SteerabilityVerdict::Steerable { i: witness.0, j: witness.1, magnitude: worst });
    }
    if worst > tol.offdiag_floor {
        return Ok(SteerabilityVerdict::Undetermined {
            reason: UndeterminedReason::GrayZone { magnitude: worst },
        });
    }
    let mut recon = ComplexMatrix::zeros(rho.dim());
    for (p, v) in probs.iter().zip(&products) {
        recon = recon.add(&v.projector().scale_real(*p));
    }
    let reconstruction_error = recon.sub(rho.matrix()).frobenius_norm();
    if reconstruction_error > 1e-8 {
        return Err(SteerError::InternalInconsistency {
            detail: format!(
                "separable reconstruction misses rho by {reconstruction_error:.3e} despite \
                 vanishing off-diagonals"
            ),
        });
    }
    let ensemble = probs.into_iter().zip(products).collect();
    Ok(SteerabilityVerdict::SeparableExplicit { ensemble, reconstruction_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurements::pvm_containing;
    use crate::states::{
        maximally_mixed, product_state, qutrit_family, two_qubit_family, DensityOperator,
        PureState, QutritFamilyParams, TwoQubitFamilyParams,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn computational_family(eta: f64, z: Complex64) -> DensityOperator {
        two_qubit_family(&TwoQubitFamilyParams::computational(eta, z)).unwrap()
    }

    #[test]
    fn identity_effect_gives_reduced_state() {
        let rho = computational_family(0.3, c(0.2, 0.1));
        let outcome = conditional_state(&rho, &Effect::identity(2), &tol()).unwrap();
        assert!((outcome.probability - 1.0).abs() < 1e-12);
        let ab = DimensionFactorization::bipartite(2, 2).unwrap();
        let rho_b = partial_trace(rho.matrix(), &ab, &[1]).unwrap();
        assert!(outcome.conditional.sub(&rho_b).max_abs_entry() < 1e-12);
    }

    #[test]
    fn family_steers_to_beta1_with_probability_eta() {
        let eta = 0.7;
        let rho = computational_family(eta, c(0.5, 0.0));
        let effect = Effect::from_vector(&ComplexVector::basis(2, 0)).unwrap();
        let outcome = conditional_state(&rho, &effect, &tol()).unwrap();
        assert!((outcome.probability - eta).abs() < 1e-12);
        assert!(outcome.pure);
        let beta1 = ComplexVector::basis(2, 0);
        assert!((outcome.pure_vector.unwrap().inner(&beta1).norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn product_states_do_not_steer() {
        let rho_a = maximally_mixed(DimensionFactorization::single(2).unwrap());
        let plus = ComplexVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap();
        let rho_b = PureState::new(plus.clone(), DimensionFactorization::single(2).unwrap())
            .unwrap()
            .to_density();
        let rho = product_state(&rho_a, &rho_b).unwrap();
        let effect = Effect::from_vector(&ComplexVector::basis(2, 0)).unwrap();
        let outcome = conditional_state(&rho, &effect, &tol()).unwrap();
        // steered state is rho_B, probability Tr(E rho_A)
        assert!((outcome.probability - 0.5).abs() < 1e-12);
        let sigma = outcome.steered_state.unwrap();
        assert!(sigma.matrix().sub(rho_b.matrix()).max_abs_entry() < 1e-12);
    }

    #[test]
    fn steering_map_is_linear() {
        let rho = computational_family(0.42, c(0.3, -0.2));
        let e1 = ComplexMatrix::diag_real(&[0.7, 0.1]);
        let e2 = ComplexMatrix::new(
            2,
            vec![c(0.2, 0.0), c(0.1, 0.05), c(0.1, -0.05), c(0.3, 0.0)],
        )
        .unwrap();
        let (a, b) = (0.6, 0.3);
        let combo = Effect::new(e1.scale_real(a).add(&e2.scale_real(b))).unwrap();
        let lhs = conditional_state(&rho, &combo, &tol()).unwrap().conditional;
        let r1 = conditional_state(&rho, &Effect::new(e1).unwrap(), &tol()).unwrap().conditional;
        let r2 = conditional_state(&rho, &Effect::new(e2).unwrap(), &tol()).unwrap().conditional;
        let rhs = r1.scale_real(a).add(&r2.scale_real(b));
        assert!(lhs.sub(&rhs).max_abs_entry() < 1e-10);
    }

    #[test]
    fn assemblage_probabilities_and_no_signalling() {
        let eta = 0.25;
        let rho = computational_family(eta, c(0.5, 0.0));
        let asm = assemblage_of_pvms(&rho, &[NonDegeneratePvm::computational(2)], &tol()).unwrap();
        let probs: Vec<f64> = asm.rows()[0].iter().map(|o| o.probability).collect();
        assert!((probs[0] - eta).abs() < 1e-12);
        assert!((probs[1] - (1.0 - eta)).abs() < 1e-12);
    }

    #[test]
    fn trivial_povm_assemblage() {
        let rho = computational_family(0.5, c(0.0, 0.0));
        let asm = assemblage(&rho, &[Povm::trivial(2)], &tol()).unwrap();
        assert_eq!(asm.rows()[0].len(), 1);
        assert!((asm.rows()[0][0].probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_assemblage_is_constant() {
        let rho_a = maximally_mixed(DimensionFactorization::single(2).unwrap());
        let rho_b = maximally_mixed(DimensionFactorization::single(2).unwrap());
        let rho = product_state(&rho_a, &rho_b).unwrap();
        let hadamard = pvm_containing(
            &ComplexVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap(),
        )
        .unwrap();
        let asm = assemblage_of_pvms(
            &rho,
            &[NonDegeneratePvm::computational(2), hadamard],
            &tol(),
        )
        .unwrap();
        for row in asm.rows() {
            for outcome in row {
                let sigma = outcome.steered_state.as_ref().unwrap();
                assert!(sigma.matrix().sub(rho_b.matrix()).max_abs_entry() < 1e-10);
            }
        }
    }

    #[test]
    fn max_pure_steering_on_family_state() {
        let eta = 0.6;
        let rho = computational_family(eta, c(0.4, 0.1));
        let beta1 = ComplexVector::basis(2, 0);
        let result = max_pure_steering(&rho, &beta1, &tol()).unwrap();
        assert!((result.p_max - eta).abs() < 1e-10);
        assert_eq!(result.subspace.len(), 1);
        // subspace is span{|0>_A}
        assert!((result.subspace[0].inner(&ComplexVector::basis(2, 0)).norm() - 1.0).abs() < 1e-9);
        // optimal effect is a projector
        let e = result.effect.matrix();
        assert!(e.matmul(e).sub(e).frobenius_norm() < 1e-9);
    }

    #[test]
    fn max_pure_steering_on_maximally_mixed_state() {
        let rho = maximally_mixed(DimensionFactorization::bipartite(2, 2).unwrap());
        let target = ComplexVector::basis(2, 0);
        let result = max_pure_steering(&rho, &target, &tol()).unwrap();
        assert_eq!(result.p_max, 0.0);
        assert!(result.subspace.is_empty());
    }

    #[test]
    fn max_pure_steering_accumulates_full_probability_on_pure_product() {
        // rho = |0,b><0,b|: every effect steers to b, so the optimal
        // projector is the whole of Alice's space with p = 1
        let rho = computational_family(1.0, c(0.0, 0.0));
        let result = max_pure_steering(&rho, &ComplexVector::basis(2, 0), &tol()).unwrap();
        assert!((result.p_max - 1.0).abs() < 1e-10);
        assert_eq!(result.subspace.len(), 2);
    }

    #[test]
    fn purified_decomposition_of_family_state() {
        let eta = 0.3;
        let z = c(0.25, -0.4);
        let rho = computational_family(eta, z);
        let decomp =
            purified_decomposition(&rho, &NonDegeneratePvm::computational(2), &tol()).unwrap();
        assert_eq!(decomp.len(), 2);
        assert!((decomp.coefficients[0].re - eta.sqrt()).abs() < 1e-10);
        assert!((decomp.coefficients[1].re - (1.0 - eta).sqrt()).abs() < 1e-10);
        // <gamma_2|gamma_1> = z is stored at (0, 1)
        assert!((decomp.ancilla_gram.get(0, 1) - z).norm() < 1e-9);
        assert!(decomp.reconstruct().sub(rho.matrix()).frobenius_norm() < 1e-8);
    }

    #[test]
    fn purified_decomposition_of_pure_product() {
        let rho = computational_family(1.0, c(0.0, 0.0));
        let decomp =
            purified_decomposition(&rho, &NonDegeneratePvm::computational(2), &tol()).unwrap();
        assert_eq!(decomp.len(), 1);
        assert!((decomp.coefficients[0].re - 1.0).abs() < 1e-10);
        assert_eq!(decomp.outcome_indices, vec![0]);
    }

    #[test]
    fn purified_decomposition_rejects_mixed_outcome() {
        let rho = qutrit_family(&QutritFamilyParams { eta: 0.5, z: Complex64::ZERO }).unwrap();
        // a PVM whose first vector mixes the psi-minus branch with |00>
        let alpha = ComplexVector::new(vec![
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
        ])
        .unwrap();
        let pvm = pvm_containing(&alpha).unwrap();
        let err = purified_decomposition(&rho, &pvm, &tol()).unwrap_err();
        assert!(matches!(err, SteerError::NonPureOutcome { .. }));
    }

    fn family_outcomes(rho: &DensityOperator, pvm: &NonDegeneratePvm) -> Vec<SteeredOutcome> {
        pvm.vectors()
            .iter()
            .map(|alpha| {
                conditional_state(rho, &Effect::from_vector(alpha).unwrap(), &tol()).unwrap()
            })
            .collect()
    }

    #[test]
    fn orthogonal_complete_family_passes() {
        let rho = computational_family(0.35, c(0.2, 0.2));
        let outcomes = family_outcomes(&rho, &NonDegeneratePvm::computational(2));
        let check = orthogonal_complete_check(&outcomes, &tol()).unwrap();
        assert!(check.holds());
        if let FamilyCheck::Complete { pvm } = check {
            assert_eq!(pvm.len(), 2);
        }
    }

    #[test]
    fn probability_deficit_is_detected() {
        let rho = computational_family(0.9, c(0.0, 0.0));
        let outcomes = family_outcomes(&rho, &NonDegeneratePvm::computational(2));
        // drop the second outcome: total probability 0.9
        let check = orthogonal_complete_check(&outcomes[..1], &tol()).unwrap();
        match check {
            FamilyCheck::ProbabilityDeficit { total } => assert!((total - 0.9).abs() < 1e-10),
            other => panic!("unexpected result {other:?}"),
        }
    }

    #[test]
    fn non_orthogonal_steered_states_are_detected() {
        let plus = ComplexVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2]).unwrap();
        let params = TwoQubitFamilyParams {
            eta: 0.5,
            z: Complex64::ZERO,
            beta1: ComplexVector::basis(2, 0),
            beta2: plus,
        };
        let rho = two_qubit_family(&params).unwrap();
        let outcomes = family_outcomes(&rho, &NonDegeneratePvm::computational(2));
        let check = orthogonal_complete_check(&outcomes, &tol()).unwrap();
        assert!(matches!(check, FamilyCheck::NonOrthogonal { .. }));
    }

    #[test]
    fn premise_violation_for_non_projective_effect() {
        let rho = computational_family(0.5, c(0.0, 0.0));
        let soft = Effect::new(ComplexMatrix::diag_real(&[0.5, 0.0])).unwrap();
        let outcome = conditional_state(&rho, &soft, &tol()).unwrap();
        let err = orthogonal_complete_check(&[outcome], &tol()).unwrap_err();
        assert!(matches!(err, SteerError::PremiseViolation { .. }));
    }

    #[test]
    fn qutrit_subspace_is_the_plus_minus_one_plane() {
        let rho = qutrit_family(&QutritFamilyParams { eta: 0.5, z: c(0.5, 0.0) }).unwrap();
        let family = family_outcomes(&rho, &NonDegeneratePvm::computational(3));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let extra = ComplexVector::new(vec![c(s, 0.0), c(0.0, 0.0), c(-s, 0.0)]).unwrap();
        let report = pure_steered_subspace(&rho, &family, &extra, 11, &tol()).unwrap();
        assert_eq!(report.basis.len(), 2);
        // span{|+1>, |-1>} = span{e0, e2}
        let mut projector = ComplexMatrix::zeros(3);
        for b in &report.basis {
            projector = projector.add(&b.projector());
        }
        let mut want = ComplexVector::basis(3, 0).projector();
        want = want.add(&ComplexVector::basis(3, 2).projector());
        assert!(projector.sub(&want).frobenius_norm() < 1e-8);
        assert!(report.min_sample_probability > 1e-10);
    }

    #[test]
    fn subspace_of_the_extra_state_itself() {
        let rho = qutrit_family(&QutritFamilyParams { eta: 0.5, z: Complex64::ZERO }).unwrap();
        let family = family_outcomes(&rho, &NonDegeneratePvm::computational(3));
        // the steered state of the first outcome is |-1> = e2
        let beta1 = family[0].pure_vector.clone().unwrap();
        let report = pure_steered_subspace(&rho, &family, &beta1, 3, &tol()).unwrap();
        assert_eq!(report.basis.len(), 1);
        assert!((report.basis[0].inner(&beta1).norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pure_entangled_two_qubit_state_spans_all_of_bobs_space() {
        // z = 1 makes the family state pure and entangled for 0 < eta < 1
        let rho = computational_family(0.5, c(1.0, 0.0));
        let family = family_outcomes(&rho, &NonDegeneratePvm::computational(2));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let extra = ComplexVector::from_real(&[s, s]).unwrap();
        let report = pure_steered_subspace(&rho, &family, &extra, 5, &tol()).unwrap();
        assert_eq!(report.basis.len(), 2);
    }

    #[test]
    fn subspace_rejects_unreachable_target() {
        let rho = computational_family(0.5, c(0.0, 0.0));
        let family = family_outcomes(&rho, &NonDegeneratePvm::computational(2));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // |+> is not a pure steered state of the separable family state
        let extra = ComplexVector::from_real(&[s, s]).unwrap();
        let err = pure_steered_subspace(&rho, &family, &extra, 1, &tol()).unwrap_err();
        assert!(matches!(err, SteerError::UnreachableTarget { .. }));
    }

    #[test]
    fn classifier_matches_the_offdiagonal_formula() {
        let eta = 0.5;
        let z = c(0.8, 0.0);
        let rho = computational_family(eta, z);
        let verdict = classify(&rho, &NonDegeneratePvm::computational(2), &tol()).unwrap();
        match verdict {
            SteerabilityVerdict::Steerable { magnitude, .. } => {
                let want = z.norm() * (eta * (1.0 - eta)).sqrt();
                assert!((magnitude - want).abs() < 1e-9);
            }
            other => panic!("expected steerable, got {other:?}"),
        }
    }

    #[test]
    fn classifier_separable_at_z_zero() {
        let eta = 0.5;
        let rho = computational_family(eta, Complex64::ZERO);
        let verdict = classify(&rho, &NonDegeneratePvm::computational(2), &tol()).unwrap();
        match verdict {
            SteerabilityVerdict::SeparableExplicit { ensemble, reconstruction_error } => {
                assert_eq!(ensemble.len(), 2);
                assert!((ensemble[0].0 - eta).abs() < 1e-10);
                assert!(reconstruction_error < 1e-8);
            }
            other => panic!("expected separable, got {other:?}"),
        }
    }

    #[test]
    fn classifier_refuses_dependent_steered_states() {
        let params = TwoQubitFamilyParams {
            eta: 0.5,
            z: Complex64::ZERO,
            beta1: ComplexVector::basis(2, 0),
            beta2: ComplexVector::basis(2, 0),
        };
        let rho = two_qubit_family(&params).unwrap();
        let verdict = classify(&rho, &NonDegeneratePvm::computational(2), &tol()).unwrap();
        assert!(matches!(
            verdict,
            SteerabilityVerdict::Undetermined {
                reason: UndeterminedReason::DependentSteeredStates { rank: 1, count: 2 }
            }
        ));
    }

    #[test]
    fn classifier_agrees_with_purified_decomposition() {
        // the classifier's off-diagonals are c_i c_j <gamma_j|gamma_i>
        for (eta, z) in [(0.5, c(0.8, 0.0)), (0.3, c(0.0, 0.5)), (0.5, c(0.0, 0.0))] {
            let rho = computational_family(eta, z);
            let pvm = NonDegeneratePvm::computational(2);
            let verdict = classify(&rho, &pvm, &tol()).unwrap();
            let decomp = purified_decomposition(&rho, &pvm, &tol()).unwrap();
            let mut worst = 0.0f64;
            for i in 0..decomp.len() {
                for j in 0..decomp.len() {
                    if i != j {
                        let w = (decomp.coefficients[i]
                            * decomp.coefficients[j].conj()
                            * decomp.ancilla_gram.get(i, j))
                        .norm();
                        worst = worst.max(w);
                    }
                }
            }
            match verdict {
                SteerabilityVerdict::Steerable { magnitude, .. } => {
                    assert!(worst > crate::tol::OFFDIAG_TOL);
                    assert!((magnitude - worst).abs() < 1e-10);
                }
                SteerabilityVerdict::SeparableExplicit { .. } => {
                    assert!(worst <= crate::tol::OFFDIAG_FLOOR);
                }
                other => panic!("unexpected verdict {other:?}"),
            }
        }
    }
}
