//! The acceptance suite: nine numbered criteria covering the inequality
//! closed form, the steerable-or-separable classifier, Gram recovery from
//! purified decompositions, kernel-method optimality against a random-search
//! oracle, the pure-steered-subspace construction, effect orthogonality for
//! complete families, LHS model consistency, witness completeness on the
//! state the inequality misses, and a partial-transpose cross-check.
//!
//! Each criterion returns a [`CriterionResult`]; the CLI `selftest`
//! subcommand and the `acceptance` integration test both drive
//! [`run_all`]. The oracles here (direct-contraction steering, random
//! effect search, partial transpose) are deliberately written independently
//! of the library code paths they check.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{ComplexMatrix, ComplexVector, DimensionFactorization};
use crate::measurements::{Effect, NonDegeneratePvm};
use crate::random::{random_pvm, random_unit_vector, seeded_rng};
use crate::spin::evaluate_inequality;
use crate::states::{
    qutrit_family, two_qubit_family, DensityOperator, PureState, QutritFamilyParams,
    TwoQubitFamilyParams,
};
use crate::steering::{
    assemblage_of_pvms, classify, conditional_state, max_pure_steering, orthogonal_complete_check,
    pure_steered_subspace, purified_decomposition, FamilyCheck, SteerabilityVerdict,
    SteeredOutcome,
};
use crate::lhs::{
    deterministic_lhs_for_product_ensemble, lhs_explains, product_ensemble_for_separable_family,
    pure_probability_witness,
};
use crate::tol::Tolerances;

/// Default seed for the randomised criteria; the acceptance test pins it.
pub const DEFAULT_SEED: u64 = 7;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub runtime: Duration,
}

impl CriterionResult {
    /// One line for the CLI: `criterion 3 [gram-recovery] PASS (...)`.
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {} [{}] {} ({}; {:.3}s)",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.runtime.as_secs_f64(),
        )
    }
}

struct Check {
    failures: Vec<String>,
    count: usize,
}

impl Check {
    fn new() -> Self {
        Self { failures: Vec::new(), count: 0 }
    }

    fn require(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(message());
        }
    }

    fn finish(self, id: usize, name: &'static str, started: Instant, extra: String) -> CriterionResult {
        let runtime = started.elapsed();
        let passed = self.failures.is_empty();
        let detail = if passed {
            format!("{} checks; {extra}", self.count)
        } else {
            format!(
                "{} of {} checks failed: {}",
                self.failures.len(),
                self.count,
                self.failures.join(" | ")
            )
        };
        CriterionResult { id, name, passed, detail, runtime }
    }
}

/// Oracle: E' computed by direct index contraction,
/// E'\[j1, j2\] = sum_{i,k} conj(alpha\[i\]) rho\[(i,j1),(k,j2)\] alpha\[k\].
/// Independent of the kron/partial-trace path used by the library.
fn conditional_direct(
    rho: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    alpha: &ComplexVector,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d_b);
    for i in 0..d_a {
        let ci = alpha.get(i).conj();
        for k in 0..d_a {
            let w = ci * alpha.get(k);
            if w == Complex64::ZERO {
                continue;
            }
            for j1 in 0..d_b {
                for j2 in 0..d_b {
                    let v = rho.get(i * d_b + j1, k * d_b + j2);
                    out.set(j1, j2, out.get(j1, j2) + w * v);
                }
            }
        }
    }
    out
}

/// Oracle: best steering probability onto `beta` over `samples` random
/// rank-1 projective effects, filtered by ||E' - Tr(E') beta beta^dag||_F.
fn random_search_best_probability(
    rho: &DensityOperator,
    beta: &ComplexVector,
    samples: usize,
    rng: &mut impl Rng,
) -> f64 {
    let d_a = rho.dim_a();
    let d_b = rho.dim_rest();
    let target = beta.projector();
    let mut best = 0.0f64;
    for _ in 0..samples {
        let alpha = random_unit_vector(d_a, rng);
        let conditional = conditional_direct(rho.matrix(), d_a, d_b, &alpha);
        let p = conditional.trace().re;
        if p <= best {
            continue;
        }
        let leak = conditional.sub(&target.scale_real(p)).frobenius_norm();
        if leak <= 1e-6 {
            best = p;
        }
    }
    best
}

/// Oracle: partial transpose on the second factor of a bipartite matrix.
fn partial_transpose_b(m: &ComplexMatrix, d_a: usize, d_b: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d_a * d_b, |row, col| {
        let (i, j1) = (row / d_b, row % d_b);
        let (k, j2) = (col / d_b, col % d_b);
        m.get(i * d_b + j2, k * d_b + j1)
    })
}

/// Oracle: the 2x2 partial-transpose separability test.
fn ppt_separable(rho: &DensityOperator) -> bool {
    let pt = partial_transpose_b(rho.matrix(), rho.dim_a(), rho.dim_rest());
    let eig = crate::linalg::eigh(&pt.hermitized()).expect("partial transpose is Hermitian");
    eig.eigenvalues.last().copied().unwrap_or(0.0) >= -1e-9
}

fn beta_pairs() -> [(ComplexVector, ComplexVector); 2] {
    let plus = ComplexVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2; 2])
        .expect("static vector");
    [
        (ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)),
        (ComplexVector::basis(2, 0), plus),
    ]
}

fn family_outcomes(
    rho: &DensityOperator,
    pvm: &NonDegeneratePvm,
    tol: &Tolerances,
) -> Vec<SteeredOutcome> {
    pvm.vectors()
        .iter()
        .map(|alpha| {
            conditional_state(rho, &Effect::from_vector(alpha).expect("pvm vectors are unit"), tol)
                .expect("dimensions match")
        })
        .collect()
}

/// Criterion 1: the inequality closed form (50 - 41 eta) / 16 on the z = 0
/// qutrit family, with vanishing left-hand side.
pub fn criterion_1_inequality_reproduction() -> CriterionResult {
    let started = Instant::now();
    let mut check = Check::new();
    for step in 0..=10u32 {
        let eta = f64::from(step) / 10.0;
        let rho = qutrit_family(&QutritFamilyParams { eta, z: Complex64::ZERO })
            .expect("parameters in range");
        let result = evaluate_inequality(&rho).expect("two-qutrit state");
        let want = (50.0 - 41.0 * eta) / 16.0;
        check.require(result.lhs.abs() <= 1e-10, || {
            format!("eta={eta}: lhs {} not within 1e-10 of 0", result.lhs)
        });
        check.require((result.rhs - want).abs() <= 1e-9, || {
            format!("eta={eta}: rhs {} differs from {want}", result.rhs)
        });
        check.require(!result.violated, || format!("eta={eta}: inequality flagged violated"));
    }
    check.require(started.elapsed() < Duration::from_secs(1), || {
        format!("runtime {:?} exceeded 1s", started.elapsed())
    });
    check.finish(1, "inequality-reproduction", started, "rhs = (50-41*eta)/16 on 11-point grid".into())
}

/// Criterion 2: the classifier fires exactly when |z|^2 eta (1 - eta) > 0,
/// with certificate magnitude |z| sqrt(eta (1 - eta)).
pub fn criterion_2_corollary_classifier() -> CriterionResult {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut check = Check::new();
    for &eta in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        for &z_mag in &[0.0, 0.5, 1.0] {
            for (beta1, beta2) in beta_pairs() {
                let params = TwoQubitFamilyParams {
                    eta,
                    z: Complex64::new(z_mag, 0.0),
                    beta1,
                    beta2,
                };
                let rho = two_qubit_family(&params).expect("parameters in range");
                let verdict = classify(&rho, &NonDegeneratePvm::computational(2), &tol)
                    .expect("all outcomes pure on this family");
                let steerable_expected = z_mag * z_mag * eta * (1.0 - eta) > 0.0;
                match verdict {
                    SteerabilityVerdict::Steerable { magnitude, .. } => {
                        check.require(steerable_expected, || {
                            format!("eta={eta}, z={z_mag}: unexpected steerable verdict")
                        });
                        let want = z_mag * (eta * (1.0 - eta)).sqrt();
                        check.require((magnitude - want).abs() <= 1e-9, || {
                            format!(
                                "eta={eta}, z={z_mag}: certificate {magnitude} differs from {want}"
                            )
                        });
                    }
                    SteerabilityVerdict::SeparableExplicit { .. } => {
                        check.require(!steerable_expected, || {
                            format!("eta={eta}, z={z_mag}: unexpected separable verdict")
                        });
                    }
                    SteerabilityVerdict::Undetermined { ref reason } => {
                        check.require(false, || {
                            format!("eta={eta}, z={z_mag}: undetermined ({reason:?})")
                        });
                    }
                }
            }
        }
    }
    check.require(started.elapsed() < Duration::from_secs(1), || {
        format!("runtime {:?} exceeded 1s", started.elapsed())
    });
    check.finish(2, "corollary-classifier", started, "5x3x2 parameter grid".into())
}

/// Criterion 3: the ancilla overlap recovered from the purified
/// decomposition equals z, and the decomposition rebuilds rho.
pub fn criterion_3_gram_recovery() -> CriterionResult {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut check = Check::new();
    let z_values = [
        Complex64::ZERO,
        Complex64::new(0.5, 0.0),
        Complex64::new(0.3, 0.4),
    ];
    for &eta in &[0.25, 0.5, 0.75] {
        for &z in &z_values {
            for (beta1, beta2) in beta_pairs() {
                let params = TwoQubitFamilyParams { eta, z, beta1, beta2 };
                let rho = two_qubit_family(&params).expect("parameters in range");
                let decomp =
                    purified_decomposition(&rho, &NonDegeneratePvm::computational(2), &tol)
                        .expect("all outcomes pure on this family");
                check.require(decomp.len() == 2, || {
                    format!("eta={eta}, z={z}: expected 2 contributing terms")
                });
                let recovered = decomp.ancilla_gram.get(0, 1);
                check.require((recovered - z).norm() <= 1e-9, || {
                    format!("eta={eta}, z={z}: recovered overlap {recovered} differs from z")
                });
                let error = decomp.reconstruct().sub(rho.matrix()).frobenius_norm();
                check.require(error <= 1e-8, || {
                    format!("eta={eta}, z={z}: reconstruction error {error:.3e}")
                });
            }
        }
    }
    check.finish(3, "gram-recovery", started, "overlap and reconstruction on 18 fixtures".into())
}

/// Criterion 4: the kernel construction dominates a 1e5-sample random
/// search for every seeded state, and its optimal effect is a projector.
pub fn criterion_4_kernel_optimality(seed: u64) -> CriterionResult {
    const STATES: usize = 50;
    const SAMPLES: usize = 100_000;
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut check = Check::new();
    let mut rng = seeded_rng(seed.wrapping_add(4));
    let dims = [(2usize, 2usize), (2, 3), (3, 2), (3, 3)];

    for index in 0..STATES {
        // alternate random pure states (full Schmidt rank, with margin) and
        // random family states; both constructions make the target reachable
        let (rho, beta) = if index % 5 < 3 {
            let (d_a, d_b) = dims[index % dims.len()];
            let fact = DimensionFactorization::bipartite(d_a, d_b).expect("small dims");
            loop {
                let psi: PureState =
                    crate::random::random_pure_state(fact.clone(), &mut rng).expect("valid");
                // the smaller side carries the full Schmidt spectrum
                let keep = if d_a <= d_b { [0usize] } else { [1usize] };
                let reduced = psi.reduced(&keep).expect("bipartite");
                let schmidt_floor = crate::linalg::eigh(reduced.matrix())
                    .expect("reduced state is Hermitian")
                    .eigenvalues
                    .last()
                    .copied()
                    .unwrap_or(0.0);
                if schmidt_floor < 0.02 {
                    continue;
                }
                let alpha0 = random_unit_vector(d_a, &mut rng);
                let steered = psi.vector().contract_first(&alpha0, d_b);
                if steered.norm() > 0.05 {
                    let beta = steered.normalized().expect("norm above floor");
                    break (psi.to_density(), beta);
                }
            }
        } else {
            loop {
                let beta1 = random_unit_vector(2, &mut rng);
                let beta2 = random_unit_vector(2, &mut rng);
                if beta1.inner(&beta2).norm() > 0.9 {
                    continue;
                }
                let eta = 0.1 + 0.8 * rng.random::<f64>();
                let phase = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                let z = Complex64::from_polar(0.9 * rng.random::<f64>(), phase);
                let params = TwoQubitFamilyParams { eta, z, beta1: beta1.clone(), beta2 };
                let rho = two_qubit_family(&params).expect("parameters in range");
                break (rho, beta1);
            }
        };

        let result = max_pure_steering(&rho, &beta, &tol).expect("target is normalised");
        check.require(result.p_max > tol.prob_floor, || {
            format!("state {index}: constructed target unreachable (p = {})", result.p_max)
        });
        let effect = result.effect.matrix();
        let idempotency = effect.matmul(effect).sub(effect).frobenius_norm();
        check.require(idempotency <= 1e-9, || {
            format!("state {index}: optimal effect not a projector ({idempotency:.3e})")
        });
        let oracle = random_search_best_probability(&rho, &beta, SAMPLES, &mut rng);
        check.require(result.p_max >= oracle - 1e-4, || {
            format!("state {index}: kernel p {} below oracle {oracle}", result.p_max)
        });
    }
    check.require(started.elapsed() < Duration::from_secs(60), || {
        format!("runtime {:?} exceeded 60s", started.elapsed())
    });
    check.finish(
        4,
        "kernel-optimality",
        started,
        format!("{STATES} states x {SAMPLES} random effects"),
    )
}

/// Criterion 5: the pure-steered subspace of the qutrit family is the
/// |+1>, |-1> plane, and random members of it are reachable.
pub fn criterion_5_subspace(seed: u64) -> CriterionResult {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut check = Check::new();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let extra = ComplexVector::new(vec![
        Complex64::new(s, 0.0),
        Complex64::ZERO,
        Complex64::new(-s, 0.0),
    ])
    .expect("static vector");
    let mut reference = ComplexVector::basis(3, 0).projector();
    reference = reference.add(&ComplexVector::basis(3, 2).projector());

    for &eta in &[0.25, 0.5, 0.75] {
        for &z_mag in &[0.0, 0.5] {
            let rho = qutrit_family(&QutritFamilyParams {
                eta,
                z: Complex64::new(z_mag, 0.0),
            })
            .expect("parameters in range");
            let family = family_outcomes(&rho, &NonDegeneratePvm::computational(3), &tol);
            match pure_steered_subspace(&rho, &family, &extra, seed.wrapping_add(5), &tol) {
                Ok(report) => {
                    check.require(report.basis.len() == 2, || {
                        format!("eta={eta}, z={z_mag}: span dimension {}", report.basis.len())
                    });
                    let mut projector = ComplexMatrix::zeros(3);
                    for b in &report.basis {
                        projector = projector.add(&b.projector());
                    }
                    let angle = projector.sub(&reference).frobenius_norm();
                    check.require(angle <= 1e-8, || {
                        format!("eta={eta}, z={z_mag}: span off the |+-1> plane by {angle:.3e}")
                    });
                    check.require(report.samples_checked == 20, || {
                        format!("eta={eta}, z={z_mag}: {} samples", report.samples_checked)
                    });
                    check.require(report.min_sample_probability > 1e-10, || {
                        format!(
                            "eta={eta}, z={z_mag}: sample probability {:.3e}",
                            report.min_sample_probability
                        )
                    });
                }
                Err(e) => check.require(false, || format!("eta={eta}, z={z_mag}: {e}")),
            }
        }
    }
    check.finish(5, "span-theorem-subspace", started, "6 fixtures x 20 sampled members".into())
}

/// Criterion 6: whenever the orthogonal-complete premises hold on
/// randomised instances, the supplied effects come out pairwise orthogonal.
pub fn criterion_6_effect_orthogonality(seed: u64) -> CriterionResult {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut check = Check::new();
    let mut rng = seeded_rng(seed.wrapping_add(6));
    let mut verified = 0usize;
    let mut skipped = 0usize;

    for round in 0..40 {
        let beta1 = random_unit_vector(2, &mut rng);
        // exact orthogonal complement keeps the steered states orthogonal
        let beta2 = ComplexVector::new(vec![-beta1.get(1).conj(), beta1.get(0).conj()])
            .expect("finite entries");
        let eta = 0.05 + 0.9 * rng.random::<f64>();
        let phase = 2.0 * std::f64::consts::PI * rng.random::<f64>();
        let z = Complex64::from_polar(rng.random::<f64>(), phase);
        let params = TwoQubitFamilyParams { eta, z, beta1, beta2 };
        let rho = two_qubit_family(&params).expect("parameters in range");

        let u = crate::random::haar_unitary(2, &mut rng);
        let rotated = crate::measurements::pvm_from_unitary(&NonDegeneratePvm::computational(2), &u)
            .expect("haar unitary");
        let lifted = crate::linalg::kron(&u, &ComplexMatrix::identity(2)).expect("small dims");
        let rotated_rho = DensityOperator::new(
            lifted.matmul(rho.matrix()).matmul(&lifted.adjoint()).hermitized(),
            rho.fact().clone(),
        )
        .expect("unitary conjugation preserves validity");

        // every third round perturbs the measurement so the premises fail;
        // those instances must be skipped, not counted as counterexamples
        let pvm = if round % 3 == 2 {
            random_pvm(2, &mut rng)
        } else {
            rotated
        };
        let outcomes = family_outcomes(&rotated_rho, &pvm, &tol);
        match orthogonal_complete_check(&outcomes, &tol) {
            Ok(FamilyCheck::Complete { .. }) => verified += 1,
            Ok(_) => skipped += 1,
            Err(crate::error::SteerError::PremiseViolation { .. }) => {
                skipped += 1;
            }
            Err(e) => check.require(false, || format!("round {round}: {e}")),
        }
    }
    check.require(verified >= 20, || {
        format!("only {verified} instances reached the conclusion check")
    });
    check.finish(
        6,
        "effect-orthogonality",
        started,
        format!("{verified} families verified, {skipped} off-premise instances skipped"),
    )
}

/// Criterion 7: the deterministic LHS model reproduces the assemblage of 5
/// seeded PVMs on the separable family, and the witness stays sound.
pub fn criterion_7_lhs_consistency(seed: u64) -> CriterionResult {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut check = Check::new();
    let mut rng = seeded_rng(seed.wrapping_add(7));

    for &eta in &[0.3, 0.6] {
        for (beta1, beta2) in beta_pairs() {
            let params =
                TwoQubitFamilyParams { eta, z: Complex64::ZERO, beta1, beta2 };
            let rho = two_qubit_family(&params).expect("parameters in range");
            let mut pvms = vec![NonDegeneratePvm::computational(2)];
            for _ in 0..4 {
                pvms.push(random_pvm(2, &mut rng));
            }
            let target = assemblage_of_pvms(&rho, &pvms, &tol).expect("valid assemblage");
            let product =
                product_ensemble_for_separable_family(eta, &params.beta1, &params.beta2);
            let (ens, resp) = deterministic_lhs_for_product_ensemble(&product, &pvms)
                .expect("model within cap");
            match lhs_explains(&ens, &resp, &target, 1e-10, &tol) {
                Ok(explanation) => {
                    check.require(explanation.explains, || {
                        format!(
                            "eta={eta}: model misses the assemblage by {:.3e}",
                            explanation.max_deviation
                        )
                    });
                    check.require(explanation.max_deviation < 1e-10, || {
                        format!("eta={eta}: deviation {:.3e}", explanation.max_deviation)
                    });
                }
                Err(e) => check.require(false, || format!("eta={eta}: {e}")),
            }
            let report = pure_probability_witness(&target, &tol);
            check.require(report.total <= 1.0 + 1e-8, || {
                format!("eta={eta}: witness total {} on an explainable assemblage", report.total)
            });
            check.require(!report.steerable, || {
                format!("eta={eta}: witness fired on an explainable assemblage")
            });
        }
    }
    check.finish(7, "lhs-consistency", started, "4 fixtures x 5 seeded PVMs, 64 hidden labels".into())
}

/// Criterion 8: for the eta = 1/2, z = 0 qutrit state the witness certifies
/// steerability while the inequality stays silent.
pub fn criterion_8_witness_completeness() -> CriterionResult {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut check = Check::new();
    let eta = 0.5;
    let rho =
        qutrit_family(&QutritFamilyParams { eta, z: Complex64::ZERO }).expect("parameters in range");

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let e0 = ComplexVector::basis(3, 0);
    let e1 = ComplexVector::basis(3, 1);
    let e2 = ComplexVector::basis(3, 2);
    let real_rotated = NonDegeneratePvm::new(vec![
        e0.add(&e2).scale(Complex64::new(s, 0.0)),
        e0.sub(&e2).scale(Complex64::new(s, 0.0)),
        e1.clone(),
    ])
    .expect("orthonormal");
    let imag_rotated = NonDegeneratePvm::new(vec![
        e0.add(&e2.scale(Complex64::new(0.0, 1.0))).scale(Complex64::new(s, 0.0)),
        e0.add(&e2.scale(Complex64::new(0.0, -1.0))).scale(Complex64::new(s, 0.0)),
        e1,
    ])
    .expect("orthonormal");
    let pvms = vec![NonDegeneratePvm::computational(3), real_rotated, imag_rotated];

    let target = assemblage_of_pvms(&rho, &pvms, &tol).expect("valid assemblage");
    let report = pure_probability_witness(&target, &tol);
    check.require(report.steerable, || "witness failed to certify steerability".into());
    check.require(report.total > 1.0 + 1e-8, || format!("total {} not above 1", report.total));
    let want_total = 1.0 + 2.0 * eta;
    check.require((report.total - want_total).abs() <= 1e-9, || {
        format!("total {} differs from {want_total}", report.total)
    });

    let inequality = evaluate_inequality(&rho).expect("two-qutrit state");
    check.require(!inequality.violated, || "inequality unexpectedly violated".into());
    let want_rhs = (50.0 - 41.0 * eta) / 16.0;
    check.require((inequality.rhs - want_rhs).abs() <= 1e-9, || {
        format!("rhs {} differs from {want_rhs}", inequality.rhs)
    });
    check.finish(
        8,
        "witness-completeness",
        started,
        format!("witness total {:.3} > 1 while inequality is silent", report.total),
    )
}

/// Criterion 9: the classifier agrees with the partial-transpose oracle on
/// the whole criterion-2 grid.
pub fn criterion_9_ppt_cross_check() -> CriterionResult {
    let started = Instant::now();
    let tol = Tolerances::default();
    let mut check = Check::new();
    for &eta in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        for &z_mag in &[0.0, 0.5, 1.0] {
            for (beta1, beta2) in beta_pairs() {
                let params = TwoQubitFamilyParams {
                    eta,
                    z: Complex64::new(z_mag, 0.0),
                    beta1,
                    beta2,
                };
                let rho = two_qubit_family(&params).expect("parameters in range");
                let verdict = classify(&rho, &NonDegeneratePvm::computational(2), &tol)
                    .expect("all outcomes pure on this family");
                let separable_by_ppt = ppt_separable(&rho);
                match verdict {
                    SteerabilityVerdict::Steerable { .. } => {
                        check.require(!separable_by_ppt, || {
                            format!("eta={eta}, z={z_mag}: steerable but PPT")
                        });
                    }
                    SteerabilityVerdict::SeparableExplicit { .. } => {
                        check.require(separable_by_ppt, || {
                            format!("eta={eta}, z={z_mag}: separable but NPT")
                        });
                    }
                    SteerabilityVerdict::Undetermined { ref reason } => {
                        check.require(false, || {
                            format!("eta={eta}, z={z_mag}: undetermined ({reason:?})")
                        });
                    }
                }
            }
        }
    }
    check.finish(9, "ppt-cross-check", started, "classifier matches PPT on 30 grid points".into())
}

/// Runs every criterion with the given seed for the randomised ones.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_1_inequality_reproduction(),
        criterion_2_corollary_classifier(),
        criterion_3_gram_recovery(),
        criterion_4_kernel_optimality(seed),
        criterion_5_subspace(seed),
        criterion_6_effect_orthogonality(seed),
        criterion_7_lhs_consistency(seed),
        criterion_8_witness_completeness(),
        criterion_9_ppt_cross_check(),
    ]
}
