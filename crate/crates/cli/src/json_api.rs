//! Request and report documents for the `analyze` subcommand, plus the
//! dispatch onto the library analyses.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use steerkit::error::{Result, SteerError};
use steerkit::linalg::ComplexVector;
use steerkit::measurements::{Effect, NonDegeneratePvm, Povm};
use steerkit::random::{random_product_density, random_pure_state, seeded_rng};
use steerkit::schema::{
    self, JsonComplex, JsonMatrix, JsonVector, PovmDoc, PvmDoc, StateDoc, SCHEMA_VERSION,
};
use steerkit::spin::evaluate_inequality;
use steerkit::states::{
    qutrit_family, two_qubit_family, DensityOperator, QutritFamilyParams, TwoQubitFamilyParams,
};
use steerkit::steering::{
    assemblage, classify, conditional_state, max_pure_steering, pure_steered_subspace,
    purified_decomposition, SteerabilityVerdict, SteeredOutcome, UndeterminedReason,
};
use steerkit::lhs::pure_probability_witness;
use steerkit::tol::Tolerances;
use steerkit::DimensionFactorization;

/// Which analysis to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalysisKind {
    Conditional,
    Assemblage,
    MaxPure,
    Decompose,
    Classify,
    Witness,
    Inequality,
    Subspace,
}

/// Parameters of a named fixture state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<JsonComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta1: Option<JsonVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta2: Option<JsonVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_b: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Inline state document or fixture reference.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSource {
    Fixture { fixture: FixtureSpec },
    Inline(StateDoc),
}

/// One measurement: a non-degenerate PVM (vectors) or a general POVM
/// (effect matrices).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementDoc {
    Pvm(Vec<JsonVector>),
    Povm(Vec<JsonMatrix>),
}

/// The `analyze` input document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisRequest {
    pub schema_version: u32,
    pub analysis: AnalysisKind,
    pub state: StateSource,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measurements: Vec<MeasurementDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect: Option<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<JsonVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_beta: Option<JsonVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

/// The `analyze` output document.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub toolkit_version: &'static str,
    pub request: AnalysisRequest,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub result: Value,
}

pub fn build_fixture(spec: &FixtureSpec) -> Result<DensityOperator> {
    let missing = |name: &'static str| SteerError::Schema {
        detail: format!("fixture {} requires parameter {name}", spec.name),
    };
    match spec.name.as_str() {
        "two_qubit_family" => {
            let eta = spec.eta.ok_or_else(|| missing("eta"))?;
            let z = spec.z.map_or(Complex64::ZERO, |p| Complex64::new(p[0], p[1]));
            let beta1 = match &spec.beta1 {
                Some(doc) => schema::vector_from_json(doc, "beta1")?,
                None => ComplexVector::basis(2, 0),
            };
            let beta2 = match &spec.beta2 {
                Some(doc) => schema::vector_from_json(doc, "beta2")?,
                None => ComplexVector::basis(2, 1),
            };
            two_qubit_family(&TwoQubitFamilyParams { eta, z, beta1, beta2 })
        }
        "qutrit_family" => {
            let eta = spec.eta.ok_or_else(|| missing("eta"))?;
            let z = spec.z.map_or(Complex64::ZERO, |p| Complex64::new(p[0], p[1]));
            qutrit_family(&QutritFamilyParams { eta, z })
        }
        "pure_random" => {
            let seed = spec.seed.ok_or_else(|| missing("seed"))?;
            let d_a = spec.d_a.ok_or_else(|| missing("d_a"))?;
            let d_b = spec.d_b.ok_or_else(|| missing("d_b"))?;
            let mut rng = seeded_rng(seed);
            let psi = random_pure_state(DimensionFactorization::bipartite(d_a, d_b)?, &mut rng)?;
            Ok(psi.to_density())
        }
        "product_random" => {
            let seed = spec.seed.ok_or_else(|| missing("seed"))?;
            let d_a = spec.d_a.ok_or_else(|| missing("d_a"))?;
            let d_b = spec.d_b.ok_or_else(|| missing("d_b"))?;
            let mut rng = seeded_rng(seed);
            random_product_density(d_a, d_b, &mut rng)
        }
        other => Err(SteerError::Schema { detail: format!("unknown fixture {other}") }),
    }
}

fn resolve_state(source: &StateSource) -> Result<DensityOperator> {
    match source {
        StateSource::Inline(doc) => schema::density_from_doc(doc),
        StateSource::Fixture { fixture } => build_fixture(fixture),
    }
}

fn resolve_measurements(docs: &[MeasurementDoc]) -> Result<Vec<Povm>> {
    docs.iter()
        .map(|doc| match doc {
            MeasurementDoc::Pvm(vectors) => {
                let pvm = schema::pvm_from_doc(&PvmDoc {
                    schema_version: SCHEMA_VERSION,
                    vectors: vectors.clone(),
                })?;
                Ok(pvm.to_povm())
            }
            MeasurementDoc::Povm(effects) => schema::povm_from_doc(&PovmDoc {
                schema_version: SCHEMA_VERSION,
                effects: effects.clone(),
            }),
        })
        .collect()
}

fn first_pvm(docs: &[MeasurementDoc]) -> Result<NonDegeneratePvm> {
    match docs.first() {
        Some(MeasurementDoc::Pvm(vectors)) => schema::pvm_from_doc(&PvmDoc {
            schema_version: SCHEMA_VERSION,
            vectors: vectors.clone(),
        }),
        Some(MeasurementDoc::Povm(_)) => Err(SteerError::Schema {
            detail: "this analysis needs a non-degenerate PVM, got a POVM".into(),
        }),
        None => Err(SteerError::Schema {
            detail: "this analysis needs a measurement in `measurements`".into(),
        }),
    }
}

fn outcome_to_json(outcome: &SteeredOutcome) -> Value {
    json!({
        "probability": outcome.probability,
        "pure": outcome.pure,
        "conditional": schema::matrix_to_json(&outcome.conditional),
        "steered_state": outcome
            .steered_state
            .as_ref()
            .map(|s| schema::matrix_to_json(s.matrix())),
        "pure_vector": outcome.pure_vector.as_ref().map(schema::vector_to_json),
    })
}

fn verdict_to_json(verdict: &SteerabilityVerdict) -> Value {
    match verdict {
        SteerabilityVerdict::Steerable { i, j, magnitude } => json!({
            "tag": "steerable",
            "certificate": { "i": i, "j": j, "magnitude": magnitude },
        }),
        SteerabilityVerdict::SeparableExplicit { ensemble, reconstruction_error } => json!({
            "tag": "separable_explicit",
            "certificate": {
                "ensemble": ensemble
                    .iter()
                    .map(|(p, v)| json!({
                        "probability": p,
                        "vector": schema::vector_to_json(v),
                    }))
                    .collect::<Vec<_>>(),
                "reconstruction_error": reconstruction_error,
            },
        }),
        SteerabilityVerdict::Undetermined { reason } => {
            let reason = match reason {
                UndeterminedReason::DependentSteeredStates { rank, count } => json!({
                    "kind": "dependent_steered_states", "rank": rank, "count": count,
                }),
                UndeterminedReason::GrayZone { magnitude } => json!({
                    "kind": "gray_zone", "magnitude": magnitude,
                }),
            };
            json!({ "tag": "undetermined", "reason": reason })
        }
    }
}

/// Runs the requested analysis. Schema errors and analysis errors are both
/// `SteerError`; the caller maps them onto exit codes.
pub fn run_analysis(request: &AnalysisRequest, seed: u64, tol: &Tolerances) -> Result<Value> {
    if request.schema_version != SCHEMA_VERSION {
        return Err(SteerError::Schema {
            detail: format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                request.schema_version
            ),
        });
    }
    let rho = resolve_state(&request.state)?;
    match request.analysis {
        AnalysisKind::Conditional => {
            let doc = request.effect.as_ref().ok_or_else(|| SteerError::Schema {
                detail: "analysis `conditional` needs an `effect` matrix".into(),
            })?;
            let effect = Effect::new(schema::matrix_from_json(doc, "effect")?)?;
            let outcome = conditional_state(&rho, &effect, tol)?;
            Ok(outcome_to_json(&outcome))
        }
        AnalysisKind::Assemblage => {
            let povms = resolve_measurements(&request.measurements)?;
            let asm = assemblage(&rho, &povms, tol)?;
            Ok(json!({
                "reduced_bob": schema::matrix_to_json(asm.reduced_bob()),
                "measurements": asm
                    .rows()
                    .iter()
                    .map(|row| json!({
                        "outcomes": row.iter().map(outcome_to_json).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            }))
        }
        AnalysisKind::MaxPure => {
            let doc = request.target.as_ref().ok_or_else(|| SteerError::Schema {
                detail: "analysis `max-pure` needs a `target` vector".into(),
            })?;
            let target = schema::vector_from_json(doc, "target")?;
            let result = max_pure_steering(&rho, &target, tol)?;
            Ok(json!({
                "p_max": result.p_max,
                "effect": schema::matrix_to_json(result.effect.matrix()),
                "subspace": result.subspace.iter().map(schema::vector_to_json).collect::<Vec<_>>(),
            }))
        }
        AnalysisKind::Decompose => {
            let pvm = first_pvm(&request.measurements)?;
            let decomp = purified_decomposition(&rho, &pvm, tol)?;
            let error = decomp.reconstruct().sub(rho.matrix()).frobenius_norm();
            Ok(json!({
                "coefficients": decomp
                    .coefficients
                    .iter()
                    .map(|z| [z.re, z.im])
                    .collect::<Vec<_>>(),
                "alice_vectors": decomp
                    .alice_vectors
                    .iter()
                    .map(schema::vector_to_json)
                    .collect::<Vec<_>>(),
                "bob_vectors": decomp
                    .bob_vectors
                    .iter()
                    .map(schema::vector_to_json)
                    .collect::<Vec<_>>(),
                "ancilla_gram": schema::matrix_to_json(&decomp.ancilla_gram),
                "outcome_indices": decomp.outcome_indices,
                "reconstruction_error": error,
            }))
        }
        AnalysisKind::Classify => {
            let pvm = first_pvm(&request.measurements)?;
            let verdict = classify(&rho, &pvm, tol)?;
            Ok(verdict_to_json(&verdict))
        }
        AnalysisKind::Witness => {
            let povms = resolve_measurements(&request.measurements)?;
            let asm = assemblage(&rho, &povms, tol)?;
            let report = pure_probability_witness(&asm, tol);
            Ok(json!({
                "entries": report
                    .entries
                    .iter()
                    .map(|f| json!({
                        "vector": schema::vector_to_json(&f.vector),
                        "probability": f.probability,
                    }))
                    .collect::<Vec<_>>(),
                "total": report.total,
                "steerable": report.steerable,
            }))
        }
        AnalysisKind::Inequality => {
            let result = evaluate_inequality(&rho)?;
            Ok(json!({
                "lhs": result.lhs,
                "rhs": result.rhs,
                "violated": result.violated,
                "sign_choice": [result.sign_choice.0.label(), result.sign_choice.1.label()],
            }))
        }
        AnalysisKind::Subspace => {
            let pvm = first_pvm(&request.measurements)?;
            let doc = request.extra_beta.as_ref().ok_or_else(|| SteerError::Schema {
                detail: "analysis `subspace` needs an `extra_beta` vector".into(),
            })?;
            let extra = schema::vector_from_json(doc, "extra_beta")?;
            let family: Vec<SteeredOutcome> = pvm
                .vectors()
                .iter()
                .map(|alpha| conditional_state(&rho, &Effect::from_vector(alpha)?, tol))
                .collect::<Result<_>>()?;
            let report = pure_steered_subspace(&rho, &family, &extra, seed, tol)?;
            Ok(json!({
                "basis": report.basis.iter().map(schema::vector_to_json).collect::<Vec<_>>(),
                "dimension": report.basis.len(),
                "member_indices": report.member_indices,
                "samples_checked": report.samples_checked,
                "min_sample_probability": report.min_sample_probability,
            }))
        }
    }
}
