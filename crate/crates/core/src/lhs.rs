//! Local-hidden-state machinery: simulated assemblages from an ensemble and
//! a response function, the forcing of pure steered states into any LHS
//! ensemble, and the pure-probability steerability witness.
//!
//! An assemblage is unsteerable when some ensemble {P(xi), sigma_xi} and
//! response function P(a|x, xi) reproduce every conditional as
//! A'_{a|x} = sum_xi P(a|x, xi) P(xi) sigma_xi. Pure conditional states pin
//! such models down: a pure steered state must itself appear in the
//! ensemble, carrying at least its steering probability.

use crate::error::{Result, SteerError};
use crate::linalg::{ComplexMatrix, ComplexVector, DimensionFactorization};
use crate::measurements::NonDegeneratePvm;
use crate::states::DensityOperator;
use crate::steering::{Assemblage, SteeredOutcome};
use crate::tol::Tolerances;

/// A finite ensemble of hidden states {P(xi), sigma_xi}.
#[derive(Debug, Clone)]
pub struct LhsEnsemble {
    entries: Vec<(f64, DensityOperator)>,
}

impl LhsEnsemble {
    pub fn new(entries: Vec<(f64, DensityOperator)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(SteerError::InvalidParameter {
                name: "entries",
                detail: "ensemble must not be empty".into(),
            });
        }
        let dim = entries[0].1.dim();
        let mut total = 0.0;
        for (weight, sigma) in &entries {
            if !weight.is_finite() || *weight < 0.0 {
                return Err(SteerError::InvalidParameter {
                    name: "weight",
                    detail: format!("weights must be finite and non-negative, got {weight}"),
                });
            }
            if sigma.dim() != dim {
                return Err(SteerError::DimensionMismatch { expected: dim, got: sigma.dim() });
            }
            total += weight;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(SteerError::EnsembleWeights { total });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, DensityOperator)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }
}

/// Response probabilities P(a|x, xi), stored as table\[x\]\[xi\]\[a\].
#[derive(Debug, Clone)]
pub struct ResponseFunction {
    table: Vec<Vec<Vec<f64>>>,
}

impl ResponseFunction {
    pub fn new(table: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if table.is_empty() {
            return Err(SteerError::ResponseShape { detail: "no measurements".into() });
        }
        let n_xi = table[0].len();
        for (x, per_meas) in table.iter().enumerate() {
            if per_meas.len() != n_xi {
                return Err(SteerError::ResponseShape {
                    detail: format!(
                        "measurement {x} has {} hidden labels, expected {n_xi}",
                        per_meas.len()
                    ),
                });
            }
            let n_a = per_meas.first().map(|row| row.len()).unwrap_or(0);
            for (xi, row) in per_meas.iter().enumerate() {
                if row.is_empty() {
                    return Err(SteerError::ResponseRow { x, xi, detail: "empty row".into() });
                }
                if row.len() != n_a {
                    return Err(SteerError::ResponseRow {
                        x,
                        xi,
                        detail: format!("row length {} differs from {n_a}", row.len()),
                    });
                }
                let mut sum = 0.0;
                for &p in row {
                    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                        return Err(SteerError::ResponseRow {
                            x,
                            xi,
                            detail: format!("probability {p} outside [0, 1]"),
                        });
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > 1e-9 {
                    return Err(SteerError::ResponseRow {
                        x,
                        xi,
                        detail: format!("row sums to {sum}, expected 1"),
                    });
                }
            }
        }
        Ok(Self { table })
    }

    pub fn n_measurements(&self) -> usize {
        self.table.len()
    }

    pub fn n_hidden(&self) -> usize {
        self.table[0].len()
    }

    pub fn n_outcomes(&self, x: usize) -> usize {
        self.table[x][0].len()
    }

    pub fn prob(&self, x: usize, xi: usize, a: usize) -> f64 {
        self.table[x][xi][a]
    }
}

/// The simulated assemblage A'_{a|x} = sum_xi P(a|x, xi) P(xi) sigma_xi.
/// No-signalling holds by construction.
pub fn reconstruct_assemblage(
    ens: &LhsEnsemble,
    resp: &ResponseFunction,
    tol: &Tolerances,
) -> Result<Assemblage> {
    if resp.n_hidden() != ens.len() {
        return Err(SteerError::ResponseShape {
            detail: format!(
                "response has {} hidden labels, ensemble has {}",
                resp.n_hidden(),
                ens.len()
            ),
        });
    }
    let dim = ens.dim();
    let fact = DimensionFactorization::single(dim)?;
    let mut rows = Vec::with_capacity(resp.n_measurements());
    for x in 0..resp.n_measurements() {
        let mut row = Vec::with_capacity(resp.n_outcomes(x));
        for a in 0..resp.n_outcomes(x) {
            let mut conditional = ComplexMatrix::zeros(dim);
            for (xi, (weight, sigma)) in ens.entries().iter().enumerate() {
                let coefficient = resp.prob(x, xi, a) * weight;
                if coefficient != 0.0 {
                    conditional = conditional.add(&sigma.matrix().scale_real(coefficient));
                }
            }
            row.push(SteeredOutcome::from_conditional(None, conditional, fact.clone(), tol)?);
        }
        rows.push(row);
    }
    Assemblage::from_rows(rows)
}

/// Outcome of comparing a simulated assemblage against a target.
#[derive(Debug, Clone, Copy)]
pub struct LhsExplanation {
    pub explains: bool,
    /// Largest per-conditional Frobenius deviation encountered.
    pub max_deviation: f64,
}

/// True when the model reproduces every conditional of `target` within
/// `explain_tol` in Frobenius norm.
pub fn lhs_explains(
    ens: &LhsEnsemble,
    resp: &ResponseFunction,
    target: &Assemblage,
    explain_tol: f64,
    tol: &Tolerances,
) -> Result<LhsExplanation> {
    let simulated = reconstruct_assemblage(ens, resp, tol)?;
    if simulated.rows().len() != target.rows().len() {
        return Err(SteerError::ResponseShape {
            detail: format!(
                "model simulates {} measurements, target has {}",
                simulated.rows().len(),
                target.rows().len()
            ),
        });
    }
    let mut max_deviation = 0.0f64;
    for (x, (sim_row, target_row)) in simulated.rows().iter().zip(target.rows()).enumerate() {
        if sim_row.len() != target_row.len() {
            return Err(SteerError::ResponseShape {
                detail: format!(
                    "measurement {x}: model has {} outcomes, target has {}",
                    sim_row.len(),
                    target_row.len()
                ),
            });
        }
        for (sim, tgt) in sim_row.iter().zip(target_row) {
            if sim.conditional.dim() != tgt.conditional.dim() {
                return Err(SteerError::DimensionMismatch {
                    expected: tgt.conditional.dim(),
                    got: sim.conditional.dim(),
                });
            }
            let deviation = sim.conditional.sub(&tgt.conditional).frobenius_norm();
            max_deviation = max_deviation.max(deviation);
        }
    }
    Ok(LhsExplanation { explains: max_deviation <= explain_tol, max_deviation })
}

/// A pure state that any LHS ensemble is forced to contain, together with
/// the minimum weight it must carry.
#[derive(Debug, Clone)]
pub struct ForcedPureState {
    pub vector: ComplexVector,
    pub probability: f64,
}

fn same_state(a: &ComplexVector, b: &ComplexVector) -> bool {
    (1.0 - a.inner(b).norm()).abs() <= 1e-8
}

/// Scans an assemblage for pure conditionals. Every hit forces the LHS
/// ensemble (if one exists) to contain that pure state with at least the
/// observed steering probability; occurrences of the same state are merged
/// keeping the maximum, since they all constrain the same hidden label.
pub fn lemma5_forcing(target: &Assemblage, tol: &Tolerances) -> Vec<ForcedPureState> {
    let mut forced: Vec<ForcedPureState> = Vec::new();
    for row in target.rows() {
        for outcome in row {
            if outcome.probability <= tol.prob_floor || !outcome.pure {
                continue;
            }
            let vector = outcome.pure_vector.clone().expect("pure outcome carries its ket");
            match forced.iter_mut().find(|f| same_state(&f.vector, &vector)) {
                Some(entry) => entry.probability = entry.probability.max(outcome.probability),
                None => forced.push(ForcedPureState { vector, probability: outcome.probability }),
            }
        }
    }
    forced
}

/// Report of the pure-probability steerability witness.
#[derive(Debug, Clone)]
pub struct PureWitnessReport {
    /// Distinct forced pure states with their accumulated weights.
    pub entries: Vec<ForcedPureState>,
    /// Total forced weight.
    pub total: f64,
    /// True when the total exceeds 1 + WITNESS_TOL: no LHS ensemble can
    /// carry that much weight, so the state is steerable.
    pub steerable: bool,
}

/// The pure-probability witness: distinct forced pure states would occupy
/// distinct members of any LHS ensemble, so their forced weights add. A
/// total above one rules every LHS model out.
///
/// Within a single measurement, outcomes steering to the same pure state
/// accumulate additively (their response probabilities share one
/// normalisation); across measurements the same state is forced at the
/// maximum observed weight. The witness is one-sided: a total of at most
/// one certifies nothing.
pub fn pure_probability_witness(target: &Assemblage, tol: &Tolerances) -> PureWitnessReport {
    // per measurement: same-state outcomes add
    let mut per_measurement: Vec<Vec<ForcedPureState>> = Vec::new();
    for row in target.rows() {
        let mut groups: Vec<ForcedPureState> = Vec::new();
        for outcome in row {
            if outcome.probability <= tol.prob_floor || !outcome.pure {
                continue;
            }
            let vector = outcome.pure_vector.clone().expect("pure outcome carries its ket");
            match groups.iter_mut().find(|g| same_state(&g.vector, &vector)) {
                Some(entry) => entry.probability += outcome.probability,
                None => groups.push(ForcedPureState { vector, probability: outcome.probability }),
            }
        }
        per_measurement.push(groups);
    }
    // across measurements: same state keeps the maximum forced weight
    let mut entries: Vec<ForcedPureState> = Vec::new();
    for groups in per_measurement {
        for group in groups {
            match entries.iter_mut().find(|e| same_state(&e.vector, &group.vector)) {
                Some(entry) => entry.probability = entry.probability.max(group.probability),
                None => entries.push(group),
            }
        }
    }
    let total: f64 = entries.iter().map(|e| e.probability).sum();
    PureWitnessReport { entries, total, steerable: total > 1.0 + tol.witness }
}

/// Cap on the deterministic-strategy expansion below.
const MAX_HIDDEN_LABELS: usize = 1 << 18;

/// Builds the cheating model for a state that is an explicit mixture of
/// products sum_i w_i |a_i><a_i| (x) |b_i><b_i|: the ensemble holds the
/// |b_i> weighted by w_i times the Born probability of each deterministic
/// answering strategy, and the response function is deterministic.
///
/// The simulated assemblage then reproduces the true assemblage of `pvms`
/// on the mixture exactly.
pub fn deterministic_lhs_for_product_ensemble(
    ensemble: &[(f64, ComplexVector, ComplexVector)],
    pvms: &[NonDegeneratePvm],
) -> Result<(LhsEnsemble, ResponseFunction)> {
    if ensemble.is_empty() || pvms.is_empty() {
        return Err(SteerError::InvalidParameter {
            name: "ensemble",
            detail: "need at least one product term and one measurement".into(),
        });
    }
    let d_a = pvms[0].dim();
    let n_meas = pvms.len();
    let n_strategies = d_a
        .checked_pow(n_meas as u32)
        .filter(|&n| n * ensemble.len() <= MAX_HIDDEN_LABELS)
        .ok_or(SteerError::ModelTooLarge {
            requested: usize::MAX,
            max: MAX_HIDDEN_LABELS,
        })?;

    // Born probabilities born[lambda][x][a] = |<alpha_{a|x}|a_lambda>|^2
    let mut born = Vec::with_capacity(ensemble.len());
    for (_, alice, _) in ensemble {
        let mut per_x = Vec::with_capacity(n_meas);
        for pvm in pvms {
            if pvm.dim() != d_a {
                return Err(SteerError::DimensionMismatch { expected: d_a, got: pvm.dim() });
            }
            let row: Vec<f64> =
                pvm.vectors().iter().map(|v| v.inner(alice).norm_sqr()).collect();
            per_x.push(row);
        }
        born.push(per_x);
    }

    let dim_b = ensemble[0].2.dim();
    let fact = DimensionFactorization::single(dim_b)?;
    let mut entries = Vec::with_capacity(ensemble.len() * n_strategies);
    let mut table: Vec<Vec<Vec<f64>>> = vec![Vec::new(); n_meas];

    for (lambda, (weight, _, bob)) in ensemble.iter().enumerate() {
        let sigma = DensityOperator::new(bob.projector(), fact.clone())?;
        for s in 0..n_strategies {
            // digits of s in base d_a pick the answer for each measurement
            let mut strategy = Vec::with_capacity(n_meas);
            let mut rest = s;
            for _ in 0..n_meas {
                strategy.push(rest % d_a);
                rest /= d_a;
            }
            let mut p = *weight;
            for (x, &a) in strategy.iter().enumerate() {
                p *= born[lambda][x][a];
            }
            entries.push((p, sigma.clone()));
            for (x, &a) in strategy.iter().enumerate() {
                let mut row = vec![0.0; d_a];
                row[a] = 1.0;
                table[x].push(row);
            }
        }
    }
    Ok((LhsEnsemble::new(entries)?, ResponseFunction::new(table)?))
}

/// Convenience wrapper: the product ensemble of the separable two-qubit
/// family at z = 0, {eta: |0, b1>, 1-eta: |1, b2>}.
pub fn product_ensemble_for_separable_family(
    eta: f64,
    beta1: &ComplexVector,
    beta2: &ComplexVector,
) -> Vec<(f64, ComplexVector, ComplexVector)> {
    vec![
        (eta, ComplexVector::basis(2, 0), beta1.clone()),
        (1.0 - eta, ComplexVector::basis(2, 1), beta2.clone()),
    ]
}
