//! JSON interchange documents for states and measurements.
//!
//! The format is deliberately plain: complex numbers are two-element arrays
//! `[re, im]`, matrices are nested row arrays, vectors are arrays of pairs,
//! states carry `"dims": [d_A, d_B]`, and every document carries
//! `"schema_version": 1`. Serialisation round-trips bit-exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SteerError};
use crate::linalg::{ComplexMatrix, ComplexVector, DimensionFactorization};
use crate::measurements::{povm_validate, NonDegeneratePvm, Povm};
use crate::states::{DensityOperator, PureState};

pub const SCHEMA_VERSION: u32 = 1;

/// `[re, im]` pair.
pub type JsonComplex = [f64; 2];
/// Array of `[re, im]` pairs.
pub type JsonVector = Vec<JsonComplex>;
/// Nested row arrays of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

/// A density-operator document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDoc {
    pub schema_version: u32,
    pub dims: Vec<usize>,
    pub matrix: JsonMatrix,
}

/// A pure-state document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PureStateDoc {
    pub schema_version: u32,
    pub dims: Vec<usize>,
    pub vector: JsonVector,
}

/// A POVM document: an array of effect matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmDoc {
    pub schema_version: u32,
    pub effects: Vec<JsonMatrix>,
}

/// A non-degenerate PVM document: an array of orthonormal vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PvmDoc {
    pub schema_version: u32,
    pub vectors: Vec<JsonVector>,
}

fn check_version(version: u32) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(SteerError::Schema {
            detail: format!("unsupported schema_version {version}, expected {SCHEMA_VERSION}"),
        });
    }
    Ok(())
}

fn complex_from_pair(pair: JsonComplex, place: &str) -> Result<Complex64> {
    if !pair[0].is_finite() || !pair[1].is_finite() {
        return Err(SteerError::Schema {
            detail: format!("non-finite complex entry at {place}"),
        });
    }
    Ok(Complex64::new(pair[0], pair[1]))
}

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

pub fn matrix_from_json(doc: &JsonMatrix, context: &str) -> Result<ComplexMatrix> {
    let dim = doc.len();
    if dim == 0 {
        return Err(SteerError::Schema { detail: format!("{context}: empty matrix") });
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in doc.iter().enumerate() {
        if row.len() != dim {
            return Err(SteerError::Schema {
                detail: format!(
                    "{context}: matrix is not square, row {i} has {} entries, expected {dim}",
                    row.len()
                ),
            });
        }
        for (j, &pair) in row.iter().enumerate() {
            entries.push(complex_from_pair(pair, &format!("{context} row {i} column {j}"))?);
        }
    }
    ComplexMatrix::new(dim, entries).map_err(|e| SteerError::Schema {
        detail: format!("{context}: {e}"),
    })
}

pub fn vector_to_json(v: &ComplexVector) -> JsonVector {
    v.entries().iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_json(doc: &JsonVector, context: &str) -> Result<ComplexVector> {
    if doc.is_empty() {
        return Err(SteerError::Schema { detail: format!("{context}: empty vector") });
    }
    let mut entries = Vec::with_capacity(doc.len());
    for (k, &pair) in doc.iter().enumerate() {
        entries.push(complex_from_pair(pair, &format!("{context} entry {k}"))?);
    }
    ComplexVector::new(entries).map_err(|e| SteerError::Schema {
        detail: format!("{context}: {e}"),
    })
}

pub fn density_to_doc(rho: &DensityOperator) -> StateDoc {
    StateDoc {
        schema_version: SCHEMA_VERSION,
        dims: rho.fact().dims().to_vec(),
        matrix: matrix_to_json(rho.matrix()),
    }
}

pub fn density_from_doc(doc: &StateDoc) -> Result<DensityOperator> {
    check_version(doc.schema_version)?;
    let matrix = matrix_from_json(&doc.matrix, "state matrix")?;
    let fact = DimensionFactorization::new(doc.dims.clone())?;
    DensityOperator::new(matrix, fact)
}

pub fn pure_to_doc(psi: &PureState) -> PureStateDoc {
    PureStateDoc {
        schema_version: SCHEMA_VERSION,
        dims: psi.fact().dims().to_vec(),
        vector: vector_to_json(psi.vector()),
    }
}

pub fn pure_from_doc(doc: &PureStateDoc) -> Result<PureState> {
    check_version(doc.schema_version)?;
    let vector = vector_from_json(&doc.vector, "state vector")?;
    let fact = DimensionFactorization::new(doc.dims.clone())?;
    PureState::new(vector, fact)
}

pub fn povm_to_doc(povm: &Povm) -> PovmDoc {
    PovmDoc {
        schema_version: SCHEMA_VERSION,
        effects: povm.effects().iter().map(|e| matrix_to_json(e.matrix())).collect(),
    }
}

pub fn povm_from_doc(doc: &PovmDoc) -> Result<Povm> {
    check_version(doc.schema_version)?;
    let matrices: Vec<ComplexMatrix> = doc
        .effects
        .iter()
        .enumerate()
        .map(|(k, m)| matrix_from_json(m, &format!("effect {k}")))
        .collect::<Result<_>>()?;
    povm_validate(&matrices)
}

pub fn pvm_to_doc(pvm: &NonDegeneratePvm) -> PvmDoc {
    PvmDoc {
        schema_version: SCHEMA_VERSION,
        vectors: pvm.vectors().iter().map(vector_to_json).collect(),
    }
}

pub fn pvm_from_doc(doc: &PvmDoc) -> Result<NonDegeneratePvm> {
    check_version(doc.schema_version)?;
    let vectors: Vec<ComplexVector> = doc
        .vectors
        .iter()
        .enumerate()
        .map(|(k, v)| vector_from_json(v, &format!("pvm vector {k}")))
        .collect::<Result<_>>()?;
    NonDegeneratePvm::new(vectors)
}
