//! Seeded random state, vector and measurement generators.
//!
//! Everything is driven by an explicit seed through ChaCha so that fixtures
//! and search oracles reproduce bit-identically across runs and platforms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{ComplexMatrix, ComplexVector, DimensionFactorization};
use crate::measurements::NonDegeneratePvm;
use crate::states::{DensityOperator, PureState};

/// A deterministic RNG for the given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A standard complex Gaussian sample.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A Haar-random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexVector {
    loop {
        let entries: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        let v = ComplexVector::new(entries).expect("gaussian samples are finite");
        if v.norm() > 1e-6 {
            return v.normalized().expect("norm checked above");
        }
    }
}

/// A Haar-random unitary: Gram-Schmidt of a Ginibre matrix (the positive
/// diagonal of the implicit R factor makes the distribution Haar).
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let mut columns: Vec<ComplexVector> = Vec::with_capacity(dim);
        let mut ok = true;
        for _ in 0..dim {
            let raw: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
            let mut v = ComplexVector::new(raw).expect("gaussian samples are finite");
            for q in &columns {
                let overlap = q.inner(&v);
                v = v.sub(&q.scale(overlap));
            }
            for q in &columns {
                let overlap = q.inner(&v);
                v = v.sub(&q.scale(overlap));
            }
            if v.norm() < 1e-8 {
                ok = false;
                break;
            }
            columns.push(v.normalized().expect("norm checked above"));
        }
        if ok {
            return ComplexMatrix::from_fn(dim, |i, j| columns[j].get(i));
        }
    }
}

/// A Haar-random non-degenerate PVM (the columns of a Haar unitary).
pub fn random_pvm<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> NonDegeneratePvm {
    let u = haar_unitary(dim, rng);
    let vectors = (0..dim)
        .map(|j| {
            ComplexVector::new((0..dim).map(|i| u.get(i, j)).collect())
                .expect("unitary columns are finite")
        })
        .collect();
    NonDegeneratePvm::new(vectors).expect("unitary columns are orthonormal")
}

/// A Haar-random pure state on the given factorization.
pub fn random_pure_state<R: Rng + ?Sized>(
    fact: DimensionFactorization,
    rng: &mut R,
) -> Result<PureState> {
    let v = random_unit_vector(fact.total(), rng);
    PureState::new(v, fact)
}

/// A random mixed state from the Hilbert-Schmidt (Ginibre) ensemble.
pub fn random_density_operator<R: Rng + ?Sized>(
    fact: DimensionFactorization,
    rng: &mut R,
) -> Result<DensityOperator> {
    let dim = fact.total();
    loop {
        let g = ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng));
        let rho = g.matmul(&g.adjoint());
        let trace = rho.trace().re;
        if trace > 1e-9 {
            return DensityOperator::new(rho.scale_real(1.0 / trace).hermitized(), fact);
        }
    }
}

/// A random product state rho_A (x) rho_B on a bipartite factorization.
pub fn random_product_density<R: Rng + ?Sized>(
    d_a: usize,
    d_b: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let rho_a = random_density_operator(DimensionFactorization::single(d_a)?, rng)?;
    let rho_b = random_density_operator(DimensionFactorization::single(d_b)?, rng)?;
    crate::states::product_state(&rho_a, &rho_b)
}
