//! steerkit: finite-dimensional EPR-steering analysis.
//!
//! When Alice measures her half of a shared bipartite state, Bob's half is
//! steered to a conditional state. This crate computes those conditional
//! states and concentrates on the ones that are *pure* after normalisation,
//! which pin down a surprising amount of structure of the shared state:
//!
//! * [`steering::max_pure_steering`]: the maximal probability of steering
//!   Bob to a given pure target, through a kernel construction that always
//!   realises the optimum with a projective effect;
//! * [`steering::purified_decomposition`]: the coefficients, product kets
//!   and ancilla Gram matrix of the purification exposed by a projective
//!   measurement with all-pure steered states;
//! * [`steering::orthogonal_complete_check`] and
//!   [`steering::pure_steered_subspace`]: orthogonal families with total
//!   probability one, and the subspaces of pure steered states they generate;
//! * [`steering::classify`]: the steerable-or-separable dichotomy with an
//!   explicit certificate either way;
//! * [`lhs`]: local-hidden-state models, the forcing of pure steered
//!   states into any such model, and the pure-probability witness;
//! * [`spin`]: the spin-1 steering inequality on two qutrits.
//!
//! Everything is dense, double precision and desk scale (dimensions up to
//! 64). Values are immutable after construction and all operations are pure
//! functions, so the whole API is safe to call concurrently.
//!
//! ```
//! use num_complex::Complex64;
//! use steerkit::measurements::NonDegeneratePvm;
//! use steerkit::states::{two_qubit_family, TwoQubitFamilyParams};
//! use steerkit::steering::{classify, SteerabilityVerdict};
//! use steerkit::tol::Tolerances;
//!
//! let rho = two_qubit_family(&TwoQubitFamilyParams::computational(
//!     0.5,
//!     Complex64::new(0.8, 0.0),
//! ))
//! .unwrap();
//! let verdict = classify(&rho, &NonDegeneratePvm::computational(2), &Tolerances::default())
//!     .unwrap();
//! assert!(matches!(verdict, SteerabilityVerdict::Steerable { .. }));
//! ```

pub mod error;
pub mod lhs;
pub mod linalg;
pub mod measurements;
pub mod random;
pub mod schema;
pub mod selftest;
pub mod spin;
pub mod states;
pub mod steering;
pub mod tol;

pub use error::{Result, SteerError};
pub use linalg::{ComplexMatrix, ComplexVector, DimensionFactorization};
pub use measurements::{Effect, NonDegeneratePvm, Povm};
pub use states::{DensityOperator, PureState};
pub use steering::{Assemblage, SteerabilityVerdict, SteeredOutcome};
pub use tol::Tolerances;
