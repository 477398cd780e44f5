//! Numerical tolerances used across the crate.
//!
//! Double precision leaves roughly six digits of headroom at the dimensions
//! this crate supports (`MAX_DIM` = 64), so the defaults below are safe for
//! every built-in fixture. The knobs that analyses accept at call sites are
//! collected in [`Tolerances`].

use serde::{Deserialize, Serialize};

/// Hard cap on operator dimension. Keeps every O(d^3) routine sub-second.
pub const MAX_DIM: usize = 64;

/// Max admissible |M_ij - conj(M_ji)| for a matrix flagged Hermitian.
pub const HERM_TOL: f64 = 1e-9;

/// Max admissible deviation of a normalised vector from unit norm.
pub const NORM_TOL: f64 = 1e-9;

/// Default kernel threshold, relative to the largest eigenvalue.
pub const KERNEL_TOL: f64 = 1e-9;

/// Steering probabilities at or below this are treated as zero.
pub const PROB_FLOOR: f64 = 1e-10;

/// Default tolerance on 1 - Tr(sigma^2) for calling a steered state pure.
pub const PURITY_TOL: f64 = 1e-8;

/// Off-diagonal magnitude above which the classifier declares steerability.
pub const OFFDIAG_TOL: f64 = 1e-8;

/// Off-diagonal magnitude below which the classifier declares separability;
/// values between this and [`OFFDIAG_TOL`] are refused as a gray zone.
pub const OFFDIAG_FLOOR: f64 = 1e-10;

/// Overlap magnitude treated as "non-zero" when selecting span members.
pub const OVERLAP_TOL: f64 = 1e-8;

/// Slack on the pure-probability witness threshold (total > 1 + WITNESS_TOL).
pub const WITNESS_TOL: f64 = 1e-8;

/// Eigenvalues above this fraction of the largest one count toward rank.
pub const RANK_TOL: f64 = 1e-10;

/// Per-call tolerance overrides for the steering analyses.
///
/// `Default::default()` reproduces the constants above; the CLI maps
/// `--tol KEY=VAL` flags onto the fields by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub herm: f64,
    pub norm: f64,
    pub kernel: f64,
    pub prob_floor: f64,
    pub purity: f64,
    pub offdiag: f64,
    pub offdiag_floor: f64,
    pub overlap: f64,
    pub witness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: HERM_TOL,
            norm: NORM_TOL,
            kernel: KERNEL_TOL,
            prob_floor: PROB_FLOOR,
            purity: PURITY_TOL,
            offdiag: OFFDIAG_TOL,
            offdiag_floor: OFFDIAG_FLOOR,
            overlap: OVERLAP_TOL,
            witness: WITNESS_TOL,
        }
    }
}

impl Tolerances {
    /// Set a field by its CLI key. Returns false for unknown keys.
    pub fn set(&mut self, key: &str, value: f64) -> bool {
        match key {
            "herm" => self.herm = value,
            "norm" => self.norm = value,
            "kernel" => self.kernel = value,
            "prob_floor" => self.prob_floor = value,
            "purity" => self.purity = value,
            "offdiag" => self.offdiag = value,
            "offdiag_floor" => self.offdiag_floor = value,
            "overlap" => self.overlap = value,
            "witness" => self.witness = value,
            _ => return false,
        }
        true
    }
}
