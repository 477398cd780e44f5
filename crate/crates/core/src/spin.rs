//! Spin-1 operator algebra and the two-qutrit steering inequality
//! |<S^{s_A} (x) S^{s_B}>|^2 > <((S^x)^2 + (S^y)^2 - 7/16 I) (x) ((S^x)^2 + (S^y)^2)>,
//! with the raising/lowering signs s_A, s_B chosen independently to maximise
//! the left-hand side. A true inequality witnesses steerability; a false one
//! certifies nothing.

use num_complex::Complex64;

use crate::error::{Result, SteerError};
use crate::linalg::{kron, ComplexMatrix};
use crate::states::DensityOperator;

/// The spin-1 operators in the basis |+1>, |0>, |-1>.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
    pub s_plus: ComplexMatrix,
    pub s_minus: ComplexMatrix,
}

/// Builds the spin-1 representation: S^z = diag(1, 0, -1), the ladder
/// operators carry sqrt(2) amplitudes, and S^{x,y} = (S^+ +- S^-)/2(i).
pub fn spin1_operators() -> SpinOperators {
    let rt2 = Complex64::new(std::f64::consts::SQRT_2, 0.0);
    let mut s_plus = ComplexMatrix::zeros(3);
    s_plus.set(0, 1, rt2); // |+1><0|
    s_plus.set(1, 2, rt2); // |0><-1|
    let s_minus = s_plus.adjoint();
    let sx = s_plus.add(&s_minus).scale(Complex64::new(0.5, 0.0));
    let sy = s_plus.sub(&s_minus).scale(Complex64::new(0.0, -0.5));
    let sz = ComplexMatrix::diag_real(&[1.0, 0.0, -1.0]);
    SpinOperators { sx, sy, sz, s_plus, s_minus }
}

/// Ladder sign choice for one side of the inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderSign {
    Plus,
    Minus,
}

impl LadderSign {
    pub fn label(self) -> &'static str {
        match self {
            LadderSign::Plus => "plus",
            LadderSign::Minus => "minus",
        }
    }
}

/// Evaluation of the steering inequality on a two-qutrit state.
#[derive(Debug, Clone, Copy)]
pub struct InequalityResult {
    /// max over sign choices of |<S^{s_A} (x) S^{s_B}>|^2.
    pub lhs: f64,
    /// <((S^x)^2 + (S^y)^2 - 7/16 I) (x) ((S^x)^2 + (S^y)^2)>.
    pub rhs: f64,
    pub violated: bool,
    /// The sign choice achieving the maximal left-hand side.
    pub sign_choice: (LadderSign, LadderSign),
}

/// Evaluates the inequality, optimising over the four ladder sign choices.
pub fn evaluate_inequality(rho: &DensityOperator) -> Result<InequalityResult> {
    if rho.dim() != 9 || rho.fact().dims() != [3, 3] {
        return Err(SteerError::DimensionMismatch { expected: 9, got: rho.dim() });
    }
    let ops = spin1_operators();
    let transverse = ops.sx.matmul(&ops.sx).add(&ops.sy.matmul(&ops.sy));
    let shifted = transverse.sub(&ComplexMatrix::identity(3).scale_real(7.0 / 16.0));
    let rhs_observable = kron(&shifted, &transverse)?;
    let rhs = rho.matrix().matmul(&rhs_observable).trace().re;

    let mut lhs = f64::NEG_INFINITY;
    let mut sign_choice = (LadderSign::Plus, LadderSign::Plus);
    for (sa, op_a) in [(LadderSign::Plus, &ops.s_plus), (LadderSign::Minus, &ops.s_minus)] {
        for (sb, op_b) in [(LadderSign::Plus, &ops.s_plus), (LadderSign::Minus, &ops.s_minus)] {
            let observable = kron(op_a, op_b)?;
            let value = rho.matrix().matmul(&observable).trace().norm_sqr();
            if value > lhs {
                lhs = value;
                sign_choice = (sa, sb);
            }
        }
    }
    Ok(InequalityResult { lhs, rhs, violated: lhs > rhs + 1e-12, sign_choice })
}
