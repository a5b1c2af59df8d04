use serde::Serialize;

use super::build::{build_operator, MatrixOrderOperator, Realization};
use super::compose::{compose_apply, compose_projector_expansion, shift_by_integer};
use super::values::MatrixExprFunction;
use super::OperatorError;
use crate::linalg::CMatrix;
use crate::oracle::{fd_lambda_derivative, OracleConfig, SampledFunction};
use crate::symbolic::{differint_expr, lambda_derivative, Expression, SYMBOLIC_EQ_TOL};

/// Grid residual bound for the inverse pair.
pub const INVERSE_PAIR_TOL: f64 = 1e-8;
/// Grid residual bound for the transpose law.
pub const TRANSPOSE_TOL: f64 = 1e-9;
/// Absolute bound between closed-form and finite-difference order-derivatives.
pub const JORDAN_FD_TOL: f64 = 1e-4;
/// Grid residual bound for the double-sum expansion of a noncommuting composition.
pub const EXPANSION_TOL: f64 = 1e-10;
/// Step in the order for finite differences.
pub const FD_ORDER_STEP: f64 = 1e-3;
/// Relative tolerance for "real symmetric".
const SYMMETRY_TOL: f64 = 1e-12;

/// Offsets `0.5, 0.75, …, 2.0` from the base point.
pub fn standard_grid(base_point: f64) -> Vec<f64> {
    (0..7).map(|i| base_point + 0.5 + 0.25 * i as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Canonical symbolic equality of term lists.
    Symbolic,
    /// Pointwise values on a grid.
    Grid,
}

/// Outcome of one identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LawCheck {
    pub comparison: Comparison,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl LawCheck {
    pub fn new(comparison: Comparison, residual: f64, tolerance: f64) -> Self {
        Self {
            comparison,
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }

    pub fn symbolic(
        lhs: &MatrixExprFunction,
        rhs: &MatrixExprFunction,
    ) -> Result<Self, OperatorError> {
        Ok(Self::new(
            Comparison::Symbolic,
            lhs.symbolic_residual(rhs)?,
            SYMBOLIC_EQ_TOL,
        ))
    }

    pub fn grid(
        lhs: &MatrixExprFunction,
        rhs: &MatrixExprFunction,
        grid: &[f64],
        tolerance: f64,
    ) -> Result<Self, OperatorError> {
        Ok(Self::new(
            Comparison::Grid,
            lhs.grid_residual(rhs, grid)?,
            tolerance,
        ))
    }
}

fn is_real_symmetric(m: &CMatrix) -> bool {
    let n = m.n();
    let tol = SYMMETRY_TOL * m.frobenius_norm().max(1.0);
    (0..n)
        .all(|i| (0..n).all(|j| m[(i, j)].im.abs() <= tol && (m[(i, j)] - m[(j, i)]).norm() <= tol))
}

/// `(D^A D^B f)ᵀ = D^B D^A f` for real symmetric `A`, `B`, on the grid.
pub fn transpose_check(
    op_a: &MatrixOrderOperator,
    op_b: &MatrixOrderOperator,
    f: &Expression,
    grid: &[f64],
) -> Result<LawCheck, OperatorError> {
    for (name, op) in [("A", op_a), ("B", op_b)] {
        if !is_real_symmetric(op.matrix()) {
            return Err(OperatorError::Precondition(format!(
                "{name} is not real symmetric"
            )));
        }
    }
    let lhs = compose_apply(op_a, op_b, f)?.transpose();
    let rhs = compose_apply(op_b, op_a, f)?;
    LawCheck::grid(&lhs, &rhs, grid, TRANSPOSE_TOL)
}

/// `D^{λ_1} D^{λ_2} ⋯ D^{λ_n} f`, eigenvalues with multiplicity in the
/// fixed (real, imaginary) order, `λ_n` applied first.
pub fn determinant_sequential(
    op: &MatrixOrderOperator,
    f: &Expression,
) -> Result<Expression, OperatorError> {
    if let Realization::Jordan(_) = op.realization() {
        return Err(OperatorError::NotDiagonalizable);
    }
    let mut acc = f.clone();
    for l in op.eigenvalues().into_iter().rev() {
        acc = differint_expr(&acc, l)?;
    }
    Ok(acc)
}

/// `det(D^A) f = D^{Tr A} f` when every eigenvalue has `Re λ ≤ 0`.
pub fn trace_law_check(
    op: &MatrixOrderOperator,
    f: &Expression,
) -> Result<LawCheck, OperatorError> {
    if let Some(l) = op.eigenvalues().into_iter().find(|l| l.re > 0.0) {
        return Err(OperatorError::Precondition(format!(
            "trace law needs Re(λ) <= 0 for every eigenvalue, found {l}"
        )));
    }
    let lhs = determinant_sequential(op, f)?;
    let rhs = differint_expr(f, op.matrix().trace())?;
    Ok(LawCheck::new(
        Comparison::Symbolic,
        lhs.symbolic_residual(&rhs)?,
        SYMBOLIC_EQ_TOL,
    ))
}

/// `D^A D^{−A} f = f·I` on the grid.
pub fn inverse_pair_check(
    op: &MatrixOrderOperator,
    f: &Expression,
    grid: &[f64],
) -> Result<LawCheck, OperatorError> {
    let neg = build_operator(&op.matrix().scale((-1.0).into()), op.base_point())?;
    let lhs = compose_apply(op, &neg, f)?;
    let rhs = MatrixExprFunction::scaled(&CMatrix::identity(op.n()), f);
    LawCheck::grid(&lhs, &rhs, grid, INVERSE_PAIR_TOL)
}

/// `D^A D^B f = D^{A+B} f`, compared symbolically. Holds for commuting
/// `A`, `B` with nonpositive real spectra; reported honestly otherwise.
pub fn additivity_check(
    op_a: &MatrixOrderOperator,
    op_b: &MatrixOrderOperator,
    f: &Expression,
) -> Result<LawCheck, OperatorError> {
    let lhs = compose_apply(op_a, op_b, f)?;
    let sum = build_operator(&(op_a.matrix() + op_b.matrix()), op_a.base_point())?;
    LawCheck::symbolic(&lhs, &sum.apply_scalar(f)?)
}

/// The fused projector double sum `Σ Σ G_i H_j D^{λ_i+ρ_j} f` against the
/// sequential composition, on the grid.
pub fn expansion_check(
    op_a: &MatrixOrderOperator,
    op_b: &MatrixOrderOperator,
    f: &Expression,
    grid: &[f64],
) -> Result<LawCheck, OperatorError> {
    let lhs = compose_projector_expansion(op_a, op_b, f, true)?;
    LawCheck::grid(&lhs, &compose_apply(op_a, op_b, f)?, grid, EXPANSION_TOL)
}

/// The two paths of the integer shift, compared symbolically.
pub fn shift_check(
    op: &MatrixOrderOperator,
    m: usize,
    f: &Expression,
) -> Result<LawCheck, OperatorError> {
    let (lhs, rhs) = shift_by_integer(op, m, f)?;
    LawCheck::symbolic(&lhs, &rhs)
}

/// Closed-form `∂_λ^k D^λ f` at each Jordan segment eigenvalue against
/// central differences of the Grünwald–Letnikov oracle, `k = 1, 2` as far
/// as the segment size allows. Residual is the largest absolute gap.
pub fn jordan_fd_check(
    op: &MatrixOrderOperator,
    f: &Expression,
    grid: &[f64],
    cfg: &OracleConfig,
) -> Result<LawCheck, OperatorError> {
    let jd = match op.realization() {
        Realization::Jordan(jd) => jd,
        Realization::Spectral(_) => {
            return Err(OperatorError::Precondition(
                "operator has no Jordan segment of size >= 2".into(),
            ))
        }
    };
    let x_max = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sampled = SampledFunction::from_expression(f, x_max)?;
    let mut worst: f64 = 0.0;
    for seg in jd.segments.iter().filter(|s| s.size >= 2) {
        for k in 1..seg.size.min(3) {
            let closed = lambda_derivative(f, seg.eigenvalue, k)?;
            for &x in grid {
                let fd = fd_lambda_derivative(&sampled, x, seg.eigenvalue, k, FD_ORDER_STEP, cfg)?;
                worst = worst.max((closed.evaluate(x)? - fd).norm());
            }
        }
    }
    Ok(LawCheck::new(Comparison::Grid, worst, JORDAN_FD_TOL))
}
