use super::build::{build_operator, MatrixOrderOperator};
use super::values::MatrixExprFunction;
use super::OperatorError;
use crate::linalg::{CMatrix, SpectralData};
use crate::symbolic::{differint_expr, Expression};

fn shared_base(a: &MatrixOrderOperator, b: &MatrixOrderOperator) -> Result<f64, OperatorError> {
    if a.base_point() != b.base_point() {
        return Err(OperatorError::BasePointMismatch {
            left: a.base_point(),
            right: b.base_point(),
        });
    }
    if a.n() != b.n() {
        return Err(OperatorError::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(a.base_point())
}

fn spectral_pair<'a>(
    a: &'a MatrixOrderOperator,
    b: &'a MatrixOrderOperator,
) -> Result<(&'a SpectralData, &'a SpectralData), OperatorError> {
    match (a.spectral(), b.spectral()) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(OperatorError::NotDiagonalizable),
    }
}

/// `ₐD^A ₐD^B f`: `B` applied first, then `A` acting on each column.
pub fn compose_apply(
    op_a: &MatrixOrderOperator,
    op_b: &MatrixOrderOperator,
    f: &Expression,
) -> Result<MatrixExprFunction, OperatorError> {
    let base = shared_base(op_a, op_b)?;
    let inner = op_b.apply_scalar(f)?;
    let cols = (0..inner.n())
        .map(|j| op_a.apply_vector(&inner.column(j)))
        .collect::<Result<Vec<_>, _>>()?;
    MatrixExprFunction::from_columns(base, cols)
}

/// `Σ_i Σ_j G_i H_j D^{λ_i} D^{ρ_j} f`, or with `fused` the single
/// differintegral `D^{λ_i+ρ_j} f` in place of the sequential pair.
pub fn compose_projector_expansion(
    op_a: &MatrixOrderOperator,
    op_b: &MatrixOrderOperator,
    f: &Expression,
    fused: bool,
) -> Result<MatrixExprFunction, OperatorError> {
    let base = shared_base(op_a, op_b)?;
    let (sa, sb) = spectral_pair(op_a, op_b)?;
    let n = op_a.n();
    let mut parts: Vec<(CMatrix, Expression)> = Vec::new();
    for (gi, &li) in sa.projectors.iter().zip(&sa.eigenvalues) {
        for (hj, &rj) in sb.projectors.iter().zip(&sb.eigenvalues) {
            let d = if fused {
                differint_expr(f, li + rj)?
            } else {
                differint_expr(&differint_expr(f, rj)?, li)?
            };
            parts.push((gi * hj, d));
        }
    }
    let entries = (0..n * n)
        .map(|k| {
            Expression::linear_combination(base, parts.iter().map(|(m, d)| (m[(k / n, k % n)], d)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    MatrixExprFunction::new(n, base, entries)
}

/// `P [R_ij D^{λ_i} D^{ρ_j} f] Q⁻¹` with `R = P⁻¹Q`, or with `fused` the
/// entries `R_ij D^{λ_i+ρ_j} f`.
pub fn compose_similarity_expansion(
    op_a: &MatrixOrderOperator,
    op_b: &MatrixOrderOperator,
    f: &Expression,
    fused: bool,
) -> Result<MatrixExprFunction, OperatorError> {
    let base = shared_base(op_a, op_b)?;
    let (sa, sb) = spectral_pair(op_a, op_b)?;
    let n = op_a.n();
    let r = &sa.p_inv * &sb.p;
    let la = op_a.eigenvalues();
    let lb = op_b.eigenvalues();
    let mut inner: Vec<Expression> = Vec::with_capacity(n * n);
    for (i, &li) in la.iter().enumerate() {
        for (j, &rj) in lb.iter().enumerate() {
            let d = if fused {
                differint_expr(f, li + rj)?
            } else {
                differint_expr(&differint_expr(f, rj)?, li)?
            };
            inner.push(d.scale(r[(i, j)]));
        }
    }
    let entries = (0..n * n)
        .map(|k| {
            let (row, col) = (k / n, k % n);
            let coeffs: Vec<_> = (0..n * n)
                .map(|ij| sa.p[(row, ij / n)] * sb.p_inv[(ij % n, col)])
                .collect();
            Expression::linear_combination(base, coeffs.into_iter().zip(&inner))
        })
        .collect::<Result<Vec<_>, _>>()?;
    MatrixExprFunction::new(n, base, entries)
}

/// Both sides of the integer shift: `dᵐ/dxᵐ (D^A f)` and `D^{A+mI} f`.
pub fn shift_by_integer(
    op: &MatrixOrderOperator,
    m: usize,
    f: &Expression,
) -> Result<(MatrixExprFunction, MatrixExprFunction), OperatorError> {
    let lhs = op.apply_scalar(f)?.integer_derivative(m);
    let shifted = build_operator(
        &op.matrix()
            .shift(num_complex::Complex64::new(-(m as f64), 0.0)),
        op.base_point(),
    )?;
    Ok((lhs, shifted.apply_scalar(f)?))
}
