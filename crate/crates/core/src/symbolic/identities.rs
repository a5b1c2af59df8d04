//! Composition and product rules, evaluated on the power-log basis.

use num_complex::Complex64;

use super::differint::{differint_expr, integer_derivative};
use super::expression::{Expression, PowerLogTerm};
use super::{Order, SymbolicError};
use crate::special::{generalized_binomial, recip_gamma};

/// `Σ_{j=0}^{J} binom(q, j) · D^{q−j} f · g^(j)`.
///
/// `g` must be a polynomial in `(x−a)`; the sum then terminates at
/// `j = deg g` and is exact for `J ≥ deg g`.
pub fn leibniz_series(
    f: &Expression,
    g: &Expression,
    q: impl Into<Order>,
    max_j: usize,
) -> Result<Expression, SymbolicError> {
    if f.base_point() != g.base_point() {
        return Err(SymbolicError::BasePointMismatch {
            left: f.base_point(),
            right: g.base_point(),
        });
    }
    if !g.is_polynomial() {
        return Err(SymbolicError::NonPolynomialFactor);
    }
    let q = q.into().value();
    let mut parts = Vec::new();
    for j in 0..=max_j {
        let gj = integer_derivative(g, j);
        if gj.is_zero() {
            break;
        }
        let dj = differint_expr(f, q - j as f64)?;
        parts.push((generalized_binomial(q, j), dj.multiply(&gj)?));
    }
    Expression::linear_combination(f.base_point(), parts.iter().map(|(c, e)| (*c, e)))
}

/// `D^p (D^q f)`, applied literally in sequence.
pub fn composition_lhs(
    p: impl Into<Order>,
    q: impl Into<Order>,
    f: &Expression,
) -> Result<Expression, SymbolicError> {
    let inner = differint_expr(f, q)?;
    differint_expr(&inner, p)
}

/// `D^{p+q} f − Σ_{j=1}^{k} [D^{q−j} f]_{x=a} (x−a)^{−p−j} / Γ(1−p−j)`,
/// `k` the least whole number `≥ Re q`.
///
/// Covers both sign conventions of the outer order: for an integral
/// `D^{−p}` pass `p` negated. Boundary values are limits taken from
/// exponent signs, never by sampling.
pub fn composition_rhs(
    p: impl Into<Order>,
    q: impl Into<Order>,
    f: &Expression,
) -> Result<Expression, SymbolicError> {
    let p = p.into().value();
    let q = q.into().value();
    if q.re <= 0.0 {
        return Err(SymbolicError::Precondition(format!(
            "inner order must have positive real part, got {q}"
        )));
    }
    let k = q.re.ceil() as usize;
    let main = differint_expr(f, p + q)?;
    let mut terms: Vec<PowerLogTerm> = main.terms().to_vec();
    for j in 1..=k {
        let boundary = differint_expr(f, q - j as f64)?.limit_at_base()?;
        if boundary == Complex64::new(0.0, 0.0) {
            continue;
        }
        let exponent = -p - j as f64;
        terms.push(PowerLogTerm::new(
            -boundary * recip_gamma(exponent + 1.0),
            exponent,
            0,
        ));
    }
    Expression::new(f.base_point(), terms)
}
