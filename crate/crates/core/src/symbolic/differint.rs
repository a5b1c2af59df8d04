use num_complex::Complex64;

use super::expression::{Expression, PowerLogTerm, MAX_LOG_POWER};
use super::{Order, SymbolicError};
use crate::scalar::ComplexScalar;
use crate::special::{
    gamma_derivatives, gamma_ratios, ln_gamma, nearest_pole, recip_gamma_derivatives,
    recip_gamma_ratios,
};

/// Highest order-derivative supported by [`lambda_derivative`].
pub const MAX_LAMBDA_DERIVATIVE: usize = 3;

// Below this distance to a pole of Γ the reflection-based derivative
// products are used instead of the log-ratio route.
const NEAR_POLE_RADIUS: f64 = 0.25;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Table `P[i][l] = Γ^(i)(p+1) · (1/Γ)^(l)(w)` for `i ≤ max_i`, `l ≤ max_l`.
fn gamma_products(
    p1: ComplexScalar,
    w: ComplexScalar,
    max_i: usize,
    max_l: usize,
) -> Result<Vec<Vec<ComplexScalar>>, SymbolicError> {
    let k = w.re.round();
    let near_pole = k <= 0.0 && (w - Complex64::new(k, 0.0)).norm() < NEAR_POLE_RADIUS;
    if near_pole {
        let w = match nearest_pole(w) {
            Some(n) => Complex64::new(n as f64, 0.0),
            None => w,
        };
        let g = gamma_derivatives(p1, max_i)?;
        let r = recip_gamma_derivatives(w, max_l)?;
        Ok(g.iter()
            .map(|gi| r.iter().map(|rl| gi * rl).collect())
            .collect())
    } else {
        // Γ(p+1)/Γ(w) as one exponential so that w = p+1 gives exactly 1
        let ratio = (ln_gamma(p1)? - ln_gamma(w)?).exp();
        let g = gamma_ratios(p1, max_i)?;
        let r = recip_gamma_ratios(w, max_l)?;
        Ok(g.iter()
            .map(|gi| r.iter().map(|rl| ratio * gi * rl).collect())
            .collect())
    }
}

/// `∂^k/∂λ^k` of the differintegral of one term, as power-log terms.
///
/// With `w = p − λ + 1`, the result is
/// `(−1)^k Σ_i Σ_l C(m,i) C(m−i+k,l) Γ^(i)(p+1) (1/Γ)^(l)(w) (x−a)^(p−λ) ln^(m−i+k−l)(x−a)`,
/// which for `k = m = 0` is the power rule `Γ(p+1)/Γ(p−λ+1) (x−a)^(p−λ)`.
pub(crate) fn differint_term_terms(
    t: &PowerLogTerm,
    order: ComplexScalar,
    k: usize,
) -> Result<Vec<PowerLogTerm>, SymbolicError> {
    if t.exponent.re <= -1.0 {
        return Err(SymbolicError::ExponentOutOfDomain(t.exponent));
    }
    let m = t.log_power as usize;
    if m + k > MAX_LOG_POWER as usize {
        return Err(SymbolicError::LogPowerOverflow((m + k) as u32));
    }
    if k == 0 && order == Complex64::new(0.0, 0.0) {
        return Ok(vec![*t]);
    }
    let p1 = t.exponent + 1.0;
    let w = p1 - order;
    let prod = gamma_products(p1, w, m, m + k)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let exponent = t.exponent - order;
    let mut out = Vec::new();
    for (i, row) in prod.iter().enumerate() {
        let n = m - i + k;
        for (l, pil) in row.iter().enumerate().take(n + 1) {
            let c = t.coeff * pil * (sign * binomial(m, i) * binomial(n, l));
            out.push(PowerLogTerm::new(c, exponent, (n - l) as u32));
        }
    }
    Ok(out)
}

/// Differintegral of order `λ` of a single term about base point `a`.
pub fn differint_term(
    t: &PowerLogTerm,
    order: impl Into<Order>,
    base_point: f64,
) -> Result<Expression, SymbolicError> {
    let terms = differint_term_terms(t, order.into().value(), 0)?;
    Ok(Expression::from_terms_unchecked(base_point, terms))
}

/// Termwise differintegral of order `λ`; linear by construction.
pub fn differint_expr(
    e: &Expression,
    order: impl Into<Order>,
) -> Result<Expression, SymbolicError> {
    lambda_derivative(e, order, 0)
}

/// `∂^k/∂λ^k` of `differint_expr(e, λ)`, obtained analytically.
pub fn lambda_derivative(
    e: &Expression,
    order: impl Into<Order>,
    k: usize,
) -> Result<Expression, SymbolicError> {
    if k > MAX_LAMBDA_DERIVATIVE {
        return Err(SymbolicError::LambdaDerivativeOrder(k));
    }
    let order = order.into().value();
    let mut terms = Vec::new();
    for t in e.terms() {
        terms.extend(differint_term_terms(t, order, k)?);
    }
    Ok(Expression::from_terms_unchecked(e.base_point(), terms))
}

/// Exact `m`-fold `d/dx` on the power-log basis.
pub fn integer_derivative(e: &Expression, m: usize) -> Expression {
    let mut terms: Vec<PowerLogTerm> = e.terms().to_vec();
    for _ in 0..m {
        let mut next = Vec::with_capacity(2 * terms.len());
        for t in &terms {
            let p = t.exponent - 1.0;
            next.push(PowerLogTerm::new(t.coeff * t.exponent, p, t.log_power));
            if t.log_power > 0 {
                next.push(PowerLogTerm::new(
                    t.coeff * t.log_power as f64,
                    p,
                    t.log_power - 1,
                ));
            }
        }
        terms = Expression::from_terms_unchecked(e.base_point(), next)
            .terms()
            .to_vec();
    }
    Expression::from_terms_unchecked(e.base_point(), terms)
}
