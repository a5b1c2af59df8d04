use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use super::SymbolicError;
use crate::scalar::{is_finite, serde_complex, ComplexScalar};

/// Largest log power carried by a term.
pub const MAX_LOG_POWER: u32 = 3;

/// Exponents closer than this are the same key.
pub const KEY_TOLERANCE: f64 = 1e-12;

/// Merged coefficients smaller than this fraction of the magnitudes that
/// produced them are rounding residue and become exact zeros.
const CANCELLATION_EPS: f64 = 64.0 * f64::EPSILON;

/// `coeff · (x−a)^exponent · ln^log_power(x−a)`, with `a` held by the
/// enclosing [`Expression`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLogTerm {
    #[serde(with = "serde_complex")]
    pub coeff: ComplexScalar,
    #[serde(with = "serde_complex")]
    pub exponent: ComplexScalar,
    pub log_power: u32,
}

impl PowerLogTerm {
    pub fn new(coeff: ComplexScalar, exponent: ComplexScalar, log_power: u32) -> Self {
        PowerLogTerm {
            coeff,
            exponent,
            log_power,
        }
    }

    /// Value at offset `t = x − a > 0`.
    pub fn value_at_offset(&self, t: f64) -> ComplexScalar {
        let lt = t.ln();
        self.coeff * (self.exponent * lt).exp() * lt.powi(self.log_power as i32)
    }

    /// Limit as `x → a⁺`, or `None` when it does not exist.
    pub fn limit_at_base(&self) -> Option<ComplexScalar> {
        if self.exponent.re > 0.0 {
            Some(Complex64::new(0.0, 0.0))
        } else if self.exponent == Complex64::new(0.0, 0.0) && self.log_power == 0 {
            Some(self.coeff)
        } else {
            None
        }
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.exponent
            .re
            .total_cmp(&other.exponent.re)
            .then(self.exponent.im.total_cmp(&other.exponent.im))
            .then(self.log_power.cmp(&other.log_power))
    }
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= KEY_TOLERANCE {
        r
    } else {
        v
    }
}

fn snap_exponent(p: ComplexScalar) -> ComplexScalar {
    let im = if p.im.abs() <= KEY_TOLERANCE {
        0.0
    } else {
        p.im
    };
    // avoid -0.0 keys
    Complex64::new(snap(p.re) + 0.0, im + 0.0)
}

/// Finite sum of power-log terms about a base point `a`, kept in canonical
/// form: one term per `(exponent, log_power)` key, no zero coefficients,
/// ordered by `(Re p, Im p, m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expression {
    base_point: f64,
    terms: Vec<PowerLogTerm>,
}

#[derive(Deserialize)]
struct ExpressionRepr {
    base_point: f64,
    terms: Vec<PowerLogTerm>,
}

impl<'de> Deserialize<'de> for Expression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ExpressionRepr::deserialize(d)?;
        Expression::new(repr.base_point, repr.terms).map_err(serde::de::Error::custom)
    }
}

impl Expression {
    /// Builds a canonical expression, validating log powers and finiteness.
    pub fn new(base_point: f64, terms: Vec<PowerLogTerm>) -> Result<Self, SymbolicError> {
        if !base_point.is_finite() {
            return Err(SymbolicError::NotFinite);
        }
        for t in &terms {
            if t.log_power > MAX_LOG_POWER {
                return Err(SymbolicError::LogPowerOverflow(t.log_power));
            }
            if !is_finite(t.coeff) || !is_finite(t.exponent) {
                return Err(SymbolicError::NotFinite);
            }
        }
        Ok(Self::from_terms_unchecked(base_point, terms))
    }

    pub(crate) fn from_terms_unchecked(base_point: f64, terms: Vec<PowerLogTerm>) -> Self {
        Expression {
            base_point,
            terms: canonicalize(terms),
        }
    }

    pub fn zero(base_point: f64) -> Self {
        Expression {
            base_point,
            terms: Vec::new(),
        }
    }

    /// `coeff · (x−a)^exponent · ln^log_power(x−a)`.
    pub fn monomial(
        base_point: f64,
        coeff: ComplexScalar,
        exponent: ComplexScalar,
        log_power: u32,
    ) -> Result<Self, SymbolicError> {
        Self::new(
            base_point,
            vec![PowerLogTerm::new(coeff, exponent, log_power)],
        )
    }

    /// `(x−a)^exponent`.
    pub fn power(base_point: f64, exponent: f64) -> Self {
        Self::from_terms_unchecked(
            base_point,
            vec![PowerLogTerm::new(
                Complex64::new(1.0, 0.0),
                Complex64::new(exponent, 0.0),
                0,
            )],
        )
    }

    pub fn constant(base_point: f64, c: ComplexScalar) -> Self {
        Self::from_terms_unchecked(
            base_point,
            vec![PowerLogTerm::new(c, Complex64::new(0.0, 0.0), 0)],
        )
    }

    /// `Σ coeffs[k] (x−a)^k`.
    pub fn polynomial(base_point: f64, coeffs: &[f64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                PowerLogTerm::new(Complex64::new(*c, 0.0), Complex64::new(k as f64, 0.0), 0)
            })
            .collect();
        Self::from_terms_unchecked(base_point, terms)
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn terms(&self) -> &[PowerLogTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus, zero for the empty expression.
    pub fn coeff_norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm())
            .fold(0.0, f64::max)
    }

    fn check_base(&self, other: &Expression) -> Result<(), SymbolicError> {
        if self.base_point != other.base_point {
            Err(SymbolicError::BasePointMismatch {
                left: self.base_point,
                right: other.base_point,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Expression) -> Result<Expression, SymbolicError> {
        self.check_base(other)?;
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(Self::from_terms_unchecked(self.base_point, terms))
    }

    pub fn sub(&self, other: &Expression) -> Result<Expression, SymbolicError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: ComplexScalar) -> Expression {
        if c == Complex64::new(0.0, 0.0) {
            return Expression::zero(self.base_point);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| PowerLogTerm::new(t.coeff * c, t.exponent, t.log_power))
            .collect();
        Self::from_terms_unchecked(self.base_point, terms)
    }

    /// `Σ c_i e_i` with a single canonicalization pass.
    pub fn linear_combination<'a, I>(base_point: f64, parts: I) -> Result<Expression, SymbolicError>
    where
        I: IntoIterator<Item = (ComplexScalar, &'a Expression)>,
    {
        let mut terms = Vec::new();
        for (c, e) in parts {
            if e.base_point != base_point {
                return Err(SymbolicError::BasePointMismatch {
                    left: base_point,
                    right: e.base_point,
                });
            }
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            terms.extend(
                e.terms
                    .iter()
                    .map(|t| PowerLogTerm::new(t.coeff * c, t.exponent, t.log_power)),
            );
        }
        Ok(Self::from_terms_unchecked(base_point, terms))
    }

    /// Distributed product; log powers add and may not exceed [`MAX_LOG_POWER`].
    pub fn multiply(&self, other: &Expression) -> Result<Expression, SymbolicError> {
        self.check_base(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for s in &self.terms {
            for o in &other.terms {
                let m = s.log_power + o.log_power;
                if m > MAX_LOG_POWER {
                    return Err(SymbolicError::LogPowerOverflow(m));
                }
                terms.push(PowerLogTerm::new(
                    s.coeff * o.coeff,
                    s.exponent + o.exponent,
                    m,
                ));
            }
        }
        Ok(Self::from_terms_unchecked(self.base_point, terms))
    }

    /// Value at offset `t = x − a`. Non-finite where the expression has no value.
    pub fn value_at_offset(&self, t: f64) -> ComplexScalar {
        if t == 0.0 {
            return self
                .limit_at_base()
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        }
        self.terms.iter().map(|term| term.value_at_offset(t)).sum()
    }

    /// Value at `x > a` (or the limit at `x = a` when it exists).
    pub fn evaluate(&self, x: f64) -> Result<ComplexScalar, SymbolicError> {
        let t = x - self.base_point;
        if t < 0.0 || !t.is_finite() {
            return Err(SymbolicError::OutsideDomain {
                x,
                base_point: self.base_point,
            });
        }
        if t == 0.0 {
            return self.limit_at_base();
        }
        let v = self.value_at_offset(t);
        if is_finite(v) {
            Ok(v)
        } else {
            Err(SymbolicError::NotFinite)
        }
    }

    /// Limit as `x → a⁺`, decided from exponent signs alone.
    pub fn limit_at_base(&self) -> Result<ComplexScalar, SymbolicError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            match t.limit_at_base() {
                Some(v) => acc += v,
                None => {
                    return Err(SymbolicError::DivergentBoundary {
                        exponent: t.exponent,
                        log_power: t.log_power,
                    })
                }
            }
        }
        Ok(acc)
    }

    /// Largest coefficient of `self − other`, relative to `max(1, largest
    /// coefficient of either side)`.
    pub fn symbolic_residual(&self, other: &Expression) -> Result<f64, SymbolicError> {
        let diff = self.sub(other)?;
        let scale = self.coeff_norm().max(other.coeff_norm()).max(1.0);
        Ok(diff.coeff_norm() / scale)
    }

    /// Canonical equality: same keys, coefficients agreeing to `tol`.
    pub fn approx_eq(&self, other: &Expression, tol: f64) -> bool {
        self.symbolic_residual(other).is_ok_and(|r| r <= tol)
    }

    /// `true` when every exponent is a nonnegative integer and no logs appear.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| {
            t.log_power == 0
                && t.exponent.im == 0.0
                && t.exponent.re >= 0.0
                && t.exponent.re == t.exponent.re.trunc()
        })
    }

    /// Degree of a polynomial expression (`None` for the zero expression).
    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.exponent.re as usize).max()
    }
}

fn canonicalize(terms: Vec<PowerLogTerm>) -> Vec<PowerLogTerm> {
    // (term, accumulated |contributions|)
    let mut groups: Vec<(PowerLogTerm, f64)> = Vec::with_capacity(terms.len());
    for t in terms {
        if t.coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        let p = snap_exponent(t.exponent);
        match groups
            .iter_mut()
            .find(|(g, _)| g.log_power == t.log_power && (g.exponent - p).norm() <= KEY_TOLERANCE)
        {
            Some((g, mag)) => {
                g.coeff += t.coeff;
                *mag += t.coeff.norm();
            }
            None => groups.push((PowerLogTerm::new(t.coeff, p, t.log_power), t.coeff.norm())),
        }
    }
    let mut out: Vec<PowerLogTerm> = groups
        .into_iter()
        .filter(|(g, mag)| g.coeff.norm() > CANCELLATION_EPS * mag)
        .map(|(g, _)| g)
        .collect();
    out.sort_by(PowerLogTerm::key_cmp);
    out
}
