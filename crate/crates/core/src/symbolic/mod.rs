//! Exact differintegration on the basis of power-log terms.
//!
//! The basis `c·(x−a)^p·ln^m(x−a)` (with `Re p > −1` wherever a
//! differintegral is taken, `m ≤ 3`) is closed under differintegration,
//! order-differentiation, ordinary differentiation and products, so every
//! identity checked in this crate reduces to comparing canonical term lists.

mod differint;
mod expression;
mod identities;

pub use differint::{
    differint_expr, differint_term, integer_derivative, lambda_derivative, MAX_LAMBDA_DERIVATIVE,
};
pub use expression::{Expression, PowerLogTerm, KEY_TOLERANCE, MAX_LOG_POWER};
pub use identities::{composition_lhs, composition_rhs, leibniz_series};

use crate::scalar::ComplexScalar;
use crate::special::SpecialError;

/// Coefficient tolerance for canonical symbolic equality, relative to
/// `max(1, largest coefficient)`.
pub const SYMBOLIC_EQ_TOL: f64 = 1e-10;

/// Order `λ` of a differintegral. `Re λ < 0` integrates, `Re λ ≥ 0`
/// differentiates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order(pub ComplexScalar);

impl Order {
    pub fn value(self) -> ComplexScalar {
        self.0
    }

    pub fn is_integral(self) -> bool {
        self.0.re < 0.0
    }
}

impl From<f64> for Order {
    fn from(v: f64) -> Self {
        Order(ComplexScalar::new(v, 0.0))
    }
}

impl From<ComplexScalar> for Order {
    fn from(v: ComplexScalar) -> Self {
        Order(v)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymbolicError {
    #[error("exponent {0} outside the differintegrable domain Re(p) > -1")]
    ExponentOutOfDomain(ComplexScalar),
    #[error("log power {0} exceeds the supported maximum of 3")]
    LogPowerOverflow(u32),
    #[error("order-derivative of degree {0} not supported (maximum 3)")]
    LambdaDerivativeOrder(usize),
    #[error("base points differ: {left} vs {right}")]
    BasePointMismatch { left: f64, right: f64 },
    #[error("Leibniz series requires a polynomial second factor")]
    NonPolynomialFactor,
    #[error("boundary limit diverges: term with exponent {exponent} and log power {log_power}")]
    DivergentBoundary {
        exponent: ComplexScalar,
        log_power: u32,
    },
    #[error("x = {x} lies below the base point {base_point}")]
    OutsideDomain { x: f64, base_point: f64 },
    #[error("non-finite coefficient, exponent or value")]
    NotFinite,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Special(#[from] SpecialError),
}
