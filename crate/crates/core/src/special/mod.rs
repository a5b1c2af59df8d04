//! Complex gamma-family functions.
//!
//! Every closed-form differintegral coefficient in this crate is a ratio of
//! gamma values or one of its derivatives, so these routines are written for
//! complex arguments throughout. The reciprocal gamma function is the entire
//! workhorse: it vanishes exactly at the poles of Γ, which is what makes
//! vanishing coefficients such as `D^{1/2} x^{-1/2} = 0` exact zeros.

mod gamma;
mod polygamma;

pub use gamma::{
    cos_pi, gamma, generalized_binomial, ln_gamma, nearest_pole, recip_gamma, sin_pi,
    POLE_TOLERANCE,
};
pub use polygamma::{
    bell_complete, gamma_derivatives, polygamma, recip_gamma_derivatives, MAX_DERIVATIVE_ORDER,
    MAX_POLYGAMMA_ORDER,
};
pub(crate) use polygamma::{gamma_ratios, recip_gamma_ratios};

use crate::scalar::ComplexScalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    #[error("gamma pole at nonpositive integer (argument {0})")]
    Pole(ComplexScalar),
    #[error("polygamma order {0} not supported (maximum 3)")]
    UnsupportedOrder(usize),
    #[error("non-finite result for argument {0}")]
    Overflow(ComplexScalar),
}

#[cfg(test)]
mod tests;
