//! Independent numerical differintegration.
//!
//! Nothing here feeds primary results; these routines exist to check the
//! closed forms in [`crate::symbolic`] by unrelated means.

mod gl;
mod quadrature;

pub use gl::{fd_lambda_derivative, gl_differint};
pub use quadrature::{gauss_legendre, rl_quadrature};

use std::fmt;
use std::sync::Arc;

use crate::scalar::{is_finite, ComplexScalar};
use crate::symbolic::Expression;

pub const DEFAULT_STEPS: usize = 1 << 14;
pub const DEFAULT_RICHARDSON_LEVELS: usize = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("non-finite sample at x = {x}")]
    NonFiniteSample { x: f64 },
    #[error("result overflowed")]
    Overflow,
    #[error("quadrature did not converge: {estimate} vs refined {refined}")]
    ConvergenceFailure {
        estimate: ComplexScalar,
        refined: ComplexScalar,
    },
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

type Rule = Arc<dyn Fn(f64) -> ComplexScalar + Send + Sync>;

/// A function known only through point evaluations on `(a, x_max]`.
///
/// The rule takes the offset `t = x − a`. It may be called at `t = 0`;
/// a non-finite value there marks `f` as singular at the base point.
#[derive(Clone)]
pub struct SampledFunction {
    base_point: f64,
    x_max: f64,
    rule: Rule,
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction")
            .field("base_point", &self.base_point)
            .field("x_max", &self.x_max)
            .finish_non_exhaustive()
    }
}

impl SampledFunction {
    pub fn new(
        base_point: f64,
        x_max: f64,
        rule: impl Fn(f64) -> ComplexScalar + Send + Sync + 'static,
    ) -> Result<Self, OracleError> {
        if !(base_point.is_finite() && x_max.is_finite() && x_max > base_point) {
            return Err(OracleError::Precondition(format!(
                "empty domain ({base_point}, {x_max}]"
            )));
        }
        Ok(Self {
            base_point,
            x_max,
            rule: Arc::new(rule),
        })
    }

    pub fn from_expression(e: &Expression, x_max: f64) -> Result<Self, OracleError> {
        let e = e.clone();
        Self::new(e.base_point(), x_max, move |t| e.value_at_offset(t))
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Raw rule at offset `t`, no checks.
    pub fn at_offset(&self, t: f64) -> ComplexScalar {
        (self.rule)(t)
    }

    /// Value at `x ∈ (a, x_max]`.
    pub fn sample(&self, x: f64) -> Result<ComplexScalar, OracleError> {
        self.check_point(x)?;
        let v = self.at_offset(x - self.base_point);
        if is_finite(v) {
            Ok(v)
        } else {
            Err(OracleError::NonFiniteSample { x })
        }
    }

    pub(crate) fn check_point(&self, x: f64) -> Result<(), OracleError> {
        if x > self.base_point && x <= self.x_max {
            Ok(())
        } else {
            Err(OracleError::Precondition(format!(
                "x = {x} outside ({}, {}]",
                self.base_point, self.x_max
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub steps: usize,
    pub richardson_levels: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            richardson_levels: DEFAULT_RICHARDSON_LEVELS,
        }
    }
}

impl OracleConfig {
    pub fn new(steps: usize, richardson_levels: usize) -> Result<Self, OracleError> {
        let cfg = Self {
            steps,
            richardson_levels,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.steps < 16 || !self.steps.is_power_of_two() {
            return Err(OracleError::InvalidConfig(format!(
                "steps must be a power of two >= 16, got {}",
                self.steps
            )));
        }
        if self.richardson_levels > 2 {
            return Err(OracleError::InvalidConfig(format!(
                "richardson_levels must be 0, 1 or 2, got {}",
                self.richardson_levels
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
