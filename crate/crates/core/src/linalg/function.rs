use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::jordan::{jordan_decompose, JordanData};
use super::spectral::{
    classify, frobenius_covariants, spectral_projectors, MatrixClass, SpectralData,
};
use super::{CMatrix, LinalgError, DEFAULT_TOL, JORDAN_TOL};
use crate::scalar::{is_finite, ComplexScalar};

type Rule = Arc<dyn Fn(ComplexScalar, usize) -> ComplexScalar + Send + Sync>;

/// A scalar function `g` with its derivatives `g′, …, g^{(max_derivative)}`.
///
/// The rule receives `(z, k)` and returns `g^{(k)}(z)`; a non-finite value
/// marks `g^{(k)}` as undefined at `z`.
#[derive(Clone)]
pub struct FunctionWithDerivatives {
    max_derivative: usize,
    rule: Rule,
}

impl fmt::Debug for FunctionWithDerivatives {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionWithDerivatives")
            .field("max_derivative", &self.max_derivative)
            .finish_non_exhaustive()
    }
}

impl FunctionWithDerivatives {
    pub fn new(
        max_derivative: usize,
        rule: impl Fn(ComplexScalar, usize) -> ComplexScalar + Send + Sync + 'static,
    ) -> Self {
        Self {
            max_derivative,
            rule: Arc::new(rule),
        }
    }

    pub fn identity() -> Self {
        Self::new(usize::MAX, |z, k| match k {
            0 => z,
            1 => Complex64::new(1.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        })
    }

    pub fn exp() -> Self {
        Self::new(usize::MAX, |z, _| z.exp())
    }

    pub fn max_derivative(&self) -> usize {
        self.max_derivative
    }

    pub fn eval(&self, z: ComplexScalar, k: usize) -> Result<ComplexScalar, LinalgError> {
        if k > self.max_derivative {
            return Err(LinalgError::DerivativeUnavailable {
                needed: k,
                available: self.max_derivative,
            });
        }
        let v = (self.rule)(z, k);
        if is_finite(v) {
            Ok(v)
        } else {
            Err(LinalgError::FunctionUndefined {
                at: z,
                derivative: k,
            })
        }
    }
}

/// `P g(Λ) P⁻¹`.
pub fn function_by_similarity(
    sd: &SpectralData,
    g: &FunctionWithDerivatives,
) -> Result<CMatrix, LinalgError> {
    let n = sd.n();
    let mut scaled = sd.p.clone();
    for (range, &lambda) in sd.blocks().into_iter().zip(&sd.eigenvalues) {
        let v = g.eval(lambda, 0)?;
        for j in range {
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
    }
    Ok(&scaled * &sd.p_inv)
}

/// `Σ g(λ_i) G_i` with `G_i` the given projectors.
pub fn function_by_projectors(
    eigenvalues: &[ComplexScalar],
    projectors: &[CMatrix],
    g: &FunctionWithDerivatives,
) -> Result<CMatrix, LinalgError> {
    let n = projectors.first().map_or(0, |p| p.n());
    let mut out = CMatrix::zeros(n);
    for (lambda, gi) in eigenvalues.iter().zip(projectors) {
        out = &out + &gi.scale(g.eval(*lambda, 0)?);
    }
    Ok(out)
}

/// Upper-triangular `g(J_s(λ))` with `g^{(k)}(λ)/k!` on the `k`-th superdiagonal.
pub fn segment_function(
    lambda: ComplexScalar,
    size: usize,
    g: &FunctionWithDerivatives,
) -> Result<CMatrix, LinalgError> {
    let mut t = CMatrix::zeros(size);
    let mut factorial = 1.0;
    for k in 0..size {
        if k > 0 {
            factorial *= k as f64;
        }
        let v = g.eval(lambda, k)? / factorial;
        for r in 0..size - k {
            t[(r, r + k)] = v;
        }
    }
    Ok(t)
}

/// `P · diag(g(J_1), …) · P⁻¹`.
pub fn function_by_jordan(
    jd: &JordanData,
    g: &FunctionWithDerivatives,
) -> Result<CMatrix, LinalgError> {
    let n = jd.p.n();
    let mut inner = CMatrix::zeros(n);
    for (seg, o) in jd.segments.iter().zip(jd.offsets()) {
        let t = segment_function(seg.eigenvalue, seg.size, g)?;
        for r in 0..seg.size {
            for c in 0..seg.size {
                inner[(o + r, o + c)] = t[(r, c)];
            }
        }
    }
    Ok(&(&jd.p * &inner) * &jd.p_inv)
}

/// Worst-case growth of rounding errors in the Frobenius covariant product.
fn covariant_amplification(a: &CMatrix, eigenvalues: &[ComplexScalar]) -> f64 {
    let na = a.frobenius_norm();
    eigenvalues
        .iter()
        .enumerate()
        .map(|(i, li)| {
            eigenvalues
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, lj)| (na + lj.norm()) / (li - lj).norm())
                .product::<f64>()
        })
        .fold(1.0, f64::max)
}

/// `g(A)`.
///
/// Diagonalizable inputs are evaluated by similarity and, independently, by
/// Frobenius covariants; disagreement beyond the rounding budget is an
/// error. Defective inputs go through the Jordan form, which needs
/// `g^{(s−1)}` for the longest segment `s`.
pub fn matrix_function(a: &CMatrix, g: &FunctionWithDerivatives) -> Result<CMatrix, LinalgError> {
    match classify(a, DEFAULT_TOL).class {
        MatrixClass::Normal | MatrixClass::DiagonalizableOnly => {
            let sd = spectral_projectors(a)?;
            let by_similarity = function_by_similarity(&sd, g)?;
            let covariants = frobenius_covariants(a, &sd.eigenvalues);
            let by_covariants = function_by_projectors(&sd.eigenvalues, &covariants, g)?;
            let gmax = sd
                .eigenvalues
                .iter()
                .map(|l| g.eval(*l, 0).map(|v| v.norm()))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let cond = sd.p.frobenius_norm() * sd.p_inv.frobenius_norm();
            let amp = covariant_amplification(a, &sd.eigenvalues);
            let budget = (1e-9 + 1e2 * f64::EPSILON * (amp + cond)) * gmax.max(1.0) * cond;
            let gap = (&by_similarity - &by_covariants).frobenius_norm();
            if gap > budget {
                return Err(LinalgError::PathDisagreement { gap, budget });
            }
            Ok(by_similarity)
        }
        MatrixClass::JordanOnly => {
            let jd = jordan_decompose(a, JORDAN_TOL)?;
            let needed = jd.max_segment().saturating_sub(1);
            if needed > g.max_derivative() {
                return Err(LinalgError::DerivativeUnavailable {
                    needed,
                    available: g.max_derivative(),
                });
            }
            function_by_jordan(&jd, g)
        }
    }
}
