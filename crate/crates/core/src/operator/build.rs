use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::values::{MatrixExprFunction, VectorExprFunction};
use super::OperatorError;
use crate::linalg::{
    classify, jordan_decompose, spectral_projectors, CMatrix, Classification, JordanData,
    MatrixClass, SpectralData, DEFAULT_TOL, JORDAN_TOL,
};
use crate::scalar::ComplexScalar;
use crate::symbolic::{differint_expr, lambda_derivative, Expression, MAX_LAMBDA_DERIVATIVE};

/// How the operator's order matrix was decomposed.
#[derive(Debug, Clone, PartialEq)]
pub enum Realization {
    Spectral(SpectralData),
    Jordan(JordanData),
}

impl Realization {
    pub fn tag(&self) -> &'static str {
        match self {
            Realization::Spectral(_) => "spectral",
            Realization::Jordan(_) => "jordan",
        }
    }
}

/// The matrix-order differintegral `ₐD_x^A`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOrderOperator {
    base_point: f64,
    matrix: CMatrix,
    class: Classification,
    realization: Realization,
}

/// Spectral data read off a Jordan decomposition whose segments all have size 1.
fn spectral_from_jordan(jd: JordanData) -> SpectralData {
    let n = jd.p.n();
    let mut eigenvalues: Vec<ComplexScalar> = Vec::new();
    let mut multiplicities = Vec::new();
    for s in &jd.segments {
        if eigenvalues.last() == Some(&s.eigenvalue) {
            *multiplicities.last_mut().unwrap() += 1;
        } else {
            eigenvalues.push(s.eigenvalue);
            multiplicities.push(1);
        }
    }
    let mut projectors = Vec::new();
    let mut start = 0;
    for &m in &multiplicities {
        let mut g = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = (start..start + m)
                    .map(|k| jd.p[(i, k)] * jd.p_inv[(k, j)])
                    .sum();
            }
        }
        projectors.push(g);
        start += m;
    }
    SpectralData {
        eigenvalues,
        multiplicities,
        projectors,
        p: jd.p,
        p_inv: jd.p_inv,
        unitary: false,
    }
}

/// Builds `ₐD_x^A`: spectral projectors for diagonalizable `A` (unitary
/// similarity when `A` is normal), Jordan chains otherwise.
pub fn build_operator(a: &CMatrix, base_point: f64) -> Result<MatrixOrderOperator, OperatorError> {
    if !base_point.is_finite() {
        return Err(OperatorError::Precondition(
            "base point must be finite".into(),
        ));
    }
    let class = classify(a, DEFAULT_TOL);
    let realization = match class.class {
        MatrixClass::Normal | MatrixClass::DiagonalizableOnly => {
            Realization::Spectral(spectral_projectors(a)?)
        }
        MatrixClass::JordanOnly => {
            let jd = jordan_decompose(a, JORDAN_TOL)?;
            if jd.max_segment() <= 1 {
                Realization::Spectral(spectral_from_jordan(jd))
            } else {
                Realization::Jordan(jd)
            }
        }
    };
    Ok(MatrixOrderOperator {
        base_point,
        matrix: a.clone(),
        class,
        realization,
    })
}

impl MatrixOrderOperator {
    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn classification(&self) -> &Classification {
        &self.class
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn spectral(&self) -> Option<&SpectralData> {
        match &self.realization {
            Realization::Spectral(sd) => Some(sd),
            Realization::Jordan(_) => None,
        }
    }

    /// Condition number of the similarity that realizes the operator.
    pub fn condition(&self) -> f64 {
        match &self.realization {
            Realization::Spectral(sd) => {
                sd.p.frobenius_norm() * sd.p_inv.frobenius_norm() / sd.p.n().max(1) as f64
            }
            Realization::Jordan(jd) => jd.condition,
        }
    }

    /// Eigenvalues with multiplicity in the fixed (real, imaginary) order.
    pub fn eigenvalues(&self) -> Vec<ComplexScalar> {
        match &self.realization {
            Realization::Spectral(sd) => sd
                .eigenvalues
                .iter()
                .zip(&sd.multiplicities)
                .flat_map(|(l, &m)| std::iter::repeat(*l).take(m))
                .collect(),
            Realization::Jordan(jd) => jd
                .segments
                .iter()
                .flat_map(|s| std::iter::repeat(s.eigenvalue).take(s.size))
                .collect(),
        }
    }

    fn check_base(&self, f: &Expression) -> Result<(), OperatorError> {
        if f.base_point() != self.base_point {
            Err(OperatorError::BasePointMismatch {
                left: self.base_point,
                right: f.base_point(),
            })
        } else {
            Ok(())
        }
    }

    /// `ₐD^A f` as an `n×n` matrix of functions: `Σ G_i D^{λ_i} f`, or
    /// `P·blockdiag(T)·P⁻¹` with `T(r, r+k) = ∂_λ^k D^λ f / k!` at the
    /// segment eigenvalue.
    pub fn apply_scalar(&self, f: &Expression) -> Result<MatrixExprFunction, OperatorError> {
        self.check_base(f)?;
        let n = self.n();
        let a = self.base_point;
        match &self.realization {
            Realization::Spectral(sd) => {
                let parts: Vec<Expression> = sd
                    .eigenvalues
                    .iter()
                    .map(|&l| differint_expr(f, l))
                    .collect::<Result<_, _>>()?;
                let entries = (0..n * n)
                    .map(|k| {
                        let (r, c) = (k / n, k % n);
                        Expression::linear_combination(
                            a,
                            sd.projectors
                                .iter()
                                .zip(&parts)
                                .map(|(g, d)| (g[(r, c)], d)),
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                MatrixExprFunction::new(n, a, entries)
            }
            Realization::Jordan(jd) => {
                // per segment: lambda derivatives and their coefficient matrices
                let mut parts: Vec<(Expression, CMatrix)> = Vec::new();
                for (seg, o) in jd.segments.iter().zip(jd.offsets()) {
                    for (k, d) in segment_derivatives(f, seg.eigenvalue, seg.size)?
                        .into_iter()
                        .enumerate()
                    {
                        let mut coeff = CMatrix::zeros(n);
                        for r in 0..n {
                            for c in 0..n {
                                coeff[(r, c)] = (0..seg.size - k)
                                    .map(|i| jd.p[(r, o + i)] * jd.p_inv[(o + i + k, c)])
                                    .sum();
                            }
                        }
                        parts.push((d, coeff));
                    }
                }
                let entries = (0..n * n)
                    .map(|k| {
                        let (r, c) = (k / n, k % n);
                        Expression::linear_combination(a, parts.iter().map(|(d, m)| (m[(r, c)], d)))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                MatrixExprFunction::new(n, a, entries)
            }
        }
    }

    /// `ₐD^A v`: the matrix of scalar operators acting on a vector of
    /// functions, evaluated as `P · T · P⁻¹ v`.
    pub fn apply_vector(
        &self,
        v: &VectorExprFunction,
    ) -> Result<VectorExprFunction, OperatorError> {
        let n = self.n();
        if v.len() != n {
            return Err(OperatorError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if v.base_point() != self.base_point {
            return Err(OperatorError::BasePointMismatch {
                left: self.base_point,
                right: v.base_point(),
            });
        }
        let a = self.base_point;
        let (p, p_inv) = match &self.realization {
            Realization::Spectral(sd) => (&sd.p, &sd.p_inv),
            Realization::Jordan(jd) => (&jd.p, &jd.p_inv),
        };
        let w = VectorExprFunction::mul_matrix(p_inv, v.entries(), a)?;
        let mut u = Vec::with_capacity(n);
        match &self.realization {
            Realization::Spectral(sd) => {
                for (range, &l) in sd.blocks().into_iter().zip(&sd.eigenvalues) {
                    for k in range {
                        u.push(differint_expr(w.get(k), l)?);
                    }
                }
            }
            Realization::Jordan(jd) => {
                for (seg, o) in jd.segments.iter().zip(jd.offsets()) {
                    check_depth(seg.size)?;
                    for r in 0..seg.size {
                        let mut parts = Vec::with_capacity(seg.size - r);
                        for b in r..seg.size {
                            let k = b - r;
                            let d = lambda_derivative(w.get(o + b), seg.eigenvalue, k)?;
                            parts.push((Complex64::new(1.0 / factorial(k), 0.0), d));
                        }
                        u.push(Expression::linear_combination(
                            a,
                            parts.iter().map(|(c, e)| (*c, e)),
                        )?);
                    }
                }
            }
        }
        VectorExprFunction::mul_matrix(p, &u, a)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn check_depth(size: usize) -> Result<(), OperatorError> {
    if size - 1 > MAX_LAMBDA_DERIVATIVE {
        Err(OperatorError::JordanDepth { size })
    } else {
        Ok(())
    }
}

/// `∂_λ^k D^λ f / k!` at `λ = μ`, `k = 0..size`.
fn segment_derivatives(
    f: &Expression,
    mu: ComplexScalar,
    size: usize,
) -> Result<Vec<Expression>, OperatorError> {
    check_depth(size)?;
    (0..size)
        .map(|k| {
            lambda_derivative(f, mu, k)
                .map(|d| d.scale(Complex64::new(1.0 / factorial(k), 0.0)))
                .map_err(OperatorError::from)
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorRepr {
    base_point: f64,
    matrix: CMatrix,
    realization_tag: String,
}

impl Serialize for MatrixOrderOperator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OperatorRepr {
            base_point: self.base_point,
            matrix: self.matrix.clone(),
            realization_tag: self.realization.tag().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixOrderOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = OperatorRepr::deserialize(d)?;
        let op = build_operator(&r.matrix, r.base_point).map_err(serde::de::Error::custom)?;
        if op.realization.tag() != r.realization_tag {
            return Err(serde::de::Error::custom(format!(
                "realization_tag {:?} does not match the decomposition ({:?})",
                r.realization_tag,
                op.realization.tag()
            )));
        }
        Ok(op)
    }
}
