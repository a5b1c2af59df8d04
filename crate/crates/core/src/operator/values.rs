use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::OperatorError;
use crate::linalg::CMatrix;
use crate::scalar::ComplexScalar;
use crate::symbolic::{integer_derivative, Expression};

fn check_uniform(base_point: f64, entries: &[Expression]) -> Result<(), OperatorError> {
    match entries.iter().find(|e| e.base_point() != base_point) {
        Some(e) => Err(OperatorError::BasePointMismatch {
            left: base_point,
            right: e.base_point(),
        }),
        None => Ok(()),
    }
}

/// `n×n` array of expressions with one base point, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixExprFunction {
    n: usize,
    base_point: f64,
    entries: Vec<Expression>,
}

impl MatrixExprFunction {
    pub fn new(n: usize, base_point: f64, entries: Vec<Expression>) -> Result<Self, OperatorError> {
        if entries.len() != n * n {
            return Err(OperatorError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        check_uniform(base_point, &entries)?;
        Ok(Self {
            n,
            base_point,
            entries,
        })
    }

    pub fn zero(n: usize, base_point: f64) -> Self {
        Self {
            n,
            base_point,
            entries: vec![Expression::zero(base_point); n * n],
        }
    }

    /// Entries `M_ij·f`.
    pub fn scaled(m: &CMatrix, f: &Expression) -> Self {
        Self {
            n: m.n(),
            base_point: f.base_point(),
            entries: m.data().iter().map(|&c| f.scale(c)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn get(&self, i: usize, j: usize) -> &Expression {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Expression] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> VectorExprFunction {
        VectorExprFunction {
            base_point: self.base_point,
            entries: (0..self.n).map(|i| self.get(i, j).clone()).collect(),
        }
    }

    pub fn from_columns(
        base_point: f64,
        cols: Vec<VectorExprFunction>,
    ) -> Result<Self, OperatorError> {
        let n = cols.len();
        let mut entries = vec![Expression::zero(base_point); n * n];
        for (j, c) in cols.into_iter().enumerate() {
            if c.len() != n {
                return Err(OperatorError::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            for (i, e) in c.entries.into_iter().enumerate() {
                entries[i * n + j] = e;
            }
        }
        Self::new(n, base_point, entries)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self {
            n,
            base_point: self.base_point,
            entries: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect(),
        }
    }

    pub fn integer_derivative(&self, m: usize) -> Self {
        Self {
            n: self.n,
            base_point: self.base_point,
            entries: self
                .entries
                .iter()
                .map(|e| integer_derivative(e, m))
                .collect(),
        }
    }

    /// Values at `x`; entries diverging there are reported as errors.
    pub fn evaluate(&self, x: f64) -> Result<Vec<ComplexScalar>, OperatorError> {
        self.entries
            .iter()
            .map(|e| e.evaluate(x).map_err(OperatorError::from))
            .collect()
    }

    /// Largest entrywise [`Expression::symbolic_residual`].
    pub fn symbolic_residual(&self, other: &Self) -> Result<f64, OperatorError> {
        self.same_shape(other)?;
        let mut worst: f64 = 0.0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            worst = worst.max(a.symbolic_residual(b)?);
        }
        Ok(worst)
    }

    /// `max_x max_ij |a − b| / max(1, max_x max_ij |b|)` over `grid`.
    pub fn grid_residual(&self, other: &Self, grid: &[f64]) -> Result<f64, OperatorError> {
        self.same_shape(other)?;
        let mut diff: f64 = 0.0;
        let mut scale: f64 = 1.0;
        for &x in grid {
            for (a, b) in self.evaluate(x)?.iter().zip(other.evaluate(x)?) {
                diff = diff.max((a - b).norm());
                scale = scale.max(b.norm());
            }
        }
        Ok(diff / scale)
    }

    fn same_shape(&self, other: &Self) -> Result<(), OperatorError> {
        if self.n != other.n {
            return Err(OperatorError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.base_point != other.base_point {
            return Err(OperatorError::BasePointMismatch {
                left: self.base_point,
                right: other.base_point,
            });
        }
        Ok(())
    }
}

impl Serialize for MatrixExprFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[Expression]> = self.entries.chunks(self.n.max(1)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixExprFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Expression>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("matrix function must be square"));
        }
        let base = rows
            .first()
            .and_then(|r| r.first())
            .map_or(0.0, |e| e.base_point());
        Self::new(n, base, rows.concat()).map_err(serde::de::Error::custom)
    }
}

/// Length-`n` array of expressions with one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorExprFunction {
    base_point: f64,
    entries: Vec<Expression>,
}

impl VectorExprFunction {
    pub fn new(base_point: f64, entries: Vec<Expression>) -> Result<Self, OperatorError> {
        check_uniform(base_point, &entries)?;
        Ok(Self {
            base_point,
            entries,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn entries(&self) -> &[Expression] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Expression {
        &self.entries[i]
    }

    /// `M v`.
    pub fn mul_matrix(
        m: &CMatrix,
        v: &[Expression],
        base_point: f64,
    ) -> Result<Self, OperatorError> {
        let n = m.n();
        let entries = (0..n)
            .map(|i| Expression::linear_combination(base_point, (0..n).map(|j| (m[(i, j)], &v[j]))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            base_point,
            entries,
        })
    }

    pub fn symbolic_residual(&self, other: &Self) -> Result<f64, OperatorError> {
        if self.len() != other.len() {
            return Err(OperatorError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            worst = worst.max(a.symbolic_residual(b)?);
        }
        Ok(worst)
    }
}

impl Serialize for VectorExprFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VectorExprFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = Vec::<Expression>::deserialize(d)?;
        let base = entries.first().map_or(0.0, |e| e.base_point());
        Self::new(base, entries).map_err(serde::de::Error::custom)
    }
}
