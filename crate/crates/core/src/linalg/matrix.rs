use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LinalgError;
use crate::scalar::{is_finite, ComplexScalar, JsonComplex};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<ComplexScalar>,
}

impl CMatrix {
    pub fn new(n: usize, data: Vec<ComplexScalar>) -> Result<Self, LinalgError> {
        if data.len() != n * n {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        if !data.iter().all(|z| is_finite(*z)) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<ComplexScalar>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinalgError::Shape(
                "rows of unequal length or non-square".into(),
            ));
        }
        Self::new(n, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<ComplexScalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![ONE; n])
    }

    pub fn diag(d: &[ComplexScalar]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Matrix whose columns are `cols`.
    pub fn from_columns(cols: &[Vec<ComplexScalar>]) -> Self {
        let n = cols.len();
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<ComplexScalar>> {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<ComplexScalar> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[ComplexScalar]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = *x;
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, c: ComplexScalar) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// `A − μI`.
    pub fn shift(&self, mu: ComplexScalar) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] -= mu;
        }
        m
    }

    pub fn mul_vec(&self, v: &[ComplexScalar]) -> Vec<ComplexScalar> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| &acc * self)
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `‖AB − BA‖_F`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (&(self * other) - &(other * self)).frobenius_norm()
    }

    /// Entries with modulus at most `eps` set to exact zero.
    pub fn snap_zeros(&self, eps: f64) -> Self {
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .map(|z| {
                    let re = if z.re.abs() <= eps { 0.0 } else { z.re };
                    let im = if z.im.abs() <= eps { 0.0 } else { z.im };
                    Complex64::new(re, im)
                })
                .collect(),
        }
    }

    pub fn lu(&self) -> Result<Lu, LinalgError> {
        Lu::new(self)
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        self.lu()?.inverse()
    }

    pub fn determinant(&self) -> ComplexScalar {
        Lu::new(self).map(|lu| lu.determinant()).unwrap_or(ZERO)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = ComplexScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    fn new(a: &CMatrix) -> Result<Self, LinalgError> {
        let n = a.n;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap();
            if lu[(p, k)] == ZERO {
                return Err(LinalgError::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn solve(&self, b: &[ComplexScalar]) -> Vec<ComplexScalar> {
        let n = self.lu.n;
        let mut x: Vec<ComplexScalar> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = self.lu[(i, j)] * x[j];
                x[i] -= v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = self.lu[(i, j)] * x[j];
                x[i] -= v;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> Result<CMatrix, LinalgError> {
        let n = self.lu.n;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            cols.push(self.solve(&e));
        }
        let inv = CMatrix::from_columns(&cols);
        if inv.data.iter().all(|z| is_finite(*z)) {
            Ok(inv)
        } else {
            Err(LinalgError::Singular)
        }
    }

    pub fn determinant(&self) -> ComplexScalar {
        (0..self.lu.n).fold(Complex64::new(self.sign, 0.0), |acc, i| {
            acc * self.lu[(i, i)]
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<JsonComplex>>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            entries: self
                .data
                .chunks(self.n.max(1))
                .take(self.n)
                .map(|r| r.iter().map(|z| JsonComplex(*z)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.entries.len() != r.n {
            return Err(serde::de::Error::custom(format!(
                "entries has {} rows, expected n = {}",
                r.entries.len(),
                r.n
            )));
        }
        let rows: Vec<Vec<ComplexScalar>> = r
            .entries
            .into_iter()
            .map(|row| row.into_iter().map(Into::into).collect())
            .collect();
        CMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}
