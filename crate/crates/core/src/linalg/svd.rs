use num_complex::Complex64;

use super::{CMatrix, LinalgError};
use crate::scalar::ComplexScalar;

const MAX_SWEEPS: usize = 80;

/// Singular values (descending) and right singular vectors of a square
/// matrix, by one-sided Jacobi rotations.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// Columns are right singular vectors, in the order of `singular_values`.
    pub v: CMatrix,
}

impl Svd {
    /// Orthonormal basis of the `k` right singular vectors with the smallest
    /// singular values, and those values.
    pub fn smallest(&self, k: usize) -> (Vec<Vec<ComplexScalar>>, Vec<f64>) {
        let n = self.singular_values.len();
        let idx = n - k..n;
        (
            idx.clone().map(|j| self.v.column(j)).collect(),
            idx.map(|j| self.singular_values[j]).collect(),
        )
    }

    pub fn condition_number(&self) -> f64 {
        let max = self.singular_values.first().copied().unwrap_or(0.0);
        let min = self.singular_values.last().copied().unwrap_or(0.0);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Number of singular values above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.singular_values
            .iter()
            .filter(|&&s| s > threshold)
            .count()
    }
}

pub fn svd(a: &CMatrix) -> Result<Svd, LinalgError> {
    let n = a.n();
    // column storage
    let mut cols: Vec<Vec<ComplexScalar>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<ComplexScalar>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: ComplexScalar = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g == 0.0 || g <= n as f64 * f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut cols, &mut v] {
                    let (left, right) = m.split_at_mut(q);
                    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let yt = *y * phase.conj();
                        let xn = *x * c - yt * s;
                        let yn = *x * s + yt * c;
                        *x = xn;
                        *y = yn * phase;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence("singular value decomposition"));
    }
    let mut order: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let vs: Vec<Vec<ComplexScalar>> = order.iter().map(|&(_, j)| v[j].clone()).collect();
    Ok(Svd {
        singular_values: order.iter().map(|&(s, _)| s).collect(),
        v: CMatrix::from_columns(&vs),
    })
}
