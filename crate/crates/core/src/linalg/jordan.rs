use num_complex::Complex64;

use super::eigen::{eigenvalues, group, mean, normalize, orthonormalize};
use super::svd::svd;
use super::{CMatrix, LinalgError, CLUSTER_TOL, MAX_JORDAN_DIM};
use crate::scalar::ComplexScalar;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
// eigenvalues of one defective block of size k spread like ε^{1/k}
const COARSE_CLUSTER: f64 = 1e-3;
// a candidate direction shorter than this, after projection, is dependent
const DIRECTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanSegment {
    pub eigenvalue: ComplexScalar,
    pub size: usize,
}

/// `A = P J P⁻¹` with `J` block diagonal in Jordan segments.
///
/// Columns of `p` for one segment are the chain `[N^{s−1}v, …, Nv, v]`,
/// `N = A − λI`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanData {
    pub p: CMatrix,
    pub p_inv: CMatrix,
    pub segments: Vec<JordanSegment>,
    /// Condition number of `p`.
    pub condition: f64,
}

impl JordanData {
    /// First column of each segment.
    pub fn offsets(&self) -> Vec<usize> {
        let mut start = 0;
        self.segments
            .iter()
            .map(|s| {
                let o = start;
                start += s.size;
                o
            })
            .collect()
    }

    pub fn jordan_matrix(&self) -> CMatrix {
        let mut j = CMatrix::zeros(self.p.n());
        for (seg, o) in self.segments.iter().zip(self.offsets()) {
            for r in 0..seg.size {
                j[(o + r, o + r)] = seg.eigenvalue;
                if r + 1 < seg.size {
                    j[(o + r, o + r + 1)] = Complex64::new(1.0, 0.0);
                }
            }
        }
        j
    }

    pub fn reconstruct(&self) -> CMatrix {
        &(&self.p * &self.jordan_matrix()) * &self.p_inv
    }

    pub fn max_segment(&self) -> usize {
        self.segments.iter().map(|s| s.size).max().unwrap_or(0)
    }
}

/// Orthonormal basis of the null space of `m` at `threshold`, and the
/// singular values that decided it.
fn null_space(
    m: &CMatrix,
    threshold: f64,
) -> Result<(Vec<Vec<ComplexScalar>>, Vec<f64>), LinalgError> {
    let s = svd(m)?;
    let k = m.n() - s.rank(threshold);
    Ok((s.smallest(k).0, s.singular_values))
}

fn nullity(m: &CMatrix, threshold: f64) -> Result<usize, LinalgError> {
    Ok(m.n() - svd(m)?.rank(threshold))
}

fn ambiguous(values: &[f64], threshold: f64) -> Option<f64> {
    values
        .iter()
        .copied()
        .find(|&s| s > threshold / 10.0 && s < threshold * 10.0)
}

/// Columns of `cols` spanning the part of their span orthogonal to `against`.
fn fresh_directions(
    cols: &[Vec<ComplexScalar>],
    against: &[Vec<ComplexScalar>],
) -> Result<(Vec<Vec<ComplexScalar>>, Vec<f64>), LinalgError> {
    let n = cols.first().map_or(0, |c| c.len());
    let projected: Vec<Vec<ComplexScalar>> = cols
        .iter()
        .map(|c| {
            let mut v = c.clone();
            for u in against {
                let dot: ComplexScalar = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= dot * y;
                }
            }
            v
        })
        .collect();
    let mut padded = projected.clone();
    padded.resize(n, vec![ZERO; n]);
    let c = CMatrix::from_columns(&padded);
    let s = svd(&c)?;
    let dirs = (0..n)
        .filter(|&j| s.singular_values[j] > DIRECTION_TOL)
        .map(|j| {
            let mut d = c.mul_vec(&s.v.column(j));
            normalize(&mut d);
            d
        })
        .collect();
    Ok((dirs, s.singular_values))
}

/// Jordan chains with their lengths, eigenvector first.
type Chains = Vec<(usize, Vec<Vec<ComplexScalar>>)>;

fn chains_for(a: &CMatrix, mu: ComplexScalar, m: usize, tol: f64) -> Result<Chains, LinalgError> {
    let n = a.n();
    let nmat = a.shift(mu);
    let nn = nmat.frobenius_norm().max(f64::MIN_POSITIVE);
    // null spaces of N^k until the multiplicity is reached
    let mut kernels: Vec<Vec<Vec<ComplexScalar>>> = vec![Vec::new()];
    let mut power = CMatrix::identity(n);
    let mut k = 0;
    while kernels[k].len() < m {
        k += 1;
        if k > m {
            return Err(LinalgError::AmbiguousStructure(format!(
                "no nilpotent structure of order {m} found at eigenvalue {mu}"
            )));
        }
        power = &power * &nmat;
        let threshold = tol * nn.powi(k as i32);
        let (basis, sv) = null_space(&power, threshold)?;
        if let Some(s) = ambiguous(&sv, threshold) {
            return Err(LinalgError::AmbiguousStructure(format!(
                "singular value {s:.3e} of (A - {mu}I)^{k} is within a factor 10 of the threshold {threshold:.3e}"
            )));
        }
        if basis.len() > m || basis.len() < kernels[k - 1].len() {
            return Err(LinalgError::AmbiguousStructure(format!(
                "inconsistent kernel dimensions at eigenvalue {mu}"
            )));
        }
        kernels.push(basis);
    }
    let depth = k;
    let dims: Vec<usize> = kernels.iter().map(|b| b.len()).collect();
    // blocks of size ≥ s: dims[s] − dims[s−1]
    let at_least = |s: usize| if s > depth { 0 } else { dims[s] - dims[s - 1] };
    let mut chains: Vec<(usize, Vec<Vec<ComplexScalar>>)> = Vec::new();
    for s in (1..=depth).rev() {
        let count = at_least(s) - at_least(s + 1);
        if count == 0 {
            continue;
        }
        // exclude K_{s−1} and the level-s vectors of longer chains
        let mut against: Vec<Vec<ComplexScalar>> = kernels[s - 1].clone();
        for (_, chain) in &chains {
            against.push(chain[s - 1].clone());
        }
        orthonormalize(&mut against);
        let (dirs, _) = fresh_directions(&kernels[s], &against)?;
        if dirs.len() != count {
            return Err(LinalgError::AmbiguousStructure(format!(
                "expected {count} Jordan chains of length {s} at eigenvalue {mu}, found {}",
                dirs.len()
            )));
        }
        for top in dirs {
            let mut chain = vec![top];
            for _ in 1..s {
                let next = nmat.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chain.reverse();
            // unit eigenvector with a real leading component
            let head = &chain[0];
            let norm = head.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let lead = head
                .iter()
                .copied()
                .fold(ZERO, |b, z| if z.norm() > b.norm() { z } else { b });
            let f = lead.conj() / (lead.norm() * norm);
            for v in &mut chain {
                for z in v.iter_mut() {
                    *z *= f;
                }
            }
            chains.push((s, chain));
        }
    }
    Ok(chains)
}

fn clusters(a: &CMatrix, tol: f64) -> Result<Vec<(ComplexScalar, usize)>, LinalgError> {
    let eig = eigenvalues(a)?;
    let scale = a.frobenius_norm();
    let mut out = Vec::new();
    for coarse in group(&eig, COARSE_CLUSTER * scale) {
        let valid = |members: &[ComplexScalar]| -> Result<bool, LinalgError> {
            let mu = mean(members);
            let nmat = a.shift(mu);
            let k = members.len();
            let threshold = tol * nmat.frobenius_norm().max(f64::MIN_POSITIVE).powi(k as i32);
            Ok(nullity(&nmat.pow(k), threshold)? == k)
        };
        if valid(&coarse)? {
            out.push((mean(&coarse), coarse.len()));
            continue;
        }
        for fine in group(&coarse, CLUSTER_TOL * scale) {
            if !valid(&fine)? {
                return Err(LinalgError::AmbiguousStructure(format!(
                    "eigenvalues near {} do not form a consistent Jordan structure",
                    mean(&fine)
                )));
            }
            out.push((mean(&fine), fine.len()));
        }
    }
    out.sort_by(|x, y| x.0.re.total_cmp(&y.0.re).then(x.0.im.total_cmp(&y.0.im)));
    Ok(out)
}

/// Jordan decomposition for `n ≤ 8` with rank decisions at singular-value
/// threshold `tol·‖A − λI‖^k`.
///
/// Refuses rather than guesses: singular values within a factor 10 of the
/// threshold, or a reconstruction worse than `tol·‖A‖_F`, are errors.
pub fn jordan_decompose(a: &CMatrix, tol: f64) -> Result<JordanData, LinalgError> {
    let n = a.n();
    if n > MAX_JORDAN_DIM {
        return Err(LinalgError::TooLarge {
            n,
            max: MAX_JORDAN_DIM,
        });
    }
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(JordanData {
            p: CMatrix::identity(n),
            p_inv: CMatrix::identity(n),
            segments: vec![
                JordanSegment {
                    eigenvalue: ZERO,
                    size: 1
                };
                n
            ],
            condition: 1.0,
        });
    }
    let mut cols = Vec::with_capacity(n);
    let mut segments = Vec::new();
    for (mu, m) in clusters(a, tol)? {
        for (size, chain) in chains_for(a, mu, m, tol)? {
            segments.push(JordanSegment {
                eigenvalue: mu,
                size,
            });
            cols.extend(chain);
        }
    }
    if cols.len() != n {
        return Err(LinalgError::AmbiguousStructure(format!(
            "found {} chain vectors for dimension {n}",
            cols.len()
        )));
    }
    let p = CMatrix::from_columns(&cols);
    let condition = svd(&p)?.condition_number();
    let p_inv = p.inverse()?;
    let data = JordanData {
        p,
        p_inv,
        segments,
        condition,
    };
    let err = (&data.reconstruct() - a).frobenius_norm();
    if err > tol * scale {
        return Err(LinalgError::AmbiguousStructure(format!(
            "reconstruction error {err:.3e} exceeds {:.3e}",
            tol * scale
        )));
    }
    Ok(data)
}
