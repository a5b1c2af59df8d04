use num_complex::Complex64;

use super::svd::svd;
use super::{CMatrix, LinalgError, CLUSTER_TOL, DEFAULT_TOL, MAX_EIGEN_DIM};
use crate::scalar::ComplexScalar;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ITERATIONS_PER_EIGENVALUE: usize = 60;
// smallest singular value of A − μI, relative to ‖A‖, still counted as zero
const NULL_TOL: f64 = 1e-11;
// above this the eigenvector basis is treated as numerically defective
pub(crate) const CONDITION_CAP: f64 = 1e8;

/// How a group of nearly equal eigenvalues was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterKind {
    /// One eigenvalue with a full eigenspace.
    Semisimple,
    /// Distinct eigenvalues closer than the clustering radius, each with
    /// its own eigenvector.
    Split,
    /// Fewer independent eigenvectors than the multiplicity.
    Defective,
}

#[derive(Debug, Clone)]
pub struct EigenCluster {
    /// Mean of the members.
    pub value: ComplexScalar,
    pub members: Vec<ComplexScalar>,
    pub kind: ClusterKind,
    /// Unit eigenvectors; empty for defective clusters.
    pub vectors: Vec<Vec<ComplexScalar>>,
}

impl EigenCluster {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// All eigenvalues with multiplicity, sorted by real then imaginary part.
    pub eigenvalues: Vec<ComplexScalar>,
    pub clusters: Vec<EigenCluster>,
    /// Eigenvector columns grouped by cluster; `None` when defective.
    pub eigenvectors: Option<CMatrix>,
    /// Condition number of the eigenvector matrix (infinite when defective).
    pub condition: f64,
    /// Whether `eigenvectors` was orthonormalized as a unitary matrix.
    pub unitary: bool,
}

fn householder_hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.n();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<ComplexScalar> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0] == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x;
        v[0] += phase * norm;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vn;
        }
        // H ← (I − 2vv*) H (I − 2vv*)
        for j in 0..n {
            let dot: ComplexScalar = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            for r in 0..v.len() {
                h[(k + 1 + r, j)] -= v[r] * dot * 2.0;
            }
        }
        for i in 0..n {
            let dot: ComplexScalar = (0..v.len()).map(|r| h[(i, k + 1 + r)] * v[r]).sum();
            for r in 0..v.len() {
                h[(i, k + 1 + r)] -= dot * v[r].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

fn givens(a: ComplexScalar, b: ComplexScalar) -> (f64, ComplexScalar) {
    let r = a.norm().hypot(b.norm());
    if r == 0.0 {
        (1.0, ZERO)
    } else if a == ZERO {
        (0.0, b.conj() / b.norm())
    } else {
        (a.norm() / r, (a / a.norm()) * b.conj() / r)
    }
}

fn wilkinson_shift(
    a: ComplexScalar,
    b: ComplexScalar,
    c: ComplexScalar,
    d: ComplexScalar,
) -> ComplexScalar {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (r1, r2) = (mean + disc, mean - disc);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// Eigenvalues by Hessenberg reduction and single-shift complex QR.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<ComplexScalar>, LinalgError> {
    let n = a.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = householder_hessenberg(a);
    let mut eig = vec![ZERO; n];
    let mut hi = n - 1;
    let mut iter = 0;
    let norm = a.frobenius_norm();
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            let s = if s == 0.0 { norm } else { s };
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > ITERATIONS_PER_EIGENVALUE {
            return Err(LinalgError::NoConvergence("QR eigenvalue iteration"));
        }
        let sigma = if iter % 10 == 0 {
            h[(hi, hi)] + Complex64::new(0.75, 0.4) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        for k in l..=hi {
            h[(k, k)] -= sigma;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (k, &(c, s)) in (l..hi).zip(&rots) {
            for i in l..=(k + 1).min(hi) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for k in l..=hi {
            h[(k, k)] += sigma;
        }
    }
    eig[0] = h[(0, 0)];
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eig)
}

/// Single-linkage grouping of sorted eigenvalues within `radius`.
pub(crate) fn group(eig: &[ComplexScalar], radius: f64) -> Vec<Vec<ComplexScalar>> {
    let n = eig.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<ComplexScalar>)> = Vec::new();
    for (i, &z) in eig.iter().enumerate().take(n) {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, v)) => v.push(z),
            None => groups.push((r, vec![z])),
        }
    }
    groups.into_iter().map(|(_, v)| v).collect()
}

pub(crate) fn mean(v: &[ComplexScalar]) -> ComplexScalar {
    v.iter().sum::<ComplexScalar>() / v.len() as f64
}

pub(crate) fn normalize(v: &mut [ComplexScalar]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

fn inverse_iteration(
    a: &CMatrix,
    lambda: ComplexScalar,
    scale: f64,
) -> Result<Vec<ComplexScalar>, LinalgError> {
    let n = a.n();
    let lu = match a.shift(lambda).lu() {
        Ok(lu) => lu,
        Err(_) => a
            .shift(lambda + Complex64::new(1.0, 1.0) * (1e-14 * scale.max(f64::MIN_POSITIVE)))
            .lu()?,
    };
    let mut x: Vec<ComplexScalar> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64))
        .collect();
    normalize(&mut x);
    for _ in 0..3 {
        x = lu.solve(&x);
        if !x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(LinalgError::NoConvergence("inverse iteration"));
        }
        normalize(&mut x);
    }
    let r = a.mul_vec(&x);
    let resid = r
        .iter()
        .zip(&x)
        .map(|(y, v)| (y - lambda * v).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if resid > 1e-8 * scale.max(f64::MIN_POSITIVE) {
        return Err(LinalgError::NoConvergence("inverse iteration"));
    }
    Ok(x)
}

fn resolve_cluster(
    a: &CMatrix,
    members: Vec<ComplexScalar>,
    scale: f64,
) -> Result<EigenCluster, LinalgError> {
    let value = mean(&members);
    if members.len() == 1 {
        return Ok(EigenCluster {
            value,
            vectors: vec![inverse_iteration(a, value, scale)?],
            members,
            kind: ClusterKind::Semisimple,
        });
    }
    let m = members.len();
    let (basis, sv) = svd(&a.shift(value))?.smallest(m);
    if sv.iter().all(|&s| s <= NULL_TOL * scale) {
        return Ok(EigenCluster {
            value,
            members,
            kind: ClusterKind::Semisimple,
            vectors: basis,
        });
    }
    let own: Result<Vec<_>, _> = members
        .iter()
        .map(|&l| inverse_iteration(a, l, scale))
        .collect();
    if let Ok(own) = own {
        let mut padded = own.clone();
        padded.resize(a.n(), vec![ZERO; a.n()]);
        let cond = {
            let s = svd(&CMatrix::from_columns(&padded))?;
            s.singular_values[0] / s.singular_values[m - 1]
        };
        if cond < CONDITION_CAP {
            return Ok(EigenCluster {
                value,
                members,
                kind: ClusterKind::Split,
                vectors: own,
            });
        }
    }
    Ok(EigenCluster {
        value,
        members,
        kind: ClusterKind::Defective,
        vectors: Vec::new(),
    })
}

/// Modified Gram–Schmidt on the columns of `p`.
pub(crate) fn orthonormalize(cols: &mut [Vec<ComplexScalar>]) {
    for j in 0..cols.len() {
        for i in 0..j {
            let dot: ComplexScalar = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(u, v)| u.conj() * v)
                .sum();
            let ci = cols[i].clone();
            for (v, u) in cols[j].iter_mut().zip(&ci) {
                *v -= dot * u;
            }
        }
        normalize(&mut cols[j]);
    }
}

pub(crate) fn is_normal(a: &CMatrix, tol: f64) -> (bool, f64) {
    let norm = a.frobenius_norm();
    let ratio = if norm == 0.0 {
        0.0
    } else {
        a.commutator_norm(&a.adjoint()) / (norm * norm)
    };
    (ratio <= tol, ratio)
}

/// Eigenvalues, clustered at `1e−8·‖A‖_F`, with eigenvectors when the
/// matrix is diagonalizable. Simple eigenvalues get their vector by inverse
/// iteration, repeated ones by a null-space computation.
pub fn eigen_decompose(a: &CMatrix) -> Result<EigenDecomposition, LinalgError> {
    let n = a.n();
    if n > MAX_EIGEN_DIM {
        return Err(LinalgError::TooLarge {
            n,
            max: MAX_EIGEN_DIM,
        });
    }
    let scale = a.frobenius_norm();
    let eigenvalues = eigenvalues(a)?;
    let clusters: Vec<EigenCluster> = group(&eigenvalues, CLUSTER_TOL * scale)
        .into_iter()
        .map(|m| resolve_cluster(a, m, scale))
        .collect::<Result<_, _>>()?;
    if clusters.iter().any(|c| c.kind == ClusterKind::Defective) {
        return Ok(EigenDecomposition {
            eigenvalues,
            clusters,
            eigenvectors: None,
            condition: f64::INFINITY,
            unitary: false,
        });
    }
    let mut cols: Vec<Vec<ComplexScalar>> =
        clusters.iter().flat_map(|c| c.vectors.clone()).collect();
    let unitary = is_normal(a, DEFAULT_TOL).0;
    if unitary {
        orthonormalize(&mut cols);
    }
    let p = CMatrix::from_columns(&cols);
    let condition = if n == 0 {
        1.0
    } else {
        svd(&p)?.condition_number()
    };
    Ok(EigenDecomposition {
        eigenvalues,
        clusters,
        eigenvectors: Some(p),
        condition,
        unitary,
    })
}
