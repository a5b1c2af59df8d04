use serde::Serialize;

use super::eigen::{eigen_decompose, is_normal, ClusterKind, EigenDecomposition, CONDITION_CAP};
use super::{CMatrix, LinalgError};
use crate::scalar::ComplexScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixClass {
    Normal,
    DiagonalizableOnly,
    JordanOnly,
}

/// Class of a matrix together with the evidence used to decide it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub class: MatrixClass,
    /// Tolerance on `‖AA* − A*A‖_F / ‖A‖_F²`.
    pub tol: f64,
    pub commutator_ratio: f64,
    /// Condition number of the eigenvector basis, infinite if none exists.
    pub eigenvector_condition: f64,
    pub condition_cap: f64,
}

impl Classification {
    pub fn is_diagonalizable(&self) -> bool {
        self.class != MatrixClass::JordanOnly
    }
}

pub fn classify(a: &CMatrix, tol: f64) -> Classification {
    let (normal, ratio) = is_normal(a, tol);
    let condition = match eigen_decompose(a) {
        Ok(EigenDecomposition {
            eigenvectors: Some(_),
            condition,
            ..
        }) => condition,
        _ => f64::INFINITY,
    };
    let class = if normal {
        MatrixClass::Normal
    } else if condition < CONDITION_CAP {
        MatrixClass::DiagonalizableOnly
    } else {
        MatrixClass::JordanOnly
    };
    Classification {
        class,
        tol,
        commutator_ratio: ratio,
        eigenvector_condition: condition,
        condition_cap: CONDITION_CAP,
    }
}

/// Distinct eigenvalues of a diagonalizable matrix with their spectral
/// projectors and the eigenvector similarity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalues: Vec<ComplexScalar>,
    pub multiplicities: Vec<usize>,
    pub projectors: Vec<CMatrix>,
    /// Eigenvector columns, grouped by eigenvalue in the order above.
    pub p: CMatrix,
    pub p_inv: CMatrix,
    pub unitary: bool,
}

/// Frobenius norms of the defects in the four projector identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectorResiduals {
    /// `max ‖G_iG_j‖`, `i ≠ j`
    pub orthogonality: f64,
    /// `max ‖G_i² − G_i‖`
    pub idempotence: f64,
    /// `‖ΣG_i − I‖`
    pub resolution: f64,
    /// `‖Σλ_iG_i − A‖`
    pub reconstruction: f64,
}

impl ProjectorResiduals {
    pub fn max(&self) -> f64 {
        self.orthogonality
            .max(self.idempotence)
            .max(self.resolution)
            .max(self.reconstruction)
    }
}

impl SpectralData {
    pub fn n(&self) -> usize {
        self.p.n()
    }

    /// Column ranges of `p` belonging to each eigenvalue.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.multiplicities
            .iter()
            .map(|&m| {
                let r = start..start + m;
                start += m;
                r
            })
            .collect()
    }

    pub fn residuals(&self, a: &CMatrix) -> ProjectorResiduals {
        let n = self.n();
        let g = &self.projectors;
        let mut orthogonality: f64 = 0.0;
        let mut idempotence: f64 = 0.0;
        let mut sum = CMatrix::zeros(n);
        let mut recon = CMatrix::zeros(n);
        for (i, gi) in g.iter().enumerate() {
            for (j, gj) in g.iter().enumerate() {
                let prod = gi * gj;
                if i == j {
                    idempotence = idempotence.max((&prod - gi).frobenius_norm());
                } else {
                    orthogonality = orthogonality.max(prod.frobenius_norm());
                }
            }
            sum = &sum + gi;
            recon = &recon + &gi.scale(self.eigenvalues[i]);
        }
        ProjectorResiduals {
            orthogonality,
            idempotence,
            resolution: (&sum - &CMatrix::identity(n)).frobenius_norm(),
            reconstruction: (&recon - a).frobenius_norm(),
        }
    }
}

/// Spectral projectors `G_i = P E_i P⁻¹`, `E_i` selecting the eigenvector
/// columns of `λ_i`; equal to the Frobenius covariants of [`frobenius_covariants`].
pub fn spectral_projectors(a: &CMatrix) -> Result<SpectralData, LinalgError> {
    let dec = eigen_decompose(a)?;
    if let Some(c) = dec.clusters.iter().find(|c| c.kind == ClusterKind::Split) {
        return Err(LinalgError::EigenvalueCluster(c.members.clone()));
    }
    let p = match dec.eigenvectors {
        Some(p) if dec.condition < CONDITION_CAP => p,
        _ => return Err(LinalgError::Defective),
    };
    let p_inv = if dec.unitary {
        p.adjoint()
    } else {
        p.inverse()?
    };
    let n = a.n();
    let multiplicities: Vec<usize> = dec.clusters.iter().map(|c| c.multiplicity()).collect();
    let mut projectors = Vec::with_capacity(dec.clusters.len());
    let mut start = 0;
    for &m in &multiplicities {
        let mut g = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = (start..start + m).map(|k| p[(i, k)] * p_inv[(k, j)]).sum();
            }
        }
        let eps = 64.0 * f64::EPSILON * g.max_abs().max(1.0);
        projectors.push(g.snap_zeros(eps));
        start += m;
    }
    Ok(SpectralData {
        eigenvalues: dec.clusters.iter().map(|c| c.value).collect(),
        multiplicities,
        projectors,
        p,
        p_inv,
        unitary: dec.unitary,
    })
}

/// `G_i = Π_{j≠i} (A − λ_jI)/(λ_i − λ_j)` over the given distinct eigenvalues.
pub fn frobenius_covariants(a: &CMatrix, eigenvalues: &[ComplexScalar]) -> Vec<CMatrix> {
    let n = a.n();
    eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &li)| {
            eigenvalues
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(CMatrix::identity(n), |acc, (_, &lj)| {
                    (&acc * &a.shift(lj)).scale((li - lj).inv())
                })
        })
        .collect()
}
