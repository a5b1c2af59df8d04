use num_complex::Complex64;

use super::{OracleError, SampledFunction};
use crate::scalar::{is_finite, ComplexScalar};
use crate::special::recip_gamma;
use crate::symbolic::Order;

/// Ratio between consecutive panels of the geometric mesh.
const GRADING: f64 = 0.25;
/// Smallest panel, relative to the half-interval.
const DEPTH: f64 = 1e-150;
const POINTS: usize = 12;
const REFINED_POINTS: usize = 16;
const AGREEMENT: f64 = 1e-9;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `∫_0^d g(s) ds` on panels `[dσ^{i+1}, dσ^i]` shrinking toward `s = 0`.
pub(crate) fn graded_integral(
    d: f64,
    rule: &(Vec<f64>, Vec<f64>),
    mut g: impl FnMut(f64) -> ComplexScalar,
) -> ComplexScalar {
    let (nodes, weights) = rule;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut hi = d;
    let floor = d * DEPTH;
    while hi > 0.0 {
        let lo = if hi * GRADING < floor {
            0.0
        } else {
            hi * GRADING
        };
        let (mid, half) = ((hi + lo) / 2.0, (hi - lo) / 2.0);
        for (u, w) in nodes.iter().zip(weights) {
            acc += g(mid + half * u) * (w * half);
        }
        hi = lo;
    }
    acc
}

fn rl_pass(f: &SampledFunction, len: f64, alpha: ComplexScalar, n: usize) -> ComplexScalar {
    let rule = gauss_legendre(n);
    let half = len / 2.0;
    let kernel = |s: f64| ((alpha - 1.0) * s.ln()).exp();
    // left half graded toward the base point, right half toward x
    let left = graded_integral(half, &rule, |t| f.at_offset(t) * kernel(len - t));
    let right = graded_integral(half, &rule, |s| f.at_offset(len - s) * kernel(s));
    (left + right) * recip_gamma(alpha)
}

/// Riemann–Liouville integral `(1/Γ(α)) ∫_a^x f(ξ)(x−ξ)^{α−1} dξ`, `Re α > 0`,
/// i.e. the differintegral of order `−α`.
///
/// Geometric meshes toward both endpoints absorb an integrable singularity
/// of `f` at `a` and of the kernel at `x`. The result is accepted only when
/// a run with more nodes per panel agrees to relative `1e−9`.
pub fn rl_quadrature(
    f: &SampledFunction,
    x: f64,
    alpha: impl Into<Order>,
) -> Result<ComplexScalar, OracleError> {
    let alpha = alpha.into().value();
    if alpha.re <= 0.0 {
        return Err(OracleError::Precondition(format!(
            "integration order must have positive real part, got {alpha}"
        )));
    }
    f.check_point(x)?;
    let len = x - f.base_point();
    let estimate = rl_pass(f, len, alpha, POINTS);
    let refined = rl_pass(f, len, alpha, REFINED_POINTS);
    if !is_finite(estimate) || !is_finite(refined) {
        return Err(OracleError::NonFiniteSample { x });
    }
    if (estimate - refined).norm() > AGREEMENT * refined.norm().max(f64::MIN_POSITIVE) {
        return Err(OracleError::ConvergenceFailure { estimate, refined });
    }
    Ok(refined)
}
