use num_complex::Complex64;

use super::quadrature::{gauss_legendre, graded_integral};
use super::{OracleConfig, OracleError, SampledFunction};
use crate::scalar::{is_finite, ComplexScalar};
use crate::symbolic::Order;

const CELL_POINTS: usize = 8;
const FIRST_CELL_POINTS: usize = 12;

/// `h^{−λ} Σ_{j=0}^{N} (−1)^j C(λ, j) s[N−j]` with the weights generated by
/// `w_j = w_{j−1}(1 − (λ+1)/j)`.
fn gl_sum(samples: &[ComplexScalar], order: ComplexScalar, h: f64) -> ComplexScalar {
    let n = samples.len() - 1;
    let mut w = Complex64::new(1.0, 0.0);
    let mut acc = samples[n];
    for j in 1..=n {
        w *= 1.0 - (order + 1.0) / j as f64;
        acc += w * samples[n - j];
    }
    acc * (-order * h.ln()).exp()
}

/// Samples of `f` at offsets `i·h`, `i = 0..=n`, and whether `f(a)` is finite.
fn grid_samples(
    f: &SampledFunction,
    h: f64,
    n: usize,
) -> Result<(Vec<ComplexScalar>, bool), OracleError> {
    let mut s = Vec::with_capacity(n + 1);
    s.push(f.at_offset(0.0));
    for i in 1..=n {
        let t = i as f64 * h;
        let v = f.at_offset(t);
        if !is_finite(v) {
            return Err(OracleError::NonFiniteSample {
                x: f.base_point() + t,
            });
        }
        s.push(v);
    }
    let regular = is_finite(s[0]);
    Ok((s, regular))
}

/// Running integral `F(i·h) = ∫_0^{ih} f`, for `f` singular at the base point.
fn running_integral(
    f: &SampledFunction,
    h: f64,
    n: usize,
) -> Result<Vec<ComplexScalar>, OracleError> {
    let first = gauss_legendre(FIRST_CELL_POINTS);
    let (nodes, weights) = gauss_legendre(CELL_POINTS);
    let mut out = Vec::with_capacity(n + 1);
    out.push(Complex64::new(0.0, 0.0));
    let mut acc = graded_integral(h, &first, |t| f.at_offset(t));
    out.push(acc);
    for i in 2..=n {
        let mid = (i as f64 - 0.5) * h;
        for (u, w) in nodes.iter().zip(&weights) {
            acc += f.at_offset(mid + 0.5 * h * u) * (0.5 * h * w);
        }
        out.push(acc);
    }
    if out.iter().all(|v| is_finite(*v)) {
        Ok(out)
    } else {
        Err(OracleError::NonFiniteSample { x: f.base_point() })
    }
}

fn gl_single(
    f: &SampledFunction,
    x: f64,
    order: ComplexScalar,
    n: usize,
) -> Result<ComplexScalar, OracleError> {
    let h = (x - f.base_point()) / n as f64;
    let (samples, regular) = grid_samples(f, h, n)?;
    if regular {
        Ok(gl_sum(&samples, order, h))
    } else {
        // D^λ f = D^{λ+1} F with F(a) = 0
        Ok(gl_sum(&running_integral(f, h, n)?, order + 1.0, h))
    }
}

/// Grünwald–Letnikov differintegral of order `λ` at `x`, with `N, 2N, …`
/// steps combined by Richardson extrapolation.
///
/// If `f` is not finite at the base point the sum is applied with order
/// `λ+1` to the running integral of `f` instead.
pub fn gl_differint(
    f: &SampledFunction,
    x: f64,
    order: impl Into<Order>,
    cfg: &OracleConfig,
) -> Result<ComplexScalar, OracleError> {
    cfg.validate()?;
    f.check_point(x)?;
    let order = order.into().value();
    let levels = cfg.richardson_levels;
    let mut table: Vec<ComplexScalar> = (0..=levels)
        .map(|i| gl_single(f, x, order, cfg.steps << i))
        .collect::<Result<_, _>>()?;
    for k in 1..=levels {
        let factor = (1u64 << k) as f64;
        for i in (k..=levels).rev() {
            table[i] = (table[i] * factor - table[i - 1]) / (factor - 1.0);
        }
    }
    let v = table[levels];
    if is_finite(v) {
        Ok(v)
    } else {
        Err(OracleError::Overflow)
    }
}

/// Central finite difference of [`gl_differint`] in the order, `k ∈ {1, 2}`.
pub fn fd_lambda_derivative(
    f: &SampledFunction,
    x: f64,
    order: impl Into<Order>,
    k: usize,
    h_order: f64,
    cfg: &OracleConfig,
) -> Result<ComplexScalar, OracleError> {
    if !(1..=2).contains(&k) {
        return Err(OracleError::Precondition(format!(
            "finite-difference order must be 1 or 2, got {k}"
        )));
    }
    if !(1e-5..=1e-3).contains(&h_order) {
        return Err(OracleError::Precondition(format!(
            "order step must lie in [1e-5, 1e-3], got {h_order}"
        )));
    }
    let order = order.into().value();
    let plus = gl_differint(f, x, order + h_order, cfg)?;
    let minus = gl_differint(f, x, order - h_order, cfg)?;
    Ok(if k == 1 {
        (plus - minus) / (2.0 * h_order)
    } else {
        let mid = gl_differint(f, x, order, cfg)?;
        (plus - mid * 2.0 + minus) / (h_order * h_order)
    })
}
