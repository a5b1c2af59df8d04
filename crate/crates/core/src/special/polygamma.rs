use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{cos_pi, gamma, nearest_pole, recip_gamma, sin_pi};
use super::SpecialError;
use crate::scalar::{is_finite, ComplexScalar};

pub const MAX_POLYGAMMA_ORDER: usize = 3;

/// Highest derivative order of Γ or 1/Γ available: the complete Bell
/// polynomial of order `k` needs polygammas up to order `k - 1`.
pub const MAX_DERIVATIVE_ORDER: usize = MAX_POLYGAMMA_ORDER + 1;

// B_2, B_4, ..., B_20
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn polygamma_asymptotic(order: usize, z: ComplexScalar) -> ComplexScalar {
    let zi = z.inv();
    let zi2 = zi * zi;
    if order == 0 {
        let mut acc = z.ln() - 0.5 * zi;
        let mut zp = zi2;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            let two_k = 2.0 * (k + 1) as f64;
            acc -= zp * (*b / two_k);
            zp *= zi2;
        }
        return acc;
    }
    let n = order;
    let zn = zi.powu(n as u32);
    let mut acc = zn * factorial(n - 1) + zn * zi * (factorial(n) / 2.0);
    // B_{2k} (2k+n-1)! / ((2k)! z^{2k+n})
    let mut zp = zn * zi2;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2 * (k + 1);
        let ratio: f64 = ((two_k + 1)..=(two_k + n - 1)).map(|m| m as f64).product();
        acc += zp * (*b * ratio);
        zp *= zi2;
    }
    if n % 2 == 0 {
        -acc
    } else {
        acc
    }
}

/// `ψ^(order)(z)` for `order ≤ 3`; order 0 is the digamma function.
pub fn polygamma(order: usize, z: ComplexScalar) -> Result<ComplexScalar, SpecialError> {
    if order > MAX_POLYGAMMA_ORDER {
        return Err(SpecialError::UnsupportedOrder(order));
    }
    if nearest_pole(z).is_some() {
        return Err(SpecialError::Pole(z));
    }
    // ψ^(n)(z) = ψ^(n)(z+1) - (-1)^n n! / z^(n+1)
    let sign_fact = if order % 2 == 0 { 1.0 } else { -1.0 } * factorial(order);
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < ASYMPTOTIC_THRESHOLD {
        shift += sign_fact * w.powu(order as u32 + 1).inv();
        w += 1.0;
    }
    let value = polygamma_asymptotic(order, w) - shift;
    if is_finite(value) {
        Ok(value)
    } else {
        Err(SpecialError::Overflow(z))
    }
}

/// Complete Bell polynomials `Y_0..=Y_k` in the variables `x[0] = x_1, x[1] = x_2, ...`.
///
/// If `x_j` are the derivatives of `u`, then `Y_k` is `(e^u)^(k) / e^u`.
pub fn bell_complete(x: &[ComplexScalar], k: usize) -> Vec<ComplexScalar> {
    let mut y = vec![Complex64::new(0.0, 0.0); k + 1];
    y[0] = Complex64::new(1.0, 0.0);
    for n in 0..k {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for i in 0..=n {
            acc += binom * y[n - i] * x[i];
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
        y[n + 1] = acc;
    }
    y
}

fn polygamma_vector(z: ComplexScalar, k: usize) -> Result<Vec<ComplexScalar>, SpecialError> {
    (0..k).map(|n| polygamma(n, z)).collect()
}

/// `[Γ(z), Γ'(z), ..., Γ^(k)(z)]`.
pub fn gamma_derivatives(z: ComplexScalar, k: usize) -> Result<Vec<ComplexScalar>, SpecialError> {
    if k > MAX_DERIVATIVE_ORDER {
        return Err(SpecialError::UnsupportedOrder(k - 1));
    }
    let g = gamma(z)?;
    let psi = polygamma_vector(z, k)?;
    Ok(bell_complete(&psi, k).into_iter().map(|b| b * g).collect())
}

/// Ratios `(1/Γ)^(j)(z) · Γ(z)` for `j = 0..=k`, away from poles.
pub(crate) fn recip_gamma_ratios(
    z: ComplexScalar,
    k: usize,
) -> Result<Vec<ComplexScalar>, SpecialError> {
    let neg_psi: Vec<_> = polygamma_vector(z, k)?.into_iter().map(|p| -p).collect();
    Ok(bell_complete(&neg_psi, k))
}

/// Ratios `Γ^(j)(z) / Γ(z)` for `j = 0..=k`.
pub(crate) fn gamma_ratios(z: ComplexScalar, k: usize) -> Result<Vec<ComplexScalar>, SpecialError> {
    let psi = polygamma_vector(z, k)?;
    Ok(bell_complete(&psi, k))
}

/// `[1/Γ, (1/Γ)', ..., (1/Γ)^(k)]` at `z`. Entire; finite at the poles of Γ.
///
/// Left of `Re z = 1/2` the reflection `1/Γ(z) = Γ(1-z) sin(πz) / π` is
/// differentiated with the product rule, so no pole is ever evaluated.
pub fn recip_gamma_derivatives(
    z: ComplexScalar,
    k: usize,
) -> Result<Vec<ComplexScalar>, SpecialError> {
    if k > MAX_DERIVATIVE_ORDER {
        return Err(SpecialError::UnsupportedOrder(k - 1));
    }
    if z.re >= 0.5 {
        let r = recip_gamma(z);
        return Ok(recip_gamma_ratios(z, k)?
            .into_iter()
            .map(|b| b * r)
            .collect());
    }
    let w = 1.0 - z;
    // d^j/dz^j Γ(1-z) = (-1)^j Γ^(j)(1-z)
    let g = gamma_derivatives(w, k)?;
    let s = sin_pi(z);
    let c = cos_pi(z);
    let mut out = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for (j, &g) in g.iter().enumerate().take(n + 1) {
            let gj = if j % 2 == 0 { g } else { -g };
            // d^l/dz^l sin(πz) = π^l sin(πz + lπ/2)
            let l = n - j;
            let trig = match l % 4 {
                0 => s,
                1 => c,
                2 => -s,
                _ => -c,
            };
            acc += binom * gj * trig * PI.powi(l as i32);
            binom = binom * (n - j) as f64 / (j + 1) as f64;
        }
        out.push(acc / PI);
    }
    Ok(out)
}
