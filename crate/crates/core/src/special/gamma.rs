use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecialError;
use crate::scalar::{is_finite, ComplexScalar};

/// Arguments closer than this to a nonpositive integer are treated as poles.
pub const POLE_TOLERANCE: f64 = 1e-12;

// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G_HALF: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Returns the nonpositive integer `-k` if `z` lies within [`POLE_TOLERANCE`] of it.
pub fn nearest_pole(z: ComplexScalar) -> Option<i64> {
    if z.re > 0.5 {
        return None;
    }
    let k = z.re.round();
    if k <= 0.0 && (z - Complex64::new(k, 0.0)).norm() < POLE_TOLERANCE {
        Some(k as i64)
    } else {
        None
    }
}

fn sin_pi_real(x: f64) -> f64 {
    if x == x.trunc() {
        return 0.0;
    }
    let r = x - 2.0 * (x / 2.0).round();
    let (sign, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

fn cos_pi_real(x: f64) -> f64 {
    let r = (x - 2.0 * (x / 2.0).round()).abs();
    if r == 0.5 {
        0.0
    } else if r > 0.5 {
        -(PI * (1.0 - r)).cos()
    } else {
        (PI * r).cos()
    }
}

/// `sin(πz)` with exact zeros at the integers.
pub fn sin_pi(z: ComplexScalar) -> ComplexScalar {
    let y = PI * z.im;
    Complex64::new(sin_pi_real(z.re) * y.cosh(), cos_pi_real(z.re) * y.sinh())
}

/// `cos(πz)` with exact zeros at the half-integers.
pub fn cos_pi(z: ComplexScalar) -> ComplexScalar {
    let y = PI * z.im;
    Complex64::new(cos_pi_real(z.re) * y.cosh(), -sin_pi_real(z.re) * y.sinh())
}

fn ln_gamma_lanczos(z: ComplexScalar) -> ComplexScalar {
    let t = z + LANCZOS_G_HALF;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS.iter().enumerate() {
        ser += *c / (z + (j + 1) as f64);
    }
    (z + 0.5) * t.ln() - t + LN_SQRT_2PI + (ser / z).ln()
}

fn wrap_phase(z: ComplexScalar) -> ComplexScalar {
    let two_pi = 2.0 * PI;
    let mut im = z.im - two_pi * (z.im / two_pi).round();
    if im <= -PI {
        im += two_pi;
    }
    Complex64::new(z.re, im)
}

/// Principal value of `log Γ(z)`: imaginary part reduced to `(-π, π]`.
pub fn ln_gamma(z: ComplexScalar) -> Result<ComplexScalar, SpecialError> {
    if nearest_pole(z).is_some() {
        return Err(SpecialError::Pole(z));
    }
    let raw = if z.re >= 0.5 {
        ln_gamma_lanczos(z)
    } else {
        // Γ(z)Γ(1-z) = π / sin(πz)
        Complex64::new(PI.ln(), 0.0) - sin_pi(z).ln() - ln_gamma_lanczos(1.0 - z)
    };
    if !is_finite(raw) {
        return Err(SpecialError::Overflow(z));
    }
    Ok(wrap_phase(raw))
}

pub fn gamma(z: ComplexScalar) -> Result<ComplexScalar, SpecialError> {
    let g = ln_gamma(z)?.exp();
    if is_finite(g) {
        Ok(g)
    } else {
        Err(SpecialError::Overflow(z))
    }
}

/// `1/Γ(z)`; exactly zero at (detected) nonpositive integers.
pub fn recip_gamma(z: ComplexScalar) -> ComplexScalar {
    if nearest_pole(z).is_some() {
        return Complex64::new(0.0, 0.0);
    }
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        // ln Γ overflowing means |Γ| is astronomically large
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// `binom(q, j) = Γ(q+1) / (Γ(j+1) Γ(q-j+1))` for whole `j`.
///
/// Evaluated as the falling-factorial product `q(q-1)...(q-j+1)/j!`, which is
/// the entire continuation of the gamma ratio in `q` and returns exact zeros
/// for integer `q` past its degree.
pub fn generalized_binomial(q: ComplexScalar, j: usize) -> ComplexScalar {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..j {
        acc *= (q - i as f64) / (i + 1) as f64;
    }
    acc
}
