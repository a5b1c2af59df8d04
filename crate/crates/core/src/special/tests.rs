#![allow(clippy::excessive_precision)]

use super::*;
use crate::scalar::c64;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn lattice(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let z = c64(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if z.norm() <= 10.0 && (z.re - z.re.round()).abs() > 1e-3 {
            out.push(z);
        }
    }
    out
}

#[test]
fn ln_gamma_examples() {
    assert!((ln_gamma(c64(5.0, 0.0)).unwrap() - c64(24f64.ln(), 0.0)).norm() < 1e-13);
    assert!(ln_gamma(c64(1.0, 0.0)).unwrap().norm() < 1e-14);
    let half = ln_gamma(c64(0.5, 0.0)).unwrap();
    assert!((half.re - 0.572_364_942_9).abs() < 1e-10);
    assert!((half.re - PI.sqrt().ln()).abs() < 1e-14);
}

#[test]
fn ln_gamma_rejects_poles() {
    for k in [0.0, -1.0, -7.0] {
        assert!(matches!(ln_gamma(c64(k, 0.0)), Err(SpecialError::Pole(_))));
    }
    assert!(ln_gamma(c64(-1.0 + 1e-9, 0.0)).is_ok());
}

#[test]
fn ln_gamma_imaginary_part_is_principal() {
    for z in lattice(50, 3) {
        let l = ln_gamma(z).unwrap();
        assert!(l.im > -PI && l.im <= PI);
    }
    // Γ(-0.5) = -2√π < 0
    let l = ln_gamma(c64(-0.5, 0.0)).unwrap();
    assert!((l.im - PI).abs() < 1e-14);
}

#[test]
fn gamma_matches_reference_values() {
    // reference values from an arbitrary-precision evaluation
    let cases = [
        (
            c64(4.0, 10.0),
            c64(0.000_771_534_294_239_966_26, -0.001_019_082_799_041_712_4),
        ),
        (
            c64(-2.5, 0.3),
            c64(-0.613_822_997_437_741_49, -0.211_232_614_937_041_78),
        ),
        (
            c64(0.1, -3.0),
            c64(0.013_662_874_927_575_556, 0.004_915_311_156_096_227_2),
        ),
        (
            c64(-7.3, -1.2),
            c64(-1.708_892_018_002_209_1e-5, -7.409_248_206_644_327_6e-7),
        ),
        (c64(2.2, 0.0), c64(1.101_802_490_879_712_8, 0.0)),
    ];
    for (z, want) in cases {
        let got = gamma(z).unwrap();
        assert!(rel(got, want) < 1e-13, "Γ({z}) = {got}, want {want}");
    }
}

#[test]
fn gamma_recurrence_on_lattice() {
    for z in lattice(200, 1) {
        let lhs = gamma(z + 1.0).unwrap();
        let rhs = z * gamma(z).unwrap();
        assert!(rel(lhs, rhs) <= 1e-12, "z = {z}: {lhs} vs {rhs}");
    }
}

#[test]
fn gamma_reflection_on_lattice() {
    for z in lattice(200, 2) {
        let v = gamma(z).unwrap() * gamma(1.0 - z).unwrap() * sin_pi(z) / PI;
        assert!((v - 1.0).norm() <= 1e-10, "z = {z}: {v}");
    }
}

#[test]
fn recip_gamma_examples_and_inverse() {
    assert_eq!(recip_gamma(c64(0.0, 0.0)), c64(0.0, 0.0));
    assert_eq!(recip_gamma(c64(-3.0, 0.0)), c64(0.0, 0.0));
    assert!((recip_gamma(c64(2.0, 0.0)) - 1.0).norm() < 1e-15);
    for z in lattice(200, 4) {
        let v = recip_gamma(z) * gamma(z).unwrap();
        assert!((v - 1.0).norm() <= 1e-12, "z = {z}: {v}");
    }
}

#[test]
fn polygamma_examples() {
    assert!((polygamma(0, c64(1.0, 0.0)).unwrap() + EULER_GAMMA).norm() < 1e-14);
    assert!((polygamma(0, c64(2.0, 0.0)).unwrap() - (1.0 - EULER_GAMMA)).norm() < 1e-14);
    assert!((polygamma(1, c64(1.0, 0.0)).unwrap() - PI * PI / 6.0).norm() < 1e-13);
    assert!(matches!(
        polygamma(4, c64(1.0, 0.0)),
        Err(SpecialError::UnsupportedOrder(4))
    ));
    assert!(matches!(
        polygamma(0, c64(-2.0, 0.0)),
        Err(SpecialError::Pole(_))
    ));
}

#[test]
fn polygamma_matches_reference_values() {
    let cases: [(usize, Complex64, Complex64); 12] = [
        (
            0,
            c64(0.3, 0.7),
            c64(-0.447_207_920_299_561_17, 1.891_810_855_218_526_7),
        ),
        (
            1,
            c64(0.3, 0.7),
            c64(-0.459_266_853_952_080_53, -1.809_695_401_592_478_4),
        ),
        (
            2,
            c64(0.3, 0.7),
            c64(3.993_554_406_704_930_3, -0.794_443_468_888_921_16),
        ),
        (
            3,
            c64(0.3, 0.7),
            c64(-1.238_842_508_736_042_1, 16.436_587_583_512_552),
        ),
        (
            0,
            c64(-3.7, 0.2),
            c64(0.085_426_161_316_682_424, 2.249_647_738_605_517_4),
        ),
        (
            1,
            c64(-3.7, 0.2),
            c64(6.187_795_808_320_629_4, -6.227_396_463_474_439_5),
        ),
        (
            2,
            c64(-3.7, 0.2),
            c64(11.116_465_685_599_459, 46.330_546_781_333_882),
        ),
        (
            3,
            c64(-3.7, 0.2),
            c64(-237.868_459_758_044_61, -233.813_459_220_503_15),
        ),
        (
            0,
            c64(12.0, -5.0),
            c64(2.529_099_186_958_588_4, -0.409_933_855_715_779_49),
        ),
        (
            1,
            c64(12.0, -5.0),
            c64(0.073_117_802_738_768_813, 0.031_756_750_423_988_537),
        ),
        (
            2,
            c64(12.0, -5.0),
            c64(-0.004_337_940_706_111_734_5, -0.004_640_618_816_641_848_3),
        ),
        (
            3,
            c64(12.0, -5.0),
            c64(0.000_340_106_238_125_618_93, 0.000_953_190_627_382_457_1),
        ),
    ];
    for (n, z, want) in cases {
        let got = polygamma(n, z).unwrap();
        assert!(rel(got, want) < 1e-11, "ψ^({n})({z}) = {got}, want {want}");
    }
}

#[test]
fn digamma_recurrence_on_lattice() {
    for z in lattice(200, 5) {
        let lhs = polygamma(0, z + 1.0).unwrap() - polygamma(0, z).unwrap();
        assert!(rel(lhs, z.inv()) <= 1e-10, "z = {z}");
    }
}

#[test]
fn generalized_binomial_examples() {
    assert!((generalized_binomial(c64(0.5, 0.0), 1) - 0.5).norm() < 1e-15);
    assert_eq!(generalized_binomial(c64(3.0, 0.0), 5), c64(0.0, 0.0));
    assert!((generalized_binomial(c64(0.5, 0.0), 2) + 0.125).norm() < 1e-15);
    assert!((generalized_binomial(c64(-1.0, 0.0), 3) + 1.0).norm() < 1e-15);
}

#[test]
fn generalized_binomial_agrees_with_gamma_ratio() {
    // independent route: Γ(q+1) / (Γ(j+1) Γ(q-j+1))
    for q in lattice(40, 6) {
        for j in 0..6 {
            let direct = gamma(q + 1.0).unwrap()
                * recip_gamma(c64(j as f64 + 1.0, 0.0))
                * recip_gamma(q - j as f64 + 1.0);
            let got = generalized_binomial(q, j);
            assert!(
                (got - direct).norm() <= 1e-10 * direct.norm().max(1.0),
                "q={q} j={j}"
            );
        }
    }
}

#[test]
fn recip_gamma_derivatives_match_reference() {
    let cases = [
        (
            c64(0.0, 0.0),
            [
                c64(0.0, 0.0),
                c64(1.0, 0.0),
                c64(1.154_431_329_803_065_7, 0.0),
                c64(-3.935_268_429_121_523_3, 0.0),
                c64(-1.008_063_240_818_285_7, 0.0),
            ],
        ),
        (
            c64(-1.0, 0.0),
            [
                c64(0.0, 0.0),
                c64(-1.0, 0.0),
                c64(0.845_568_670_196_934_28, 0.0),
                c64(7.398_562_418_530_720_5, 0.0),
                c64(-14.733_010_475_667_807, 0.0),
            ],
        ),
        (
            c64(-0.3, 0.4),
            [
                c64(-0.414_945_915_468_294_04, 0.225_531_402_857_124_17),
                c64(0.726_010_991_366_754_05, 0.961_912_999_806_853),
                c64(2.831_127_409_289_184_2, -1.332_408_285_151_706_8),
                c64(-4.818_062_719_804_951_4, -3.174_450_097_455_053_2),
                c64(-7.554_149_795_401_419_4, 11.792_670_126_066_523),
            ],
        ),
        (
            c64(2.5, 0.0),
            [
                c64(0.752_252_778_063_675_05, 0.0),
                c64(-0.528_951_536_339_305_43, 0.0),
                c64(0.003_062_801_085_014_606_1, 0.0),
                c64(0.694_282_502_005_709_03, 0.0),
                c64(-1.035_950_241_385_260_2, 0.0),
            ],
        ),
    ];
    for (z, want) in cases {
        let got = recip_gamma_derivatives(z, 4).unwrap();
        for k in 0..=4 {
            assert!(
                (got[k] - want[k]).norm() < 1e-11 * want[k].norm().max(1.0),
                "k={k} z={z}: {} vs {}",
                got[k],
                want[k]
            );
        }
    }
}

#[test]
fn gamma_derivatives_match_finite_differences() {
    let z = c64(1.7, 0.4);
    let d = gamma_derivatives(z, 2).unwrap();
    let h = 1e-5;
    let fd1 = (gamma(z + h).unwrap() - gamma(z - h).unwrap()) / (2.0 * h);
    let fd2 = (gamma(z + h).unwrap() - 2.0 * gamma(z).unwrap() + gamma(z - h).unwrap()) / (h * h);
    assert!((d[1] - fd1).norm() < 1e-8);
    assert!((d[2] - fd2).norm() < 1e-4);
}
