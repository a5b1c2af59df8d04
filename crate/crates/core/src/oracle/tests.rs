#![allow(clippy::approx_constant)]

use super::*;
use crate::scalar::c64;
use crate::special::{gamma, polygamma};
use crate::symbolic::{differint_expr, Expression, PowerLogTerm};
use num_complex::Complex64;
use std::f64::consts::PI;

fn from_expr(e: &Expression) -> SampledFunction {
    SampledFunction::from_expression(e, 3.0).unwrap()
}

fn power(p: f64) -> SampledFunction {
    from_expr(&Expression::power(0.0, p))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn config_validation() {
    assert!(OracleConfig::new(16, 0).is_ok());
    assert!(OracleConfig::new(8, 0).is_err());
    assert!(OracleConfig::new(100, 1).is_err());
    assert!(OracleConfig::new(1024, 3).is_err());
    assert_eq!(
        OracleConfig::default(),
        OracleConfig::new(1 << 14, 1).unwrap()
    );
}

#[test]
fn gauss_legendre_integrates_polynomials_exactly() {
    let (x, w) = gauss_legendre(6);
    for deg in 0..12 {
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
        let want = if deg % 2 == 0 {
            2.0 / (deg + 1) as f64
        } else {
            0.0
        };
        assert!((got - want).abs() < 1e-14, "degree {deg}");
    }
}

#[test]
fn gl_examples() {
    let cfg = OracleConfig::default();
    let v = gl_differint(&power(1.0), 1.0, 0.5, &cfg).unwrap();
    assert!(rel(v, c64(1.128_379_167_1, 0.0)) < 1e-4);
    assert!(rel(v, c64(2.0 / PI.sqrt(), 0.0)) < 1e-4);

    let one = from_expr(&Expression::constant(0.0, c64(1.0, 0.0)));
    let v = gl_differint(&one, 2.0, -1.0, &cfg).unwrap();
    assert!(rel(v, c64(2.0, 0.0)) < 1e-6);

    let v = gl_differint(&power(2.0), 1.0, 1.0, &cfg).unwrap();
    assert!(rel(v, c64(2.0, 0.0)) < 1e-5);
}

#[test]
fn gl_rejects_bad_points_and_samples() {
    let cfg = OracleConfig::default();
    assert!(gl_differint(&power(1.0), 0.0, 0.5, &cfg).is_err());
    assert!(gl_differint(&power(1.0), 5.0, 0.5, &cfg).is_err());
    let f = SampledFunction::new(0.0, 2.0, |t| {
        if (t - 0.5).abs() < 1e-3 {
            c64(f64::INFINITY, 0.0)
        } else {
            c64(1.0, 0.0)
        }
    })
    .unwrap();
    assert!(matches!(
        gl_differint(&f, 1.0, 0.5, &OracleConfig::new(1024, 0).unwrap()),
        Err(OracleError::NonFiniteSample { .. })
    ));
}

#[test]
fn gl_handles_singular_base_point() {
    // D^{1/2} x^{-1/2} = 0 and D^{-1/2} x^{-1/2} = √π
    let cfg = OracleConfig::default();
    let f = power(-0.5);
    assert!(gl_differint(&f, 1.0, 0.5, &cfg).unwrap().norm() < 1e-4);
    let v = gl_differint(&f, 1.0, -0.5, &cfg).unwrap();
    assert!(rel(v, c64(PI.sqrt(), 0.0)) < 1e-4);
}

#[test]
fn gl_error_halves_with_step() {
    for (p, order) in [(1.0, 0.5), (2.0, -0.5), (0.5, 0.3)] {
        let f = power(p);
        let exact = gamma(c64(p + 1.0, 0.0)).unwrap() / gamma(c64(p - order + 1.0, 0.0)).unwrap();
        let e1 = (gl_differint(&f, 1.0, order, &OracleConfig::new(256, 0).unwrap()).unwrap()
            - exact)
            .norm();
        let e2 = (gl_differint(&f, 1.0, order, &OracleConfig::new(512, 0).unwrap()).unwrap()
            - exact)
            .norm();
        assert!(e1 / e2 >= 1.8, "p={p} λ={order}: ratio {}", e1 / e2);
    }
}

#[test]
fn rl_examples() {
    let one = from_expr(&Expression::constant(0.0, c64(1.0, 0.0)));
    assert!(rel(rl_quadrature(&one, 3.0, 1.0).unwrap(), c64(3.0, 0.0)) < 1e-8);
    let v = rl_quadrature(&power(1.0), 1.0, 0.5).unwrap();
    assert!(rel(v, c64(0.752_252_778_1, 0.0)) < 1e-6);
    let v = rl_quadrature(&power(-0.5), 1.0, 0.5).unwrap();
    assert!(rel(v, c64(PI.sqrt(), 0.0)) < 1e-5);
    assert!(rl_quadrature(&one, 1.0, -0.5).is_err());
}

#[test]
fn rl_reports_nonconvergence() {
    // a jump the graded mesh never resolves
    let f = SampledFunction::new(0.0, 2.0, |t| c64(if t < 0.3 { 0.0 } else { 1.0 }, 0.0)).unwrap();
    assert!(matches!(
        rl_quadrature(&f, 1.0, 0.5),
        Err(OracleError::ConvergenceFailure { .. })
    ));
}

#[test]
fn fd_examples() {
    let cfg = OracleConfig::default();
    let psi2 = polygamma(0, c64(2.0, 0.0)).unwrap();
    let v = fd_lambda_derivative(&power(1.0), 1.0, 0.0, 1, 1e-3, &cfg).unwrap();
    assert!((v - 0.422_78).norm() < 1e-4);
    assert!((v - psi2).norm() < 1e-4);

    let one = from_expr(&Expression::constant(0.0, c64(1.0, 0.0)));
    let v = fd_lambda_derivative(&one, 1.0, -1.0, 1, 1e-3, &cfg).unwrap();
    assert!((v - psi2).norm() < 1e-4);

    // D^λ applied to the zero function does not depend on λ
    let zero = SampledFunction::new(0.0, 2.0, |_| c64(0.0, 0.0)).unwrap();
    for k in [1, 2] {
        assert_eq!(
            fd_lambda_derivative(&zero, 1.0, 0.4, k, 1e-4, &cfg).unwrap(),
            c64(0.0, 0.0)
        );
    }
    assert!(fd_lambda_derivative(&one, 1.0, 0.5, 3, 1e-3, &cfg).is_err());
    assert!(fd_lambda_derivative(&one, 1.0, 0.5, 1, 1e-2, &cfg).is_err());
}

#[test]
fn gl_and_rl_agree_on_integrals() {
    let cfg = OracleConfig::default();
    let grid: Vec<f64> = (0..7).map(|i| 0.5 + 0.25 * i as f64).collect();
    let fs = [
        Expression::constant(0.0, c64(1.0, 0.0)),
        Expression::power(0.0, 1.0),
        Expression::power(0.0, 0.5),
        Expression::power(0.0, -0.5),
    ];
    for e in &fs {
        let f = from_expr(e);
        for order in [c64(-0.5, 0.0), c64(-1.0, 0.0), c64(-0.3, 0.2)] {
            for &x in &grid {
                let a = gl_differint(&f, x, order, &cfg).unwrap();
                let b = rl_quadrature(&f, x, -order).unwrap();
                assert!(rel(a, b) < 1e-4, "λ={order} x={x}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn gl_agrees_with_closed_form_on_power_log_terms() {
    let cfg = OracleConfig::default();
    let orders = [c64(0.5, 0.0), c64(-0.5, 0.0), c64(0.3, 0.2), c64(-1.0, 0.0)];
    let exponents = [
        c64(-0.85, 0.0),
        c64(-0.4, 0.3),
        c64(0.0, 0.0),
        c64(0.5, 0.0),
        c64(1.3, -0.2),
        c64(2.9, 0.0),
    ];
    for p in exponents {
        for m in 0..2 {
            let e = Expression::new(0.0, vec![PowerLogTerm::new(c64(1.0, 0.0), p, m)]).unwrap();
            let f = from_expr(&e);
            for order in orders {
                let exact = differint_expr(&e, order).unwrap();
                for x in [0.5, 1.25, 2.0] {
                    let want = exact.evaluate(x).unwrap();
                    let got = gl_differint(&f, x, order, &cfg).unwrap();
                    let scale = want.norm().max(1e-3);
                    assert!(
                        (got - want).norm() <= 1e-3 * scale,
                        "p={p} m={m} λ={order} x={x}: {got} vs {want}"
                    );
                }
            }
        }
    }
}
