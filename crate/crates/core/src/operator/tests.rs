#![allow(clippy::approx_constant)]

use super::*;
use crate::linalg::CMatrix;
use crate::oracle::OracleConfig;
use crate::scalar::c64;
use crate::special::gamma;
use crate::symbolic::{differint_expr, lambda_derivative, Expression};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn real(rows: &[&[f64]]) -> CMatrix {
    CMatrix::from_real_rows(rows).unwrap()
}

fn diag(d: &[f64]) -> CMatrix {
    CMatrix::diag(&d.iter().map(|&v| c64(v, 0.0)).collect::<Vec<_>>())
}

fn x() -> Expression {
    Expression::power(0.0, 1.0)
}

fn poly(c: &[f64]) -> Expression {
    Expression::polynomial(0.0, c)
}

fn op(a: &CMatrix) -> MatrixOrderOperator {
    build_operator(a, 0.0).unwrap()
}

fn grid() -> Vec<f64> {
    standard_grid(0.0)
}

fn random_similarity(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    loop {
        let mut p = CMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] += c64(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
            }
        }
        if crate::linalg::svd(&p).unwrap().condition_number() < 50.0 {
            return p;
        }
    }
}

fn conjugate(p: &CMatrix, d: &[Complex64]) -> CMatrix {
    &(p * &CMatrix::diag(d)) * &p.inverse().unwrap()
}

#[test]
fn build_examples() {
    let id = op(&CMatrix::zeros(2)).apply_scalar(&x()).unwrap();
    assert!(
        id.symbolic_residual(&MatrixExprFunction::scaled(&CMatrix::identity(2), &x()))
            .unwrap()
            < 1e-14
    );

    let d1 = op(&CMatrix::identity(2))
        .apply_scalar(&poly(&[1.0, 2.0, 3.0]))
        .unwrap();
    let want = MatrixExprFunction::scaled(&CMatrix::identity(2), &poly(&[2.0, 6.0]));
    assert!(d1.symbolic_residual(&want).unwrap() < 1e-14);

    let o = op(&diag(&[0.5, -0.5]));
    assert_eq!(o.realization().tag(), "spectral");
    assert_eq!(o.eigenvalues(), vec![c64(-0.5, 0.0), c64(0.5, 0.0)]);
}

#[test]
fn apply_scalar_examples() {
    let r = op(&diag(&[0.5, -0.5])).apply_scalar(&x()).unwrap();
    let v = r.evaluate(1.0).unwrap();
    assert!((v[0] - 1.128_38).norm() < 1e-5 && (v[0] - 2.0 / PI.sqrt()).norm() < 1e-14);
    assert!((v[3] - 0.752_25).norm() < 1e-5);
    let g = gamma(c64(2.0, 0.0)).unwrap() / gamma(c64(2.5, 0.0)).unwrap();
    assert!((v[3] - g).norm() < 1e-14);
    assert!(v[1].norm() == 0.0 && v[2].norm() == 0.0);

    let o = op(&real(&[&[0.5, 1.0], &[0.0, 0.5]]));
    assert_eq!(o.realization().tag(), "jordan");
    let r = o.apply_scalar(&x()).unwrap();
    let d0 = differint_expr(&x(), 0.5).unwrap();
    let d1 = lambda_derivative(&x(), 0.5, 1).unwrap();
    assert!(r.get(0, 0).approx_eq(&d0, 1e-13));
    assert!(r.get(1, 1).approx_eq(&d0, 1e-13));
    assert!(r.get(0, 1).approx_eq(&d1, 1e-13));
    assert!(r.get(1, 0).is_zero());

    let zero = Expression::zero(0.0);
    let r = op(&real(&[&[0.3, 0.1], &[0.2, -0.4]]))
        .apply_scalar(&zero)
        .unwrap();
    assert!(r.entries().iter().all(|e| e.is_zero()));
}

#[test]
fn jordan_superdiagonal_matches_oracle() {
    let cfg = OracleConfig::default();
    for lam in [0.5, -0.5] {
        let o = op(&real(&[&[lam, 1.0], &[0.0, lam]]));
        let r = o.apply_scalar(&x()).unwrap();
        let f = crate::oracle::SampledFunction::from_expression(&x(), 2.0).unwrap();
        for xv in [0.5, 1.0, 2.0] {
            let fd = crate::oracle::fd_lambda_derivative(&f, xv, lam, 1, 1e-3, &cfg).unwrap();
            assert!((r.get(0, 1).evaluate(xv).unwrap() - fd).norm() < 1e-4);
        }
        let check = jordan_fd_check(&o, &x(), &grid(), &cfg).unwrap();
        assert!(check.passed, "{check:?}");
    }
}

#[test]
fn jordan_depth_is_capped() {
    let mut a = CMatrix::zeros(5);
    for i in 0..5 {
        a[(i, i)] = c64(-0.5, 0.0);
        if i + 1 < 5 {
            a[(i, i + 1)] = c64(1.0, 0.0);
        }
    }
    let o = op(&a);
    assert!(matches!(
        o.apply_scalar(&x()),
        Err(OperatorError::JordanDepth { size: 5 })
    ));
}

#[test]
fn apply_vector_examples() {
    let v = VectorExprFunction::new(0.0, vec![x(), poly(&[1.0, 0.0, 2.0])]).unwrap();
    let r = op(&CMatrix::zeros(2)).apply_vector(&v).unwrap();
    assert!(r.symbolic_residual(&v).unwrap() < 1e-14);

    let r = op(&diag(&[0.5, -1.0])).apply_vector(&v).unwrap();
    assert!(r
        .get(0)
        .approx_eq(&differint_expr(v.get(0), 0.5).unwrap(), 1e-14));
    assert!(r
        .get(1)
        .approx_eq(&differint_expr(v.get(1), -1.0).unwrap(), 1e-14));

    // [[2,1],[1,2]] has spectrum {1, 3}: compare with classical calculus
    let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
    let x3 = Expression::power(0.0, 3.0);
    let v = VectorExprFunction::new(0.0, vec![x3.clone(), x3.clone()]).unwrap();
    let r = op(&a).apply_vector(&v).unwrap();
    // (1,1) is the eigenvector of 3: both components get (x³)‴ = 6
    let six = Expression::constant(0.0, c64(6.0, 0.0));
    assert!(r.get(0).approx_eq(&six, 1e-13) && r.get(1).approx_eq(&six, 1e-13));
    let v = VectorExprFunction::new(0.0, vec![x3.clone(), x3.scale(c64(-1.0, 0.0))]).unwrap();
    let r = op(&a).apply_vector(&v).unwrap();
    let d1 = poly(&[0.0, 0.0, 3.0]);
    assert!(r.get(0).approx_eq(&d1, 1e-13));
    assert!(r.get(1).approx_eq(&d1.scale(c64(-1.0, 0.0)), 1e-13));

    let short = VectorExprFunction::new(0.0, vec![x()]).unwrap();
    assert!(matches!(
        op(&a).apply_vector(&short),
        Err(OperatorError::DimensionMismatch { .. })
    ));
}

#[test]
fn apply_vector_agrees_with_apply_scalar_on_random_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 2..=4 {
        let p = random_similarity(&mut rng, n);
        let d: Vec<Complex64> = (0..n)
            .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-0.3..0.3)))
            .collect();
        let o = op(&conjugate(&p, &d));
        let f = Expression::power(0.0, 1.5);
        let m = o.apply_scalar(&f).unwrap();
        // D^A (f e_j) is column j of D^A f
        for j in 0..n {
            let mut e = vec![Expression::zero(0.0); n];
            e[j] = f.clone();
            let col = o
                .apply_vector(&VectorExprFunction::new(0.0, e).unwrap())
                .unwrap();
            assert!(col.symbolic_residual(&m.column(j)).unwrap() < 1e-10);
        }
    }
}

#[test]
fn similarity_and_spectral_realizations_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in 2..=5 {
        let p = random_similarity(&mut rng, n);
        let d: Vec<Complex64> = (0..n)
            .map(|_| c64(rng.gen_range(-1.0..1.5), rng.gen_range(-0.3..0.3)))
            .collect();
        let o = op(&conjugate(&p, &d));
        let f = poly(&[1.0, 0.5, 2.0]);
        let spectral = o.apply_scalar(&f).unwrap();
        // similarity form: P diag(D^{λ_k} f) P⁻¹ on columns of the identity
        let sd = o.spectral().unwrap();
        let eig = o.eigenvalues();
        let parts: Vec<Expression> = eig
            .iter()
            .map(|&l| differint_expr(&f, l).unwrap())
            .collect();
        let entries: Vec<Expression> = (0..n * n)
            .map(|k| {
                let (r, c) = (k / n, k % n);
                Expression::linear_combination(
                    0.0,
                    (0..n).map(|i| (sd.p[(r, i)] * sd.p_inv[(i, c)], &parts[i])),
                )
                .unwrap()
            })
            .collect();
        let similarity = MatrixExprFunction::new(n, 0.0, entries).unwrap();
        assert!(spectral.symbolic_residual(&similarity).unwrap() <= 1e-10);
    }
}

#[test]
fn compose_examples() {
    // inverse pair on a nonnegative spectrum
    let a = real(&[&[0.5, 0.2], &[0.0, 1.0]]);
    let check = inverse_pair_check(&op(&a), &poly(&[1.0, 1.0]), &grid()).unwrap();
    assert!(check.passed, "{check:?}");

    // B = 0 leaves D^A
    let oa = op(&a);
    let r = compose_apply(&oa, &op(&CMatrix::zeros(2)), &x()).unwrap();
    assert!(
        r.symbolic_residual(&oa.apply_scalar(&x()).unwrap())
            .unwrap()
            < 1e-13
    );

    // commuting pair with nonpositive spectra
    let p = real(&[&[1.0, 0.3], &[-0.2, 1.0]]);
    let oa = op(&conjugate(&p, &[c64(-0.5, 0.0), c64(-1.0, 0.0)]));
    let ob = op(&conjugate(&p, &[c64(-0.25, 0.0), c64(-0.7, 0.1)]));
    let check = additivity_check(&oa, &ob, &Expression::power(0.0, 0.5)).unwrap();
    assert!(check.passed, "{check:?}");
}

#[test]
fn noncommuting_pair_is_reported_honestly() {
    let oa = op(&diag(&[-1.0, -0.5]));
    let ob = op(&real(&[&[-0.75, 0.25], &[0.25, -0.75]]));
    let f = x();
    assert!(!additivity_check(&oa, &ob, &f).unwrap().passed);
    let seq = compose_apply(&oa, &ob, &f).unwrap();
    let sum = build_operator(&(oa.matrix() + ob.matrix()), 0.0)
        .unwrap()
        .apply_scalar(&f)
        .unwrap();
    assert!(seq.grid_residual(&sum, &grid()).unwrap() > 1e-3);
    let check = expansion_check(&oa, &ob, &f, &grid()).unwrap();
    assert!(check.passed, "{check:?}");
    let unfused = compose_projector_expansion(&oa, &ob, &f, false).unwrap();
    assert!(unfused.symbolic_residual(&seq).unwrap() < 1e-12);
    for fused in [false, true] {
        let sim = compose_similarity_expansion(&oa, &ob, &f, fused).unwrap();
        assert!(sim.grid_residual(&seq, &grid()).unwrap() < 1e-12);
    }
}

#[test]
fn shift_examples() {
    let o = op(&diag(&[0.5, -0.5]));
    let (l, r) = shift_by_integer(&o, 0, &x()).unwrap();
    assert!(l.symbolic_residual(&r).unwrap() < 1e-14);
    assert!(l.symbolic_residual(&o.apply_scalar(&x()).unwrap()).unwrap() < 1e-14);

    let (l, r) = shift_by_integer(&op(&diag(&[-1.0, -1.0])), 1, &poly(&[1.0])).unwrap();
    let id = MatrixExprFunction::scaled(&CMatrix::identity(2), &poly(&[1.0]));
    assert!(l.symbolic_residual(&id).unwrap() < 1e-14 && r.symbolic_residual(&id).unwrap() < 1e-14);

    let (l, r) = shift_by_integer(&o, 1, &x()).unwrap();
    let want = op(&diag(&[1.5, 0.5])).apply_scalar(&x()).unwrap();
    assert!(l.symbolic_residual(&want).unwrap() < 1e-13);
    assert!(r.symbolic_residual(&want).unwrap() < 1e-13);
}

#[test]
fn shift_law_on_random_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let n = rng.gen_range(2..=4);
        let p = random_similarity(&mut rng, n);
        let d: Vec<Complex64> = (0..n)
            .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-0.3..0.3)))
            .collect();
        let o = op(&conjugate(&p, &d));
        for m in [1, 2] {
            let check = shift_check(&o, m, &Expression::power(0.0, 2.5)).unwrap();
            assert!(check.passed, "{check:?}");
        }
    }
}

#[test]
fn transpose_examples() {
    let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
    let x3 = Expression::power(0.0, 3.0);
    let c = transpose_check(&op(&a), &op(&a), &x3, &grid()).unwrap();
    assert!(c.passed && c.residual < 1e-14);
    let c = transpose_check(&op(&a), &op(&diag(&[-1.0, -2.0])), &x3, &grid()).unwrap();
    assert!(c.residual <= 1e-10, "{c:?}");
    let nonsym = real(&[&[1.0, 2.0], &[0.0, 1.0]]);
    assert!(matches!(
        transpose_check(&op(&a), &op(&nonsym), &x3, &grid()),
        Err(OperatorError::Precondition(_))
    ));
}

#[test]
fn transpose_integer_example_matches_classical_calculus() {
    // D^A D^B x³ with A = [[2,1],[1,2]], B = diag(-1,-2): classical brute force
    let a = real(&[&[2.0, 1.0], &[1.0, 2.0]]);
    let b = diag(&[-1.0, -2.0]);
    let x3 = Expression::power(0.0, 3.0);
    let got = compose_apply(&op(&a), &op(&b), &x3).unwrap();
    // D^{-1} x³ = x⁴/4, D^{-2} x³ = x⁵/20; D^A = ½[[D+D³, D³−D],[D³−D, D+D³]]
    let d = |e: &Expression, k: usize| crate::symbolic::integer_derivative(e, k);
    let i1 = Expression::monomial(0.0, c64(0.25, 0.0), c64(4.0, 0.0), 0).unwrap();
    let i2 = Expression::monomial(0.0, c64(0.05, 0.0), c64(5.0, 0.0), 0).unwrap();
    let half = c64(0.5, 0.0);
    let plus = |e: &Expression| d(e, 1).add(&d(e, 3)).unwrap().scale(half);
    let minus = |e: &Expression| d(e, 3).sub(&d(e, 1)).unwrap().scale(half);
    let want = MatrixExprFunction::new(2, 0.0, vec![plus(&i1), minus(&i2), minus(&i1), plus(&i2)])
        .unwrap();
    assert!(got.symbolic_residual(&want).unwrap() < 1e-13);
}

#[test]
fn determinant_examples() {
    let r =
        determinant_sequential(&op(&CMatrix::identity(2)), &Expression::power(0.0, 3.0)).unwrap();
    assert!(r.approx_eq(&poly(&[0.0, 6.0]), 1e-14));
    let r = determinant_sequential(&op(&diag(&[0.5, 0.5])), &x()).unwrap();
    assert!(r.approx_eq(&poly(&[1.0]), 1e-14));
    let r = determinant_sequential(&op(&diag(&[-0.5, -0.5])), &poly(&[1.0])).unwrap();
    assert!(r.approx_eq(&x(), 1e-14));
    let jordan = op(&real(&[&[0.5, 1.0], &[0.0, 0.5]]));
    assert!(matches!(
        determinant_sequential(&jordan, &x()),
        Err(OperatorError::NotDiagonalizable)
    ));
}

#[test]
fn trace_examples() {
    let c = trace_law_check(&op(&diag(&[-0.5, -0.5])), &poly(&[1.0])).unwrap();
    assert!(c.passed);
    let c = trace_law_check(&op(&real(&[&[-1.0, 0.3], &[0.0, -0.5]])), &x()).unwrap();
    assert!(c.passed, "{c:?}");
    assert!(matches!(
        trace_law_check(&op(&diag(&[0.5, -1.0])), &x()),
        Err(OperatorError::Precondition(_))
    ));
}

#[test]
fn operator_json_round_trip() {
    let o = op(&real(&[&[0.5, 1.0], &[0.0, 0.5]]));
    let s = serde_json::to_string(&o).unwrap();
    assert!(s.contains("\"realization_tag\":\"jordan\""));
    let back: MatrixOrderOperator = serde_json::from_str(&s).unwrap();
    assert_eq!(back, o);
    let bad = s.replace("jordan", "spectral");
    assert!(serde_json::from_str::<MatrixOrderOperator>(&bad).is_err());

    let m = o.apply_scalar(&x()).unwrap();
    let s = serde_json::to_string(&m).unwrap();
    let back: MatrixExprFunction = serde_json::from_str(&s).unwrap();
    assert_eq!(back, m);
}
