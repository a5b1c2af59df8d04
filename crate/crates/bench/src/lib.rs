//! Deterministic inputs shared by the criterion benchmarks.

use fracmat_core::c64;
use fracmat_core::linalg::CMatrix;
use fracmat_core::symbolic::Expression;

/// `1 + x^{1/2} + x² ln x` about 0.
pub fn sample_expression() -> Expression {
    let sqrt = Expression::power(0.0, 0.5);
    let log = Expression::monomial(0.0, c64(1.0, 0.0), c64(2.0, 0.0), 1).expect("valid term");
    Expression::polynomial(0.0, &[1.0])
        .add(&sqrt)
        .and_then(|e| e.add(&log))
        .expect("same base point")
}

/// Dense nonsymmetric `n × n` matrix with well-separated eigenvalues.
pub fn sample_matrix(n: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = if i == j {
                c64(-1.0 + 2.0 * i as f64 / n as f64, 0.1 * i as f64)
            } else {
                c64(
                    0.05 * ((i * 7 + j * 3) % 11) as f64 / 11.0,
                    0.02 * ((i + 2 * j) % 5) as f64,
                )
            };
        }
    }
    a
}

/// Size-2 Jordan block at `λ = −1/2` next to a simple eigenvalue.
pub fn jordan_matrix() -> CMatrix {
    CMatrix::from_real_rows(&[&[-0.5, 1.0, 0.0], &[0.0, -0.5, 0.0], &[0.0, 0.0, 0.25]])
        .expect("square")
}
