//! Dispatch of a validated TaskSpec to the core library.

use std::time::Instant;

use fracmat_core::linalg::CMatrix;
use fracmat_core::operator::{
    additivity_check, build_operator, compose_apply, determinant_sequential, expansion_check,
    inverse_pair_check, jordan_fd_check, shift_by_integer, shift_check, trace_law_check,
    transpose_check, Comparison, LawCheck, MatrixExprFunction, MatrixOrderOperator, OperatorError,
    Realization, VectorExprFunction,
};
use fracmat_core::oracle::{gl_differint, SampledFunction};
use fracmat_core::scalar::JsonComplex;
use fracmat_core::symbolic::{
    composition_lhs, composition_rhs, differint_expr, leibniz_series, Expression, SYMBOLIC_EQ_TOL,
};
use fracmat_core::ComplexScalar;

use crate::error::CliError;
use crate::report::{CheckRecord, Decomposition, GridValue, Report, SegmentRecord};
use crate::spec::{Suite, TaskKind, TaskSpec};

/// Closed form against the Grünwald–Letnikov oracle, relative.
pub const ORACLE_TOL: f64 = 1e-4;
/// Grid residual for the composition rule.
pub const COMPOSITION_TOL: f64 = 1e-10;
/// Projector identities of a spectral decomposition.
pub const PROJECTOR_TOL: f64 = 1e-10;
/// `‖P J P⁻¹ − A‖_F / max(1, ‖A‖_F)` of a Jordan decomposition.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub tol_scale: f64,
    pub verbose: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tol_scale: 1.0,
            verbose: false,
        }
    }
}

/// Reads FRACMAT_TOL_SCALE; absent means 1.
pub fn tol_scale_from_env() -> Result<f64, CliError> {
    match std::env::var("FRACMAT_TOL_SCALE") {
        Err(_) => Ok(1.0),
        Ok(s) => parse_tol_scale(&s),
    }
}

pub fn parse_tol_scale(s: &str) -> Result<f64, CliError> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 1.0 => Ok(v),
        _ => Err(CliError::TolScale(s.to_string())),
    }
}

fn scalar_matrix(e: Expression) -> Result<MatrixExprFunction, OperatorError> {
    let base = e.base_point();
    MatrixExprFunction::new(1, base, vec![e])
}

fn matrix_values(
    m: &MatrixExprFunction,
    other: Option<&MatrixExprFunction>,
    grid: &[f64],
) -> Result<Vec<GridValue>, CliError> {
    let n = m.n();
    grid.iter()
        .map(|&x| {
            let a = m.evaluate(x)?;
            let b = other.map(|o| o.evaluate(x)).transpose()?;
            Ok(GridValue::new(x, n, n, &a, b.as_deref()))
        })
        .collect()
}

fn vector_values(v: &VectorExprFunction, grid: &[f64]) -> Result<Vec<GridValue>, CliError> {
    grid.iter()
        .map(|&x| {
            let a = v
                .entries()
                .iter()
                .map(|e| e.evaluate(x))
                .collect::<Result<Vec<ComplexScalar>, _>>()?;
            Ok(GridValue::new(x, a.len(), 1, &a, None))
        })
        .collect()
}

struct Inputs<'a> {
    spec: &'a TaskSpec,
    grid: Vec<f64>,
}

impl Inputs<'_> {
    fn function(&self) -> Result<Expression, CliError> {
        let f = self.spec.function.as_ref().expect("validated");
        f.resolve(self.spec.base_point, "function")
    }

    fn operator(&self, second: bool) -> Result<MatrixOrderOperator, CliError> {
        let m = if second {
            &self.spec.matrix_b
        } else {
            &self.spec.matrix
        };
        Ok(build_operator(
            m.as_ref().expect("validated"),
            self.spec.base_point,
        )?)
    }

    fn order(&self) -> ComplexScalar {
        self.spec.order.expect("validated").0
    }
}

/// Runs one task. Failed tolerances are recorded in the report, not
/// returned as errors.
pub fn run(spec: &TaskSpec, opts: &RunOptions) -> Result<Report, CliError> {
    spec.validate()?;
    if !(opts.tol_scale.is_finite() && opts.tol_scale >= 1.0) {
        return Err(CliError::TolScale(opts.tol_scale.to_string()));
    }
    let start = Instant::now();
    let mut report = Report::new(spec.clone(), opts.tol_scale);
    let inputs = Inputs {
        spec,
        grid: spec.grid_points(),
    };
    let scale = opts.tol_scale;
    let mut record = |report: &mut Report, name: &str, law: LawCheck| {
        report.push_check(CheckRecord::from_law(name, law, spec, scale));
    };
    let grid = &inputs.grid;
    match spec.task {
        TaskKind::Apply => {
            let m = inputs.operator(false)?.apply_scalar(&inputs.function()?)?;
            report.values = matrix_values(&m, None, grid)?;
        }
        TaskKind::ApplyVector => {
            let entries = spec
                .vector
                .as_ref()
                .expect("validated")
                .iter()
                .enumerate()
                .map(|(i, f)| f.resolve(spec.base_point, &format!("vector[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let v = VectorExprFunction::new(spec.base_point, entries)?;
            let out = inputs.operator(false)?.apply_vector(&v)?;
            report.values = vector_values(&out, grid)?;
        }
        TaskKind::Compose => {
            let (a, b, f) = (
                inputs.operator(false)?,
                inputs.operator(true)?,
                inputs.function()?,
            );
            let m = compose_apply(&a, &b, &f)?;
            report.values = matrix_values(&m, None, grid)?;
            match expansion_check(&a, &b, &f, grid) {
                Ok(law) => record(&mut report, "expansion", law),
                // the projector expansion needs both orders diagonalizable
                Err(OperatorError::NotDiagonalizable) => {}
                Err(e) => return Err(e.into()),
            }
        }
        TaskKind::Verify => verify(&inputs, &mut report, &mut record)?,
        TaskKind::Oracle => {
            let f = inputs.function()?;
            let order = inputs.order();
            let closed = differint_expr(&f, order)?;
            let x_max = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let sampled = SampledFunction::from_expression(&f, x_max)?;
            let cfg = spec.oracle_config();
            let mut worst: f64 = 0.0;
            for &x in grid {
                let c = closed.evaluate(x)?;
                let g = gl_differint(&sampled, x, order, &cfg)?;
                let rel = if c.norm() > 0.0 {
                    (c - g).norm() / c.norm()
                } else {
                    g.norm()
                };
                worst = worst.max(rel);
                report
                    .values
                    .push(GridValue::new(x, 1, 1, &[c], Some(&[g])));
            }
            record(
                &mut report,
                "oracle",
                LawCheck::new(Comparison::Grid, worst, ORACLE_TOL),
            );
        }
        TaskKind::Decompose => {
            let a = spec.matrix.as_ref().expect("validated");
            let op = build_operator(a, spec.base_point)?;
            let mut d = Decomposition {
                classification: *op.classification(),
                realization: op.realization().tag(),
                eigenvalues: op.eigenvalues().into_iter().map(JsonComplex).collect(),
                condition: op.condition(),
                projector_residuals: None,
                segments: None,
            };
            match op.realization() {
                Realization::Spectral(sd) => {
                    let r = sd.residuals(a);
                    d.projector_residuals = Some(r);
                    record(
                        &mut report,
                        "projectors",
                        LawCheck::new(Comparison::Grid, r.max(), PROJECTOR_TOL),
                    );
                }
                Realization::Jordan(jd) => {
                    d.segments = Some(
                        jd.segments
                            .iter()
                            .map(|s| SegmentRecord {
                                eigenvalue: JsonComplex(s.eigenvalue),
                                size: s.size,
                            })
                            .collect(),
                    );
                    let gap =
                        (&jd.reconstruct() - a).frobenius_norm() / a.frobenius_norm().max(1.0);
                    record(
                        &mut report,
                        "reconstruction",
                        LawCheck::new(Comparison::Grid, gap, RECONSTRUCTION_TOL),
                    );
                }
            }
            report.decomposition = Some(d);
        }
    }
    if opts.verbose {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

fn verify(
    inputs: &Inputs<'_>,
    report: &mut Report,
    record: &mut impl FnMut(&mut Report, &str, LawCheck),
) -> Result<(), CliError> {
    let spec = inputs.spec;
    let grid = &inputs.grid;
    let suite = spec.suite.expect("validated");
    let name = suite.name();
    let f = inputs.function()?;
    match suite {
        Suite::InversePair => {
            let a = inputs.operator(false)?;
            let neg = build_operator(&a.matrix().scale((-1.0).into()), spec.base_point)?;
            let lhs = compose_apply(&a, &neg, &f)?;
            let rhs = MatrixExprFunction::scaled(&CMatrix::identity(a.n()), &f);
            report.values = matrix_values(&lhs, Some(&rhs), grid)?;
            record(report, name, inverse_pair_check(&a, &f, grid)?);
        }
        Suite::Additivity => {
            let (a, b) = (inputs.operator(false)?, inputs.operator(true)?);
            let lhs = compose_apply(&a, &b, &f)?;
            let rhs =
                build_operator(&(a.matrix() + b.matrix()), spec.base_point)?.apply_scalar(&f)?;
            report.values = matrix_values(&lhs, Some(&rhs), grid)?;
            record(report, name, additivity_check(&a, &b, &f)?);
        }
        Suite::Shift => {
            let a = inputs.operator(false)?;
            let m = spec.shift.unwrap_or(1);
            let (lhs, rhs) = shift_by_integer(&a, m, &f)?;
            report.values = matrix_values(&lhs, Some(&rhs), grid)?;
            record(report, name, shift_check(&a, m, &f)?);
        }
        Suite::Transpose => {
            let (a, b) = (inputs.operator(false)?, inputs.operator(true)?);
            let law = transpose_check(&a, &b, &f, grid)?;
            let lhs = compose_apply(&a, &b, &f)?.transpose();
            let rhs = compose_apply(&b, &a, &f)?;
            report.values = matrix_values(&lhs, Some(&rhs), grid)?;
            record(report, name, law);
        }
        Suite::Trace => {
            let a = inputs.operator(false)?;
            let law = trace_law_check(&a, &f)?;
            let lhs = scalar_matrix(determinant_sequential(&a, &f)?)?;
            let rhs = scalar_matrix(differint_expr(&f, a.matrix().trace())?)?;
            report.values = matrix_values(&lhs, Some(&rhs), grid)?;
            record(report, name, law);
        }
        Suite::Jordan => {
            let a = inputs.operator(false)?;
            let law = jordan_fd_check(&a, &f, grid, &spec.oracle_config())?;
            report.values = matrix_values(&a.apply_scalar(&f)?, None, grid)?;
            record(report, name, law);
        }
        Suite::Leibniz => {
            let g = spec
                .factor
                .as_ref()
                .expect("validated")
                .resolve(spec.base_point, "factor")?;
            let q = inputs.order();
            let max_j = g.degree().unwrap_or(0);
            let lhs = leibniz_series(&f, &g, q, max_j)?;
            let rhs = differint_expr(&f.multiply(&g)?, q)?;
            let residual = lhs.symbolic_residual(&rhs)?;
            report.values = matrix_values(&scalar_matrix(lhs)?, Some(&scalar_matrix(rhs)?), grid)?;
            record(
                report,
                name,
                LawCheck::new(Comparison::Symbolic, residual, SYMBOLIC_EQ_TOL),
            );
        }
        Suite::Composition => {
            let p = spec.outer_order.expect("validated").0;
            let q = inputs.order();
            let lhs = scalar_matrix(composition_lhs(p, q, &f)?)?;
            let rhs = scalar_matrix(composition_rhs(p, q, &f)?)?;
            report.values = matrix_values(&lhs, Some(&rhs), grid)?;
            record(
                report,
                name,
                LawCheck::grid(&lhs, &rhs, grid, COMPOSITION_TOL)?,
            );
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> TaskSpec {
        TaskSpec::from_json(json).unwrap()
    }

    #[test]
    fn apply_zero_order_is_identity_times_f() {
        let r = run(
            &spec(r#"{"task":"apply","matrix":{"n":2,"entries":[[{"re":0,"im":0},{"re":0,"im":0}],[{"re":0,"im":0},{"re":0,"im":0}]]},"function":{"named":{"name":"power","exponent":1}}}"#),
            &RunOptions::default(),
        )
        .unwrap();
        assert!(r.passed && r.checks.is_empty());
        for gv in &r.values {
            assert_eq!(gv.values[0][0].0, ComplexScalar::new(gv.x, 0.0));
            assert_eq!(gv.values[1][1].0, ComplexScalar::new(gv.x, 0.0));
            assert_eq!(gv.values[0][1].0.norm(), 0.0);
        }
    }

    #[test]
    fn inverse_pair_suite_passes() {
        let r = run(
            &spec(r#"{"task":"verify","suite":"inverse-pair","matrix":{"n":2,"entries":[[{"re":0.5,"im":0},{"re":0,"im":0}],[{"re":0,"im":0},{"re":0.25,"im":0}]]},"function":{"named":{"name":"power","exponent":1}}}"#),
            &RunOptions::default(),
        )
        .unwrap();
        assert!(r.passed);
        assert!(r.checks[0].residual <= 1e-8);
    }

    #[test]
    fn oracle_task_agrees() {
        let r = run(
            &spec(r#"{"task":"oracle","function":{"named":{"name":"power","exponent":1}},"order":{"re":0.5,"im":0}}"#),
            &RunOptions::default(),
        )
        .unwrap();
        assert!(r.passed && r.checks[0].residual <= ORACLE_TOL);
    }

    #[test]
    fn symbolic_suites_pass() {
        let leibniz = r#"{"task":"verify","suite":"leibniz","function":{"named":{"name":"power","exponent":0.5}},"factor":{"named":{"name":"polynomial","coeffs":[1,2,0,-1]}},"order":{"re":-0.5,"im":0}}"#;
        let composition = r#"{"task":"verify","suite":"composition","function":{"named":{"name":"power","exponent":-0.5}},"order":{"re":0.5,"im":0},"outer_order":{"re":-0.5,"im":0}}"#;
        let trace = r#"{"task":"verify","suite":"trace","matrix":{"n":2,"entries":[[{"re":-1,"im":0},{"re":0.3,"im":0}],[{"re":0,"im":0},{"re":-0.5,"im":0}]]},"function":{"named":{"name":"power","exponent":1}}}"#;
        for json in [leibniz, composition, trace] {
            let r = run(&spec(json), &RunOptions::default()).unwrap();
            assert!(r.passed, "{json}: {:?}", r.checks);
        }
    }

    #[test]
    fn failed_tolerance_is_recorded_not_raised() {
        let r = run(
            &spec(r#"{"task":"verify","suite":"additivity","matrix":{"n":2,"entries":[[{"re":-1,"im":0},{"re":0,"im":0}],[{"re":0,"im":0},{"re":-0.5,"im":0}]]},"matrix_b":{"n":2,"entries":[[{"re":-0.75,"im":0},{"re":0.25,"im":0}],[{"re":0.25,"im":0},{"re":-0.75,"im":0}]]},"function":{"named":{"name":"power","exponent":1}}}"#),
            &RunOptions::default(),
        )
        .unwrap();
        assert!(!r.passed && !r.checks[0].passed);
    }

    #[test]
    fn tol_scale_parsing() {
        assert_eq!(parse_tol_scale("1").unwrap(), 1.0);
        assert_eq!(parse_tol_scale(" 2.5 ").unwrap(), 2.5);
        for bad in ["0.9", "nan", "inf", "", "two"] {
            assert!(parse_tol_scale(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn domain_errors_name_their_module() {
        let e = run(
            &spec(r#"{"task":"verify","suite":"trace","matrix":{"n":1,"entries":[[{"re":1,"im":0}]]},"function":{"named":{"name":"power","exponent":1}}}"#),
            &RunOptions::default(),
        )
        .unwrap_err();
        assert!(e.to_string().starts_with("operator: precondition"), "{e}");
    }
}
