//! Task specification read from a JSON file.

use std::collections::BTreeMap;

use fracmat_core::linalg::CMatrix;
use fracmat_core::operator::standard_grid;
use fracmat_core::oracle::OracleConfig;
use fracmat_core::scalar::JsonComplex;
use fracmat_core::symbolic::Expression;
use fracmat_core::ComplexScalar;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Apply,
    ApplyVector,
    Compose,
    Verify,
    Oracle,
    Decompose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    InversePair,
    Additivity,
    Shift,
    Transpose,
    Trace,
    Jordan,
    Leibniz,
    Composition,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::InversePair => "inverse-pair",
            Suite::Additivity => "additivity",
            Suite::Shift => "shift",
            Suite::Transpose => "transpose",
            Suite::Trace => "trace",
            Suite::Jordan => "jordan",
            Suite::Leibniz => "leibniz",
            Suite::Composition => "composition",
        }
    }
}

/// Named functions available without writing out term lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NamedFunction {
    /// `(x−a)^exponent`
    Power { exponent: f64 },
    /// `(x−a)^exponent · ln^log_power(x−a)`
    PowerLog { exponent: f64, log_power: u32 },
    /// `Σ c_k (x−a)^k`
    Polynomial { coeffs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Expression(Expression),
    Named(NamedFunction),
}

impl FunctionSpec {
    pub fn resolve(&self, base_point: f64, path: &str) -> Result<Expression, CliError> {
        let bad = |message: String| CliError::Spec {
            path: path.to_string(),
            message,
        };
        match self {
            FunctionSpec::Expression(e) => {
                if e.base_point() != base_point {
                    return Err(bad(format!(
                        "expression base point {} differs from task base point {base_point}",
                        e.base_point()
                    )));
                }
                Ok(e.clone())
            }
            FunctionSpec::Named(NamedFunction::Power { exponent }) => Expression::monomial(
                base_point,
                ComplexScalar::new(1.0, 0.0),
                ComplexScalar::new(*exponent, 0.0),
                0,
            )
            .map_err(|e| bad(e.to_string())),
            FunctionSpec::Named(NamedFunction::PowerLog {
                exponent,
                log_power,
            }) => Expression::monomial(
                base_point,
                ComplexScalar::new(1.0, 0.0),
                ComplexScalar::new(*exponent, 0.0),
                *log_power,
            )
            .map_err(|e| bad(e.to_string())),
            FunctionSpec::Named(NamedFunction::Polynomial { coeffs }) => {
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(bad("polynomial coefficients must be finite".into()));
                }
                Ok(Expression::polynomial(base_point, coeffs))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    /// Evenly spaced points, both ends included.
    pub fn points(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Names accepted in `tolerances`.
pub const CHECK_NAMES: [&str; 12] = [
    "additivity",
    "composition",
    "expansion",
    "inverse-pair",
    "jordan",
    "leibniz",
    "oracle",
    "projectors",
    "reconstruction",
    "shift",
    "trace",
    "transpose",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub task: TaskKind,
    #[serde(default)]
    pub base_point: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<CMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_b: Option<CMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    /// Second factor for the Leibniz suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<FunctionSpec>>,
    /// Scalar order for oracle, Leibniz and the inner order of composition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<JsonComplex>,
    /// Outer order of the composition suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_order: Option<JsonComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

fn spec_err(path: &str, message: impl Into<String>) -> CliError {
    CliError::Spec {
        path: path.to_string(),
        message: message.into(),
    }
}

impl TaskSpec {
    /// Parses JSON, reporting the field path of the first schema error.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: TaskSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            spec_err(&path, e.into_inner().to_string())
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !self.base_point.is_finite() {
            return Err(spec_err("base_point", "must be finite"));
        }
        if let Some(g) = &self.grid {
            if !(g.start.is_finite() && g.stop.is_finite()) {
                return Err(spec_err("grid", "start and stop must be finite"));
            }
            if g.start <= self.base_point {
                return Err(spec_err(
                    "grid.start",
                    format!("must exceed base_point {}", self.base_point),
                ));
            }
            if g.stop < g.start {
                return Err(spec_err("grid.stop", "must not be below grid.start"));
            }
            if g.points < 2 {
                return Err(spec_err("grid.points", "must be at least 2"));
            }
        }
        if let Some(cfg) = &self.oracle {
            cfg.validate()
                .map_err(|e| spec_err("oracle", e.to_string()))?;
        }
        for (name, tol) in &self.tolerances {
            if !CHECK_NAMES.contains(&name.as_str()) {
                return Err(spec_err(
                    &format!("tolerances.{name}"),
                    format!("unknown check, expected one of {}", CHECK_NAMES.join(", ")),
                ));
            }
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(spec_err(
                    &format!("tolerances.{name}"),
                    "must be positive and finite",
                ));
            }
        }
        for (path, o) in [("order", &self.order), ("outer_order", &self.outer_order)] {
            if let Some(JsonComplex(z)) = o {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(spec_err(path, "must be finite"));
                }
            }
        }
        self.validate_required()
    }

    fn validate_required(&self) -> Result<(), CliError> {
        let mut needed: Vec<&str> = Vec::new();
        match self.task {
            TaskKind::Apply | TaskKind::Compose => needed.extend(["matrix", "function"]),
            TaskKind::ApplyVector => needed.extend(["matrix", "vector"]),
            TaskKind::Oracle => needed.extend(["function", "order"]),
            TaskKind::Decompose => needed.push("matrix"),
            TaskKind::Verify => {
                let suite = self
                    .suite
                    .ok_or_else(|| spec_err("suite", "required for task verify"))?;
                needed.push("function");
                match suite {
                    Suite::InversePair | Suite::Shift | Suite::Trace | Suite::Jordan => {
                        needed.push("matrix")
                    }
                    Suite::Additivity | Suite::Transpose => needed.extend(["matrix", "matrix_b"]),
                    Suite::Leibniz => needed.extend(["factor", "order"]),
                    Suite::Composition => needed.extend(["order", "outer_order"]),
                }
            }
        }
        if self.task == TaskKind::Compose {
            needed.push("matrix_b");
        }
        if self.task != TaskKind::Verify && self.suite.is_some() {
            return Err(spec_err("suite", "only valid for task verify"));
        }
        for field in needed {
            let present = match field {
                "matrix" => self.matrix.is_some(),
                "matrix_b" => self.matrix_b.is_some(),
                "function" => self.function.is_some(),
                "factor" => self.factor.is_some(),
                "vector" => self.vector.is_some(),
                "order" => self.order.is_some(),
                "outer_order" => self.outer_order.is_some(),
                _ => unreachable!(),
            };
            if !present {
                let task = serde_json::to_value(self.task).ok();
                let task = task.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
                return Err(spec_err(field, format!("required for task {task}")));
            }
        }
        if let (Some(a), Some(b)) = (&self.matrix, &self.matrix_b) {
            if a.n() != b.n() {
                return Err(spec_err(
                    "matrix_b",
                    format!(
                        "dimension {} differs from matrix dimension {}",
                        b.n(),
                        a.n()
                    ),
                ));
            }
        }
        if let (Some(a), Some(v)) = (&self.matrix, &self.vector) {
            if a.n() != v.len() {
                return Err(spec_err(
                    "vector",
                    format!("length {} differs from matrix dimension {}", v.len(), a.n()),
                ));
            }
        }
        Ok(())
    }

    /// Grid points, the standard 7-point grid when none is given.
    pub fn grid_points(&self) -> Vec<f64> {
        match &self.grid {
            Some(g) => g.points(),
            None => standard_grid(self.base_point),
        }
    }

    pub fn oracle_config(&self) -> OracleConfig {
        self.oracle.unwrap_or_default()
    }

    pub fn tolerance(&self, check: &str, default: f64) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_BY_ONE: &str = r#"{"n":1,"entries":[[{"re":0.5,"im":0}]]}"#;

    fn parse(json: &str) -> Result<TaskSpec, CliError> {
        TaskSpec::from_json(json)
    }

    fn path_of(e: CliError) -> String {
        match e {
            CliError::Spec { path, .. } => path,
            other => panic!("expected a spec error, got {other}"),
        }
    }

    #[test]
    fn grid_includes_both_ends() {
        let g = GridSpec {
            start: 0.5,
            stop: 2.0,
            points: 4,
        };
        assert_eq!(g.points(), vec![0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn missing_fields_are_named() {
        let e = parse(
            r#"{"task":"compose","matrix":MAT,"function":{"named":{"name":"power","exponent":1}}}"#
                .replace("MAT", ONE_BY_ONE)
                .as_str(),
        )
        .unwrap_err();
        assert_eq!(path_of(e), "matrix_b");
        let e = parse(r#"{"task":"verify","function":{"named":{"name":"power","exponent":1}}}"#)
            .unwrap_err();
        assert_eq!(path_of(e), "suite");
        let e = parse(r#"{"task":"verify","suite":"composition","function":{"named":{"name":"power","exponent":1}},"order":{"re":1,"im":0}}"#).unwrap_err();
        assert_eq!(path_of(e), "outer_order");
    }

    #[test]
    fn schema_errors_carry_paths() {
        let e = parse(r#"{"task":"apply","matrix":{"n":1,"entries":[[{"re":"x","im":0}]]}}"#)
            .unwrap_err();
        assert!(path_of(e).starts_with("matrix"));
        let e = parse(r#"{"task":"apply","colour":1}"#).unwrap_err();
        assert!(matches!(e, CliError::Spec { .. }));
        let e = parse(
            r#"{"task":"decompose","matrix":MAT,"tolerances":{"speed":1}}"#
                .replace("MAT", ONE_BY_ONE)
                .as_str(),
        )
        .unwrap_err();
        assert_eq!(path_of(e), "tolerances.speed");
        let e = parse(
            r#"{"task":"decompose","matrix":MAT,"grid":{"start":1,"stop":2,"points":1}}"#
                .replace("MAT", ONE_BY_ONE)
                .as_str(),
        )
        .unwrap_err();
        assert_eq!(path_of(e), "grid.points");
        let e = parse(
            r#"{"task":"decompose","matrix":MAT,"oracle":{"steps":100,"richardson_levels":1}}"#
                .replace("MAT", ONE_BY_ONE)
                .as_str(),
        )
        .unwrap_err();
        assert_eq!(path_of(e), "oracle");
    }

    #[test]
    fn named_functions_resolve() {
        let f = FunctionSpec::Named(NamedFunction::Polynomial {
            coeffs: vec![1.0, 0.0, 3.0],
        });
        assert_eq!(
            f.resolve(1.0, "function").unwrap(),
            Expression::polynomial(1.0, &[1.0, 0.0, 3.0])
        );
        let f = FunctionSpec::Named(NamedFunction::PowerLog {
            exponent: 0.5,
            log_power: 9,
        });
        assert_eq!(path_of(f.resolve(0.0, "function").unwrap_err()), "function");
        let f = FunctionSpec::Expression(Expression::power(0.0, 1.0));
        assert!(f.resolve(1.0, "vector[0]").is_err());
    }

    #[test]
    fn spec_round_trips() {
        let json = r#"{"task":"verify","suite":"shift","shift":2,"matrix":MAT,"function":{"named":{"name":"power-log","exponent":0.5,"log_power":1}},"tolerances":{"shift":1e-9}}"#.replace("MAT", ONE_BY_ONE);
        let spec = parse(&json).unwrap();
        let again = parse(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(spec.tolerance("shift", 1.0), 1e-9);
        assert_eq!(spec.tolerance("trace", 1.0), 1.0);
        assert_eq!(spec.grid_points().len(), 7);
    }
}
