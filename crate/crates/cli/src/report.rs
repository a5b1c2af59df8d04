//! Report type and its JSON / CSV encodings.

use std::io;

use fracmat_core::linalg::{Classification, ProjectorResiduals};
use fracmat_core::operator::{Comparison, LawCheck};
use fracmat_core::scalar::JsonComplex;
use fracmat_core::ComplexScalar;
use serde::ser::Serialize;
use serde::Serialize as DeriveSerialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;
use crate::spec::TaskSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Values of a (matrix, vector or scalar) result at one grid point.
#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct GridValue {
    pub x: f64,
    pub values: Vec<Vec<JsonComplex>>,
    /// Entrywise `|lhs − rhs|` when the task compares two sides.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Vec<Vec<f64>>>,
}

impl GridValue {
    pub fn new(
        x: f64,
        rows: usize,
        cols: usize,
        flat: &[ComplexScalar],
        other: Option<&[ComplexScalar]>,
    ) -> Self {
        let shape = |v: &[ComplexScalar]| -> Vec<Vec<JsonComplex>> {
            v.chunks(cols)
                .take(rows)
                .map(|r| r.iter().map(|&z| JsonComplex(z)).collect())
                .collect()
        };
        let residuals = other.map(|o| {
            flat.chunks(cols)
                .zip(o.chunks(cols))
                .map(|(a, b)| a.iter().zip(b).map(|(p, q)| (p - q).norm()).collect())
                .collect()
        });
        Self {
            x,
            values: shape(flat),
            residuals,
        }
    }
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct CheckRecord {
    pub name: String,
    pub comparison: Comparison,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRecord {
    /// Applies the spec override (if any) and the platform scale factor.
    pub fn from_law(name: &str, law: LawCheck, spec: &TaskSpec, scale: f64) -> Self {
        let tolerance = spec.tolerance(name, law.tolerance) * scale;
        Self {
            name: name.to_string(),
            comparison: law.comparison,
            residual: law.residual,
            tolerance,
            passed: law.residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct SegmentRecord {
    pub eigenvalue: JsonComplex,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct Decomposition {
    pub classification: Classification,
    pub realization: &'static str,
    /// Eigenvalues repeated by algebraic multiplicity.
    pub eigenvalues: Vec<JsonComplex>,
    pub condition: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projector_residuals: Option<ProjectorResiduals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<SegmentRecord>>,
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct Report {
    pub task: TaskSpec,
    pub tol_scale: f64,
    pub values: Vec<GridValue>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
    pub passed: bool,
    /// Wall-clock time, only recorded in verbose runs so that reports
    /// stay byte-stable otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(task: TaskSpec, tol_scale: f64) -> Self {
        Self {
            task,
            tol_scale,
            values: Vec::new(),
            checks: Vec::new(),
            decomposition: None,
            passed: true,
            timing_ms: None,
        }
    }

    pub fn push_check(&mut self, check: CheckRecord) {
        self.passed &= check.passed;
        self.checks.push(check);
    }
}

/// Floats with 17 significant digits in exponent form.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON with every float printed by [`format_float`].
struct FixedFloat<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloat<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(format_float(v).as_bytes())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Report bytes. JSON keys are sorted; CSV has the fixed header
/// `x,row,col,re,im,residual` and one row per matrix entry per grid point.
pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            // going through Value sorts object keys
            let value = serde_json::to_value(report)?;
            let mut out = Vec::new();
            let mut ser = serde_json::Serializer::with_formatter(
                &mut out,
                FixedFloat(PrettyFormatter::new()),
            );
            value.serialize(&mut ser)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["x", "row", "col", "re", "im", "residual"])?;
            for gv in &report.values {
                for (i, row) in gv.values.iter().enumerate() {
                    for (j, z) in row.iter().enumerate() {
                        let residual = gv
                            .residuals
                            .as_ref()
                            .map(|r| format_float(r[i][j]))
                            .unwrap_or_default();
                        w.write_record([
                            format_float(gv.x),
                            i.to_string(),
                            j.to_string(),
                            format_float(z.0.re),
                            format_float(z.0.im),
                            residual,
                        ])?;
                    }
                }
            }
            w.into_inner().map_err(|e| CliError::Io(e.into_error()))
        }
    }
}
