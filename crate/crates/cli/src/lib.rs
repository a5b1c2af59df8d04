//! Batch front-end: reads a JSON TaskSpec, runs it against `fracmat-core`
//! and writes a JSON or CSV report.
//!
//! Exit status of the binary: 0 when every check passes, 1 when a check
//! fails its tolerance, 2 on a spec, input or domain error.

mod error;
mod report;
mod run;
mod spec;

pub use error::CliError;
pub use report::{
    emit, format_float, CheckRecord, Decomposition, Format, GridValue, Report, SegmentRecord,
};
pub use run::{
    parse_tol_scale, run, tol_scale_from_env, RunOptions, COMPOSITION_TOL, ORACLE_TOL,
    PROJECTOR_TOL, RECONSTRUCTION_TOL,
};
pub use spec::{FunctionSpec, GridSpec, NamedFunction, Suite, TaskKind, TaskSpec, CHECK_NAMES};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Loads, runs and serializes one spec file. Returns the report bytes and
/// whether every check passed.
pub fn run_file(
    path: &std::path::Path,
    format: Format,
    opts: &RunOptions,
) -> Result<(Vec<u8>, bool), CliError> {
    let text = std::fs::read_to_string(path)?;
    let spec = TaskSpec::from_json(&text)?;
    let report = run(&spec, opts)?;
    Ok((emit(&report, format)?, report.passed))
}
