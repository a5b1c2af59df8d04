use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fracmat_cli::{
    run_file, tol_scale_from_env, Format, RunOptions, EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_PASS,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Run a matrix-order differintegration task described by a JSON file.
#[derive(Debug, Parser)]
#[command(name = "fracmat", version)]
struct Args {
    /// TaskSpec JSON file.
    #[arg(long)]
    spec: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Record timing in the report and print a summary on stderr.
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match execute(&args) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    ExitCode::from(code as u8)
}

fn execute(args: &Args) -> Result<bool, fracmat_cli::CliError> {
    let opts = RunOptions {
        tol_scale: tol_scale_from_env()?,
        verbose: args.verbose,
    };
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let (bytes, passed) = run_file(&args.spec, format, &opts)?;
    match &args.out {
        Some(path) => std::fs::write(path, &bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    if args.verbose {
        eprintln!(
            "{}: {}",
            args.spec.display(),
            if passed { "pass" } else { "FAIL" }
        );
    }
    Ok(passed)
}
