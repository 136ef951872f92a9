//! Command-line front end: signal generation, bracket inspection,
//! orthogonalization, frame analysis, completeness tests, reconstruction and
//! the naive-vs-compressed benchmark.
//!
//! Exit codes: 0 success; 1 when `--strict` is set and the analysis verdict
//! is "not a frame" / "incomplete"; 2 on configuration or input errors.

mod run;

use std::process::ExitCode;

fn main() -> ExitCode {
    // clap itself exits with 2 on bad flags, matching the input-error code.
    let config = run::parse();
    match run::run(config) {
        Ok(run::Outcome::Success) => ExitCode::SUCCESS,
        Ok(run::Outcome::StrictVerdictFailed(reason)) => {
            eprintln!("strict verdict failed: {reason}");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
