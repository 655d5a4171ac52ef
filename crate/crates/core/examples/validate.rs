//! The validation harness on a reduced grid.

use std::io;

use aoi_aloha::cli::validate::{run_validation, Formulas, ValidationSpec};

fn main() -> aoi_aloha::error::Result<()> {
    let spec = ValidationSpec {
        alphas: vec![0.02, 0.1],
        ..ValidationSpec::default_grid(500_000, 7, 10)
    };
    let report = run_validation(&spec, &Formulas::default())?;
    report.write(&mut io::stdout().lock())?;
    std::process::exit(if report.passed() { 0 } else { 1 });
}
