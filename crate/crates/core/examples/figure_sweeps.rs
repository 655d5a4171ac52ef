//! The fig5 preset (normalised age against n*alpha) written as CSV to stdout.

use std::io;

use aoi_aloha::cli::sweep::{run_sweep, write_csv, Preset, SweepSpec, PRESET_EPSILON, PRESET_N};
use aoi_aloha::model::ApproxMode;

fn main() -> aoi_aloha::error::Result<()> {
    let spec = SweepSpec::preset(Preset::Fig5, PRESET_N, PRESET_EPSILON, ApproxMode::Asymptotic)?;
    let rows = run_sweep(&spec)?;
    write_csv(&rows, &mut io::stdout().lock())
}
