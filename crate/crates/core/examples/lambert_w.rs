//! Principal-branch Lambert W and the quantities built on it.

use aoi_aloha::lambert::{lambert_w0, INV_E};
use aoi_aloha::policy::{optimal_load_offset, retention_inverse, throughput_retention};

fn main() -> aoi_aloha::error::Result<()> {
    for x in [-INV_E, -0.3, 0.0, 1.0, std::f64::consts::E, 10.0] {
        let w = lambert_w0(x)?;
        println!("W({x:+.6}) = {w:+.12}  residual {:.1e}", w * w.exp() - x);
    }
    for eps in [0.01, 0.1, 0.25, 0.5] {
        println!(
            "eps={eps:<5} optimal load={:.6} retention={:.6}",
            1.0 + optimal_load_offset(eps)?,
            throughput_retention(eps)?
        );
    }
    println!("retention falls to one half at eps={:.6}", retention_inverse(0.5)?);
    Ok(())
}
