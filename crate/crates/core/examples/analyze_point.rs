//! Closed-form age and throughput of one policy, in both approximation modes.

use aoi_aloha::analytics::avg_aoi_closed_form;
use aoi_aloha::model::{channel_load, AccessPolicy, ApproxMode, SystemConfig};

fn main() -> aoi_aloha::error::Result<()> {
    let config = SystemConfig::new(1000, 0.01, 0.25)?;
    let policy = AccessPolicy::new(0.13, 3e-4)?;
    for mode in [ApproxMode::Exact, ApproxMode::Asymptotic] {
        let r = avg_aoi_closed_form(&config, &policy, mode)?;
        println!(
            "{mode:?}: rho={:.4e} load={:.4} S={:.5} E[Z]={:.3} ratio={:.1} aoi={:.1}",
            r.rho,
            channel_load(&config, r.rho),
            r.throughput,
            r.mean_reset,
            r.inter_refresh_ratio,
            r.avg_aoi
        );
    }
    Ok(())
}
