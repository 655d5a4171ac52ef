//! The three strategies side by side, plus a numeric check of the optimum.

use aoi_aloha::model::{ApproxMode, SystemConfig};
use aoi_aloha::policy::{numeric_min_aoi, optimal_policy, Strategy};

fn main() -> aoi_aloha::error::Result<()> {
    let mode = ApproxMode::Asymptotic;
    for alpha in [1e-4, 1e-3, 1e-2, 1e-1] {
        let config = SystemConfig::new(1000, alpha, 0.25)?;
        println!("alpha = {alpha}");
        for s in Strategy::ALL {
            let r = optimal_policy(&config, s, mode)?;
            println!(
                "  {:<20} pi_f={:.4e} pi_s={:.4e} aoi={:>10.1} S={:.4} retention={:.3}",
                s.as_str(),
                r.policy.pi_f,
                r.policy.pi_s,
                r.predicted_aoi,
                r.predicted_throughput,
                r.retention
            );
        }
        let num = numeric_min_aoi(&config, mode)?;
        println!("  numeric minimum at rho={:.6e} (rho* = {:.6e})", num.rho, num.rho_star);
    }
    Ok(())
}
