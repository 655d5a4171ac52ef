//! Monte Carlo run of the retransmission-optimal policy against the analytic
//! values, and a full-versus-tagged interference comparison.

use aoi_aloha::analytics::avg_aoi_closed_form;
use aoi_aloha::model::{ApproxMode, SystemConfig};
use aoi_aloha::policy::{optimal_policy, Strategy};
use aoi_aloha::sfg::{inter_refresh_pgf, pgf_series};
use aoi_aloha::sim::{interference_equivalence_check, run_simulation, SimConfig};

fn main() -> aoi_aloha::error::Result<()> {
    let config = SystemConfig::new(50, 0.02, 0.25)?;
    let policy = optimal_policy(&config, Strategy::RetransmissionBased, ApproxMode::Exact)?.policy;
    let analytic = avg_aoi_closed_form(&config, &policy, ApproxMode::Exact)?;

    let sim = SimConfig::new(2_000_000, 7).tagged(10).with_replications(2);
    let stats = run_simulation(&config, &policy, &sim)?;
    println!("aoi        {:.3} +- {:.3} (analytic {:.3})", stats.time_avg_aoi, stats.time_avg_aoi_se, analytic.avg_aoi);
    println!("throughput {:.5} +- {:.5} (analytic {:.5})", stats.throughput, stats.throughput_se, analytic.throughput);

    let pmf = pgf_series(&inter_refresh_pgf(&config, &policy, analytic.omega)?, 10)?;
    for (y, want) in pmf.iter().enumerate() {
        let (p, se) = stats.y_pmf(y + 1);
        println!("P(Y={:>2}) {p:.5} +- {se:.5} (analytic {want:.5})", y + 1);
    }

    let check = interference_equivalence_check(&config, &policy, &SimConfig::new(400_000, 11).tagged(10))?;
    for s in &check.scores {
        println!("{:<13} full={:.5} tagged={:.5} z={:+.2}", s.statistic, s.full, s.tagged, s.z);
    }
    Ok(())
}
