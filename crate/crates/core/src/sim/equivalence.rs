//! Agreement between full and aggregated-interference simulation.

use serde::Serialize;

use super::{run_simulation, SimConfig, SimMode, SimStats};
use crate::error::{Error, Result};
use crate::model::{AccessPolicy, SystemConfig};

/// Largest accepted `|z|` between the two modes.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZScore {
    pub statistic: &'static str,
    pub full: f64,
    pub tagged: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub scores: Vec<ZScore>,
    pub passed: bool,
}

fn z_score(statistic: &'static str, full: (f64, f64), tagged: (f64, f64)) -> ZScore {
    let diff = full.0 - tagged.0;
    let se = full.1.hypot(tagged.1);
    let z = if diff == 0.0 { 0.0 } else { diff / se };
    ZScore { statistic, full: full.0, tagged: tagged.0, z }
}

/// Runs `sim` once in full mode and once in tagged mode (same horizon, seed
/// and replications) and compares the pooled estimates.
pub fn interference_equivalence_check(
    config: &SystemConfig,
    policy: &AccessPolicy,
    sim: &SimConfig,
) -> Result<EquivalenceReport> {
    let full = run_simulation(
        config,
        policy,
        &SimConfig { mode: SimMode::Full, per_node_throughput: false, ..sim.clone() },
    )?;
    let tagged = run_simulation(
        config,
        policy,
        &SimConfig { mode: SimMode::Tagged, per_node_throughput: false, ..sim.clone() },
    )?;
    for s in [&full, &tagged] {
        if s.y_samples == 0 {
            return Err(Error::DegenerateProcess(
                "no complete inter-refresh interval was observed".into(),
            ));
        }
    }
    let pick = |s: &SimStats| {
        [
            (s.time_avg_aoi, s.time_avg_aoi_se),
            (s.throughput, s.throughput_se),
            (s.mean_y, s.mean_y_se),
            (s.mean_z, s.mean_z_se),
            (s.zeta_hat, s.zeta_hat_se),
        ]
    };
    let names = ["time_avg_aoi", "throughput", "mean_y", "mean_z", "zeta_hat"];
    let scores: Vec<ZScore> = names
        .iter()
        .zip(pick(&full).into_iter().zip(pick(&tagged)))
        .map(|(name, (f, t))| z_score(name, f, t))
        .collect();
    let passed = scores.iter().all(|s| s.z.abs() < Z_LIMIT);
    Ok(EquivalenceReport { scores, passed })
}
