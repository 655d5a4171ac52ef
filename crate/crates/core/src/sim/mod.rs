//! Slot-level Monte Carlo of the feedback-free slotted ALOHA network.
//!
//! Slot `t` (from 1) covers the time interval `[t, t + 1)`. In every slot each
//! node first draws a fresh reading with probability `alpha` (overwriting
//! whatever it buffered), then sends its buffer with probability `pi_f` if
//! the reading is fresh and `pi_s` otherwise. A sent packet survives the
//! erasure channel with probability `1 - eps`; the gateway decodes when
//! exactly one packet survives. A decoded reading newer than the gateway's
//! copy resets the age at the slot end to `(t + 1) - generation time`.
//!
//! The age is integrated exactly as a piecewise-linear sawtooth. Interval
//! statistics (`Y`, `Z`, the histogram) use only intervals that start and end
//! inside the measurement window.
//!
//! In [`SimMode::Tagged`] only `tagged_count` nodes are simulated
//! individually; the others are replaced by one binomial draw of surviving
//! interfering packets per slot, which has the same law because every node
//! transmits with marginal probability `rho` independently of everything
//! else in the slot.

mod equivalence;
mod stats;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

pub use equivalence::{interference_equivalence_check, EquivalenceReport, ZScore};
pub use stats::{SimStats, HISTOGRAM_LEN};

use crate::error::{Error, Result};
use crate::model::{access_prob, reset_prob, success_prob, AccessPolicy, ApproxMode, SystemConfig};
use stats::Accumulator;

/// Lower bound on the default warm-up.
pub const MIN_WARMUP: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// Every node is simulated and tracked.
    #[default]
    Full,
    /// The first `tagged_count` nodes are tracked; the rest are aggregated.
    Tagged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub slots: u64,
    /// Discarded initial slots; `None` picks [`default_warmup`].
    pub warmup: Option<u64>,
    pub seed: u64,
    pub mode: SimMode,
    pub tagged_count: u32,
    pub replications: u32,
    pub per_node_throughput: bool,
}

impl SimConfig {
    pub fn new(slots: u64, seed: u64) -> Self {
        SimConfig {
            slots,
            warmup: None,
            seed,
            mode: SimMode::Full,
            tagged_count: 1,
            replications: 1,
            per_node_throughput: false,
        }
    }

    pub fn tagged(mut self, count: u32) -> Self {
        self.mode = SimMode::Tagged;
        self.tagged_count = count;
        self
    }

    pub fn with_warmup(mut self, warmup: u64) -> Self {
        self.warmup = Some(warmup);
        self
    }

    pub fn with_replications(mut self, replications: u32) -> Self {
        self.replications = replications;
        self
    }
}

/// `max(10 / zeta, MIN_WARMUP)` with `zeta` the analytic refresh rate.
pub fn default_warmup(config: &SystemConfig, policy: &AccessPolicy) -> u64 {
    let rho = access_prob(policy, config.alpha);
    let omega = success_prob(config, rho, ApproxMode::Exact);
    match reset_prob(config, policy, omega) {
        Ok(zeta) if zeta > 0.0 => ((10.0 / zeta).ceil() as u64).max(MIN_WARMUP),
        _ => MIN_WARMUP,
    }
}

fn resolve_warmup(config: &SystemConfig, policy: &AccessPolicy, sim: &SimConfig) -> Result<u64> {
    if sim.slots == 0 {
        return Err(Error::Config("slots must be positive".into()));
    }
    if sim.replications == 0 {
        return Err(Error::Config("replications must be positive".into()));
    }
    let warmup = sim.warmup.unwrap_or_else(|| default_warmup(config, policy));
    if warmup >= sim.slots {
        return Err(Error::Config(format!(
            "warm-up of {warmup} slots leaves nothing of a {}-slot run",
            sim.slots
        )));
    }
    Ok(warmup)
}

fn tracked_nodes(config: &SystemConfig, sim: &SimConfig) -> Result<u32> {
    match sim.mode {
        SimMode::Full => Ok(config.n),
        SimMode::Tagged => {
            if sim.tagged_count == 0 || sim.tagged_count > config.n {
                return Err(Error::Config(format!(
                    "tagged_count must lie in [1, {}], got {}",
                    config.n, sim.tagged_count
                )));
            }
            if sim.per_node_throughput && sim.tagged_count < config.n {
                return Err(Error::Config(
                    "per-node throughput is unavailable for aggregated nodes".into(),
                ));
            }
            Ok(sim.tagged_count)
        }
    }
}

/// Runs all replications (in parallel) and pools them in replication order.
pub fn run_simulation(config: &SystemConfig, policy: &AccessPolicy, sim: &SimConfig) -> Result<SimStats> {
    let warmup = resolve_warmup(config, policy, sim)?;
    let tracked = tracked_nodes(config, sim)?;
    let runs: Vec<Accumulator> = (0..sim.replications)
        .into_par_iter()
        .map(|rep| replicate(config, policy, sim, warmup, tracked, rep))
        .collect();
    let mut total = Accumulator::new(tracked as usize);
    for run in &runs {
        total.merge(run);
    }
    Ok(total.finish(sim.replications, sim.per_node_throughput))
}

fn replicate(
    config: &SystemConfig,
    policy: &AccessPolicy,
    sim: &SimConfig,
    warmup: u64,
    tracked: u32,
    replication: u32,
) -> Accumulator {
    let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
    rng.set_stream(u64::from(replication));

    let k = tracked as usize;
    let alpha = config.alpha;
    let keep = 1.0 - config.epsilon;
    let send_fresh = policy.pi_f * keep;
    let send_stale = policy.pi_s * keep;
    let others = u64::from(config.n - tracked);
    let rho = access_prob(policy, alpha);
    let interferers = if others > 0 && rho * keep > 0.0 {
        Some(Binomial::new(others, rho * keep).expect("probability within [0, 1]"))
    } else {
        None
    };

    let window_start = warmup + 1;
    let window_end = sim.slots + 1;
    let mut stored = vec![0u64; k];
    let mut delivered = vec![0u64; k];
    // Time since which the age has been integrated, and the last refresh.
    let mut since = vec![window_start; k];
    let mut last_refresh: Vec<Option<u64>> = vec![None; k];

    let mut acc = Accumulator::new(k);
    acc.slots = sim.slots - warmup;

    for t in 1..=sim.slots {
        let mut tagged_arrivals = 0u32;
        let mut sender = 0usize;
        for i in 0..k {
            let fresh = rng.random::<f64>() < alpha;
            if fresh {
                stored[i] = t;
            }
            let p = if fresh { send_fresh } else { send_stale };
            if rng.random::<f64>() < p {
                tagged_arrivals += 1;
                sender = i;
            }
        }
        let background = interferers.as_ref().map_or(0, |b| b.sample(&mut rng));
        if u64::from(tagged_arrivals) + background != 1 {
            continue;
        }
        let measuring = t >= window_start;
        if measuring {
            acc.decoded += 1;
        }
        if tagged_arrivals != 1 {
            continue;
        }
        let i = sender;
        if measuring {
            acc.node_decoded[i] += 1;
        }
        if stored[i] <= delivered[i] {
            continue;
        }
        let end = t + 1;
        if measuring {
            acc.node_area[i] += sawtooth_area(since[i], end, delivered[i]);
            since[i] = end;
            acc.refreshes += 1;
            acc.z.push((end - stored[i]) as f64);
            if let Some(prev) = last_refresh[i].filter(|&r| r >= window_start) {
                acc.push_interval(end - prev, prev - delivered[i]);
            }
        }
        delivered[i] = stored[i];
        last_refresh[i] = Some(end);
    }
    for i in 0..k {
        acc.node_area[i] += sawtooth_area(since[i], window_end, delivered[i]);
    }
    acc
}

/// Integral of `t - d` over `[a, b]`.
fn sawtooth_area(a: u64, b: u64, d: u64) -> f64 {
    let width = (b - a) as f64;
    width * ((a - d) + (b - d)) as f64 * 0.5
}
