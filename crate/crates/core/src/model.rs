//! System parameters and the elementary closed-form channel quantities.
//!
//! A network of `n` nodes shares a slotted collision channel. At the start of
//! each slot a node's sensor produces a new reading with probability `alpha`;
//! the node transmits with probability `pi_f` if its reading was produced this
//! slot and with probability `pi_s` otherwise. Every transmitted packet is
//! erased independently with probability `epsilon`, and the gateway decodes a
//! slot iff exactly one unerased packet arrives.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Network population and per-node traffic/channel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub n: u32,
    pub alpha: f64,
    pub epsilon: f64,
}

impl SystemConfig {
    pub fn new(n: u32, alpha: f64, epsilon: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in [0, 1), got {epsilon}"
            )));
        }
        Ok(Self { n, alpha, epsilon })
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.n, alpha, self.epsilon)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.n, self.alpha, epsilon)
    }

    /// `n (1 - epsilon)`, the load produced by every node transmitting once.
    pub fn effective_population(&self) -> f64 {
        f64::from(self.n) * (1.0 - self.epsilon)
    }
}

/// Transmit probabilities for a fresh (`pi_f`) and a stale (`pi_s`) reading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccessPolicy {
    pub pi_f: f64,
    pub pi_s: f64,
}

impl AccessPolicy {
    pub fn new(pi_f: f64, pi_s: f64) -> Result<Self> {
        for (name, p) in [("pi_f", pi_f), ("pi_s", pi_s)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(Self { pi_f, pi_s })
    }

    /// Plain slotted ALOHA: the same probability regardless of freshness.
    pub fn uniform(pi: f64) -> Result<Self> {
        Self::new(pi, pi)
    }

    /// Transmit only fresh readings.
    pub fn reactive(pi_f: f64) -> Result<Self> {
        Self::new(pi_f, 0.0)
    }
}

/// How the success probability of a transmission is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ApproxMode {
    /// Binomial interference, `(1-eps)[1 - rho(1-eps)]^(n-1)`.
    #[default]
    Exact,
    /// Poisson limit, `(1-eps) exp(-n rho (1-eps))`.
    Asymptotic,
}

impl fmt::Display for ApproxMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApproxMode::Exact => f.write_str("exact"),
            ApproxMode::Asymptotic => f.write_str("asymptotic"),
        }
    }
}

impl FromStr for ApproxMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(ApproxMode::Exact),
            "asymptotic" => Ok(ApproxMode::Asymptotic),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

/// Per-slot channel access probability `rho = alpha pi_f + (1 - alpha) pi_s`.
pub fn access_prob(policy: &AccessPolicy, alpha: f64) -> f64 {
    alpha * policy.pi_f + (1.0 - alpha) * policy.pi_s
}

/// Probability that a transmitted packet is decoded.
///
/// The asymptotic form uses exponent `n` (not `n - 1`) so that
/// `S = n rho omega` holds identically in both modes; it differs from the
/// binomial limit by a factor `exp(rho (1 - eps))`, i.e. by `O(rho)`.
pub fn success_prob(config: &SystemConfig, rho: f64, mode: ApproxMode) -> f64 {
    let keep = 1.0 - config.epsilon;
    match mode {
        ApproxMode::Exact => keep * (1.0 - rho * keep).powi(config.n as i32 - 1),
        ApproxMode::Asymptotic => keep * (-f64::from(config.n) * rho * keep).exp(),
    }
}

/// Aggregate throughput `S = n rho omega`, in decoded packets per slot.
pub fn throughput(config: &SystemConfig, rho: f64, mode: ApproxMode) -> f64 {
    f64::from(config.n) * rho * success_prob(config, rho, mode)
}

/// Mean number of unerased packets reaching the gateway per slot.
pub fn channel_load(config: &SystemConfig, rho: f64) -> f64 {
    f64::from(config.n) * rho * (1.0 - config.epsilon)
}

/// Largest throughput attainable by any `rho` in `[0, 1]`.
///
/// Both forms peak at `rho (1 - eps) = 1/n`, clamped to `rho = 1`.
pub fn peak_throughput(config: &SystemConfig, mode: ApproxMode) -> f64 {
    let rho = (1.0 / config.effective_population()).min(1.0);
    throughput(config, rho, mode)
}

fn refresh_denominator(config: &SystemConfig, policy: &AccessPolicy, omega: f64) -> f64 {
    config.alpha + (1.0 - config.alpha) * policy.pi_s * omega
}

fn ensure_refreshing(rho: f64, omega: f64) -> Result<()> {
    if rho * omega > 0.0 {
        Ok(())
    } else {
        Err(Error::DegenerateProcess(format!(
            "rho * omega = {} : the age is never refreshed",
            rho * omega
        )))
    }
}

/// Probability `zeta` that the AoI of a given node is reset in a slot.
pub fn reset_prob(config: &SystemConfig, policy: &AccessPolicy, omega: f64) -> Result<f64> {
    let rho = access_prob(policy, config.alpha);
    ensure_refreshing(rho, omega)?;
    Ok(config.alpha * omega * rho / refresh_denominator(config, policy, omega))
}

/// PMF of the reset value `Z`, the AoI right after a refresh.
///
/// `z = 1` means the reading was delivered in the slot it was produced; for
/// `z > 1` the reading missed its first slot, survived `z - 2` stale slots
/// without being replaced or delivered, and went through in the last one.
pub fn reset_value_pmf(
    z: u64,
    config: &SystemConfig,
    policy: &AccessPolicy,
    omega: f64,
) -> Result<f64> {
    if z == 0 {
        return Err(Error::InvalidParameter("reset value z must be >= 1".into()));
    }
    let zeta = reset_prob(config, policy, omega)?;
    let scale = config.alpha * omega / zeta;
    let alpha = config.alpha;
    let p = if z == 1 {
        policy.pi_f
    } else {
        let k = (z - 2) as f64;
        policy.pi_s
            * (1.0 - alpha)
            * (1.0 - policy.pi_f * omega)
            * ((1.0 - alpha) * (1.0 - policy.pi_s * omega)).powf(k)
    };
    Ok(scale * p)
}

/// Mean reset value `E[Z] = 1 + pi_s (1-alpha)(1-pi_f omega) / (rho [alpha + (1-alpha) pi_s omega])`.
pub fn mean_reset_value(config: &SystemConfig, policy: &AccessPolicy, omega: f64) -> Result<f64> {
    let rho = access_prob(policy, config.alpha);
    ensure_refreshing(rho, omega)?;
    let num = policy.pi_s * (1.0 - config.alpha) * (1.0 - policy.pi_f * omega);
    Ok(1.0 + num / (rho * refresh_denominator(config, policy, omega)))
}
