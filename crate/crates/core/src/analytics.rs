//! Average Age of Information.
//!
//! The age of a node grows linearly between refreshes and is reset to `Z`
//! when an innovative update is decoded. Sampling the sawtooth at a random
//! instant gives `avg_aoi = E[Z] + E[Y^2] / (2 E[Y])`, which simplifies to
//! `1/2 + n/S + 1/alpha - pi_f/rho`.

use std::f64::consts::E;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    access_prob, mean_reset_value, success_prob, throughput, AccessPolicy, ApproxMode, SystemConfig,
};
use crate::sfg::inter_refresh_ratio;

/// Average age together with the quantities it is assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AoiReport {
    pub avg_aoi: f64,
    pub mean_reset: f64,
    pub inter_refresh_ratio: f64,
    pub throughput: f64,
    pub rho: f64,
    pub omega: f64,
    pub mode: ApproxMode,
}

/// `E[Z] + E[Y^2]/(2E[Y])`.
pub fn avg_aoi_decomposition(mean_reset: f64, ratio: f64) -> f64 {
    mean_reset + ratio
}

/// `1/2 + n/S + 1/alpha - pi_f/rho` for a given per-transmission success
/// probability, with `S = n rho omega`.
pub fn closed_form_aoi(config: &SystemConfig, policy: &AccessPolicy, omega: f64) -> Result<f64> {
    let rho = access_prob(policy, config.alpha);
    if rho * omega <= 0.0 {
        return Err(Error::DegenerateProcess(format!(
            "rho = {rho}, omega = {omega}: the age is never refreshed"
        )));
    }
    let n = f64::from(config.n);
    let s = n * rho * omega;
    Ok(0.5 + n / s + 1.0 / config.alpha - policy.pi_f / rho)
}

/// Average age in closed form, with the decomposition terms alongside.
pub fn avg_aoi_closed_form(
    config: &SystemConfig,
    policy: &AccessPolicy,
    mode: ApproxMode,
) -> Result<AoiReport> {
    let rho = access_prob(policy, config.alpha);
    let omega = success_prob(config, rho, mode);
    let avg_aoi = closed_form_aoi(config, policy, omega)?;
    let s = throughput(config, rho, mode);
    Ok(AoiReport {
        avg_aoi,
        mean_reset: mean_reset_value(config, policy, omega)?,
        inter_refresh_ratio: inter_refresh_ratio(config, policy, omega, s)?,
        throughput: s,
        rho,
        omega,
        mode,
    })
}

/// Plain ALOHA (`pi_f = pi_s = pi`) at its best: the age is
/// `n/S + 1/alpha - 1/2`, so the throughput-maximising
/// `pi = min{1, 1/(n(1-eps))}` also minimises it. Both the binomial and the
/// Poisson throughput peak at `rho (1-eps) = 1/n`.
pub fn min_aoi_throughput_policy(config: &SystemConfig, mode: ApproxMode) -> Result<(AccessPolicy, f64)> {
    let pi = (1.0 / config.effective_population()).min(1.0);
    let policy = AccessPolicy::uniform(pi)?;
    let report = avg_aoi_closed_form(config, &policy, mode)?;
    Ok((policy, report.avg_aoi))
}

/// Reactive policy (`pi_s = 0`) at its best: the age is `n/S + 1/2` with
/// `rho = alpha pi_f`, minimised by `pi_f = min{1, 1/(alpha n (1-eps))}`.
pub fn min_aoi_reactive(config: &SystemConfig, mode: ApproxMode) -> Result<(AccessPolicy, f64)> {
    let pi_f = (1.0 / (config.alpha * config.effective_population())).min(1.0);
    let policy = AccessPolicy::reactive(pi_f)?;
    let report = avg_aoi_closed_form(config, &policy, mode)?;
    Ok((policy, report.avg_aoi))
}

/// `n e + 1/alpha - 1/2`, the Poisson-limit minimum of plain ALOHA (valid
/// when `n (1-eps) >= 1`).
pub fn throughput_optimal_aoi_limit(config: &SystemConfig) -> f64 {
    f64::from(config.n) * E + 1.0 / config.alpha - 0.5
}

/// Poisson-limit minimum of the reactive policy:
/// `1/2 + n e` above the saturation threshold `alpha > 1/(n(1-eps))`,
/// `1/2 + exp(n alpha (1-eps)) / (alpha (1-eps))` at or below it.
pub fn reactive_aoi_limit(config: &SystemConfig) -> f64 {
    let keep = 1.0 - config.epsilon;
    if config.alpha > 1.0 / config.effective_population() {
        0.5 + f64::from(config.n) * E
    } else {
        0.5 + (f64::from(config.n) * config.alpha * keep).exp() / (config.alpha * keep)
    }
}
