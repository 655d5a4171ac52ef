//! Inter-refresh time of a single transmitter.
//!
//! From the gateway's point of view a node is in one of three states:
//! `R` (its age was refreshed in the last slot), `S` (the buffered reading is
//! the one the gateway already has) or `F` (the buffer holds something
//! fresher than the gateway's copy). The inter-refresh time `Y` is the
//! recurrence time of `R`.

use super::chain::MarkovChain;
use super::graph::{chain_to_flowgraph, mason_transfer, sink_label, source_label};
use super::poly::Polynomial;
use super::rational::RationalFunction;
use crate::error::{Error, Result};
use crate::model::{access_prob, AccessPolicy, SystemConfig};

pub const REFRESHED: &str = "R";
pub const STALE: &str = "S";
pub const FRESHER: &str = "F";

/// Three-state chain `{R, S, F}` tracking whether a node holds innovative data.
pub fn build_transmitter_chain(
    config: &SystemConfig,
    policy: &AccessPolicy,
    omega: f64,
) -> Result<MarkovChain> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::InvalidParameter(format!(
            "omega must lie in [0, 1], got {omega}"
        )));
    }
    let alpha = config.alpha;
    let rho = access_prob(policy, alpha);
    let fresh_delivered = alpha * policy.pi_f * omega;
    let fresh_missed = alpha * (1.0 - policy.pi_f * omega);
    // R and S behave identically: only a reading generated in this slot can
    // move the chain out of them.
    let from_known = vec![fresh_delivered, 1.0 - alpha, fresh_missed];
    let from_fresher = vec![rho * omega, 0.0, 1.0 - rho * omega];
    MarkovChain::new(
        vec![REFRESHED, STALE, FRESHER],
        vec![from_known.clone(), from_known, from_fresher],
    )
}

/// PGF of the inter-refresh time, obtained by Mason's gain formula on the
/// split transmitter chain and cleared of common factors.
pub fn inter_refresh_pgf(
    config: &SystemConfig,
    policy: &AccessPolicy,
    omega: f64,
) -> Result<RationalFunction> {
    let chain = build_transmitter_chain(config, policy, omega)?;
    let graph = chain_to_flowgraph(&chain, REFRESHED)?;
    let g = mason_transfer(&graph, &source_label(REFRESHED), &sink_label(REFRESHED))?;
    Ok(g.reduce())
}

/// The same PGF in closed form:
/// `[a pi_f w x - a w (pi_f - rho) x^2] / [1 - (2 - a - rho w) x + (1 - a)(1 - rho w) x^2]`.
pub fn inter_refresh_pgf_closed_form(
    config: &SystemConfig,
    policy: &AccessPolicy,
    omega: f64,
) -> RationalFunction {
    let alpha = config.alpha;
    let rho = access_prob(policy, alpha);
    let num = Polynomial::new(vec![
        0.0,
        alpha * policy.pi_f * omega,
        -alpha * omega * (policy.pi_f - rho),
    ]);
    let den = Polynomial::new(vec![
        1.0,
        -(2.0 - alpha - rho * omega),
        (1.0 - alpha) * (1.0 - rho * omega),
    ]);
    RationalFunction::new(num, den).expect("constant term of the denominator is one")
}

/// `E[Y^2] / (2 E[Y]) = n/S + 1/alpha - 1/2 - 1/(alpha + (1 - alpha) pi_s omega)`.
pub fn inter_refresh_ratio(
    config: &SystemConfig,
    policy: &AccessPolicy,
    omega: f64,
    throughput: f64,
) -> Result<f64> {
    if throughput <= 0.0 {
        return Err(Error::DegenerateProcess(
            "zero throughput: the age is never refreshed".into(),
        ));
    }
    let alpha = config.alpha;
    Ok(f64::from(config.n) / throughput + 1.0 / alpha
        - 0.5
        - 1.0 / (alpha + (1.0 - alpha) * policy.pi_s * omega))
}
