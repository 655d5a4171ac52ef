//! Access-policy optimisation.
//!
//! With `pi_f = 1` the Poisson-limit age `1/2 + n/S + 1/alpha - 1/rho` is
//! minimised over the overall access probability by
//! `rho* = [1 + W(-(1-eps)/e)] / (n (1-eps))`, which puts the receiver at a
//! channel load `1 + W(-(1-eps)/e)`, strictly below one for `eps > 0`.
//! Stale readings are retransmitted just enough to reach `rho*`.
//!
//! Two remarks in the source analysis read differently from the algebra:
//! it describes the optimal load as exceeding one and the age derivative as
//! negative above unit load. Evaluating the derivative directly gives the
//! opposite sign there, and the optimal load is `1 + W(.) < 1`; this module
//! implements the algebra. The reported ~88% throughput retention at
//! `eps = 0.25` agrees with the sub-unit load.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analytics::{avg_aoi_closed_form, closed_form_aoi, min_aoi_reactive, min_aoi_throughput_policy};
use crate::error::{Error, Result};
use crate::lambert::{lambert_w0, INV_E};
use crate::model::{access_prob, peak_throughput, success_prob, AccessPolicy, ApproxMode, SystemConfig};
use crate::search::{bisect_increasing, minimize_on_log_grid};

/// Golden-section tolerance on the access probability.
pub const RHO_TOL: f64 = 1e-10;

const GRID_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Plain slotted ALOHA tuned for peak throughput.
    ThroughputOptimal,
    /// Only fresh readings are transmitted.
    Reactive,
    /// Fresh readings always sent, stale ones retransmitted to reach `rho*`.
    RetransmissionBased,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::ThroughputOptimal,
        Strategy::Reactive,
        Strategy::RetransmissionBased,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::ThroughputOptimal => "throughput_optimal",
            Strategy::Reactive => "reactive",
            Strategy::RetransmissionBased => "retransmission",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "throughput_optimal" | "throughput" => Ok(Strategy::ThroughputOptimal),
            "reactive" => Ok(Strategy::Reactive),
            "retransmission" | "retransmission_based" | "retx" => Ok(Strategy::RetransmissionBased),
            other => Err(Error::InvalidParameter(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub strategy: Strategy,
    pub policy: AccessPolicy,
    /// Overall access probability of `policy`.
    pub rho: f64,
    /// AoI-optimal access probability for `pi_f = 1`.
    pub rho_star: f64,
    pub predicted_aoi: f64,
    pub predicted_throughput: f64,
    /// Throughput relative to the best attainable on this channel.
    pub retention: f64,
    pub mode: ApproxMode,
}

/// `d avg_aoi / d rho = rho^-2 [1 + (n rho - 1/(1-eps)) exp(n rho (1-eps))]`,
/// for `pi_f = 1` in the Poisson limit.
pub fn aoi_derivative(config: &SystemConfig, rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidParameter(format!("rho must lie in (0, 1], got {rho}")));
    }
    let n = f64::from(config.n);
    let keep = 1.0 - config.epsilon;
    let load = n * rho * keep;
    // keep + (load - 1) e^load in one rounding; it vanishes at the optimum.
    Ok((load - 1.0).mul_add(load.exp(), keep) / (keep * rho * rho))
}

/// `W(-(1-eps)/e)`, in `[-1, 0)`.
pub fn optimal_load_offset(epsilon: f64) -> Result<f64> {
    lambert_w0(-(1.0 - epsilon) * INV_E)
}

/// `rho* = [1 + W(-(1-eps)/e)] / (n (1-eps))`, capped at one.
///
/// The cap only binds when `n (1-eps) < 1 + W`; the age then decreases over
/// the whole range of `rho`.
pub fn optimal_rho_star(config: &SystemConfig) -> Result<f64> {
    Ok(((1.0 + optimal_load_offset(config.epsilon)?) / config.effective_population()).min(1.0))
}

/// Fraction of the peak Poisson throughput `1/e` retained at `rho*`:
/// `[1 + W] exp(-W)` with `W = W(-(1-eps)/e)`. Independent of `n`.
///
/// At `eps = 0` the optimum never retransmits and the formula degenerates to
/// zero, which is reported as an error.
pub fn throughput_retention(epsilon: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if epsilon == 0.0 {
        return Err(Error::DegenerateProcess(
            "no erasures: retransmissions are never used".into(),
        ));
    }
    let w = optimal_load_offset(epsilon)?;
    Ok((1.0 + w) * (-w).exp())
}

/// Erasure probability at which [`throughput_retention`] equals `target`.
pub fn retention_inverse(target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::NonBracketed(target));
    }
    let retention = |eps: f64| throughput_retention(eps).unwrap_or(0.0);
    Ok(bisect_increasing(retention, target, f64::MIN_POSITIVE, 1.0 - f64::EPSILON, 1e-12))
}

/// Optimal retransmission-based policy:
/// `pi_f = min{1, 1/(alpha n (1-eps))}`, `pi_s = 0` for `alpha >= rho*` and
/// `(rho* - alpha)/(1 - alpha)` otherwise.
pub fn retransmission_policy(config: &SystemConfig) -> Result<AccessPolicy> {
    let rho_star = optimal_rho_star(config)?;
    let alpha = config.alpha;
    let pi_f = if alpha <= 1.0 / config.effective_population() {
        1.0
    } else {
        1.0 / (alpha * config.effective_population())
    };
    let pi_s = if alpha >= rho_star {
        0.0
    } else {
        (rho_star - alpha) / (1.0 - alpha)
    };
    AccessPolicy::new(pi_f, pi_s)
}

fn evaluate(
    config: &SystemConfig,
    strategy: Strategy,
    policy: AccessPolicy,
    mode: ApproxMode,
) -> Result<OptimizationResult> {
    let report = avg_aoi_closed_form(config, &policy, mode)?;
    Ok(OptimizationResult {
        strategy,
        policy,
        rho: report.rho,
        rho_star: optimal_rho_star(config)?,
        predicted_aoi: report.avg_aoi,
        predicted_throughput: report.throughput,
        retention: report.throughput / peak_throughput(config, mode),
        mode,
    })
}

/// Policy of the given strategy, with age and throughput predicted in `mode`.
pub fn optimal_policy(config: &SystemConfig, strategy: Strategy, mode: ApproxMode) -> Result<OptimizationResult> {
    let policy = match strategy {
        Strategy::ThroughputOptimal => min_aoi_throughput_policy(config, mode)?.0,
        Strategy::Reactive => min_aoi_reactive(config, mode)?.0,
        Strategy::RetransmissionBased => retransmission_policy(config)?,
    };
    evaluate(config, strategy, policy, mode)
}

/// Numerical minimisation of the age over `rho` with `pi_f` pinned as in
/// [`retransmission_policy`] and `pi_s = (rho - alpha pi_f)/(1 - alpha)`.
///
/// Cross-checks `rho*` in the Poisson limit and gives the optimum under the
/// binomial success probability.
pub fn numeric_min_aoi(config: &SystemConfig, mode: ApproxMode) -> Result<OptimizationResult> {
    let alpha = config.alpha;
    let pi_f = retransmission_policy(config)?.pi_f;
    let lo = alpha * pi_f;
    let policy_at = |rho: f64| {
        let pi_s = if alpha < 1.0 {
            ((rho - lo) / (1.0 - alpha)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        AccessPolicy { pi_f, pi_s }
    };
    let objective = |rho: f64| {
        let p = policy_at(rho);
        let omega = success_prob(config, access_prob(&p, alpha), mode);
        closed_form_aoi(config, &p, omega).unwrap_or(f64::INFINITY)
    };
    let rho = if alpha < 1.0 {
        minimize_on_log_grid(objective, lo, 1.0, GRID_POINTS, RHO_TOL)
    } else {
        lo
    };
    evaluate(config, Strategy::RetransmissionBased, policy_at(rho), mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{channel_load, throughput};
    use proptest::prelude::*;
    use super::Strategy;

    fn cfg(n: u32, alpha: f64, epsilon: f64) -> SystemConfig {
        SystemConfig::new(n, alpha, epsilon).unwrap()
    }

    /// Bisection on `w e^w = x` over `[-1, 0]`.
    fn w_oracle(x: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0f64, 0.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn rho_star_examples() {
        assert_eq!(optimal_rho_star(&cfg(1000, 0.1, 0.0)).unwrap(), 0.0);
        let c = cfg(1000, 0.1, 0.25);
        let want = (1.0 + w_oracle(-0.75 * INV_E)) / 750.0;
        let got = optimal_rho_star(&c).unwrap();
        assert!((got - want).abs() < 1e-15);
        assert!((got - 7.735_085_320_346_361e-4).abs() < 1e-15);
        let load = channel_load(&c, got);
        assert!((load - (1.0 + w_oracle(-0.75 * INV_E))).abs() < 1e-12);
        assert!((load - 0.580_131).abs() < 1e-6);
        let near_one = cfg(1_000_000, 0.1, 1.0 - 1e-4);
        let r = optimal_rho_star(&near_one).unwrap() * near_one.effective_population();
        assert!((r - 1.0).abs() < 1e-3);
    }

    #[test]
    fn derivative_examples() {
        let c = cfg(1000, 1e-4, 0.25);
        let unit_load = 1.0 / 750.0;
        let d = aoi_derivative(&c, unit_load).unwrap();
        assert!((d - 1.0 / (unit_load * unit_load)).abs() < 1e-6 * d);
        let rho_star = optimal_rho_star(&c).unwrap();
        assert!(aoi_derivative(&c, rho_star).unwrap().abs() < 1e-9);
        assert!(aoi_derivative(&c, 0.0).is_err());
    }

    #[test]
    fn derivative_matches_central_difference() {
        let c = cfg(1000, 1e-5, 0.25);
        let f = |rho: f64| {
            let p = AccessPolicy::new(1.0, (rho - c.alpha) / (1.0 - c.alpha)).unwrap();
            avg_aoi_closed_form(&c, &p, ApproxMode::Asymptotic).unwrap().avg_aoi
        };
        for rho in [2e-4f64, 5e-4, 9e-4, 1.5e-3, 3e-3] {
            let h = 1e-7 * rho.max(1e-3);
            let fd = (f(rho + h) - f(rho - h)) / (2.0 * h);
            let an = aoi_derivative(&c, rho).unwrap();
            assert!((fd - an).abs() < 1e-6 * an.abs().max(1.0), "rho {rho}: {fd} vs {an}");
        }
    }

    #[test]
    fn derivative_single_sign_change() {
        let c = cfg(500, 1e-6, 0.3);
        let rho_star = optimal_rho_star(&c).unwrap();
        let top = 1.0 / c.effective_population() * 1.5;
        let mut changes = 0;
        let mut prev = aoi_derivative(&c, top / 1000.0).unwrap().signum();
        for i in 2..=1000 {
            let rho = top * i as f64 / 1000.0;
            let s = aoi_derivative(&c, rho).unwrap().signum();
            if s != prev {
                changes += 1;
                assert!((rho - rho_star).abs() <= top / 1000.0);
            }
            prev = s;
        }
        assert_eq!(changes, 1);
    }

    #[test]
    fn retention_examples() {
        let r = throughput_retention(0.25).unwrap();
        assert!((r - 0.882_821_676_994_719).abs() < 1e-12);
        assert!((throughput_retention(1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-6);
        assert!(matches!(throughput_retention(0.0), Err(Error::DegenerateProcess(_))));
        assert!(throughput_retention(1.0).is_err());

        // Independent root of r(eps) = 1/2 (scipy brentq on the same expression).
        let half = retention_inverse(0.5).unwrap();
        assert!((half - 0.031_448_625_077_758).abs() < 1e-9, "{half}");
        for t in [0.3, 0.6, 0.9] {
            let eps = retention_inverse(t).unwrap();
            assert!((throughput_retention(eps).unwrap() - t).abs() <= 1e-10);
        }
        assert!(retention_inverse(1.0 - 1e-9).unwrap() > 0.99);
        assert!(matches!(retention_inverse(1.0), Err(Error::NonBracketed(_))));
        assert!(matches!(retention_inverse(0.0), Err(Error::NonBracketed(_))));
    }

    #[test]
    fn retransmission_policy_examples() {
        let p = retransmission_policy(&cfg(1000, 0.3, 0.0)).unwrap();
        assert_eq!(p.pi_s, 0.0);
        let c = cfg(1000, 0.01, 0.25);
        let r = optimal_policy(&c, Strategy::RetransmissionBased, ApproxMode::Asymptotic).unwrap();
        let reactive = optimal_policy(&c, Strategy::Reactive, ApproxMode::Asymptotic).unwrap();
        assert_eq!(r.policy, reactive.policy);

        let c = cfg(1000, 1e-4, 0.25);
        let r = optimal_policy(&c, Strategy::RetransmissionBased, ApproxMode::Asymptotic).unwrap();
        assert_eq!(r.policy.pi_f, 1.0);
        assert!((r.policy.pi_s - 6.735_758_896_235_98e-4).abs() < 1e-12);

        let tiny = cfg(1000, 1e-12, 0.25);
        let p = retransmission_policy(&tiny).unwrap();
        assert!((p.pi_s - optimal_rho_star(&tiny).unwrap()).abs() < 2e-12);

        let reactive = optimal_policy(&cfg(1000, 0.5, 0.25), Strategy::Reactive, ApproxMode::Asymptotic).unwrap();
        assert!((reactive.policy.pi_f - 1.0 / (0.5 * 750.0)).abs() < 1e-15);
    }

    #[test]
    fn retention_equals_throughput_ratio_for_any_n() {
        for n in [10, 100, 1000] {
            for eps in [0.05, 0.25, 0.6] {
                let c = cfg(n, 1e-7, eps);
                let rho = optimal_rho_star(&c).unwrap();
                let ratio = throughput(&c, rho, ApproxMode::Asymptotic) / INV_E;
                assert!((ratio - throughput_retention(eps).unwrap()).abs() < 1e-12);
                let r = optimal_policy(&c, Strategy::RetransmissionBased, ApproxMode::Asymptotic).unwrap();
                assert!((r.retention - throughput_retention(eps).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn numeric_minimum_matches_rho_star() {
        let c = cfg(1000, 1e-4, 0.25);
        let r = numeric_min_aoi(&c, ApproxMode::Asymptotic).unwrap();
        assert!((r.rho - 7.735_085_320_346_361e-4).abs() < 1e-8);

        let c0 = cfg(1000, 1e-4, 0.0);
        let r0 = numeric_min_aoi(&c0, ApproxMode::Asymptotic).unwrap();
        assert!((r0.rho - 1e-4).abs() < 1e-12);
        assert_eq!(r0.policy.pi_s, 0.0);
    }

    #[test]
    fn exact_minimum_near_asymptotic() {
        let c = cfg(50, 1e-3, 0.25);
        let r = numeric_min_aoi(&c, ApproxMode::Exact).unwrap();
        // Grid-scan oracle.
        let f = |rho: f64| {
            let p = AccessPolicy::new(1.0, (rho - c.alpha) / (1.0 - c.alpha)).unwrap();
            avg_aoi_closed_form(&c, &p, ApproxMode::Exact).map(|r| r.avg_aoi).unwrap_or(f64::INFINITY)
        };
        let best = (0..200_000)
            .map(|i| c.alpha + i as f64 * 5e-7)
            .min_by(|a, b| f(*a).total_cmp(&f(*b)))
            .unwrap();
        assert!((r.rho - best).abs() < 1e-6, "{} vs {best}", r.rho);
        let asym = optimal_rho_star(&c).unwrap();
        assert!((r.rho - asym).abs() < 0.05 * asym);
    }

    proptest! {
        #[test]
        fn retransmission_never_worse_than_reactive(
            n in 2u32..3000, a in 1e-6f64..1.0, eps in 0.0f64..0.95
        ) {
            let c = cfg(n, a, eps);
            let retx = optimal_policy(&c, Strategy::RetransmissionBased, ApproxMode::Asymptotic).unwrap();
            let rea = optimal_policy(&c, Strategy::Reactive, ApproxMode::Asymptotic).unwrap();
            prop_assert!(retx.predicted_aoi <= rea.predicted_aoi * (1.0 + 1e-9));
            prop_assert!(retx.retention > 0.0 && retx.retention <= 1.0 + 1e-12);
            prop_assert!((0.0..=1.0).contains(&retx.rho_star));
        }

        #[test]
        fn optimal_load_below_one(eps in 1e-9f64..0.999_999) {
            let load = 1.0 + optimal_load_offset(eps).unwrap();
            prop_assert!(load > 0.0 && load < 1.0);
        }
    }
}
