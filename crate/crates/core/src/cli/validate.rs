//! Analytics-versus-simulation validation harness.

use std::io::Write;

use rayon::prelude::*;

use crate::analytics::{avg_aoi_closed_form, avg_aoi_decomposition};
use crate::error::{Error, Result};
use crate::model::{reset_prob, AccessPolicy, ApproxMode, SystemConfig};
use crate::policy::{optimal_policy, Strategy};
use crate::sfg::{self, inter_refresh_pgf, inter_refresh_pgf_closed_form, pgf_moments};
use crate::sim::{run_simulation, SimConfig};

pub const COEFF_TOL: f64 = 1e-10;
pub const IDENTITY_TOL: f64 = 1e-9;
pub const SIM_AOI_REL_TOL: f64 = 0.02;
pub const SIM_THROUGHPUT_REL_TOL: f64 = 0.01;

pub const DEFAULT_N: u32 = 50;
pub const DEFAULT_ALPHAS: [f64; 3] = [0.005, 0.02, 0.1];
pub const DEFAULT_EPSILONS: [f64; 2] = [0.0, 0.25];

/// Closed forms the harness checks the Mason route against; replaceable so
/// that the harness itself can be tested.
#[derive(Clone, Copy)]
pub struct Formulas {
    pub inter_refresh_ratio: fn(&SystemConfig, &AccessPolicy, f64, f64) -> Result<f64>,
}

impl Default for Formulas {
    fn default() -> Self {
        Formulas {
            inter_refresh_ratio: sfg::inter_refresh_ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSpec {
    pub n: u32,
    pub alphas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub strategies: Vec<Strategy>,
    pub sim: SimConfig,
}

impl ValidationSpec {
    /// The default 18-point grid at `n = 50`, simulated in tagged mode.
    pub fn default_grid(slots: u64, seed: u64, tagged: u32) -> Self {
        ValidationSpec {
            n: DEFAULT_N,
            alphas: DEFAULT_ALPHAS.to_vec(),
            epsilons: DEFAULT_EPSILONS.to_vec(),
            strategies: Strategy::ALL.to_vec(),
            sim: SimConfig::new(slots, seed).tagged(tagged),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub point: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn write(&self, out: &mut dyn Write) -> Result<()> {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {:<20} {} {}", c.name, c.point, c.detail)?;
        }
        let failed = self.failures().count();
        writeln!(out, "{} checks, {} failed", self.checks.len(), failed)?;
        Ok(())
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

fn check(name: &'static str, point: &str, err: f64, tol: f64) -> Check {
    Check {
        name,
        point: point.to_string(),
        passed: err <= tol,
        detail: format!("err={err:.3e} tol={tol:.0e}"),
    }
}

fn analytic_checks(config: &SystemConfig, policy: &AccessPolicy, formulas: &Formulas, point: &str) -> Result<Vec<Check>> {
    let report = avg_aoi_closed_form(config, policy, ApproxMode::Exact)?;
    let omega = report.omega;
    let mason = inter_refresh_pgf(config, policy, omega)?;
    let closed = inter_refresh_pgf_closed_form(config, policy, omega).reduce();
    let coeff_err = (0..4)
        .map(|k| {
            (mason.num().coeff(k) - closed.num().coeff(k))
                .abs()
                .max((mason.den().coeff(k) - closed.den().coeff(k)).abs())
        })
        .fold(0.0, f64::max);
    let moments = pgf_moments(&mason)?;
    let ratio = (formulas.inter_refresh_ratio)(config, policy, omega, report.throughput)?;
    let via_parts = avg_aoi_decomposition(report.mean_reset, moments.ratio);
    let zeta = reset_prob(config, policy, omega)?;
    Ok(vec![
        check("mason_vs_closed_form", point, coeff_err, COEFF_TOL),
        check("moments_ratio", point, rel_err(moments.ratio, ratio), IDENTITY_TOL),
        check("aoi_routes", point, rel_err(via_parts, report.avg_aoi), IDENTITY_TOL),
        check("renewal_identity", point, (zeta * moments.mean - 1.0).abs(), IDENTITY_TOL),
    ])
}

fn simulation_checks(config: &SystemConfig, policy: &AccessPolicy, sim: &SimConfig, point: &str) -> Result<Vec<Check>> {
    let report = avg_aoi_closed_form(config, policy, ApproxMode::Exact)?;
    let stats = run_simulation(config, policy, sim)?;
    Ok(vec![
        check(
            "sim_aoi",
            point,
            (stats.time_avg_aoi - report.avg_aoi).abs() / report.avg_aoi,
            SIM_AOI_REL_TOL,
        ),
        check(
            "sim_throughput",
            point,
            (stats.throughput - report.throughput).abs() / report.throughput,
            SIM_THROUGHPUT_REL_TOL,
        ),
    ])
}

/// Runs every check on every grid point.
pub fn run_validation(spec: &ValidationSpec, formulas: &Formulas) -> Result<ValidationReport> {
    if spec.sim.slots == 0 {
        return Err(Error::Config("the simulation budget is zero slots".into()));
    }
    let mut points = Vec::new();
    for &eps in &spec.epsilons {
        for &alpha in &spec.alphas {
            let config = SystemConfig::new(spec.n, alpha, eps)?;
            for &s in &spec.strategies {
                let policy = optimal_policy(&config, s, ApproxMode::Exact)?.policy;
                points.push((config, s, policy));
            }
        }
    }
    let blocks: Vec<Vec<Check>> = points
        .par_iter()
        .map(|(config, s, policy)| {
            let label = format!("n={} alpha={} eps={} {}", config.n, config.alpha, config.epsilon, s);
            let mut checks = analytic_checks(config, policy, formulas, &label)?;
            checks.extend(simulation_checks(config, policy, &spec.sim, &label)?);
            Ok(checks)
        })
        .collect::<Result<_>>()?;
    Ok(ValidationReport {
        checks: blocks.into_iter().flatten().collect(),
    })
}
