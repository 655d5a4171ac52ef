//! Parameter sweeps and the figure presets.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::format::sig12;
use crate::analytics::avg_aoi_closed_form;
use crate::error::{Error, Result};
use crate::model::{channel_load, peak_throughput, AccessPolicy, ApproxMode, SystemConfig};
use crate::policy::{optimal_policy, retransmission_policy, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Alpha,
    Epsilon,
    /// Overall access probability, along the retransmission-policy family.
    Rho,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::Alpha => "alpha",
            Variable::Epsilon => "epsilon",
            Variable::Rho => "rho",
        })
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Variable::Alpha),
            "epsilon" => Ok(Variable::Epsilon),
            "rho" => Ok(Variable::Rho),
            other => Err(Error::InvalidParameter(format!("unknown sweep variable `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            other => Err(Error::InvalidParameter(format!("unknown grid scale `{other}`"))),
        }
    }
}

/// `points` values from `min` to `max` inclusive.
pub fn grid(min: f64, max: f64, points: usize, scale: Scale) -> Result<Vec<f64>> {
    if points == 0 || !(min <= max) || (scale == Scale::Log && min <= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bad grid: {points} points on [{min}, {max}]"
        )));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match (i + 1 == points, scale) {
            (true, _) => max,
            (false, Scale::Linear) => min + (max - min) * step(i),
            (false, Scale::Log) => min * (max / min).powf(step(i)),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Optimal retransmission-policy probabilities against `n alpha`.
    Fig4,
    /// Normalised minimum age against `n alpha`.
    Fig5,
    /// Throughput at the age optimum against `n alpha`.
    Fig6,
    /// Age ratios to the throughput-optimal policy, for several `eps`.
    Fig7,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            "fig6" => Ok(Preset::Fig6),
            "fig7" => Ok(Preset::Fig7),
            other => Err(Error::InvalidParameter(format!("unknown preset `{other}`"))),
        }
    }
}

pub const PRESET_N: u32 = 1000;
pub const PRESET_EPSILON: f64 = 0.25;
pub const FIG7_EPSILONS: [f64; 3] = [0.0, 0.1, 0.25];
const PRESET_POINTS: usize = 71;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: Variable,
    pub grid: Vec<f64>,
    pub fixed: SystemConfig,
    pub strategies: Vec<Strategy>,
    pub mode: ApproxMode,
    /// Erasure probabilities to repeat the sweep for; empty means only
    /// `fixed.epsilon`.
    pub epsilons: Vec<f64>,
}

impl SweepSpec {
    /// Figure preset over `n alpha` from 0.01 to `n` on a log grid.
    pub fn preset(preset: Preset, n: u32, epsilon: f64, mode: ApproxMode) -> Result<Self> {
        let n_f = f64::from(n);
        let grid = grid(0.01 / n_f, 1.0, PRESET_POINTS, Scale::Log)?;
        let strategies = match preset {
            Preset::Fig4 => vec![Strategy::RetransmissionBased],
            _ => Strategy::ALL.to_vec(),
        };
        let epsilons = match preset {
            Preset::Fig7 => FIG7_EPSILONS.to_vec(),
            _ => Vec::new(),
        };
        Ok(SweepSpec {
            variable: Variable::Alpha,
            grid,
            fixed: SystemConfig::new(n, 1.0, epsilon)?,
            strategies,
            mode,
            epsilons,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidParameter("empty sweep grid".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::InvalidParameter("no strategies selected".into()));
        }
        let ok = |v: f64| match self.variable {
            Variable::Alpha => v > 0.0 && v <= 1.0,
            Variable::Epsilon => (0.0..1.0).contains(&v),
            Variable::Rho => (0.0..=1.0).contains(&v),
        };
        if let Some(bad) = self.grid.iter().find(|&&v| !ok(v)) {
            return Err(Error::InvalidParameter(format!(
                "{bad} is outside the domain of {}",
                self.variable
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub variable: Variable,
    pub value: f64,
    pub strategy: Strategy,
    pub pi_f: f64,
    pub pi_s: f64,
    pub rho: f64,
    pub load: f64,
    pub throughput: f64,
    pub aoi: f64,
    pub aoi_over_n: f64,
    pub retention: f64,
    pub n: u32,
    pub alpha: f64,
    pub n_alpha: f64,
    pub epsilon: f64,
    /// Age relative to the throughput-optimal policy at the same point.
    pub aoi_ratio: f64,
}

pub const CSV_HEADER: [&str; 16] = [
    "variable", "value", "strategy", "pi_f", "pi_s", "rho", "load", "throughput", "aoi",
    "aoi_over_n", "retention", "n", "alpha", "n_alpha", "epsilon", "aoi_ratio",
];

fn row(
    spec: &SweepSpec,
    value: f64,
    config: &SystemConfig,
    strategy: Strategy,
    policy: AccessPolicy,
    reference_aoi: f64,
) -> Result<SweepRow> {
    let report = avg_aoi_closed_form(config, &policy, spec.mode)?;
    let n = f64::from(config.n);
    Ok(SweepRow {
        variable: spec.variable,
        value,
        strategy,
        pi_f: policy.pi_f,
        pi_s: policy.pi_s,
        rho: report.rho,
        load: channel_load(config, report.rho),
        throughput: report.throughput,
        aoi: report.avg_aoi,
        aoi_over_n: report.avg_aoi / n,
        retention: report.throughput / peak_throughput(config, spec.mode),
        n: config.n,
        alpha: config.alpha,
        n_alpha: n * config.alpha,
        epsilon: config.epsilon,
        aoi_ratio: report.avg_aoi / reference_aoi,
    })
}

/// Policy of the retransmission family with overall access probability `rho`.
fn policy_at_rho(config: &SystemConfig, rho: f64) -> Result<AccessPolicy> {
    let pi_f = retransmission_policy(config)?.pi_f;
    let alpha = config.alpha;
    let floor = alpha * pi_f;
    let pi_s = if alpha < 1.0 { (rho - floor) / (1.0 - alpha) } else { 0.0 };
    if rho < floor || pi_s > 1.0 || (alpha == 1.0 && rho != floor) {
        return Err(Error::InvalidParameter(format!(
            "rho = {rho} is unreachable with pi_f = {pi_f} at alpha = {alpha}"
        )));
    }
    AccessPolicy::new(pi_f, pi_s.max(0.0))
}

fn point(spec: &SweepSpec, base: &SystemConfig, value: f64) -> Result<Vec<SweepRow>> {
    let config = match spec.variable {
        Variable::Alpha => base.with_alpha(value)?,
        Variable::Epsilon => base.with_epsilon(value)?,
        Variable::Rho => *base,
    };
    let reference = optimal_policy(&config, Strategy::ThroughputOptimal, spec.mode)?.predicted_aoi;
    if spec.variable == Variable::Rho {
        let policy = policy_at_rho(&config, value)?;
        return Ok(vec![row(spec, value, &config, Strategy::RetransmissionBased, policy, reference)?]);
    }
    spec.strategies
        .iter()
        .map(|&s| {
            let policy = optimal_policy(&config, s, spec.mode)?.policy;
            row(spec, value, &config, s, policy, reference)
        })
        .collect()
}

/// All rows, ordered by erasure probability, grid value, then strategy.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let bases: Vec<SystemConfig> = if spec.epsilons.is_empty() {
        vec![spec.fixed]
    } else {
        spec.epsilons
            .iter()
            .map(|&e| spec.fixed.with_epsilon(e))
            .collect::<Result<_>>()?
    };
    let jobs: Vec<(SystemConfig, f64)> = bases
        .iter()
        .flat_map(|b| spec.grid.iter().map(move |&v| (*b, v)))
        .collect();
    let blocks: Vec<Vec<SweepRow>> = jobs
        .par_iter()
        .map(|(base, v)| point(spec, base, *v))
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

pub fn write_csv(rows: &[SweepRow], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.variable.to_string(),
            sig12(r.value),
            r.strategy.to_string(),
            sig12(r.pi_f),
            sig12(r.pi_s),
            sig12(r.rho),
            sig12(r.load),
            sig12(r.throughput),
            sig12(r.aoi),
            sig12(r.aoi_over_n),
            sig12(r.retention),
            r.n.to_string(),
            sig12(r.alpha),
            sig12(r.n_alpha),
            sig12(r.epsilon),
            sig12(r.aoi_ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::throughput_retention;

    fn rows_for(rows: &[SweepRow], s: Strategy) -> Vec<&SweepRow> {
        rows.iter().filter(|r| r.strategy == s).collect()
    }

    #[test]
    fn grids() {
        assert_eq!(grid(1.0, 3.0, 3, Scale::Linear).unwrap(), vec![1.0, 2.0, 3.0]);
        let g = grid(0.01, 100.0, 5, Scale::Log).unwrap();
        assert!((g[2] - 1.0).abs() < 1e-12 && g[4] == 100.0);
        assert!(grid(0.0, 1.0, 3, Scale::Log).is_err());
        assert!(grid(1.0, 0.0, 3, Scale::Linear).is_err());
        assert!(grid(1.0, 2.0, 0, Scale::Linear).is_err());
    }

    #[test]
    fn fig5_orderings() {
        let spec = SweepSpec::preset(Preset::Fig5, 1000, 0.25, ApproxMode::Asymptotic).unwrap();
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 71 * 3);
        let thr = rows_for(&rows, Strategy::ThroughputOptimal);
        let rea = rows_for(&rows, Strategy::Reactive);
        let retx = rows_for(&rows, Strategy::RetransmissionBased);
        let last = thr.len() - 1;
        assert!((rea[last].aoi - retx[last].aoi).abs() < 1e-9 * rea[last].aoi);
        // At alpha = 1 plain ALOHA and the reactive policy coincide.
        assert!((rea[last].aoi - thr[last].aoi).abs() < 1e-9 * rea[last].aoi);
        assert!(rea[last - 1].aoi < thr[last - 1].aoi);
        assert!(rea[0].aoi > thr[0].aoi);
        for i in 0..thr.len() {
            assert!(retx[i].aoi <= thr[i].aoi.min(rea[i].aoi) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn fig6_plateau() {
        let spec = SweepSpec::preset(Preset::Fig6, 1000, 0.25, ApproxMode::Asymptotic).unwrap();
        let rows = run_sweep(&spec).unwrap();
        let retx = rows_for(&rows, Strategy::RetransmissionBased);
        let r = throughput_retention(0.25).unwrap();
        assert!((retx[0].retention - r).abs() < 1e-4, "{}", retx[0].retention);
        let thr = rows_for(&rows, Strategy::ThroughputOptimal);
        assert!(thr.iter().all(|row| (row.retention - 1.0).abs() < 1e-12));
    }

    #[test]
    fn fig7_collision_channel_single_line() {
        let spec = SweepSpec::preset(Preset::Fig7, 1000, 0.25, ApproxMode::Asymptotic).unwrap();
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 3 * 71 * 3);
        let zero: Vec<&SweepRow> = rows.iter().filter(|r| r.epsilon == 0.0).collect();
        for pair in zero.chunks(3) {
            assert_eq!(pair[1].aoi_ratio, pair[2].aoi_ratio);
            assert_eq!(pair[0].aoi_ratio, 1.0);
        }
    }

    #[test]
    fn rho_sweep_and_bad_specs() {
        let base = SystemConfig::new(1000, 1e-4, 0.25).unwrap();
        let spec = SweepSpec {
            variable: Variable::Rho,
            grid: grid(2e-4, 3e-3, 20, Scale::Log).unwrap(),
            fixed: base,
            strategies: vec![Strategy::RetransmissionBased],
            mode: ApproxMode::Asymptotic,
            epsilons: vec![],
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 20);
        assert!(rows.iter().all(|r| (r.rho - r.value).abs() < 1e-15));
        let low = SweepSpec { grid: vec![5e-5], ..spec.clone() };
        assert!(matches!(run_sweep(&low), Err(Error::InvalidParameter(_))));
        let empty = SweepSpec { grid: vec![], ..spec.clone() };
        assert!(run_sweep(&empty).is_err());
        let bad_alpha = SweepSpec { variable: Variable::Alpha, grid: vec![0.0], ..spec };
        assert!(run_sweep(&bad_alpha).is_err());
    }

    #[test]
    fn csv_is_stable() {
        let spec = SweepSpec::preset(Preset::Fig4, 100, 0.25, ApproxMode::Asymptotic).unwrap();
        let rows = run_sweep(&spec).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        write_csv(&rows, &mut a).unwrap();
        write_csv(&run_sweep(&spec).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("variable,value,strategy,pi_f,pi_s,rho,load,throughput,aoi,aoi_over_n,retention"));
        assert_eq!(text.lines().count(), 72);
    }
}
