//! The `aoi-aloha` command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 degenerate
//! process, 4 internal inconsistency.

pub mod format;
pub mod sweep;
pub mod validate;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analytics::{avg_aoi_closed_form, avg_aoi_decomposition};
use crate::error::{Error, Result};
use crate::model::{channel_load, reset_prob, AccessPolicy, ApproxMode, SystemConfig};
use crate::policy::{optimal_policy, Strategy};
use crate::sfg::{inter_refresh_pgf, pgf_moments, pgf_series};
use crate::sim::{run_simulation, SimConfig, SimMode, HISTOGRAM_LEN};
use format::{sig12, FlatJson};
use sweep::{grid, run_sweep, write_csv, Preset, Scale, SweepSpec, Variable};
use validate::{run_validation, Formulas, ValidationSpec};

/// Largest relative gap tolerated between the two average-age routes.
pub const ROUTE_TOL: f64 = 1e-6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "aoi-aloha", version, about = "Age of Information in feedback-free slotted ALOHA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form age, throughput and refresh statistics for one policy.
    Analyze(AnalyzeArgs),
    /// Optimal policy of a strategy.
    Optimize(OptimizeArgs),
    /// CSV sweep over alpha, epsilon or rho, or a figure preset.
    Sweep(SweepArgs),
    /// Monte Carlo estimates for one policy.
    Simulate(SimulateArgs),
    /// Analytic identities and simulation agreement on a grid at n = 50.
    Validate(ValidateArgs),
}

fn probability(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not a probability"))
    }
}

/// Integer flag that also accepts scientific notation such as `1e7`.
fn count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 {
        Ok(v as u64)
    } else {
        Err(format!("{s} is not a non-negative integer"))
    }
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Number of nodes.
    #[arg(long, default_value_t = 1000)]
    n: u32,
    /// Per-slot probability of a fresh reading.
    #[arg(long, value_parser = probability, default_value = "0.01")]
    alpha: f64,
    /// Erasure probability.
    #[arg(long, value_parser = probability, default_value = "0.25")]
    epsilon: f64,
}

impl SystemArgs {
    fn config(&self) -> Result<SystemConfig> {
        SystemConfig::new(self.n, self.alpha, self.epsilon)
    }
}

#[derive(Debug, Args)]
struct PolicyArgs {
    /// Transmission probability for a fresh reading.
    #[arg(long, value_parser = probability, conflicts_with = "pi")]
    pi_f: Option<f64>,
    /// Transmission probability for a stale reading.
    #[arg(long, value_parser = probability, conflicts_with = "pi")]
    pi_s: Option<f64>,
    /// Sets both probabilities (plain ALOHA).
    #[arg(long, value_parser = probability)]
    pi: Option<f64>,
}

impl PolicyArgs {
    fn policy(&self) -> Result<AccessPolicy> {
        match (self.pi, self.pi_f, self.pi_s) {
            (Some(pi), _, _) => AccessPolicy::uniform(pi),
            (None, Some(f), Some(s)) => AccessPolicy::new(f, s),
            _ => Err(Error::InvalidParameter(
                "give --pi, or both --pi-f and --pi-s".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long, default_value = "exact")]
    mode: ApproxMode,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// throughput_optimal, reactive or retransmission.
    #[arg(long, default_value = "retransmission")]
    strategy: Strategy,
    #[arg(long, default_value = "asymptotic")]
    mode: ApproxMode,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = sweep::PRESET_N)]
    n: u32,
    /// Fixed alpha when sweeping another variable.
    #[arg(long, value_parser = probability, default_value = "0.01")]
    alpha: f64,
    #[arg(long, value_parser = probability, default_value_t = sweep::PRESET_EPSILON)]
    epsilon: f64,
    /// fig4, fig5, fig6 or fig7.
    #[arg(long, conflicts_with_all = ["variable", "values", "min", "max"])]
    preset: Option<Preset>,
    /// alpha, epsilon or rho.
    #[arg(long)]
    variable: Option<Variable>,
    /// Comma-separated grid values.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["min", "max"])]
    values: Option<Vec<f64>>,
    #[arg(long)]
    min: Option<f64>,
    #[arg(long)]
    max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// linear or log.
    #[arg(long, default_value = "linear")]
    scale: Scale,
    /// Strategies to include (repeatable); all by default.
    #[arg(long)]
    strategy: Vec<Strategy>,
    /// Erasure probabilities to repeat the sweep for (comma-separated).
    #[arg(long, value_parser = probability, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long, default_value = "asymptotic")]
    mode: ApproxMode,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_parser = count, default_value = "1000000")]
    slots: u64,
    /// Discarded initial slots; max(10/zeta, 1e4) by default.
    #[arg(long, value_parser = count)]
    warmup: Option<u64>,
    #[arg(long, default_value_t = 1)]
    replications: u32,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    policy: PolicyArgs,
    #[command(flatten)]
    sim: SimArgs,
    /// Track only this many nodes and aggregate the others.
    #[arg(long)]
    tagged: Option<u32>,
    /// Report the throughput of every node.
    #[arg(long)]
    per_node_throughput: bool,
    /// Write the inter-refresh histogram to this CSV file.
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_parser = count, default_value = "2000000")]
    slots: u64,
    /// Tracked nodes per simulated point.
    #[arg(long, default_value_t = 10)]
    tagged: u32,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a, out),
        Command::Optimize(a) => optimize(&a, out),
        Command::Sweep(a) => sweep_cmd(&a, out),
        Command::Simulate(a) => simulate(&a, out),
        Command::Validate(a) => validate_cmd(&a, &Formulas::default(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let config = args.system.config()?;
    let policy = args.policy.policy()?;
    let report = avg_aoi_closed_form(&config, &policy, args.mode)?;
    let moments = pgf_moments(&inter_refresh_pgf(&config, &policy, report.omega)?)?;
    let via_parts = avg_aoi_decomposition(report.mean_reset, moments.ratio);
    let zeta = reset_prob(&config, &policy, report.omega)?;
    let gap = (via_parts - report.avg_aoi).abs() / report.avg_aoi;
    FlatJson::new()
        .int("n", config.n.into())
        .num("alpha", config.alpha)
        .num("epsilon", config.epsilon)
        .num("pi_f", policy.pi_f)
        .num("pi_s", policy.pi_s)
        .text("mode", args.mode)
        .num("rho", report.rho)
        .num("omega", report.omega)
        .num("throughput", report.throughput)
        .num("load", channel_load(&config, report.rho))
        .num("zeta", zeta)
        .num("mean_z", report.mean_reset)
        .num("mean_y", moments.mean)
        .num("mean_y2", moments.second_moment)
        .num("inter_refresh_ratio", moments.ratio)
        .num("avg_aoi_decomposition", via_parts)
        .num("avg_aoi_closed_form", report.avg_aoi)
        .write(out)?;
    if gap > ROUTE_TOL {
        return Err(Error::Inconsistent(format!(
            "average-age routes differ: {via_parts} vs {}",
            report.avg_aoi
        )));
    }
    Ok(EXIT_OK)
}

fn optimize(args: &OptimizeArgs, out: &mut dyn Write) -> Result<i32> {
    let config = args.system.config()?;
    let r = optimal_policy(&config, args.strategy, args.mode)?;
    FlatJson::new()
        .int("n", config.n.into())
        .num("alpha", config.alpha)
        .num("epsilon", config.epsilon)
        .text("strategy", r.strategy)
        .text("mode", r.mode)
        .num("pi_f", r.policy.pi_f)
        .num("pi_s", r.policy.pi_s)
        .num("rho", r.rho)
        .num("rho_star", r.rho_star)
        .num("load", channel_load(&config, r.rho))
        .num("predicted_aoi", r.predicted_aoi)
        .num("predicted_throughput", r.predicted_throughput)
        .num("retention", r.retention)
        .write(out)?;
    Ok(EXIT_OK)
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec> {
    let mut spec = if let Some(preset) = args.preset {
        SweepSpec::preset(preset, args.n, args.epsilon, args.mode)?
    } else {
        let variable = args.variable.ok_or_else(|| {
            Error::InvalidParameter("give --preset or --variable".into())
        })?;
        let values = match (&args.values, args.min, args.max) {
            (Some(v), _, _) => v.clone(),
            (None, Some(lo), Some(hi)) => grid(lo, hi, args.points, args.scale)?,
            _ => {
                return Err(Error::InvalidParameter(
                    "give --values, or --min and --max".into(),
                ))
            }
        };
        SweepSpec {
            variable,
            grid: values,
            fixed: SystemConfig::new(args.n, args.alpha, args.epsilon)?,
            strategies: Strategy::ALL.to_vec(),
            mode: args.mode,
            epsilons: Vec::new(),
        }
    };
    if !args.strategy.is_empty() {
        spec.strategies = args.strategy.clone();
    }
    if let Some(eps) = &args.epsilons {
        spec.epsilons = eps.clone();
    }
    Ok(spec)
}

fn sweep_cmd(args: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let rows = run_sweep(&sweep_spec(args)?)?;
    match &args.output {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write_csv(&rows, &mut file)?;
            file.flush()?;
        }
        None => write_csv(&rows, out)?,
    }
    Ok(EXIT_OK)
}

fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let config = args.system.config()?;
    let policy = args.policy.policy()?;
    let sim = SimConfig {
        slots: args.sim.slots,
        warmup: args.sim.warmup,
        seed: args.sim.seed,
        mode: if args.tagged.is_some() { SimMode::Tagged } else { SimMode::Full },
        tagged_count: args.tagged.unwrap_or(config.n),
        replications: args.sim.replications,
        per_node_throughput: args.per_node_throughput,
    };
    let stats = run_simulation(&config, &policy, &sim)?;
    let analytic = avg_aoi_closed_form(&config, &policy, ApproxMode::Exact).ok();
    let z = |est: f64, se: f64, want: f64| if est == want { 0.0 } else { (est - want) / se };

    let mut json = FlatJson::new()
        .int("n", config.n.into())
        .num("alpha", config.alpha)
        .num("epsilon", config.epsilon)
        .num("pi_f", policy.pi_f)
        .num("pi_s", policy.pi_s)
        .int("seed", sim.seed)
        .int("slots", sim.slots)
        .int("measured_slots", stats.measured_slots)
        .int("replications", stats.replications.into())
        .int("tracked_nodes", stats.tracked_nodes.into())
        .text("sim_mode", match sim.mode {
            SimMode::Full => "full",
            SimMode::Tagged => "tagged",
        })
        .num("time_avg_aoi", stats.time_avg_aoi)
        .num("time_avg_aoi_se", stats.time_avg_aoi_se)
        .num("throughput", stats.throughput)
        .num("throughput_se", stats.throughput_se)
        .num("mean_y", stats.mean_y)
        .num("mean_y_se", stats.mean_y_se)
        .num("mean_y2", stats.mean_y2)
        .num("mean_y2_se", stats.mean_y2_se)
        .num("mean_z", stats.mean_z)
        .num("mean_z_se", stats.mean_z_se)
        .num("zeta_hat", stats.zeta_hat)
        .num("zeta_hat_se", stats.zeta_hat_se)
        .int("refresh_count", stats.refresh_count)
        .int("y_samples", stats.y_samples);
    if let Some(a) = &analytic {
        json = json
            .num("analytic_avg_aoi", a.avg_aoi)
            .num("analytic_throughput", a.throughput)
            .num("analytic_mean_z", a.mean_reset)
            .num("z_avg_aoi", z(stats.time_avg_aoi, stats.time_avg_aoi_se, a.avg_aoi))
            .num("z_throughput", z(stats.throughput, stats.throughput_se, a.throughput))
            .num("z_mean_z", z(stats.mean_z, stats.mean_z_se, a.mean_reset));
    }
    if let Some(per_node) = &stats.per_node_throughput {
        for (i, s) in per_node.iter().enumerate() {
            json = json.num(&format!("throughput_node_{i}"), *s);
        }
    }
    json.write(out)?;

    if let Some(path) = &args.histogram {
        let analytic_pmf = match &analytic {
            Some(a) => pgf_series(&inter_refresh_pgf(&config, &policy, a.omega)?, HISTOGRAM_LEN)?,
            None => vec![f64::NAN; HISTOGRAM_LEN],
        };
        let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        w.write_record(["y", "count", "empirical", "stderr", "analytic"])?;
        for y in 1..=HISTOGRAM_LEN {
            let (p, se) = stats.y_pmf(y);
            w.write_record([
                y.to_string(),
                stats.y_histogram[y - 1].to_string(),
                sig12(p),
                sig12(se),
                sig12(analytic_pmf[y - 1]),
            ])?;
        }
        w.flush()?;
    }
    Ok(EXIT_OK)
}

/// Runs the validation grid with the given closed forms and prints the
/// per-check report; exit code 1 when any check fails.
pub fn validate_with(spec: &ValidationSpec, formulas: &Formulas, out: &mut dyn Write) -> Result<i32> {
    let report = run_validation(spec, formulas)?;
    report.write(out)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VALIDATION })
}

fn validate_cmd(args: &ValidateArgs, formulas: &Formulas, out: &mut dyn Write) -> Result<i32> {
    let spec = ValidationSpec::default_grid(args.slots, args.seed, args.tagged);
    validate_with(&spec, formulas, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["aoi-aloha"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn json(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn analyze_lone_node() {
        let (code, out, _) = run_str(&["analyze", "--n", "1", "--alpha", "1", "--epsilon", "0", "--pi-f", "1", "--pi-s", "0"]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["avg_aoi_closed_form"], 1.5);
        assert!((v["avg_aoi_decomposition"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn analyze_plain_aloha_shorthand() {
        let (code, out, _) = run_str(&["analyze", "--pi", "0.001", "--alpha", "0.02"]);
        assert_eq!(code, 0);
        let v = json(&out);
        let s = v["throughput"].as_f64().unwrap();
        let want = 1000.0 / s + 1.0 / 0.02 - 0.5;
        assert!((v["avg_aoi_closed_form"].as_f64().unwrap() - want).abs() < 1e-9 * want);
    }

    #[test]
    fn usage_and_degenerate_exit_codes() {
        assert_eq!(run_str(&["analyze", "--pi", "1.5"]).0, 2);
        assert_eq!(run_str(&["analyze", "--pi-f", "0.5"]).0, 2);
        assert_eq!(run_str(&["analyze", "--pi", "0.1", "--pi-f", "0.2"]).0, 2);
        assert_eq!(run_str(&["analyze", "--alpha", "0", "--pi", "0.1"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["analyze", "--pi", "0"]).0, 3);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn optimize_examples() {
        let (code, out, _) = run_str(&["optimize", "--alpha", "0.0001"]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["pi_f"], 1.0);
        assert!((v["pi_s"].as_f64().unwrap() - 6.735_758_896e-4).abs() < 1e-12);
        let (_, out, _) = run_str(&["optimize", "--epsilon", "0", "--alpha", "0.0001"]);
        assert_eq!(json(&out)["pi_s"], 0.0);
        let (_, out, _) = run_str(&["optimize", "--strategy", "reactive", "--alpha", "0.5"]);
        assert!((json(&out)["pi_f"].as_f64().unwrap() - 1.0 / 375.0).abs() < 1e-15);
        assert_eq!(run_str(&["optimize", "--strategy", "greedy"]).0, 2);
    }

    #[test]
    fn sweep_requires_a_grid() {
        assert_eq!(run_str(&["sweep"]).0, 2);
        assert_eq!(run_str(&["sweep", "--variable", "alpha"]).0, 2);
        assert_eq!(run_str(&["sweep", "--variable", "alpha", "--values", "0.1,2"]).0, 2);
        assert_eq!(run_str(&["sweep", "--preset", "fig9"]).0, 2);
        let (code, out, _) = run_str(&["sweep", "--variable", "epsilon", "--values", "0.1,0.2", "--strategy", "reactive"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
    }

    #[test]
    fn simulate_matches_analysis_for_lone_node() {
        let (code, out, _) = run_str(&[
            "simulate", "--n", "1", "--alpha", "1", "--epsilon", "0", "--pi", "1", "--slots", "1e5",
        ]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!(v["time_avg_aoi"], 1.5);
        assert_eq!(v["analytic_avg_aoi"], 1.5);
        assert_eq!(v["throughput"], 1.0);
    }

    #[test]
    fn simulate_rejects_bad_budgets() {
        assert_eq!(run_str(&["simulate", "--pi", "0.01", "--slots", "0"]).0, 2);
        assert_eq!(run_str(&["simulate", "--pi", "0.01", "--slots", "1.5"]).0, 2);
        assert_eq!(
            run_str(&["simulate", "--n", "10", "--pi", "0.1", "--slots", "1000", "--warmup", "10", "--tagged", "2", "--per-node-throughput"]).0,
            2
        );
    }

    #[test]
    fn validate_zero_budget() {
        assert_eq!(run_str(&["validate", "--slots", "0"]).0, 2);
    }
}
