//! Command-line harness for the growth-path solver: dispatches solve /
//! limit / steady-state / conditions / certify / propositions / sweep runs
//! and writes CSV/JSON artifacts plus a checksummed manifest per run.

mod config;
mod manifest;

use std::fmt;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use overtake::asymptotics::{
    limit_path_closed_form, limit_path_numeric, monotone_convergence_report, recovery_time,
    recovery_time_gap, saving_ratio, steady_state, MonotoneReport, SteadyState,
};
use overtake::export::{limit_path_to_csv, path_to_csv, ratios_to_csv};
use overtake::overtaking::{
    bound_check, builtin_challengers, certify_optimality, check_condition_i, check_condition_ii,
    factorization_check, BoundCheck, Challenger, ConditionIReport, ConditionIIReport,
    Factorization, OvertakingReport,
};
use overtake::solver::{
    path_objective, solve_bruteforce_dp, solve_closed_form, solve_shooting, DPGrid, ShootingConfig,
};
use overtake::{Error as SolverError, ModelSpec, Primitives};

use config::{require, resolve_out_dir, FileConfig};
use manifest::Run;

/// Exit codes published by the interface contract.
const EXIT_CONFIG: i32 = 2;
const EXIT_CONVERGENCE: i32 = 3;
const EXIT_PARTIAL_SWEEP: i32 = 4;

#[derive(Parser)]
#[command(
    name = "overtake",
    version,
    about = "Finite-horizon growth-path solver and overtaking-optimality certifier"
)]
struct Cli {
    /// JSON config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default ./out; env OVERTAKE_OUT overrides).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    ClosedForm,
    Shooting,
    Dp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LimitMethod {
    ClosedForm,
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one finite-horizon problem and export the path as CSV.
    Solve {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        k0: Option<f64>,
        #[arg(long = "T")]
        horizon: Option<usize>,
        #[arg(long, value_enum, default_value_t = SolveMethod::ClosedForm)]
        method: SolveMethod,
        /// Terminal-capital tolerance for the shooting method.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Grid nodes for the brute-force DP method.
        #[arg(long)]
        grid_points: Option<usize>,
    },
    /// Extract the infinite-horizon limit path on [0, t_max].
    Limit {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        k0: Option<f64>,
        #[arg(long)]
        t_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = LimitMethod::ClosedForm)]
        method: LimitMethod,
        /// Increasing horizons for the numeric method, e.g. 20,40,80.
        #[arg(long, value_delimiter = ',')]
        horizons: Option<Vec<usize>>,
    },
    /// Print the steady state of the limit dynamics as JSON.
    SteadyState {
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Check the two overtaking-optimality conditions over a horizon grid.
    Conditions {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        k0: Option<f64>,
        #[arg(long = "t-grid", value_delimiter = ',')]
        t_grid: Option<Vec<usize>>,
    },
    /// Certify the limit path against a library of challenger policies.
    Certify {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        k0: Option<f64>,
        #[arg(long = "t-grid", value_delimiter = ',')]
        t_grid: Option<Vec<usize>>,
        /// Challenger specs, e.g. constant-saving=0.7, impatient-burst,
        /// delayed-start=3, limit-policy. Defaults to the built-in three.
        #[arg(long, value_parser = parse_challenger)]
        challenger: Vec<Challenger>,
    },
    /// Composite report: steady-state classification, constant saving
    /// ratio, recovery-time gap, and horizon-monotonicity tables.
    Propositions {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        k0: Option<f64>,
    },
    /// Solve a full (alpha, k0, T) grid in parallel with an aggregate CSV.
    Sweep {
        #[arg(long = "alpha-grid", value_delimiter = ',')]
        alpha_grid: Option<Vec<f64>>,
        #[arg(long = "k0-grid", value_delimiter = ',')]
        k0_grid: Option<Vec<f64>>,
        #[arg(long = "T-grid", value_delimiter = ',')]
        horizon_grid: Option<Vec<usize>>,
        /// Shorthand for a single-horizon grid.
        #[arg(long = "T")]
        horizon: Option<usize>,
    },
}

fn parse_challenger(s: &str) -> std::result::Result<Challenger, String> {
    let (kind, arg) = match s.split_once('=') {
        Some((k, v)) => (k.trim(), Some(v.trim())),
        None => (s.trim(), None),
    };
    match (kind, arg) {
        ("constant-saving", Some(v)) => {
            let rate: f64 = v.parse().map_err(|e| format!("bad saving rate: {e}"))?;
            Ok(Challenger::ConstantSaving { rate })
        }
        ("impatient-burst", None) => Ok(Challenger::ImpatientBurst),
        ("delayed-start", Some(v)) => {
            let delay: usize = v.parse().map_err(|e| format!("bad delay: {e}"))?;
            Ok(Challenger::DelayedStart { delay })
        }
        ("limit-policy", None) => Ok(Challenger::LimitPolicy),
        _ => Err(format!(
            "unknown challenger `{s}` (expected constant-saving=R, impatient-burst, delayed-start=N, limit-policy)"
        )),
    }
}

/// Sentinel for sweeps where every grid point failed.
#[derive(Debug)]
struct SweepFailed {
    failed: usize,
    total: usize,
}

impl fmt::Display for SweepFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "all {} of {} sweep points failed", self.failed, self.total)
    }
}

impl std::error::Error for SweepFailed {}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(classify_exit(&e));
        }
    }
}

/// Map an error chain onto the published exit codes.
fn classify_exit(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if cause.downcast_ref::<SweepFailed>().is_some() {
            return EXIT_PARTIAL_SWEEP;
        }
        if let Some(solver) = cause.downcast_ref::<SolverError>() {
            let mut inner = solver;
            loop {
                match inner {
                    SolverError::Convergence { .. } => return EXIT_CONVERGENCE,
                    SolverError::AtHorizon { source, .. } => inner = source,
                    _ => break,
                }
            }
        }
    }
    EXIT_CONFIG
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out_dir = resolve_out_dir(cli.out.clone(), file.out.clone());

    match cli.command {
        Command::Solve {
            alpha,
            k0,
            horizon,
            method,
            tolerance,
            grid_points,
        } => {
            let alpha = require(alpha, file.alpha, "alpha")?;
            let k0 = require(k0, file.k0, "k0")?;
            let horizon = require(horizon, file.horizon, "T")?;
            let tolerance = tolerance.or(file.tolerance);
            let grid_points = grid_points.or(file.grid_points);
            let model = ModelSpec::log_cobb_douglas(alpha)?;
            let path = match method {
                SolveMethod::ClosedForm => solve_closed_form(alpha, k0, horizon)?,
                SolveMethod::Shooting => {
                    let mut cfg = ShootingConfig::default();
                    if let Some(tol) = tolerance {
                        cfg.tolerance = tol;
                    }
                    solve_shooting(&model, k0, horizon, &cfg)?
                }
                SolveMethod::Dp => {
                    let grid = DPGrid {
                        grid_points: grid_points.unwrap_or(20_001),
                        k_min: 1e-6,
                        k_max: model.max_sustainable_stock() - 1e-6,
                    };
                    solve_bruteforce_dp(&model, k0, horizon, &grid)?
                }
            };
            let mut run = Run::new(
                &out_dir,
                "solve",
                json!({
                    "alpha": alpha, "k0": k0, "T": horizon,
                    "method": format!("{method:?}"),
                    "tolerance": tolerance, "grid_points": grid_points,
                }),
            )?;
            let csv = path_to_csv(&model, &path)?;
            run.write("path.csv", &csv)?;
            run.finish()
        }

        Command::Limit {
            alpha,
            k0,
            t_max,
            method,
            horizons,
        } => {
            let alpha = require(alpha, file.alpha, "alpha")?;
            let k0 = require(k0, file.k0, "k0")?;
            let t_max = require(t_max, file.t_max, "t_max")?;
            let horizons = horizons.or(file.horizons);
            let limit = match method {
                LimitMethod::ClosedForm => limit_path_closed_form(alpha, k0, t_max)?,
                LimitMethod::Numeric => {
                    let hs = horizons
                        .clone()
                        .ok_or_else(|| anyhow!("numeric limit needs --horizons"))?;
                    let model = ModelSpec::log_cobb_douglas(alpha)?;
                    limit_path_numeric(&model, k0, t_max, &hs)?
                }
            };
            let mut run = Run::new(
                &out_dir,
                "limit",
                json!({
                    "alpha": alpha, "k0": k0, "t_max": t_max,
                    "method": format!("{method:?}"), "horizons": horizons,
                }),
            )?;
            run.write("limit.csv", &limit_path_to_csv(&limit))?;
            run.finish()
        }

        Command::SteadyState { alpha } => {
            let alpha = require(alpha, file.alpha, "alpha")?;
            let ss = steady_state(alpha)?;
            let mut run = Run::new(&out_dir, "steady-state", json!({ "alpha": alpha }))?;
            run.write_json("steady_state.json", &ss)?;
            println!("{}", serde_json::to_string(&ss)?);
            run.finish()
        }

        Command::Conditions { alpha, k0, t_grid } => {
            let alpha = require(alpha, file.alpha, "alpha")?;
            let k0 = require(k0, file.k0, "k0")?;
            let t_grid = require(t_grid, file.t_grid, "t_grid")?;
            let report = ConditionsReport {
                alpha,
                k0,
                t_grid: t_grid.clone(),
                condition_i: check_condition_i(alpha, k0, &t_grid)?,
                condition_ii: check_condition_ii(alpha, k0, &t_grid)?,
                terminal_bound: bound_check(alpha, k0, &t_grid)?,
            };
            let mut run = Run::new(
                &out_dir,
                "conditions",
                json!({ "alpha": alpha, "k0": k0, "t_grid": t_grid }),
            )?;
            run.write_json("conditions.json", &report)?;
            run.finish()
        }

        Command::Certify {
            alpha,
            k0,
            t_grid,
            challenger,
        } => {
            let alpha = require(alpha, file.alpha, "alpha")?;
            let k0 = require(k0, file.k0, "k0")?;
            let t_grid = require(t_grid, file.t_grid, "t_grid")?;
            let challengers = if challenger.is_empty() {
                builtin_challengers()
            } else {
                challenger
            };
            let reports = certify_optimality(alpha, k0, &challengers, &t_grid)?;
            let last = *t_grid.last().expect("grid validated non-empty");
            let factorizations = challengers
                .iter()
                .map(|c| {
                    Ok(FactorizationEntry {
                        challenger: c.label(),
                        horizon: last,
                        factorization: factorization_check(alpha, k0, c, last)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut run = Run::new(
                &out_dir,
                "certify",
                json!({
                    "alpha": alpha, "k0": k0, "t_grid": t_grid,
                    "challengers": challengers.iter().map(|c| c.label()).collect::<Vec<_>>(),
                }),
            )?;
            for report in &reports {
                run.write(&format!("ratios_{}.csv", report.challenger), &ratios_to_csv(report))?;
            }
            let doc = CertifyReport {
                alpha,
                k0,
                t_grid,
                reports,
                factorizations,
            };
            run.write_json("certify.json", &doc)?;
            run.finish()
        }

        Command::Propositions { alpha, k0 } => {
            let alpha = require(alpha, file.alpha, "alpha")?;
            let k0 = require(k0, file.k0, "k0")?;
            let report = propositions_report(alpha, k0)?;
            let mut run = Run::new(
                &out_dir,
                "propositions",
                json!({ "alpha": alpha, "k0": k0 }),
            )?;
            run.write_json("propositions.json", &report)?;
            run.finish()
        }

        Command::Sweep {
            alpha_grid,
            k0_grid,
            horizon_grid,
            horizon,
        } => {
            let alpha_grid = require(alpha_grid, file.alpha_grid, "alpha_grid")?;
            let k0_grid = require(k0_grid, file.k0_grid, "k0_grid")?;
            let horizon_grid = match (horizon_grid, horizon) {
                (Some(g), _) => g,
                (None, Some(t)) => vec![t],
                (None, None) => require(None, file.horizon_grid, "T_grid (or --T)")?,
            };
            if alpha_grid.is_empty() || k0_grid.is_empty() || horizon_grid.is_empty() {
                bail!("sweep grids must be non-empty");
            }
            run_sweep(&out_dir, &alpha_grid, &k0_grid, &horizon_grid)
        }
    }
}

#[derive(Serialize)]
struct ConditionsReport {
    alpha: f64,
    k0: f64,
    t_grid: Vec<usize>,
    condition_i: ConditionIReport,
    condition_ii: ConditionIIReport,
    terminal_bound: BoundCheck,
}

#[derive(Serialize)]
struct FactorizationEntry {
    challenger: String,
    horizon: usize,
    factorization: Factorization,
}

#[derive(Serialize)]
struct CertifyReport {
    alpha: f64,
    k0: f64,
    t_grid: Vec<usize>,
    reports: Vec<OvertakingReport>,
    factorizations: Vec<FactorizationEntry>,
}

#[derive(Serialize)]
struct HorizonMonotonicity {
    t: usize,
    horizons: Vec<usize>,
    k_values: Vec<f64>,
    c_values: Vec<f64>,
    lambda_values: Vec<f64>,
    /// Strict increase of k_T(t) in T; at t = 0 the stock is pinned to k0,
    /// so the check starts at t = 1.
    k_strictly_increasing: bool,
    c_strictly_decreasing: bool,
    lambda_strictly_increasing: bool,
}

#[derive(Serialize)]
struct PropositionsReport {
    alpha: f64,
    k0: f64,
    steady_state: SteadyState,
    limit_classification: MonotoneReport,
    /// max_t |k°(t+1)/f(k°(t)) − α| on the limit path for t ≤ 50.
    saving_ratio_max_deviation: f64,
    recovery_gap_formula: f64,
    recovery_gap_simulated: f64,
    horizon_monotonicity: Vec<HorizonMonotonicity>,
}

fn propositions_report(alpha: f64, k0: f64) -> Result<PropositionsReport> {
    let model = ModelSpec::log_cobb_douglas(alpha)?;
    let ss = steady_state(alpha)?;
    let limit = limit_path_closed_form(alpha, k0, 51)?;
    let ratios = saving_ratio(&model, &limit.k_star)?;
    let saving_dev = ratios
        .iter()
        .map(|r| (r - alpha).abs())
        .fold(0.0f64, f64::max);

    let delta = 1e-6;
    let formula = recovery_time_gap(4.0, 2.0, alpha)?;
    let quarter = recovery_time(alpha, ss.k_inf / 4.0, delta, 100_000)?;
    let half = recovery_time(alpha, ss.k_inf / 2.0, delta, 100_000)?;
    let simulated = quarter as f64 - half as f64;

    let mut tables = Vec::new();
    for t in [0usize, 1, 5] {
        let horizons: Vec<usize> = (t..=t + 30).collect();
        let mut kv = Vec::new();
        let mut cv = Vec::new();
        let mut lv = Vec::new();
        for &big_t in &horizons {
            let path = solve_closed_form(alpha, k0, big_t)?;
            kv.push(path.capital[t]);
            cv.push(path.consumption[t]);
            lv.push(path.multipliers[t]);
        }
        let up = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
        let down = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
        tables.push(HorizonMonotonicity {
            t,
            horizons,
            k_strictly_increasing: if t == 0 { kv.windows(2).all(|w| w[1] == w[0]) } else { up(&kv) },
            c_strictly_decreasing: down(&cv),
            lambda_strictly_increasing: up(&lv),
            k_values: kv,
            c_values: cv,
            lambda_values: lv,
        });
    }

    Ok(PropositionsReport {
        alpha,
        k0,
        steady_state: ss,
        limit_classification: monotone_convergence_report(alpha, k0, 50)?,
        saving_ratio_max_deviation: saving_dev,
        recovery_gap_formula: formula,
        recovery_gap_simulated: simulated,
        horizon_monotonicity: tables,
    })
}

fn run_sweep(
    out_dir: &std::path::Path,
    alpha_grid: &[f64],
    k0_grid: &[f64],
    horizon_grid: &[usize],
) -> Result<()> {
    let mut points = Vec::new();
    for &alpha in alpha_grid {
        for &k0 in k0_grid {
            for &horizon in horizon_grid {
                points.push((alpha, k0, horizon));
            }
        }
    }

    // Each grid point is independent; solve them in parallel and let the
    // single coordinating thread write the aggregate afterwards.
    type PointOutcome = (f64, f64, usize, overtake::Result<(String, f64, f64)>);
    let results: Vec<PointOutcome> = points
        .par_iter()
        .map(|&(alpha, k0, horizon)| {
            let outcome = (|| {
                let model = ModelSpec::log_cobb_douglas(alpha)?;
                let path = solve_closed_form(alpha, k0, horizon)?;
                let csv = path_to_csv(&model, &path)?;
                let objective = path_objective(&model, &path)?;
                Ok((csv, path.consumption[0], objective))
            })();
            (alpha, k0, horizon, outcome)
        })
        .collect();

    let mut run = Run::new(
        out_dir,
        "sweep",
        json!({
            "alpha_grid": alpha_grid, "k0_grid": k0_grid, "T_grid": horizon_grid,
        }),
    )?;

    let mut aggregate = String::from("alpha,k0,T,status,c0,objective,file\n");
    let mut failures = 0usize;
    for (alpha, k0, horizon, outcome) in &results {
        match outcome {
            Ok((csv, c0, objective)) => {
                let name = format!("path_alpha{alpha}_k0{k0}_T{horizon}.csv");
                run.write(&name, csv)?;
                aggregate.push_str(&format!(
                    "{alpha},{k0},{horizon},ok,{},{},{name}\n",
                    overtake::export::fmt_f64(*c0),
                    overtake::export::fmt_f64(*objective),
                ));
            }
            Err(e) => {
                failures += 1;
                let reason = e.to_string().replace([',', '\n'], ";");
                aggregate.push_str(&format!("{alpha},{k0},{horizon},failed: {reason},,,\n"));
            }
        }
    }
    run.write("aggregate.csv", &aggregate)?;
    run.finish()?;

    if failures == results.len() {
        return Err(SweepFailed {
            failed: failures,
            total: results.len(),
        }
        .into());
    }
    if failures > 0 {
        eprintln!(
            "warning: {failures} of {} sweep points failed (recorded in aggregate.csv)",
            results.len()
        );
    }
    Ok(())
}
