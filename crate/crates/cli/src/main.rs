//! `wpcs` is the command-line front end for the crowd-sensing solvers: run a
//! joint solve, sweep an experiment axis, cross-check a solver against the
//! brute-force oracle, or generate/inspect scenario files.
//!
//! Configuration comes from an optional JSON file (`--config`) with flags
//! overriding file values; every default matches the simulation setup the
//! library is tested at, so an empty configuration reproduces it.
//!
//! Exit codes: 0 success, 1 oracle tolerance exceeded, 2 invalid
//! configuration or usage, 3 numeric failure.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wpcs_core::allocation::{priority, FixedRatioInstance};
use wpcs_core::joint::{optimize_lossless, optimize_lossy, JointSolution, SolverSettings};
use wpcs_core::model::{
    plan_energy, CompressionMode, CompressionModel, EnergyBreakdown, OperatorConfig,
};
use wpcs_core::oracle::{grid_search_durations, grid_search_joint, GridSpec};
use wpcs_core::scenario::{
    export, fixed_ratio_for, generate_scenario, run_policy, sweep, ExportFormat, Policy, Scenario,
    ScenarioParams, SweepAxis,
};

#[derive(Parser)]
#[command(
    name = "wpcs",
    about = "Wirelessly powered crowd sensing: solvers, sweeps, and oracle checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the joint optimizer on one scenario and write solution + trace.
    Solve(CommonArgs),
    /// Sweep an experiment axis and write the aggregated table.
    Sweep(CommonArgs),
    /// Cross-check the solver against the brute-force grid oracle (1 or 2
    /// sensors).
    Oracle(CommonArgs),
    /// Generate or inspect scenario files.
    Scenario(ScenarioArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base random seed (required for solve/sweep/oracle/generate).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default "out").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Compression mode: lossless | lossy.
    #[arg(long)]
    mode: Option<String>,
    /// Solver tolerance; for `oracle` this is the comparison tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Monte-Carlo draws per sweep point.
    #[arg(long)]
    draws: Option<usize>,
    /// Sweep axis: energy | duration | gain.
    #[arg(long)]
    axis: Option<String>,
    /// Sweep axis values.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
}

#[derive(Args)]
struct ScenarioArgs {
    #[command(subcommand)]
    action: ScenarioAction,
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Draw a scenario and write it as JSON for replay.
    Generate(CommonArgs),
    /// Print a summary of a scenario file.
    Inspect { file: PathBuf },
}

/// JSON configuration schema. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    seed: Option<u64>,
    mode: Option<String>,
    tol: Option<f64>,
    max_outer: Option<usize>,
    draws: Option<usize>,
    axis: Option<String>,
    values: Option<Vec<f64>>,
    out: Option<PathBuf>,
    format: Option<String>,
    /// Oracle comparison tolerance (also settable via --tol on `oracle`).
    oracle_tol: Option<f64>,
    /// Grid points per axis for the oracle.
    grid_points: Option<usize>,
    /// Fixed ratio used by the two-sensor oracle check.
    ratio: Option<f64>,
    /// Replay a previously generated scenario instead of drawing one.
    scenario_file: Option<PathBuf>,
    scenario: Option<ScenarioParams>,
    operator: Option<OperatorConfig>,
    epsilon: Option<f64>,
    ratio_max: Option<f64>,
}

/// Fully resolved run configuration (file values + flag overrides).
struct RunConfig {
    seed: Option<u64>,
    mode: CompressionMode,
    settings: SolverSettings,
    draws: usize,
    axis: Option<String>,
    values: Vec<f64>,
    out: PathBuf,
    format: ExportFormat,
    oracle_tol: f64,
    grid_points: usize,
    ratio: Option<f64>,
    scenario_file: Option<PathBuf>,
    params: ScenarioParams,
    operator: OperatorConfig,
    comp: CompressionModel,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    fn config<S: Into<String>>(s: S) -> Self {
        CliError::Config(s.into())
    }
}

impl From<wpcs_core::SolverError> for CliError {
    fn from(e: wpcs_core::SolverError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

fn resolve(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("invalid config: {e}")))?
        }
        None => FileConfig::default(),
    };

    let mode = match args.mode.as_deref().or(file.mode.as_deref()) {
        None | Some("lossless") => CompressionMode::Lossless,
        Some("lossy") => CompressionMode::Lossy,
        Some(other) => return Err(CliError::config(format!("unknown mode '{other}'"))),
    };
    let mut comp = match mode {
        CompressionMode::Lossless => CompressionModel::default_lossless(),
        CompressionMode::Lossy => CompressionModel::default_lossy(),
    };
    if let Some(eps) = file.epsilon {
        comp.epsilon = eps;
    }
    if let Some(rmax) = file.ratio_max {
        comp.ratio_max = rmax;
    }
    comp.validate().map_err(CliError::Config)?;

    let mut settings = SolverSettings::default();
    if let Some(tol) = args.tol.or(file.tol) {
        if !tol.is_finite() || tol < 0.0 {
            return Err(CliError::config("tol must be non-negative"));
        }
        // zero is meaningful only as an oracle comparison tolerance; the
        // solver keeps its default then
        if tol > 0.0 {
            settings.tolerance = tol;
        }
    }
    if let Some(m) = file.max_outer {
        settings.max_outer = m;
    }

    let params = file.scenario.unwrap_or_default();
    let operator = file.operator.unwrap_or_default();
    operator.validate().map_err(CliError::Config)?;

    Ok(RunConfig {
        seed: args.seed.or(file.seed),
        mode,
        settings,
        draws: args.draws.or(file.draws).unwrap_or(100),
        axis: args.axis.clone().or(file.axis),
        values: args.values.clone().or(file.values).unwrap_or_default(),
        out: args
            .out
            .clone()
            .or(file.out)
            .unwrap_or_else(|| "out".into()),
        format: match file.format.as_deref() {
            None | Some("csv") => ExportFormat::Csv,
            Some("json") => ExportFormat::Json,
            Some(other) => return Err(CliError::config(format!("unknown format '{other}'"))),
        },
        oracle_tol: args.tol.or(file.oracle_tol).unwrap_or(1e-3),
        grid_points: file.grid_points.unwrap_or(300),
        ratio: file.ratio,
        scenario_file: file.scenario_file,
        params,
        operator,
        comp,
    })
}

fn require_seed(rc: &RunConfig) -> Result<u64, CliError> {
    rc.seed
        .ok_or_else(|| CliError::config("missing required key 'seed' (file or --seed)"))
}

/// Loads the scenario to solve: either a replayed file or a fresh draw with
/// the configured operator constants.
fn load_scenario(rc: &RunConfig) -> Result<Scenario, CliError> {
    match &rc.scenario_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("invalid scenario file: {e}")))
        }
        None => {
            let seed = require_seed(rc)?;
            let mut scenario = generate_scenario(&rc.params, seed);
            scenario.cfg = rc.operator;
            Ok(scenario)
        }
    }
}

#[derive(Serialize)]
struct SensorReport {
    power: f64,
    data_size: f64,
    ratio: f64,
    tx_duration: f64,
    priority: f64,
    selected: bool,
    energy: EnergyBreakdown,
}

#[derive(Serialize)]
struct SolutionReport {
    mode: CompressionMode,
    seed: u64,
    reward: f64,
    dual: f64,
    sensors: Vec<SensorReport>,
}

#[derive(Serialize)]
struct TraceReport {
    rewards: Vec<f64>,
    gaps: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let body = serde_json::to_string_pretty(value).expect("report serializes");
    std::fs::write(&path, body + "\n")
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn cmd_solve(args: &CommonArgs) -> Result<(), CliError> {
    let rc = resolve(args)?;
    let scenario = load_scenario(&rc)?;
    let js: JointSolution = match rc.mode {
        CompressionMode::Lossless => {
            optimize_lossless(&scenario.profiles, &rc.comp, &scenario.cfg, &rc.settings)?
        }
        CompressionMode::Lossy => {
            optimize_lossy(&scenario.profiles, &rc.comp, &scenario.cfg, &rc.settings)?
        }
    };

    let mut sensors = Vec::with_capacity(js.solution.plans.len());
    for (n, plan) in js.solution.plans.iter().enumerate() {
        let prof = &scenario.profiles[n];
        sensors.push(SensorReport {
            power: plan.power,
            data_size: plan.data_size,
            ratio: plan.ratio,
            tx_duration: plan.tx_duration,
            priority: priority(prof, plan.ratio, &rc.comp, &scenario.cfg)?,
            selected: js.solution.selected[n],
            energy: plan_energy(plan, prof, &rc.comp, &scenario.cfg)
                .map_err(|e| CliError::Numeric(e.to_string()))?,
        });
    }
    let solution_path = write_json(
        &rc.out,
        "solution.json",
        &SolutionReport {
            mode: rc.mode,
            seed: scenario.seed,
            reward: js.solution.reward,
            dual: js.solution.dual,
            sensors,
        },
    )?;
    let trace_path = write_json(
        &rc.out,
        "trace.json",
        &TraceReport {
            gaps: js.trace.gaps(),
            rewards: js.trace.rewards,
            iterations: js.trace.iterations,
            converged: js.trace.converged,
        },
    )?;
    println!(
        "solved {} sensors: reward {:.6}, {} iterations -> {}, {}",
        scenario.profiles.len(),
        js.solution.reward,
        js.trace.iterations,
        solution_path.display(),
        trace_path.display()
    );
    Ok(())
}

fn cmd_sweep(args: &CommonArgs) -> Result<(), CliError> {
    let rc = resolve(args)?;
    let seed = require_seed(&rc)?;
    let axis_name = rc
        .axis
        .as_deref()
        .ok_or_else(|| CliError::config("missing required key 'axis'"))?;
    let axis = SweepAxis::parse(axis_name)
        .ok_or_else(|| CliError::config(format!("unknown axis '{axis_name}'")))?;
    if rc.values.is_empty() {
        return Err(CliError::config("missing required key 'values'"));
    }
    if rc.draws == 0 {
        return Err(CliError::config("draws must be at least 1"));
    }
    let table = sweep(
        axis,
        &rc.values,
        &rc.params,
        &rc.comp,
        rc.draws,
        seed,
        &rc.settings,
    )?;
    std::fs::create_dir_all(&rc.out)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", rc.out.display())))?;
    let path = rc.out.join(match rc.format {
        ExportFormat::Csv => "sweep.csv",
        ExportFormat::Json => "sweep.json",
    });
    export(&table, &path, rc.format)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    println!(
        "swept {} over {} values x {} draws -> {}",
        table.axis,
        rc.values.len(),
        rc.draws,
        path.display()
    );
    Ok(())
}

/// Runs the solver and the matching grid oracle; `Ok(true)` means the
/// solver matched within tolerance.
fn cmd_oracle(args: &CommonArgs) -> Result<bool, CliError> {
    let rc = resolve(args)?;
    let seed = require_seed(&rc)?;
    let n = rc.params.n_sensors;
    if n == 0 || n > 2 {
        return Err(CliError::config(format!(
            "oracle checks support 1 or 2 sensors, got {n}"
        )));
    }
    let mut scenario = generate_scenario(&rc.params, seed);
    scenario.cfg = rc.operator;
    let window = scenario.cfg.sensing_window;

    let (solver_reward, oracle_reward, label) = if n == 1 {
        let run = run_policy(
            Policy::Proposed,
            &scenario.profiles,
            &rc.comp,
            &scenario.cfg,
            &rc.settings,
        )?;
        let duration_grid = GridSpec::new(1e-3 * window, window, rc.grid_points);
        let ratio_hi = match rc.comp.mode {
            CompressionMode::Lossless => rc.comp.ratio_max,
            CompressionMode::Lossy => rc.comp.ratio_max.sqrt(),
        };
        let ratio_grid = GridSpec::new(1.0, ratio_hi, rc.grid_points.min(200));
        let oracle = grid_search_joint(
            &scenario.profiles[0],
            &rc.comp,
            &scenario.cfg,
            &duration_grid,
            &ratio_grid,
        );
        (run.reward, oracle, "joint optimizer vs duration-ratio grid")
    } else {
        let ratio = rc.ratio.unwrap_or_else(|| fixed_ratio_for(&rc.comp));
        let ratios = vec![ratio; n];
        let inst = FixedRatioInstance::new(&scenario.profiles, &ratios, &rc.comp, &scenario.cfg)?;
        let fr = inst.solve(rc.settings.tolerance)?;
        let grid = GridSpec::new(1e-3 * window, window, rc.grid_points.min(150));
        let (_, oracle) =
            grid_search_durations(&scenario.profiles, &ratios, &rc.comp, &scenario.cfg, &grid);
        (fr.reward, oracle, "fixed-ratio solver vs duration grid")
    };

    // two-sided: the solver must neither trail the grid optimum nor exceed
    // it by more than the grid can explain
    let delta = solver_reward - oracle_reward;
    let ok = delta.abs() <= rc.oracle_tol * (1.0 + oracle_reward.abs());
    println!("check: {label}");
    println!("solver reward: {solver_reward:.9}");
    println!("oracle reward: {oracle_reward:.9}");
    println!(
        "delta:         {delta:.3e} (tolerance {:.3e})",
        rc.oracle_tol
    );
    println!("verdict:       {}", if ok { "OK" } else { "MISMATCH" });
    Ok(ok)
}

fn cmd_scenario(args: &ScenarioArgs) -> Result<(), CliError> {
    match &args.action {
        ScenarioAction::Generate(common) => {
            let rc = resolve(common)?;
            let seed = require_seed(&rc)?;
            let mut scenario = generate_scenario(&rc.params, seed);
            scenario.cfg = rc.operator;
            let path = write_json(&rc.out, "scenario.json", &scenario)?;
            println!(
                "generated {} sensors (seed {seed}) -> {}",
                scenario.profiles.len(),
                path.display()
            );
            Ok(())
        }
        ScenarioAction::Inspect { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", file.display())))?;
            let scenario: Scenario = serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("invalid scenario file: {e}")))?;
            println!("seed: {}", scenario.seed);
            println!("sensors: {}", scenario.profiles.len());
            println!(
                "power budget: {} W over {} s, window {} s, cost weight {}",
                scenario.cfg.power_budget,
                scenario.cfg.wpt_duration,
                scenario.cfg.sensing_window,
                scenario.cfg.cost_weight
            );
            for (i, prof) in scenario.profiles.iter().enumerate() {
                println!(
                    "  [{i}] gain {:.3e}  rate {:.3e} b/s  cpu {:.3e} Hz  distance {:.2} m",
                    prof.channel_gain,
                    prof.sensing_rate,
                    prof.cpu_frequency,
                    scenario.distances.get(i).copied().unwrap_or(f64::NAN)
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool, CliError> = match &cli.command {
        Command::Solve(args) => cmd_solve(args).map(|_| true),
        Command::Sweep(args) => cmd_sweep(args).map(|_| true),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Scenario(args) => cmd_scenario(args).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(3)
        }
    }
}
