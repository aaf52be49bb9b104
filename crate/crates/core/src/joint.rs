//! The alternating optimizer: iterate the fixed-ratio subproblem (power
//! split, data sizes, durations) and the fixed-data subproblem (ratios,
//! durations) until the operator's reward settles.
//!
//! Each pass of either subproblem keeps the previous iterate feasible, so
//! the reward ascends monotonically and the alternation converges to a
//! block-wise optimum. Iteration traces are recorded for convergence
//! studies.

use crate::allocation::FixedRatioInstance;
use crate::compression::{
    solve_lossless, solve_lossy, LosslessCompressionProblem, LossyCompressionProblem,
};
use crate::model::{CompressionMode, CompressionModel, OperatorConfig, SensorProfile, Solution};
use crate::SolverError;
use serde::{Deserialize, Serialize};

/// Alternation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    /// Convergence tolerance on the reward delta and the dual bisection.
    pub tolerance: f64,
    /// Hard cap on outer iterations.
    pub max_outer: usize,
    /// Starting compression ratio for every sensor.
    pub initial_ratio: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tolerance: 1e-5,
            max_outer: 50,
            initial_ratio: 1.0,
        }
    }
}

/// Reward after each outer iteration plus convergence bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    /// Operator's reward after each fixed-ratio pass.
    pub rewards: Vec<f64>,
    /// Number of outer iterations run.
    pub iterations: usize,
    /// Whether the reward delta dropped below the tolerance before the cap.
    pub converged: bool,
}

impl IterationTrace {
    /// Per-iteration gaps against the run's final reward.
    pub fn gaps(&self) -> Vec<f64> {
        let last = *self.rewards.last().unwrap_or(&0.0);
        self.rewards.iter().map(|r| (r - last).abs()).collect()
    }
}

/// A converged (or best-so-far) joint solution with its trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointSolution {
    pub solution: Solution,
    pub trace: IterationTrace,
    pub mode: CompressionMode,
}

/// Jointly optimizes power allocation, sensing-data sizes, lossless
/// compression ratios, and transmission durations.
///
/// Ratios start at `settings.initial_ratio`; each outer iteration solves
/// the fixed-ratio problem, then re-optimizes each selected sensor's ratio
/// at its current data size. Stops when the reward moves less than the
/// tolerance or nothing is left to update.
pub fn optimize_lossless(
    profiles: &[SensorProfile],
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    settings: &SolverSettings,
) -> Result<JointSolution, SolverError> {
    let start = vec![settings.initial_ratio.clamp(1.0, comp.ratio_max); profiles.len()];
    optimize_lossless_from(profiles, comp, cfg, settings, start)
}

/// [`optimize_lossless`] with an explicit per-sensor starting ratio vector
/// (the alternation ascends from whatever operating point the ratios
/// describe, so callers can warm-start it).
pub fn optimize_lossless_from(
    profiles: &[SensorProfile],
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    settings: &SolverSettings,
    initial_ratios: Vec<f64>,
) -> Result<JointSolution, SolverError> {
    debug_assert_eq!(comp.mode, CompressionMode::Lossless);
    let xi = settings.tolerance;
    let mut ratios = initial_ratios;
    let mut rewards = Vec::new();
    let mut converged = false;
    let mut last: Option<(FixedRatioInstance, crate::allocation::FixedRatioSolution)> = None;

    for _ in 0..settings.max_outer.max(1) {
        let inst = FixedRatioInstance::new(profiles, &ratios, comp, cfg)?;
        let fr = inst.solve(xi)?;
        let reward = fr.reward;
        let prev = rewards.last().copied();
        rewards.push(reward);

        let data_sizes = fr.data_sizes.clone();
        last = Some((inst, fr));
        if prev.is_some_and(|p| (reward - p).abs() < xi) {
            converged = true;
            break;
        }

        let mut any_update = false;
        for (n, prof) in profiles.iter().enumerate() {
            if data_sizes[n] <= 0.0 {
                continue;
            }
            let prob = LosslessCompressionProblem {
                profile: *prof,
                data_size: data_sizes[n],
                comp: *comp,
                cfg: *cfg,
            };
            let (ratio, _) = solve_lossless(&prob, xi)?;
            ratios[n] = ratio;
            any_update = true;
        }
        if !any_update {
            // empty selection: nothing to alternate over
            converged = true;
            break;
        }
    }

    let (inst, fr) = last.expect("at least one outer iteration runs");
    let iterations = rewards.len();
    Ok(JointSolution {
        solution: inst.to_solution(&fr),
        trace: IterationTrace {
            rewards,
            iterations,
            converged,
        },
        mode: CompressionMode::Lossless,
    })
}

/// Jointly optimizes power allocation, sensing-data sizes, lossy
/// compression ratios, and transmission durations.
///
/// The fixed-ratio pass runs on the square-root-transformed instance with
/// data measured in delivered utility. The compression pass then solves the
/// second block exactly: holding each selected sensor's harvested energy
/// fixed, it alternates the utility-preserving ratio update with a
/// data-utility rebalance until that block settles, which keeps the outer
/// loop short.
pub fn optimize_lossy(
    profiles: &[SensorProfile],
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    settings: &SolverSettings,
) -> Result<JointSolution, SolverError> {
    let start = vec![settings.initial_ratio.clamp(1.0, comp.ratio_max); profiles.len()];
    optimize_lossy_from(profiles, comp, cfg, settings, start)
}

/// [`optimize_lossy`] with an explicit per-sensor starting ratio vector.
pub fn optimize_lossy_from(
    profiles: &[SensorProfile],
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    settings: &SolverSettings,
    initial_ratios: Vec<f64>,
) -> Result<JointSolution, SolverError> {
    debug_assert_eq!(comp.mode, CompressionMode::Lossy);
    let xi = settings.tolerance;
    let mut ratios = initial_ratios;
    let mut rewards = Vec::new();
    let mut converged = false;
    let mut last: Option<(FixedRatioInstance, crate::allocation::FixedRatioSolution)> = None;

    for _ in 0..settings.max_outer.max(1) {
        let inst = FixedRatioInstance::new(profiles, &ratios, comp, cfg)?;
        let fr = inst.solve(xi)?;
        let reward = fr.reward;
        let prev = rewards.last().copied();
        rewards.push(reward);

        let utilities = fr.data_sizes.clone();
        let powers = fr.powers.clone();
        last = Some((inst, fr));
        if prev.is_some_and(|p| (reward - p).abs() < xi) {
            converged = true;
            break;
        }

        let mut any_update = false;
        for (n, prof) in profiles.iter().enumerate() {
            if utilities[n] <= 0.0 || powers[n] <= 0.0 {
                continue;
            }
            let budget =
                cfg.conversion_efficiency * prof.channel_gain * powers[n] * cfg.wpt_duration;
            let (ratio, _) = lossy_block(prof, comp, cfg, utilities[n], budget, xi)?;
            ratios[n] = ratio;
            any_update = true;
        }
        if !any_update {
            converged = true;
            break;
        }
    }

    let (inst, fr) = last.expect("at least one outer iteration runs");
    let iterations = rewards.len();
    Ok(JointSolution {
        solution: inst.to_solution(&fr),
        trace: IterationTrace {
            rewards,
            iterations,
            converged,
        },
        mode: CompressionMode::Lossy,
    })
}

/// Exactly solves one sensor's lossy block `{ratio, data, duration}` at a
/// fixed energy budget: alternate the utility-preserving ratio update with
/// the largest utility the budget can fund at that ratio, until the utility
/// settles. Returns `(ratio, utility)`.
fn lossy_block(
    prof: &SensorProfile,
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    start_utility: f64,
    energy_budget: f64,
    xi: f64,
) -> Result<(f64, f64), SolverError> {
    let mut utility = start_utility;
    let mut ratio = 1.0;
    for _ in 0..60 {
        let prob = LossyCompressionProblem {
            profile: *prof,
            data_utility: utility,
            comp: *comp,
            cfg: *cfg,
        };
        let (r2, _raw, _tx) = solve_lossy(&prob, xi)?;
        ratio = r2;
        let next = max_utility_at_ratio(prof, comp, cfg, ratio.sqrt(), energy_budget);
        if (next - utility).abs() <= 1e-6 * utility.max(1.0) {
            utility = next;
            break;
        }
        utility = next;
    }
    Ok((ratio, utility))
}

/// Largest delivered utility a fixed energy budget can fund at square-root
/// ratio `r`, with the duration riding the time constraint. The energy is
/// strictly increasing in the utility, so a plain bisection suffices.
fn max_utility_at_ratio(
    prof: &SensorProfile,
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    r: f64,
    energy_budget: f64,
) -> f64 {
    let eps = comp.epsilon;
    let cycles = (eps * r * r).exp() - eps.exp();
    let per_bit_time = 1.0 / prof.sensing_rate + cycles / prof.cpu_frequency;
    let per_bit_energy =
        prof.reward_energy_per_bit + prof.sense_energy_per_bit + prof.cycle_energy * cycles;
    let u_time_cap = cfg.sensing_window / (r * per_bit_time) * (1.0 - 1e-12);
    let energy_of = |u: f64| -> f64 {
        let t = cfg.sensing_window - u * r * per_bit_time;
        let rate = u / (t * r);
        let arg = rate * std::f64::consts::LN_2 / cfg.bandwidth;
        if arg > 700.0 {
            return f64::INFINITY;
        }
        per_bit_energy * u * r + t / prof.channel_gain * cfg.noise_power * arg.exp_m1()
    };
    let mut lo = 0.0;
    let mut hi = u_time_cap;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if energy_of(mid) <= energy_budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
