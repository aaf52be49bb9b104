//! Independent brute-force grid searches used to validate solver outputs on
//! small instances.
//!
//! Everything here evaluates objectives exclusively through the model
//! formulas, never through solver code paths, so agreement between a
//! solver and its oracle is meaningful evidence. Variables eliminated by
//! the budget-tightness identities (spend exactly what is harvested, use
//! the whole window) are reconstructed inside the oracle through those same
//! model formulas, which keeps the grids two-dimensional.
//!
//! Argmin/argmax ties break toward the lowest-index grid point, so results
//! are deterministic and independent of evaluation order.

use crate::model::{
    compression_cycles, operator_reward, plan_energy, CompressionMode, CompressionModel,
    OperatorConfig, SensorPlan, SensorProfile,
};

/// A one-dimensional grid: `points` evenly spaced values on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> Self {
        assert!(points >= 1 && lo <= hi, "degenerate grid");
        GridSpec { lo, hi, points }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let (lo, hi, n) = (self.lo, self.hi, self.points);
        (0..n).map(move |i| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
    }
}

/// Builds the plan a duration grid point implies for one sensor at fixed
/// ratio: data fills the window left over from transmitting, power funds the
/// plan exactly. Returns `None` where the model reports infeasibility.
fn implied_plan(
    t: f64,
    ratio: f64,
    prof: &SensorProfile,
    comp: &CompressionModel,
    cfg: &OperatorConfig,
) -> Option<SensorPlan> {
    let cycles = compression_cycles(ratio, comp.epsilon).ok()?;
    let per_bit_time = 1.0 / prof.sensing_rate + cycles / prof.cpu_frequency;
    let data = (cfg.sensing_window - t) / per_bit_time;
    if data < 0.0 {
        return None;
    }
    let mut plan = SensorPlan {
        power: 0.0,
        data_size: data,
        ratio,
        tx_duration: if data > 0.0 { t } else { 0.0 },
    };
    let energy = plan_energy(&plan, prof, comp, cfg).ok()?;
    plan.power =
        energy.total() / (cfg.conversion_efficiency * prof.channel_gain * cfg.wpt_duration);
    Some(plan)
}

/// Exhaustive reward maximization over per-sensor transmission durations at
/// fixed ratios, for one or two sensors. The power constraint is enforced
/// by rejection. Returns the best duration vector and its reward.
pub fn grid_search_durations(
    profiles: &[SensorProfile],
    ratios: &[f64],
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    grid: &GridSpec,
) -> (Vec<f64>, f64) {
    assert!(
        (1..=2).contains(&profiles.len()),
        "grid cost grows as points^N; use 1 or 2 sensors"
    );
    let zero = vec![SensorPlan::zero(); profiles.len()];
    let mut best_reward = operator_reward(&zero, profiles, comp, cfg);
    let mut best: Vec<f64> = vec![cfg.sensing_window; profiles.len()];

    let mut consider = |ts: &[f64]| {
        let mut plans = Vec::with_capacity(ts.len());
        for (n, &t) in ts.iter().enumerate() {
            match implied_plan(t, ratios[n], &profiles[n], comp, cfg) {
                Some(p) => plans.push(p),
                None => return,
            }
        }
        let total_power: f64 = plans.iter().map(|p| p.power).sum();
        if total_power > cfg.power_budget {
            return;
        }
        let reward = operator_reward(&plans, profiles, comp, cfg);
        if reward > best_reward {
            best_reward = reward;
            best = ts.to_vec();
        }
    };

    if profiles.len() == 1 {
        for t in grid.values() {
            consider(&[t]);
        }
    } else {
        for t1 in grid.values() {
            for t2 in grid.values() {
                consider(&[t1, t2]);
            }
        }
    }
    (best, best_reward)
}

/// Exhaustive energy minimization over `(ratio, duration)` for one sensor at
/// fixed data size. Returns `(ratio, duration, energy)` of the best
/// feasible grid point, or `None` if no grid point is feasible.
pub fn grid_search_ratio_duration(
    prof: &SensorProfile,
    data_size: f64,
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    ratio_grid: &GridSpec,
    duration_grid: &GridSpec,
) -> Option<(f64, f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for ratio in ratio_grid.values() {
        let cycles = match compression_cycles(ratio, comp.epsilon) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let busy = data_size / prof.sensing_rate + data_size * cycles / prof.cpu_frequency;
        for t in duration_grid.values() {
            if t <= 0.0 || busy + t > cfg.sensing_window {
                continue;
            }
            let plan = SensorPlan {
                power: 0.0,
                data_size,
                ratio,
                tx_duration: t,
            };
            let energy = match plan_energy(&plan, prof, comp, cfg) {
                Ok(e) => e.total(),
                Err(_) => continue,
            };
            if best.is_none_or(|(_, _, b)| energy < b) {
                best = Some((ratio, t, energy));
            }
        }
    }
    best
}

/// Exhaustive energy minimization over `(sqrt ratio, duration)` for one
/// lossy sensor at fixed delivered utility; the raw size is implied by the
/// utility constraint. Returns `(ratio, duration, energy)`.
pub fn grid_search_lossy(
    prof: &SensorProfile,
    data_utility: f64,
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    root_grid: &GridSpec,
    duration_grid: &GridSpec,
) -> Option<(f64, f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    for r in root_grid.values() {
        let ratio = r * r;
        let raw = data_utility * r;
        let cycles = match compression_cycles(ratio, comp.epsilon) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let busy = raw / prof.sensing_rate + raw * cycles / prof.cpu_frequency;
        for t in duration_grid.values() {
            if t <= 0.0 || busy + t > cfg.sensing_window {
                continue;
            }
            let plan = SensorPlan {
                power: 0.0,
                data_size: raw,
                ratio,
                tx_duration: t,
            };
            let energy = match plan_energy(&plan, prof, comp, cfg) {
                Ok(e) => e.total(),
                Err(_) => continue,
            };
            if best.is_none_or(|(_, _, b)| energy < b) {
                best = Some((ratio, t, energy));
            }
        }
    }
    best
}

/// Exhaustive reward maximization over `(duration, ratio)` for a single
/// sensor with data and power implied by the budget-tightness identities.
/// Handles both compression modes; for a lossy model the ratio axis runs
/// over the square root.
pub fn grid_search_joint(
    prof: &SensorProfile,
    comp: &CompressionModel,
    cfg: &OperatorConfig,
    duration_grid: &GridSpec,
    ratio_grid: &GridSpec,
) -> f64 {
    let mut best = 0.0f64; // the zero plan is always feasible
    for ratio_point in ratio_grid.values() {
        let ratio = match comp.mode {
            CompressionMode::Lossless => ratio_point,
            CompressionMode::Lossy => ratio_point * ratio_point,
        };
        if ratio > comp.ratio_max * (1.0 + 1e-12) {
            continue;
        }
        for t in duration_grid.values() {
            let Some(plan) = implied_plan(t, ratio, prof, comp, cfg) else {
                continue;
            };
            if plan.power > cfg.power_budget {
                continue;
            }
            let reward = operator_reward(&[plan], &[*prof], comp, cfg);
            if reward > best {
                best = reward;
            }
        }
    }
    best
}
