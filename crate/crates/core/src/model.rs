//! Physical model of the WPCS system: operator and sensor parameters,
//! per-sensor plans, energy/time/rate formulas, the operator's reward, and
//! feasibility checking.
//!
//! All other modules compute through these definitions, so the formulas live
//! here exactly once. Everything is a pure function of its inputs; values
//! are immutable after construction and safe to share across threads.

use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Relative tolerance used by [`check_feasibility`].
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Largest exponent passed to `exp`; beyond this the model reports
/// overflow-infeasible rather than producing infinities mid-formula.
pub const MAX_EXP_ARG: f64 = 700.0;

/// Errors from model-level evaluations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    /// Compression ratios below one are outside the model's domain.
    #[error("compression ratio {0} is below 1")]
    RatioBelowOne(f64),
    /// A log-domain exponent exceeded [`MAX_EXP_ARG`]; the plan is reported
    /// overflow-infeasible to keep arithmetic finite.
    #[error("exponential argument {arg} overflows (limit {MAX_EXP_ARG})")]
    ExpOverflow { arg: f64 },
    /// A plan wants to move data in zero transmission time.
    #[error("plan has {data_size} bits but zero transmission time")]
    ZeroDuration { data_size: f64 },
}

/// System-wide operator constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OperatorConfig {
    /// Total transmit power budget of the access point, watts.
    pub power_budget: f64,
    /// Duration of the dedicated power-transfer phase, seconds.
    pub wpt_duration: f64,
    /// Duration of the crowd-sensing window, seconds.
    pub sensing_window: f64,
    /// Price of a joule of radiated energy in utility units.
    pub cost_weight: f64,
    /// Per-sensor channel bandwidth, hertz.
    pub bandwidth: f64,
    /// Receiver noise power, watts.
    pub noise_power: f64,
    /// Energy conversion efficiency of harvesting, in (0, 1).
    pub conversion_efficiency: f64,
}

impl OperatorConfig {
    /// Checks the type invariants, returning the offending description.
    pub fn validate(&self) -> Result<(), String> {
        let checks = [
            (self.power_budget >= 0.0, "power_budget must be >= 0"),
            (self.wpt_duration > 0.0, "wpt_duration must be > 0"),
            (self.sensing_window > 0.0, "sensing_window must be > 0"),
            (self.cost_weight >= 0.0, "cost_weight must be >= 0"),
            (self.bandwidth > 0.0, "bandwidth must be > 0"),
            (self.noise_power > 0.0, "noise_power must be > 0"),
            (
                self.conversion_efficiency > 0.0 && self.conversion_efficiency < 1.0,
                "conversion_efficiency must be in (0, 1)",
            ),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(msg.to_string());
            }
        }
        Ok(())
    }
}

impl Default for OperatorConfig {
    /// Desk-scale defaults matching the simulation setup used throughout the
    /// test suite: 0.3 W budget over a 1 s transfer phase, 1 s sensing
    /// window, cost weight 0.6, 10 kHz bandwidth, -90 dBm noise, 50%
    /// harvesting efficiency.
    fn default() -> Self {
        OperatorConfig {
            power_budget: 0.3,
            wpt_duration: 1.0,
            sensing_window: 1.0,
            cost_weight: 0.6,
            bandwidth: 1e4,
            noise_power: 1e-9,
            conversion_efficiency: 0.5,
        }
    }
}

/// Per-sensor physical and economic parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorProfile {
    /// Effective channel power gain after beamforming (dimensionless).
    pub channel_gain: f64,
    /// Sensing output rate, bits/second.
    pub sensing_rate: f64,
    /// Energy to sense one bit, joules/bit.
    pub sense_energy_per_bit: f64,
    /// Energy per CPU cycle, joules/cycle.
    pub cycle_energy: f64,
    /// Reward energy banked per sensed bit, joules/bit.
    pub reward_energy_per_bit: f64,
    /// CPU clock, cycles/second.
    pub cpu_frequency: f64,
    /// Utility weight of this sensor's data.
    pub utility_weight: f64,
}

impl SensorProfile {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            (self.channel_gain, "channel_gain"),
            (self.sensing_rate, "sensing_rate"),
            (self.sense_energy_per_bit, "sense_energy_per_bit"),
            (self.cycle_energy, "cycle_energy"),
            (self.reward_energy_per_bit, "reward_energy_per_bit"),
            (self.cpu_frequency, "cpu_frequency"),
            (self.utility_weight, "utility_weight"),
        ];
        for (v, name) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(format!("{name} must be strictly positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Whether compression is perfectly reversible or trades fidelity for ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompressionMode {
    Lossless,
    Lossy,
}

/// Compression cost/quality law shared by all sensors.
///
/// Compressing one bit at ratio `R` costs `exp(epsilon * R) - exp(epsilon)`
/// CPU cycles. Lossless compression preserves utility exactly; lossy
/// compression delivers `1/sqrt(R)` utility-equivalent raw bits per sensed
/// bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompressionModel {
    pub mode: CompressionMode,
    /// Positive constant of the cycle-cost law, set by the codec family.
    pub epsilon: f64,
    /// Largest ratio the codec can reach (>= 1).
    pub ratio_max: f64,
}

impl CompressionModel {
    pub fn lossless(epsilon: f64, ratio_max: f64) -> Self {
        CompressionModel {
            mode: CompressionMode::Lossless,
            epsilon,
            ratio_max,
        }
    }

    pub fn lossy(epsilon: f64, ratio_max: f64) -> Self {
        CompressionModel {
            mode: CompressionMode::Lossy,
            epsilon,
            ratio_max,
        }
    }

    /// Defaults for the lossless codec family: epsilon 4, max ratio 3.
    pub fn default_lossless() -> Self {
        Self::lossless(4.0, 3.0)
    }

    /// Defaults for the lossy codec family: epsilon 0.1, max ratio 25.
    pub fn default_lossy() -> Self {
        Self::lossy(0.1, 25.0)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(format!("epsilon must be > 0, got {}", self.epsilon));
        }
        if !self.ratio_max.is_finite() || self.ratio_max < 1.0 {
            return Err(format!("ratio_max must be >= 1, got {}", self.ratio_max));
        }
        Ok(())
    }

    /// Utility-equivalent raw bits delivered per sensed bit at ratio `ratio`:
    /// 1 for lossless, `1/sqrt(ratio)` for lossy.
    pub fn quality_factor(&self, ratio: f64) -> f64 {
        match self.mode {
            CompressionMode::Lossless => 1.0,
            CompressionMode::Lossy => 1.0 / ratio.sqrt(),
        }
    }
}

/// CPU cycles needed to compress one bit at ratio `ratio`:
/// `exp(epsilon * ratio) - exp(epsilon)`. Zero exactly at ratio 1.
pub fn compression_cycles(ratio: f64, epsilon: f64) -> Result<f64, ModelError> {
    if ratio < 1.0 {
        return Err(ModelError::RatioBelowOne(ratio));
    }
    let arg = epsilon * ratio;
    if arg > MAX_EXP_ARG {
        return Err(ModelError::ExpOverflow { arg });
    }
    Ok(arg.exp() - epsilon.exp())
}

/// Transmit power needed to sustain rate `rate` (bits/s) over the sensor's
/// unit-gain channel: `N0 * (2^(rate/B) - 1)`. Evaluated in the log domain;
/// saturates to infinity rather than producing NaN for extreme rates.
pub fn power_for_rate(rate: f64, cfg: &OperatorConfig) -> f64 {
    cfg.noise_power * (rate * LN_2 / cfg.bandwidth).exp_m1()
}

/// Derivative of [`power_for_rate`] with respect to the rate:
/// `N0 * ln2 / B * 2^(rate/B)`.
pub fn power_for_rate_slope(rate: f64, cfg: &OperatorConfig) -> f64 {
    cfg.noise_power * LN_2 / cfg.bandwidth * (rate * LN_2 / cfg.bandwidth).exp()
}

/// One sensor's decision variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorPlan {
    /// Wireless power beamed at this sensor, watts.
    pub power: f64,
    /// Raw sensing-data size, bits.
    pub data_size: f64,
    /// Compression ratio, in `[1, ratio_max]`.
    pub ratio: f64,
    /// Transmission duration, seconds.
    pub tx_duration: f64,
}

impl SensorPlan {
    /// The do-nothing plan: no power, no data, ratio 1.
    pub fn zero() -> Self {
        SensorPlan {
            power: 0.0,
            data_size: 0.0,
            ratio: 1.0,
            tx_duration: 0.0,
        }
    }

    /// Time spent sensing: `data_size / sensing_rate`.
    pub fn sense_duration(&self, prof: &SensorProfile) -> f64 {
        self.data_size / prof.sensing_rate
    }

    /// Time spent compressing: `data_size * cycles_per_bit / cpu_frequency`.
    pub fn compress_duration(
        &self,
        prof: &SensorProfile,
        comp: &CompressionModel,
    ) -> Result<f64, ModelError> {
        Ok(self.data_size * compression_cycles(self.ratio, comp.epsilon)? / prof.cpu_frequency)
    }

    /// Size after compression: `data_size / ratio`.
    pub fn compressed_size(&self) -> f64 {
        self.data_size / self.ratio
    }

    /// Transmission rate `compressed_size / tx_duration`, bits/second.
    pub fn tx_rate(&self) -> f64 {
        if self.data_size == 0.0 {
            0.0
        } else {
            self.compressed_size() / self.tx_duration
        }
    }
}

/// Per-plan energy components, joules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// Energy banked as the sensor's participation reward.
    pub reward: f64,
    /// Energy spent sensing.
    pub sensing: f64,
    /// Energy spent compressing.
    pub compression: f64,
    /// Energy spent transmitting.
    pub transmission: f64,
}

impl EnergyBreakdown {
    pub fn total(&self) -> f64 {
        self.reward + self.sensing + self.compression + self.transmission
    }
}

/// Evaluates all four energy components of a plan.
///
/// Transmission energy is `tx_duration / gain * power_for_rate(tx_rate)`,
/// defined as 0 for the empty plan. A plan with data but no transmission
/// time, or whose rate exponent overflows, is reported infeasible.
pub fn plan_energy(
    plan: &SensorPlan,
    prof: &SensorProfile,
    comp: &CompressionModel,
    cfg: &OperatorConfig,
) -> Result<EnergyBreakdown, ModelError> {
    let cycles = compression_cycles(plan.ratio, comp.epsilon)?;
    let reward = prof.reward_energy_per_bit * plan.data_size;
    let sensing = prof.sense_energy_per_bit * plan.data_size;
    let compression = prof.cycle_energy * plan.data_size * cycles;
    let transmission = if plan.data_size == 0.0 {
        0.0
    } else if plan.tx_duration <= 0.0 {
        return Err(ModelError::ZeroDuration {
            data_size: plan.data_size,
        });
    } else {
        let rate = plan.compressed_size() / plan.tx_duration;
        let arg = rate * LN_2 / cfg.bandwidth;
        if arg > MAX_EXP_ARG {
            return Err(ModelError::ExpOverflow { arg });
        }
        plan.tx_duration / prof.channel_gain * power_for_rate(rate, cfg)
    };
    Ok(EnergyBreakdown {
        reward,
        sensing,
        compression,
        transmission,
    })
}

/// The operator's reward: sum of weighted log-utilities minus the energy
/// cost of the radiated power.
///
/// `sum_n a_n * ln(1 + b_n * data_size_n) - c * sum_n power_n * T0`, with
/// the natural logarithm and `b_n` the quality factor at the plan's ratio.
pub fn operator_reward(
    plans: &[SensorPlan],
    profiles: &[SensorProfile],
    comp: &CompressionModel,
    cfg: &OperatorConfig,
) -> f64 {
    let utility: f64 = plans
        .iter()
        .zip(profiles)
        .map(|(plan, prof)| {
            prof.utility_weight * (comp.quality_factor(plan.ratio) * plan.data_size).ln_1p()
        })
        .sum();
    let spent: f64 = plans.iter().map(|p| p.power).sum();
    utility - cfg.cost_weight * spent * cfg.wpt_duration
}

/// A constraint violation found by [`check_feasibility`]. Violations are
/// data, not errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    /// Total beamed power exceeds the budget.
    PowerBudget { total: f64, budget: f64 },
    /// Sensing + compression + transmission exceed the sensing window.
    TimeWindow {
        sensor: usize,
        used: f64,
        window: f64,
    },
    /// A sensor spends more energy than it harvests.
    EnergyBudget {
        sensor: usize,
        used: f64,
        harvested: f64,
    },
    /// The plan could not be evaluated at all.
    Invalid { sensor: usize, reason: String },
}

/// Checks the power, time, and energy constraints of a set of plans within
/// [`FEASIBILITY_TOL`] relative slack. Boundary-tight plans are feasible.
pub fn check_feasibility(
    plans: &[SensorPlan],
    profiles: &[SensorProfile],
    comp: &CompressionModel,
    cfg: &OperatorConfig,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    let total_power: f64 = plans.iter().map(|p| p.power).sum();
    if total_power > cfg.power_budget * (1.0 + FEASIBILITY_TOL) {
        violations.push(Violation::PowerBudget {
            total: total_power,
            budget: cfg.power_budget,
        });
    }
    for (n, (plan, prof)) in plans.iter().zip(profiles).enumerate() {
        let compress_duration = match plan.compress_duration(prof, comp) {
            Ok(d) => d,
            Err(e) => {
                violations.push(Violation::Invalid {
                    sensor: n,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let used_time = plan.sense_duration(prof) + compress_duration + plan.tx_duration;
        if used_time > cfg.sensing_window * (1.0 + FEASIBILITY_TOL) {
            violations.push(Violation::TimeWindow {
                sensor: n,
                used: used_time,
                window: cfg.sensing_window,
            });
        }
        match plan_energy(plan, prof, comp, cfg) {
            Ok(energy) => {
                let harvested =
                    cfg.conversion_efficiency * prof.channel_gain * plan.power * cfg.wpt_duration;
                let used = energy.total();
                if used > harvested + FEASIBILITY_TOL * harvested.max(1e-300) {
                    violations.push(Violation::EnergyBudget {
                        sensor: n,
                        used,
                        harvested,
                    });
                }
            }
            Err(e) => violations.push(Violation::Invalid {
                sensor: n,
                reason: e.to_string(),
            }),
        }
    }
    violations
}

/// A complete multi-sensor operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub plans: Vec<SensorPlan>,
    /// Optimal dual price of the power budget, utility per joule.
    pub dual: f64,
    /// Operator's reward at this point.
    pub reward: f64,
    /// Which sensors participate (positive priority at the dual optimum).
    pub selected: Vec<bool>,
}

impl Solution {
    /// The empty solution for `n` sensors.
    pub fn zero(n: usize) -> Self {
        Solution {
            plans: vec![SensorPlan::zero(); n],
            dual: 0.0,
            reward: 0.0,
            selected: vec![false; n],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn test_profile() -> SensorProfile {
        SensorProfile {
            channel_gain: 1e-5,
            sensing_rate: 1e5,
            sense_energy_per_bit: 5e-12,
            cycle_energy: 5e-14,
            reward_energy_per_bit: 5e-12,
            cpu_frequency: 5e8,
            utility_weight: 0.04,
        }
    }

    fn test_cfg() -> OperatorConfig {
        OperatorConfig {
            bandwidth: 1e4,
            noise_power: 1e-9,
            ..OperatorConfig::default()
        }
    }

    #[test]
    fn cycles_at_ratio_one_is_zero() {
        assert_eq!(compression_cycles(1.0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn cycles_match_direct_evaluation() {
        // independent arithmetic: e^(eps*R) - e^eps
        assert_relative_eq!(
            compression_cycles(2.0, 4.0).unwrap(),
            8.0f64.exp() - 4.0f64.exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            compression_cycles(3.0, 4.0).unwrap(),
            12.0f64.exp() - 4.0f64.exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn cycles_reject_ratio_below_one() {
        assert!(matches!(
            compression_cycles(0.5, 4.0),
            Err(ModelError::RatioBelowOne(_))
        ));
    }

    #[test]
    fn cycles_strictly_increasing() {
        let mut prev = compression_cycles(1.0, 4.0).unwrap();
        for i in 1..=200 {
            let r = 1.0 + i as f64 * 0.01;
            let c = compression_cycles(r, 4.0).unwrap();
            assert!(c > prev, "cycles not increasing at R={r}");
            prev = c;
        }
    }

    #[test]
    fn power_for_rate_anchors() {
        let cfg = test_cfg();
        assert_eq!(power_for_rate(0.0, &cfg), 0.0);
        assert_relative_eq!(
            power_for_rate(cfg.bandwidth, &cfg),
            cfg.noise_power,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            power_for_rate(2.0 * cfg.bandwidth, &cfg),
            3.0 * cfg.noise_power,
            max_relative = 1e-12
        );
    }

    proptest! {
        #[test]
        fn power_for_rate_convex(x1 in 0.0..5e5f64, x2 in 0.0..5e5f64, theta in 0.0..1.0f64) {
            let cfg = test_cfg();
            let mid = power_for_rate(theta * x1 + (1.0 - theta) * x2, &cfg);
            let chord = theta * power_for_rate(x1, &cfg) + (1.0 - theta) * power_for_rate(x2, &cfg);
            prop_assert!(mid <= chord * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn empty_plan_has_zero_energy() {
        let plan = SensorPlan::zero();
        let e = plan_energy(
            &plan,
            &test_profile(),
            &CompressionModel::default_lossless(),
            &test_cfg(),
        )
        .unwrap();
        assert_eq!(e.total(), 0.0);
    }

    #[test]
    fn no_compression_costs_no_cycles() {
        let plan = SensorPlan {
            power: 0.0,
            data_size: 1e4,
            ratio: 1.0,
            tx_duration: 0.5,
        };
        let e = plan_energy(
            &plan,
            &test_profile(),
            &CompressionModel::default_lossless(),
            &test_cfg(),
        )
        .unwrap();
        assert_eq!(e.compression, 0.0);
    }

    #[test]
    fn energy_components_match_independent_evaluation() {
        // Frozen from a single-expression evaluation of each component:
        //   E_r = 5e-12 * 1e4
        //   E_s = 5e-12 * 1e4
        //   E_c = 5e-14 * 1e4 * (e^8 - e^4)
        //   E_t = (0.5 / 1e-5) * 1e-9 * (2^(1e4/(0.5*2)/1e4) - 1)
        let prof = test_profile();
        let cfg = test_cfg();
        let plan = SensorPlan {
            power: 0.0,
            data_size: 1e4,
            ratio: 2.0,
            tx_duration: 0.5,
        };
        let e = plan_energy(&plan, &prof, &CompressionModel::default_lossless(), &cfg).unwrap();
        assert_relative_eq!(e.reward, 5e-8, max_relative = 1e-12);
        assert_relative_eq!(e.sensing, 5e-8, max_relative = 1e-12);
        assert_relative_eq!(
            e.compression,
            5e-14 * 1e4 * (8.0f64.exp() - 4.0f64.exp()),
            max_relative = 1e-12
        );
        assert_relative_eq!(e.transmission, 5e-5, max_relative = 1e-12);
    }

    #[test]
    fn plan_with_data_but_no_time_is_infeasible() {
        let plan = SensorPlan {
            power: 0.0,
            data_size: 100.0,
            ratio: 1.0,
            tx_duration: 0.0,
        };
        assert!(matches!(
            plan_energy(
                &plan,
                &test_profile(),
                &CompressionModel::default_lossless(),
                &test_cfg()
            ),
            Err(ModelError::ZeroDuration { .. })
        ));
    }

    #[test]
    fn reward_anchors() {
        let comp = CompressionModel::default_lossless();
        let cfg = test_cfg();
        let prof = test_profile();

        // all-zero plans
        assert_eq!(
            operator_reward(&[SensorPlan::zero()], &[prof], &comp, &cfg),
            0.0
        );

        // single sensor, a = 0.04, lossless (b = 1), data = e - 1, no power:
        // reward = 0.04 * ln(1 + e - 1) = 0.04
        let plan = SensorPlan {
            power: 0.0,
            data_size: std::f64::consts::E - 1.0,
            ratio: 1.0,
            tx_duration: 0.1,
        };
        assert_relative_eq!(
            operator_reward(&[plan], &[prof], &comp, &cfg),
            0.04,
            max_relative = 1e-12
        );

        // zero cost weight: reward equals the pure utility term
        let free = OperatorConfig {
            cost_weight: 0.0,
            ..cfg
        };
        let powered = SensorPlan { power: 0.2, ..plan };
        assert_relative_eq!(
            operator_reward(&[powered], &[prof], &comp, &free),
            0.04,
            max_relative = 1e-12
        );
    }

    #[test]
    fn lossy_quality_factor() {
        let lossy = CompressionModel::default_lossy();
        assert_eq!(lossy.quality_factor(1.0), 1.0);
        assert_relative_eq!(lossy.quality_factor(25.0), 0.2, max_relative = 1e-15);
        assert_eq!(
            CompressionModel::default_lossless().quality_factor(3.0),
            1.0
        );
    }

    #[test]
    fn zero_plans_are_feasible() {
        let plans = vec![SensorPlan::zero(); 3];
        let profs = vec![test_profile(); 3];
        let v = check_feasibility(
            &plans,
            &profs,
            &CompressionModel::default_lossless(),
            &test_cfg(),
        );
        assert!(v.is_empty(), "violations: {v:?}");
    }

    #[test]
    fn power_overdraw_is_reported() {
        let cfg = test_cfg();
        let plans = vec![SensorPlan {
            power: 1.01 * cfg.power_budget,
            ..SensorPlan::zero()
        }];
        let v = check_feasibility(
            &plans,
            &[test_profile()],
            &CompressionModel::default_lossless(),
            &cfg,
        );
        assert!(v.iter().any(|x| matches!(x, Violation::PowerBudget { .. })));
        // energy budget trips too: the plan spends nothing but harvests; fine.
        assert!(!v.iter().any(|x| matches!(x, Violation::TimeWindow { .. })));
    }

    #[test]
    fn boundary_tight_time_is_feasible() {
        // t_s + t_c + t = T exactly (closed constraint set)
        let prof = test_profile();
        let cfg = test_cfg();
        let comp = CompressionModel::default_lossless();
        let data = 1e4;
        let cycles = compression_cycles(1.5, comp.epsilon).unwrap();
        let tx = cfg.sensing_window - data / prof.sensing_rate - data * cycles / prof.cpu_frequency;
        assert!(tx > 0.0);
        let plan = SensorPlan {
            power: 1.0, // ample harvest so only time matters
            data_size: data,
            ratio: 1.5,
            tx_duration: tx,
        };
        let v = check_feasibility(&plans_of(plan), &[prof], &comp, &cfg);
        assert!(
            !v.iter().any(|x| matches!(x, Violation::TimeWindow { .. })),
            "violations: {v:?}"
        );
    }

    fn plans_of(p: SensorPlan) -> Vec<SensorPlan> {
        vec![p]
    }

    #[test]
    fn tx_energy_jointly_convex_in_data_and_time() {
        // random midpoint checks of (l, t) -> t/g * f(l/(t R))
        let prof = test_profile();
        let cfg = test_cfg();
        let comp = CompressionModel::default_lossless();
        let eval = |l: f64, t: f64| -> f64 {
            let plan = SensorPlan {
                power: 0.0,
                data_size: l,
                ratio: 1.0,
                tx_duration: t,
            };
            plan_energy(&plan, &prof, &comp, &cfg).unwrap().transmission
        };
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let l1 = 1.0 + next() * 5e4;
            let l2 = 1.0 + next() * 5e4;
            let t1 = 0.05 + next() * 0.9;
            let t2 = 0.05 + next() * 0.9;
            let mid = eval(0.5 * (l1 + l2), 0.5 * (t1 + t2));
            let chord = 0.5 * (eval(l1, t1) + eval(l2, t2));
            assert!(
                mid <= chord * (1.0 + 1e-10) + 1e-300,
                "not convex at ({l1},{t1}) ({l2},{t2}): mid {mid} chord {chord}"
            );
        }
    }

    #[test]
    fn reward_concave_in_data_size() {
        let prof = test_profile();
        let cfg = test_cfg();
        let comp = CompressionModel::default_lossless();
        let eval = |l: f64| -> f64 {
            let plan = SensorPlan {
                power: 0.1,
                data_size: l,
                ratio: 1.0,
                tx_duration: 0.3,
            };
            operator_reward(&[plan], &[prof], &comp, &cfg)
        };
        for i in 0..200 {
            let l1 = 1.0 + i as f64 * 37.0;
            let l2 = 5e4 - i as f64 * 151.0;
            let mid = eval(0.5 * (l1 + l2));
            let chord = 0.5 * (eval(l1) + eval(l2));
            assert!(mid >= chord - 1e-12, "not concave at {l1},{l2}");
        }
    }
}
