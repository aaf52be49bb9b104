//! The fixed-data subproblem: given what a sensor must deliver, choose the
//! compression ratio and transmission duration that minimize its total
//! energy draw.
//!
//! For lossless compression the sensing-data size is fixed; for lossy
//! compression the *delivered utility* is fixed and the raw size scales with
//! the square root of the ratio. Both cases reduce to a single monotone
//! stationarity function of the ratio whose root is bisected, with the time
//! constraint always tight at the optimum (idle time could otherwise be
//! spent transmitting slower, which always saves energy).

use crate::model::{compression_cycles, CompressionModel, OperatorConfig, SensorProfile};
use crate::special::{bisect, lambert_w0};
use crate::SolverError;
use std::f64::consts::LN_2;

/// Outcome of the closed-form compress-or-not threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompressThreshold {
    /// Data-size threshold in bits.
    Defined(f64),
    /// The Lambert argument fell below the principal branch; the closed
    /// form does not apply and callers should inspect the stationarity sign
    /// directly.
    Undefined,
}

/// Closed-form data-size threshold for the compress-or-not decision of a
/// lossless sensor, `T / theta_hat` with
///
/// `theta_hat = ln2 / (B * (W0(-(q_c g f / N0 + 1) e^{-v}) + v + 1)) + 1/s`,
/// `v = f ln2 / (B eps e^eps) + 1`.
///
/// Undefined when the Lambert argument escapes the principal branch.
///
/// Empirically (and by the stationarity sign at ratio 1) the solver
/// compresses *below* this size and stops compressing above it, where
/// transmission time is too scarce to spend on compression cycles; see the
/// sign cross-check tests.
pub fn compress_threshold(
    prof: &SensorProfile,
    comp: &CompressionModel,
    cfg: &OperatorConfig,
) -> CompressThreshold {
    let eps = comp.epsilon;
    let v = prof.cpu_frequency * LN_2 / (cfg.bandwidth * eps * eps.exp()) + 1.0;
    let scale = prof.cycle_energy * prof.channel_gain * prof.cpu_frequency / cfg.noise_power;
    let arg = -(scale + 1.0) * (-v).exp();
    match lambert_w0(arg) {
        Err(_) => CompressThreshold::Undefined,
        Ok(w) => {
            let theta = LN_2 / (cfg.bandwidth * (w + v + 1.0)) + 1.0 / prof.sensing_rate;
            CompressThreshold::Defined(cfg.sensing_window / theta)
        }
    }
}

/// Energy-minimization problem of one lossless sensor at fixed data size.
#[derive(Debug, Clone)]
pub struct LosslessCompressionProblem {
    pub profile: SensorProfile,
    /// Sensing-data size, bits.
    pub data_size: f64,
    pub comp: CompressionModel,
    pub cfg: OperatorConfig,
}

impl LosslessCompressionProblem {
    /// Transmission time left per bit after sensing and compressing at
    /// `ratio`: `T/l - 1/s - C(ratio)/f`. Must be positive for the ratio to
    /// be feasible.
    pub fn time_slack_per_bit(&self, ratio: f64) -> Result<f64, SolverError> {
        let cycles = compression_cycles(ratio, self.comp.epsilon)?;
        Ok(self.cfg.sensing_window / self.data_size
            - 1.0 / self.profile.sensing_rate
            - cycles / self.profile.cpu_frequency)
    }

    /// Stationarity of the sensor's energy with respect to the ratio, up to
    /// a positive factor. Strictly increasing on the feasible interval; a
    /// negative value at ratio 1 means compressing pays, a positive value
    /// at the feasible maximum means compressing harder pays.
    ///
    /// Only the sign and the root carry meaning; the units are mixed.
    pub fn stationarity(&self, ratio: f64) -> Result<f64, SolverError> {
        let d = self.time_slack_per_bit(ratio)?;
        if d <= 0.0 {
            return Err(SolverError::RatioInfeasible { ratio });
        }
        let prof = &self.profile;
        let cfg = &self.cfg;
        let g = prof.channel_gain;
        let eps = self.comp.epsilon;
        let rate = 1.0 / (d * ratio);
        let m = rate * LN_2 / cfg.bandwidth;
        let growth = eps * (eps * ratio).exp();
        // factored form: base + w * coef with w = 2^(rate/B), so the
        // saturated-rate limit is a clean +inf instead of inf - inf
        let base = prof.cycle_energy * growth + cfg.noise_power * growth / (g * prof.cpu_frequency);
        let coef = cfg.noise_power
            * ((m - 1.0) * growth / (g * prof.cpu_frequency)
                - LN_2 / (cfg.bandwidth * g * ratio * ratio));
        let w = m.exp();
        if w.is_infinite() {
            return Ok(if coef > 0.0 {
                f64::INFINITY
            } else if coef < 0.0 {
                f64::NEG_INFINITY
            } else {
                base
            });
        }
        Ok(base + coef * w)
    }

    /// Per-sensor energy draw at `(ratio, tx_duration)`, through the same
    /// per-bit expressions the stationarity differentiates.
    pub fn energy(&self, ratio: f64, tx_duration: f64) -> Result<f64, SolverError> {
        let prof = &self.profile;
        let cycles = compression_cycles(ratio, self.comp.epsilon)?;
        let per_bit =
            prof.reward_energy_per_bit + prof.sense_energy_per_bit + prof.cycle_energy * cycles;
        let rate = self.data_size / (tx_duration * ratio);
        Ok(per_bit * self.data_size
            + tx_duration / prof.channel_gain
                * self.cfg.noise_power
                * (rate * LN_2 / self.cfg.bandwidth).exp_m1())
    }
}

/// Largest ratio with positive transmission-time slack, found by bisection
/// when the nominal maximum is time-infeasible. Evaluation errors (cycle
/// counts overflowing at extreme ratios) count as infeasible.
fn feasible_ratio_ceiling<D: Fn(f64) -> Result<f64, SolverError>>(slack: D, ratio_max: f64) -> f64 {
    let feasible = |r: f64| matches!(slack(r), Ok(s) if s > 0.0);
    if feasible(ratio_max) {
        return ratio_max;
    }
    let mut lo = 1.0;
    let mut hi = ratio_max;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Solves the lossless subproblem: the optimal `(ratio, tx_duration)`.
///
/// The stationarity root is clamped to `[1, ratio_max]` (restricted to the
/// sub-interval with positive time slack), and the duration fills whatever
/// the window leaves: `t = T - l/s - l C(ratio)/f`.
pub fn solve_lossless(
    prob: &LosslessCompressionProblem,
    xi: f64,
) -> Result<(f64, f64), SolverError> {
    if prob.data_size <= 0.0 || prob.time_slack_per_bit(1.0)? <= 0.0 {
        return Err(SolverError::TimeInfeasible {
            data_size: prob.data_size,
        });
    }
    let ratio = if prob.stationarity(1.0)? >= 0.0 {
        1.0
    } else {
        let ceiling = feasible_ratio_ceiling(|r| prob.time_slack_per_bit(r), prob.comp.ratio_max);
        if prob.stationarity(ceiling)? <= 0.0 {
            ceiling
        } else {
            bisect(
                |r| prob.stationarity(r).unwrap_or(f64::INFINITY),
                1.0,
                ceiling,
                xi * 1e-3,
                200,
            )
            .value
        }
    };
    let tx = prob.data_size * prob.time_slack_per_bit(ratio)?;
    Ok((ratio, tx))
}

/// Energy-minimization problem of one lossy sensor at fixed delivered
/// utility (`u` utility-equivalent raw bits); the raw size is
/// `u * sqrt(ratio)`.
#[derive(Debug, Clone)]
pub struct LossyCompressionProblem {
    pub profile: SensorProfile,
    /// Delivered data utility, utility-equivalent raw bits.
    pub data_utility: f64,
    pub comp: CompressionModel,
    pub cfg: OperatorConfig,
}

impl LossyCompressionProblem {
    /// Per-raw-bit sensing + compression time at square-root ratio `r`.
    fn time_per_bit(&self, r: f64) -> f64 {
        let eps = self.comp.epsilon;
        let cycles = (eps * r * r).exp() - eps.exp();
        1.0 / self.profile.sensing_rate + cycles / self.profile.cpu_frequency
    }

    /// Transmission time left per utility bit at square-root ratio `r`:
    /// `T/u - r * (1/s + C(r^2)/f)`.
    pub fn time_slack_per_bit(&self, r: f64) -> f64 {
        self.cfg.sensing_window / self.data_utility - r * self.time_per_bit(r)
    }

    /// Stationarity of the sensor's energy with respect to the square-root
    /// ratio `r`; strictly increasing on the feasible interval. Mixed
    /// units; only the sign and root are meaningful.
    pub fn stationarity(&self, r: f64) -> Result<f64, SolverError> {
        let d = self.time_slack_per_bit(r);
        if d <= 0.0 {
            return Err(SolverError::RatioInfeasible { ratio: r * r });
        }
        let prof = &self.profile;
        let cfg = &self.cfg;
        let g = prof.channel_gain;
        let eps = self.comp.epsilon;
        let e_r2 = (eps * r * r).exp();
        let cycles = e_r2 - eps.exp();
        let per_bit_energy =
            prof.reward_energy_per_bit + prof.sense_energy_per_bit + prof.cycle_energy * cycles;
        let per_bit_energy_slope = 2.0 * prof.cycle_energy * eps * r * e_r2;
        let per_bit_time = self.time_per_bit(r);
        let per_bit_time_slope = 2.0 * eps * r * e_r2 / prof.cpu_frequency;
        let stretched_time = per_bit_time + r * per_bit_time_slope;
        let rate = 1.0 / (d * r);
        let m = rate * LN_2 / cfg.bandwidth;
        let base = r * per_bit_energy_slope + per_bit_energy + cfg.noise_power * stretched_time / g;
        let coef = -cfg.noise_power
            * (LN_2 / (cfg.bandwidth * g * r * r) + (1.0 - m) * stretched_time / g);
        let w = m.exp();
        if w.is_infinite() {
            return Ok(if coef > 0.0 {
                f64::INFINITY
            } else if coef < 0.0 {
                f64::NEG_INFINITY
            } else {
                base
            });
        }
        Ok(base + coef * w)
    }

    /// Per-sensor energy draw at square-root ratio `r` and duration `t`.
    pub fn energy(&self, r: f64, tx_duration: f64) -> f64 {
        let prof = &self.profile;
        let eps = self.comp.epsilon;
        let cycles = (eps * r * r).exp() - eps.exp();
        let per_bit =
            prof.reward_energy_per_bit + prof.sense_energy_per_bit + prof.cycle_energy * cycles;
        let raw = self.data_utility * r;
        let rate = self.data_utility / (tx_duration * r);
        per_bit * raw
            + tx_duration / prof.channel_gain
                * self.cfg.noise_power
                * (rate * LN_2 / self.cfg.bandwidth).exp_m1()
    }
}

/// Solves the lossy subproblem: optimal `(ratio, raw_size, tx_duration)`
/// delivering the required utility exactly.
pub fn solve_lossy(
    prob: &LossyCompressionProblem,
    xi: f64,
) -> Result<(f64, f64, f64), SolverError> {
    if prob.data_utility <= 0.0 || prob.time_slack_per_bit(1.0) <= 0.0 {
        return Err(SolverError::TimeInfeasible {
            data_size: prob.data_utility,
        });
    }
    let r_max = prob.comp.ratio_max.sqrt();
    let r = if prob.stationarity(1.0)? >= 0.0 {
        1.0
    } else {
        let ceiling = feasible_ratio_ceiling(|r| Ok(prob.time_slack_per_bit(r)), r_max);
        if prob.stationarity(ceiling)? <= 0.0 {
            ceiling
        } else {
            bisect(
                |r| prob.stationarity(r).unwrap_or(f64::INFINITY),
                1.0,
                ceiling,
                xi * 1e-3,
                200,
            )
            .value
        }
    };
    let raw = prob.data_utility * r;
    let tx = prob.data_utility * prob.time_slack_per_bit(r);
    Ok((r * r, raw, tx))
}
