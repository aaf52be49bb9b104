//! Scalar special functions used by the closed-form thresholds and the
//! stationarity equations: the principal branch of the Lambert W function,
//! two slope functions derived from the rate-power curve, and a generic
//! bracketed bisection helper.

use crate::model::OperatorConfig;
use std::f64::consts::{E, LN_2};

/// Input below the principal-branch domain of Lambert W.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("lambert_w0 undefined for x = {x} < -1/e")]
pub struct DomainError {
    pub x: f64,
}

/// Inputs this far below `-1/e` are clamped to the branch point; threshold
/// formulas can graze the branch point through rounding.
const BRANCH_CLAMP: f64 = 1e-12;

/// Principal branch of the Lambert W function: the `w >= -1` solving
/// `w * exp(w) = x`, for `x >= -1/e`.
///
/// Halley iteration from a series/asymptotic initial guess; converges to
/// relative residual below 1e-12 in a handful of steps.
pub fn lambert_w0(x: f64) -> Result<f64, DomainError> {
    let branch = -1.0 / E;
    if x < branch - BRANCH_CLAMP {
        return Err(DomainError { x });
    }
    if x <= branch {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = if x < -0.25 {
        // series around the branch point in p = sqrt(2(ex + 1))
        let p = (2.0 * (E * x + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < E {
        // low-order series near zero, adequate as a Halley seed
        x * (1.0 - x + 1.5 * x * x) / (1.0 + 0.5 * x)
    } else {
        // asymptotic: ln x - ln ln x + ln ln x / ln x
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..50 {
        let ew = w.exp();
        let r = w * ew - x;
        if r.abs() <= 1e-13 * x.abs().max(1.0) {
            break;
        }
        // Halley step for f(w) = w e^w - x
        let denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
        let step = r / denom;
        w -= step;
        if w < -1.0 {
            w = -1.0 + f64::EPSILON;
        }
        if step.abs() <= f64::EPSILON * w.abs().max(1.0) {
            break;
        }
    }
    Ok(w)
}

/// Slope of the transmission energy `t * f(l/t) / g` with respect to the
/// duration `t` at fixed payload, expressed in the rate variable
/// `x = l / t` (and scaled by the gain): `f(x) - x f'(x)`.
///
/// Zero at `x = 0` and strictly negative for `x > 0`: stretching the
/// transmission always saves energy.
pub fn tx_duration_gradient(rate: f64, cfg: &OperatorConfig) -> f64 {
    // factored to avoid inf - inf when the rate exponent saturates
    let m = rate * LN_2 / cfg.bandwidth;
    cfg.noise_power * ((1.0 - m) * m.exp() - 1.0)
}

/// Duration slope of the harvested-energy requirement when the data size
/// rides the time constraint (`l = (T - t) / secs_per_bit`), expressed in
/// the rate variable: `f(x) - (x + 1/(ratio * secs_per_bit)) f'(x)`.
///
/// Equals [`tx_duration_gradient`] minus `f'(x) / (ratio * secs_per_bit)`.
pub fn coupled_duration_gradient(
    rate: f64,
    ratio: f64,
    secs_per_bit: f64,
    cfg: &OperatorConfig,
) -> f64 {
    let m = rate * LN_2 / cfg.bandwidth;
    let shift = LN_2 / (cfg.bandwidth * ratio * secs_per_bit);
    cfg.noise_power * ((1.0 - m - shift) * m.exp() - 1.0)
}

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedRoot {
    pub lo: f64,
    pub hi: f64,
    /// Midpoint of the final bracket.
    pub value: f64,
    /// Function value at `value`.
    pub residual: f64,
    pub iterations: usize,
}

/// Bisects `f` on `[lo, hi]` down to bracket width `x_tol`, assuming
/// `f(lo) <= 0 <= f(hi)` (the caller has established the sign change).
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> BracketedRoot {
    debug_assert!(lo <= hi);
    let mut iterations = 0;
    while hi - lo > x_tol && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket at floating-point resolution
        }
        let fm = f(mid);
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let value = 0.5 * (lo + hi);
    BracketedRoot {
        lo,
        hi,
        value,
        residual: f(value),
        iterations,
    }
}
