//! Solvers and a simulation harness for multiuser wirelessly powered crowd
//! sensing (WPCS).
//!
//! An operator-controlled access point beams power to a set of battery-free
//! mobile sensors; each sensor spends its harvested energy on sensing,
//! optional data compression, and transmission of the (compressed) data back
//! to the access point. The operator's reward is the sum of logarithmic data
//! utilities minus the energy cost of the wireless power it radiates.
//!
//! The crate jointly optimizes, per sensor, the wireless-power allocation,
//! the sensing-data size, the compression ratio, and the transmission
//! duration, for both lossless and lossy compression:
//!
//! * [`model`]: physical formulas (energies, rates, reward) and feasibility
//!   checking; every other module computes through these definitions.
//! * [`special`]: scalar special functions: principal-branch Lambert W and
//!   the slope functions used by the closed-form threshold expressions.
//! * [`allocation`]: the fixed-compression-ratio subproblem: optimal
//!   transmission durations, power allocation, and data sizes via KKT
//!   conditions and dual bisection.
//! * [`compression`]: the fixed-data subproblem: optimal compression ratios
//!   and transmission durations via monotone stationarity-root bisection,
//!   lossless and lossy.
//! * [`joint`]: the alternating optimizer that ties the two subproblems
//!   together and records iteration traces.
//! * [`oracle`]: independent brute-force grid searches used to validate
//!   solver outputs on small instances.
//! * [`scenario`]: randomized multi-sensor scenario generation, baseline
//!   policies, experiment sweeps, and CSV/JSON export.

pub mod allocation;
pub mod compression;
pub mod joint;
pub mod model;
pub mod oracle;
pub mod scenario;
pub mod special;

pub use allocation::{DualState, FixedRatioInstance, FixedRatioSolution};
pub use compression::{CompressThreshold, LosslessCompressionProblem, LossyCompressionProblem};
pub use joint::{IterationTrace, JointSolution, SolverSettings};
pub use model::{
    CompressionMode, CompressionModel, EnergyBreakdown, ModelError, OperatorConfig, SensorPlan,
    SensorProfile, Solution, Violation,
};
pub use oracle::GridSpec;
pub use scenario::{Policy, PolicyRun, Scenario, ScenarioParams, SweepAxis, SweepTable};

/// Errors produced by the solver modules.
#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    /// A model-level evaluation failed (overflow, invalid plan, ...).
    #[error(transparent)]
    Model(#[from] model::ModelError),
    /// The requested data size cannot fit in the crowd-sensing window even
    /// without compression.
    #[error("data size {data_size} bits cannot fit in the sensing window")]
    TimeInfeasible { data_size: f64 },
    /// A compression ratio left no time for transmission.
    #[error("ratio {ratio} leaves no transmission time")]
    RatioInfeasible { ratio: f64 },
    /// A quantity the bisection relies on to be monotone was observed
    /// non-monotone; reported instead of silently returning a wrong root.
    #[error("monotonicity violated in {context}: f({lo}) = {f_lo} > f({hi}) = {f_hi}")]
    Monotonicity {
        context: &'static str,
        lo: f64,
        f_lo: f64,
        hi: f64,
        f_hi: f64,
    },
    /// The closed-form approximation is outside its validity domain.
    #[error("approximation unavailable: {reason}")]
    ApproxUnavailable { reason: &'static str },
    /// Lambert W was evaluated below the principal-branch domain.
    #[error(transparent)]
    Domain(#[from] special::DomainError),
}
