//! Shared instance builders for the solver benchmarks.

use wpcs_core::scenario::{generate_scenario, Scenario, ScenarioParams};

/// A reproducible scenario with `n` sensors at the default parameter
/// ranges.
pub fn scenario(n: usize) -> Scenario {
    let params = ScenarioParams {
        n_sensors: n,
        antennas: 4 * n,
        ..ScenarioParams::default()
    };
    generate_scenario(&params, 0xbe7c)
}
