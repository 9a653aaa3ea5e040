use crate::dataset::EstimationOverrides;
use crate::error::{Error, Result};
use crate::sde::GompertzShockConfig;

/// Initial variance shared by every long-term scenario.
pub const SCENARIO_V0: f64 = 0.073;
/// December 2018 collision rate; the start of every long-term scenario.
pub const SCENARIO_START_RATE: f64 = 0.00159;
/// Annual reduction target applied by the even-numbered scenarios.
pub const SCENARIO_TARGET_MU: f64 = 0.0183;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPreset {
    pub id: u8,
    pub label: String,
    pub overrides: EstimationOverrides,
    pub shock: GompertzShockConfig,
}

/// The six long-term scenarios: odd ids have no reduction target, even ids
/// target 1.83% a year; ids 1-2 keep the long-run variance at its start
/// value without shocks, 3-4 double it and 5-6 halve it, both with shocks.
pub fn scenario_preset(id: u8) -> Result<ScenarioPreset> {
    let (theta, shocks, label) = match id {
        1 => (SCENARIO_V0, false, "Baseline"),
        2 => (SCENARIO_V0, false, "Reduction target"),
        3 => (2.0 * SCENARIO_V0, true, "Rising variance with safety shocks"),
        4 => (2.0 * SCENARIO_V0, true, "Rising variance, reduction target and safety shocks"),
        5 => (0.5 * SCENARIO_V0, true, "Falling variance with safety shocks"),
        6 => (0.5 * SCENARIO_V0, true, "Falling variance, reduction target and safety shocks"),
        _ => return Err(Error::InvalidArgument(format!("unknown scenario {id}; expected 1-6"))),
    };
    let mu = if id % 2 == 0 { SCENARIO_TARGET_MU } else { 0.0 };
    Ok(ScenarioPreset {
        id,
        label: format!("Scenario {id}: {label}"),
        overrides: EstimationOverrides {
            mu: Some(mu),
            v0: Some(SCENARIO_V0),
            theta: Some(theta),
            c1: Some(SCENARIO_START_RATE),
            ..Default::default()
        },
        shock: if shocks { GompertzShockConfig::default() } else { GompertzShockConfig::disabled() },
    })
}
