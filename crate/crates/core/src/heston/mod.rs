//! Extended Heston simulation of monthly collision rates.
//!
//! The latent base rate follows an arithmetic random walk whose increments are
//! scaled by the start rate `C1`:
//!
//! ```text
//! dC = -(mu G_t C1 dt + sqrt(v_t) C1 dW^C)
//! dv = kappa (theta - v) dt + xi sqrt(v) dW^v,   corr(dW^C, dW^v) = rho
//! ```
//!
//! Both the base rate and the variance are floored at zero. The reported rate
//! adds a seasonal overlay `C̄ A sin(2 pi f t + phi)` to the base, where `C̄` is
//! the running mean of base values in the current calendar year.

mod ensemble;
mod params;
mod path;
mod scenario;

pub use ensemble::{
    fraction_below, fraction_below_start, percentile, run_ensemble, run_ensemble_serial, ForecastEnsemble,
};
pub use params::{seasonal_factor, ForecastConfig, HestonParams, SeasonalConfig, SeasonalOverlay, DT};
pub use path::{simulate_path, ExtendedHeston, PathModel, SimulationPath};
pub use scenario::{scenario_preset, ScenarioPreset, SCENARIO_START_RATE, SCENARIO_TARGET_MU, SCENARIO_V0};
