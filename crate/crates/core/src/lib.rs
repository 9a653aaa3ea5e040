//! Stochastic-volatility forecasting of monthly road-collision rates.
//!
//! The crate is organised the same way a run flows:
//!
//! * [`dataset`] ingests monthly collision counts and derives the statistics
//!   that parameterise the models (volatility, vol-of-vol, rate/volatility
//!   correlation, seasonal amplitude).
//! * [`sde`] holds the seedable random streams and the stochastic building
//!   blocks: correlated normals, the full-truncation CIR step and the
//!   Gompertz-triggered accelerated-reduction shocks.
//! * [`heston`] simulates the extended Heston collision-rate model and
//!   aggregates ensembles into percentile forecasts and scenario presets.
//! * [`baselines`] implements the comparison models: an adjusted Vasicek
//!   process and SARIMA fitted by maximum likelihood.
//! * [`evaluation`] computes error metrics and runs out-of-sample backtests.

pub mod baselines;
pub mod calendar;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod heston;
pub mod sde;

pub use calendar::YearMonth;
pub use error::{Error, Result};
