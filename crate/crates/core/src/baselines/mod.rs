//! Comparison models: an adjusted Vasicek SDE and seasonal ARIMA.

pub mod optim;
pub mod sarima;
mod vasicek;

pub use sarima::{fit_sarima, forecast_sarima, select_sarima_order, OrderGrid, OrderSelection, SarimaModel, SarimaOrder};
pub use vasicek::{estimate_vasicek, simulate_vasicek_path, AdjustedVasicek, VasicekFit, VasicekParams};
