//! Error metrics, backtests and model comparison.

mod backtest;
mod metrics;

pub use backtest::{backtest, compare_models, BacktestModel, BacktestSpec, Comparison, ErrorReport, Window, YearRow};
pub use metrics::{error_metrics, ErrorMetrics};
