//! Monthly collision data and the statistics derived from it.

mod bundled;
mod estimate;
mod seasonal;
mod series;
mod stats;

pub use bundled::{ireland_2009_2013, ireland_2014_2018, IRELAND_2009_2013_CSV, IRELAND_2014_2018_CSV};
pub use estimate::{estimate_heston_params, EstimatedModel, EstimationOverrides};
pub use seasonal::{default_amplitude_grid, fit_amplitude, yearly_deviations, MonthlyDeviation, SeasonalFit};
pub use series::{load_series, MonthlyObservation, RateSeries};
pub use stats::{
    annualized_volatility, log_differences, rate_vol_correlation, sample_std, vol_of_vol,
    yearly_volatilities, SeriesStats, YearlyVolatility,
};
