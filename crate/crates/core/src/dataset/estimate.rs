use super::seasonal::{default_amplitude_grid, fit_amplitude, yearly_deviations, SeasonalFit};
use super::series::RateSeries;
use super::stats::SeriesStats;
use crate::error::{Error, Result};
use crate::heston::{HestonParams, SeasonalConfig};
use crate::sde::CirParams;

/// Values that replace the data-derived estimates. `kappa` left unset is
/// recomputed from the final `xi` and `theta` at the Feller boundary.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EstimationOverrides {
    pub mu: Option<f64>,
    pub v0: Option<f64>,
    pub theta: Option<f64>,
    pub kappa: Option<f64>,
    pub xi: Option<f64>,
    pub rho: Option<f64>,
    pub c1: Option<f64>,
    pub amplitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedModel {
    pub params: HestonParams,
    pub seasonal: SeasonalConfig,
    pub stats: SeriesStats,
    pub seasonal_fit: SeasonalFit,
}

/// Derives Heston and seasonal parameters from a series of complete years.
///
/// Without overrides: `v0 = theta = annualized_volatility^2`, `xi = vol_of_vol`,
/// `rho = rate_vol_correlation`, `kappa = xi^2 / (2 theta)`, `mu = 0`, and the
/// start rate is the last observation. The simulation starts the month after
/// the series ends.
pub fn estimate_heston_params(series: &RateSeries, overrides: &EstimationOverrides) -> Result<EstimatedModel> {
    series.require_complete_years(3)?;
    let stats = SeriesStats::compute(series)?;
    let seasonal_fit = fit_amplitude(&yearly_deviations(series)?, &default_amplitude_grid())?;

    let v0 = overrides.v0.unwrap_or(stats.annualized_volatility.powi(2));
    let theta = overrides.theta.unwrap_or(v0);
    let xi = overrides.xi.unwrap_or(stats.vol_of_vol);
    let kappa = match overrides.kappa {
        Some(k) => k,
        None if theta > 0.0 => CirParams::feller_minimum_kappa(xi, theta),
        None => return Err(Error::Domain("theta must be positive to derive kappa".into())),
    };
    let cir = CirParams { kappa, theta, xi, v0 };
    let bound = 2.0 * kappa * theta;
    if xi * xi > bound * (1.0 + 1e-12) {
        return Err(Error::FellerViolation { xi_sq: xi * xi, bound });
    }

    let last = series.last_period().ok_or_else(|| Error::Structure("empty series".into()))?;
    let c1 = overrides.c1.unwrap_or(series.rates()[series.len() - 1]);
    let params = HestonParams {
        mu: overrides.mu.unwrap_or(0.0),
        cir,
        rho: overrides.rho.unwrap_or(stats.rate_vol_correlation),
        c1,
    };
    params.validate()?;
    let seasonal = SeasonalConfig {
        amplitude: overrides.amplitude.unwrap_or(seasonal_fit.amplitude),
        frequency: seasonal_fit.frequency,
        phase: seasonal_fit.phase,
        start_month: last.succ().month,
    };
    seasonal.validate()?;
    Ok(EstimatedModel { params, seasonal, stats, seasonal_fit })
}
