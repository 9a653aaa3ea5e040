use crate::dataset::RateSeries;
use crate::error::{Error, Result};
use crate::heston::{ForecastConfig, PathModel, SeasonalConfig, SeasonalOverlay, SimulationPath, DT};
use crate::sde::{shock_step, GompertzShockConfig, RngStream, ShockState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VasicekParams {
    /// Mean-reversion speed, per year.
    pub kappa: f64,
    /// Long-run rate level.
    pub theta: f64,
    /// Absolute volatility per square-root year.
    pub sigma: f64,
    pub c1: f64,
}

impl VasicekParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(Error::InvalidArgument(format!("start rate must be positive, got {}", self.c1)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if !(self.kappa.is_finite() && self.theta.is_finite()) {
            return Err(Error::InvalidArgument("kappa and theta must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VasicekFit {
    /// `c1` is the last observed rate.
    pub params: VasicekParams,
    /// Monthly regression slope of `r_t - r_{t-1}` on `theta - r_{t-1}`.
    pub monthly_slope: f64,
    /// Set when the regressor has zero variance; `kappa` is then reported as 0.
    pub degenerate: bool,
    pub n_changes: usize,
}

/// `theta` is the sample mean; `kappa` is twelve times the least-squares
/// slope of monthly changes on `theta - r_{t-1}`; `sigma` is the standard
/// deviation of monthly changes times `sqrt(12)`.
pub fn estimate_vasicek(series: &RateSeries) -> Result<VasicekFit> {
    if series.len() < 24 {
        return Err(Error::Structure(format!("Vasicek estimation needs at least 24 months, have {}", series.len())));
    }
    let r = series.rates();
    let theta = r.iter().sum::<f64>() / r.len() as f64;
    let changes: Vec<f64> = r.windows(2).map(|w| w[1] - w[0]).collect();
    let gaps: Vec<f64> = r[..r.len() - 1].iter().map(|x| theta - x).collect();

    let sxx: f64 = gaps.iter().map(|x| x * x).sum();
    let sxy: f64 = gaps.iter().zip(&changes).map(|(x, y)| x * y).sum();
    let degenerate = sxx <= f64::EPSILON * theta * theta * gaps.len() as f64;
    let monthly_slope = if degenerate { 0.0 } else { sxy / sxx };

    let n = changes.len() as f64;
    let mean_change = changes.iter().sum::<f64>() / n;
    let var = changes.iter().map(|c| (c - mean_change).powi(2)).sum::<f64>() / (n - 1.0);

    Ok(VasicekFit {
        params: VasicekParams {
            kappa: monthly_slope * 12.0,
            theta,
            sigma: var.sqrt() * 12f64.sqrt(),
            c1: r[r.len() - 1],
        },
        monthly_slope,
        degenerate,
        n_changes: changes.len(),
    })
}

/// Vasicek rate with the drift fixed by the start rate, plus the same shock
/// multiplier and seasonal overlay as the Heston model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjustedVasicek {
    pub params: VasicekParams,
    pub seasonal: SeasonalConfig,
    pub shock: GompertzShockConfig,
}

impl PathModel for AdjustedVasicek {
    fn start_rate(&self) -> f64 {
        self.params.c1
    }

    fn start_month(&self) -> u32 {
        self.seasonal.start_month
    }

    fn simulate(&self, rng: &mut RngStream, horizon_months: usize) -> SimulationPath {
        let VasicekParams { kappa, theta, sigma, c1 } = self.params;
        let sqrt_dt = DT.sqrt();
        let mut path = SimulationPath::with_capacity(horizon_months);
        let mut overlay = SeasonalOverlay::new(self.seasonal);
        let mut shock = ShockState::IDLE;
        let mut base = c1;

        for t in 0..horizon_months {
            let z = rng.normal();
            let (next_shock, g) = shock_step(shock, t as u32, rng, &self.shock);
            shock = next_shock;

            base = (base - g * kappa * (theta - c1) * DT - sigma * sqrt_dt * z).max(0.0);

            path.base.push(base);
            path.adjusted.push(overlay.apply(base));
            path.variances.push(sigma * sigma);
            path.multipliers.push(g);
        }
        path
    }
}

pub fn simulate_vasicek_path(
    params: &VasicekParams,
    seasonal: &SeasonalConfig,
    shock: &GompertzShockConfig,
    rng: &mut RngStream,
    config: &ForecastConfig,
) -> SimulationPath {
    AdjustedVasicek { params: *params, seasonal: *seasonal, shock: *shock }.simulate(rng, config.horizon_months)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ireland_2009_2013, MonthlyObservation};

    fn series_from(rates: &[f64]) -> RateSeries {
        let obs = rates
            .iter()
            .enumerate()
            .map(|(i, r)| MonthlyObservation {
                year: 2000 + (i / 12) as i32,
                month: (i % 12) as u32 + 1,
                collisions: (r * 1e9).round() as u64,
                registered_vehicles: 1_000_000_000,
            })
            .collect();
        RateSeries::new(obs).unwrap()
    }

    fn flat(kappa: f64, theta: f64) -> AdjustedVasicek {
        AdjustedVasicek {
            params: VasicekParams { kappa, theta, sigma: 0.0, c1: 0.001 },
            seasonal: SeasonalConfig::default(),
            shock: GompertzShockConfig::disabled(),
        }
    }

    #[test]
    fn constant_series_is_degenerate() {
        let fit = estimate_vasicek(&series_from(&[0.001; 36])).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.params.kappa, 0.0);
        assert_eq!(fit.params.sigma, 0.0);
        assert!((fit.params.theta - 0.001).abs() < 1e-15);
    }

    #[test]
    fn short_series_rejected() {
        assert!(matches!(estimate_vasicek(&series_from(&[0.001; 23])), Err(Error::Structure(_))));
    }

    #[test]
    fn older_series_estimates() {
        let fit = estimate_vasicek(&ireland_2009_2013()).unwrap();
        let p = fit.params;
        assert!((p.theta - 0.000913).abs() < 0.000001, "{p:?}");
        assert!((fit.monthly_slope - 0.691).abs() < 0.001, "{fit:?}");
        assert!((p.sigma - 0.000373).abs() < 0.000001, "{p:?}");
    }

    #[test]
    fn anchored_theta_gives_constant_path() {
        let path = flat(0.5, 0.001).simulate(&mut RngStream::new(1, 0), 24);
        assert!(path.adjusted.iter().all(|&x| (x - 0.001).abs() < 1e-18));
    }

    #[test]
    fn constant_drift_halves_rate_in_a_year() {
        let path = flat(0.5, 0.002).simulate(&mut RngStream::new(1, 0), 12);
        assert!((path.base[11] - 0.0005).abs() < 1e-15, "{}", path.base[11]);
    }

    #[test]
    fn paths_are_floored() {
        let m = AdjustedVasicek {
            params: VasicekParams { kappa: 0.0, theta: 0.001, sigma: 0.01, c1: 0.001 },
            seasonal: SeasonalConfig::with_amplitude(0.1, 1),
            shock: GompertzShockConfig::default(),
        };
        let path = m.simulate(&mut RngStream::new(3, 0), 240);
        assert!(path.adjusted.iter().chain(&path.base).all(|&x| x >= 0.0));
        assert!(path.base.iter().any(|&x| x == 0.0));
    }
}
