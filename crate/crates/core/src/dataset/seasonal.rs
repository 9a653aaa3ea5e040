use std::f64::consts::PI;

use super::series::RateSeries;
use crate::error::{Error, Result};
use crate::heston::seasonal_factor;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonthlyDeviation {
    pub year: i32,
    pub month: u32,
    /// `rate / yearly_mean - 1`
    pub deviation: f64,
}

/// Each month's rate relative to its calendar-year mean.
pub fn yearly_deviations(series: &RateSeries) -> Result<Vec<MonthlyDeviation>> {
    series.require_complete_years(1)?;
    let mut out = Vec::with_capacity(series.len());
    for (obs, rates) in series.observations().chunks(12).zip(series.rates().chunks(12)) {
        let mean = rates.iter().sum::<f64>() / 12.0;
        out.extend(obs.iter().zip(rates).map(|(o, r)| MonthlyDeviation {
            year: o.year,
            month: o.month,
            deviation: r / mean - 1.0,
        }));
    }
    Ok(out)
}

/// Result of a grid search for the seasonal amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SeasonalFit {
    pub amplitude: f64,
    /// Cycles per year; fixed at 1.
    pub frequency: f64,
    /// Radians; fixed at pi so the cycle starts half-way through.
    pub phase: f64,
    /// `(candidate amplitude, mean absolute error)` in grid order.
    pub error_by_amplitude: Vec<(f64, f64)>,
}

impl SeasonalFit {
    pub fn error_at_optimum(&self) -> f64 {
        self.error_by_amplitude
            .iter()
            .find(|(a, _)| *a == self.amplitude)
            .map(|&(_, e)| e)
            .unwrap_or(f64::NAN)
    }
}

/// Amplitudes 0% to 15% in 0.5% steps.
pub fn default_amplitude_grid() -> Vec<f64> {
    (0..=30).map(|i| i as f64 * 0.005).collect()
}

/// Picks the amplitude minimising the mean absolute error between the
/// deviations and `A sin(2 pi (m - 1) / 12 + pi)`. Ties go to the smaller
/// amplitude.
pub fn fit_amplitude(deviations: &[MonthlyDeviation], grid: &[f64]) -> Result<SeasonalFit> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("amplitude grid is empty".into()));
    }
    if deviations.is_empty() {
        return Err(Error::InvalidArgument("no deviations to fit".into()));
    }
    let n = deviations.len() as f64;
    let error_by_amplitude: Vec<(f64, f64)> = grid
        .iter()
        .map(|&a| {
            let mae = deviations
                .iter()
                .map(|d| (d.deviation - seasonal_factor(a, 1.0, PI, d.month)).abs())
                .sum::<f64>()
                / n;
            (a, mae)
        })
        .collect();

    let mut best = error_by_amplitude[0];
    for &(a, e) in &error_by_amplitude[1..] {
        if e < best.1 || (e == best.1 && a < best.0) {
            best = (a, e);
        }
    }
    Ok(SeasonalFit { amplitude: best.0, frequency: 1.0, phase: PI, error_by_amplitude })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ireland_2009_2013, ireland_2014_2018};

    #[test]
    fn published_deviations() {
        let dev = yearly_deviations(&ireland_2014_2018()).unwrap();
        let apr_2017 = dev.iter().find(|d| d.year == 2017 && d.month == 4).unwrap();
        assert_eq!(format!("{:.2}", apr_2017.deviation * 100.0), "-15.09");
        let nov_2014 = dev.iter().find(|d| d.year == 2014 && d.month == 11).unwrap();
        assert_eq!(format!("{:.2}", nov_2014.deviation * 100.0), "15.95");
    }

    #[test]
    fn deviations_centre_on_zero_each_year() {
        let dev = yearly_deviations(&ireland_2009_2013()).unwrap();
        for year in dev.chunks(12) {
            assert!(year.iter().map(|d| d.deviation).sum::<f64>().abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_minimisers() {
        let grid = default_amplitude_grid();
        let a = fit_amplitude(&yearly_deviations(&ireland_2014_2018()).unwrap(), &grid).unwrap();
        assert!((a.amplitude - 0.075).abs() < 1e-12, "{}", a.amplitude);
        let b = fit_amplitude(&yearly_deviations(&ireland_2009_2013()).unwrap(), &grid).unwrap();
        assert!((b.amplitude - 0.09).abs() < 1e-12, "{}", b.amplitude);
    }

    #[test]
    fn exact_sinusoid_is_recovered() {
        let dev: Vec<MonthlyDeviation> = (1..=24)
            .map(|i| {
                let month = (i - 1) % 12 + 1;
                MonthlyDeviation { year: 2000, month, deviation: seasonal_factor(0.05, 1.0, PI, month) }
            })
            .collect();
        let fit = fit_amplitude(&dev, &default_amplitude_grid()).unwrap();
        assert!((fit.amplitude - 0.05).abs() < 1e-12);
        assert!(fit.error_at_optimum() < 1e-15);
    }

    #[test]
    fn ties_go_to_smaller_amplitude() {
        // zero deviations at the zero crossings: every amplitude scores 0
        let dev = [MonthlyDeviation { year: 2000, month: 1, deviation: 0.0 }];
        let fit = fit_amplitude(&dev, &[0.02, 0.01, 0.03]).unwrap();
        assert_eq!(fit.amplitude, 0.01);
    }

    #[test]
    fn empty_grid_rejected() {
        let dev = [MonthlyDeviation { year: 2000, month: 1, deviation: 0.0 }];
        assert!(fit_amplitude(&dev, &[]).is_err());
    }
}
