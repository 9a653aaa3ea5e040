use super::series::RateSeries;
use crate::error::{Error, Result};

const MONTHS_PER_YEAR: f64 = 12.0;

/// `ln(rate[i+1] / rate[i])` for consecutive months.
pub fn log_differences(rates: &[f64]) -> Result<Vec<f64>> {
    if rates.len() < 2 {
        return Err(Error::InvalidArgument("log-differences need at least 2 rates".into()));
    }
    if let Some(i) = rates.iter().position(|&r| r <= 0.0 || !r.is_finite()) {
        return Err(Error::Domain(format!("rate[{i}] = {} has no logarithm", rates[i])));
    }
    Ok(rates.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

/// Sample standard deviation with the n-1 denominator.
pub fn sample_std(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "sample standard deviation needs at least 2 values, got {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    Ok((ss / (n - 1.0)).sqrt())
}

/// Sample standard deviation of monthly log-differences scaled by sqrt(12).
pub fn annualized_volatility(logdiffs: &[f64]) -> Result<f64> {
    Ok(sample_std(logdiffs)? * MONTHS_PER_YEAR.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearlyVolatility {
    pub year: i32,
    pub mean_rate: f64,
    /// Annualised volatility of the log-differences ending in this year.
    pub volatility: f64,
}

/// Per-calendar-year volatilities and mean rates.
///
/// A year's volatility is taken over the log-differences whose later month
/// falls in that year, so the December-to-January step counts towards the
/// January year. The first year of a series therefore has 11 differences
/// and every later year 12.
pub fn yearly_volatilities(series: &RateSeries) -> Result<Vec<YearlyVolatility>> {
    let years = series.require_complete_years(1)?;
    let logdiffs = log_differences(series.rates())?;
    let rates = series.rates();
    years
        .iter()
        .enumerate()
        .map(|(k, &year)| {
            let start = 12 * k;
            let year_rates = &rates[start..start + 12];
            // logdiffs[i] ends at month i + 1
            let diffs = &logdiffs[start.saturating_sub(1)..start + 11];
            Ok(YearlyVolatility {
                year,
                mean_rate: year_rates.iter().sum::<f64>() / 12.0,
                volatility: annualized_volatility(diffs)?,
            })
        })
        .collect()
}

/// Sample standard deviation of the year-over-year log-differences of the
/// yearly volatilities.
pub fn vol_of_vol(series: &RateSeries) -> Result<f64> {
    series.require_complete_years(3)?;
    let vols: Vec<f64> = yearly_volatilities(series)?.iter().map(|y| y.volatility).collect();
    sample_std(&log_differences(&vols)?)
}

/// Pearson correlation between yearly mean rates and yearly volatilities.
pub fn rate_vol_correlation(series: &RateSeries) -> Result<f64> {
    series.require_complete_years(3)?;
    let yearly = yearly_volatilities(series)?;
    let means: Vec<f64> = yearly.iter().map(|y| y.mean_rate).collect();
    let vols: Vec<f64> = yearly.iter().map(|y| y.volatility).collect();
    pearson(&means, &vols)
}

pub(crate) fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Domain("correlation undefined: zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Summary statistics used to parameterise the forecasting models.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesStats {
    pub monthly_logdiff_std: f64,
    pub annualized_volatility: f64,
    pub yearly_volatilities: Vec<YearlyVolatility>,
    pub vol_of_vol: f64,
    pub rate_vol_correlation: f64,
    pub mean_rate: f64,
}

impl SeriesStats {
    pub fn compute(series: &RateSeries) -> Result<Self> {
        if series.len() < 13 {
            return Err(Error::Structure(format!(
                "estimation needs at least 13 months, have {}",
                series.len()
            )));
        }
        let logdiffs = log_differences(series.rates())?;
        let monthly_logdiff_std = sample_std(&logdiffs)?;
        Ok(Self {
            monthly_logdiff_std,
            annualized_volatility: monthly_logdiff_std * MONTHS_PER_YEAR.sqrt(),
            yearly_volatilities: yearly_volatilities(series)?,
            vol_of_vol: vol_of_vol(series)?,
            rate_vol_correlation: rate_vol_correlation(series)?,
            mean_rate: series.rates().iter().sum::<f64>() / series.len() as f64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ireland_2009_2013, ireland_2014_2018, load_series, MonthlyObservation};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn published_log_differences() {
        let s = ireland_2014_2018();
        let ld = log_differences(s.rates()).unwrap();
        assert_eq!(ld.len(), 59);
        // Feb 2014: same denominator, so ln(3056/3252)
        assert!(close(ld[0], (3056.0f64 / 3252.0).ln(), 1e-15));
        assert_eq!(format!("{:.2}", ld[0] * 100.0), "-6.22");
        // Apr -> May 2017
        assert_eq!(format!("{:.2}", ld[12 * 3 + 3] * 100.0), "18.25");
        // Dec 2015 -> Jan 2016, the largest fall
        assert_eq!(format!("{:.2}", ld[23] * 100.0), "-14.71");
    }

    #[test]
    fn constant_series_has_zero_logdiffs_and_volatility() {
        let ld = log_differences(&[0.002; 6]).unwrap();
        assert!(ld.iter().all(|&x| x == 0.0));
        assert_eq!(annualized_volatility(&ld).unwrap(), 0.0);
    }

    #[test]
    fn zero_rate_has_no_log() {
        assert!(matches!(log_differences(&[0.1, 0.0, 0.2]), Err(Error::Domain(_))));
    }

    #[test]
    fn five_year_volatilities() {
        let a = SeriesStats::compute(&ireland_2014_2018()).unwrap();
        assert!(close(a.annualized_volatility, 0.2709, 0.0010), "{}", a.annualized_volatility);
        assert!(close(a.monthly_logdiff_std, 0.0782, 0.0005));
        assert_eq!(a.annualized_volatility, a.monthly_logdiff_std * 12f64.sqrt());

        let b = SeriesStats::compute(&ireland_2009_2013()).unwrap();
        assert!(close(b.annualized_volatility, 0.4057, 0.0010), "{}", b.annualized_volatility);
    }

    #[test]
    fn yearly_volatilities_2009_2013() {
        let yv = yearly_volatilities(&ireland_2009_2013()).unwrap();
        // reference values come from unrounded vehicle counts
        let published = [0.4533, 0.5582, 0.4110, 0.3256, 0.2967];
        for (y, p) in yv.iter().zip(published) {
            assert!(close(y.volatility, p, 0.0005), "{} vs {p}", y.volatility);
        }
    }

    #[test]
    fn vol_of_vol_reproduces_published_values() {
        let a = vol_of_vol(&ireland_2014_2018()).unwrap();
        assert!((0.275..=0.295).contains(&a), "{a}");
        assert!(close(a, 0.2871, 0.0001), "{a}");
        let b = vol_of_vol(&ireland_2009_2013()).unwrap();
        assert!(close(b, 0.2274, 0.010), "{b}");
    }

    #[test]
    fn correlation_goldens() {
        let b = rate_vol_correlation(&ireland_2009_2013()).unwrap();
        assert!(close(b, 0.60, 0.05), "{b}");
        // frozen from an independent numpy evaluation over the five yearly pairs
        let a = rate_vol_correlation(&ireland_2014_2018()).unwrap();
        assert!(close(a, 0.129_505_728_568_8, 1e-9), "{a}");
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap(), 1.0);
        assert!(matches!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(Error::Domain(_))));
    }

    fn synthetic_years(years: usize, month_rate: impl Fn(usize) -> u64) -> RateSeries {
        let obs = (0..years * 12)
            .map(|i| MonthlyObservation {
                year: 2000 + (i / 12) as i32,
                month: (i % 12) as u32 + 1,
                collisions: month_rate(i),
                registered_vehicles: 1_000_000,
            })
            .collect();
        RateSeries::new(obs).unwrap()
    }

    #[test]
    fn identical_yearly_pattern_has_zero_vol_of_vol() {
        // same within-year shape every year and a December equal to January's predecessor
        let pattern = [100, 120, 90, 110, 100, 120, 90, 110, 100, 120, 90, 110];
        let s = synthetic_years(4, |i| pattern[i % 12]);
        let yv = yearly_volatilities(&s).unwrap();
        // the first year lacks the cross-year step, so only later years coincide
        let vols: Vec<f64> = yv[1..].iter().map(|y| y.volatility).collect();
        assert!(close(vols[0], vols[1], 1e-12));
        assert!(sample_std(&log_differences(&vols).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn incomplete_year_rejected() {
        let csv = "year,month,collisions,registered_vehicles\n2014,2,1,10\n2014,3,2,10\n";
        let s = load_series(csv.as_bytes()).unwrap();
        assert!(matches!(vol_of_vol(&s), Err(Error::Structure(_))));
        let two_years = synthetic_years(2, |i| 100 + i as u64);
        assert!(matches!(rate_vol_correlation(&two_years), Err(Error::Structure(_))));
    }
}
