use std::fmt::Write as _;
use std::io::Write;

use super::metrics::{error_metrics, ErrorMetrics};
use crate::baselines::{estimate_vasicek, fit_sarima, forecast_sarima, AdjustedVasicek, SarimaOrder};
use crate::calendar::YearMonth;
use crate::dataset::{estimate_heston_params, EstimationOverrides, RateSeries};
use crate::error::{Error, Result};
use crate::heston::{run_ensemble, ExtendedHeston, ForecastConfig, SeasonalConfig};
use crate::sde::GompertzShockConfig;

/// Contiguous range of months.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub start: YearMonth,
    pub months: usize,
}

impl Window {
    pub fn new(start: YearMonth, months: usize) -> Self {
        Self { start, months }
    }

    /// January of `first` through December of `last`.
    pub fn years(first: i32, last: i32) -> Self {
        Self { start: YearMonth { year: first, month: 1 }, months: (12 * (last - first + 1)).max(0) as usize }
    }

    /// Month after the window ends.
    pub fn end(&self) -> YearMonth {
        self.start.plus_months(self.months as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BacktestModel {
    /// Estimated on the training window with zero drift, no shocks and the
    /// first test observation as the start rate; `overrides` apply on top.
    ExtendedHeston { overrides: EstimationOverrides },
    /// With `anchor_theta` the long-run level is set to the start rate, so
    /// the drift vanishes.
    AdjustedVasicek { anchor_theta: bool },
    /// With `anchor` the point forecast is shifted so its first month equals
    /// the first test observation.
    Sarima { order: SarimaOrder, anchor: bool },
}

impl BacktestModel {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ExtendedHeston { .. } => "Extended Heston",
            Self::AdjustedVasicek { .. } => "Adjusted Vasicek",
            Self::Sarima { .. } => "SARIMA",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestSpec {
    pub label: String,
    pub train: Window,
    pub test: Window,
    pub model: BacktestModel,
    pub n_sims: usize,
    pub master_seed: u64,
}

impl BacktestSpec {
    /// Train on 2009-2013, test on 2014-2018 with 5,000 paths.
    pub fn standard(model: BacktestModel) -> Self {
        Self {
            label: model.name().to_string(),
            train: Window::years(2009, 2013),
            test: Window::years(2014, 2018),
            model,
            n_sims: 5000,
            master_seed: 42,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.train.end() != self.test.start {
            return Err(Error::InvalidArgument(format!(
                "test window must start at {} (the month after training ends), got {}",
                self.train.end(),
                self.test.start
            )));
        }
        if self.n_sims == 0 {
            return Err(Error::InvalidArgument("n_sims must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearRow {
    pub year: i32,
    pub metrics: ErrorMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub label: String,
    pub train: Window,
    pub test: Window,
    pub rows: Vec<YearRow>,
    /// Mean of the yearly rows; `None` for an empty report.
    pub average: Option<ErrorMetrics>,
    pub forecast: Vec<f64>,
    pub observed: Vec<f64>,
}

impl ErrorReport {
    /// Groups paired monthly values by calendar year of `test`.
    pub fn from_forecast(label: &str, train: Window, test: Window, forecast: Vec<f64>, observed: Vec<f64>) -> Result<Self> {
        let mut rows = Vec::new();
        let mut i = 0;
        while i < forecast.len() {
            let year = test.start.plus_months(i as i64).year;
            let mut j = i;
            while j < forecast.len() && test.start.plus_months(j as i64).year == year {
                j += 1;
            }
            rows.push(YearRow { year, metrics: error_metrics(&forecast[i..j], &observed[i..j])? });
            i = j;
        }
        let average = (!rows.is_empty()).then(|| {
            let n = rows.len() as f64;
            let mape = rows.iter().map(|r| r.metrics.mape).sum::<Option<f64>>().map(|s| s / n);
            ErrorMetrics {
                mae: rows.iter().map(|r| r.metrics.mae).sum::<f64>() / n,
                rmse: rows.iter().map(|r| r.metrics.rmse).sum::<f64>() / n,
                mape,
            }
        });
        Ok(Self { label: label.to_string(), train, test, rows, average, forecast, observed })
    }

    pub fn average_mape(&self) -> Option<f64> {
        self.average.and_then(|a| a.mape)
    }

    /// `year,mae,rmse,mape` plus a trailing `average` row; MAPE as a fraction.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "year,mae,rmse,mape")?;
        let fmt_mape = |m: Option<f64>| m.map(|v| v.to_string()).unwrap_or_default();
        for row in &self.rows {
            writeln!(out, "{},{},{},{}", row.year, row.metrics.mae, row.metrics.rmse, fmt_mape(row.metrics.mape))?;
        }
        if let Some(a) = self.average {
            writeln!(out, "average,{},{},{}", a.mae, a.rmse, fmt_mape(a.mape))?;
        }
        Ok(())
    }

    /// Aligned table with rates and errors rendered in percent.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.label);
        let _ = writeln!(s, "{:<8} {:>10} {:>10} {:>8}", "Year", "MAE (%)", "RMSE (%)", "MAPE");
        let line = |s: &mut String, name: &str, m: &ErrorMetrics| {
            let mape = m.mape.map(|v| format!("{:.2}%", 100.0 * v)).unwrap_or_else(|| "n/a".into());
            let _ = writeln!(s, "{:<8} {:>10.4} {:>10.4} {:>8}", name, 100.0 * m.mae, 100.0 * m.rmse, mape);
        };
        for row in &self.rows {
            line(&mut s, &row.year.to_string(), &row.metrics);
        }
        if let Some(a) = &self.average {
            line(&mut s, "Average", a);
        }
        s
    }
}

/// Fits the model on the training window and scores its forecast of the
/// test window, year by year.
pub fn backtest(spec: &BacktestSpec, data: &RateSeries) -> Result<ErrorReport> {
    spec.validate()?;
    let covered = |w: &Window| -> Result<RateSeries> {
        data.window(w.start, w.months).map_err(|_| {
            Error::InvalidArgument(format!("data does not cover {} months from {}", w.months, w.start))
        })
    };
    let train = covered(&spec.train)?;
    if spec.test.months == 0 {
        return ErrorReport::from_forecast(&spec.label, spec.train, spec.test, Vec::new(), Vec::new());
    }
    let test = covered(&spec.test)?;
    let observed = test.rates().to_vec();
    let c1 = observed[0];
    let horizon = spec.test.months;

    let forecast = match &spec.model {
        BacktestModel::ExtendedHeston { overrides } => {
            let o = EstimationOverrides { c1: Some(overrides.c1.unwrap_or(c1)), mu: Some(overrides.mu.unwrap_or(0.0)), ..*overrides };
            let est = estimate_heston_params(&train, &o)?;
            let model = ExtendedHeston {
                params: est.params,
                seasonal: SeasonalConfig { start_month: spec.test.start.month, ..est.seasonal },
                shock: GompertzShockConfig::disabled(),
            };
            run_ensemble(&model, &ensemble_config(spec), &spec.label)?.median()
        }
        BacktestModel::AdjustedVasicek { anchor_theta } => {
            let fit = estimate_vasicek(&train)?;
            let amplitude = estimate_heston_params(&train, &EstimationOverrides::default())?.seasonal.amplitude;
            let mut params = fit.params;
            params.c1 = c1;
            if *anchor_theta {
                params.theta = c1;
            }
            params.validate()?;
            let model = AdjustedVasicek {
                params,
                seasonal: SeasonalConfig::with_amplitude(amplitude, spec.test.start.month),
                shock: GompertzShockConfig::disabled(),
            };
            run_ensemble(&model, &ensemble_config(spec), &spec.label)?.median()
        }
        BacktestModel::Sarima { order, anchor } => {
            let model = fit_sarima(train.rates(), *order)?;
            let mut f = forecast_sarima(&model, train.rates(), horizon)?;
            if *anchor {
                let shift = c1 - f[0];
                f.iter_mut().for_each(|x| *x = (*x + shift).max(0.0));
            }
            f
        }
    };
    ErrorReport::from_forecast(&spec.label, spec.train, spec.test, forecast, observed)
}

fn ensemble_config(spec: &BacktestSpec) -> ForecastConfig {
    ForecastConfig {
        horizon_months: spec.test.months,
        n_sims: spec.n_sims,
        master_seed: spec.master_seed,
        start_year: spec.test.start.year,
        ..ForecastConfig::default()
    }
}

#[derive(Debug)]
pub struct Comparison {
    /// One entry per spec, in input order.
    pub columns: Vec<(String, std::result::Result<ErrorReport, String>)>,
}

impl Comparison {
    /// Successful columns ordered by average MAPE, best first.
    pub fn ranking(&self) -> Vec<(String, f64)> {
        let mut ranked: Vec<(String, f64)> = self
            .columns
            .iter()
            .filter_map(|(label, r)| r.as_ref().ok().and_then(|rep| rep.average_mape()).map(|m| (label.clone(), m)))
            .collect();
        ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
        ranked
    }

    pub fn report(&self, label: &str) -> Option<&ErrorReport> {
        self.columns.iter().find(|(l, _)| l == label).and_then(|(_, r)| r.as_ref().ok())
    }

    /// Yearly MAPE per model side by side, followed by the ranking.
    pub fn to_table(&self) -> String {
        let mut years: Vec<i32> = self
            .columns
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok())
            .flat_map(|rep| rep.rows.iter().map(|row| row.year))
            .collect();
        years.sort_unstable();
        years.dedup();

        let width = self.columns.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(10);
        let mut s = String::new();
        let _ = write!(s, "{:<8}", "MAPE");
        for (label, _) in &self.columns {
            let _ = write!(s, " {label:>width$}");
        }
        let _ = writeln!(s);
        let cell = |r: &std::result::Result<ErrorReport, String>, year: Option<i32>| -> String {
            match r {
                Err(_) => "failed".into(),
                Ok(rep) => {
                    let m = match year {
                        Some(y) => rep.rows.iter().find(|row| row.year == y).and_then(|row| row.metrics.mape),
                        None => rep.average_mape(),
                    };
                    m.map(|v| format!("{:.2}%", 100.0 * v)).unwrap_or_else(|| "n/a".into())
                }
            }
        };
        for year in years.iter().map(|y| Some(*y)).chain([None]) {
            let name = year.map(|y| y.to_string()).unwrap_or_else(|| "Average".into());
            let _ = write!(s, "{name:<8}");
            for (_, r) in &self.columns {
                let _ = write!(s, " {:>width$}", cell(r, year));
            }
            let _ = writeln!(s);
        }
        let _ = writeln!(s);
        for (rank, (label, mape)) in self.ranking().iter().enumerate() {
            let _ = writeln!(s, "{}. {label} ({:.2}%)", rank + 1, 100.0 * mape);
        }
        for (label, r) in &self.columns {
            if let Err(e) = r {
                let _ = writeln!(s, "{label} failed: {e}");
            }
        }
        s
    }
}

/// Runs every spec; a failing spec is recorded without stopping the others.
pub fn compare_models(specs: &[BacktestSpec], data: &RateSeries) -> Result<Comparison> {
    if specs.is_empty() {
        return Err(Error::InvalidArgument("no models to compare".into()));
    }
    let columns = specs
        .iter()
        .map(|spec| (spec.label.clone(), backtest(spec, data).map_err(|e| e.to_string())))
        .collect();
    Ok(Comparison { columns })
}
