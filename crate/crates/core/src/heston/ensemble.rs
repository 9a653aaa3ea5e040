use std::io::Write;

use rayon::prelude::*;

use super::params::ForecastConfig;
use super::path::{PathModel, SimulationPath};
use crate::calendar::YearMonth;
use crate::error::Result;
use crate::sde::RngStream;

/// Percentiles of the reported rate over an ensemble of paths.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastEnsemble {
    pub label: String,
    pub config: ForecastConfig,
    /// Calendar month of the first step.
    pub start: YearMonth,
    pub start_rate: f64,
    /// `table[t][k]` is the `config.percentile_levels[k]` percentile at step `t`.
    pub table: Vec<Vec<f64>>,
    /// Mean of the shock multiplier over every path and month.
    pub mean_multiplier: f64,
    /// Reported rates, month-major: `samples[t * n_sims + path]`.
    samples: Vec<f64>,
}

impl ForecastEnsemble {
    pub fn horizon(&self) -> usize {
        self.table.len()
    }

    pub fn n_sims(&self) -> usize {
        self.config.n_sims
    }

    /// Every path's reported rate at step `month`.
    pub fn month_samples(&self, month: usize) -> &[f64] {
        let n = self.config.n_sims;
        &self.samples[month * n..(month + 1) * n]
    }

    /// Percentile at an arbitrary level, from the stored samples.
    pub fn percentile_at(&self, month: usize, level: f64) -> f64 {
        let mut xs = self.month_samples(month).to_vec();
        xs.sort_by(f64::total_cmp);
        percentile(&xs, level)
    }

    pub fn median(&self) -> Vec<f64> {
        match self.config.percentile_levels.iter().position(|&p| p == 50.0) {
            Some(k) => self.table.iter().map(|row| row[k]).collect(),
            None => (0..self.horizon()).map(|t| self.percentile_at(t, 50.0)).collect(),
        }
    }

    pub fn period(&self, month: usize) -> YearMonth {
        self.start.plus_months(month as i64)
    }

    /// `month_index,year,month,p10,...` with one row per step.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "month_index,year,month")?;
        for level in &self.config.percentile_levels {
            write!(out, ",p{level}")?;
        }
        writeln!(out)?;
        for (t, row) in self.table.iter().enumerate() {
            let ym = self.period(t);
            write!(out, "{},{},{}", t + 1, ym.year, ym.month)?;
            for value in row {
                write!(out, ",{value}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Linear interpolation between order statistics of sorted data.
pub fn percentile(sorted: &[f64], level: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty data");
    let h = (sorted.len() - 1) as f64 * level / 100.0;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Runs `n_sims` paths in parallel, path `i` on stream `(master_seed, i)`.
pub fn run_ensemble<M: PathModel>(model: &M, config: &ForecastConfig, label: &str) -> Result<ForecastEnsemble> {
    config.validate()?;
    let paths: Vec<(Vec<f64>, f64)> = (0..config.n_sims)
        .into_par_iter()
        .map(|i| summarize(model.simulate(&mut RngStream::new(config.master_seed, i as u64), config.horizon_months)))
        .collect();
    Ok(aggregate(model, config, label, paths))
}

/// Same output as [`run_ensemble`], computed on the calling thread.
pub fn run_ensemble_serial<M: PathModel>(
    model: &M,
    config: &ForecastConfig,
    label: &str,
) -> Result<ForecastEnsemble> {
    config.validate()?;
    let paths: Vec<(Vec<f64>, f64)> = (0..config.n_sims)
        .map(|i| summarize(model.simulate(&mut RngStream::new(config.master_seed, i as u64), config.horizon_months)))
        .collect();
    Ok(aggregate(model, config, label, paths))
}

fn summarize(path: SimulationPath) -> (Vec<f64>, f64) {
    let g: f64 = path.multipliers.iter().sum();
    (path.adjusted, g)
}

fn aggregate<M: PathModel>(
    model: &M,
    config: &ForecastConfig,
    label: &str,
    paths: Vec<(Vec<f64>, f64)>,
) -> ForecastEnsemble {
    let n = config.n_sims;
    let horizon = config.horizon_months;
    let mut samples = vec![0.0; horizon * n];
    let mut multiplier_sum = 0.0;
    for (i, (adjusted, g)) in paths.iter().enumerate() {
        multiplier_sum += g;
        for (t, &x) in adjusted.iter().enumerate() {
            samples[t * n + i] = x;
        }
    }
    let table = samples
        .chunks(n.max(1))
        .take(horizon)
        .map(|month| {
            let mut sorted = month.to_vec();
            sorted.sort_by(f64::total_cmp);
            config.percentile_levels.iter().map(|&p| percentile(&sorted, p)).collect()
        })
        .collect();
    let cells = (n * horizon) as f64;
    ForecastEnsemble {
        label: label.to_string(),
        config: config.clone(),
        start: YearMonth { year: config.start_year, month: model.start_month() },
        start_rate: model.start_rate(),
        table,
        mean_multiplier: if cells > 0.0 { multiplier_sum / cells } else { 1.0 },
        samples,
    }
}

/// Fraction of paths whose reported rate at step `month` is strictly below
/// the start rate.
pub fn fraction_below_start(ensemble: &ForecastEnsemble, month: usize) -> f64 {
    fraction_below(ensemble.month_samples(month), ensemble.start_rate)
}

pub fn fraction_below(values: &[f64], threshold: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().filter(|&&x| x < threshold).count() as f64 / values.len() as f64
}
