use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sde::CirParams;

/// Years per simulation step; the model runs on a monthly grid.
pub const DT: f64 = 1.0 / 12.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HestonParams {
    /// Annual reduction rate as a fraction of the start rate.
    pub mu: f64,
    pub cir: CirParams,
    /// Correlation between the rate and variance Wiener processes.
    pub rho: f64,
    /// Start rate `C1`; also scales every increment.
    pub c1: f64,
}

impl HestonParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(Error::InvalidArgument(format!("start rate must be positive, got {}", self.c1)));
        }
        if !(self.rho.abs() <= 1.0) {
            return Err(Error::InvalidArgument(format!("|rho| must be <= 1, got {}", self.rho)));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidArgument("mu must be finite".into()));
        }
        if !self.cir.is_valid() {
            return Err(Error::InvalidArgument(format!("variance parameters must be >= 0: {:?}", self.cir)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeasonalConfig {
    /// `A`, relative to the calendar-year mean.
    pub amplitude: f64,
    /// `f`, cycles per year.
    pub frequency: f64,
    /// `phi`, radians.
    pub phase: f64,
    /// Calendar month (1-12) of the first simulated step.
    pub start_month: u32,
}

impl Default for SeasonalConfig {
    fn default() -> Self {
        Self { amplitude: 0.0, frequency: 1.0, phase: PI, start_month: 1 }
    }
}

impl SeasonalConfig {
    pub fn with_amplitude(amplitude: f64, start_month: u32) -> Self {
        Self { amplitude, start_month, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::InvalidArgument(format!("amplitude must be >= 0, got {}", self.amplitude)));
        }
        if !(1..=12).contains(&self.start_month) {
            return Err(Error::InvalidArgument(format!("start month {} outside 1..=12", self.start_month)));
        }
        if !(self.frequency.is_finite() && self.phase.is_finite()) {
            return Err(Error::InvalidArgument("seasonal frequency and phase must be finite".into()));
        }
        Ok(())
    }

    pub fn factor(&self, month: u32) -> f64 {
        seasonal_factor(self.amplitude, self.frequency, self.phase, month)
    }
}

/// `A sin(2 pi f (month - 1) / 12 + phi)`: January sits at `t = 0`, so with
/// `f = 1, phi = pi` the trough falls in April and the peak in October.
pub fn seasonal_factor(amplitude: f64, frequency: f64, phase: f64, month: u32) -> f64 {
    let t = (month as f64 - 1.0) / 12.0;
    amplitude * (2.0 * PI * frequency * t + phase).sin()
}

/// Applies the seasonal adjustment month by month, tracking the running mean
/// of base values within the current calendar year.
#[derive(Debug, Clone)]
pub struct SeasonalOverlay {
    cfg: SeasonalConfig,
    month: u32,
    year_sum: f64,
    year_count: u32,
}

impl SeasonalOverlay {
    pub fn new(cfg: SeasonalConfig) -> Self {
        Self { month: cfg.start_month, cfg, year_sum: 0.0, year_count: 0 }
    }

    /// Calendar month the next call to [`apply`](Self::apply) refers to.
    pub fn month(&self) -> u32 {
        self.month
    }

    /// Adjusted, zero-floored rate for this month's base value; advances one month.
    pub fn apply(&mut self, base: f64) -> f64 {
        if self.month == 1 {
            self.year_sum = 0.0;
            self.year_count = 0;
        }
        self.year_sum += base;
        self.year_count += 1;
        let year_mean = self.year_sum / self.year_count as f64;
        let adjusted = (base + year_mean * self.cfg.factor(self.month)).max(0.0);
        self.month = self.month % 12 + 1;
        adjusted
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastConfig {
    pub horizon_months: usize,
    pub n_sims: usize,
    pub master_seed: u64,
    /// Percentile levels in (0, 100).
    pub percentile_levels: Vec<f64>,
    /// Calendar year of the first simulated step; only used for labelling.
    pub start_year: i32,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        Self {
            horizon_months: 312,
            n_sims: 5000,
            master_seed: 42,
            percentile_levels: vec![10.0, 25.0, 50.0, 75.0, 90.0],
            start_year: 2019,
        }
    }
}

impl ForecastConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sims == 0 {
            return Err(Error::InvalidArgument("n_sims must be at least 1".into()));
        }
        if self.percentile_levels.is_empty() {
            return Err(Error::InvalidArgument("at least one percentile level is required".into()));
        }
        if let Some(p) = self.percentile_levels.iter().find(|p| !(**p > 0.0 && **p < 100.0)) {
            return Err(Error::InvalidArgument(format!("percentile level {p} outside (0, 100)")));
        }
        Ok(())
    }
}
