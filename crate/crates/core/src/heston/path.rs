use super::params::{ForecastConfig, HestonParams, SeasonalConfig, SeasonalOverlay, DT};
use crate::sde::{cir_step, correlated_pair, shock_step, GompertzShockConfig, RngStream, ShockState};

/// One simulated monthly trajectory. All vectors have one entry per step.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPath {
    /// Latent rate before the seasonal overlay.
    pub base: Vec<f64>,
    /// Reported rate.
    pub adjusted: Vec<f64>,
    pub variances: Vec<f64>,
    pub multipliers: Vec<f64>,
}

impl SimulationPath {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            base: Vec::with_capacity(n),
            adjusted: Vec::with_capacity(n),
            variances: Vec::with_capacity(n),
            multipliers: Vec::with_capacity(n),
        }
    }

    pub fn len(&self) -> usize {
        self.adjusted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjusted.is_empty()
    }
}

/// A model that can produce independent monthly paths from a random stream.
pub trait PathModel: Sync {
    fn start_rate(&self) -> f64;
    /// Calendar month of the first step.
    fn start_month(&self) -> u32;
    fn simulate(&self, rng: &mut RngStream, horizon_months: usize) -> SimulationPath;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedHeston {
    pub params: HestonParams,
    pub seasonal: SeasonalConfig,
    pub shock: GompertzShockConfig,
}

impl PathModel for ExtendedHeston {
    fn start_rate(&self) -> f64 {
        self.params.c1
    }

    fn start_month(&self) -> u32 {
        self.seasonal.start_month
    }

    fn simulate(&self, rng: &mut RngStream, horizon_months: usize) -> SimulationPath {
        let HestonParams { mu, cir, rho, c1 } = self.params;
        let sqrt_dt = DT.sqrt();
        let mut path = SimulationPath::with_capacity(horizon_months);
        let mut overlay = SeasonalOverlay::new(self.seasonal);
        let mut shock = ShockState::IDLE;
        let mut base = c1;
        let mut v = cir.v0;

        for t in 0..horizon_months {
            let (z_c, z_v) = correlated_pair(rng, rho);
            let (next_shock, g) = shock_step(shock, t as u32, rng, &self.shock);
            shock = next_shock;

            let v_pos = v.max(0.0);
            base = (base - mu * g * c1 * DT - v_pos.sqrt() * c1 * sqrt_dt * z_c).max(0.0);
            v = cir_step(v, DT, &cir, z_v);

            path.base.push(base);
            path.adjusted.push(overlay.apply(base));
            path.variances.push(v);
            path.multipliers.push(g);
        }
        path
    }
}

/// Simulates one extended Heston path of `config.horizon_months` steps.
///
/// Per month the stream yields `z_c`, `z_perp`, then the shock draws (if any).
pub fn simulate_path(
    params: &HestonParams,
    seasonal: &SeasonalConfig,
    shock: &GompertzShockConfig,
    rng: &mut RngStream,
    config: &ForecastConfig,
) -> SimulationPath {
    ExtendedHeston { params: *params, seasonal: *seasonal, shock: *shock }.simulate(rng, config.horizon_months)
}
