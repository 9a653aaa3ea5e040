use super::rng::RngStream;
use crate::error::{Error, Result};

/// Randomly triggered periods of accelerated rate reduction.
///
/// Each month without an active shock draws `u ~ U[0,1)` and triggers when
/// `gompertz_pdf(t) > u`. A trigger draws an integer multiplier uniformly from
/// `[alpha_low, alpha_high]` and holds it for `duration_months` months.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GompertzShockConfig {
    /// `T`: expected number of shocks over the span of the density.
    pub expected_shocks: f64,
    /// `b`
    pub shape_b: f64,
    /// `eta`
    pub eta: f64,
    /// `s`
    pub duration_months: u32,
    /// `l`
    pub alpha_low: u32,
    /// `h`
    pub alpha_high: u32,
    pub enabled: bool,
    /// When false, a new trigger may restart an active shock.
    pub suppress_retrigger: bool,
}

impl Default for GompertzShockConfig {
    /// T = 6, b = 0.02, eta = 0.3, 36-month shocks with alpha in {2,..,5}.
    fn default() -> Self {
        Self {
            expected_shocks: 6.0,
            shape_b: 0.02,
            eta: 0.3,
            duration_months: 36,
            alpha_low: 2,
            alpha_high: 5,
            enabled: true,
            suppress_retrigger: true,
        }
    }
}

impl GompertzShockConfig {
    pub fn disabled() -> Self {
        Self { enabled: false, ..Self::default() }
    }

    /// The alternative `G(6; 0.03, 0.2)` shape.
    pub fn alternative_shape() -> Self {
        Self { shape_b: 0.03, eta: 0.2, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha_low < 1 || self.alpha_high < self.alpha_low {
            return Err(Error::InvalidArgument(format!(
                "shock multipliers need 1 <= alpha_low <= alpha_high, got [{}, {}]",
                self.alpha_low, self.alpha_high
            )));
        }
        if self.duration_months < 1 {
            return Err(Error::InvalidArgument("shock duration must be at least 1 month".into()));
        }
        if !(self.expected_shocks > 0.0 && self.shape_b > 0.0 && self.eta > 0.0) {
            return Err(Error::InvalidArgument("Gompertz T, b and eta must be positive".into()));
        }
        Ok(())
    }

    /// Sum of the per-month trigger probabilities over `months` months.
    pub fn expected_triggers(&self, months: u32) -> f64 {
        (0..months).map(|t| gompertz_pdf(t as f64, self).min(1.0)).sum()
    }
}

/// `b eta e^eta e^(bt/T) exp(-eta e^(bt/T))` with `t` in months.
pub fn gompertz_pdf(t_months: f64, cfg: &GompertzShockConfig) -> f64 {
    let growth = (cfg.shape_b * t_months / cfg.expected_shocks).exp();
    cfg.shape_b * cfg.eta * cfg.eta.exp() * growth * (-cfg.eta * growth).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShockState {
    /// Months of the current shock still to come after the month just stepped.
    pub months_remaining: u32,
    /// The active multiplier, or 1 when idle.
    pub multiplier: u32,
}

impl ShockState {
    pub const IDLE: ShockState = ShockState { months_remaining: 0, multiplier: 1 };

    pub fn is_active(&self) -> bool {
        self.months_remaining > 0
    }
}

impl Default for ShockState {
    fn default() -> Self {
        Self::IDLE
    }
}

/// Advances the shock state by one month and returns the multiplier `G_t` to
/// apply in that month.
///
/// An active shock consumes no randomness (unless re-triggering is allowed).
/// Otherwise one uniform is drawn, and on a trigger one more for `alpha`.
pub fn shock_step(
    state: ShockState,
    t_months: u32,
    rng: &mut RngStream,
    cfg: &GompertzShockConfig,
) -> (ShockState, f64) {
    if !cfg.enabled {
        return (ShockState::IDLE, 1.0);
    }
    if state.is_active() && cfg.suppress_retrigger {
        return (continue_shock(state), state.multiplier as f64);
    }
    let u = rng.uniform();
    if gompertz_pdf(t_months as f64, cfg) > u {
        let alpha = rng.uniform_int(cfg.alpha_low, cfg.alpha_high);
        let months_remaining = cfg.duration_months - 1;
        let next = if months_remaining == 0 {
            ShockState::IDLE
        } else {
            ShockState { months_remaining, multiplier: alpha }
        };
        return (next, alpha as f64);
    }
    if state.is_active() {
        (continue_shock(state), state.multiplier as f64)
    } else {
        (ShockState::IDLE, 1.0)
    }
}

fn continue_shock(state: ShockState) -> ShockState {
    match state.months_remaining - 1 {
        0 => ShockState::IDLE,
        months_remaining => ShockState { months_remaining, ..state },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pdf_at_origin_is_b_eta() {
        let cfg = GompertzShockConfig::default();
        assert!((gompertz_pdf(0.0, &cfg) - 0.006).abs() < 1e-15);
    }

    #[test]
    fn pdf_maximum_matches_grid_search() {
        let cfg = GompertzShockConfig::default();
        // oracle: brute-force maximisation on a 0.01-month grid
        let (mut t_best, mut p_best) = (0.0, 0.0);
        for i in 0..=120_000 {
            let t = i as f64 * 0.01;
            let p = gompertz_pdf(t, &cfg);
            if p > p_best {
                (t_best, p_best) = (t, p);
            }
        }
        assert!((t_best - 361.2).abs() < 0.05, "{t_best}");
        assert!((p_best - 0.009_932).abs() < 1e-6, "{p_best}");
        let analytic_t = cfg.expected_shocks / cfg.shape_b * (1.0 / cfg.eta).ln();
        assert!((t_best - analytic_t).abs() < 0.01);
        assert!((p_best - cfg.shape_b * (cfg.eta - 1.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn pdf_rises_before_peak() {
        let cfg = GompertzShockConfig::default();
        let p = |t| gompertz_pdf(t, &cfg);
        assert!(p(100.0) < p(200.0) && p(200.0) < p(300.0));
    }

    #[test]
    fn century_expectation_is_about_six() {
        let e = GompertzShockConfig::default().expected_triggers(1200);
        assert!((e - 6.0).abs() < 0.15, "{e}");
    }

    #[test]
    fn disabled_is_always_one() {
        let cfg = GompertzShockConfig::disabled();
        let mut rng = RngStream::new(1, 0);
        let mut state = ShockState::IDLE;
        for t in 0..500 {
            let (next, g) = shock_step(state, t, &mut rng, &cfg);
            assert_eq!(g, 1.0);
            state = next;
        }
        assert_eq!(state, ShockState::IDLE);
    }

    #[test]
    fn trigger_holds_for_exactly_duration_months() {
        // b * eta > 1 forces a trigger whenever one is allowed
        let cfg = GompertzShockConfig { shape_b: 10.0, eta: 0.5, duration_months: 4, ..Default::default() };
        let mut rng = RngStream::new(11, 0);
        let mut state = ShockState::IDLE;
        let mut gs = Vec::new();
        for t in 0..8 {
            let (next, g) = shock_step(state, t, &mut rng, &cfg);
            assert_eq!(next.months_remaining == 0, next.multiplier == 1);
            gs.push(g);
            state = next;
        }
        assert!(gs[..4].iter().all(|&g| g == gs[0] && g >= 2.0));
        // the density has collapsed to ~0 by t = 4
        assert!(gs[4..].iter().all(|&g| g == 1.0));
    }

    #[test]
    fn active_shock_consumes_no_randomness() {
        let cfg = GompertzShockConfig { shape_b: 10.0, eta: 0.5, ..Default::default() };
        let mut rng = RngStream::new(5, 0);
        let (state, _) = shock_step(ShockState::IDLE, 0, &mut rng, &cfg);
        let mut probe = rng.clone();
        let (_, g) = shock_step(state, 1, &mut rng, &cfg);
        assert_eq!(g, state.multiplier as f64);
        assert_eq!(rng.uniform(), probe.uniform());
    }

    #[test]
    fn alpha_frequencies_uniform() {
        let cfg = GompertzShockConfig { shape_b: 10.0, eta: 0.5, duration_months: 1, ..Default::default() };
        let mut rng = RngStream::new(77, 0);
        let mut counts = [0usize; 4];
        let n = 1_000_000;
        for _ in 0..n {
            let (state, g) = shock_step(ShockState::IDLE, 0, &mut rng, &cfg);
            assert_eq!(state, ShockState::IDLE);
            counts[g as usize - 2] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.25).abs() < 0.01, "{counts:?}");
        }
    }

    #[test]
    fn validation() {
        assert!(GompertzShockConfig::default().validate().is_ok());
        assert!(GompertzShockConfig { alpha_low: 0, ..Default::default() }.validate().is_err());
        assert!(GompertzShockConfig { alpha_low: 4, alpha_high: 3, ..Default::default() }.validate().is_err());
        assert!(GompertzShockConfig { duration_months: 0, ..Default::default() }.validate().is_err());
    }
}
