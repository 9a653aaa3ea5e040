/// Square-root variance process `dv = kappa (theta - v) dt + xi sqrt(v) dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirParams {
    /// Mean-reversion speed per year.
    pub kappa: f64,
    /// Long-run variance.
    pub theta: f64,
    /// Volatility of variance.
    pub xi: f64,
    /// Initial variance.
    pub v0: f64,
}

impl CirParams {
    /// `xi^2 < 2 kappa theta`. Violations are allowed in simulation, full
    /// truncation keeps the discretised variance non-negative regardless.
    pub fn satisfies_feller(&self) -> bool {
        self.xi * self.xi < 2.0 * self.kappa * self.theta
    }

    /// Smallest kappa meeting the Feller bound with equality.
    pub fn feller_minimum_kappa(xi: f64, theta: f64) -> f64 {
        xi * xi / (2.0 * theta)
    }

    pub fn is_valid(&self) -> bool {
        [self.kappa, self.theta, self.xi, self.v0].iter().all(|x| x.is_finite() && *x >= 0.0)
    }
}

/// One full-truncation Euler step. Negative variance is clamped to zero inside
/// both drift and diffusion and the result is floored at zero.
pub fn cir_step(v: f64, dt: f64, params: &CirParams, z_v: f64) -> f64 {
    let v_pos = v.max(0.0);
    let next = v + params.kappa * (params.theta - v_pos) * dt + params.xi * v_pos.sqrt() * dt.sqrt() * z_v;
    next.max(0.0)
}
