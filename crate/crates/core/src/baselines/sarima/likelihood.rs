//! Exact Gaussian likelihood of a zero-mean ARMA process via the Kalman
//! filter, with the innovation variance concentrated out.

/// `w_t = sum phi_i w_{t-i} + e_t + sum theta_j e_{t-j}` in state-space form:
/// the state has dimension `max(p, q + 1)`, the transition is the companion
/// matrix of `phi` and the disturbance loading is `(1, theta_1, ...)`.
pub struct ArmaStateSpace {
    dim: usize,
    phi: Vec<f64>,
    loading: Vec<f64>,
}

/// Profile likelihood at the concentrated innovation variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Concentrated {
    pub log_likelihood: f64,
    pub sigma2: f64,
}

const DOUBLING_CAP: usize = 60;

impl ArmaStateSpace {
    pub fn new(phi: &[f64], theta: &[f64]) -> Self {
        let dim = phi.len().max(theta.len() + 1);
        let mut p = vec![0.0; dim];
        p[..phi.len()].copy_from_slice(phi);
        let mut loading = vec![0.0; dim];
        loading[0] = 1.0;
        loading[1..=theta.len()].copy_from_slice(theta);
        Self { dim, phi: p, loading }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `T X T'` for symmetric `X`, exploiting the companion structure.
    fn sandwich(&self, x: &[f64], out: &mut [f64]) {
        let r = self.dim;
        // TX: row i = phi_i * X[0,:] + X[i+1,:]
        let mut tx = vec![0.0; r * r];
        for i in 0..r {
            for j in 0..r {
                let below = if i + 1 < r { x[(i + 1) * r + j] } else { 0.0 };
                tx[i * r + j] = self.phi[i] * x[j] + below;
            }
        }
        // (TX)T': column j = phi_j * TX[:,0] + TX[:,j+1]
        for i in 0..r {
            for j in 0..r {
                let right = if j + 1 < r { tx[i * r + j + 1] } else { 0.0 };
                out[i * r + j] = self.phi[j] * tx[i * r] + right;
            }
        }
    }

    /// Stationary state covariance (unit innovation variance), solving
    /// `P = T P T' + R R'` by the doubling algorithm.
    pub fn stationary_covariance(&self) -> Option<Vec<f64>> {
        let r = self.dim;
        let mut p: Vec<f64> = (0..r * r).map(|k| self.loading[k / r] * self.loading[k % r]).collect();
        let mut a = vec![0.0; r * r];
        for i in 0..r {
            a[i * r] = self.phi[i];
            if i + 1 < r {
                a[i * r + i + 1] = 1.0;
            }
        }
        for _ in 0..DOUBLING_CAP {
            let ap = matmul(&a, &p, r);
            let apat = matmul_transposed(&ap, &a, r);
            let mut delta = 0.0f64;
            let mut scale = 0.0f64;
            for (pk, dk) in p.iter_mut().zip(&apat) {
                *pk += dk;
                delta = delta.max(dk.abs());
                scale = scale.max(pk.abs());
            }
            if !scale.is_finite() {
                return None;
            }
            if delta <= 1e-15 * scale {
                return Some(p);
            }
            a = matmul(&a, &a, r);
        }
        None
    }

    /// Returns `None` when the process is not stationary or the filter breaks down.
    pub fn concentrated_log_likelihood(&self, y: &[f64]) -> Option<Concentrated> {
        let run = self.filter(y)?;
        let nf = y.len() as f64;
        let sigma2 = run.sum_sq / nf;
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return None;
        }
        let log_likelihood =
            -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + 1.0 + sigma2.ln()) - 0.5 * run.sum_log_f;
        Some(Concentrated { log_likelihood, sigma2 })
    }

    /// Conditional expectations of the next `horizon` values given all of `y`.
    pub fn predict(&self, y: &[f64], horizon: usize) -> Option<Vec<f64>> {
        let mut a = self.filter(y)?.state;
        let mut out = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            out.push(a[0]);
            a = self.advance(&a);
        }
        Some(out)
    }

    /// `T a`
    fn advance(&self, a: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| self.phi[i] * a[0] + a.get(i + 1).copied().unwrap_or(0.0)).collect()
    }

    fn filter(&self, y: &[f64]) -> Option<FilterRun> {
        let r = self.dim;
        if y.is_empty() {
            return None;
        }
        let mut p = self.stationary_covariance()?;
        let mut a = vec![0.0; r];
        let mut updated = vec![0.0; r * r];
        let mut gain = vec![0.0; r];
        let mut f = 0.0;
        let mut steady = false;
        let mut sum_log_f = 0.0;
        let mut sum_sq = 0.0;

        for &obs in y {
            if !steady {
                f = p[0];
                if !(f > 0.0 && f.is_finite()) {
                    return None;
                }
                for i in 0..r {
                    gain[i] = p[i * r] / f;
                }
            }
            let v = obs - a[0];
            sum_log_f += f.ln();
            sum_sq += v * v / f;
            let filtered: Vec<f64> = a.iter().zip(&gain).map(|(ai, ki)| ai + ki * v).collect();
            a = self.advance(&filtered);

            if !steady {
                // P <- T (P - P[:,0] P[0,:] / f) T' + R R'
                for i in 0..r {
                    for j in 0..r {
                        updated[i * r + j] = p[i * r + j] - p[i * r] * p[j] / f;
                    }
                }
                self.sandwich(&updated, &mut p);
                for i in 0..r {
                    for j in 0..r {
                        p[i * r + j] += self.loading[i] * self.loading[j];
                    }
                }
                steady = (p[0] - f).abs() <= 1e-13 * f;
                if steady {
                    f = p[0];
                    for i in 0..r {
                        gain[i] = p[i * r] / f;
                    }
                }
            }
        }
        Some(FilterRun { state: a, sum_log_f, sum_sq })
    }
}

struct FilterRun {
    /// Predicted state for the step after the last observation.
    state: Vec<f64>,
    sum_log_f: f64,
    sum_sq: f64,
}

fn matmul(a: &[f64], b: &[f64], r: usize) -> Vec<f64> {
    let mut out = vec![0.0; r * r];
    for i in 0..r {
        for k in 0..r {
            let aik = a[i * r + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..r {
                out[i * r + j] += aik * b[k * r + j];
            }
        }
    }
    out
}

/// `a b'`
fn matmul_transposed(a: &[f64], b: &[f64], r: usize) -> Vec<f64> {
    let mut out = vec![0.0; r * r];
    for i in 0..r {
        for j in 0..r {
            out[i * r + j] = (0..r).map(|k| a[i * r + k] * b[j * r + k]).sum();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ar1_stationary_variance() {
        let ss = ArmaStateSpace::new(&[0.6], &[]);
        let p = ss.stationary_covariance().unwrap();
        assert!((p[0] - 1.0 / (1.0 - 0.36)).abs() < 1e-12);
    }

    #[test]
    fn ma1_stationary_variance() {
        let ss = ArmaStateSpace::new(&[], &[0.4]);
        let p = ss.stationary_covariance().unwrap();
        assert!((p[0] - 1.16).abs() < 1e-12);
    }

    #[test]
    fn ar1_exact_likelihood_matches_closed_form() {
        let phi: f64 = 0.5;
        let y = [0.3, -0.2, 0.5, 0.1, -0.4, 0.25];
        let got = ArmaStateSpace::new(&[phi], &[]).concentrated_log_likelihood(&y).unwrap();

        // closed form: first obs variance 1/(1-phi^2), then unit-variance innovations
        let n = y.len() as f64;
        let mut ss = y[0] * y[0] * (1.0 - phi * phi);
        for t in 1..y.len() {
            ss += (y[t] - phi * y[t - 1]).powi(2);
        }
        let sigma2 = ss / n;
        let ll = -0.5 * n * ((2.0 * PI).ln() + 1.0 + sigma2.ln()) - 0.5 * (1.0 / (1.0 - phi * phi)).ln();
        assert!((got.sigma2 - sigma2).abs() < 1e-12);
        assert!((got.log_likelihood - ll).abs() < 1e-10);
    }

    #[test]
    fn white_noise_likelihood() {
        let y = [1.0, -1.0, 2.0, 0.0];
        let got = ArmaStateSpace::new(&[], &[]).concentrated_log_likelihood(&y).unwrap();
        assert!((got.sigma2 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn ar1_prediction_decays() {
        let got = ArmaStateSpace::new(&[0.5], &[]).predict(&[0.3, -0.2, 0.8], 3).unwrap();
        assert_eq!(got, vec![0.4, 0.2, 0.1]);
    }

    #[test]
    fn ma1_prediction_vanishes_after_one_step() {
        let got = ArmaStateSpace::new(&[], &[0.4]).predict(&[1.0, 0.5, -0.3], 3).unwrap();
        assert!(got[0] != 0.0);
        assert_eq!(&got[1..], &[0.0, 0.0]);
    }

    #[test]
    fn unit_root_rejected() {
        assert!(ArmaStateSpace::new(&[1.0], &[]).stationary_covariance().is_none());
    }
}
