use super::likelihood::ArmaStateSpace;
use super::poly::differencing_polynomial;
use super::SarimaModel;
use crate::error::{Error, Result};

/// One-step innovations of the differenced series, with pre-sample values
/// set to the process mean and pre-sample innovations to zero.
pub fn residuals(model: &SarimaModel, history: &[f64]) -> Result<Vec<f64>> {
    let lag = model.order.differencing_lag();
    if history.len() <= lag {
        return Err(Error::InvalidArgument(format!(
            "history of {} values cannot seed a differencing lag of {lag}",
            history.len()
        )));
    }
    let w = super::poly::apply(&differencing_polynomial(model.order.d, model.order.seasonal_d, model.order.m), history);
    Ok(arma_residuals(&w, model.mean(), &model.full_ar(), &model.full_ma()))
}

pub(crate) fn arma_residuals(w: &[f64], mean: f64, phi: &[f64], theta: &[f64]) -> Vec<f64> {
    let mut e = Vec::with_capacity(w.len());
    for t in 0..w.len() {
        let mut value = w[t] - mean;
        for (i, a) in phi.iter().enumerate().take(t) {
            value -= a * (w[t - 1 - i] - mean);
        }
        for (j, b) in theta.iter().enumerate().take(t) {
            value -= b * e[t - 1 - j];
        }
        e.push(value);
    }
    e
}

/// Inverts [`residuals`]: rebuilds the series from its first
/// `differencing_lag` values and the innovations.
pub fn reconstruct(model: &SarimaModel, initial: &[f64], innovations: &[f64]) -> Result<Vec<f64>> {
    let lag = model.order.differencing_lag();
    if initial.len() != lag {
        return Err(Error::InvalidArgument(format!("expected {lag} initial values, got {}", initial.len())));
    }
    let (phi, theta, mean) = (model.full_ar(), model.full_ma(), model.mean());
    let mut w: Vec<f64> = Vec::with_capacity(innovations.len());
    for (t, &e_t) in innovations.iter().enumerate() {
        let mut value = mean + e_t;
        for (i, a) in phi.iter().enumerate().take(t) {
            value += a * (w[t - 1 - i] - mean);
        }
        for (j, b) in theta.iter().enumerate().take(t) {
            value += b * innovations[t - 1 - j];
        }
        w.push(value);
    }
    Ok(integrate(model, initial, &w))
}

/// Point forecasts: conditional expectations of the differenced series
/// given the whole history (future innovations at zero), with the
/// differencing inverted and the result floored at zero.
pub fn forecast_sarima(model: &SarimaModel, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
    let lag = model.order.differencing_lag();
    if history.len() <= lag {
        return Err(Error::InvalidArgument(format!(
            "history of {} values cannot seed a differencing lag of {lag}",
            history.len()
        )));
    }
    let w = super::poly::apply(&differencing_polynomial(model.order.d, model.order.seasonal_d, model.order.m), history);
    let mean = model.mean();
    let centred: Vec<f64> = w.iter().map(|x| x - mean).collect();
    let ahead = ArmaStateSpace::new(&model.full_ar(), &model.full_ma())
        .predict(&centred, horizon)
        .ok_or_else(|| Error::Domain(format!("model {} is not stationary after differencing", model.order)))?;
    let mut all = w;
    all.extend(ahead.iter().map(|x| x + mean));
    let full = integrate(model, &history[..lag], &all);
    Ok(full[history.len()..].iter().map(|x| x.max(0.0)).collect())
}

/// `y_t = w_t - sum_{k>=1} delta_k y_{t-k}` starting from `initial`.
fn integrate(model: &SarimaModel, initial: &[f64], w: &[f64]) -> Vec<f64> {
    let delta = differencing_polynomial(model.order.d, model.order.seasonal_d, model.order.m);
    let mut y = initial.to_vec();
    for &w_t in w {
        let t = y.len();
        let value = w_t - delta.iter().enumerate().skip(1).map(|(k, c)| c * y[t - k]).sum::<f64>();
        y.push(value);
    }
    y
}
