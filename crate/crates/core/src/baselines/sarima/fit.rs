use rayon::prelude::*;

use super::forecast::arma_residuals;
use super::likelihood::ArmaStateSpace;
use super::poly::{apply, constrained_ar, constrained_ma, differencing_polynomial};
use super::{full_ar, full_ma, SarimaModel, SarimaOrder};
use crate::baselines::optim::{nelder_mead, NelderMeadOptions};
use crate::error::{Error, Result};

/// Exact-likelihood optimiser runs, each restarted from the previous best.
const MAX_RUNS: usize = 4;

struct Layout {
    order: SarimaOrder,
}

struct Decoded {
    ar: Vec<f64>,
    ma: Vec<f64>,
    seasonal_ar: Vec<f64>,
    seasonal_ma: Vec<f64>,
    mean: f64,
}

impl Layout {
    fn len(&self) -> usize {
        self.order.n_coefficients() + usize::from(self.order.has_intercept())
    }

    fn decode(&self, x: &[f64]) -> Decoded {
        let o = self.order;
        let (ar, rest) = x.split_at(o.p);
        let (ma, rest) = rest.split_at(o.q);
        let (sar, rest) = rest.split_at(o.seasonal_p);
        let (sma, rest) = rest.split_at(o.seasonal_q);
        Decoded {
            ar: constrained_ar(ar),
            ma: constrained_ma(ma),
            seasonal_ar: constrained_ar(sar),
            seasonal_ma: constrained_ma(sma),
            mean: rest.first().copied().unwrap_or(0.0),
        }
    }
}

/// Fits by conditional sum of squares, then refines by exact Gaussian
/// likelihood. Coefficients are optimised through a transform that keeps
/// every AR polynomial stationary and every MA polynomial invertible. The
/// differenced series is standardised internally; reported quantities are on
/// the original scale.
pub fn fit_sarima(series: &[f64], order: SarimaOrder) -> Result<SarimaModel> {
    fit_with(series, order, &NelderMeadOptions::default())
}

pub(crate) fn fit_with(series: &[f64], order: SarimaOrder, opts: &NelderMeadOptions) -> Result<SarimaModel> {
    order.validate()?;
    if series.len() < order.min_length() {
        return Err(Error::InvalidArgument(format!(
            "order {order} needs at least {} observations, have {}",
            order.min_length(),
            series.len()
        )));
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("series contains non-finite values".into()));
    }

    let w = apply(&differencing_polynomial(order.d, order.seasonal_d, order.m), series);
    let n = w.len() as f64;
    let w_mean = w.iter().sum::<f64>() / n;
    let scale = (w.iter().map(|x| (x - w_mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain("differenced series has zero variance".into()));
    }
    let z: Vec<f64> = w.iter().map(|x| x / scale).collect();

    let layout = Layout { order };
    let mut x0 = vec![0.0; layout.len()];
    if order.has_intercept() {
        x0[layout.len() - 1] = w_mean / scale;
    }

    let burn_in = order.p + order.m * order.seasonal_p;
    let css = |x: &[f64]| {
        let d = layout.decode(x);
        let e = arma_residuals(&z, d.mean, &full_ar(&d.ar, &d.seasonal_ar, order.m), &full_ma(&d.ma, &d.seasonal_ma, order.m));
        let tail = &e[burn_in.min(e.len())..];
        let ss: f64 = tail.iter().map(|v| v * v).sum();
        0.5 * (ss / tail.len() as f64).ln()
    };
    let neg_ll = |x: &[f64]| {
        let d = layout.decode(x);
        let centred: Vec<f64> = z.iter().map(|v| v - d.mean).collect();
        ArmaStateSpace::new(&full_ar(&d.ar, &d.seasonal_ar, order.m), &full_ma(&d.ma, &d.seasonal_ma, order.m))
            .concentrated_log_likelihood(&centred)
            .map_or(f64::INFINITY, |c| -c.log_likelihood / n)
    };

    let css_fit = nelder_mead(css, &x0, opts);
    let mut x = if neg_ll(&css_fit.x).is_finite() { css_fit.x } else { x0 };
    let mut value = neg_ll(&x);
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..MAX_RUNS {
        let run = nelder_mead(neg_ll, &x, opts);
        iterations += run.iterations;
        trace.extend(run.history.iter().map(|v| -v * n - n * scale.ln()));
        let gain = value - run.value;
        x = run.x;
        value = run.value;
        converged = run.converged;
        if converged && gain <= opts.ftol * (1.0 + value.abs()) {
            break;
        }
    }

    let d = layout.decode(&x);
    let phi = full_ar(&d.ar, &d.seasonal_ar, order.m);
    let theta = full_ma(&d.ma, &d.seasonal_ma, order.m);
    let centred: Vec<f64> = z.iter().map(|v| v - d.mean).collect();
    let fit = ArmaStateSpace::new(&phi, &theta)
        .concentrated_log_likelihood(&centred)
        .ok_or_else(|| Error::Domain(format!("likelihood undefined at the optimum of {order}")))?;

    let log_likelihood = fit.log_likelihood - n * scale.ln();
    let k = layout.len() + 1;
    let intercept = if order.has_intercept() { d.mean * scale * (1.0 - phi.iter().sum::<f64>()) } else { 0.0 };
    let model = SarimaModel {
        order,
        ar: d.ar,
        ma: d.ma,
        seasonal_ar: d.seasonal_ar,
        seasonal_ma: d.seasonal_ma,
        intercept,
        innovation_variance: fit.sigma2 * scale * scale,
        log_likelihood,
        aic: 2.0 * k as f64 - 2.0 * log_likelihood,
        n_obs: w.len(),
        trace,
    };
    if !converged {
        return Err(Error::NonConvergence { iterations, best: Box::new(model) });
    }
    model.check_constraints()?;
    Ok(model)
}

/// Candidate orders for [`select_sarima_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderGrid {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub seasonal_p: Vec<usize>,
    pub seasonal_q: Vec<usize>,
    pub d: usize,
    pub seasonal_d: usize,
    pub m: usize,
}

impl OrderGrid {
    /// `0..=p_max` etc., differenced once at lags 1 and 12.
    pub fn monthly(p_max: usize, q_max: usize, seasonal_p_max: usize, seasonal_q_max: usize) -> Self {
        Self {
            p: (0..=p_max).collect(),
            q: (0..=q_max).collect(),
            seasonal_p: (0..=seasonal_p_max).collect(),
            seasonal_q: (0..=seasonal_q_max).collect(),
            d: 1,
            seasonal_d: 1,
            m: 12,
        }
    }

    pub fn single(order: SarimaOrder) -> Self {
        Self {
            p: vec![order.p],
            q: vec![order.q],
            seasonal_p: vec![order.seasonal_p],
            seasonal_q: vec![order.seasonal_q],
            d: order.d,
            seasonal_d: order.seasonal_d,
            m: order.m,
        }
    }

    pub fn cells(&self) -> Vec<SarimaOrder> {
        let mut out = Vec::new();
        for &p in &self.p {
            for &q in &self.q {
                for &sp in &self.seasonal_p {
                    for &sq in &self.seasonal_q {
                        out.push(SarimaOrder::new(p, self.d, q, sp, self.seasonal_d, sq, self.m));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct OrderSelection {
    pub order: SarimaOrder,
    pub model: SarimaModel,
    /// AIC of every cell in grid order, or the reason it was skipped.
    pub cells: Vec<(SarimaOrder, std::result::Result<f64, String>)>,
}

/// Minimum-AIC order over the grid. Cells that fail to fit are skipped; ties
/// go to fewer coefficients, then to the lexicographically smallest
/// `(p, q, P, Q)`.
pub fn select_sarima_order(series: &[f64], grid: &OrderGrid) -> Result<OrderSelection> {
    let orders = grid.cells();
    if orders.is_empty() {
        return Err(Error::InvalidArgument("order grid is empty".into()));
    }
    let fits: Vec<Result<SarimaModel>> = orders.par_iter().map(|&o| fit_sarima(series, o)).collect();

    let key = |o: &SarimaOrder| (o.n_coefficients(), o.p, o.q, o.seasonal_p, o.seasonal_q);
    let mut best: Option<&SarimaModel> = None;
    for model in fits.iter().flatten() {
        best = match best {
            None => Some(model),
            Some(b) if model.aic < b.aic - 1e-9 => Some(model),
            Some(b) if (model.aic - b.aic).abs() <= 1e-9 && key(&model.order) < key(&b.order) => Some(model),
            keep => keep,
        };
    }
    let cells = orders
        .iter()
        .zip(&fits)
        .map(|(o, r)| (*o, r.as_ref().map(|m| m.aic).map_err(|e| e.to_string())))
        .collect::<Vec<_>>();
    match best {
        Some(model) => Ok(OrderSelection { order: model.order, model: model.clone(), cells }),
        None => Err(Error::AllCellsFailed(cells.into_iter().map(|(o, r)| format!("{o}: {}", r.unwrap_err())).collect())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::RngStream;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0);
        (0..n).map(|_| rng.normal()).collect()
    }

    #[test]
    fn ar1_recovery() {
        let e = noise(800, 5);
        let mut y = vec![0.0; 800];
        for t in 1..800 {
            y[t] = 0.6 * y[t - 1] + e[t];
        }
        let m = fit_sarima(&y, SarimaOrder::new(1, 0, 0, 0, 0, 0, 12)).unwrap();
        assert!((m.ar[0] - 0.6).abs() < 0.06, "{:?}", m.ar);
        assert!((m.innovation_variance - 1.0).abs() < 0.12);
        assert!(m.intercept.abs() < 0.15);
    }

    #[test]
    fn ma1_recovery() {
        let e = noise(800, 6);
        let y: Vec<f64> = (0..800).map(|t| e[t] + if t > 0 { 0.5 * e[t - 1] } else { 0.0 }).collect();
        let m = fit_sarima(&y, SarimaOrder::new(0, 0, 1, 0, 0, 0, 12)).unwrap();
        assert!((m.ma[0] - 0.5).abs() < 0.07, "{:?}", m.ma);
    }

    #[test]
    fn pure_differencing_has_no_coefficients() {
        let y: Vec<f64> = noise(40, 2).iter().scan(0.0, |s, e| { *s += e; Some(*s) }).collect();
        let m = fit_sarima(&y, SarimaOrder::new(0, 1, 0, 0, 0, 0, 12)).unwrap();
        assert_eq!(m.order.n_coefficients(), 0);
        assert_eq!(m.intercept, 0.0);
        assert_eq!(m.aic, 2.0 - 2.0 * m.log_likelihood);
    }

    #[test]
    fn too_short_rejected() {
        let order = SarimaOrder::monthly(1, 1, 1, 1);
        assert!(matches!(fit_sarima(&noise(order.min_length() - 1, 1), order), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn trace_is_monotone() {
        let e = noise(200, 8);
        let mut y = vec![0.0; 200];
        for t in 2..200 {
            y[t] = 0.5 * y[t - 1] - 0.2 * y[t - 2] + e[t] + 0.3 * e[t - 1];
        }
        let m = fit_sarima(&y, SarimaOrder::new(2, 0, 1, 0, 0, 0, 12)).unwrap();
        assert!(!m.trace.is_empty());
        assert!(m.trace.windows(2).all(|w| w[1] >= w[0]));
        assert!((m.trace.last().unwrap() - m.log_likelihood).abs() < 1e-9 * m.log_likelihood.abs());
    }

    #[test]
    fn iteration_cap_reports_best_iterate() {
        let e = noise(200, 9);
        let opts = NelderMeadOptions { max_iterations: 3, ..Default::default() };
        match fit_with(&e, SarimaOrder::new(2, 0, 2, 0, 0, 0, 12), &opts) {
            Err(Error::NonConvergence { iterations, best }) => {
                assert!(iterations > 0);
                assert!(best.log_likelihood.is_finite());
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn single_cell_grid() {
        let y: Vec<f64> = noise(60, 3).iter().enumerate().map(|(t, e)| 10.0 + (t as f64 * 0.5).sin() + 0.1 * e).collect();
        let order = SarimaOrder::monthly(1, 0, 0, 1);
        let sel = select_sarima_order(&y, &OrderGrid::single(order)).unwrap();
        assert_eq!(sel.order, order);
        assert_eq!(sel.cells.len(), 1);
    }

    #[test]
    fn all_cells_failing() {
        let grid = OrderGrid::single(SarimaOrder::monthly(7, 1, 1, 2));
        assert!(matches!(select_sarima_order(&noise(30, 1), &grid), Err(Error::AllCellsFailed(v)) if v.len() == 1));
    }
}
