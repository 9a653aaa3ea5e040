//! Seasonal ARIMA: `phi(B) Phi(B^m) (1 - B)^d (1 - B^m)^D y_t = c + theta(B) Theta(B^m) e_t`
//! with `phi(B) = 1 - phi_1 B - ...` and `theta(B) = 1 + theta_1 B + ...`.

mod fit;
mod forecast;
mod likelihood;
pub mod poly;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use fit::{fit_sarima, select_sarima_order, OrderGrid, OrderSelection};
pub use forecast::{forecast_sarima, reconstruct, residuals};
pub use likelihood::{ArmaStateSpace, Concentrated};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SarimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub seasonal_p: usize,
    pub seasonal_d: usize,
    pub seasonal_q: usize,
    /// Season length.
    pub m: usize,
}

impl SarimaOrder {
    pub const fn new(p: usize, d: usize, q: usize, seasonal_p: usize, seasonal_d: usize, seasonal_q: usize, m: usize) -> Self {
        Self { p, d, q, seasonal_p, seasonal_d, seasonal_q, m }
    }

    /// Orders differenced once at lag 1 and once at lag 12.
    pub const fn monthly(p: usize, q: usize, seasonal_p: usize, seasonal_q: usize) -> Self {
        Self::new(p, 1, q, seasonal_p, 1, seasonal_q, 12)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArgument("season length must be at least 1".into()));
        }
        Ok(())
    }

    pub fn has_intercept(&self) -> bool {
        self.d + self.seasonal_d == 0
    }

    pub fn n_coefficients(&self) -> usize {
        self.p + self.q + self.seasonal_p + self.seasonal_q
    }

    /// Observations consumed by differencing.
    pub fn differencing_lag(&self) -> usize {
        self.d + self.seasonal_d * self.m
    }

    /// Smallest series length accepted by [`fit_sarima`].
    pub fn min_length(&self) -> usize {
        self.differencing_lag() + self.p.max(self.q) + self.m * self.seasonal_p.max(self.seasonal_q) + 11
    }
}

impl fmt::Display for SarimaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})x({},{},{}){}",
            self.p, self.d, self.q, self.seasonal_p, self.seasonal_d, self.seasonal_q, self.m
        )
    }
}

impl FromStr for SarimaOrder {
    type Err = Error;

    /// Accepts `p,d,q,P,D,Q,m` or the display form `(p,d,q)x(P,D,Q)m`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse SARIMA order {s:?}"));
        let cleaned: String = s.chars().map(|c| if c.is_ascii_digit() { c } else { ',' }).collect();
        let parts: Vec<usize> = cleaned
            .split(',')
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [p, d, q, sp, sd, sq, m] => {
                let order = Self::new(p, d, q, sp, sd, sq, m);
                order.validate()?;
                Ok(order)
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SarimaModel {
    pub order: SarimaOrder,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub seasonal_ar: Vec<f64>,
    pub seasonal_ma: Vec<f64>,
    /// `c`; zero whenever the series is differenced.
    pub intercept: f64,
    pub innovation_variance: f64,
    pub log_likelihood: f64,
    pub aic: f64,
    /// Length of the differenced series the likelihood was evaluated on.
    pub n_obs: usize,
    /// Log-likelihood of the best simplex vertex after each optimiser
    /// iteration of the exact-likelihood stage.
    pub trace: Vec<f64>,
}

impl SarimaModel {
    /// `phi(B) Phi(B^m)` written as `w_t = sum_i coef[i] w_{t-1-i} + ...`.
    pub fn full_ar(&self) -> Vec<f64> {
        full_ar(&self.ar, &self.seasonal_ar, self.order.m)
    }

    /// `theta(B) Theta(B^m)` written as `e_t + sum_j coef[j] e_{t-1-j}`.
    pub fn full_ma(&self) -> Vec<f64> {
        full_ma(&self.ma, &self.seasonal_ma, self.order.m)
    }

    /// Mean of the differenced series.
    pub fn mean(&self) -> f64 {
        let denom = 1.0 - self.full_ar().iter().sum::<f64>();
        self.intercept / denom
    }

    /// Stationarity of both AR polynomials and invertibility of both MA polynomials.
    pub fn check_constraints(&self) -> Result<()> {
        let checks = [
            ("AR", poly::ar_to_pacf(&self.ar).is_some()),
            ("seasonal AR", poly::ar_to_pacf(&self.seasonal_ar).is_some()),
            ("MA", poly::unconstrained_ma(&self.ma).is_some()),
            ("seasonal MA", poly::unconstrained_ma(&self.seasonal_ma).is_some()),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::Constraint(format!("{name} polynomial has a root on or inside the unit circle")));
            }
        }
        Ok(())
    }

    /// Plain `key = value` text; floats carry 17 significant digits.
    pub fn dump(&self) -> String {
        let list = |xs: &[f64]| xs.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(", ");
        let o = self.order;
        format!(
            "order = {}, {}, {}, {}, {}, {}, {}\nar = {}\nma = {}\nseasonal_ar = {}\nseasonal_ma = {}\n\
             intercept = {:.16e}\ninnovation_variance = {:.16e}\nlog_likelihood = {:.16e}\naic = {:.16e}\nn_obs = {}\n",
            o.p,
            o.d,
            o.q,
            o.seasonal_p,
            o.seasonal_d,
            o.seasonal_q,
            o.m,
            list(&self.ar),
            list(&self.ma),
            list(&self.seasonal_ar),
            list(&self.seasonal_ma),
            self.intercept,
            self.innovation_variance,
            self.log_likelihood,
            self.aic,
            self.n_obs
        )
    }

    /// Parses the output of [`dump`](Self::dump). The optimiser trace is not stored.
    pub fn load(text: &str) -> Result<Self> {
        let mut order = None;
        let (mut ar, mut ma, mut sar, mut sma) = (None, None, None, None);
        let (mut intercept, mut variance, mut ll, mut aic, mut n_obs) = (None, None, None, None, None);

        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| parse_err("expected key = value".into()))?;
            let value = value.trim();
            let floats = || -> Result<Vec<f64>> {
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|e| parse_err(format!("{s:?}: {e}"))))
                    .collect()
            };
            let float = || -> Result<f64> { value.parse::<f64>().map_err(|e| parse_err(format!("{value:?}: {e}"))) };
            match key.trim() {
                "order" => order = Some(value.parse::<SarimaOrder>().map_err(|e| parse_err(e.to_string()))?),
                "ar" => ar = Some(floats()?),
                "ma" => ma = Some(floats()?),
                "seasonal_ar" => sar = Some(floats()?),
                "seasonal_ma" => sma = Some(floats()?),
                "intercept" => intercept = Some(float()?),
                "innovation_variance" => variance = Some(float()?),
                "log_likelihood" => ll = Some(float()?),
                "aic" => aic = Some(float()?),
                "n_obs" => n_obs = Some(value.parse::<usize>().map_err(|e| parse_err(format!("{value:?}: {e}")))?),
                other => return Err(parse_err(format!("unknown key {other:?}"))),
            }
        }

        let missing = |k: &str| Error::Parse { line: text.lines().count(), message: format!("missing key {k:?}") };
        let model = Self {
            order: order.ok_or_else(|| missing("order"))?,
            ar: ar.ok_or_else(|| missing("ar"))?,
            ma: ma.ok_or_else(|| missing("ma"))?,
            seasonal_ar: sar.ok_or_else(|| missing("seasonal_ar"))?,
            seasonal_ma: sma.ok_or_else(|| missing("seasonal_ma"))?,
            intercept: intercept.ok_or_else(|| missing("intercept"))?,
            innovation_variance: variance.ok_or_else(|| missing("innovation_variance"))?,
            log_likelihood: ll.ok_or_else(|| missing("log_likelihood"))?,
            aic: aic.ok_or_else(|| missing("aic"))?,
            n_obs: n_obs.ok_or_else(|| missing("n_obs"))?,
            trace: Vec::new(),
        };
        let o = model.order;
        let lens = [(model.ar.len(), o.p), (model.ma.len(), o.q), (model.seasonal_ar.len(), o.seasonal_p), (model.seasonal_ma.len(), o.seasonal_q)];
        if lens.iter().any(|(have, want)| have != want) {
            return Err(Error::Structure(format!("coefficient counts do not match order {o}")));
        }
        Ok(model)
    }
}

pub(crate) fn full_ar(ar: &[f64], seasonal_ar: &[f64], m: usize) -> Vec<f64> {
    let product = poly::multiply(&poly::lag_polynomial(ar, 1, -1.0), &poly::lag_polynomial(seasonal_ar, m, -1.0));
    product[1..].iter().map(|c| -c).collect()
}

pub(crate) fn full_ma(ma: &[f64], seasonal_ma: &[f64], m: usize) -> Vec<f64> {
    let product = poly::multiply(&poly::lag_polynomial(ma, 1, 1.0), &poly::lag_polynomial(seasonal_ma, m, 1.0));
    product[1..].to_vec()
}
