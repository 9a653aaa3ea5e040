use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMetrics {
    pub mae: f64,
    pub rmse: f64,
    /// Fraction; `None` when an observed value is zero.
    pub mape: Option<f64>,
}

impl ErrorMetrics {
    pub fn mape(&self) -> Result<f64> {
        self.mape.ok_or_else(|| Error::Domain("MAPE undefined: an observed value is zero".into()))
    }

    /// Forecasting accuracy, `1 - MAPE`.
    pub fn accuracy(&self) -> Option<f64> {
        self.mape.map(|m| 1.0 - m)
    }
}

/// MAE, RMSE and MAPE (relative to the observed value) of paired sequences.
pub fn error_metrics(forecast: &[f64], observed: &[f64]) -> Result<ErrorMetrics> {
    if forecast.len() != observed.len() {
        return Err(Error::InvalidArgument(format!(
            "forecast has {} values, observed {}",
            forecast.len(),
            observed.len()
        )));
    }
    if forecast.is_empty() {
        return Err(Error::InvalidArgument("no values to compare".into()));
    }
    let n = forecast.len() as f64;
    let mut abs = 0.0;
    let mut sq = 0.0;
    let mut rel = Some(0.0);
    for (f, o) in forecast.iter().zip(observed) {
        let err = (f - o).abs();
        abs += err;
        sq += err * err;
        rel = rel.and_then(|r| (*o != 0.0).then(|| r + err / o.abs()));
    }
    Ok(ErrorMetrics { mae: abs / n, rmse: (sq / n).sqrt(), mape: rel.map(|r| r / n) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_arithmetic() {
        let m = error_metrics(&[2.0, 4.0], &[1.0, 5.0]).unwrap();
        assert_eq!(m.mae, 1.0);
        assert_eq!(m.rmse, 1.0);
        assert!((m.mape.unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn perfect_forecast() {
        let m = error_metrics(&[0.1, 0.2], &[0.1, 0.2]).unwrap();
        assert_eq!((m.mae, m.rmse, m.mape), (0.0, 0.0, Some(0.0)));
    }

    #[test]
    fn zero_observation_only_drops_mape() {
        let m = error_metrics(&[1.0, 1.0], &[0.0, 2.0]).unwrap();
        assert_eq!(m.mae, 1.0);
        assert!(m.mape.is_none());
        assert!(matches!(m.mape(), Err(Error::Domain(_))));
    }

    #[test]
    fn shape_errors() {
        assert!(error_metrics(&[1.0], &[1.0, 2.0]).is_err());
        assert!(error_metrics(&[], &[]).is_err());
    }

    #[test]
    fn mape_is_not_symmetric() {
        let a = error_metrics(&[2.0], &[1.0]).unwrap();
        let b = error_metrics(&[1.0], &[2.0]).unwrap();
        assert_eq!(a.mae, b.mae);
        assert_ne!(a.mape, b.mape);
    }

    proptest! {
        #[test]
        fn invariants(
            pairs in prop::collection::vec((0.001f64..1.0, 0.001f64..1.0), 1..50),
            k in 0.01f64..100.0,
        ) {
            let (f, o): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let m = error_metrics(&f, &o).unwrap();
            prop_assert!(m.rmse >= m.mae * (1.0 - 1e-12));
            prop_assert!(m.mape.unwrap() >= 0.0);

            let swapped = error_metrics(&o, &f).unwrap();
            prop_assert!((swapped.mae - m.mae).abs() <= 1e-12 * m.mae.max(1.0));
            prop_assert!((swapped.rmse - m.rmse).abs() <= 1e-12 * m.rmse.max(1.0));

            let fs: Vec<f64> = f.iter().map(|x| x * k).collect();
            let os: Vec<f64> = o.iter().map(|x| x * k).collect();
            let scaled = error_metrics(&fs, &os).unwrap();
            prop_assert!((scaled.mae - k * m.mae).abs() <= 1e-9 * k * m.mae.max(1e-12));
            prop_assert!((scaled.rmse - k * m.rmse).abs() <= 1e-9 * k * m.rmse.max(1e-12));
            prop_assert!((scaled.mape.unwrap() - m.mape.unwrap()).abs() <= 1e-9 * m.mape.unwrap().max(1e-12));
        }
    }
}
