use collision_core::baselines::{
    fit_sarima, forecast_sarima, select_sarima_order, AdjustedVasicek, OrderGrid, SarimaModel, SarimaOrder,
    VasicekParams,
};
use collision_core::dataset::ireland_2009_2013;
use collision_core::heston::{run_ensemble, ForecastConfig, SeasonalConfig};
use collision_core::sde::{GompertzShockConfig, RngStream};

fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, 0);
    (0..n).map(|_| rng.normal()).collect()
}

#[test]
fn white_noise_ar1_is_negligible() {
    let y = white_noise(500, 11);
    let ar1 = fit_sarima(&y, SarimaOrder::new(1, 0, 0, 0, 0, 0, 12)).unwrap();
    let null = fit_sarima(&y, SarimaOrder::new(0, 0, 0, 0, 0, 0, 12)).unwrap();
    assert!(ar1.ar[0].abs() < 0.15, "{:?}", ar1.ar);
    assert!((ar1.aic - null.aic).abs() < 4.0, "{} vs {}", ar1.aic, null.aic);
    assert!(ar1.log_likelihood >= null.log_likelihood - 1e-6);
}

#[test]
fn seasonal_fit_on_older_series_converges() {
    let rates = ireland_2009_2013().rates().to_vec();
    let m = fit_sarima(&rates, SarimaOrder::monthly(7, 1, 1, 2)).unwrap();
    assert_eq!(m.n_obs, 47);
    assert!(m.check_constraints().is_ok());
    assert!(m.trace.windows(2).all(|w| w[1] >= w[0]));
    let back = SarimaModel::load(&m.dump()).unwrap();
    let a = forecast_sarima(&m, &rates, 24).unwrap();
    let b = forecast_sarima(&back, &rates, 24).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-12 * x.abs());
    }
}

#[test]
fn order_selection_ignores_scale() {
    let rates = ireland_2009_2013().rates().to_vec();
    let scaled: Vec<f64> = rates.iter().map(|r| r * 1000.0).collect();
    let grid = OrderGrid::monthly(1, 1, 0, 1);
    let a = select_sarima_order(&rates, &grid).unwrap();
    let b = select_sarima_order(&scaled, &grid).unwrap();
    assert_eq!(a.order, b.order);
    for ((_, x), (_, y)) in a.cells.iter().zip(&b.cells) {
        if let (Ok(x), Ok(y)) = (x, y) {
            // AIC shifts by the Jacobian term 2 n ln(1000)
            let n = 47.0;
            assert!((y - x - 2.0 * n * 1000f64.ln()).abs() < 1e-3, "{x} {y}");
        }
    }
}

#[test]
fn vasicek_mean_follows_ou_closed_form() {
    // drift sign flipped so that the constant drift term pulls toward theta
    // from c1, matching E[r_t] = theta + (r0 - theta) e^{-kappa t} to first order
    let (kappa, c1) = (0.5, 0.001);
    let theta = 0.0008;
    let model = AdjustedVasicek {
        params: VasicekParams { kappa, theta: 2.0 * c1 - theta, sigma: 0.0, c1 },
        seasonal: SeasonalConfig::default(),
        shock: GompertzShockConfig::disabled(),
    };
    let config = ForecastConfig { horizon_months: 12, n_sims: 1, ..Default::default() };
    let e = run_ensemble(&model, &config, "ou").unwrap();
    // constant drift: after one year the rate moves by kappa (c1 - theta) * 1
    let linear = c1 - kappa * (c1 - theta);
    assert!((e.median()[11] - linear).abs() < 1e-15);
    let exact = theta + (c1 - theta) * (-kappa * 1.0f64).exp();
    assert!((e.median()[11] - exact).abs() < 0.25 * (c1 - theta) * kappa);
}

#[test]
fn vasicek_paths_stay_non_negative() {
    let model = AdjustedVasicek {
        params: VasicekParams { kappa: 8.0, theta: 0.0009, sigma: 0.002, c1: 0.0013 },
        seasonal: SeasonalConfig::with_amplitude(0.09, 1),
        shock: GompertzShockConfig::default(),
    };
    let config = ForecastConfig { horizon_months: 120, n_sims: 200, ..Default::default() };
    let e = run_ensemble(&model, &config, "v").unwrap();
    assert!(e.table.iter().flatten().all(|&x| x >= 0.0));
}
