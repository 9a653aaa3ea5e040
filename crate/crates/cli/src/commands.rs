//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};

use collision_core::baselines::SarimaOrder;
use collision_core::dataset::{estimate_heston_params, EstimatedModel, EstimationOverrides, RateSeries};
use collision_core::evaluation::{backtest, compare_models, BacktestModel, BacktestSpec, ErrorReport, Window};
use collision_core::heston::{run_ensemble, scenario_preset, ExtendedHeston, ForecastConfig};
use collision_core::sde::GompertzShockConfig;

use crate::data::{Bundled, DataSource};
use crate::error::{usage, CliResult};
use crate::params::{toml_float, Params};
use crate::plot::fan_chart;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Common {
    pub input: Option<PathBuf>,
    pub params: Option<PathBuf>,
    pub set: Vec<String>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Default)]
pub struct ForecastOptions {
    pub common: Common,
    pub months: Option<u64>,
    pub sims: Option<u64>,
    pub seed: Option<u64>,
    pub scenario: Option<u8>,
    pub plot: bool,
}

#[derive(Debug, Clone, Default)]
pub struct BacktestOptions {
    pub common: Common,
    pub sims: Option<u64>,
    pub seed: Option<u64>,
    pub train: Option<String>,
    pub test: Option<String>,
    pub models: Option<String>,
}

const DEFAULT_SARIMA_ORDER: &str = "(7,1,1)x(1,1,2)12";

/// Parameter file, then scenario preset, then `--set`.
fn layered(common: &Common, scenario: Option<u8>) -> CliResult<Params> {
    let mut params = match &common.params {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            Params::parse_file(&text)?
        }
        None => Params::default(),
    };
    if let Some(id) = scenario {
        let preset = scenario_preset(id)?;
        params.remove("heston.kappa");
        let o = preset.overrides;
        for (key, value) in [("heston.mu", o.mu), ("heston.v0", o.v0), ("heston.theta", o.theta), ("heston.c1", o.c1)] {
            if let Some(x) = value {
                params.set(key, x);
            }
        }
        write_shock(&mut params, &preset.shock);
    }
    for assignment in &common.set {
        params.parse_assignment(assignment)?;
    }
    Ok(params)
}

fn overrides(params: &Params) -> EstimationOverrides {
    EstimationOverrides {
        mu: params.float("heston.mu"),
        v0: params.float("heston.v0"),
        theta: params.float("heston.theta"),
        kappa: params.float("heston.kappa"),
        xi: params.float("heston.xi"),
        rho: params.float("heston.rho"),
        c1: params.float("heston.c1"),
        amplitude: params.float("seasonal.amplitude"),
    }
}

/// Estimates from data, then applies the remaining seasonal keys.
fn resolve_model(series: &RateSeries, params: &Params) -> CliResult<EstimatedModel> {
    let mut est = estimate_heston_params(series, &overrides(params))?;
    if let Some(f) = params.float("seasonal.frequency") {
        est.seasonal.frequency = f;
    }
    if let Some(phi) = params.float("seasonal.phase") {
        est.seasonal.phase = phi;
    }
    if let Some(m) = params.int("seasonal.start_month") {
        est.seasonal.start_month = u32::try_from(m).map_err(|_| usage("seasonal.start_month out of range"))?;
    }
    est.seasonal.validate()?;
    Ok(est)
}

fn write_model(params: &mut Params, est: &EstimatedModel) {
    let p = &est.params;
    params.set("heston.mu", p.mu);
    params.set("heston.v0", p.cir.v0);
    params.set("heston.theta", p.cir.theta);
    params.set("heston.kappa", p.cir.kappa);
    params.set("heston.xi", p.cir.xi);
    params.set("heston.rho", p.rho);
    params.set("heston.c1", p.c1);
    params.set("seasonal.amplitude", est.seasonal.amplitude);
    params.set("seasonal.frequency", est.seasonal.frequency);
    params.set("seasonal.phase", est.seasonal.phase);
    params.set("seasonal.start_month", i64::from(est.seasonal.start_month));
}

fn resolve_shock(params: &Params) -> CliResult<GompertzShockConfig> {
    let d = GompertzShockConfig::disabled();
    let int = |key: &str, default: u32| -> CliResult<u32> {
        params.int(key).map_or(Ok(default), |v| u32::try_from(v).map_err(|_| usage(format!("{key} out of range"))))
    };
    let shock = GompertzShockConfig {
        expected_shocks: params.float("shock.expected_shocks").unwrap_or(d.expected_shocks),
        shape_b: params.float("shock.shape_b").unwrap_or(d.shape_b),
        eta: params.float("shock.eta").unwrap_or(d.eta),
        duration_months: int("shock.duration_months", d.duration_months)?,
        alpha_low: int("shock.alpha_low", d.alpha_low)?,
        alpha_high: int("shock.alpha_high", d.alpha_high)?,
        enabled: params.boolean("shock.enabled").unwrap_or(d.enabled),
        suppress_retrigger: params.boolean("shock.suppress_retrigger").unwrap_or(d.suppress_retrigger),
    };
    shock.validate()?;
    Ok(shock)
}

fn write_shock(params: &mut Params, shock: &GompertzShockConfig) {
    params.set("shock.enabled", shock.enabled);
    params.set("shock.expected_shocks", shock.expected_shocks);
    params.set("shock.shape_b", shock.shape_b);
    params.set("shock.eta", shock.eta);
    params.set("shock.duration_months", i64::from(shock.duration_months));
    params.set("shock.alpha_low", i64::from(shock.alpha_low));
    params.set("shock.alpha_high", i64::from(shock.alpha_high));
    params.set("shock.suppress_retrigger", shock.suppress_retrigger);
}

fn usize_key(params: &Params, key: &str, default: usize) -> CliResult<usize> {
    params.int(key).map_or(Ok(default), |v| usize::try_from(v).map_err(|_| usage(format!("{key} out of range"))))
}

fn apply_flag(params: &mut Params, key: &str, flag: Option<u64>) -> CliResult<()> {
    if let Some(v) = flag {
        let v = i64::try_from(v).map_err(|_| usage(format!("{key} out of range")))?;
        params.set(key, v);
    }
    Ok(())
}

/// `run.*` provenance lines followed by the resolved configuration.
fn manifest(command: &str, data: &DataSource, seed: Option<u64>, extra: &[(&str, String)], resolved: &Params) -> String {
    let mut text = String::new();
    text.push_str(&format!("run.command = {}\n", quote(command)));
    text.push_str(&format!("run.version = {}\n", quote(env!("CARGO_PKG_VERSION"))));
    text.push_str(&format!("run.data = {}\n", quote(&data.label)));
    text.push_str(&format!("run.data_sha256 = {}\n", quote(&data.sha256())));
    if let Some(seed) = seed {
        text.push_str(&format!("run.seed = {seed}\n"));
    }
    for (key, value) in extra {
        text.push_str(&format!("run.{key} = {value}\n"));
    }
    text.push_str(&resolved.render());
    text
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> CliResult<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

pub fn estimate(common: &Common) -> CliResult<()> {
    let data = DataSource::resolve(common.input.as_deref(), Bundled::Recent)?;
    let series = data.series()?;
    let params = layered(common, None)?;
    let est = resolve_model(&series, &params)?;
    let start = series.last_period().expect("estimation requires data").succ();

    let mut resolved = params.clone();
    write_model(&mut resolved, &est);
    resolved.set("forecast.start_year", i64::from(start.year));

    let s = &est.stats;
    let mut report = resolved.render();
    let mut info = |key: &str, x: f64| report.push_str(&format!("estimate.{key} = {}\n", toml_float(x)));
    info("monthly_logdiff_std", s.monthly_logdiff_std);
    info("annualized_volatility", s.annualized_volatility);
    info("vol_of_vol", s.vol_of_vol);
    info("rate_vol_correlation", s.rate_vol_correlation);
    info("mean_rate", s.mean_rate);
    info("amplitude_error", est.seasonal_fit.error_at_optimum());
    for y in &s.yearly_volatilities {
        report.push_str(&format!("estimate.yearly_volatility.\"{}\" = {}\n", y.year, toml_float(y.volatility)));
        report.push_str(&format!("estimate.yearly_mean_rate.\"{}\" = {}\n", y.year, toml_float(y.mean_rate)));
    }
    for (a, err) in &est.seasonal_fit.error_by_amplitude {
        report.push_str(&format!("amplitude_errors.\"{}\" = {}\n", a, toml_float(*err)));
    }
    let path = write_file(&common.out, "params.toml", report.as_bytes())?;
    write_file(&common.out, "manifest.toml", manifest("estimate", &data, None, &[], &resolved).as_bytes())?;

    let p = &est.params;
    println!("Data: {} ({} months)", data.label, series.len());
    println!("Annualized volatility: {:.2}%", s.annualized_volatility * 100.0);
    for y in &s.yearly_volatilities {
        println!("  {}: mean rate {:.4}%, volatility {:.2}%", y.year, y.mean_rate * 100.0, y.volatility * 100.0);
    }
    println!("Vol of vol (xi): {:.2}%", s.vol_of_vol * 100.0);
    println!("Rate/volatility correlation (rho): {:.3}", p.rho);
    println!("v0 = {:.6}, theta = {:.6}, kappa = {:.6}", p.cir.v0, p.cir.theta, p.cir.kappa);
    println!("Start rate C1: {:.5}%", p.c1 * 100.0);
    println!("Seasonal amplitude: {:.1}%", est.seasonal.amplitude * 100.0);
    println!("Wrote {}", path.display());
    Ok(())
}

pub fn forecast(opts: &ForecastOptions, command: &str) -> CliResult<()> {
    let data = DataSource::resolve(opts.common.input.as_deref(), Bundled::Recent)?;
    let series = data.series()?;
    let mut params = layered(&opts.common, opts.scenario)?;
    apply_flag(&mut params, "forecast.horizon_months", opts.months)?;
    apply_flag(&mut params, "forecast.n_sims", opts.sims)?;
    apply_flag(&mut params, "forecast.master_seed", opts.seed)?;

    let est = resolve_model(&series, &params)?;
    let shock = resolve_shock(&params)?;
    let defaults = ForecastConfig::default();
    let start_year = match params.int("forecast.start_year") {
        Some(y) => i32::try_from(y).map_err(|_| usage("forecast.start_year out of range"))?,
        None => series.last_period().expect("estimation requires data").succ().year,
    };
    let config = ForecastConfig {
        horizon_months: usize_key(&params, "forecast.horizon_months", defaults.horizon_months)?,
        n_sims: usize_key(&params, "forecast.n_sims", defaults.n_sims)?,
        master_seed: params.int("forecast.master_seed").unwrap_or(defaults.master_seed),
        percentile_levels: params.floats("forecast.percentile_levels").unwrap_or(defaults.percentile_levels),
        start_year,
    };
    config.validate()?;

    let mut resolved = params.clone();
    write_model(&mut resolved, &est);
    write_shock(&mut resolved, &shock);
    resolved.set("forecast.horizon_months", config.horizon_months as i64);
    resolved.set("forecast.n_sims", config.n_sims as i64);
    resolved.set("forecast.master_seed", config.master_seed as i64);
    resolved.set("forecast.start_year", i64::from(config.start_year));
    resolved.set_floats("forecast.percentile_levels", &config.percentile_levels);

    let label = match opts.scenario {
        Some(id) => scenario_preset(id)?.label,
        None => "Extended Heston forecast".to_string(),
    };
    let model = ExtendedHeston { params: est.params, seasonal: est.seasonal, shock };
    let ensemble = run_ensemble(&model, &config, &label)?;

    let mut csv = Vec::new();
    ensemble.write_csv(&mut csv)?;
    let path = write_file(&opts.common.out, "forecast.csv", &csv)?;
    if opts.plot {
        write_file(&opts.common.out, "forecast.svg", fan_chart(&ensemble, &label).as_bytes())?;
    }
    let mut extra = Vec::new();
    if let Some(id) = opts.scenario {
        extra.push(("scenario", id.to_string()));
    }
    let text = manifest(command, &data, Some(config.master_seed), &extra, &resolved);
    write_file(&opts.common.out, "manifest.toml", text.as_bytes())?;

    println!("{label}: {} paths over {} months from {}", config.n_sims, config.horizon_months, ensemble.start);
    if let Some(last) = ensemble.horizon().checked_sub(1) {
        let ym = ensemble.period(last);
        println!(
            "{}-{:02}: median {:.4}%, 80% interval [{:.4}%, {:.4}%]",
            ym.year,
            ym.month,
            ensemble.percentile_at(last, 50.0) * 100.0,
            ensemble.percentile_at(last, 10.0) * 100.0,
            ensemble.percentile_at(last, 90.0) * 100.0
        );
    }
    println!("Wrote {}", path.display());
    Ok(())
}

/// Parses `YYYY` or `YYYY-YYYY` into a window of whole years.
fn parse_years(text: &str) -> CliResult<Window> {
    let bad = || usage(format!("year range {text:?} is not of the form YYYY or YYYY-YYYY"));
    let (a, b) = text.split_once('-').unwrap_or((text, text));
    let first: i32 = a.trim().parse().map_err(|_| bad())?;
    let last: i32 = b.trim().parse().map_err(|_| bad())?;
    if last < first {
        return Err(bad());
    }
    Ok(Window::years(first, last))
}

fn parse_model(name: &str, params: &Params, anchor: bool) -> CliResult<BacktestModel> {
    match name.trim().to_ascii_lowercase().as_str() {
        "heston" => Ok(BacktestModel::ExtendedHeston { overrides: overrides(params) }),
        "vasicek" => Ok(BacktestModel::AdjustedVasicek { anchor_theta: anchor }),
        "sarima" => {
            let order: SarimaOrder = params.text("sarima.order").unwrap_or(DEFAULT_SARIMA_ORDER).parse()?;
            Ok(BacktestModel::Sarima { order, anchor })
        }
        other => Err(usage(format!("unknown model {other:?}; expected heston, vasicek or sarima"))),
    }
}

fn slug(label: &str) -> String {
    label.to_ascii_lowercase().split(|c: char| !c.is_ascii_alphanumeric()).filter(|s| !s.is_empty()).collect::<Vec<_>>().join("_")
}

fn report_csv(report: &ErrorReport) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    Ok(buf)
}

/// Resolved specs for `backtest` (exactly one model) and `compare`.
fn backtest_specs(opts: &BacktestOptions, default_models: &str) -> CliResult<(Vec<BacktestSpec>, Params)> {
    let mut params = layered(&opts.common, None)?;
    apply_flag(&mut params, "forecast.n_sims", opts.sims)?;
    apply_flag(&mut params, "forecast.master_seed", opts.seed)?;
    for (key, flag) in [("backtest.train", &opts.train), ("backtest.test", &opts.test), ("backtest.models", &opts.models)] {
        if let Some(v) = flag {
            params.set(key, v.as_str());
        }
    }
    let train = parse_years(params.text("backtest.train").unwrap_or("2009-2013"))?;
    let test = parse_years(params.text("backtest.test").unwrap_or("2014-2018"))?;
    let anchor = params.boolean("backtest.anchor").unwrap_or(true);
    let n_sims = usize_key(&params, "forecast.n_sims", 5000)?;
    let master_seed = params.int("forecast.master_seed").unwrap_or(42);
    let models = params.text("backtest.models").unwrap_or(default_models).to_string();

    let mut specs = Vec::new();
    for name in models.split(',').filter(|s| !s.trim().is_empty()) {
        let model = parse_model(name, &params, anchor)?;
        let spec = BacktestSpec { label: model.name().to_string(), train, test, model, n_sims, master_seed };
        spec.validate()?;
        specs.push(spec);
    }
    if specs.is_empty() {
        return Err(usage("no models selected"));
    }

    let mut resolved = params;
    resolved.set("backtest.train", format!("{}-{}", train.start.year, train.end().plus_months(-1).year));
    resolved.set("backtest.test", format!("{}-{}", test.start.year, test.end().plus_months(-1).year));
    resolved.set("backtest.models", models.as_str());
    resolved.set("backtest.anchor", anchor);
    resolved.set("forecast.n_sims", n_sims as i64);
    resolved.set("forecast.master_seed", master_seed as i64);
    if resolved.text("sarima.order").is_none() {
        resolved.set("sarima.order", DEFAULT_SARIMA_ORDER);
    }
    Ok((specs, resolved))
}

fn check_coverage(series: &RateSeries, spec: &BacktestSpec) -> CliResult<()> {
    for w in [spec.train, spec.test] {
        if series.window(w.start, w.months).is_err() {
            let last = w.end().plus_months(-1);
            return Err(usage(format!("data does not cover {} to {}", w.start, last)));
        }
    }
    Ok(())
}

pub fn run_backtest(opts: &BacktestOptions) -> CliResult<()> {
    let data = DataSource::resolve(opts.common.input.as_deref(), Bundled::Decade)?;
    let series = data.series()?;
    let (specs, resolved) = backtest_specs(opts, "heston")?;
    let [spec] = specs.as_slice() else {
        return Err(usage("backtest runs exactly one model; use compare for several"));
    };
    check_coverage(&series, spec)?;
    let report = backtest(spec, &series)?;
    let name = format!("report_{}.csv", slug(&spec.label));
    let path = write_file(&opts.common.out, &name, &report_csv(&report)?)?;
    let text = manifest("backtest", &data, Some(spec.master_seed), &[], &resolved);
    write_file(&opts.common.out, "manifest.toml", text.as_bytes())?;
    print!("{}", report.to_table());
    println!("Wrote {}", path.display());
    Ok(())
}

pub fn run_compare(opts: &BacktestOptions) -> CliResult<()> {
    let data = DataSource::resolve(opts.common.input.as_deref(), Bundled::Decade)?;
    let series = data.series()?;
    let (specs, resolved) = backtest_specs(opts, "heston,vasicek,sarima")?;
    for spec in &specs {
        check_coverage(&series, spec)?;
    }
    let comparison = compare_models(&specs, &series)?;
    for (label, result) in &comparison.columns {
        match result {
            Ok(report) => {
                write_file(&opts.common.out, &format!("report_{}.csv", slug(label)), &report_csv(report)?)?;
            }
            Err(e) => eprintln!("{label} failed: {e}"),
        }
    }
    let table = comparison.to_table();
    write_file(&opts.common.out, "comparison.txt", table.as_bytes())?;
    let text = manifest("compare", &data, Some(specs[0].master_seed), &[], &resolved);
    write_file(&opts.common.out, "manifest.toml", text.as_bytes())?;
    print!("{table}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use collision_core::YearMonth;

    #[test]
    fn year_ranges() {
        let w = parse_years("2009-2013").unwrap();
        assert_eq!((w.start, w.months), (YearMonth { year: 2009, month: 1 }, 60));
        assert_eq!(parse_years("2014").unwrap().months, 12);
        assert!(parse_years("2014-2013").is_err());
        assert!(parse_years("20x4").is_err());
    }

    #[test]
    fn slugs() {
        assert_eq!(slug("Extended Heston"), "extended_heston");
        assert_eq!(slug("SARIMA"), "sarima");
    }

    #[test]
    fn scenario_replaces_file_kappa() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("p.toml");
        fs::write(&file, "heston.kappa = 0.5\nheston.xi = 0.2\n").unwrap();
        let common = Common { params: Some(file), set: vec!["heston.mu=0.01".into()], ..Common::default() };
        let p = layered(&common, Some(2)).unwrap();
        assert_eq!(p.float("heston.kappa"), None);
        assert_eq!(p.float("heston.xi"), Some(0.2));
        assert_eq!(p.float("heston.mu"), Some(0.01));
        assert_eq!(p.float("heston.theta"), Some(0.073));
        assert_eq!(p.boolean("shock.enabled"), Some(false));
    }
}
