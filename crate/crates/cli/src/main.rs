//! `collision`: estimate, forecast, backtest and compare collision-rate models.

mod commands;
mod data;
mod error;
mod params;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{BacktestOptions, Common, ForecastOptions};
use error::{usage, CliResult};

#[derive(Parser)]
#[command(name = "collision", version, about = "Stochastic-volatility forecasts of monthly collision rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate model parameters from monthly data and write params.toml.
    Estimate(CommonArgs),
    /// Simulate an ensemble and write percentile forecasts.
    Forecast(ForecastArgs),
    /// Forecast with one of the six preset scenarios.
    Scenario(ForecastArgs),
    /// Score one model on a train/test split.
    Backtest(BacktestArgs),
    /// Score several models on the same split and rank them.
    Compare(BacktestArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Monthly CSV `year,month,collisions,registered_vehicles`; defaults to bundled data.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Parameter file of `key = value` lines.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Override one parameter, e.g. `--set heston.theta=0.0365`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ForecastArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Forecast horizon in months.
    #[arg(long)]
    months: Option<u64>,
    /// Number of simulated paths.
    #[arg(long)]
    sims: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Preset scenario 1-6.
    #[arg(long)]
    scenario: Option<u8>,
    /// Also write forecast.svg.
    #[arg(long)]
    plot: bool,
}

#[derive(Args)]
struct BacktestArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    sims: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Training years, `YYYY-YYYY`.
    #[arg(long)]
    train: Option<String>,
    /// Test years, `YYYY-YYYY`; must follow the training window.
    #[arg(long)]
    test: Option<String>,
    /// Comma-separated subset of heston, vasicek, sarima.
    #[arg(long, alias = "model")]
    models: Option<String>,
}

impl From<CommonArgs> for Common {
    fn from(a: CommonArgs) -> Self {
        Self { input: a.input, params: a.params, set: a.set, out: a.out }
    }
}

impl From<ForecastArgs> for ForecastOptions {
    fn from(a: ForecastArgs) -> Self {
        Self { common: a.common.into(), months: a.months, sims: a.sims, seed: a.seed, scenario: a.scenario, plot: a.plot }
    }
}

impl From<BacktestArgs> for BacktestOptions {
    fn from(a: BacktestArgs) -> Self {
        Self {
            common: a.common.into(),
            sims: a.sims,
            seed: a.seed,
            train: a.train,
            test: a.test,
            models: a.models,
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Estimate(a) => commands::estimate(&a.into()),
        Command::Forecast(a) => commands::forecast(&a.into(), "forecast"),
        Command::Scenario(a) => {
            let opts: ForecastOptions = a.into();
            if opts.scenario.is_none() {
                return Err(usage("scenario requires --scenario 1-6"));
            }
            commands::forecast(&opts, "scenario")
        }
        Command::Backtest(a) => commands::run_backtest(&a.into()),
        Command::Compare(a) => commands::run_compare(&a.into()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
