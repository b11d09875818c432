//! Command-line interface.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tsarma_core::arma::simulate;
use tsarma_core::diagnostics::diagnose;
use tsarma_core::estimation::{auto_select, fit};
use tsarma_core::forecast::forecast;
use tsarma_core::stationarity::{adf_test, Significance};
use tsarma_core::uncertainty::simulate_biased_anomaly;
use tsarma_core::{
    AdfOptions, ArmaParameters, BiasedAnomalyConfig, Criterion, FittedModel, LagSelection, ModelOrder, Regression,
    SelectionGrid, TimeSeries,
};

use crate::analysis::{correlation_at, model_label, run_analysis, AnalysisConfig, ModelSpec};
use crate::ingest::{ingest, ColumnMapping};
use crate::output::{write_bundle, write_failure, Format};
use crate::report::{
    AdfSection, DiagnosticsJson, FitJson, ForecastJson, OrderJson, SelectionSection, SequenceJson, SeriesSection,
    SCHEMA, SCHEMA_VERSION,
};
use crate::{render, svg};

#[derive(Debug, Parser)]
#[command(name = "tsarma", version, about = "ARMA/ARIMA analysis of annual anomaly series")]
pub struct Cli {
    /// More log output (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a CSV file and print a summary of the series
    IngestCheck {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Sample autocorrelation function
    Acf(CorrelationArgs),
    /// Sample partial autocorrelation function
    Pacf(CorrelationArgs),
    /// Augmented Dickey-Fuller unit-root test
    Adf {
        #[command(flatten)]
        input: InputArgs,
        /// Fixed number of lagged differences (default: AIC search)
        #[arg(long)]
        lags: Option<usize>,
        /// Largest lag tried by the AIC search (default: 12 (n/100)^(1/4))
        #[arg(long, conflicts_with = "lags")]
        max_lag: Option<usize>,
        #[arg(long, value_enum, default_value = "constant")]
        regression: RegressionArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Fit one or more explicit orders by exact maximum likelihood
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        models: OrderArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Select an order from a (p, d, q) grid by information criterion
    Auto {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        constant: ConstantArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Residual diagnostics for fitted orders
    Diagnose {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        models: OrderArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Directory for SVG figures
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Point forecasts and prediction intervals
    Forecast {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        models: OrderArgs,
        #[arg(long, default_value_t = 10)]
        horizon: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Directory for SVG figures
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Full pipeline: correlation, ADF, fits, diagnostics, comparison, forecasts
    Report(ReportArgs),
    /// Write a simulated ARIMA series as CSV
    Simulate(SimulateArgs),
    /// Write a simulated biased-anomaly series (land/sea noise) as CSV
    Biased(BiasedArgs),
    /// Download a data file (the only command that uses the network)
    Fetch {
        #[arg(long, default_value = crate::fetch::GISTEMP_URL)]
        url: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file with a header row
    pub path: PathBuf,
    #[arg(long, default_value = "Year")]
    pub year_column: String,
    /// Value column (default: first column after the year column)
    #[arg(long)]
    pub value_column: Option<String>,
}

impl InputArgs {
    fn columns(&self) -> ColumnMapping {
        ColumnMapping {
            year: self.year_column.clone(),
            value: self.value_column.clone(),
        }
    }

    fn load(&self) -> Result<TimeSeries> {
        ingest(&self.path, &self.columns()).with_context(|| format!("reading {}", self.path.display()))
    }
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    /// Include an intercept (default: only when d = 0)
    #[arg(long, conflicts_with = "no_constant")]
    pub constant: bool,
    /// Never include an intercept
    #[arg(long)]
    pub no_constant: bool,
}

impl ConstantArgs {
    fn value(&self) -> Option<bool> {
        match (self.constant, self.no_constant) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Model order as p,d,q (repeatable)
    #[arg(long = "order", value_parser = parse_order, required = true)]
    pub orders: Vec<ModelOrder>,
    #[command(flatten)]
    pub constant: ConstantArgs,
}

impl OrderArgs {
    fn resolved(&self) -> Vec<ModelOrder> {
        self.orders
            .iter()
            .map(|o| self.constant.value().map_or(*o, |c| o.with_constant(c)))
            .collect()
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 2)]
    pub max_p: usize,
    #[arg(long, default_value_t = 0)]
    pub min_d: usize,
    #[arg(long, default_value_t = 2)]
    pub max_d: usize,
    #[arg(long, default_value_t = 2)]
    pub max_q: usize,
    #[arg(long, value_enum, default_value = "aic")]
    pub criterion: CriterionArg,
}

impl GridArgs {
    fn grid(&self) -> SelectionGrid {
        SelectionGrid::new(self.max_p, self.max_d, self.max_q).with_min_d(self.min_d)
    }
}

#[derive(Debug, Args)]
pub struct CorrelationArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 20)]
    pub lags: usize,
    /// Order of differencing applied first
    #[arg(long, default_value_t = 0)]
    pub diff: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Directory for SVG figures
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Model order as p,d,q (repeatable); omit to select from the grid
    #[arg(long = "order", value_parser = parse_order)]
    pub orders: Vec<ModelOrder>,
    #[arg(long, conflicts_with = "orders")]
    pub max_p: Option<usize>,
    #[arg(long, conflicts_with = "orders")]
    pub min_d: Option<usize>,
    #[arg(long, conflicts_with = "orders")]
    pub max_d: Option<usize>,
    #[arg(long, conflicts_with = "orders")]
    pub max_q: Option<usize>,
    #[arg(long, value_enum, default_value = "aic")]
    pub criterion: CriterionArg,
    #[command(flatten)]
    pub constant: ConstantArgs,
    /// Lags for the correlograms
    #[arg(long, default_value_t = 20)]
    pub lags: usize,
    /// Fixed ADF lag count (default: AIC search)
    #[arg(long)]
    pub adf_lags: Option<usize>,
    #[arg(long, value_enum, default_value = "constant")]
    pub adf_regression: RegressionArg,
    #[arg(long, default_value_t = 10)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Recorded in the report; the pipeline itself is deterministic
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output views (repeatable)
    #[arg(long, value_enum, default_values = ["json", "text"])]
    pub format: Vec<Format>,
    #[arg(long)]
    pub out: PathBuf,
}

impl ReportArgs {
    pub fn config(&self) -> AnalysisConfig {
        let models = if self.orders.is_empty() {
            let mut grid = SelectionGrid::new(
                self.max_p.unwrap_or(2),
                self.max_d.unwrap_or(2),
                self.max_q.unwrap_or(2),
            );
            grid.min_d = self.min_d.unwrap_or(0);
            ModelSpec::Auto(grid)
        } else {
            ModelSpec::Orders(self.orders.clone())
        };
        AnalysisConfig {
            input: self.input.path.clone(),
            columns: self.input.columns(),
            models,
            include_constant: self.constant.value(),
            criterion: self.criterion.into(),
            correlation_lags: self.lags,
            adf: AdfOptions {
                regression: self.adf_regression.into(),
                lags: self
                    .adf_lags
                    .map_or(LagSelection::Aic { max_lag: None }, LagSelection::Fixed),
                significance: Significance::Five,
            },
            horizon: self.horizon,
            alpha: self.alpha,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// AR coefficients, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ar: Vec<f64>,
    /// MA coefficients, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ma: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    /// Intercept c in phi(B)(1-B)^d x = c + theta(B) w
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub intercept: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(short, long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub start_year: i64,
    /// Output file (default: stdout)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BiasedArgs {
    /// Additive bias
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Multiplicative bias, |beta| < 1
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Land noise variance
    #[arg(long)]
    pub land: f64,
    /// Sea noise variance
    #[arg(long)]
    pub sea: f64,
    /// Contemporaneous land/sea noise covariance
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub cross: f64,
    #[arg(short, long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub start_year: i64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CriterionArg {
    Aic,
    Bic,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Aic => Criterion::Aic,
            CriterionArg::Bic => Criterion::Bic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegressionArg {
    None,
    Constant,
    ConstantTrend,
}

impl From<RegressionArg> for Regression {
    fn from(r: RegressionArg) -> Self {
        match r {
            RegressionArg::None => Regression::None,
            RegressionArg::Constant => Regression::Constant,
            RegressionArg::ConstantTrend => Regression::ConstantTrend,
        }
    }
}

pub fn parse_order(text: &str) -> Result<ModelOrder, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [p, d, q] = parts.as_slice() else {
        return Err(format!("expected p,d,q, got '{text}'"));
    };
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("'{s}' is not a non-negative integer"))
    };
    let order = ModelOrder::new(num(p)?, num(d)?, num(q)?);
    order.validate().map_err(|e| e.to_string())?;
    Ok(order)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    schema_version: u32,
    command: &'a str,
    result: T,
}

fn emit_json<T: Serialize>(command: &str, result: T) -> Result<()> {
    let env = Envelope {
        schema: SCHEMA,
        schema_version: SCHEMA_VERSION,
        command,
        result,
    };
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &env)?;
    writeln!(out)?;
    Ok(())
}

fn write_svg(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct ModelJson {
    label: String,
    order: OrderJson,
    fit: FitJson,
}

fn model_json(m: &FittedModel) -> ModelJson {
    ModelJson {
        label: model_label(&m.order),
        order: (&m.order).into(),
        fit: m.into(),
    }
}

fn fit_all(series: &TimeSeries, orders: &[ModelOrder]) -> Result<Vec<FittedModel>> {
    orders
        .iter()
        .map(|&o| match fit(series, o) {
            Ok(m) => Ok(m),
            Err(tsarma_core::Error::NonConvergence { best }) => {
                log::warn!("{} did not converge; using best point found", model_label(&o));
                Ok(*best)
            }
            Err(e) => Err(e).with_context(|| format!("fitting {o}")),
        })
        .collect()
}

fn write_csv(series: &TimeSeries, output: Option<&Path>) -> Result<()> {
    let mut text = String::from("Year,Value\n");
    for (t, v) in series.times().zip(series.values()) {
        text.push_str(&format!("{t},{v}\n"));
    }
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn shift(series: TimeSeries, start: i64) -> Result<TimeSeries> {
    Ok(TimeSeries::new(start, series.into_values())?)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::IngestCheck { input, format } => {
            let series = input.load()?;
            let moments = series.moments()?;
            match format {
                Format::Json => emit_json("ingest-check", SeriesSection::new(&series, &moments))?,
                Format::Text => print!("{}", render::series_summary(&series, &moments)),
                Format::Svg => bail!("ingest-check has no figure; use text or json"),
            }
        }
        Command::Acf(args) | Command::Pacf(args) if args.lags == 0 => bail!("--lags must be at least 1"),
        Command::Acf(args) => correlation_command(&args, true)?,
        Command::Pacf(args) => correlation_command(&args, false)?,
        Command::Adf {
            input,
            lags,
            max_lag,
            regression,
            format,
        } => {
            let series = input.load()?;
            let options = AdfOptions {
                regression: regression.into(),
                lags: lags.map_or(LagSelection::Aic { max_lag }, LagSelection::Fixed),
                significance: Significance::Five,
            };
            let r = adf_test(&series, &options)?;
            match format {
                Format::Json => emit_json("adf", AdfSection::from(&r))?,
                Format::Text => print!("{}", render::adf(&r)),
                Format::Svg => bail!("adf has no figure; use text or json"),
            }
        }
        Command::Fit { input, models, format } => {
            let series = input.load()?;
            let fitted = fit_all(&series, &models.resolved())?;
            match format {
                Format::Json => emit_json("fit", fitted.iter().map(model_json).collect::<Vec<_>>())?,
                Format::Text => print!("{}", render::fits(&fitted.iter().collect::<Vec<_>>())),
                Format::Svg => bail!("fit has no figure; use diagnose or forecast"),
            }
        }
        Command::Auto {
            input,
            grid,
            constant,
            format,
        } => {
            let series = input.load()?;
            let mut g = grid.grid();
            g.include_constant = constant.value();
            if g.min_d > g.max_d || g.orders().is_empty() {
                bail!("selection grid is empty");
            }
            let selection = auto_select(&series, &g, grid.criterion.into())?;
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct AutoJson {
                        selection: SelectionSection,
                        model: ModelJson,
                    }
                    emit_json(
                        "auto",
                        AutoJson {
                            selection: (&selection).into(),
                            model: model_json(&selection.best),
                        },
                    )?
                }
                Format::Text => {
                    print!("{}", render::selection(&selection));
                    print!("{}", render::fits(&[&selection.best]));
                }
                Format::Svg => bail!("auto has no figure; use report"),
            }
        }
        Command::Diagnose {
            input,
            models,
            format,
            out,
        } => {
            let series = input.load()?;
            let fitted = fit_all(&series, &models.resolved())?;
            let mut reports = Vec::new();
            for m in &fitted {
                reports.push((model_label(&m.order), diagnose(m, &series)?));
            }
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct DiagnoseJson {
                        label: String,
                        diagnostics: DiagnosticsJson,
                    }
                    let rows: Vec<DiagnoseJson> = reports
                        .iter()
                        .map(|(label, r)| DiagnoseJson {
                            label: label.clone(),
                            diagnostics: r.into(),
                        })
                        .collect();
                    emit_json("diagnose", rows)?
                }
                Format::Text => {
                    for (label, r) in &reports {
                        println!("{}", render::diagnostics(label, r));
                    }
                }
                Format::Svg => {
                    for (label, r) in &reports {
                        let s = crate::output::slug(label);
                        write_svg(
                            &out,
                            &format!("{s}_density.svg"),
                            &svg::density(r, &format!("{label} residual density")),
                        )?;
                        write_svg(
                            &out,
                            &format!("{s}_qq.svg"),
                            &svg::qq_plot(r, &format!("{label} normal Q-Q")),
                        )?;
                    }
                }
            }
        }
        Command::Forecast {
            input,
            models,
            horizon,
            alpha,
            format,
            out,
        } => {
            let series = input.load()?;
            let fitted = fit_all(&series, &models.resolved())?;
            let mut results = Vec::new();
            for m in &fitted {
                results.push((model_label(&m.order), forecast(m, &series, horizon, alpha)?));
            }
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct ForecastRow {
                        label: String,
                        forecast: ForecastJson,
                    }
                    let rows: Vec<ForecastRow> = results
                        .iter()
                        .map(|(label, f)| ForecastRow {
                            label: label.clone(),
                            forecast: f.into(),
                        })
                        .collect();
                    emit_json("forecast", rows)?
                }
                Format::Text => {
                    for (label, f) in &results {
                        println!("{}", render::forecast(label, f));
                    }
                }
                Format::Svg => {
                    for (label, f) in &results {
                        let name = format!("{}_forecast.svg", crate::output::slug(label));
                        write_svg(
                            &out,
                            &name,
                            &svg::forecast_fan(&series, f, 60, &format!("{label} forecast")),
                        )?;
                    }
                }
            }
        }
        Command::Report(args) => {
            let config = args.config();
            match run_analysis(&config) {
                Ok(bundle) => {
                    for path in write_bundle(&bundle, &args.out, &args.format)? {
                        println!("wrote {}", path.display());
                    }
                    if args.format.contains(&Format::Text) {
                        print!("{}", render::comparison(&bundle.comparison));
                    }
                }
                Err(failure) => {
                    write_failure(&failure, &args.out)?;
                    return Err(failure.into());
                }
            }
        }
        Command::Simulate(args) => {
            let order = ModelOrder::new(args.ar.len(), args.d, args.ma.len()).with_constant(args.intercept != 0.0);
            let params = ArmaParameters::new(args.ar, args.ma, args.intercept, args.sigma2);
            let series = shift(simulate(&params, &order, args.n, args.seed)?, args.start_year)?;
            write_csv(&series, args.output.as_deref())?;
        }
        Command::Biased(args) => {
            let mut config = BiasedAnomalyConfig::new(args.alpha, args.beta, args.land, args.sea, args.n, args.seed);
            config.cross_covariance = args.cross;
            let series = shift(simulate_biased_anomaly(&config)?, args.start_year)?;
            write_csv(&series, args.output.as_deref())?;
        }
        Command::Fetch { url, output } => crate::fetch::fetch(&url, &output)?,
    }
    Ok(())
}

fn correlation_command(args: &CorrelationArgs, acf: bool) -> Result<()> {
    let series = args.input.load()?;
    let outcome = correlation_at(&series, args.diff, args.lags)?;
    let (seq, name) = if acf {
        (&outcome.acf, "acf")
    } else {
        (&outcome.pacf, "pacf")
    };
    match args.format {
        Format::Json => emit_json(name, SequenceJson::from(seq))?,
        Format::Text => print!(
            "{}",
            render::correlation(seq, &format!("{}, d = {}", name.to_uppercase(), args.diff))
        ),
        Format::Svg => write_svg(
            &args.out,
            &format!("{name}_d{}.svg", args.diff),
            &svg::correlogram(seq, &format!("{}, d = {}", name.to_uppercase(), args.diff)),
        )?,
    }
    Ok(())
}
