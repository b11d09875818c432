//! End-to-end pipeline: ingest, correlation structure, unit-root test,
//! model fitting, diagnostics, comparison and forecasting.

use std::path::PathBuf;

use thiserror::Error;
use tsarma_core::correlation::{sample_acf, sample_pacf};
use tsarma_core::diagnostics::{compare, diagnose, Comparison};
use tsarma_core::estimation::{auto_select, fit};
use tsarma_core::forecast::{forecast, MAX_HORIZON};
use tsarma_core::stationarity::adf_test;
use tsarma_core::{
    AdfOptions, AdfResult, CorrelationSequence, Criterion, DiagnosticsReport, FittedModel, ForecastResult,
    LagSelection, ModelOrder, Selection, SelectionGrid, TimeSeries,
};

use crate::ingest::{ingest, ColumnMapping};
use crate::report::{criterion_name, ConfigSection, CorrelationSection, GridJson, ModelSection, Report, SeriesSection};

/// Differencing levels whose correlograms are reported.
pub const CORRELATION_DIFFERENCES: [usize; 3] = [0, 1, 2];

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Orders(Vec<ModelOrder>),
    Auto(SelectionGrid),
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub input: PathBuf,
    pub columns: ColumnMapping,
    pub models: ModelSpec,
    /// Overrides the default intercept rule when set.
    pub include_constant: Option<bool>,
    pub criterion: Criterion,
    pub correlation_lags: usize,
    pub adf: AdfOptions,
    pub horizon: usize,
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("no model orders given")]
    NoOrders,
    #[error("selection grid is empty")]
    EmptyGrid,
    #[error("invalid order {order}: {detail}")]
    BadOrder { order: String, detail: String },
    #[error("horizon must be between 1 and {MAX_HORIZON}, got {0}")]
    Horizon(usize),
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    Alpha(f64),
    #[error("correlation lags must be at least 1")]
    Lags,
}

impl AnalysisConfig {
    /// The orders to fit, with the intercept override applied.
    pub fn orders(&self) -> Vec<ModelOrder> {
        match &self.models {
            ModelSpec::Orders(orders) => orders
                .iter()
                .map(|o| match self.include_constant {
                    Some(c) => o.with_constant(c),
                    None => *o,
                })
                .collect(),
            ModelSpec::Auto(grid) => self.grid(grid).orders(),
        }
    }

    fn grid(&self, grid: &SelectionGrid) -> SelectionGrid {
        let mut g = *grid;
        if self.include_constant.is_some() {
            g.include_constant = self.include_constant;
        }
        g
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match &self.models {
            ModelSpec::Orders(orders) if orders.is_empty() => return Err(ConfigError::NoOrders),
            ModelSpec::Auto(grid) if grid.min_d > grid.max_d => return Err(ConfigError::EmptyGrid),
            _ => {}
        }
        let orders = self.orders();
        if orders.is_empty() {
            return Err(ConfigError::EmptyGrid);
        }
        for order in &orders {
            order.validate().map_err(|e| ConfigError::BadOrder {
                order: order.to_string(),
                detail: e.to_string(),
            })?;
        }
        if self.horizon == 0 || self.horizon > MAX_HORIZON {
            return Err(ConfigError::Horizon(self.horizon));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(ConfigError::Alpha(self.alpha));
        }
        if self.correlation_lags == 0 {
            return Err(ConfigError::Lags);
        }
        Ok(())
    }

    fn section(&self) -> ConfigSection {
        let (orders, grid) = match &self.models {
            ModelSpec::Orders(_) => (self.orders().iter().map(Into::into).collect(), None),
            ModelSpec::Auto(g) => (Vec::new(), Some(g.into())),
        };
        ConfigSection {
            input: self.input.display().to_string(),
            year_column: self.columns.year.clone(),
            value_column: self.columns.value.clone(),
            orders,
            grid,
            criterion: criterion_name(self.criterion),
            include_constant: self.include_constant,
            correlation_lags: self.correlation_lags,
            adf_regression: self.adf.regression.to_string(),
            adf_lags: match self.adf.lags {
                LagSelection::Fixed(k) => Some(k),
                LagSelection::Aic { .. } => None,
            },
            horizon: self.horizon,
            alpha: self.alpha,
            seed: self.seed,
        }
    }
}

/// Conventional name of an order: AR(1), ARMA(1,1), ARIMA(1,2,0), ...
pub fn model_label(order: &ModelOrder) -> String {
    match (order.p, order.d, order.q) {
        (p, 0, 0) => format!("AR({p})"),
        (0, 0, q) => format!("MA({q})"),
        (p, 0, q) => format!("ARMA({p},{q})"),
        (p, d, q) => format!("ARIMA({p},{d},{q})"),
    }
}

#[derive(Debug, Clone)]
pub struct CorrelationOutcome {
    pub differences: usize,
    pub acf: CorrelationSequence,
    pub pacf: CorrelationSequence,
}

#[derive(Debug, Clone)]
pub struct ModelOutcome {
    pub label: String,
    pub model: FittedModel,
    pub diagnostics: DiagnosticsReport,
    pub forecast: ForecastResult,
}

#[derive(Debug, Clone)]
pub struct Bundle {
    pub report: Report,
    pub series: TimeSeries,
    pub correlations: Vec<CorrelationOutcome>,
    pub adf: AdfResult,
    pub selection: Option<Selection>,
    pub models: Vec<ModelOutcome>,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Correlation,
    Stationarity,
    Fit,
    Diagnostics,
    Comparison,
    Forecast,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Correlation => "correlation",
            Stage::Stationarity => "adf",
            Stage::Fit => "fit",
            Stage::Diagnostics => "diagnostics",
            Stage::Comparison => "comparison",
            Stage::Forecast => "forecast",
        }
    }
}

/// A failed run: the stage, its error and whatever was finished before.
#[derive(Debug, Error)]
#[error("stage '{}' failed: {message}", .stage.name())]
pub struct Failure {
    pub stage: Stage,
    pub message: String,
    pub completed: Vec<Stage>,
    pub partial: Box<Report>,
}

struct Run {
    report: Report,
    completed: Vec<Stage>,
}

impl Run {
    fn fail(&self, stage: Stage, message: String) -> Failure {
        Failure {
            stage,
            message,
            completed: self.completed.clone(),
            partial: Box::new(self.report.clone()),
        }
    }

    fn check<T, E: std::fmt::Display>(&self, stage: Stage, result: Result<T, E>) -> Result<T, Failure> {
        result.map_err(|e| self.fail(stage, e.to_string()))
    }

    fn done(&mut self, stage: Stage) {
        log::info!("stage {} complete", stage.name());
        self.completed.push(stage);
    }
}

pub fn run_analysis(config: &AnalysisConfig) -> Result<Bundle, Failure> {
    let mut run = Run {
        report: Report::new(config.section()),
        completed: Vec::new(),
    };
    run.check(Stage::Config, config.validate())?;
    run.done(Stage::Config);

    let series = run.check(Stage::Ingest, ingest(&config.input, &config.columns))?;
    let moments = run.check(Stage::Ingest, series.moments())?;
    run.report.series = Some(SeriesSection::new(&series, &moments));
    run.done(Stage::Ingest);

    let mut correlations = Vec::new();
    for d in CORRELATION_DIFFERENCES {
        let outcome = run.check(Stage::Correlation, correlation_at(&series, d, config.correlation_lags))?;
        run.report.correlation.push(CorrelationSection {
            differences: d,
            acf: (&outcome.acf).into(),
            pacf: (&outcome.pacf).into(),
        });
        correlations.push(outcome);
    }
    run.done(Stage::Correlation);

    let adf = run.check(Stage::Stationarity, adf_test(&series, &config.adf))?;
    run.report.adf = Some((&adf).into());
    run.done(Stage::Stationarity);

    let (fitted, selection) = match &config.models {
        ModelSpec::Orders(_) => {
            let mut fitted = Vec::new();
            for order in config.orders() {
                let model = match fit(&series, order) {
                    Ok(m) => m,
                    Err(tsarma_core::Error::NonConvergence { best }) => {
                        log::warn!("{} did not converge; keeping best point found", model_label(&order));
                        *best
                    }
                    Err(e) => return Err(run.fail(Stage::Fit, format!("{order}: {e}"))),
                };
                fitted.push(model);
            }
            (fitted, None)
        }
        ModelSpec::Auto(grid) => {
            let selection = run.check(Stage::Fit, auto_select(&series, &config.grid(grid), config.criterion))?;
            run.report.selection = Some((&selection).into());
            (vec![selection.best.clone()], Some(selection))
        }
    };
    for model in &fitted {
        run.report.models.push(ModelSection {
            label: model_label(&model.order),
            order: (&model.order).into(),
            fit: model.into(),
            diagnostics: None,
            forecast: None,
        });
    }
    run.done(Stage::Fit);

    let mut diagnostics = Vec::new();
    for (i, model) in fitted.iter().enumerate() {
        let d = run.check(Stage::Diagnostics, diagnose(model, &series))?;
        run.report.models[i].diagnostics = Some((&d).into());
        diagnostics.push(d);
    }
    run.done(Stage::Diagnostics);

    let labelled: Vec<(String, DiagnosticsReport)> = fitted
        .iter()
        .zip(&diagnostics)
        .map(|(m, d)| (model_label(&m.order), d.clone()))
        .collect();
    let comparison = compare(&labelled, config.criterion);
    run.report.comparison = Some((&comparison).into());
    run.done(Stage::Comparison);

    let mut models = Vec::new();
    for (i, (model, diag)) in fitted.into_iter().zip(diagnostics).enumerate() {
        let f = run.check(Stage::Forecast, forecast(&model, &series, config.horizon, config.alpha))?;
        run.report.models[i].forecast = Some((&f).into());
        models.push(ModelOutcome {
            label: model_label(&model.order),
            model,
            diagnostics: diag,
            forecast: f,
        });
    }
    run.done(Stage::Forecast);

    Ok(Bundle {
        report: run.report,
        series,
        correlations,
        adf,
        selection,
        models,
        comparison,
    })
}

/// ACF and PACF of the `d`-th differences, with lags capped to what the
/// sample supports.
pub fn correlation_at(series: &TimeSeries, d: usize, lags: usize) -> tsarma_core::Result<CorrelationOutcome> {
    let diffed = series.difference(d)?;
    let n = diffed.len();
    let acf = sample_acf(&diffed, lags.min(n.saturating_sub(1)).max(1))?;
    let pacf = sample_pacf(&diffed, lags.min((n / 2).saturating_sub(1)).max(1))?;
    Ok(CorrelationOutcome {
        differences: d,
        acf,
        pacf,
    })
}

impl From<&SelectionGrid> for GridJson {
    fn from(g: &SelectionGrid) -> Self {
        Self {
            max_p: g.max_p,
            min_d: g.min_d,
            max_d: g.max_d,
            max_q: g.max_q,
        }
    }
}
