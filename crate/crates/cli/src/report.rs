//! Versioned JSON report document.
//!
//! Every number is copied from a core result; nothing here computes.
//! Field order is fixed by the struct definitions and floats are written
//! in shortest round-trip form, so identical inputs give identical bytes.

use serde::Serialize;
use tsarma_core::diagnostics::{Comparison, DiagnosticsReport, KdeCurve};
use tsarma_core::estimation::{CandidateRow, FitReport, SkippedCandidate};
use tsarma_core::{
    AdfResult, CorrelationSequence, Criterion, FittedModel, ForecastResult, ModelOrder, MomentSummary, Selection,
    TimeSeries,
};

pub const SCHEMA: &str = "tsarma-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub schema_version: u32,
    pub config: ConfigSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub correlation: Vec<CorrelationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adf: Option<AdfSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<ModelSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonSection>,
}

impl Report {
    pub fn new(config: ConfigSection) -> Self {
        Self {
            schema: SCHEMA,
            schema_version: SCHEMA_VERSION,
            config,
            series: None,
            correlation: Vec::new(),
            adf: None,
            selection: None,
            models: Vec::new(),
            comparison: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report is serializable");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigSection {
    pub input: String,
    pub year_column: String,
    pub value_column: Option<String>,
    pub orders: Vec<OrderJson>,
    pub grid: Option<GridJson>,
    pub criterion: &'static str,
    pub include_constant: Option<bool>,
    pub correlation_lags: usize,
    pub adf_regression: String,
    pub adf_lags: Option<usize>,
    pub horizon: usize,
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridJson {
    pub max_p: usize,
    pub min_d: usize,
    pub max_d: usize,
    pub max_q: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrderJson {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub include_constant: bool,
}

impl From<&ModelOrder> for OrderJson {
    fn from(o: &ModelOrder) -> Self {
        Self {
            p: o.p,
            d: o.d,
            q: o.q,
            include_constant: o.include_constant,
        }
    }
}

pub fn criterion_name(c: Criterion) -> &'static str {
    match c {
        Criterion::Aic => "aic",
        Criterion::Bic => "bic",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentsJson {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
}

impl From<&MomentSummary> for MomentsJson {
    fn from(m: &MomentSummary) -> Self {
        Self {
            n: m.n,
            mean: m.mean,
            variance: m.variance,
            skewness: m.skewness,
            kurtosis: m.kurtosis,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesSection {
    pub start: i64,
    pub end: i64,
    pub n: usize,
    pub moments: MomentsJson,
    pub values: Vec<f64>,
}

impl SeriesSection {
    pub fn new(series: &TimeSeries, moments: &MomentSummary) -> Self {
        Self {
            start: series.start(),
            end: series.end(),
            n: series.len(),
            moments: moments.into(),
            values: series.values().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceJson {
    pub first_lag: usize,
    pub values: Vec<f64>,
    pub threshold: f64,
    pub significant_lags: Vec<usize>,
}

impl From<&CorrelationSequence> for SequenceJson {
    fn from(c: &CorrelationSequence) -> Self {
        Self {
            first_lag: c.first_lag(),
            values: c.values.clone(),
            threshold: c.threshold,
            significant_lags: c.significant_lags(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationSection {
    pub differences: usize,
    pub acf: SequenceJson,
    pub pacf: SequenceJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdfSection {
    pub regression: String,
    pub statistic: f64,
    pub p_value: f64,
    pub used_lags: usize,
    pub n_obs: usize,
    pub critical_values: CriticalJson,
    pub reject_unit_root: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalJson {
    #[serde(rename = "1%")]
    pub one: f64,
    #[serde(rename = "5%")]
    pub five: f64,
    #[serde(rename = "10%")]
    pub ten: f64,
}

impl From<&AdfResult> for AdfSection {
    fn from(r: &AdfResult) -> Self {
        Self {
            regression: r.regression.to_string(),
            statistic: r.statistic,
            p_value: r.p_value,
            used_lags: r.used_lags,
            n_obs: r.n_obs,
            critical_values: CriticalJson {
                one: r.critical_values.one,
                five: r.critical_values.five,
                ten: r.critical_values.ten,
            },
            reject_unit_root: r.reject_unit_root,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateJson {
    pub order: OrderJson,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_used: usize,
    pub min_ar_root_modulus: Option<f64>,
    pub min_ma_root_modulus: Option<f64>,
    pub near_unit_root: bool,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl From<&CandidateRow> for CandidateJson {
    fn from(r: &CandidateRow) -> Self {
        Self {
            order: (&r.order).into(),
            loglik: r.loglik,
            aic: r.aic,
            bic: r.bic,
            n_used: r.n_used,
            min_ar_root_modulus: finite(r.min_ar_root_modulus),
            min_ma_root_modulus: finite(r.min_ma_root_modulus),
            near_unit_root: r.near_unit_root,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedJson {
    pub order: OrderJson,
    pub reason: String,
}

impl From<&SkippedCandidate> for SkippedJson {
    fn from(s: &SkippedCandidate) -> Self {
        Self {
            order: (&s.order).into(),
            reason: s.reason.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectionSection {
    pub criterion: &'static str,
    pub selected: OrderJson,
    pub ranking: Vec<CandidateJson>,
    pub skipped: Vec<SkippedJson>,
}

impl From<&Selection> for SelectionSection {
    fn from(s: &Selection) -> Self {
        Self {
            criterion: criterion_name(s.criterion),
            selected: (&s.best.order).into(),
            ranking: s.ranking.iter().map(Into::into).collect(),
            skipped: s.skipped.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsJson {
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub constant: f64,
    pub mean: f64,
    pub sigma2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReportJson {
    pub starts: usize,
    pub converged_starts: usize,
    pub best_start: usize,
    pub evaluations: usize,
    pub final_diameter: f64,
    pub css_loglik: f64,
}

impl From<&FitReport> for FitReportJson {
    fn from(r: &FitReport) -> Self {
        Self {
            starts: r.starts,
            converged_starts: r.converged_starts,
            best_start: r.best_start,
            evaluations: r.evaluations,
            final_diameter: r.final_diameter,
            css_loglik: r.css_loglik,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitJson {
    pub params: ParamsJson,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_used: usize,
    pub converged: bool,
    pub min_ar_root_modulus: Option<f64>,
    pub min_ma_root_modulus: Option<f64>,
    pub optimizer: FitReportJson,
}

impl From<&FittedModel> for FitJson {
    fn from(m: &FittedModel) -> Self {
        Self {
            params: ParamsJson {
                ar: m.params.ar.clone(),
                ma: m.params.ma.clone(),
                constant: m.params.constant,
                mean: m.params.mean(),
                sigma2: m.params.sigma2,
            },
            loglik: m.loglik,
            aic: m.aic,
            bic: m.bic,
            n_used: m.n_used,
            converged: m.converged,
            min_ar_root_modulus: finite(m.params.ar_min_root_modulus()),
            min_ma_root_modulus: finite(m.params.ma_min_root_modulus()),
            optimizer: (&m.fit_report).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsJson {
    pub start: i64,
    pub max_abs_residual: f64,
    pub moments: MomentsJson,
    pub ljung_box: LjungBoxJson,
    pub jarque_bera: JarqueBeraJson,
    pub residual_acf: SequenceJson,
    pub residuals: Vec<f64>,
    pub standardized_residuals: Vec<f64>,
    pub qq_points: Vec<[f64; 2]>,
    pub kde: KdeJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct LjungBoxJson {
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub lags: usize,
    pub df: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct JarqueBeraJson {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KdeJson {
    pub bandwidth: f64,
    pub points: Vec<[f64; 2]>,
}

impl From<&KdeCurve> for KdeJson {
    fn from(k: &KdeCurve) -> Self {
        Self {
            bandwidth: k.bandwidth,
            points: k.points.iter().map(|&(x, y)| [x, y]).collect(),
        }
    }
}

impl From<&DiagnosticsReport> for DiagnosticsJson {
    fn from(r: &DiagnosticsReport) -> Self {
        Self {
            start: r.start,
            max_abs_residual: r.max_abs_residual,
            moments: (&r.moments).into(),
            ljung_box: LjungBoxJson {
                statistic: r.ljung_box.statistic,
                p_value: r.ljung_box.p_value,
                lags: r.ljung_box.lags,
                df: r.ljung_box.df,
            },
            jarque_bera: JarqueBeraJson {
                statistic: r.jarque_bera.statistic,
                p_value: r.jarque_bera.p_value,
            },
            residual_acf: (&r.residual_acf).into(),
            residuals: r.residuals.clone(),
            standardized_residuals: r.standardized_residuals.clone(),
            qq_points: r.qq_points.iter().map(|&(x, y)| [x, y]).collect(),
            kde: (&r.kde_curve).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ForecastJson {
    pub start: i64,
    pub horizon: usize,
    pub alpha: f64,
    pub point: Vec<f64>,
    pub variance: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl From<&ForecastResult> for ForecastJson {
    fn from(f: &ForecastResult) -> Self {
        Self {
            start: f.start,
            horizon: f.horizon,
            alpha: f.alpha,
            point: f.point.clone(),
            variance: f.variance.clone(),
            lower: f.lower.clone(),
            upper: f.upper.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelSection {
    pub label: String,
    pub order: OrderJson,
    pub fit: FitJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forecast: Option<ForecastJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRowJson {
    pub label: String,
    pub order: OrderJson,
    pub max_abs_residual: f64,
    pub skewness: Option<f64>,
    pub kurtosis_distance: Option<f64>,
    pub ljung_box_p: Option<f64>,
    pub aic: f64,
    pub bic: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSection {
    pub criterion: &'static str,
    pub rows: Vec<ComparisonRowJson>,
    /// Labels, best first.
    pub by_criterion: Vec<String>,
    pub by_max_residual: Vec<String>,
}

impl From<&Comparison> for ComparisonSection {
    fn from(c: &Comparison) -> Self {
        let label = |i: &usize| c.rows[*i].label.clone();
        Self {
            criterion: criterion_name(c.criterion),
            rows: c
                .rows
                .iter()
                .map(|r| ComparisonRowJson {
                    label: r.label.clone(),
                    order: (&r.order).into(),
                    max_abs_residual: r.max_abs_residual,
                    skewness: r.skewness,
                    kurtosis_distance: r.kurtosis_distance,
                    ljung_box_p: r.ljung_box_p,
                    aic: r.aic,
                    bic: r.bic,
                })
                .collect(),
            by_criterion: c.by_criterion.iter().map(label).collect(),
            by_max_residual: c.by_max_residual.iter().map(label).collect(),
        }
    }
}

/// Written next to partial outputs when a stage fails.
#[derive(Debug, Clone, Serialize)]
pub struct FailureManifest {
    pub schema: &'static str,
    pub schema_version: u32,
    pub failed_stage: String,
    pub error: String,
    pub completed_stages: Vec<String>,
    pub written_files: Vec<String>,
}
