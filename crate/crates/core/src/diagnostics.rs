//! Residual diagnostics for a fitted model: moments, normality checks,
//! kernel density, Q-Q points and residual autocorrelation.
//!
//! `max_abs_residual` is measured on raw one-step residuals. Every other
//! summary uses residuals standardized by their predicted standard
//! deviation.

use alloc::string::String;
use alloc::vec::Vec;

use crate::arma::{log_likelihood, ModelOrder};
use crate::correlation::{sample_acf, CorrelationSequence};
use crate::error::{Error, Result};
use crate::estimation::{Criterion, FittedModel};
use crate::series::{MomentSummary, TimeSeries};
use crate::special::{chi2_sf, normal_quantile};

pub const MIN_RESIDUALS: usize = 8;
pub const LJUNG_BOX_LAGS: usize = 10;
pub const RESIDUAL_ACF_LAGS: usize = 20;
pub const KDE_GRID_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjungBox {
    pub statistic: f64,
    /// `None` when the degrees of freedom are not positive.
    pub p_value: Option<f64>,
    pub lags: usize,
    pub df: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JarqueBera {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KdeCurve {
    pub bandwidth: f64,
    pub points: Vec<(f64, f64)>,
}

impl KdeCurve {
    /// Trapezoid-rule integral over the grid.
    pub fn integral(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub order: ModelOrder,
    pub aic: f64,
    pub bic: f64,
    /// Time index of the first residual.
    pub start: i64,
    pub residuals: Vec<f64>,
    pub standardized_residuals: Vec<f64>,
    pub moments: MomentSummary,
    pub max_abs_residual: f64,
    pub qq_points: Vec<(f64, f64)>,
    pub kde_curve: KdeCurve,
    pub residual_acf: CorrelationSequence,
    pub ljung_box: LjungBox,
    pub jarque_bera: JarqueBera,
}

pub fn diagnose(model: &FittedModel, series: &TimeSeries) -> Result<DiagnosticsReport> {
    let eval = log_likelihood(&model.params, &model.order, series)?;
    let n = eval.residuals.len();
    if n < MIN_RESIDUALS {
        return Err(Error::InsufficientData {
            what: "residual diagnostics",
            needed: MIN_RESIDUALS,
            got: n,
        });
    }
    let standardized = eval.standardized_residuals();
    let moments = MomentSummary::from_values(&standardized)?;
    let max_abs_residual = eval.residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    let start = series.start() + model.order.d as i64;
    let std_series = TimeSeries::new(start, standardized.clone())?;
    let residual_acf = sample_acf(&std_series, RESIDUAL_ACF_LAGS.min(n - 1))?;
    let ljung_box = ljung_box(&residual_acf, n, LJUNG_BOX_LAGS, model.order.p + model.order.q);
    Ok(DiagnosticsReport {
        order: model.order,
        aic: model.aic,
        bic: model.bic,
        start,
        max_abs_residual,
        qq_points: qq_points(&standardized),
        kde_curve: gaussian_kde(&standardized, KDE_GRID_POINTS),
        jarque_bera: jarque_bera(&moments)?,
        residual_acf,
        ljung_box,
        moments,
        residuals: eval.residuals,
        standardized_residuals: standardized,
    })
}

/// Standard-normal quantiles at `(i − ½)/n` paired with the sorted sample.
pub fn qq_points(sample: &[f64]) -> Vec<(f64, f64)> {
    let n = sample.len() as f64;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, v)| (normal_quantile((i as f64 + 0.5) / n), v))
        .collect()
}

/// Linear-interpolation quantile of sorted data (`q` in `[0, 1]`).
fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `0.9 · min(sd, IQR/1.34) · n^{−1/5}`, with the sample standard
/// deviation (denominator `n − 1`). Falls back to whichever spread is
/// positive.
pub fn silverman_bandwidth(sample: &[f64]) -> f64 {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let sd = libm::sqrt(sample.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0));
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = (sorted_quantile(&sorted, 0.75) - sorted_quantile(&sorted, 0.25)) / 1.34;
    let spread = if iqr > 0.0 { sd.min(iqr) } else { sd };
    0.9 * spread * libm::pow(n, -0.2)
}

/// Gaussian kernel density on `grid_points` equally spaced abscissae
/// spanning the data range widened by three bandwidths on each side.
pub fn gaussian_kde(sample: &[f64], grid_points: usize) -> KdeCurve {
    let h = silverman_bandwidth(sample);
    let lo = sample.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let step = (hi - lo) / (grid_points - 1) as f64;
    let norm = 1.0 / (sample.len() as f64 * h * libm::sqrt(2.0 * core::f64::consts::PI));
    let points = (0..grid_points)
        .map(|i| {
            let x = lo + step * i as f64;
            let density: f64 = sample
                .iter()
                .map(|v| {
                    let z = (x - v) / h;
                    libm::exp(-0.5 * z * z)
                })
                .sum();
            (x, density * norm)
        })
        .collect();
    KdeCurve { bandwidth: h, points }
}

/// `Q = n(n+2) Σ_{k=1}^{h} ρ̂_k² / (n − k)` on `h − fitted` degrees of freedom.
pub fn ljung_box(acf: &CorrelationSequence, n: usize, lags: usize, fitted: usize) -> LjungBox {
    let lags = lags.min(acf.max_lag());
    let nf = n as f64;
    let sum: f64 = (1..=lags)
        .map(|k| {
            let r = acf.at(k).unwrap_or(0.0);
            r * r / (nf - k as f64)
        })
        .sum();
    let statistic = nf * (nf + 2.0) * sum;
    let df = lags.saturating_sub(fitted);
    LjungBox {
        statistic,
        p_value: (df > 0).then(|| chi2_sf(statistic, df as f64)),
        lags,
        df,
    }
}

/// `n/6 · (S² + (K − 3)²/4)` on two degrees of freedom.
pub fn jarque_bera(moments: &MomentSummary) -> Result<JarqueBera> {
    let (Some(s), Some(k)) = (moments.skewness, moments.kurtosis) else {
        return Err(Error::DegenerateInput("residual moments undefined"));
    };
    let statistic = moments.n as f64 / 6.0 * (s * s + (k - 3.0) * (k - 3.0) / 4.0);
    Ok(JarqueBera {
        statistic,
        p_value: chi2_sf(statistic, 2.0),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub label: String,
    pub order: ModelOrder,
    pub max_abs_residual: f64,
    pub skewness: Option<f64>,
    /// `|kurtosis − 3|`
    pub kurtosis_distance: Option<f64>,
    pub ljung_box_p: Option<f64>,
    pub aic: f64,
    pub bic: f64,
}

/// Side-by-side residual summary with two rankings (indices into `rows`,
/// best first). Both sorts are stable, so ties keep input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub criterion: Criterion,
    pub rows: Vec<ComparisonRow>,
    pub by_criterion: Vec<usize>,
    pub by_max_residual: Vec<usize>,
}

impl Comparison {
    pub fn best_by_criterion(&self) -> Option<&ComparisonRow> {
        self.by_criterion.first().map(|&i| &self.rows[i])
    }

    pub fn best_by_max_residual(&self) -> Option<&ComparisonRow> {
        self.by_max_residual.first().map(|&i| &self.rows[i])
    }
}

pub fn compare(reports: &[(String, DiagnosticsReport)], criterion: Criterion) -> Comparison {
    let rows: Vec<ComparisonRow> = reports
        .iter()
        .map(|(label, r)| ComparisonRow {
            label: label.clone(),
            order: r.order,
            max_abs_residual: r.max_abs_residual,
            skewness: r.moments.skewness,
            kurtosis_distance: r.moments.kurtosis.map(|k| (k - 3.0).abs()),
            ljung_box_p: r.ljung_box.p_value,
            aic: r.aic,
            bic: r.bic,
        })
        .collect();
    let value = |row: &ComparisonRow| match criterion {
        Criterion::Aic => row.aic,
        Criterion::Bic => row.bic,
    };
    let mut by_criterion: Vec<usize> = (0..rows.len()).collect();
    by_criterion.sort_by(|&a, &b| value(&rows[a]).total_cmp(&value(&rows[b])));
    let mut by_max_residual: Vec<usize> = (0..rows.len()).collect();
    by_max_residual.sort_by(|&a, &b| rows[a].max_abs_residual.total_cmp(&rows[b].max_abs_residual));
    Comparison {
        criterion,
        rows,
        by_criterion,
        by_max_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arma::ArmaParameters;
    use alloc::vec;

    #[test]
    fn qq_of_exact_quantiles_is_diagonal() {
        let n = 50;
        let sample: Vec<f64> = (0..n)
            .rev()
            .map(|i| normal_quantile((i as f64 + 0.5) / n as f64))
            .collect();
        for (t, s) in qq_points(&sample) {
            assert!((t - s).abs() < 1e-9);
        }
    }

    #[test]
    fn kde_integrates_to_one() {
        let sample = [-1.2, -0.3, 0.0, 0.1, 0.4, 0.45, 0.9, 2.2, -0.7, 1.1];
        let kde = gaussian_kde(&sample, KDE_GRID_POINTS);
        assert!((kde.integral() - 1.0).abs() < 1e-3);
        assert!(kde.points.iter().all(|&(_, d)| d >= 0.0));
        assert_eq!(kde.points.len(), KDE_GRID_POINTS);
    }

    #[test]
    fn jarque_bera_from_moments() {
        let m = MomentSummary {
            n: 60,
            mean: 0.0,
            variance: 1.0,
            skewness: Some(-0.5),
            kurtosis: Some(4.0),
        };
        let jb = jarque_bera(&m).unwrap();
        assert_eq!(jb.statistic, 60.0 / 6.0 * (0.25 + 0.25));
        assert!((jb.p_value - libm::exp(-2.5)).abs() < 1e-12);
    }

    #[test]
    fn too_few_residuals() {
        let s = TimeSeries::new(0, vec![0.1, -0.2, 0.3, 0.0, 0.5, -0.1, 0.2]).unwrap();
        let m = FittedModel::from_parameters(ModelOrder::new(0, 0, 0), ArmaParameters::white_noise(0.1), &s).unwrap();
        assert!(matches!(diagnose(&m, &s), Err(Error::InsufficientData { .. })));
    }

    #[test]
    fn white_noise_diagnostics() {
        let values = vec![0.3, -0.5, 0.1, 0.8, -0.2, -0.9, 0.4, 0.05, -0.35, 0.6, -0.15, 0.2];
        let s = TimeSeries::new(1990, values.clone()).unwrap();
        let m = FittedModel::from_parameters(ModelOrder::new(0, 0, 0), ArmaParameters::white_noise(0.25), &s).unwrap();
        let r = diagnose(&m, &s).unwrap();
        assert_eq!(r.max_abs_residual, 0.9);
        assert_eq!(r.residuals, values);
        assert!((r.standardized_residuals[0] - 0.6).abs() < 1e-15);
        assert_eq!(r.ljung_box.df, 10);
        assert!(r.qq_points.windows(2).all(|w| w[0].1 <= w[1].1));
    }
}
