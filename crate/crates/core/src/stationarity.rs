//! Augmented Dickey–Fuller unit-root test.
//!
//! The regression is
//! `Δx_t = [α] + [δ·t] + γ·x_{t−1} + Σ_{i=1..k} β_i Δx_{t−i} + ε_t`
//! and the statistic is the t-ratio of `γ`. P-values use MacKinnon's
//! (1994) response surfaces, critical values his 2010 finite-sample
//! surfaces. With automatic lag selection every candidate lag is fitted
//! on the same trimmed sample, the AIC-minimizing lag is kept, and the
//! final regression is re-run on all observations that lag allows.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{least_squares, Matrix};
use crate::series::{difference_values, TimeSeries};
use crate::special::normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regression {
    None,
    #[default]
    Constant,
    ConstantTrend,
}

impl Regression {
    fn deterministic_columns(self) -> usize {
        match self {
            Regression::None => 0,
            Regression::Constant => 1,
            Regression::ConstantTrend => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagSelection {
    Fixed(usize),
    /// AIC search over `0..=max_lag`; `None` uses `⌊12 (n/100)^¼⌋`.
    Aic {
        max_lag: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Significance {
    One,
    #[default]
    Five,
    Ten,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfOptions {
    pub regression: Regression,
    pub lags: LagSelection,
    pub significance: Significance,
}

impl Default for AdfOptions {
    fn default() -> Self {
        Self {
            regression: Regression::Constant,
            lags: LagSelection::Aic { max_lag: None },
            significance: Significance::Five,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValues {
    pub one: f64,
    pub five: f64,
    pub ten: f64,
}

impl CriticalValues {
    pub fn at(&self, level: Significance) -> f64 {
        match level {
            Significance::One => self.one,
            Significance::Five => self.five,
            Significance::Ten => self.ten,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfResult {
    pub statistic: f64,
    pub p_value: f64,
    pub used_lags: usize,
    /// Observations in the final regression.
    pub n_obs: usize,
    pub critical_values: CriticalValues,
    pub regression: Regression,
    pub significance: Significance,
    pub reject_unit_root: bool,
}

/// `⌊12 (n/100)^¼⌋`
pub fn schwert_max_lag(n: usize) -> usize {
    libm::floor(12.0 * libm::pow(n as f64 / 100.0, 0.25)) as usize
}

struct AdfRegression {
    design: Matrix,
    target: Vec<f64>,
}

/// Regression rows for `lags` lagged differences, using the last `rows`
/// available time points.
fn build_regression(x: &[f64], dx: &[f64], lags: usize, rows: usize, regression: Regression) -> AdfRegression {
    let cols = 1 + lags + regression.deterministic_columns();
    let mut data = Vec::with_capacity(rows * cols);
    let mut target = Vec::with_capacity(rows);
    let first = dx.len() - rows;
    for (row, t) in (first..dx.len()).enumerate() {
        // dx[t] = x[t+1] − x[t]
        data.push(x[t]);
        for i in 1..=lags {
            data.push(dx[t - i]);
        }
        match regression {
            Regression::None => {}
            Regression::Constant => data.push(1.0),
            Regression::ConstantTrend => {
                data.push(1.0);
                data.push((row + 1) as f64);
            }
        }
        target.push(dx[t]);
    }
    AdfRegression {
        design: Matrix::from_row_major(rows, cols, data).expect("consistent shape"),
        target,
    }
}

fn ols_aic(reg: &AdfRegression) -> Result<f64> {
    let fit = least_squares(&reg.design, &reg.target)?;
    let n = reg.target.len() as f64;
    let k = reg.design.cols() as f64;
    let llf = -0.5 * n * (libm::log(2.0 * core::f64::consts::PI) + libm::log(fit.rss / n) + 1.0);
    Ok(-2.0 * llf + 2.0 * k)
}

pub fn adf_test(series: &TimeSeries, options: &AdfOptions) -> Result<AdfResult> {
    let x = series.values();
    let n = x.len();
    let max_lag = match options.lags {
        LagSelection::Fixed(k) => k,
        LagSelection::Aic { max_lag } => max_lag.unwrap_or_else(|| schwert_max_lag(n)),
    };
    let needed = max_lag + 10;
    if n < needed {
        return Err(Error::InsufficientData {
            what: "ADF test",
            needed,
            got: n,
        });
    }
    let dx = difference_values(x, 1);

    let used_lags = match options.lags {
        LagSelection::Fixed(k) => k,
        LagSelection::Aic { .. } => {
            let rows = dx.len() - max_lag;
            let mut best = (f64::INFINITY, 0);
            for k in 0..=max_lag {
                let aic = ols_aic(&build_regression(x, &dx, k, rows, options.regression))?;
                if aic < best.0 {
                    best = (aic, k);
                }
            }
            best.1
        }
    };

    let rows = dx.len() - used_lags;
    let reg = build_regression(x, &dx, used_lags, rows, options.regression);
    let cols = reg.design.cols();
    if rows <= cols {
        return Err(Error::InsufficientData {
            what: "ADF regression",
            needed: cols + 1,
            got: rows,
        });
    }
    let fit = least_squares(&reg.design, &reg.target).map_err(|_| Error::DegenerateInput("singular ADF regression"))?;
    let s2 = fit.rss / (rows - cols) as f64;
    let se = libm::sqrt(s2 * fit.unscaled_cov_diag[0]);
    if !(se > 0.0) {
        return Err(Error::DegenerateInput("zero residual variance in ADF regression"));
    }
    let statistic = fit.coefficients[0] / se;
    let critical_values = mackinnon_critical_values(options.regression, rows);
    Ok(AdfResult {
        statistic,
        p_value: mackinnon_p_value(statistic, options.regression),
        used_lags,
        n_obs: rows,
        critical_values,
        regression: options.regression,
        significance: options.significance,
        reject_unit_root: statistic < critical_values.at(options.significance),
    })
}

struct PValueSurface {
    tau_max: f64,
    tau_min: f64,
    tau_star: f64,
    small: [f64; 3],
    large: [f64; 4],
}

// MacKinnon (1994), single-series (N = 1) case
fn p_value_surface(regression: Regression) -> PValueSurface {
    match regression {
        Regression::None => PValueSurface {
            tau_max: f64::INFINITY,
            tau_min: -19.04,
            tau_star: -1.04,
            small: [0.6344, 1.2378, 3.2496e-2],
            large: [0.4797, 0.93557, -0.06999, 0.033066],
        },
        Regression::Constant => PValueSurface {
            tau_max: 2.74,
            tau_min: -18.83,
            tau_star: -1.61,
            small: [2.1659, 1.4412, 3.8269e-2],
            large: [1.7339, 0.93202, -0.12745, -0.010368],
        },
        Regression::ConstantTrend => PValueSurface {
            tau_max: 0.7,
            tau_min: -16.18,
            tau_star: -2.89,
            small: [3.2512, 1.6047, 4.9588e-2],
            large: [2.5261, 0.61654, -0.37956, -0.060285],
        },
    }
}

fn polyval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Approximate asymptotic p-value of an ADF statistic.
pub fn mackinnon_p_value(statistic: f64, regression: Regression) -> f64 {
    let s = p_value_surface(regression);
    if statistic > s.tau_max {
        return 1.0;
    }
    if statistic < s.tau_min {
        return 0.0;
    }
    let z = if statistic <= s.tau_star {
        polyval(&s.small, statistic)
    } else {
        polyval(&s.large, statistic)
    };
    normal_cdf(z)
}

// MacKinnon (2010) response surfaces `c₀ + c₁/T + c₂/T² + c₃/T³` for the
// 1%, 5% and 10% levels; the no-constant case uses the 1996 values.
fn critical_surface(regression: Regression) -> [[f64; 4]; 3] {
    match regression {
        Regression::None => [
            [-2.56574, -2.2358, -3.627, 0.0],
            [-1.941, -0.2686, -3.365, 31.223],
            [-1.61682, 0.2656, -2.714, 25.364],
        ],
        Regression::Constant => [
            [-3.43035, -6.5393, -16.786, -79.433],
            [-2.86154, -2.8903, -4.234, -40.04],
            [-2.56677, -1.5384, -2.809, 0.0],
        ],
        Regression::ConstantTrend => [
            [-3.95877, -9.0531, -28.428, -134.155],
            [-3.41049, -4.3904, -9.036, -45.374],
            [-3.12705, -2.5856, -3.925, -22.38],
        ],
    }
}

/// Finite-sample critical values for a regression with `nobs` rows.
pub fn mackinnon_critical_values(regression: Regression, nobs: usize) -> CriticalValues {
    let inv = 1.0 / nobs as f64;
    let [one, five, ten] = critical_surface(regression).map(|c| polyval(&c, inv));
    CriticalValues { one, five, ten }
}

/// Asymptotic (`T → ∞`) critical values.
pub fn asymptotic_critical_values(regression: Regression) -> CriticalValues {
    let [one, five, ten] = critical_surface(regression).map(|c| c[0]);
    CriticalValues { one, five, ten }
}

impl core::fmt::Display for Regression {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Regression::None => "none",
            Regression::Constant => "constant",
            Regression::ConstantTrend => "constant+trend",
        })
    }
}

impl core::str::FromStr for Regression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" | "n" => Ok(Regression::None),
            "constant" | "c" => Ok(Regression::Constant),
            "constant+trend" | "ct" => Ok(Regression::ConstantTrend),
            other => Err(Error::Range {
                what: "regression",
                detail: format!("unknown regression '{other}'"),
            }),
        }
    }
}
