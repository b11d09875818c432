//! Truncated multi-step forecasts with prediction intervals.
//!
//! In-sample innovations come from the truncated recursion
//! `w̃_t = y_t − Σφᵢ y_{t−i} − Σθⱼ w̃_{t−j}` with every pre-sample value
//! set to zero, where `y` is the demeaned `d`-th difference. Future
//! innovations are zero. Prediction variances use the ψ-weights of the
//! integrated operator `φ(B)(1 − B)^d`, so for `d ≥ 1` they grow without
//! bound.

use alloc::format;
use alloc::vec::Vec;

use crate::arma::{integrated_ar, psi_weights};
use crate::error::{Error, Result};
use crate::estimation::FittedModel;
use crate::series::{difference_values, integrate_values, TimeSeries};
use crate::special::normal_quantile;

/// Longest horizon accepted by [`forecast`].
pub const MAX_HORIZON: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastResult {
    pub horizon: usize,
    /// Time index of the first forecast.
    pub start: i64,
    pub point: Vec<f64>,
    pub variance: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub alpha: f64,
}

impl ForecastResult {
    pub fn times(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.horizon).map(move |h| self.start + h as i64)
    }
}

/// Innovations of the truncated recursion for a demeaned stationary series.
pub fn truncated_innovations(y: &[f64], ar: &[f64], ma: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = Vec::with_capacity(y.len());
    for t in 0..y.len() {
        let mut value = y[t];
        for (i, phi) in ar.iter().enumerate() {
            if let Some(prev) = t.checked_sub(i + 1) {
                value -= phi * y[prev];
            }
        }
        for (j, theta) in ma.iter().enumerate() {
            if let Some(prev) = t.checked_sub(j + 1) {
                value -= theta * w[prev];
            }
        }
        w.push(value);
    }
    w
}

/// `σ² Σ_{j<h} ψ_j²` for `h = 1..=m`, with ψ taken from `φ(B)(1 − B)^d`.
pub fn prediction_variances(ar: &[f64], ma: &[f64], d: usize, sigma2: f64, m: usize) -> Vec<f64> {
    let psi = psi_weights(&integrated_ar(ar, d), ma, m);
    let mut acc = 0.0;
    psi.iter()
        .map(|p| {
            acc += p * p;
            sigma2 * acc
        })
        .collect()
}

pub fn forecast(model: &FittedModel, series: &TimeSeries, m: usize, alpha: f64) -> Result<ForecastResult> {
    if m == 0 || m > MAX_HORIZON {
        return Err(Error::Range {
            what: "horizon",
            detail: format!("need 1 <= m <= {MAX_HORIZON}, got {m}"),
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Range {
            what: "alpha",
            detail: format!("need 0 < alpha < 1, got {alpha}"),
        });
    }
    let order = &model.order;
    let params = &model.params;
    let needed = order.d + 1;
    if series.len() < needed {
        return Err(Error::InsufficientData {
            what: "forecast",
            needed,
            got: series.len(),
        });
    }
    let mean = params.mean();
    let mut y: Vec<f64> = difference_values(series.values(), order.d)
        .into_iter()
        .map(|v| v - mean)
        .collect();
    let mut w = truncated_innovations(&y, &params.ar, &params.ma);
    let n = y.len();
    for _ in 0..m {
        let t = y.len();
        let mut value = 0.0;
        for (i, phi) in params.ar.iter().enumerate() {
            if let Some(prev) = t.checked_sub(i + 1) {
                value += phi * y[prev];
            }
        }
        for (j, theta) in params.ma.iter().enumerate() {
            if let Some(prev) = t.checked_sub(j + 1) {
                value += theta * w[prev];
            }
        }
        y.push(value);
        w.push(0.0);
    }
    let diffed: Vec<f64> = y[n..].iter().map(|v| v + mean).collect();
    let point = if order.d == 0 {
        diffed
    } else {
        let levels = series.values();
        let mut out = integrate_values(&diffed, &levels[levels.len() - order.d..])?;
        out.drain(..order.d);
        out
    };

    let variance = prediction_variances(&params.ar, &params.ma, order.d, params.sigma2, m);
    let z = normal_quantile(1.0 - alpha / 2.0);
    let half: Vec<f64> = variance.iter().map(|v| z * libm::sqrt(*v)).collect();
    Ok(ForecastResult {
        horizon: m,
        start: series.end() + 1,
        lower: point.iter().zip(&half).map(|(p, h)| p - h).collect(),
        upper: point.iter().zip(&half).map(|(p, h)| p + h).collect(),
        point,
        variance,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arma::{ArmaParameters, ModelOrder};
    use alloc::vec;

    fn model(order: ModelOrder, params: ArmaParameters, series: &TimeSeries) -> FittedModel {
        FittedModel::from_parameters(order, params, series).unwrap()
    }

    #[test]
    fn arma11_two_step_variance() {
        let v = prediction_variances(&[0.5], &[0.5], 0, 1.0, 3);
        assert_eq!(v[0], 1.0);
        assert!((v[1] - 2.0).abs() < 1e-15);
        // ψ₂ = (φ+θ)φ = 0.5
        assert!((v[2] - 2.25).abs() < 1e-15);
    }

    #[test]
    fn ar1_variance_tends_to_stationary() {
        let v = prediction_variances(&[0.8], &[], 0, 2.0, 400);
        assert!((v[399] - 2.0 / (1.0 - 0.64)).abs() < 1e-10);
    }

    #[test]
    fn random_walk_variance_is_linear() {
        let v = prediction_variances(&[], &[], 1, 0.5, 5);
        for (h, value) in v.iter().enumerate() {
            assert!((value - 0.5 * (h + 1) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn innovations_start_at_first_observation() {
        let w = truncated_innovations(&[1.0, 2.0, 0.5], &[0.5], &[0.4]);
        assert_eq!(w[0], 1.0);
        assert!((w[1] - (2.0 - 0.5 - 0.4)).abs() < 1e-15);
    }

    #[test]
    fn ar1_points_decay_to_mean() {
        let s = TimeSeries::new(2000, vec![0.0, 0.5, 1.0, 2.0]).unwrap();
        let params = ArmaParameters::new(vec![0.5], vec![], 0.5, 1.0);
        let f = forecast(&model(ModelOrder::new(1, 0, 0), params, &s), &s, 3, 0.05).unwrap();
        // mean 1: 1 + 0.5·(2 − 1), then halves
        assert!((f.point[0] - 1.5).abs() < 1e-15);
        assert!((f.point[1] - 1.25).abs() < 1e-15);
        assert_eq!(f.start, 2004);
        for h in 0..3 {
            assert!(f.lower[h] < f.point[h] && f.point[h] < f.upper[h]);
            let half = f.upper[h] - f.point[h];
            assert!((half - (f.point[h] - f.lower[h])).abs() < 1e-14);
        }
    }

    #[test]
    fn random_walk_forecast_is_flat() {
        let s = TimeSeries::new(0, vec![0.1, 0.4, 0.2, 0.7]).unwrap();
        let order = ModelOrder::new(0, 1, 0).with_constant(true);
        let f = forecast(&model(order, ArmaParameters::white_noise(1.0), &s), &s, 4, 0.1).unwrap();
        assert!(f.point.iter().all(|p| (p - 0.7).abs() < 1e-15));
    }

    #[test]
    fn rejects_bad_horizon_and_alpha() {
        let s = TimeSeries::new(0, vec![0.1, 0.4, 0.2, 0.7]).unwrap();
        let m = model(ModelOrder::new(0, 0, 0), ArmaParameters::white_noise(1.0), &s);
        assert!(forecast(&m, &s, 0, 0.05).is_err());
        assert!(forecast(&m, &s, MAX_HORIZON + 1, 0.05).is_err());
        assert!(forecast(&m, &s, 1, 0.0).is_err());
        assert!(forecast(&m, &s, 1, 1.0).is_err());
        assert!(forecast(&m, &s, MAX_HORIZON, 0.05).is_ok());
    }
}
