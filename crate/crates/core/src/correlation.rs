//! Sample and theoretical autocorrelation / partial autocorrelation.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::special::normal_quantile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationKind {
    Acf,
    Pacf,
}

/// Correlation values by lag with a symmetric white-noise band.
///
/// ACF sequences start at lag 0, PACF sequences at lag 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSequence {
    pub kind: CorrelationKind,
    pub values: Vec<f64>,
    /// Half-width of the 95% band, `z₀.₉₇₅ / √n`.
    pub threshold: f64,
}

impl CorrelationSequence {
    pub fn first_lag(&self) -> usize {
        match self.kind {
            CorrelationKind::Acf => 0,
            CorrelationKind::Pacf => 1,
        }
    }

    pub fn max_lag(&self) -> usize {
        self.first_lag() + self.values.len() - 1
    }

    /// Value at lag `h`, if it was computed.
    pub fn at(&self, h: usize) -> Option<f64> {
        h.checked_sub(self.first_lag())
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn lags(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let first = self.first_lag();
        self.values.iter().enumerate().map(move |(i, &v)| (first + i, v))
    }

    /// Lags whose absolute value exceeds the band (lag 0 of an ACF excluded).
    pub fn significant_lags(&self) -> Vec<usize> {
        self.lags()
            .filter(|&(h, v)| h > 0 && v.abs() > self.threshold)
            .map(|(h, _)| h)
            .collect()
    }
}

pub(crate) fn white_noise_band(n: usize) -> f64 {
    normal_quantile(0.975) / libm::sqrt(n as f64)
}

/// Biased sample autocovariances `γ̂(0..=max_lag)` (denominator `n`).
pub fn sample_autocovariance(values: &[f64], max_lag: usize) -> Vec<f64> {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    (0..=max_lag.min(n.saturating_sub(1)))
        .map(|h| {
            centered[..n - h]
                .iter()
                .zip(&centered[h..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

pub fn sample_acf(series: &TimeSeries, max_lag: usize) -> Result<CorrelationSequence> {
    let n = series.len();
    if max_lag == 0 || max_lag >= n {
        return Err(Error::Range {
            what: "max_lag",
            detail: format!("need 1 <= max_lag < n = {n}, got {max_lag}"),
        });
    }
    let gamma = sample_autocovariance(series.values(), max_lag);
    if gamma[0] <= 0.0 {
        return Err(Error::DegenerateInput("series has zero variance"));
    }
    let mut values: Vec<f64> = gamma.iter().map(|g| g / gamma[0]).collect();
    values[0] = 1.0;
    Ok(CorrelationSequence {
        kind: CorrelationKind::Acf,
        values,
        threshold: white_noise_band(n),
    })
}

/// Output of the Durbin–Levinson recursion on an autocorrelation sequence.
#[derive(Debug, Clone)]
pub struct Levinson {
    /// `φ_hh` for `h = 1..=order`.
    pub partial: Vec<f64>,
    /// AR coefficients of the highest-order fit.
    pub coefficients: Vec<f64>,
    /// Normalized one-step prediction error variance after each order.
    pub error_variance: Vec<f64>,
}

/// Durbin–Levinson recursion. `rho[0]` must be 1.
pub fn durbin_levinson(rho: &[f64]) -> Result<Levinson> {
    let order = rho.len().saturating_sub(1);
    let mut phi: Vec<f64> = Vec::with_capacity(order);
    let mut partial = Vec::with_capacity(order);
    let mut error_variance = Vec::with_capacity(order);
    let mut v = 1.0;
    for k in 1..=order {
        let num = rho[k] - phi.iter().enumerate().map(|(j, p)| p * rho[k - 1 - j]).sum::<f64>();
        let kappa = num / v;
        if !kappa.is_finite() || kappa.abs() >= 1.0 {
            return Err(Error::NumericalDegeneracy(
                "partial autocorrelation reached the unit circle",
            ));
        }
        let prev = phi.clone();
        for j in 0..prev.len() {
            phi[j] = prev[j] - kappa * prev[prev.len() - 1 - j];
        }
        phi.push(kappa);
        v *= 1.0 - kappa * kappa;
        partial.push(kappa);
        error_variance.push(v);
    }
    Ok(Levinson {
        partial,
        coefficients: phi,
        error_variance,
    })
}

pub fn sample_pacf(series: &TimeSeries, max_lag: usize) -> Result<CorrelationSequence> {
    let n = series.len();
    if max_lag == 0 || 2 * max_lag >= n {
        return Err(Error::Range {
            what: "max_lag",
            detail: format!("need 1 <= max_lag < n/2 = {}, got {max_lag}", n as f64 / 2.0),
        });
    }
    let acf = sample_acf(series, max_lag)?;
    let levinson = durbin_levinson(&acf.values)?;
    Ok(CorrelationSequence {
        kind: CorrelationKind::Pacf,
        values: levinson.partial,
        threshold: acf.threshold,
    })
}

fn check_unit_interval(what: &'static str, value: f64) -> Result<()> {
    if value.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::Range {
            what,
            detail: format!("|{value}| must be < 1"),
        })
    }
}

/// `ρ(h) = φ^h` for a stationary AR(1).
pub fn theoretical_acf_ar1(phi: f64, h: usize) -> Result<f64> {
    check_unit_interval("AR coefficient (stationarity)", phi)?;
    Ok(libm::pow(phi, h as f64))
}

/// Autocorrelation of a stationary, invertible ARMA(1,1) at lag `h ≥ 1`:
/// `(φ+θ)(1+φθ) / (1+2φθ+θ²) · φ^(h−1)`.
pub fn theoretical_acf_arma11(phi: f64, theta: f64, h: usize) -> Result<f64> {
    check_unit_interval("AR coefficient (stationarity)", phi)?;
    check_unit_interval("MA coefficient (invertibility)", theta)?;
    if h == 0 {
        return Err(Error::Range {
            what: "lag",
            detail: "ARMA(1,1) closed form is stated for h >= 1".into(),
        });
    }
    let rho1 = (phi + theta) * (1.0 + phi * theta) / (1.0 + 2.0 * phi * theta + theta * theta);
    Ok(rho1 * libm::pow(phi, (h - 1) as f64))
}

/// Geometric "casual form" ACF `½(1+β)β^(h−1)` that the uncertainty
/// model's narrative quotes for its bias coefficient β.
///
/// This is not the autocorrelation of a general ARMA(1,1); it agrees with
/// [`theoretical_acf_arma11`] only for special parameter pairs. Kept for
/// reproducing that narrative.
pub fn casual_form_acf(beta: f64, h: usize) -> Result<f64> {
    check_unit_interval("bias coefficient", beta)?;
    if h == 0 {
        return Ok(1.0);
    }
    Ok(0.5 * (1.0 + beta) * libm::pow(beta, (h - 1) as f64))
}
