//! Exact Gaussian likelihood via a Harvey state-space form and the Kalman
//! filter, started from the stationary state distribution.
//!
//! State dimension is `r = max(p, q + 1)`:
//!
//! ```text
//! α_{t+1} = T α_t + R w_{t+1},   y_t − μ = α_t[0]
//! T = [φ | I_{r−1}; 0],          R = (1, θ₁, …, θ_{r−1})ᵀ
//! ```
//!
//! The filter runs with unit innovation variance; `F_t` are therefore
//! prediction-error variances relative to σ².

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{ArmaParameters, ModelOrder};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::series::{difference_values, TimeSeries};

/// Once `|F_t − 1|` falls below this the filter has reached its steady
/// state and the covariance recursion is frozen.
const STEADY_STATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct StateSpace {
    r: usize,
    phi: Vec<f64>,
    rvec: Vec<f64>,
    p0: Vec<f64>,
}

impl StateSpace {
    pub(crate) fn new(ar: &[f64], ma: &[f64]) -> Result<Self> {
        let r = ar.len().max(ma.len() + 1);
        let mut phi = vec![0.0; r];
        phi[..ar.len()].copy_from_slice(ar);
        let mut rvec = vec![0.0; r];
        rvec[0] = 1.0;
        rvec[1..=ma.len()].copy_from_slice(ma);

        let mut t = Matrix::zeros(r, r);
        for i in 0..r {
            t[(i, 0)] = phi[i];
            if i + 1 < r {
                t[(i, i + 1)] = 1.0;
            }
        }
        // (I − T⊗T) vec(P) = vec(RRᵀ)
        let m = r * r;
        let mut a = Matrix::identity(m);
        let mut b = vec![0.0; m];
        for i in 0..r {
            for j in 0..r {
                let row = i * r + j;
                b[row] = rvec[i] * rvec[j];
                for k in 0..r {
                    let tik = t[(i, k)];
                    if tik == 0.0 {
                        continue;
                    }
                    for l in 0..r {
                        a[(row, k * r + l)] -= tik * t[(j, l)];
                    }
                }
            }
        }
        let p0 = linalg::solve(&a, &b)?;
        Ok(Self { r, phi, rvec, p0 })
    }

    /// Runs the filter over centred observations, calling `visit(v_t, F_t)`.
    pub(crate) fn filter(&self, y: &[f64], mut visit: impl FnMut(f64, f64)) -> Result<()> {
        let r = self.r;
        let mut a = vec![0.0; r];
        let mut p = self.p0.clone();
        let mut k = vec![0.0; r];
        let mut a_upd = vec![0.0; r];
        let mut p_upd = vec![0.0; r * r];
        let mut tp = vec![0.0; r * r];
        let mut steady = false;

        for &obs in y {
            let v = obs - a[0];
            let f = p[0];
            if !(f > 0.0) || !f.is_finite() {
                return Err(Error::NumericalDegeneracy(
                    "prediction variance lost positive definiteness",
                ));
            }
            visit(v, f);

            if !steady {
                for i in 0..r {
                    k[i] = p[i * r] / f;
                }
            }
            for i in 0..r {
                a_upd[i] = a[i] + k[i] * v;
            }
            for i in 0..r {
                a[i] = self.phi[i] * a_upd[0] + if i + 1 < r { a_upd[i + 1] } else { 0.0 };
            }
            if steady {
                continue;
            }

            for i in 0..r {
                for j in 0..r {
                    p_upd[i * r + j] = p[i * r + j] - k[i] * p[j];
                }
            }
            // T P_upd
            for i in 0..r {
                for j in 0..r {
                    let below = if i + 1 < r { p_upd[(i + 1) * r + j] } else { 0.0 };
                    tp[i * r + j] = self.phi[i] * p_upd[j] + below;
                }
            }
            // (T P_upd) Tᵀ + R Rᵀ
            for i in 0..r {
                for j in 0..r {
                    let right = if j + 1 < r { tp[i * r + j + 1] } else { 0.0 };
                    p[i * r + j] = tp[i * r] * self.phi[j] + right + self.rvec[i] * self.rvec[j];
                }
            }
            if (p[0] - 1.0).abs() < STEADY_STATE_TOL {
                steady = true;
                for i in 0..r {
                    k[i] = p[i * r] / p[0];
                }
            }
        }
        Ok(())
    }
}

/// Log-likelihood with σ² profiled out, plus the profile estimate of σ².
pub(crate) fn concentrated_log_likelihood(ss: &StateSpace, y: &[f64]) -> Result<(f64, f64)> {
    let n = y.len() as f64;
    let mut sum_log_f = 0.0;
    let mut sum_scaled = 0.0;
    ss.filter(y, |v, f| {
        sum_log_f += libm::log(f);
        sum_scaled += v * v / f;
    })?;
    let sigma2 = sum_scaled / n;
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(Error::DegenerateInput("zero one-step prediction error"));
    }
    let loglik = -0.5 * n * (libm::log(2.0 * PI) + 1.0 + libm::log(sigma2)) - 0.5 * sum_log_f;
    Ok((loglik, sigma2))
}

/// Log-likelihood together with its one-step prediction errors.
#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodEvaluation {
    pub loglik: f64,
    /// One-step-ahead prediction errors of the (differenced) series.
    pub residuals: Vec<f64>,
    /// Their variances `σ² F_t`.
    pub residual_variances: Vec<f64>,
}

impl LikelihoodEvaluation {
    pub fn standardized_residuals(&self) -> Vec<f64> {
        self.residuals
            .iter()
            .zip(&self.residual_variances)
            .map(|(e, v)| e / libm::sqrt(*v))
            .collect()
    }
}

/// Exact Gaussian log-likelihood of `series` under the ARIMA model.
///
/// The series is differenced `d` times first; the first `d` observations
/// only enter through the differences (no diffuse prior).
pub fn log_likelihood(
    params: &ArmaParameters,
    order: &ModelOrder,
    series: &TimeSeries,
) -> Result<LikelihoodEvaluation> {
    params.ensure_matches(order)?;
    params.ensure_admissible()?;
    let needed = order.d + order.p + order.q + 1;
    if series.len() < needed {
        return Err(Error::InsufficientData {
            what: "likelihood",
            needed,
            got: series.len(),
        });
    }
    let mean = params.mean();
    let y: Vec<f64> = difference_values(series.values(), order.d)
        .into_iter()
        .map(|v| v - mean)
        .collect();
    let ss = StateSpace::new(&params.ar, &params.ma)?;

    let mut residuals = Vec::with_capacity(y.len());
    let mut residual_variances = Vec::with_capacity(y.len());
    let mut loglik = 0.0;
    let log_two_pi = libm::log(2.0 * PI);
    ss.filter(&y, |v, f| {
        let var = params.sigma2 * f;
        loglik -= 0.5 * (log_two_pi + libm::log(var) + v * v / var);
        residuals.push(v);
        residual_variances.push(var);
    })?;
    Ok(LikelihoodEvaluation {
        loglik,
        residuals,
        residual_variances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_noise_is_iid_gaussian() {
        let xs = [0.3, -1.1, 0.25, 2.0, -0.4];
        let s = TimeSeries::new(0, xs.to_vec()).unwrap();
        let params = ArmaParameters::new(vec![], vec![], 0.0, 0.8);
        let eval = log_likelihood(&params, &ModelOrder::new(0, 0, 0), &s).unwrap();
        let direct: f64 = xs
            .iter()
            .map(|x| -0.5 * (libm::log(2.0 * PI * 0.8) + x * x / 0.8))
            .sum();
        assert!((eval.loglik - direct).abs() < 1e-13);
        assert_eq!(eval.residuals, xs.to_vec());
    }

    #[test]
    fn ar1_matches_closed_form() {
        let xs = [0.5, 0.2, -0.3, 0.1, 0.9, 1.2, 0.4];
        let (phi, s2, c) = (0.6, 0.5, 0.1);
        let mu = c / (1.0 - phi);
        let s = TimeSeries::new(0, xs.to_vec()).unwrap();
        let params = ArmaParameters::new(vec![phi], vec![], c, s2);
        let eval = log_likelihood(&params, &ModelOrder::new(1, 0, 0), &s).unwrap();

        let v0 = s2 / (1.0 - phi * phi);
        let mut closed = -0.5 * (libm::log(2.0 * PI * v0) + (xs[0] - mu).powi(2) / v0);
        for t in 1..xs.len() {
            let e = xs[t] - mu - phi * (xs[t - 1] - mu);
            closed -= 0.5 * (libm::log(2.0 * PI * s2) + e * e / s2);
        }
        assert!((eval.loglik - closed).abs() < 1e-10);
    }

    #[test]
    fn profile_variance_maximizes_likelihood() {
        let xs = [0.5, 0.2, -0.3, 0.1, 0.9, 1.2, 0.4, -0.2, 0.0];
        let s = TimeSeries::new(0, xs.to_vec()).unwrap();
        let ss = StateSpace::new(&[0.4], &[0.2]).unwrap();
        let (ll, s2) = concentrated_log_likelihood(&ss, &xs).unwrap();
        let order = ModelOrder::new(1, 0, 1).with_constant(false);
        let at = |v: f64| {
            log_likelihood(&ArmaParameters::new(vec![0.4], vec![0.2], 0.0, v), &order, &s)
                .unwrap()
                .loglik
        };
        assert!((at(s2) - ll).abs() < 1e-10);
        assert!(at(s2 * 1.01) < ll && at(s2 * 0.99) < ll);
    }

    #[test]
    fn stationary_covariance_solves_lyapunov() {
        let ss = StateSpace::new(&[0.5, -0.2], &[0.3, 0.1]).unwrap();
        // γ(0) of the ARMA(2,2) equals P0[0,0]
        let params = ArmaParameters::new(vec![0.5, -0.2], vec![0.3, 0.1], 0.0, 1.0);
        let g = params.autocovariance(0).unwrap();
        assert!((ss.p0[0] - g[0]).abs() < 1e-12);
    }

    #[test]
    fn too_short_series_rejected() {
        let s = TimeSeries::new(0, vec![1.0, 2.0]).unwrap();
        let params = ArmaParameters::new(vec![0.2], vec![0.1], 0.0, 1.0);
        assert!(matches!(
            log_likelihood(&params, &ModelOrder::new(1, 1, 1), &s),
            Err(Error::InsufficientData { .. })
        ));
    }
}
