//! ARMA(p, q) / ARIMA(p, d, q) model representation.
//!
//! Sign conventions follow
//! `φ(B)(1 − B)^d x_t = c + θ(B) w_t` with
//! `φ(z) = 1 − φ₁z − … − φ_p z^p` and `θ(z) = 1 + θ₁z + … + θ_q z^q`,
//! where `w_t ~ N(0, σ²)`. `c` is the intercept of the recursion; the
//! process mean is `c / (1 − Σφᵢ)`.

mod likelihood;
pub mod polynomial;
mod simulate;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

pub(crate) use likelihood::{concentrated_log_likelihood, StateSpace};
pub use likelihood::{log_likelihood, LikelihoodEvaluation};
pub(crate) use simulate::burn_in;
pub use simulate::{seeded_rng, simulate, SimRng};

/// Root moduli must exceed `1 + ROOT_TOLERANCE` to count as outside the
/// unit circle.
pub const ROOT_TOLERANCE: f64 = 1e-8;

/// Highest integration order accepted by the estimation routines.
pub const MAX_DIFFERENCING: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub include_constant: bool,
}

impl ModelOrder {
    /// Order with the default intercept rule: a constant for `d = 0`,
    /// none once the series is differenced.
    pub fn new(p: usize, d: usize, q: usize) -> Self {
        Self {
            p,
            d,
            q,
            include_constant: d == 0,
        }
    }

    pub fn with_constant(mut self, include_constant: bool) -> Self {
        self.include_constant = include_constant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p + self.q == 0 && !self.include_constant {
            return Err(Error::Range {
                what: "model order",
                detail: "p + q >= 1 or a constant is required".into(),
            });
        }
        if self.d > MAX_DIFFERENCING {
            return Err(Error::Range {
                what: "differencing order",
                detail: format!("d <= {MAX_DIFFERENCING} supported, got {}", self.d),
            });
        }
        Ok(())
    }

    /// Number of estimated parameters, innovation variance included.
    pub fn parameter_count(&self) -> usize {
        self.p + self.q + usize::from(self.include_constant) + 1
    }
}

impl core::fmt::Display for ModelOrder {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{},{})", self.p, self.d, self.q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArmaParameters {
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub constant: f64,
    pub sigma2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// An AR-polynomial root lies on or inside the unit circle.
    NonStationary {
        min_root_modulus: f64,
    },
    /// An MA-polynomial root lies on or inside the unit circle.
    NonInvertible {
        min_root_modulus: f64,
    },
    NonPositiveVariance {
        sigma2: f64,
    },
    NonFinite,
}

impl ArmaParameters {
    pub fn new(ar: Vec<f64>, ma: Vec<f64>, constant: f64, sigma2: f64) -> Self {
        Self {
            ar,
            ma,
            constant,
            sigma2,
        }
    }

    pub fn white_noise(sigma2: f64) -> Self {
        Self::new(Vec::new(), Vec::new(), 0.0, sigma2)
    }

    /// Process mean `c / (1 − Σφᵢ)`.
    pub fn mean(&self) -> f64 {
        self.constant / (1.0 - self.ar.iter().sum::<f64>())
    }

    /// `[1, −φ₁, …, −φ_p]`
    pub fn ar_polynomial(&self) -> Vec<f64> {
        core::iter::once(1.0).chain(self.ar.iter().map(|a| -a)).collect()
    }

    /// `[1, θ₁, …, θ_q]`
    pub fn ma_polynomial(&self) -> Vec<f64> {
        core::iter::once(1.0).chain(self.ma.iter().copied()).collect()
    }

    pub fn ar_min_root_modulus(&self) -> f64 {
        polynomial::min_root_modulus(&self.ar_polynomial())
    }

    pub fn ma_min_root_modulus(&self) -> f64 {
        polynomial::min_root_modulus(&self.ma_polynomial())
    }

    /// Stationarity, invertibility and variance checks; empty when admissible.
    pub fn check_admissible(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let all_finite = self
            .ar
            .iter()
            .chain(&self.ma)
            .chain([&self.constant, &self.sigma2])
            .all(|v| v.is_finite());
        if !all_finite {
            out.push(Violation::NonFinite);
            return out;
        }
        let ar_mod = self.ar_min_root_modulus();
        if ar_mod <= 1.0 + ROOT_TOLERANCE {
            out.push(Violation::NonStationary {
                min_root_modulus: ar_mod,
            });
        }
        let ma_mod = self.ma_min_root_modulus();
        if ma_mod <= 1.0 + ROOT_TOLERANCE {
            out.push(Violation::NonInvertible {
                min_root_modulus: ma_mod,
            });
        }
        if self.sigma2 <= 0.0 {
            out.push(Violation::NonPositiveVariance { sigma2: self.sigma2 });
        }
        out
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_empty()
    }

    pub(crate) fn ensure_admissible(&self) -> Result<()> {
        let violations = self.check_admissible();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Inadmissible { violations })
        }
    }

    pub(crate) fn ensure_matches(&self, order: &ModelOrder) -> Result<()> {
        if self.ar.len() != order.p {
            return Err(Error::Dimension {
                expected: order.p,
                got: self.ar.len(),
            });
        }
        if self.ma.len() != order.q {
            return Err(Error::Dimension {
                expected: order.q,
                got: self.ma.len(),
            });
        }
        Ok(())
    }

    /// MA(∞) weights `ψ₀ = 1, ψ₁, …, ψ_{m−1}` of the stationary part.
    pub fn psi_weights(&self, m: usize) -> Vec<f64> {
        psi_weights(&self.ar, &self.ma, m)
    }

    /// Exact autocovariances `γ(0..=max_lag)` of the stationary process.
    pub fn autocovariance(&self, max_lag: usize) -> Result<Vec<f64>> {
        self.ensure_admissible()?;
        let p = self.ar.len();
        let q = self.ma.len();
        let psi = self.psi_weights(q + 1);
        let theta = self.ma_polynomial();
        // rhs_k = σ² Σ_{j=k}^{q} θ_j ψ_{j−k}
        let rhs = |k: usize| -> f64 {
            if k > q {
                return 0.0;
            }
            self.sigma2 * (k..=q).map(|j| theta[j] * psi[j - k]).sum::<f64>()
        };

        let mut a = Matrix::zeros(p + 1, p + 1);
        let mut b = vec![0.0; p + 1];
        for k in 0..=p {
            a[(k, k)] += 1.0;
            for (i, phi) in self.ar.iter().enumerate() {
                let lag = (k as isize - (i as isize + 1)).unsigned_abs();
                a[(k, lag)] -= phi;
            }
            b[k] = rhs(k);
        }
        let head = linalg::solve(&a, &b)?;
        let mut gamma = Vec::with_capacity(max_lag + 1);
        for k in 0..=max_lag {
            let value = if k <= p {
                head[k]
            } else {
                let ar_part: f64 = self.ar.iter().enumerate().map(|(i, phi)| phi * gamma[k - i - 1]).sum();
                ar_part + rhs(k)
            };
            gamma.push(value);
        }
        Ok(gamma)
    }

    /// Theoretical autocorrelations `ρ(0..=max_lag)`.
    pub fn autocorrelation(&self, max_lag: usize) -> Result<Vec<f64>> {
        let gamma = self.autocovariance(max_lag)?;
        Ok(gamma.iter().map(|g| g / gamma[0]).collect())
    }
}

pub(crate) fn psi_weights(ar: &[f64], ma: &[f64], m: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(m);
    for j in 0..m {
        let mut value = if j == 0 {
            1.0
        } else {
            ma.get(j - 1).copied().unwrap_or(0.0)
        };
        for (i, phi) in ar.iter().enumerate() {
            if i < j {
                value += phi * psi[j - i - 1];
            }
        }
        psi.push(value);
    }
    psi
}

/// AR coefficients of `φ(B)(1 − B)^d`, i.e. the integrated process viewed
/// as a (non-stationary) AR polynomial.
pub fn integrated_ar(ar: &[f64], d: usize) -> Vec<f64> {
    let mut poly: Vec<f64> = core::iter::once(1.0).chain(ar.iter().map(|a| -a)).collect();
    for _ in 0..d {
        let mut next = vec![0.0; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c;
        }
        poly = next;
    }
    poly[1..].iter().map(|c| -c).collect()
}
