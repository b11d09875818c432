//! Land/sea uncertainty bookkeeping and the biased-anomaly process
//!
//! `X(t) = α + β X(t−1) + w_L(t) + w_S(t−1)`,
//!
//! whose composite noise `u(t) = w_L(t) + w_S(t−1)` makes it an
//! ARMA(1,1). Land and sea noises are independent unless a
//! contemporaneous cross-covariance `c = Cov(w_L(t), w_S(t))` is given;
//! then `γ_u(0) = σ_L² + σ_S²` and `γ_u(1) = c`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use crate::arma::{seeded_rng, ArmaParameters, ModelOrder, SimRng, Violation};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyDecomposition {
    pub sigma2_total: f64,
    pub sigma2_land: f64,
    pub sigma2_sea: f64,
}

pub fn decompose(sigma2_land: f64, sigma2_sea: f64) -> Result<UncertaintyDecomposition> {
    for (name, v) in [("land", sigma2_land), ("sea", sigma2_sea)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!(
                "{name} variance must be finite and non-negative, got {v}"
            )));
        }
    }
    Ok(UncertaintyDecomposition {
        sigma2_total: sigma2_land + sigma2_sea,
        sigma2_land,
        sigma2_sea,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasedAnomalyConfig {
    /// Opaque period label (e.g. a decade index).
    pub period: Option<u32>,
    pub alpha: f64,
    pub beta: f64,
    pub sigma2_land: f64,
    pub sigma2_sea: f64,
    pub cross_covariance: f64,
    pub n: usize,
    pub seed: u64,
}

impl BiasedAnomalyConfig {
    pub fn new(alpha: f64, beta: f64, sigma2_land: f64, sigma2_sea: f64, n: usize, seed: u64) -> Self {
        Self {
            period: None,
            alpha,
            beta,
            sigma2_land,
            sigma2_sea,
            cross_covariance: 0.0,
            n,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        decompose(self.sigma2_land, self.sigma2_sea)?;
        if !(self.beta.abs() < 1.0) {
            return Err(Error::Inadmissible {
                violations: vec![Violation::NonStationary {
                    min_root_modulus: 1.0 / self.beta.abs(),
                }],
            });
        }
        if !self.alpha.is_finite() || !self.cross_covariance.is_finite() {
            return Err(Error::Domain("non-finite bias or covariance".into()));
        }
        let bound = libm::sqrt(self.sigma2_land * self.sigma2_sea);
        if self.cross_covariance.abs() > bound * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "cross-covariance {} exceeds sqrt(land * sea) = {bound}",
                self.cross_covariance
            )));
        }
        Ok(())
    }
}

/// Correlated `(w_L, w_S)` draws from two standard normals.
struct NoisePair {
    sd_land: f64,
    sea_on_land: f64,
    sea_own: f64,
}

impl NoisePair {
    fn new(sigma2_land: f64, sigma2_sea: f64, cov: f64) -> Self {
        let sd_land = libm::sqrt(sigma2_land);
        let sea_on_land = if sd_land > 0.0 { cov / sd_land } else { 0.0 };
        let sea_own = libm::sqrt((sigma2_sea - sea_on_land * sea_on_land).max(0.0));
        Self {
            sd_land,
            sea_on_land,
            sea_own,
        }
    }

    fn draw(&self, rng: &mut SimRng) -> (f64, f64) {
        let z1: f64 = StandardNormal.sample(rng);
        let z2: f64 = StandardNormal.sample(rng);
        (self.sd_land * z1, self.sea_on_land * z1 + self.sea_own * z2)
    }
}

/// Seeded draw of `n` values indexed from time 1, started at the fixed
/// point `α/(1 − β)` after a burn-in of 500 steps.
pub fn simulate_biased_anomaly(config: &BiasedAnomalyConfig) -> Result<TimeSeries> {
    config.validate()?;
    if config.n == 0 {
        return Err(Error::InsufficientData {
            what: "simulation length",
            needed: 1,
            got: 0,
        });
    }
    let noise = NoisePair::new(config.sigma2_land, config.sigma2_sea, config.cross_covariance);
    let mut rng = seeded_rng(config.seed);
    let burn = crate::arma::burn_in(1, 1);
    let mut x = config.alpha / (1.0 - config.beta);
    let mut sea_prev = noise.draw(&mut rng).1;
    let mut out = Vec::with_capacity(config.n);
    for t in 0..burn + config.n {
        let (land, sea) = noise.draw(&mut rng);
        x = config.alpha + config.beta * x + land + sea_prev;
        sea_prev = sea;
        if t >= burn {
            out.push(x);
        }
    }
    TimeSeries::new(1, out)
}

/// The ARMA(1,1) with the same autocovariances as the biased-anomaly
/// process: AR coefficient β, constant α and the invertible MA solution of
/// `σ²(1 + θ²) = γ_u(0)`, `σ²θ = γ_u(1)`.
pub fn reduce_to_arma(config: &BiasedAnomalyConfig) -> Result<(ArmaParameters, ModelOrder)> {
    config.validate()?;
    let gamma0 = config.sigma2_land + config.sigma2_sea;
    if !(gamma0 > 0.0) {
        return Err(Error::Domain("total noise variance must be positive".into()));
    }
    let gamma1 = config.cross_covariance;
    let rho = gamma1 / gamma0;
    let disc = 1.0 - 4.0 * rho * rho;
    if disc <= 0.0 {
        return Err(Error::Domain(
            "perfectly correlated land/sea noise has no invertible reduction".into(),
        ));
    }
    let theta = if rho == 0.0 {
        0.0
    } else {
        (1.0 - libm::sqrt(disc)) / (2.0 * rho)
    };
    let sigma2 = gamma0 / (1.0 + theta * theta);
    let params = ArmaParameters::new(vec![config.beta], vec![theta], config.alpha, sigma2);
    Ok((params, ModelOrder::new(1, 0, 1).with_constant(true)))
}

/// `D(t) = Y(t) − X(t)` for series on the same time index.
pub fn difference_series(truth: &TimeSeries, reduced: &TimeSeries) -> Result<TimeSeries> {
    if truth.start() != reduced.start() || truth.len() != reduced.len() {
        return Err(Error::Alignment(format!(
            "truth covers {}..={}, reduced covers {}..={}",
            truth.start(),
            truth.end(),
            reduced.start(),
            reduced.end()
        )));
    }
    let values = truth
        .values()
        .iter()
        .zip(reduced.values())
        .map(|(y, x)| y - x)
        .collect();
    TimeSeries::new(truth.start(), values)
}

/// A reduced series `X(t) = Y(t) + w_L(t) + w_S(t)` built from `truth`
/// with independent land and sea measurement noise.
pub fn perturb(truth: &TimeSeries, noise: &UncertaintyDecomposition, seed: u64) -> Result<TimeSeries> {
    let pair = NoisePair::new(noise.sigma2_land, noise.sigma2_sea, 0.0);
    let mut rng = seeded_rng(seed);
    let values = truth
        .values()
        .iter()
        .map(|y| {
            let (land, sea) = pair.draw(&mut rng);
            y + land + sea
        })
        .collect();
    TimeSeries::new(truth.start(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_adds() {
        assert_eq!(decompose(0.0, 0.0).unwrap().sigma2_total, 0.0);
        assert!((decompose(0.004, 0.007).unwrap().sigma2_total - 0.011).abs() < 1e-18);
        assert_eq!(
            decompose(0.3, 0.2).unwrap().sigma2_total,
            decompose(0.2, 0.3).unwrap().sigma2_total
        );
        assert!(matches!(decompose(-0.1, 0.2), Err(Error::Domain(_))));
    }

    #[test]
    fn noiseless_process_sits_at_fixed_point() {
        let cfg = BiasedAnomalyConfig::new(0.3, 0.4, 0.0, 0.0, 20, 1);
        let s = simulate_biased_anomaly(&cfg).unwrap();
        assert!(s.values().iter().all(|v| (v - 0.5).abs() < 1e-14));
    }

    #[test]
    fn unit_beta_is_rejected() {
        let cfg = BiasedAnomalyConfig::new(0.0, 1.0, 0.1, 0.1, 20, 1);
        assert!(matches!(simulate_biased_anomaly(&cfg), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn independent_noise_reduces_to_ar1_with_summed_variance() {
        let cfg = BiasedAnomalyConfig::new(0.1, 0.9, 0.5, 0.5, 10, 1);
        let (p, order) = reduce_to_arma(&cfg).unwrap();
        assert_eq!(p.ma, vec![0.0]);
        assert_eq!(p.sigma2, 1.0);
        assert_eq!(p.constant, 0.1);
        assert_eq!((order.p, order.d, order.q), (1, 0, 1));
    }

    #[test]
    fn correlated_noise_matches_autocovariance() {
        let mut cfg = BiasedAnomalyConfig::new(0.0, 0.5, 0.3, 0.2, 10, 1);
        cfg.cross_covariance = 0.2;
        let (p, _) = reduce_to_arma(&cfg).unwrap();
        let theta = p.ma[0];
        assert!(theta.abs() < 1.0);
        assert!((p.sigma2 * (1.0 + theta * theta) - 0.5).abs() < 1e-14);
        assert!((p.sigma2 * theta - 0.2).abs() < 1e-14);
    }

    #[test]
    fn inconsistent_covariance_is_domain_error() {
        let mut cfg = BiasedAnomalyConfig::new(0.0, 0.5, 0.1, 0.1, 10, 1);
        cfg.cross_covariance = 0.2;
        assert!(matches!(reduce_to_arma(&cfg), Err(Error::Domain(_))));
        cfg.cross_covariance = 0.1;
        assert!(matches!(reduce_to_arma(&cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn difference_checks_alignment() {
        let y = TimeSeries::new(1900, vec![1.0, 2.0, 3.0]).unwrap();
        let x = TimeSeries::new(1900, vec![0.5, 2.5, 3.0]).unwrap();
        let d = difference_series(&y, &x).unwrap();
        assert_eq!(d.values(), &[0.5, -0.5, 0.0]);
        let shifted = TimeSeries::new(1901, vec![0.5, 2.5, 3.0]).unwrap();
        assert!(matches!(difference_series(&y, &shifted), Err(Error::Alignment(_))));
    }
}
