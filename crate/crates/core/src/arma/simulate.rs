use alloc::vec;
use alloc::vec::Vec;

use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use super::{ArmaParameters, ModelOrder};
use crate::error::{Error, Result};
use crate::series::{integrate_values, TimeSeries};

/// Generator used for every seeded simulation in the crate.
pub type SimRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

pub(crate) fn burn_in(p: usize, q: usize) -> usize {
    500.max(10 * (p + q))
}

/// Draws `n` observations of the ARIMA process, indexed from time 1.
///
/// The stationary ARMA recursion is started at the process mean and run
/// for a burn-in of `max(500, 10(p+q))` discarded steps; for `d > 0` the
/// stationary draws are then integrated `d` times from zero levels.
pub fn simulate(params: &ArmaParameters, order: &ModelOrder, n: usize, seed: u64) -> Result<TimeSeries> {
    params.ensure_matches(order)?;
    params.ensure_admissible()?;
    if n == 0 {
        return Err(Error::InsufficientData {
            what: "simulation length",
            needed: 1,
            got: 0,
        });
    }
    let mut rng = seeded_rng(seed);
    let sd = libm::sqrt(params.sigma2);
    let burn = burn_in(order.p, order.q);
    let total = burn + n;
    let (p, q) = (order.p, order.q);
    let mean = params.mean();

    let mut x = vec![mean; total + p];
    let mut w = vec![0.0; total + q];
    for t in 0..total {
        let draw: f64 = StandardNormal.sample(&mut rng);
        let shock = sd * draw;
        let (xi, wi) = (t + p, t + q);
        w[wi] = shock;
        let ar: f64 = params.ar.iter().enumerate().map(|(i, phi)| phi * x[xi - 1 - i]).sum();
        let ma: f64 = params
            .ma
            .iter()
            .enumerate()
            .map(|(j, theta)| theta * w[wi - 1 - j])
            .sum();
        x[xi] = params.constant + ar + shock + ma;
    }
    let stationary: Vec<f64> = x[p + burn..].to_vec();
    let values = if order.d == 0 {
        stationary
    } else {
        let mut levels = integrate_values(&stationary, &vec![0.0; order.d])?;
        levels.drain(..order.d);
        levels
    };
    TimeSeries::new(1, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let params = ArmaParameters::new(vec![0.5], vec![0.3], 0.1, 1.0);
        let order = ModelOrder::new(1, 0, 1);
        let a = simulate(&params, &order, 200, 42).unwrap();
        let b = simulate(&params, &order, 200, 42).unwrap();
        let c = simulate(&params, &order, 200, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 200);
    }

    #[test]
    fn vanishing_noise_gives_constant() {
        let params = ArmaParameters::new(vec![], vec![], 0.25, 1e-300);
        let s = simulate(&params, &ModelOrder::new(0, 0, 0), 50, 7).unwrap();
        assert!(s.values().iter().all(|v| (v - 0.25).abs() < 1e-140));
    }

    #[test]
    fn inadmissible_parameters_rejected() {
        let params = ArmaParameters::new(vec![1.02], vec![], 0.0, 1.0);
        assert!(matches!(
            simulate(&params, &ModelOrder::new(1, 0, 0), 10, 1),
            Err(Error::Inadmissible { .. })
        ));
        let params = ArmaParameters::new(vec![0.5], vec![], 0.0, 1.0);
        assert!(matches!(
            simulate(&params, &ModelOrder::new(1, 0, 1), 10, 1),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn integrated_simulation_differences_back() {
        let params = ArmaParameters::new(vec![0.4], vec![], 0.0, 1.0);
        let levels = simulate(&params, &ModelOrder::new(1, 1, 0), 300, 9).unwrap();
        let stationary = simulate(&params, &ModelOrder::new(1, 0, 0), 300, 9).unwrap();
        let diffed = levels.difference(1).unwrap();
        for (a, b) in diffed.values().iter().zip(&stationary.values()[1..]) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
