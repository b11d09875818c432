//! Starting values: Hannan–Rissanen regression followed by a conditional
//! sum-of-squares refinement.

use alloc::vec::Vec;

use crate::arma::ArmaParameters;
use crate::correlation::{durbin_levinson, sample_autocovariance};
use crate::linalg::{least_squares, Matrix};

/// Conditional residuals with pre-sample innovations set to zero; the
/// first `p` observations only serve as lags.
pub(crate) fn conditional_residuals(y: &[f64], ar: &[f64], ma: &[f64]) -> Vec<f64> {
    let p = ar.len();
    let mut e = alloc::vec![0.0; y.len()];
    for t in p..y.len() {
        let mut v = y[t];
        for (i, phi) in ar.iter().enumerate() {
            v -= phi * y[t - 1 - i];
        }
        for (j, theta) in ma.iter().enumerate() {
            if t > j {
                v -= theta * e[t - 1 - j];
            }
        }
        e[t] = v;
    }
    e
}

pub(crate) fn conditional_sum_of_squares(y: &[f64], ar: &[f64], ma: &[f64]) -> f64 {
    conditional_residuals(y, ar, ma)[ar.len()..].iter().map(|e| e * e).sum()
}

/// Shrinks a polynomial's coefficients (`cᵢ ← cᵢ λⁱ`) until its roots sit
/// comfortably outside the unit circle.
fn shrink_into_region(coeffs: &mut [f64], is_ma: bool) {
    let margin = 1.02;
    for _ in 0..200 {
        let params = if is_ma {
            ArmaParameters::new(Vec::new(), coeffs.to_vec(), 0.0, 1.0)
        } else {
            ArmaParameters::new(coeffs.to_vec(), Vec::new(), 0.0, 1.0)
        };
        let modulus = if is_ma {
            params.ma_min_root_modulus()
        } else {
            params.ar_min_root_modulus()
        };
        if modulus > margin && coeffs.iter().all(|c| c.is_finite()) {
            return;
        }
        let mut scale = 1.0;
        for c in coeffs.iter_mut() {
            scale *= 0.9;
            *c = if c.is_finite() { *c * scale } else { 0.0 };
        }
    }
    coeffs.iter_mut().for_each(|c| *c = 0.0);
}

/// Hannan–Rissanen estimates on a centred series, projected into the
/// admissible region.
pub(crate) fn hannan_rissanen(y: &[f64], p: usize, q: usize) -> (Vec<f64>, Vec<f64>) {
    let n = y.len();
    let zeros = || (alloc::vec![0.0; p], alloc::vec![0.0; q]);
    if p + q == 0 {
        return (Vec::new(), Vec::new());
    }
    let yule_walker = |order: usize| -> Option<Vec<f64>> {
        let gamma = sample_autocovariance(y, order);
        if gamma.len() <= order || gamma[0] <= 0.0 {
            return None;
        }
        let rho: Vec<f64> = gamma.iter().map(|g| g / gamma[0]).collect();
        durbin_levinson(&rho).ok().map(|l| l.coefficients)
    };

    let (mut ar, mut ma) = if q == 0 {
        match yule_walker(p) {
            Some(ar) => (ar, Vec::new()),
            None => zeros(),
        }
    } else {
        let long = (p + q + 1).max((libm::log(n as f64) * 2.0) as usize).min(n / 4);
        match yule_walker(long) {
            Some(long_ar) if n > long + q + p + 2 => {
                let e = conditional_residuals(y, &long_ar, &[]);
                let start = long + q.max(p);
                let rows = n - start;
                let mut design = Vec::with_capacity(rows * (p + q));
                let mut target = Vec::with_capacity(rows);
                for t in start..n {
                    design.extend((1..=p).map(|i| y[t - i]));
                    design.extend((1..=q).map(|j| e[t - j]));
                    target.push(y[t]);
                }
                match Matrix::from_row_major(rows, p + q, design).and_then(|x| least_squares(&x, &target)) {
                    Ok(fit) => {
                        let beta = fit.coefficients;
                        (beta[..p].to_vec(), beta[p..].to_vec())
                    }
                    Err(_) => zeros(),
                }
            }
            _ => zeros(),
        }
    };
    shrink_into_region(&mut ar, false);
    shrink_into_region(&mut ma, true);
    (ar, ma)
}
