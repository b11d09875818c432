//! Unconstrained reparameterization of stationary AR / invertible MA
//! polynomials through their partial autocorrelations.
//!
//! Each unconstrained coordinate `u` maps to a partial autocorrelation
//! `r = u / √(1 + u²)` in `(−1, 1)`; the partials map to polynomial
//! coefficients through the Durbin–Levinson step-up recursion. Every
//! real vector therefore yields an admissible polynomial and vice versa.

use alloc::vec::Vec;

pub fn to_unit(u: f64) -> f64 {
    u / libm::sqrt(1.0 + u * u)
}

pub fn from_unit(r: f64) -> f64 {
    r / libm::sqrt(1.0 - r * r)
}

/// Step-up: partial autocorrelations to AR coefficients.
pub fn partials_to_ar(partials: &[f64]) -> Vec<f64> {
    let mut phi: Vec<f64> = Vec::with_capacity(partials.len());
    for &r in partials {
        let prev = phi.clone();
        let k = prev.len();
        for j in 0..k {
            phi[j] = prev[j] - r * prev[k - 1 - j];
        }
        phi.push(r);
    }
    phi
}

/// Step-down: AR coefficients to partial autocorrelations. `None` when
/// the polynomial is not stationary.
pub fn ar_to_partials(ar: &[f64]) -> Option<Vec<f64>> {
    let mut phi = ar.to_vec();
    let mut partials = alloc::vec![0.0; ar.len()];
    for k in (0..ar.len()).rev() {
        let r = phi[k];
        if !(r.abs() < 1.0) {
            return None;
        }
        partials[k] = r;
        let denom = 1.0 - r * r;
        let prev = phi.clone();
        for j in 0..k {
            phi[j] = (prev[j] + r * prev[k - 1 - j]) / denom;
        }
        phi.truncate(k);
    }
    Some(partials)
}

pub fn constrain_ar(u: &[f64]) -> Vec<f64> {
    let partials: Vec<f64> = u.iter().map(|&x| to_unit(x)).collect();
    partials_to_ar(&partials)
}

pub fn unconstrain_ar(ar: &[f64]) -> Option<Vec<f64>> {
    ar_to_partials(ar).map(|r| r.into_iter().map(from_unit).collect())
}

/// `θ(z) = 1 + Σθⱼzʲ` is invertible exactly when `1 − Σ(−θⱼ)zʲ` is
/// stationary, so MA coefficients reuse the AR map with a sign flip.
pub fn constrain_ma(u: &[f64]) -> Vec<f64> {
    constrain_ar(u).into_iter().map(|c| -c).collect()
}

pub fn unconstrain_ma(ma: &[f64]) -> Option<Vec<f64>> {
    let flipped: Vec<f64> = ma.iter().map(|c| -c).collect();
    unconstrain_ar(&flipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arma::ArmaParameters;
    use alloc::vec;

    #[test]
    fn ar1_is_identity_on_partials() {
        assert_eq!(partials_to_ar(&[0.4]), vec![0.4]);
        assert_eq!(ar_to_partials(&[-0.3]).unwrap(), vec![-0.3]);
    }

    #[test]
    fn ar2_step_up() {
        // φ₁ = r₁(1 − r₂), φ₂ = r₂
        let phi = partials_to_ar(&[0.5, 0.2]);
        assert!((phi[0] - 0.4).abs() < 1e-15);
        assert!((phi[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn non_stationary_has_no_partials() {
        assert!(ar_to_partials(&[1.0]).is_none());
        assert!(ar_to_partials(&[0.5, 0.6]).is_none());
    }

    #[test]
    fn extreme_coordinates_stay_admissible() {
        for &u in &[-1e3, -50.0, 0.0, 50.0, 1e3] {
            let ar = constrain_ar(&[u, -u, 0.3 * u]);
            let ma = constrain_ma(&[u]);
            let p = ArmaParameters::new(ar, ma, 0.0, 1.0);
            // near-repeated roots on the circle are only resolved to
            // about eps^(1/3) by the root finder
            assert!(p.ar_min_root_modulus() >= 1.0 - 1e-4);
            assert!(p.ma_min_root_modulus() >= 1.0 - 1e-4);
            assert!(ar_to_partials(&p.ar).is_some());
        }
    }
}
