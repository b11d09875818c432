use proptest::prelude::*;
use tsarma_core::correlation::{sample_acf, sample_autocovariance, sample_pacf};
use tsarma_core::diagnostics::{gaussian_kde, KDE_GRID_POINTS};
use tsarma_core::estimation::transform::{ar_to_partials, constrain_ma, partials_to_ar, unconstrain_ma};
use tsarma_core::linalg::{solve, Matrix};
use tsarma_core::series::{difference_values, integrate_values};
use tsarma_core::TimeSeries;

fn values(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, len)
}

/// Series with enough spread that correlations are well conditioned.
fn noisy(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    values(len).prop_filter("spread", |v| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64 > 1.0
    })
}

proptest! {
    #[test]
    fn difference_then_integrate_is_identity(x in values(4..60), d in 1usize..=3) {
        let diffed = difference_values(&x, d);
        let back = integrate_values(&diffed, &x[..d]).unwrap();
        prop_assert_eq!(back.len(), x.len());
        for (a, b) in back.iter().zip(&x) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn differencing_is_linear(x in values(10..40), a in -5.0..5.0f64, d in 0usize..=2) {
        let y: Vec<f64> = x.iter().rev().copied().collect();
        let combined: Vec<f64> = x.iter().zip(&y).map(|(u, v)| a * u + v).collect();
        let lhs = difference_values(&combined, d);
        let dx = difference_values(&x, d);
        let dy = difference_values(&y, d);
        for i in 0..lhs.len() {
            prop_assert!((lhs[i] - (a * dx[i] + dy[i])).abs() <= 1e-9 * (1.0 + lhs[i].abs()));
        }
    }

    #[test]
    fn moments_follow_affine_maps(x in noisy(8..80), a in prop_oneof![-10.0..-0.1f64, 0.1..10.0f64], b in -50.0..50.0f64) {
        let s = TimeSeries::new(0, x).unwrap();
        let m = s.moments().unwrap();
        let t = s.map(|v| a * v + b).unwrap().moments().unwrap();
        prop_assert!((t.mean - (a * m.mean + b)).abs() <= 1e-9 * (1.0 + t.mean.abs()));
        prop_assert!((t.variance - a * a * m.variance).abs() <= 1e-9 * t.variance);
        let sign = a.signum();
        prop_assert!((t.skewness.unwrap() - sign * m.skewness.unwrap()).abs() <= 1e-8);
        prop_assert!((t.kurtosis.unwrap() - m.kurtosis.unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn acf_is_affine_invariant(x in noisy(30..80), a in prop_oneof![-10.0..-0.1f64, 0.1..10.0f64], b in -50.0..50.0f64) {
        let s = TimeSeries::new(0, x).unwrap();
        let t = s.map(|v| a * v + b).unwrap();
        let lhs = sample_acf(&s, 10).unwrap();
        let rhs = sample_acf(&t, 10).unwrap();
        for (u, v) in lhs.values.iter().zip(&rhs.values) {
            prop_assert!((u - v).abs() <= 1e-9);
        }
    }

    /// Each partial autocorrelation equals the last coefficient of the
    /// order-k Yule–Walker regression, solved here as a dense system.
    #[test]
    fn pacf_matches_regression_oracle(x in noisy(40..100)) {
        let s = TimeSeries::new(0, x.clone()).unwrap();
        let max_lag = 8;
        let pacf = sample_pacf(&s, max_lag).unwrap();
        let gamma = sample_autocovariance(&x, max_lag);
        for k in 1..=max_lag {
            let mut a = Matrix::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    a[(i, j)] = gamma[i.abs_diff(j)];
                }
            }
            let coef = solve(&a, &gamma[1..=k]).unwrap();
            prop_assert!((pacf.at(k).unwrap() - coef[k - 1]).abs() <= 1e-6, "lag {}", k);
        }
    }

    #[test]
    fn reparameterization_round_trips(partials in prop::collection::vec(-0.99..0.99f64, 1..5)) {
        let ar = partials_to_ar(&partials);
        let back = ar_to_partials(&ar).unwrap();
        for (a, b) in back.iter().zip(&partials) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        let u: Vec<f64> = partials.iter().map(|r| r * 3.0).collect();
        let ma = constrain_ma(&u);
        let u_back = unconstrain_ma(&ma).unwrap();
        for (a, b) in u_back.iter().zip(&u) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn kde_is_a_density(x in noisy(5..200)) {
        let kde = gaussian_kde(&x, KDE_GRID_POINTS);
        prop_assert!(kde.points.iter().all(|&(_, d)| d >= 0.0));
        prop_assert!((kde.integral() - 1.0).abs() <= 1e-3);
    }
}
