use tsarma_core::arma::{log_likelihood, simulate};
use tsarma_core::estimation::{auto_select, fit};
use tsarma_core::{ArmaParameters, Criterion, ModelOrder, SelectionGrid, TimeSeries};

fn arma(phi: &[f64], theta: &[f64], n: usize, seed: u64) -> TimeSeries {
    let params = ArmaParameters::new(phi.to_vec(), theta.to_vec(), 0.0, 1.0);
    let order = ModelOrder::new(phi.len(), 0, theta.len());
    simulate(&params, &order, n, seed).unwrap()
}

#[test]
fn recovers_ar1() {
    let s = arma(&[0.7], &[], 5000, 11);
    let m = fit(&s, ModelOrder::new(1, 0, 0)).unwrap();
    assert!((m.params.ar[0] - 0.7).abs() <= 0.03, "{:?}", m.params);
    assert!((m.params.sigma2 - 1.0).abs() <= 0.06);
}

#[test]
fn likelihood_peaks_near_truth() {
    let s = arma(&[0.7], &[], 5000, 12);
    let order = ModelOrder::new(1, 0, 0);
    let ll = |phi: f64| {
        let p = ArmaParameters::new(vec![phi], vec![], 0.0, 1.0);
        log_likelihood(&p, &order, &s).unwrap().loglik
    };
    assert!(ll(0.7) > ll(0.5));
    assert!(ll(0.7) > ll(0.9));
}

#[test]
fn fit_is_scale_equivariant() {
    let s = arma(&[0.6], &[0.3], 400, 13);
    let order = ModelOrder::new(1, 0, 1);
    let base = fit(&s, order).unwrap();
    for a in [0.01, 7.5, 1000.0] {
        let scaled = fit(&s.map(|v| a * v).unwrap(), order).unwrap();
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-12);
        assert!((scaled.params.ar[0] - base.params.ar[0]).abs() <= 1e-6);
        assert!((scaled.params.ma[0] - base.params.ma[0]).abs() <= 1e-6);
        assert!(rel(scaled.params.sigma2, a * a * base.params.sigma2) <= 1e-6);
        assert!(rel(scaled.params.constant, a * base.params.constant) <= 1e-6 || base.params.constant.abs() < 1e-9);
    }
}

#[test]
fn selection_ranking_is_scale_invariant() {
    let s = arma(&[0.5], &[], 300, 14);
    let grid = SelectionGrid::new(2, 0, 2);
    let names = |series: &TimeSeries| -> Vec<String> {
        auto_select(series, &grid, Criterion::Aic)
            .unwrap()
            .ranking
            .iter()
            .map(|r| r.order.to_string())
            .collect()
    };
    assert_eq!(names(&s), names(&s.map(|v| 250.0 * v).unwrap()));
}

#[test]
fn optimum_never_worse_than_css_start() {
    for seed in 0..5 {
        let s = arma(&[0.8], &[-0.4], 300, 100 + seed);
        let m = fit(&s, ModelOrder::new(1, 0, 1)).unwrap();
        assert!(m.loglik >= m.fit_report.css_loglik - 1e-9, "seed {seed}");
    }
}

#[test]
fn nested_orders_do_not_lose_likelihood() {
    let s = arma(&[0.5, 0.2], &[0.3], 500, 15);
    let ll = |p, q| fit(&s, ModelOrder::new(p, 0, q)).unwrap().loglik;
    let chain = [ll(0, 0), ll(1, 0), ll(1, 1), ll(2, 1)];
    for w in chain.windows(2) {
        assert!(w[1] >= w[0] - 1e-4, "{chain:?}");
    }
}

#[test]
fn singleton_grid_returns_that_fit() {
    let s = arma(&[0.4], &[], 200, 16);
    let grid = SelectionGrid::new(1, 0, 0).with_min_d(0);
    let mut only = grid;
    only.include_constant = Some(false);
    let orders = only.orders();
    assert_eq!(orders.len(), 1);
    let sel = auto_select(&s, &only, Criterion::Bic).unwrap();
    let direct = fit(&s, orders[0]).unwrap();
    assert_eq!(sel.best.order, direct.order);
    assert!((sel.best.loglik - direct.loglik).abs() < 1e-9);
}

#[test]
fn white_noise_selects_white_noise_by_bic() {
    let runs = 60;
    let grid = SelectionGrid::new(2, 0, 2);
    let hits = (0..runs)
        .filter(|&seed| {
            let s = arma(&[], &[], 200, 500 + seed);
            let sel = auto_select(&s, &grid, Criterion::Bic).unwrap();
            (sel.best.order.p, sel.best.order.q) == (0, 0)
        })
        .count();
    assert!(hits as f64 >= 0.9 * runs as f64, "{hits}/{runs}");
}

#[test]
fn constant_series_is_degenerate() {
    let s = TimeSeries::new(0, vec![0.4; 50]).unwrap();
    assert!(matches!(
        fit(&s, ModelOrder::new(1, 0, 0)),
        Err(tsarma_core::Error::DegenerateInput(_))
    ));
}
