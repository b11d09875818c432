use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{fit_with, FitOptions, FittedModel};
use crate::arma::ModelOrder;
use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Aic,
    Bic,
}

/// Inclusive order bounds for [`auto_select`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionGrid {
    pub max_p: usize,
    pub min_d: usize,
    pub max_d: usize,
    pub max_q: usize,
    /// `None` applies the default intercept rule of [`ModelOrder::new`].
    pub include_constant: Option<bool>,
    /// Candidates with an AR or MA root modulus below this are fitted and
    /// reported but not eligible for selection.
    pub root_margin: f64,
}

impl SelectionGrid {
    pub fn new(max_p: usize, max_d: usize, max_q: usize) -> Self {
        Self {
            max_p,
            min_d: 0,
            max_d,
            max_q,
            include_constant: None,
            root_margin: 1.01,
        }
    }

    pub fn with_min_d(mut self, min_d: usize) -> Self {
        self.min_d = min_d;
        self
    }

    /// Candidate orders in enumeration order (d, then p, then q).
    /// Degenerate orders (no parameters at all) are left out.
    pub fn orders(&self) -> Vec<ModelOrder> {
        let mut out = Vec::new();
        for d in self.min_d..=self.max_d {
            for p in 0..=self.max_p {
                for q in 0..=self.max_q {
                    let mut order = ModelOrder::new(p, d, q);
                    if let Some(c) = self.include_constant {
                        order = order.with_constant(c);
                    }
                    if order.validate().is_ok() {
                        out.push(order);
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRow {
    pub order: ModelOrder,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_used: usize,
    pub min_ar_root_modulus: f64,
    pub min_ma_root_modulus: f64,
    /// True when a root is within the grid's margin of the unit circle.
    pub near_unit_root: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCandidate {
    pub order: ModelOrder,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub criterion: Criterion,
    pub best: FittedModel,
    /// Eligible candidates first, ranked by criterion (ties: smaller p+q,
    /// then smaller q); near-unit-root candidates follow in the same order.
    pub ranking: Vec<CandidateRow>,
    pub skipped: Vec<SkippedCandidate>,
}

fn score(row: &CandidateRow, criterion: Criterion) -> f64 {
    match criterion {
        Criterion::Aic => row.aic,
        Criterion::Bic => row.bic,
    }
}

fn rank_order(a: &CandidateRow, b: &CandidateRow, criterion: Criterion) -> Ordering {
    a.near_unit_root
        .cmp(&b.near_unit_root)
        .then(score(a, criterion).total_cmp(&score(b, criterion)))
        .then((a.order.p + a.order.q).cmp(&(b.order.p + b.order.q)))
        .then(a.order.q.cmp(&b.order.q))
        .then(a.order.d.cmp(&b.order.d))
}

/// Fits every order in the grid and picks the best by `criterion`.
///
/// All candidates are fitted on a common sample: the series is trimmed so
/// that every differenced series covers the same time span
/// (`n − max_d` observations), which keeps the criteria comparable
/// across `d`. Non-convergent fits are recorded in `skipped`.
pub fn auto_select(series: &TimeSeries, grid: &SelectionGrid, criterion: Criterion) -> Result<Selection> {
    auto_select_with(series, grid, criterion, &FitOptions::default())
}

pub fn auto_select_with(
    series: &TimeSeries,
    grid: &SelectionGrid,
    criterion: Criterion,
    options: &FitOptions,
) -> Result<Selection> {
    if grid.min_d > grid.max_d {
        return Err(Error::Range {
            what: "differencing range",
            detail: format!("min_d {} > max_d {}", grid.min_d, grid.max_d),
        });
    }
    let orders = grid.orders();
    if orders.is_empty() {
        return Err(Error::Range {
            what: "selection grid",
            detail: "no admissible candidate orders".into(),
        });
    }

    let mut fitted: Vec<(CandidateRow, FittedModel)> = Vec::new();
    let mut skipped = Vec::new();
    for order in &orders {
        let sample = match series.skip(grid.max_d - order.d) {
            Ok(s) => s,
            Err(e) => {
                skipped.push(SkippedCandidate {
                    order: *order,
                    reason: format!("{e}"),
                });
                continue;
            }
        };
        match fit_with(&sample, *order, options) {
            Ok(model) => {
                let ar_mod = model.params.ar_min_root_modulus();
                let ma_mod = model.params.ma_min_root_modulus();
                let row = CandidateRow {
                    order: *order,
                    loglik: model.loglik,
                    aic: model.aic,
                    bic: model.bic,
                    n_used: model.n_used,
                    min_ar_root_modulus: ar_mod,
                    min_ma_root_modulus: ma_mod,
                    near_unit_root: ar_mod < grid.root_margin || ma_mod < grid.root_margin,
                };
                fitted.push((row, model));
            }
            Err(e) => skipped.push(SkippedCandidate {
                order: *order,
                reason: format!("{e}"),
            }),
        }
    }

    fitted.sort_by(|a, b| rank_order(&a.0, &b.0, criterion));
    let best = match fitted.first() {
        Some((row, model)) if !row.near_unit_root => model.clone(),
        _ => {
            return Err(Error::NoCandidate {
                attempted: orders.len(),
            })
        }
    };
    Ok(Selection {
        criterion,
        best,
        ranking: fitted.into_iter().map(|(row, _)| row).collect(),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arma::{simulate, ArmaParameters};
    use alloc::vec;

    #[test]
    fn grid_enumeration() {
        let grid = SelectionGrid::new(1, 1, 1);
        let orders = grid.orders();
        // (0,1,0) without constant is degenerate
        assert_eq!(orders.len(), 7);
        assert!(orders.iter().all(|o| o.include_constant == (o.d == 0)));
        assert_eq!(SelectionGrid::new(1, 2, 1).with_min_d(2).orders().len(), 3);
    }

    #[test]
    fn singleton_grid_returns_that_fit() {
        let truth = ArmaParameters::new(vec![0.5], vec![], 0.0, 1.0);
        let s = simulate(&truth, &ModelOrder::new(1, 0, 0), 300, 5).unwrap();
        let grid = SelectionGrid {
            max_p: 1,
            min_d: 0,
            max_d: 0,
            max_q: 0,
            include_constant: Some(false),
            root_margin: 1.01,
        };
        let sel = auto_select(&s, &grid, Criterion::Aic).unwrap();
        assert_eq!(sel.ranking.len(), 1);
        let direct = super::super::fit(&s, ModelOrder::new(1, 0, 0).with_constant(false)).unwrap();
        assert_eq!(sel.best, direct);
    }

    #[test]
    fn tie_break_prefers_parsimony() {
        let row = |p, q, aic| CandidateRow {
            order: ModelOrder::new(p, 0, q),
            loglik: 0.0,
            aic,
            bic: aic,
            n_used: 10,
            min_ar_root_modulus: 2.0,
            min_ma_root_modulus: 2.0,
            near_unit_root: false,
        };
        let a = row(1, 1, 5.0);
        let b = row(2, 0, 5.0);
        let c = row(0, 1, 5.0);
        let mut rows = [a.clone(), b.clone(), c.clone()];
        rows.sort_by(|x, y| rank_order(x, y, Criterion::Aic));
        assert_eq!(rows[0].order, c.order);
        assert_eq!(rows[1].order, b.order);
        assert_eq!(rows[2].order, a.order);
    }

    #[test]
    fn empty_range_rejected() {
        let s = TimeSeries::new(0, vec![0.0, 1.0, 0.5, 0.2, 0.3, 0.9, 0.1, 0.4, 0.6, 0.7]).unwrap();
        let grid = SelectionGrid::new(1, 0, 1).with_min_d(1);
        assert!(matches!(
            auto_select(&s, &grid, Criterion::Aic),
            Err(Error::Range { .. })
        ));
    }
}
