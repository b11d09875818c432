//! Univariate ARMA/ARIMA modelling for annual anomaly series.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational:
//! containers and transforms ([`series`]), sample and theoretical
//! correlation sequences ([`correlation`]), the augmented Dickey–Fuller
//! test ([`stationarity`]), exact Gaussian likelihood and simulation
//! ([`arma`]), maximum-likelihood estimation and order selection
//! ([`estimation`]), residual diagnostics ([`diagnostics`]), forecasting
//! ([`forecast`]) and the land/sea uncertainty model ([`uncertainty`]).
//!
//! File formats, plotting and the command-line front end live in the
//! `tsarma` companion crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

extern crate alloc;

pub mod arma;
pub mod correlation;
pub mod diagnostics;
pub mod error;
pub mod estimation;
pub mod forecast;
pub mod linalg;
pub mod optim;
pub mod series;
pub mod special;
pub mod stationarity;
pub mod uncertainty;

pub use arma::{ArmaParameters, LikelihoodEvaluation, ModelOrder, Violation};
pub use correlation::{CorrelationKind, CorrelationSequence};
pub use diagnostics::{Comparison, DiagnosticsReport};
pub use error::{Error, Result};
pub use estimation::{Criterion, FitOptions, FittedModel, Selection, SelectionGrid};
pub use forecast::ForecastResult;
pub use series::{MomentSummary, TimeSeries};
pub use stationarity::{AdfOptions, AdfResult, LagSelection, Regression};
pub use uncertainty::{BiasedAnomalyConfig, UncertaintyDecomposition};
