//! Text views of core results.

use std::fmt::Write;

use tsarma_core::diagnostics::{Comparison, DiagnosticsReport};
use tsarma_core::{AdfResult, CorrelationSequence, FittedModel, ForecastResult, MomentSummary, Selection, TimeSeries};

use crate::analysis::{model_label, Bundle};
use crate::text::{opt6, sig6, Table};

pub fn series_summary(series: &TimeSeries, moments: &MomentSummary) -> String {
    let mut t = Table::new(["statistic", "value"]);
    t.row(["first year".to_owned(), series.start().to_string()]);
    t.row(["last year".to_owned(), series.end().to_string()]);
    t.row(["n".to_owned(), series.len().to_string()]);
    t.row(["mean".to_owned(), sig6(moments.mean)]);
    t.row(["variance".to_owned(), sig6(moments.variance)]);
    t.row(["skewness".to_owned(), opt6(moments.skewness)]);
    t.row(["kurtosis".to_owned(), opt6(moments.kurtosis)]);
    t.render()
}

pub fn correlation(seq: &CorrelationSequence, title: &str) -> String {
    let mut out = format!("{title} (band ±{})\n", sig6(seq.threshold));
    let mut t = Table::new(["lag", "value", ""]);
    for (h, v) in seq.lags() {
        let mark = if h > 0 && v.abs() > seq.threshold { "*" } else { "" };
        t.row([h.to_string(), sig6(v), mark.to_owned()]);
    }
    out.push_str(&t.render());
    out
}

pub fn adf(r: &AdfResult) -> String {
    let mut t = Table::new(["ADF", "value"]);
    t.row(["regression".to_owned(), r.regression.to_string()]);
    t.row(["statistic".to_owned(), sig6(r.statistic)]);
    t.row(["p-value".to_owned(), sig6(r.p_value)]);
    t.row(["lags used".to_owned(), r.used_lags.to_string()]);
    t.row(["observations".to_owned(), r.n_obs.to_string()]);
    t.row(["critical 1%".to_owned(), sig6(r.critical_values.one)]);
    t.row(["critical 5%".to_owned(), sig6(r.critical_values.five)]);
    t.row(["critical 10%".to_owned(), sig6(r.critical_values.ten)]);
    let verdict = if r.reject_unit_root {
        "reject unit root (stationary)"
    } else {
        "cannot reject unit root (non-stationary)"
    };
    t.row(["verdict".to_owned(), verdict.to_owned()]);
    t.render()
}

fn coefficient_list(prefix: &str, values: &[f64]) -> String {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{prefix}{}={}", i + 1, sig6(*v)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn fits(models: &[&FittedModel]) -> String {
    let mut t = Table::new([
        "model",
        "ar",
        "ma",
        "constant",
        "sigma2",
        "loglik",
        "aic",
        "bic",
        "converged",
    ]);
    for m in models {
        t.row([
            model_label(&m.order),
            coefficient_list("phi", &m.params.ar),
            coefficient_list("theta", &m.params.ma),
            if m.order.include_constant {
                sig6(m.params.constant)
            } else {
                "-".to_owned()
            },
            sig6(m.params.sigma2),
            sig6(m.loglik),
            sig6(m.aic),
            sig6(m.bic),
            m.converged.to_string(),
        ]);
    }
    t.render()
}

pub fn selection(s: &Selection) -> String {
    let mut out = format!("selected {} by {:?}\n", model_label(&s.best.order), s.criterion);
    let mut t = Table::new(["order", "loglik", "aic", "bic", "min |root|", "eligible"]);
    for row in &s.ranking {
        let root = row.min_ar_root_modulus.min(row.min_ma_root_modulus);
        t.row([
            row.order.to_string(),
            sig6(row.loglik),
            sig6(row.aic),
            sig6(row.bic),
            if root.is_finite() { sig6(root) } else { "-".to_owned() },
            if row.near_unit_root {
                "no (near unit root)"
            } else {
                "yes"
            }
            .to_owned(),
        ]);
    }
    out.push_str(&t.render());
    for skipped in &s.skipped {
        let _ = writeln!(out, "skipped {}: {}", skipped.order, skipped.reason);
    }
    out
}

pub fn diagnostics(label: &str, r: &DiagnosticsReport) -> String {
    let mut t = Table::new([format!("{label} residuals"), "value".to_owned()]);
    t.row(["max |residual|".to_owned(), sig6(r.max_abs_residual)]);
    t.row(["skewness".to_owned(), opt6(r.moments.skewness)]);
    t.row(["kurtosis".to_owned(), opt6(r.moments.kurtosis)]);
    t.row([
        format!("Ljung-Box Q({})", r.ljung_box.lags),
        sig6(r.ljung_box.statistic),
    ]);
    t.row([format!("  p-value (df {})", r.ljung_box.df), opt6(r.ljung_box.p_value)]);
    t.row(["Jarque-Bera".to_owned(), sig6(r.jarque_bera.statistic)]);
    t.row(["  p-value".to_owned(), sig6(r.jarque_bera.p_value)]);
    t.row(["KDE bandwidth".to_owned(), sig6(r.kde_curve.bandwidth)]);
    t.render()
}

pub fn comparison(c: &Comparison) -> String {
    let mut t = Table::new(["model", "max |res|", "skew", "|kurt-3|", "LB p", "aic", "bic"]);
    for row in &c.rows {
        t.row([
            row.label.clone(),
            sig6(row.max_abs_residual),
            opt6(row.skewness),
            opt6(row.kurtosis_distance),
            opt6(row.ljung_box_p),
            sig6(row.aic),
            sig6(row.bic),
        ]);
    }
    let names = |idx: &[usize]| {
        idx.iter()
            .map(|&i| c.rows[i].label.as_str())
            .collect::<Vec<_>>()
            .join(" < ")
    };
    let mut out = t.render();
    let _ = writeln!(out, "ranking by {:?}: {}", c.criterion, names(&c.by_criterion));
    let _ = writeln!(out, "ranking by max |residual|: {}", names(&c.by_max_residual));
    out
}

pub fn forecast(label: &str, f: &ForecastResult) -> String {
    let level = format!("{}%", sig6(100.0 * (1.0 - f.alpha)));
    let mut t = Table::new([
        "year".to_owned(),
        format!("{label} forecast"),
        "variance".to_owned(),
        format!("{level} lower"),
        format!("{level} upper"),
    ]);
    for (h, year) in f.times().enumerate() {
        t.row([
            year.to_string(),
            sig6(f.point[h]),
            sig6(f.variance[h]),
            sig6(f.lower[h]),
            sig6(f.upper[h]),
        ]);
    }
    t.render()
}

/// Full pipeline report.
pub fn bundle(b: &Bundle) -> String {
    let mut out = String::new();
    let section = |out: &mut String, title: &str, body: String| {
        let _ = writeln!(out, "== {title} ==\n{body}");
    };
    let moments = b.series.moments().expect("series validated at ingestion");
    section(&mut out, "series", series_summary(&b.series, &moments));
    for c in &b.correlations {
        section(
            &mut out,
            &format!("ACF, d={}", c.differences),
            correlation(&c.acf, "ACF"),
        );
        section(
            &mut out,
            &format!("PACF, d={}", c.differences),
            correlation(&c.pacf, "PACF"),
        );
    }
    section(&mut out, "unit-root test", adf(&b.adf));
    if let Some(s) = &b.selection {
        section(&mut out, "order selection", selection(s));
    }
    let models: Vec<&FittedModel> = b.models.iter().map(|m| &m.model).collect();
    section(&mut out, "fits", fits(&models));
    for m in &b.models {
        section(
            &mut out,
            &format!("{} diagnostics", m.label),
            diagnostics(&m.label, &m.diagnostics),
        );
    }
    section(&mut out, "comparison", comparison(&b.comparison));
    for m in &b.models {
        section(
            &mut out,
            &format!("{} forecast", m.label),
            forecast(&m.label, &m.forecast),
        );
    }
    out
}
