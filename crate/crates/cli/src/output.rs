//! Writing report bundles and failure manifests to an output directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::analysis::{Bundle, Failure};
use crate::report::{FailureManifest, SCHEMA, SCHEMA_VERSION};
use crate::{render, svg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Svg,
}

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";
pub const FAILURE_JSON: &str = "failure.json";
pub const FIGURE_DIR: &str = "figures";

/// File-name friendly form of a model label: "ARIMA(1,2,0)" -> "arima_1_2_0".
pub fn slug(label: &str) -> String {
    let mut s: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_owned()
}

fn write(path: &Path, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    written.push(path.to_owned());
    Ok(())
}

/// Renders the requested views into `dir` and returns the files written.
pub fn write_bundle(bundle: &Bundle, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    if formats.contains(&Format::Json) {
        write(&dir.join(REPORT_JSON), &bundle.report.to_json(), &mut written)?;
    }
    if formats.contains(&Format::Text) {
        write(&dir.join(REPORT_TEXT), &render::bundle(bundle), &mut written)?;
    }
    if formats.contains(&Format::Svg) {
        let figures = dir.join(FIGURE_DIR);
        fs::create_dir_all(&figures).with_context(|| format!("creating {}", figures.display()))?;
        write(
            &figures.join("series.svg"),
            &svg::series_plot(&bundle.series, "Annual anomaly"),
            &mut written,
        )?;
        for c in &bundle.correlations {
            let d = c.differences;
            write(
                &figures.join(format!("acf_d{d}.svg")),
                &svg::correlogram(&c.acf, &format!("ACF, d = {d}")),
                &mut written,
            )?;
            write(
                &figures.join(format!("pacf_d{d}.svg")),
                &svg::correlogram(&c.pacf, &format!("PACF, d = {d}")),
                &mut written,
            )?;
        }
        for m in &bundle.models {
            let s = slug(&m.label);
            write(
                &figures.join(format!("{s}_density.svg")),
                &svg::density(&m.diagnostics, &format!("{} residual density", m.label)),
                &mut written,
            )?;
            write(
                &figures.join(format!("{s}_qq.svg")),
                &svg::qq_plot(&m.diagnostics, &format!("{} normal Q-Q", m.label)),
                &mut written,
            )?;
            write(
                &figures.join(format!("{s}_residual_acf.svg")),
                &svg::correlogram(&m.diagnostics.residual_acf, &format!("{} residual ACF", m.label)),
                &mut written,
            )?;
            write(
                &figures.join(format!("{s}_forecast.svg")),
                &svg::forecast_fan(&bundle.series, &m.forecast, 60, &format!("{} forecast", m.label)),
                &mut written,
            )?;
        }
    }
    Ok(written)
}

/// Flushes the partial report and a manifest describing the failure.
pub fn write_failure(failure: &Failure, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    write(&dir.join(REPORT_JSON), &failure.partial.to_json(), &mut written)?;
    let mut files: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    let manifest_path = dir.join(FAILURE_JSON);
    files.push(manifest_path.display().to_string());
    let manifest = FailureManifest {
        schema: SCHEMA,
        schema_version: SCHEMA_VERSION,
        failed_stage: failure.stage.name().to_owned(),
        error: failure.message.clone(),
        completed_stages: failure.completed.iter().map(|s| s.name().to_owned()).collect(),
        written_files: files,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write(&manifest_path, &text, &mut written)?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("ARIMA(1,2,0)"), "arima_1_2_0");
        assert_eq!(slug("AR(1)"), "ar_1");
    }
}
