//! Command-line front end for `tsarma-core`: CSV ingestion, the analysis
//! pipeline, and JSON, text and SVG output.

pub mod analysis;
pub mod cli;
pub mod fetch;
pub mod ingest;
pub mod output;
pub mod render;
pub mod report;
pub mod svg;
pub mod text;

pub use analysis::{run_analysis, AnalysisConfig, Bundle, ModelSpec};
pub use ingest::{ingest, ColumnMapping, IngestError};

/// The vendored GISTEMP annual snapshot (1880-2022).
pub const GISTEMP_CSV: &str = include_str!("../data/gistemp_annual.csv");
