//! CSV ingestion of annual anomaly tables.
//!
//! Accepts a plain `Year,Anomaly` table as well as the GISTEMP download
//! layout, which puts a free-text title and a dashed rule above the
//! header. Every line before the header row is skipped, as are lines
//! starting with `#`. Row numbers in errors are 1-based physical lines.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use tsarma_core::TimeSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    pub year: String,
    /// `None` takes the first column after the year column.
    pub value: Option<String>,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        Self {
            year: "Year".to_owned(),
            value: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no header row containing a '{0}' column")]
    NoHeader(String),
    #[error("column '{name}' not found; header has {available:?}")]
    MissingColumn { name: String, available: Vec<String> },
    #[error("line {line}: malformed CSV: {detail}")]
    Csv { line: u64, detail: String },
    #[error("line {line}: missing value for year {year}")]
    MissingValue { line: u64, year: i64 },
    #[error("line {line}: cannot parse {column} '{text}'")]
    BadNumber { line: u64, column: String, text: String },
    #[error("line {line}: duplicate year {year}")]
    DuplicateYear { line: u64, year: i64 },
    #[error("line {line}: year {year} follows {previous}; years must increase")]
    NonMonotone { line: u64, year: i64, previous: i64 },
    #[error("line {line}: year {year} follows {previous}; years must be consecutive")]
    Gap { line: u64, year: i64, previous: i64 },
    #[error("no data rows")]
    Empty,
    #[error("invalid series: {0}")]
    Series(#[from] tsarma_core::Error),
}

pub fn ingest(path: &Path, columns: &ColumnMapping) -> Result<TimeSeries, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_csv(&text, columns)
}

fn split_header(line: &str) -> Vec<String> {
    line.split(',').map(|f| f.trim().trim_matches('"').to_owned()).collect()
}

pub fn parse_csv(text: &str, columns: &ColumnMapping) -> Result<TimeSeries, IngestError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let header_index = text
        .lines()
        .position(|l| {
            !l.trim_start().starts_with('#') && split_header(l).iter().any(|f| f.eq_ignore_ascii_case(&columns.year))
        })
        .ok_or_else(|| IngestError::NoHeader(columns.year.clone()))?;
    let body: String = text
        .lines()
        .skip(header_index)
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    let line_offset = header_index as u64;

    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| IngestError::Csv {
            line: line_offset + 1,
            detail: e.to_string(),
        })?
        .iter()
        .map(str::to_owned)
        .collect();
    let find = |name: &str| header.iter().position(|h| h.eq_ignore_ascii_case(name));
    let year_col = find(&columns.year).ok_or_else(|| IngestError::MissingColumn {
        name: columns.year.clone(),
        available: header.clone(),
    })?;
    let value_col = match &columns.value {
        Some(name) => find(name).ok_or_else(|| IngestError::MissingColumn {
            name: name.clone(),
            available: header.clone(),
        })?,
        None => (0..header.len())
            .find(|&i| i != year_col)
            .ok_or_else(|| IngestError::MissingColumn {
                name: "<value>".to_owned(),
                available: header.clone(),
            })?,
    };
    let value_name = header[value_col].clone();

    let mut years: Vec<i64> = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IngestError::Csv {
            line: line_offset + e.position().map_or(0, |p| p.line()),
            detail: e.to_string(),
        })?;
        let line = line_offset + record.position().map_or(0, |p| p.line());
        let year_text = record.get(year_col).unwrap_or("");
        if record.iter().all(str::is_empty) {
            continue;
        }
        let year: i64 = year_text.parse().map_err(|_| IngestError::BadNumber {
            line,
            column: columns.year.clone(),
            text: year_text.to_owned(),
        })?;
        let raw = record.get(value_col).unwrap_or("");
        if is_missing(raw) {
            return Err(IngestError::MissingValue { line, year });
        }
        let value: f64 = raw
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| IngestError::BadNumber {
                line,
                column: value_name.clone(),
                text: raw.to_owned(),
            })?;
        if let Some(&previous) = years.last() {
            if year == previous {
                return Err(IngestError::DuplicateYear { line, year });
            }
            if year < previous {
                return Err(IngestError::NonMonotone { line, year, previous });
            }
            if year != previous + 1 {
                return Err(IngestError::Gap { line, year, previous });
            }
        }
        years.push(year);
        values.push(value);
    }
    if years.is_empty() {
        return Err(IngestError::Empty);
    }
    Ok(TimeSeries::new(years[0], values)?)
}

fn is_missing(raw: &str) -> bool {
    raw.is_empty() || raw.chars().all(|c| c == '*') || raw.eq_ignore_ascii_case("na") || raw.eq_ignore_ascii_case("nan")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<TimeSeries, IngestError> {
        parse_csv(text, &ColumnMapping::default())
    }

    #[test]
    fn minimal_table() {
        let s = parse("Year,Anomaly\n1880,-0.17\n1881,-0.09").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.start(), 1880);
        assert_eq!(s.values(), &[-0.17, -0.09]);
    }

    #[test]
    fn gistemp_preamble_is_skipped() {
        let text = "Land-Ocean Temperature Index (C)\n--------------------------------\n\nYear,No_Smoothing,Lowess(5)\n1880,-0.17,-0.09\n1881,-0.09,-0.13\n";
        let s = parse(text).unwrap();
        assert_eq!(s.values(), &[-0.17, -0.09]);
    }

    #[test]
    fn comment_lines_and_named_columns() {
        let text = "# comment\nyear,smooth,raw\n# mid-file note\n2000,0.1,0.4\n2001,0.2,0.5\n";
        let columns = ColumnMapping {
            year: "Year".into(),
            value: Some("raw".into()),
        };
        let s = parse_csv(text, &columns).unwrap();
        assert_eq!(s.values(), &[0.4, 0.5]);
    }

    #[test]
    fn duplicate_year_names_row() {
        let err = parse("Year,Anomaly\n1949,0.1\n1950,0.2\n1950,0.3\n").unwrap_err();
        assert!(
            matches!(err, IngestError::DuplicateYear { line: 4, year: 1950 }),
            "{err}"
        );
        assert!(err.to_string().contains("line 4"));
    }

    #[test]
    fn missing_value_names_row() {
        let err = parse("x\n\nYear,Anomaly\n1950,0.2\n1951,***\n").unwrap_err();
        assert!(
            matches!(err, IngestError::MissingValue { line: 5, year: 1951 }),
            "{err}"
        );
        let err = parse("Year,Anomaly\n1950,0.2\n1951,\n").unwrap_err();
        assert!(matches!(err, IngestError::MissingValue { line: 3, .. }), "{err}");
    }

    #[test]
    fn ordering_errors() {
        assert!(matches!(
            parse("Year,A\n1950,0.2\n1949,0.1\n").unwrap_err(),
            IngestError::NonMonotone { line: 3, .. }
        ));
        assert!(matches!(
            parse("Year,A\n1950,0.2\n1952,0.1\n").unwrap_err(),
            IngestError::Gap { line: 3, .. }
        ));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse("a,b\n1,2\n").unwrap_err(), IngestError::NoHeader(_)));
        assert!(matches!(parse("Year,A\n").unwrap_err(), IngestError::Empty));
        assert!(matches!(
            parse("Year,A\n1950,abc\n").unwrap_err(),
            IngestError::BadNumber { line: 2, .. }
        ));
        let columns = ColumnMapping {
            year: "Year".into(),
            value: Some("Temp".into()),
        };
        assert!(matches!(
            parse_csv("Year,A\n1950,1\n", &columns).unwrap_err(),
            IngestError::MissingColumn { .. }
        ));
    }
}
