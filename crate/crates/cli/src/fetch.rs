//! Explicit download of a data file. Nothing else in the tool touches the
//! network.

use std::path::Path;

use anyhow::Result;

pub const GISTEMP_URL: &str =
    "https://data.giss.nasa.gov/gistemp/graphs/graph_data/Global_Mean_Estimates_based_on_Land_and_Ocean_Data/graph.csv";

#[cfg(feature = "fetch")]
pub fn fetch(url: &str, output: &Path) -> Result<()> {
    use anyhow::Context;

    let body = ureq::get(url)
        .call()
        .with_context(|| format!("downloading {url}"))?
        .into_string()
        .context("reading response body")?;
    // refuse to save something that would not ingest
    crate::ingest::parse_csv(&body, &crate::ingest::ColumnMapping::default())
        .context("downloaded file is not a usable annual table")?;
    std::fs::write(output, body).with_context(|| format!("writing {}", output.display()))?;
    println!("wrote {}", output.display());
    Ok(())
}

#[cfg(not(feature = "fetch"))]
pub fn fetch(_url: &str, _output: &Path) -> Result<()> {
    anyhow::bail!("built without the `fetch` feature")
}
