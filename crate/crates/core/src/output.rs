//! Text renderings of curves and ensemble summaries.
//!
//! CSV curves have exactly the columns `step,adopted,fraction`. Gnuplot
//! output is whitespace-separated with a `#` header line.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::simulation::{EnsembleSummary, RunOutcome};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Gnuplot,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "gnuplot" => Ok(Format::Gnuplot),
            other => Err(Error::InvalidParameter(format!("unknown format `{other}` (csv, json, gnuplot)"))),
        }
    }
}

/// `value` rounded to 6 decimal places, printed without trailing zeros.
fn fraction6(adopted: u32, node_count: usize) -> f64 {
    (adopted as f64 / node_count as f64 * 1e6).round() / 1e6
}

pub fn write_curve<W: Write>(outcome: &RunOutcome, format: Format, mut out: W) -> Result<()> {
    let curve = &outcome.curve;
    match format {
        Format::Csv => {
            writeln!(out, "step,adopted,fraction")?;
            for (t, &c) in curve.counts.iter().enumerate() {
                writeln!(out, "{t},{c},{}", fraction6(c, curve.node_count))?;
            }
        }
        Format::Gnuplot => {
            writeln!(out, "# step adopted")?;
            for (t, &c) in curve.counts.iter().enumerate() {
                writeln!(out, "{t} {c}")?;
            }
        }
        Format::Json => {
            let doc = json!({
                "config_digest": curve.config_digest,
                "node_count": curve.node_count,
                "status": outcome.status,
                "counts": curve.counts,
            });
            serde_json::to_writer(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn write_summary<W: Write>(summary: &EnsembleSummary, format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv | Format::Gnuplot => {
            let (sep, header) = match format {
                Format::Csv => (",", ""),
                _ => (" ", "# "),
            };
            let cols = ["step", "mean", "min", "max", "q10", "q25", "median", "q75", "q90"];
            writeln!(out, "{header}{}", cols.join(sep))?;
            for s in &summary.steps {
                let row = [
                    s.step.to_string(),
                    s.mean.to_string(),
                    s.min.to_string(),
                    s.max.to_string(),
                    s.q10.to_string(),
                    s.q25.to_string(),
                    s.median.to_string(),
                    s.q75.to_string(),
                    s.q90.to_string(),
                ];
                writeln!(out, "{}", row.join(sep))?;
            }
        }
        Format::Json => {
            serde_json::to_writer(&mut out, summary)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
