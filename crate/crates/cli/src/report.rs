//! Machine-readable evaluation reports, one JSON object per line and per
//! (seed, trees, depth, order) grid cell.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use anyforest::{Error, Result};

pub const REPORT_FORMAT_VERSION: &str = "anyforest-report-1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub format: String,
    pub dataset: String,
    pub seed: u64,
    pub trees: usize,
    pub max_depth: usize,
    pub order: String,
    /// True when the generator declined to run (lattice cap, binary-only);
    /// curve and metrics are absent in that case.
    pub refused: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refusal_reason: Option<String>,
    pub generation_seconds: f64,
    /// Test accuracy at every abort point, length K + 1.
    pub curve: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nma: Option<f64>,
    pub nma_formula: String,
}

pub fn write_reports(mut out: impl Write, reports: &[EvalReport]) -> Result<()> {
    for report in reports {
        serde_json::to_writer(&mut out, report)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_reports(input: impl BufRead) -> Result<Vec<EvalReport>> {
    let mut reports = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        reports.push(serde_json::from_str(&line).map_err(Error::Json)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_lines_round_trip() {
        let reports = vec![
            EvalReport {
                format: REPORT_FORMAT_VERSION.into(),
                dataset: "blobs".into(),
                seed: 3,
                trees: 4,
                max_depth: 2,
                order: "bsquirrel".into(),
                refused: false,
                refusal_reason: None,
                generation_seconds: 0.002,
                curve: vec![0.5, 0.75, 1.0],
                mean_accuracy: Some(0.75),
                final_accuracy: Some(1.0),
                nma: Some(0.75),
                nma_formula: anyforest::NMA_FORMULA_VERSION.into(),
            },
            EvalReport {
                format: REPORT_FORMAT_VERSION.into(),
                dataset: "blobs".into(),
                seed: 3,
                trees: 9,
                max_depth: 9,
                order: "optimal".into(),
                refused: true,
                refusal_reason: Some("lattice too large".into()),
                generation_seconds: 0.0,
                curve: vec![],
                mean_accuracy: None,
                final_accuracy: None,
                nma: None,
                nma_formula: anyforest::NMA_FORMULA_VERSION.into(),
            },
        ];
        let mut buffer = Vec::new();
        write_reports(&mut buffer, &reports).unwrap();
        let parsed = read_reports(buffer.as_slice()).unwrap();
        assert_eq!(parsed, reports);
    }
}
