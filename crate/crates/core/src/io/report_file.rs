//! Evaluation report output: a JSON summary and a per-instance CSV.

use std::collections::BTreeMap;
use std::fs;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{EvaluationReport, MetricKind};

/// The JSON summary layout: toolkit version, config echo, then the AUC
/// tables. Field and map ordering is fixed, so identical reports are
/// byte-identical on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub version: String,
    pub config: ReportConfig,
    pub overall_auc: BTreeMap<MetricKind, f64>,
    pub per_object_auc: BTreeMap<String, BTreeMap<MetricKind, f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub metrics: Vec<MetricKind>,
    pub n_axis_samples: usize,
    pub d_max: BTreeMap<String, f64>,
}

/// Writes the JSON summary and the CSV of per-instance errors (one row
/// per scene, object and metric).
pub fn write_report(
    report: &EvaluationReport,
    json_path: impl AsRef<Path>,
    csv_path: impl AsRef<Path>,
) -> Result<()> {
    let summary = ReportSummary {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: ReportConfig {
            metrics: report.metrics.clone(),
            n_axis_samples: report.n_axis_samples,
            d_max: report.d_max.clone(),
        },
        overall_auc: report.overall_auc.clone(),
        per_object_auc: report.per_object_auc.clone(),
    };
    let json_name = json_path.as_ref().display().to_string();
    let text = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    fs::write(json_path.as_ref(), text + "\n").map_err(|e| Error::io(&json_name, e))?;

    let csv_name = csv_path.as_ref().display().to_string();
    let file = File::create(csv_path.as_ref()).map_err(|e| Error::io(&csv_name, e))?;
    let mut writer = BufWriter::new(file);
    writeln!(writer, "scene_id,object_id,metric,error_meters")
        .map_err(|e| Error::io(&csv_name, e))?;
    for row in &report.instances {
        for metric in &report.metrics {
            let id_ok = |s: &str| !s.contains(',') && !s.contains('\n') && !s.contains('"');
            if !id_ok(&row.scene_id) || !id_ok(&row.object_id) {
                return Err(Error::InvalidInput(format!(
                    "id '{}/{}' contains CSV delimiter characters",
                    row.scene_id, row.object_id
                )));
            }
            writeln!(
                writer,
                "{},{},{},{}",
                row.scene_id,
                row.object_id,
                metric.name(),
                row.errors[metric]
            )
            .map_err(|e| Error::io(&csv_name, e))?;
        }
    }
    Ok(())
}

/// Reads back the JSON summary written by [`write_report`].
pub fn read_report_summary(path: impl AsRef<Path>) -> Result<ReportSummary> {
    let name = path.as_ref().display().to_string();
    let text = fs::read_to_string(path.as_ref()).map_err(|e| Error::io(&name, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(&name, e.line(), e.to_string()))
}
