//! Batch evaluation and report assembly.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::auc::auc;
use crate::metrics::pose_error::{acpd, add, add_s, iadd, EvaluationInstance, MetricConfig, MetricKind};

/// One (scene, object) evaluation slot. `instance` is `None` when the
/// prediction file carried no pose for it; every metric then scores +inf.
#[derive(Debug, Clone)]
pub struct BatchInstance {
    pub scene_id: String,
    pub object_id: String,
    pub instance: Option<EvaluationInstance>,
}

/// Per-instance errors for one (scene, object) pair.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceErrors {
    pub scene_id: String,
    pub object_id: String,
    pub errors: BTreeMap<MetricKind, f64>,
}

/// Batch evaluation output: per-instance errors plus AUC summaries.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvaluationReport {
    pub metrics: Vec<MetricKind>,
    pub n_axis_samples: usize,
    /// AUC upper bound per object id (0.5 x mesh diagonal).
    pub d_max: BTreeMap<String, f64>,
    pub instances: Vec<InstanceErrors>,
    pub per_object_auc: BTreeMap<String, BTreeMap<MetricKind, f64>>,
    pub overall_auc: BTreeMap<MetricKind, f64>,
}

/// Evaluates every instance for every requested metric and assembles
/// per-object and overall AUC summaries.
///
/// Instances are scored independently (in parallel) and summarized in the
/// given order, so the result does not depend on the worker count. The
/// overall AUC pools instances with each error normalized by its object's
/// `d_max`.
pub fn evaluate_batch(
    items: &[BatchInstance],
    cfg: &MetricConfig,
    per_object_d_max: &BTreeMap<String, f64>,
) -> Result<EvaluationReport> {
    cfg.validate()?;
    for item in items {
        if !per_object_d_max.contains_key(&item.object_id) {
            return Err(Error::UnknownObject(item.object_id.clone()));
        }
    }

    let rows: Vec<InstanceErrors> = items
        .par_iter()
        .map(|item| -> Result<InstanceErrors> {
            let mut errors = BTreeMap::new();
            for &metric in &cfg.metric_set {
                let value = match &item.instance {
                    None => f64::INFINITY,
                    Some(inst) => match metric {
                        MetricKind::Add => add(inst),
                        MetricKind::AddS => add_s(inst),
                        MetricKind::Acpd => acpd(inst)?,
                        MetricKind::Iadd => iadd(inst, cfg)?,
                    },
                };
                errors.insert(metric, value);
            }
            Ok(InstanceErrors {
                scene_id: item.scene_id.clone(),
                object_id: item.object_id.clone(),
                errors,
            })
        })
        .collect::<Result<_>>()?;

    let mut per_object: BTreeMap<String, Vec<&InstanceErrors>> = BTreeMap::new();
    for row in &rows {
        per_object.entry(row.object_id.clone()).or_default().push(row);
    }

    let mut per_object_auc = BTreeMap::new();
    for (object_id, object_rows) in &per_object {
        let d = per_object_d_max[object_id];
        let mut by_metric = BTreeMap::new();
        for &metric in &cfg.metric_set {
            let errors: Vec<f64> = object_rows.iter().map(|r| r.errors[&metric]).collect();
            by_metric.insert(metric, auc(&errors, d)?);
        }
        per_object_auc.insert(object_id.clone(), by_metric);
    }

    let mut overall_auc = BTreeMap::new();
    if !rows.is_empty() {
        for &metric in &cfg.metric_set {
            let normalized: Vec<f64> = rows
                .iter()
                .map(|r| r.errors[&metric] / per_object_d_max[&r.object_id])
                .collect();
            overall_auc.insert(metric, auc(&normalized, 1.0)?);
        }
    }

    Ok(EvaluationReport {
        metrics: cfg.metric_set.clone(),
        n_axis_samples: cfg.n_axis_samples,
        d_max: per_object_d_max.clone(),
        instances: rows,
        per_object_auc,
        overall_auc,
    })
}
