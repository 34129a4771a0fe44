//! Exact area under the accuracy-vs-threshold curve.

use crate::error::{Error, Result};

/// Area under the accuracy-vs-threshold step curve for thresholds in
/// `[0, d_max]`, normalized by `d_max`.
///
/// The curve is integrated analytically: each error `e` contributes
/// `max(0, d_max - e) / (n * d_max)`. Missing detections are encoded as
/// `+inf` and contribute zero.
pub fn auc(errors: &[f64], d_max: f64) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::InvalidInput("error list must be non-empty".into()));
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(d_max > 0.0) {
        return Err(Error::InvalidInput("d_max must be positive".into()));
    }
    if errors.iter().any(|e| e.is_nan() || *e < 0.0) {
        return Err(Error::InvalidInput(
            "errors must be non-negative and not NaN".into(),
        ));
    }
    let sum: f64 = errors
        .iter()
        .map(|&e| if e < d_max { d_max - e } else { 0.0 })
        .sum();
    Ok(sum / (errors.len() as f64 * d_max))
}
