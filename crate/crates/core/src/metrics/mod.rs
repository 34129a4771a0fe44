//! Pose-error metrics for objects with any class of pose ambiguity.

mod auc;
mod batch;
mod pose_error;
mod symmetry;

pub use auc::auc;
pub use batch::{evaluate_batch, BatchInstance, EvaluationReport, InstanceErrors};
pub use pose_error::{acpd, add, add_s, iadd, EvaluationInstance, MetricConfig, MetricKind};
pub use symmetry::{
    expand_equivalent_poses, SymmetryAnnotation, SymmetryAxis, MAX_EXPANDED_POSES,
};
