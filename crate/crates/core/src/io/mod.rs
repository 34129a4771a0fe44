//! Loaders and writers for every on-disk format the toolkit exchanges.
//!
//! Conventions shared by all formats: lengths in meters, rotations as
//! row-major 3x3 matrices, colors in [0, 1]. Loaders reject malformed
//! input rather than truncating it.

mod binary_file;
mod cloud_file;
mod corr_file;
mod mesh_file;
mod misc_file;
mod ply;
mod records;
mod report_file;
mod symmetry_file;

pub use binary_file::{load_labels, load_scores, save_labels, save_scores};
pub use cloud_file::{load_cloud, save_cloud};
pub use corr_file::{load_correspondences, save_correspondences};
pub use mesh_file::{load_mesh, save_mesh};
pub use misc_file::{load_indices, load_intrinsics, save_indices, save_intrinsics};
pub use records::{
    load_ground_truth, load_predictions, save_ground_truth, save_predictions, GroundTruthRecord,
    PredictionRecord,
};
pub use report_file::{read_report_summary, write_report, ReportConfig, ReportSummary};
pub use symmetry_file::{load_symmetry, save_symmetry};

/// Unique per-test scratch directory.
#[cfg(test)]
pub(crate) fn test_dir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "posekit-test-{}-{tag}",
        std::process::id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
