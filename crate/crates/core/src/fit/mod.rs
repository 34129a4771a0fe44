//! 6D pose from scored 3D correspondences.

mod consensus;
mod correspondences;
mod kabsch;

pub use consensus::{prosac_fit, ransac_fit, FitConfig, FitResult};
pub use correspondences::{filter_by_confidence, CorrespondenceSet};
pub use kabsch::least_squares_fit;
