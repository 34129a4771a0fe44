//! Heatmap-to-segment refinement: project, smooth, threshold, label, lift.

mod components;
mod heatmap;
mod otsu;
mod smooth;

pub use components::{connected_components, BinaryImage, Component};
pub use heatmap::{lift_mask, project_heatmap, Heatmap2D};
pub use otsu::otsu_threshold;
pub use smooth::gaussian_smooth;

use crate::error::Result;
use crate::geometry::{CameraIntrinsics, ColoredPointCloud};

/// A refined scene segment: point indices plus the number of retained
/// connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentResult {
    pub point_indices: Vec<usize>,
    pub component_count: usize,
}

/// Runs the full refinement chain: project the per-point scores into the
/// image, smooth, binarize with Otsu's threshold, keep connected
/// components of at least `min_size` pixels, and lift the surviving mask
/// back onto the cloud.
pub fn refine_segmentation(
    cloud: &ColoredPointCloud,
    scores: &[f64],
    cam: &CameraIntrinsics,
    sigma: f64,
    min_size: usize,
) -> Result<SegmentResult> {
    let heatmap = project_heatmap(cloud, scores, cam)?;
    let smoothed = gaussian_smooth(&heatmap, sigma)?;
    let threshold = otsu_threshold(&smoothed)?;
    let binary = smoothed.binarize(threshold);
    let components = connected_components(&binary, min_size);
    let mut mask = BinaryImage::new(binary.width(), binary.height());
    for component in &components {
        for &pixel in &component.pixels {
            mask.set_index(pixel, true);
        }
    }
    let point_indices = lift_mask(cloud, cam, &mask)?;
    Ok(SegmentResult {
        point_indices,
        component_count: components.len(),
    })
}
