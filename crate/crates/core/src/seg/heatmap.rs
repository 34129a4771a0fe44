//! 2D heatmaps projected from per-point scores.

use crate::error::{Error, Result};
use crate::geometry::{CameraIntrinsics, ColoredPointCloud};
use crate::seg::components::BinaryImage;

/// A 2D score map plus the mask of pixels that received at least one
/// projected point (or lie in a smoothed neighborhood of one).
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap2D {
    width: usize,
    height: usize,
    values: Vec<f64>,
    valid: Vec<bool>,
}

impl Heatmap2D {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width * height],
            valid: vec![false; width * height],
        }
    }

    pub(crate) fn from_parts(width: usize, height: usize, values: Vec<f64>, valid: Vec<bool>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        debug_assert_eq!(valid.len(), width * height);
        Self {
            width,
            height,
            values,
            valid,
        }
    }

    /// A heatmap from row-major values with every pixel valid.
    pub fn from_values(values: Vec<f64>, width: usize, height: usize) -> Self {
        assert_eq!(values.len(), width * height);
        let valid = vec![true; values.len()];
        Self {
            width,
            height,
            values,
            valid,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn value(&self, u: usize, v: usize) -> f64 {
        self.values[v * self.width + u]
    }

    pub fn is_valid(&self, u: usize, v: usize) -> bool {
        self.valid[v * self.width + u]
    }

    /// Foreground = valid and strictly above the threshold.
    pub fn binarize(&self, threshold: f64) -> BinaryImage {
        let mut image = BinaryImage::new(self.width, self.height);
        for i in 0..self.values.len() {
            if self.valid[i] && self.values[i] > threshold {
                image.set_index(i, true);
            }
        }
        image
    }
}

/// Projects per-point scores into the image plane.
///
/// Each point lands on its nearest pixel; when several points share a
/// pixel the maximum score wins. Points projecting outside the image are
/// dropped. Errors when any point has `z <= 0` or the score count does
/// not match the cloud.
pub fn project_heatmap(
    cloud: &ColoredPointCloud,
    scores: &[f64],
    cam: &CameraIntrinsics,
) -> Result<Heatmap2D> {
    if scores.len() != cloud.len() {
        return Err(Error::InvalidInput(format!(
            "score count {} does not match point count {}",
            scores.len(),
            cloud.len()
        )));
    }
    cam.validate()?;
    let mut map = Heatmap2D::new(cam.width as usize, cam.height as usize);
    for (point, &score) in cloud.positions().iter().zip(scores) {
        let Some((u, v)) = cam.project_rounded(point)? else {
            continue;
        };
        let index = v as usize * map.width + u as usize;
        if !map.valid[index] || score > map.values[index] {
            map.values[index] = score;
        }
        map.valid[index] = true;
    }
    Ok(map)
}

/// Indices of the cloud points whose rounded projection lands on a true
/// mask pixel.
pub fn lift_mask(
    cloud: &ColoredPointCloud,
    cam: &CameraIntrinsics,
    mask: &BinaryImage,
) -> Result<Vec<usize>> {
    let mut indices = Vec::new();
    for (i, point) in cloud.positions().iter().enumerate() {
        let Some((u, v)) = cam.project_rounded(point)? else {
            continue;
        };
        if mask.get(u as usize, v as usize) {
            indices.push(i);
        }
    }
    Ok(indices)
}
