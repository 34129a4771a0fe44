//! Scored 3D correspondences.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Scored object-point to scene-point pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceSet {
    object_points: Vec<Vector3<f64>>,
    scene_points: Vec<Vector3<f64>>,
    confidences: Vec<f64>,
}

impl CorrespondenceSet {
    pub fn new(
        object_points: Vec<Vector3<f64>>,
        scene_points: Vec<Vector3<f64>>,
        confidences: Vec<f64>,
    ) -> Result<Self> {
        if object_points.len() != scene_points.len()
            || object_points.len() != confidences.len()
        {
            return Err(Error::InvalidInput(format!(
                "mismatched lengths: {} object, {} scene, {} confidence",
                object_points.len(),
                scene_points.len(),
                confidences.len()
            )));
        }
        if confidences.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::InvalidInput("confidence outside [0, 1]".into()));
        }
        Ok(Self {
            object_points,
            scene_points,
            confidences,
        })
    }

    pub fn len(&self) -> usize {
        self.object_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.object_points.is_empty()
    }

    pub fn object_points(&self) -> &[Vector3<f64>] {
        &self.object_points
    }

    pub fn scene_points(&self) -> &[Vector3<f64>] {
        &self.scene_points
    }

    pub fn confidences(&self) -> &[f64] {
        &self.confidences
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            object_points: indices.iter().map(|&i| self.object_points[i]).collect(),
            scene_points: indices.iter().map(|&i| self.scene_points[i]).collect(),
            confidences: indices.iter().map(|&i| self.confidences[i]).collect(),
        }
    }
}

/// Keeps pairs with confidence strictly greater than `threshold`,
/// preserving order.
pub fn filter_by_confidence(corr: &CorrespondenceSet, threshold: f64) -> CorrespondenceSet {
    let keep: Vec<usize> = corr
        .confidences
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > threshold)
        .map(|(i, _)| i)
        .collect();
    corr.select(&keep)
}
