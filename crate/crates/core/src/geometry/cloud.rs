//! Colored point clouds.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::RigidTransform;

/// A point cloud of N positions with optional per-point RGB colors in [0,1].
///
/// Colors are either absent or carried for every point. An absent color
/// block reads as all-zero through [`ColoredPointCloud::color_or_zero`].
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredPointCloud {
    positions: Vec<Vector3<f64>>,
    colors: Option<Vec<[f64; 3]>>,
}

impl ColoredPointCloud {
    pub fn new(positions: Vec<Vector3<f64>>) -> Result<Self> {
        validate_positions(&positions)?;
        Ok(Self {
            positions,
            colors: None,
        })
    }

    pub fn with_colors(positions: Vec<Vector3<f64>>, colors: Vec<[f64; 3]>) -> Result<Self> {
        validate_positions(&positions)?;
        if colors.len() != positions.len() {
            return Err(Error::InvalidInput(format!(
                "color count {} does not match point count {}",
                colors.len(),
                positions.len()
            )));
        }
        for c in &colors {
            if c.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::InvalidInput(
                    "color component outside [0, 1]".into(),
                ));
            }
        }
        Ok(Self {
            positions,
            colors: Some(colors),
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vector3<f64>] {
        &self.positions
    }

    pub fn colors(&self) -> Option<&[[f64; 3]]> {
        self.colors.as_deref()
    }

    pub fn has_colors(&self) -> bool {
        self.colors.is_some()
    }

    pub fn color_or_zero(&self, index: usize) -> [f64; 3] {
        match &self.colors {
            Some(c) => c[index],
            None => [0.0; 3],
        }
    }

    /// Axis-aligned bounding box, `None` for an empty cloud.
    pub fn bounding_box(&self) -> Option<(Vector3<f64>, Vector3<f64>)> {
        let first = *self.positions.first()?;
        let mut lo = first;
        let mut hi = first;
        for p in &self.positions[1..] {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        Some((lo, hi))
    }

    /// Sub-cloud of the given point indices, colors carried along.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            positions: indices.iter().map(|&i| self.positions[i]).collect(),
            colors: self
                .colors
                .as_ref()
                .map(|c| indices.iter().map(|&i| c[i]).collect()),
        }
    }
}

fn validate_positions(positions: &[Vector3<f64>]) -> Result<()> {
    if positions.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
        return Err(Error::InvalidInput("non-finite point position".into()));
    }
    Ok(())
}

/// Maps every position `v ↦ R v + t`; colors are unchanged.
pub fn apply_transform(pose: &RigidTransform, cloud: &ColoredPointCloud) -> ColoredPointCloud {
    ColoredPointCloud {
        positions: cloud
            .positions
            .iter()
            .map(|p| pose.apply_point(p))
            .collect(),
        colors: cloud.colors.clone(),
    }
}
