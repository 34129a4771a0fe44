//! Voxel-grid downsampling.

use std::collections::HashMap;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::ColoredPointCloud;

/// Downsamples to one point per occupied voxel.
///
/// The lattice is anchored at the coordinate origin (`key = floor(coord /
/// voxel)`), each output point is the centroid of its voxel's members with
/// the mean of their colors, and the output is ordered by ascending voxel
/// key. Deterministic and independent of input order.
pub fn voxel_downsample(cloud: &ColoredPointCloud, voxel: f64) -> Result<ColoredPointCloud> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(voxel > 0.0) {
        return Err(Error::InvalidInput("voxel size must be positive".into()));
    }

    struct Accum {
        position: Vector3<f64>,
        color: [f64; 3],
        count: usize,
    }

    let mut cells: HashMap<(i64, i64, i64), Accum> = HashMap::new();
    for (i, p) in cloud.positions().iter().enumerate() {
        let key = (
            (p.x / voxel).floor() as i64,
            (p.y / voxel).floor() as i64,
            (p.z / voxel).floor() as i64,
        );
        let color = cloud.color_or_zero(i);
        let cell = cells.entry(key).or_insert(Accum {
            position: Vector3::zeros(),
            color: [0.0; 3],
            count: 0,
        });
        cell.position += p;
        for (accumulated, component) in cell.color.iter_mut().zip(color) {
            *accumulated += component;
        }
        cell.count += 1;
    }

    let mut keys: Vec<_> = cells.keys().copied().collect();
    keys.sort_unstable();

    let mut positions = Vec::with_capacity(keys.len());
    let mut colors = cloud.has_colors().then(|| Vec::with_capacity(keys.len()));
    for key in keys {
        let cell = &cells[&key];
        let inv = 1.0 / cell.count as f64;
        positions.push(cell.position * inv);
        if let Some(out) = colors.as_mut() {
            out.push([
                (cell.color[0] * inv).clamp(0.0, 1.0),
                (cell.color[1] * inv).clamp(0.0, 1.0),
                (cell.color[2] * inv).clamp(0.0, 1.0),
            ]);
        }
    }
    match colors {
        Some(colors) => ColoredPointCloud::with_colors(positions, colors),
        None => ColoredPointCloud::new(positions),
    }
}
