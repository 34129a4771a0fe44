//! Symmetry annotations and equivalent-pose expansion.

use nalgebra::{Unit, Vector3};

use crate::error::{Error, Result};
use crate::geometry::RigidTransform;

/// Hard cap on the number of expanded equivalent poses.
pub const MAX_EXPANDED_POSES: usize = 1_000_000;

/// Poses closer than this over all 12 entries are treated as duplicates.
const DEDUP_TOLERANCE: f64 = 1e-9;

/// A continuous rotational symmetry axis in the object frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryAxis {
    direction: Unit<Vector3<f64>>,
    point_on_axis: Vector3<f64>,
}

impl SymmetryAxis {
    /// Validates the direction to unit norm within 1e-9.
    pub fn new(direction: Vector3<f64>, point_on_axis: Vector3<f64>) -> Result<Self> {
        if (direction.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "axis direction norm {} is not 1",
                direction.norm()
            )));
        }
        Ok(Self {
            direction: Unit::new_unchecked(direction.normalize()),
            point_on_axis,
        })
    }

    /// Accepts a slightly denormalized direction (up to 1e-6) and
    /// renormalizes it; the loaders use this path.
    pub fn new_normalizing(direction: Vector3<f64>, point_on_axis: Vector3<f64>) -> Result<Self> {
        if (direction.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidInput(format!(
                "axis direction norm {} deviates from 1 by more than 1e-6",
                direction.norm()
            )));
        }
        Ok(Self {
            direction: Unit::new_unchecked(direction.normalize()),
            point_on_axis,
        })
    }

    pub fn direction(&self) -> &Unit<Vector3<f64>> {
        &self.direction
    }

    pub fn point_on_axis(&self) -> &Vector3<f64> {
        &self.point_on_axis
    }

    /// The rigid self-map rotating by `angle` about this axis.
    pub fn rotation(&self, angle: f64) -> RigidTransform {
        RigidTransform::rotation_about_line(&self.point_on_axis, &self.direction, angle)
    }
}

/// The pose-ambiguity class of an object: discrete self-maps, continuous
/// rotation axes, or a textureless sphere.
///
/// The sphere flag dominates: when set, discrete transforms and axes are
/// ignored. The identity is implicit and never listed in `discrete`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymmetryAnnotation {
    discrete: Vec<RigidTransform>,
    continuous_axes: Vec<SymmetryAxis>,
    is_textureless_sphere: bool,
}

impl SymmetryAnnotation {
    /// No pose ambiguity at all.
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(
        discrete: Vec<RigidTransform>,
        continuous_axes: Vec<SymmetryAxis>,
        is_textureless_sphere: bool,
    ) -> Self {
        Self {
            discrete,
            continuous_axes,
            is_textureless_sphere,
        }
    }

    /// A discrete n-fold rotational symmetry about an axis through the
    /// origin (lists the n-1 non-identity turns).
    pub fn cyclic(axis: Unit<Vector3<f64>>, order: u32) -> Self {
        let discrete = (1..order)
            .map(|k| {
                RigidTransform::from_axis_angle(
                    &axis,
                    std::f64::consts::TAU * k as f64 / order as f64,
                )
            })
            .collect();
        Self {
            discrete,
            continuous_axes: Vec::new(),
            is_textureless_sphere: false,
        }
    }

    pub fn sphere() -> Self {
        Self {
            discrete: Vec::new(),
            continuous_axes: Vec::new(),
            is_textureless_sphere: true,
        }
    }

    pub fn discrete(&self) -> &[RigidTransform] {
        &self.discrete
    }

    pub fn continuous_axes(&self) -> &[SymmetryAxis] {
        &self.continuous_axes
    }

    pub fn is_textureless_sphere(&self) -> bool {
        self.is_textureless_sphere
    }

    pub fn has_continuous(&self) -> bool {
        !self.continuous_axes.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        !self.is_textureless_sphere && self.discrete.is_empty() && self.continuous_axes.is_empty()
    }

    /// Offline validation: how far the annotation is from being a true
    /// self-map of the given object points.
    ///
    /// Returns the largest distance from any transformed point to its
    /// nearest original point, over all discrete transforms and (for
    /// continuous axes) a coarse angle probe. Zero for a sphere flag.
    pub fn self_map_deviation(&self, points: &crate::geometry::ColoredPointCloud) -> f64 {
        if self.is_textureless_sphere || points.is_empty() {
            return 0.0;
        }
        let tree = crate::spatial::KdTree3::build(points.positions());
        let deviation_of = |map: &RigidTransform| -> f64 {
            points
                .positions()
                .iter()
                .map(|p| tree.nearest(&map.apply_point(p)).expect("non-empty").1)
                .fold(0.0, f64::max)
        };
        let mut worst: f64 = 0.0;
        for map in &self.discrete {
            worst = worst.max(deviation_of(map));
        }
        for axis in &self.continuous_axes {
            for k in 1..16 {
                let angle = std::f64::consts::TAU * k as f64 / 16.0;
                worst = worst.max(deviation_of(&axis.rotation(angle)));
            }
        }
        worst
    }
}

/// Expands a ground-truth pose into the set of equivalent ground truths.
///
/// Every discrete self-map (plus the identity) is applied in the object
/// frame, and each continuous axis contributes `n` uniformly spaced angles
/// `theta_k = -pi + 2*pi*k/n`. Off-origin axes produce the induced
/// translation. The result is de-duplicated within 1e-9 and errors beyond
/// [`MAX_EXPANDED_POSES`].
pub fn expand_equivalent_poses(
    gt: &RigidTransform,
    symmetry: &SymmetryAnnotation,
    n_axis_samples: usize,
) -> Result<Vec<RigidTransform>> {
    if symmetry.is_textureless_sphere() {
        return Err(Error::NoFiniteExpansion);
    }
    if n_axis_samples < 2 && !symmetry.continuous_axes.is_empty() {
        return Err(Error::InvalidInput(
            "n_axis_samples must be at least 2".into(),
        ));
    }

    let discrete_count = 1 + symmetry.discrete.len();
    let mut total = discrete_count;
    for _ in &symmetry.continuous_axes {
        total = total.saturating_mul(n_axis_samples);
        if total > MAX_EXPANDED_POSES {
            return Err(Error::ExpansionCapExceeded(MAX_EXPANDED_POSES));
        }
    }

    // Self-maps in the object frame: {identity} ∪ discrete, then the
    // Cartesian product with every axis' angle grid.
    let mut maps: Vec<RigidTransform> = Vec::with_capacity(total);
    maps.push(RigidTransform::identity());
    maps.extend(symmetry.discrete.iter().cloned());
    for axis in &symmetry.continuous_axes {
        let mut grown = Vec::with_capacity(maps.len() * n_axis_samples);
        for k in 0..n_axis_samples {
            let angle = -std::f64::consts::PI
                + std::f64::consts::TAU * k as f64 / n_axis_samples as f64;
            let turn = axis.rotation(angle);
            for m in &maps {
                grown.push(m.compose(&turn));
            }
        }
        maps = grown;
    }

    let mut poses: Vec<RigidTransform> = maps.iter().map(|m| gt.compose(m)).collect();
    dedup_poses(&mut poses);
    Ok(poses)
}

/// Removes poses equal within [`DEDUP_TOLERANCE`] over all 12 entries.
///
/// Sorts by the entry sum and compares inside the sliding window that sum
/// proximity allows, so grid-structured pose sets dedup in near-linear time.
fn dedup_poses(poses: &mut Vec<RigidTransform>) {
    if poses.len() <= 1 {
        return;
    }
    let key = |p: &RigidTransform| -> f64 {
        let (r, t) = p.to_row_major();
        r.iter().sum::<f64>() + t.iter().sum::<f64>()
    };
    let mut keyed: Vec<(f64, RigidTransform)> = poses.drain(..).map(|p| (key(&p), p)).collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let window = 12.0 * DEDUP_TOLERANCE;
    let mut kept: Vec<(f64, RigidTransform)> = Vec::with_capacity(keyed.len());
    'outer: for (k, pose) in keyed {
        for (pk, prev) in kept.iter().rev() {
            if k - pk > window {
                break;
            }
            if prev.max_abs_diff(&pose) <= DEDUP_TOLERANCE {
                continue 'outer;
            }
        }
        kept.push((k, pose));
    }
    poses.extend(kept.into_iter().map(|(_, p)| p));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_symmetry_expands_to_the_input() {
        let gt = RigidTransform::from_axis_angle(&Vector3::x_axis(), 0.3);
        let poses = expand_equivalent_poses(&gt, &SymmetryAnnotation::none(), 360).unwrap();
        assert_eq!(poses.len(), 1);
        assert_eq!(poses[0].max_abs_diff(&gt), 0.0);
    }

    #[test]
    fn continuous_axis_with_four_samples_gives_quarter_turns() {
        let sym = SymmetryAnnotation::new(
            vec![],
            vec![SymmetryAxis::new(Vector3::new(0.0, 0.0, 1.0), Vector3::zeros()).unwrap()],
            false,
        );
        let poses =
            expand_equivalent_poses(&RigidTransform::identity(), &sym, 4).unwrap();
        assert_eq!(poses.len(), 4);
        // Quarter-turn spacing: each pose rotates (1,0,0) onto one of the
        // four axis-aligned directions.
        let mut hits = [false; 4];
        for p in &poses {
            let v = p.apply_point(&Vector3::new(1.0, 0.0, 0.0));
            for (i, target) in [
                Vector3::new(1.0, 0.0, 0.0),
                Vector3::new(0.0, 1.0, 0.0),
                Vector3::new(-1.0, 0.0, 0.0),
                Vector3::new(0.0, -1.0, 0.0),
            ]
            .iter()
            .enumerate()
            {
                if (v - target).norm() < 1e-9 {
                    hits[i] = true;
                }
            }
        }
        assert!(hits.iter().all(|&h| h));
    }

    #[test]
    fn offset_axis_half_turn_translates_origin() {
        let sym = SymmetryAnnotation::new(
            vec![],
            vec![SymmetryAxis::new(
                Vector3::new(0.0, 0.0, 1.0),
                Vector3::new(1.0, 0.0, 0.0),
            )
            .unwrap()],
            false,
        );
        let poses = expand_equivalent_poses(&RigidTransform::identity(), &sym, 2).unwrap();
        let half_turn = poses
            .iter()
            .find(|p| (p.translation() - Vector3::new(2.0, 0.0, 0.0)).norm() < 1e-9)
            .expect("half-turn pose with translation (2,0,0)");
        assert!((half_turn.apply_point(&Vector3::new(1.0, 0.0, 0.0))
            - Vector3::new(1.0, 0.0, 0.0))
        .norm()
            < 1e-9);
    }

    #[test]
    fn sphere_has_no_finite_expansion() {
        let r = expand_equivalent_poses(
            &RigidTransform::identity(),
            &SymmetryAnnotation::sphere(),
            4,
        );
        assert!(matches!(r, Err(Error::NoFiniteExpansion)));
    }

    #[test]
    fn duplicate_discrete_entries_are_removed() {
        let half = RigidTransform::from_axis_angle(&Vector3::z_axis(), std::f64::consts::PI);
        let sym = SymmetryAnnotation::new(vec![half, half], vec![], false);
        let poses = expand_equivalent_poses(&RigidTransform::identity(), &sym, 2).unwrap();
        assert_eq!(poses.len(), 2);
    }

    #[test]
    fn discrete_half_turn_inside_axis_grid_dedups() {
        // A z half-turn is already on the 180-degree grid of the z axis.
        let half = RigidTransform::from_axis_angle(&Vector3::z_axis(), std::f64::consts::PI);
        let sym = SymmetryAnnotation::new(
            vec![half],
            vec![SymmetryAxis::new(Vector3::new(0.0, 0.0, 1.0), Vector3::zeros()).unwrap()],
            false,
        );
        let poses = expand_equivalent_poses(&RigidTransform::identity(), &sym, 2).unwrap();
        assert_eq!(poses.len(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let axis = SymmetryAxis::new(Vector3::new(0.0, 0.0, 1.0), Vector3::zeros()).unwrap();
        let sym = SymmetryAnnotation::new(vec![], vec![axis.clone(), axis], false);
        let r = expand_equivalent_poses(&RigidTransform::identity(), &sym, 1001);
        assert!(matches!(r, Err(Error::ExpansionCapExceeded(_))));
    }

    #[test]
    fn self_map_deviation_separates_true_and_false_annotations() {
        // A square of points in the xy plane: 4-fold symmetric about z,
        // not 3-fold.
        let cloud = crate::geometry::ColoredPointCloud::new(vec![
            Vector3::new(0.05, 0.0, 0.0),
            Vector3::new(0.0, 0.05, 0.0),
            Vector3::new(-0.05, 0.0, 0.0),
            Vector3::new(0.0, -0.05, 0.0),
        ])
        .unwrap();
        let four_fold = SymmetryAnnotation::cyclic(Vector3::z_axis(), 4);
        assert!(four_fold.self_map_deviation(&cloud) <= 1e-12);
        let three_fold = SymmetryAnnotation::cyclic(Vector3::z_axis(), 3);
        assert!(three_fold.self_map_deviation(&cloud) > 0.01);
    }
}
