//! Property tests for the geometric invariants of the core types.

use nalgebra::{Unit, Vector3};
use proptest::prelude::*;

use posekit::{
    apply_transform, filter_by_confidence, voxel_downsample, ColoredPointCloud,
    CorrespondenceSet, RigidTransform,
};

fn pose_strategy() -> impl Strategy<Value = RigidTransform> {
    (
        -1.0f64..1.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
        -std::f64::consts::PI..std::f64::consts::PI,
        -0.5f64..0.5,
        -0.5f64..0.5,
        -0.5f64..0.5,
    )
        .prop_filter_map("axis too short", |(x, y, z, angle, tx, ty, tz)| {
            let axis = Vector3::new(x, y, z);
            if axis.norm() < 1e-3 {
                return None;
            }
            let rotation = RigidTransform::from_axis_angle(&Unit::new_normalize(axis), angle);
            Some(
                RigidTransform::new(*rotation.rotation(), Vector3::new(tx, ty, tz)).unwrap(),
            )
        })
}

fn point_strategy() -> impl Strategy<Value = Vector3<f64>> {
    (-0.2f64..0.2, -0.2f64..0.2, -0.2f64..0.2).prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn compose_is_associative(
        a in pose_strategy(),
        b in pose_strategy(),
        c in pose_strategy(),
    ) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-9);
    }

    #[test]
    fn transform_composition_matches_sequential_application(
        a in pose_strategy(),
        b in pose_strategy(),
        points in proptest::collection::vec(point_strategy(), 1..20),
    ) {
        let cloud = ColoredPointCloud::new(points).unwrap();
        let composed = apply_transform(&a.compose(&b), &cloud);
        let sequential = apply_transform(&a, &apply_transform(&b, &cloud));
        for (p, q) in composed.positions().iter().zip(sequential.positions()) {
            prop_assert!((p - q).norm() <= 1e-9);
        }
    }
}

proptest! {
    #[test]
    fn small_voxel_downsampling_is_identity_up_to_order(
        points in proptest::collection::vec(point_strategy(), 1..40),
    ) {
        // A voxel under half the minimum pairwise distance guarantees one
        // point per cell (the cell diagonal stays below the distance).
        let mut min_dist = f64::INFINITY;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                min_dist = min_dist.min((points[i] - points[j]).norm());
            }
        }
        prop_assume!(min_dist > 1e-6);
        let voxel = (min_dist / 2.0).min(0.05);
        let cloud = ColoredPointCloud::new(points.clone()).unwrap();
        let out = voxel_downsample(&cloud, voxel).unwrap();
        prop_assert_eq!(out.len(), cloud.len());
        let mut original: Vec<_> = points.iter().map(|p| (p.x, p.y, p.z)).collect();
        let mut resampled: Vec<_> = out.positions().iter().map(|p| (p.x, p.y, p.z)).collect();
        original.sort_by(|a, b| a.partial_cmp(b).unwrap());
        resampled.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in original.iter().zip(&resampled) {
            prop_assert!((a.0 - b.0).abs() <= 1e-12);
            prop_assert!((a.1 - b.1).abs() <= 1e-12);
            prop_assert!((a.2 - b.2).abs() <= 1e-12);
        }
    }

    #[test]
    fn confidence_filter_keeps_order_and_respects_threshold(
        confidences in proptest::collection::vec(0.0f64..=1.0, 0..50),
        threshold in 0.0f64..=1.0,
    ) {
        let points: Vec<Vector3<f64>> = (0..confidences.len())
            .map(|i| Vector3::new(i as f64, 0.0, 0.0))
            .collect();
        let corr = CorrespondenceSet::new(points, vec![Vector3::zeros(); confidences.len()], confidences.clone()).unwrap();
        let kept = filter_by_confidence(&corr, threshold);
        prop_assert!(kept.confidences().iter().all(|&c| c > threshold));
        let expected: Vec<f64> = confidences.iter().copied().filter(|&c| c > threshold).collect();
        prop_assert_eq!(kept.confidences().to_vec(), expected);
        // Order preservation: the x coordinates (original indices) stay
        // strictly increasing.
        for w in kept.object_points().windows(2) {
            prop_assert!(w[0].x < w[1].x);
        }
    }
}
