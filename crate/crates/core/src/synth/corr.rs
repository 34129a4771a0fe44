//! Synthetic scored correspondences standing in for a neural matcher.

use nalgebra::Vector3;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::fit::CorrespondenceSet;
use crate::geometry::{ColoredPointCloud, RigidTransform};

/// How confidences are assigned to generated pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfidenceModel {
    /// Inliers score 1.0, outliers 0.0.
    Oracle,
    /// Inliers draw from [1-overlap, 1], outliers from [0, overlap].
    Noisy { overlap: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrSpec {
    pub n_pairs: usize,
    pub inlier_ratio: f64,
    /// Per-axis Gaussian noise on inlier scene points (meters).
    pub noise_sigma: f64,
    pub confidence_model: ConfidenceModel,
    pub seed: u64,
}

/// Generates `n_pairs` scored correspondences for an object under a known
/// pose: `ceil(inlier_ratio * n)` true pairs drawn from the visible
/// points, the rest outliers scattered in the visible region's bounding
/// box inflated by 10%. Pair order is shuffled. Deterministic per seed.
pub fn synth_correspondences(
    object_cloud: &ColoredPointCloud,
    gt_pose: &RigidTransform,
    visible_indices: &[usize],
    spec: &CorrSpec,
) -> Result<CorrespondenceSet> {
    if spec.n_pairs < 3 {
        return Err(Error::InvalidInput("n_pairs must be at least 3".into()));
    }
    if !(0.0..=1.0).contains(&spec.inlier_ratio) {
        return Err(Error::InvalidInput("inlier_ratio must be in [0, 1]".into()));
    }
    if spec.noise_sigma < 0.0 {
        return Err(Error::InvalidInput("noise_sigma must be >= 0".into()));
    }
    if let ConfidenceModel::Noisy { overlap } = spec.confidence_model {
        if !(0.0..=1.0).contains(&overlap) {
            return Err(Error::InvalidInput("overlap must be in [0, 1]".into()));
        }
    }
    if visible_indices.is_empty() {
        return Err(Error::InvalidInput("visible_indices must be non-empty".into()));
    }
    if visible_indices
        .iter()
        .any(|&i| i >= object_cloud.len())
    {
        return Err(Error::InvalidInput("visible index out of range".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::new(0.0, spec.noise_sigma.max(f64::MIN_POSITIVE)).unwrap();

    // Outliers scatter inside the inflated bounding box of the visible
    // region in the scene frame.
    let visible_scene: Vec<Vector3<f64>> = visible_indices
        .iter()
        .map(|&i| gt_pose.apply_point(&object_cloud.positions()[i]))
        .collect();
    let mut lo = visible_scene[0];
    let mut hi = visible_scene[0];
    for p in &visible_scene[1..] {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let margin = (hi - lo) * 0.05 + Vector3::repeat(1e-6);
    let (lo, hi) = (lo - margin, hi + margin);

    let n_inliers = (spec.inlier_ratio * spec.n_pairs as f64).ceil() as usize;
    let n_inliers = n_inliers.min(spec.n_pairs);
    let mut object = Vec::with_capacity(spec.n_pairs);
    let mut scene = Vec::with_capacity(spec.n_pairs);
    let mut confidence = Vec::with_capacity(spec.n_pairs);
    for pair in 0..spec.n_pairs {
        let is_inlier = pair < n_inliers;
        let object_index = visible_indices[rng.random_range(0..visible_indices.len())];
        let object_point = object_cloud.positions()[object_index];
        if is_inlier {
            let mut s = gt_pose.apply_point(&object_point);
            if spec.noise_sigma > 0.0 {
                s += Vector3::new(
                    normal.sample(&mut rng),
                    normal.sample(&mut rng),
                    normal.sample(&mut rng),
                );
            }
            scene.push(s);
        } else {
            scene.push(Vector3::new(
                rng.random_range(lo.x..hi.x),
                rng.random_range(lo.y..hi.y),
                rng.random_range(lo.z..hi.z),
            ));
        }
        object.push(object_point);
        confidence.push(match spec.confidence_model {
            ConfidenceModel::Oracle => {
                if is_inlier {
                    1.0
                } else {
                    0.0
                }
            }
            ConfidenceModel::Noisy { overlap } => {
                if is_inlier {
                    rng.random_range((1.0 - overlap).min(1.0)..=1.0)
                } else {
                    rng.random_range(0.0..=overlap.max(0.0))
                }
            }
        });
    }

    let mut order: Vec<usize> = (0..spec.n_pairs).collect();
    order.shuffle(&mut rng);
    let object: Vec<_> = order.iter().map(|&i| object[i]).collect();
    let scene: Vec<_> = order.iter().map(|&i| scene[i]).collect();
    let confidence: Vec<_> = order.iter().map(|&i| confidence[i]).collect();
    CorrespondenceSet::new(object, scene, confidence)
}
