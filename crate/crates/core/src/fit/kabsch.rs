//! Weighted least-squares rigid alignment.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::fit::correspondences::CorrespondenceSet;
use crate::geometry::RigidTransform;

/// The rigid transform minimizing `sum_i w_i * |R o_i + t - s_i|^2`.
///
/// Solved in closed form via SVD of the weighted cross-covariance; a
/// reflection optimum is corrected by flipping the smallest singular
/// direction, so the result is always a proper rotation.
pub fn least_squares_fit(
    corr: &CorrespondenceSet,
    weights: Option<&[f64]>,
) -> Result<RigidTransform> {
    let k = corr.len();
    if k < 3 {
        return Err(Error::InsufficientCorrespondences(k));
    }
    if let Some(w) = weights {
        if w.len() != k {
            return Err(Error::InvalidInput(format!(
                "weight count {} does not match correspondence count {k}",
                w.len()
            )));
        }
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput(
                "weights must be finite and non-negative".into(),
            ));
        }
    }
    let weight = |i: usize| weights.map_or(1.0, |w| w[i]);
    let total: f64 = (0..k).map(weight).sum();
    if total <= 0.0 {
        return Err(Error::DegenerateConfiguration);
    }

    let mut centroid_obj = Vector3::zeros();
    let mut centroid_scene = Vector3::zeros();
    for i in 0..k {
        centroid_obj += corr.object_points()[i] * weight(i);
        centroid_scene += corr.scene_points()[i] * weight(i);
    }
    centroid_obj /= total;
    centroid_scene /= total;

    // Weighted covariance of the object points (rank check) and the
    // object-to-scene cross-covariance (rotation estimate).
    let mut object_cov = Matrix3::zeros();
    let mut cross = Matrix3::zeros();
    for i in 0..k {
        let o = corr.object_points()[i] - centroid_obj;
        let s = corr.scene_points()[i] - centroid_scene;
        let w = weight(i);
        object_cov += w * o * o.transpose();
        cross += w * s * o.transpose();
    }

    let eigen = object_cov.symmetric_eigen();
    let mut eigenvalues: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Collinear object points leave the rotation about the line free.
    if eigenvalues[1] <= eigenvalues[0] * 1e-12 || eigenvalues[0] <= 0.0 {
        return Err(Error::DegenerateConfiguration);
    }

    let svd = cross.svd(true, true);
    let u = svd.u.ok_or(Error::DegenerateConfiguration)?;
    let v_t = svd.v_t.ok_or(Error::DegenerateConfiguration)?;
    let mut d = Matrix3::identity();
    if (u * v_t).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    let rotation = u * d * v_t;
    let translation = centroid_scene - rotation * centroid_obj;
    RigidTransform::new(rotation, translation)
}
