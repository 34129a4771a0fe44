//! Rigid transforms on SE(3).

use nalgebra::{Matrix3, Unit, Vector3};

use crate::error::{Error, Result};

/// Maximum deviation from orthonormality (and from unit determinant) a
/// rotation may carry and still be accepted by [`RigidTransform::new`].
pub const ROTATION_TOLERANCE: f64 = 1e-9;

/// Maximum per-element correction the loader-side projection to the nearest
/// rotation is allowed to apply before the input is rejected.
pub const MAX_LOAD_CORRECTION: f64 = 1e-4;

/// A rigid transform: rotation followed by translation, `v ↦ R v + t`.
///
/// The rotation is stored as a 3×3 matrix and is guaranteed orthonormal
/// with determinant +1 within [`ROTATION_TOLERANCE`] by every public
/// constructor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl RigidTransform {
    /// Builds a transform after validating the rotation.
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        let gram = rotation.transpose() * rotation;
        let defect = (gram - Matrix3::identity()).abs().max();
        if defect > ROTATION_TOLERANCE {
            return Err(Error::InvalidRotation(format!(
                "orthonormality defect {defect:.3e} exceeds {ROTATION_TOLERANCE:.0e}"
            )));
        }
        let det = rotation.determinant();
        if (det - 1.0).abs() > ROTATION_TOLERANCE {
            return Err(Error::InvalidRotation(format!(
                "determinant {det} is not +1"
            )));
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    /// Builds a transform from a row-major 3×3 rotation and a translation,
    /// projecting the rotation onto the nearest element of SO(3).
    ///
    /// Inputs that need more than [`MAX_LOAD_CORRECTION`] of per-element
    /// correction are rejected. This is the entry point for every loader.
    pub fn from_rows_projected(rotation: &[f64; 9], translation: &[f64; 3]) -> Result<Self> {
        let raw = Matrix3::from_row_slice(rotation);
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidRotation("non-finite rotation entry".into()));
        }
        let projected = nearest_rotation(&raw)?;
        let correction = (projected - raw).abs().max();
        if correction > MAX_LOAD_CORRECTION {
            return Err(Error::InvalidRotation(format!(
                "correction {correction:.3e} to nearest rotation exceeds {MAX_LOAD_CORRECTION:.0e}"
            )));
        }
        let t = Vector3::new(translation[0], translation[1], translation[2]);
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite translation".into()));
        }
        Self::new(projected, t)
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// Rotation by `angle` about a unit `axis` through the origin.
    pub fn from_axis_angle(axis: &Unit<Vector3<f64>>, angle: f64) -> Self {
        Self {
            rotation: nalgebra::Rotation3::from_axis_angle(axis, angle).into_inner(),
            translation: Vector3::zeros(),
        }
    }

    /// Rotation by `angle` about the line through `point` with unit
    /// direction `axis`. Points on the line are fixed, so an off-origin
    /// axis induces a translation component.
    pub fn rotation_about_line(
        point: &Vector3<f64>,
        axis: &Unit<Vector3<f64>>,
        angle: f64,
    ) -> Self {
        let rotation = nalgebra::Rotation3::from_axis_angle(axis, angle).into_inner();
        let translation = point - rotation * point;
        Self {
            rotation,
            translation,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    /// Row-major rotation entries followed by the translation.
    pub fn to_row_major(&self) -> ([f64; 9], [f64; 3]) {
        let r = &self.rotation;
        (
            [
                r[(0, 0)],
                r[(0, 1)],
                r[(0, 2)],
                r[(1, 0)],
                r[(1, 1)],
                r[(1, 2)],
                r[(2, 0)],
                r[(2, 1)],
                r[(2, 2)],
            ],
            [self.translation.x, self.translation.y, self.translation.z],
        )
    }

    pub fn apply_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Self {
        let rotation = self.rotation.transpose();
        Self {
            rotation,
            translation: -(rotation * self.translation),
        }
    }

    /// Largest absolute difference over the 12 defining entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let dr = (self.rotation - other.rotation).abs().max();
        let dt = (self.translation - other.translation).abs().max();
        dr.max(dt)
    }
}

/// Projects an arbitrary matrix onto the nearest proper rotation
/// (polar decomposition via SVD, reflection corrected by a sign flip
/// of the smallest singular direction).
pub fn nearest_rotation(m: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let svd = m.svd(true, true);
    let u = svd
        .u
        .ok_or_else(|| Error::InvalidRotation("SVD failed".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::InvalidRotation("SVD failed".into()))?;
    let mut r = u * v_t;
    if r.determinant() < 0.0 {
        // Flip the column of U paired with the smallest singular value.
        let mut u = u;
        u.column_mut(2).neg_mut();
        r = u * v_t;
    }
    Ok(r)
}
