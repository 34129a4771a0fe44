//! Seeded surface sampling and random rotations.

use nalgebra::{Unit, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{ColoredPointCloud, RigidTransform, TriangleMesh};

/// Draws `n` points area-weighted over the mesh surface.
///
/// Deterministic for a fixed seed. Colors are barycentrically interpolated
/// when the mesh carries vertex colors.
pub fn sample_mesh_surface(mesh: &TriangleMesh, n: usize, seed: u64) -> Result<ColoredPointCloud> {
    if n == 0 {
        return Err(Error::InvalidInput("sample count must be at least 1".into()));
    }
    let mut cumulative = Vec::with_capacity(mesh.faces().len());
    let mut total = 0.0;
    for f in 0..mesh.faces().len() {
        total += mesh.face_area(f);
        cumulative.push(total);
    }
    if total <= 0.0 {
        return Err(Error::DegenerateMesh);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(n);
    let mut colors = mesh.vertex_colors().map(|_| Vec::with_capacity(n));
    for _ in 0..n {
        let target = rng.random::<f64>() * total;
        let face = cumulative.partition_point(|&c| c <= target).min(
            mesh.faces().len() - 1,
        );
        let [ia, ib, ic] = mesh.faces()[face];
        let (a, b, c) = (
            mesh.vertices()[ia],
            mesh.vertices()[ib],
            mesh.vertices()[ic],
        );
        // Uniform barycentric draw via the square-root trick.
        let r1: f64 = rng.random();
        let r2: f64 = rng.random();
        let s = r1.sqrt();
        let (wa, wb, wc) = (1.0 - s, s * (1.0 - r2), s * r2);
        positions.push(a * wa + b * wb + c * wc);
        if let (Some(out), Some(vc)) = (colors.as_mut(), mesh.vertex_colors()) {
            let mut color = [0.0; 3];
            for k in 0..3 {
                color[k] = (vc[ia][k] * wa + vc[ib][k] * wb + vc[ic][k] * wc).clamp(0.0, 1.0);
            }
            out.push(color);
        }
    }
    match colors {
        Some(colors) => ColoredPointCloud::with_colors(positions, colors),
        None => ColoredPointCloud::new(positions),
    }
}

/// Axis regime for [`random_rotation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationMode {
    /// Rotation about +z with angle uniform in [-pi, pi).
    ZAxis,
    /// Uniform axis on the sphere, angle uniform in [-pi, pi).
    AnyAxis,
}

/// A seeded random rotation with zero translation.
pub fn random_rotation(mode: RotationMode, seed: u64) -> RigidTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_rotation_with(mode, &mut rng)
}

/// Same as [`random_rotation`] but drawing from a caller-owned stream.
pub fn random_rotation_with(mode: RotationMode, rng: &mut impl Rng) -> RigidTransform {
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let axis = match mode {
        RotationMode::ZAxis => Vector3::z_axis(),
        RotationMode::AnyAxis => {
            // Uniform direction: z uniform in [-1, 1], azimuth uniform.
            let z: f64 = rng.random_range(-1.0..1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let r = (1.0 - z * z).max(0.0).sqrt();
            Unit::new_unchecked(Vector3::new(r * phi.cos(), r * phi.sin(), z))
        }
    };
    RigidTransform::from_axis_angle(&axis, angle)
}
