//! Fundamental types and point-cloud/mesh operations.

mod cloud;
mod intrinsics;
pub(crate) mod mesh;
mod sampling;
mod transform;
mod voxel;

pub use cloud::{apply_transform, ColoredPointCloud};
pub use intrinsics::CameraIntrinsics;
pub use mesh::{mesh_diagonal, TriangleMesh};
pub use sampling::{random_rotation, random_rotation_with, sample_mesh_surface, RotationMode};
pub use transform::{
    nearest_rotation, RigidTransform, MAX_LOAD_CORRECTION, ROTATION_TOLERANCE,
};
pub use voxel::voxel_downsample;
