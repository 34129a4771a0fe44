//! Symmetry-aware 6D object pose evaluation and estimation toolkit.
//!
//! The crate covers the full pose pipeline downstream of a correspondence
//! or segmentation producer:
//!
//! - **geometry**: rigid transforms, colored point clouds, triangle meshes,
//!   surface sampling, voxel downsampling.
//! - **metrics**: ADD, ADD-S, ACPD and IADD pose errors for objects with
//!   any class of pose ambiguity (none, finite, continuous axis, sphere),
//!   plus exact AUC scoring and batch evaluation.
//! - **fit**: confidence filtering, weighted least-squares rigid alignment,
//!   and RANSAC/PROSAC hypothesize-and-verify with local optimization.
//! - **seg**: refinement of a per-point likelihood heatmap into a clean
//!   scene segment (project, smooth, Otsu, connected components, lift).
//! - **synth**: a z-buffer renderer and correspondence generator for
//!   desk-scale synthetic validation data.
//! - **io**: loaders and writers for every on-disk format the toolkit
//!   exchanges (meshes, clouds, poses, symmetries, scores, reports).
//!
//! The `posekit` binary exposes the pipeline as `eval`, `fit`,
//! `refine-seg` and `synth` subcommands.

pub mod error;
pub mod fit;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod seg;
pub mod spatial;
pub mod synth;

pub use error::{Error, Result};
pub use fit::{
    filter_by_confidence, least_squares_fit, prosac_fit, ransac_fit, CorrespondenceSet, FitConfig,
    FitResult,
};
pub use geometry::{
    apply_transform, mesh_diagonal, random_rotation, sample_mesh_surface, voxel_downsample,
    CameraIntrinsics, ColoredPointCloud, RigidTransform, RotationMode, TriangleMesh,
};
pub use metrics::{
    acpd, add, add_s, auc, evaluate_batch, expand_equivalent_poses, iadd, BatchInstance,
    EvaluationInstance, EvaluationReport, MetricConfig, MetricKind, SymmetryAnnotation,
    SymmetryAxis,
};
pub use seg::{
    connected_components, gaussian_smooth, lift_mask, otsu_threshold, project_heatmap,
    refine_segmentation, BinaryImage, Heatmap2D, SegmentResult,
};
pub use synth::{render_scene, synth_correspondences, ConfidenceModel, CorrSpec, Placement,
    RenderedScene, SceneSpec};
