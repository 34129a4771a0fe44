//! C ABI for the pose toolkit.
//!
//! Conventions: poses travel as 12 doubles (row-major 3x3 rotation
//! followed by the translation), point buffers as packed `n * 3` doubles,
//! colors as packed `n * 3` doubles in [0, 1]. Handles returned through
//! `*mut Pk...` out-parameters are owned by the caller and released with
//! the matching `pk_*_free`. Every fallible call returns a [`PkStatus`];
//! on failure [`pk_last_error_message`] holds a thread-local description
//! until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use nalgebra::Vector3;

use posekit::{
    acpd, add, add_s, auc, iadd, least_squares_fit, prosac_fit, ransac_fit, refine_segmentation,
    sample_mesh_surface, CameraIntrinsics, ColoredPointCloud, CorrespondenceSet, Error,
    EvaluationInstance, FitConfig, MetricConfig, RigidTransform, SymmetryAnnotation, SymmetryAxis,
    TriangleMesh,
};

/// Result code of a toolkit call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    IoError = 3,
    FitFailed = 4,
    Degenerate = 5,
    UnknownObject = 6,
    InternalError = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: PkStatus, message: &str) -> PkStatus {
    set_error(message);
    status
}

fn status_of(error: &Error) -> PkStatus {
    match error {
        Error::InvalidRotation(_) | Error::InvalidInput(_) => PkStatus::InvalidArgument,
        Error::Parse { .. } => PkStatus::ParseError,
        Error::Io { .. } => PkStatus::IoError,
        Error::FitFailed | Error::InsufficientCorrespondences(_) => PkStatus::FitFailed,
        Error::UnknownObject(_) => PkStatus::UnknownObject,
        _ => PkStatus::Degenerate,
    }
}

fn from_error(error: Error) -> PkStatus {
    set_error(&error.to_string());
    status_of(&error)
}

/// Runs a fallible body with panic isolation.
fn guarded(body: impl FnOnce() -> PkStatus) -> PkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(PkStatus::InternalError, "internal panic"),
    }
}

/// Message describing the most recent failure on this thread. The
/// pointer stays valid until the next failing toolkit call on the same
/// thread.
#[no_mangle]
pub extern "C" fn pk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

// ---------------------------------------------------------------------
// Opaque handles
// ---------------------------------------------------------------------

/// An immutable colored point cloud.
pub struct PkCloud(ColoredPointCloud);

/// An immutable triangle mesh.
pub struct PkMesh(TriangleMesh);

/// A mutable symmetry annotation under construction.
pub struct PkSymmetry(SymmetryAnnotation);

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> PkStatus {
    if out.is_null() {
        return fail(PkStatus::InvalidArgument, "null output pointer");
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    PkStatus::Ok
}

unsafe fn slice_arg<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], PkStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(fail(
            PkStatus::InvalidArgument,
            &format!("null {what} pointer"),
        ));
    }
    Ok(unsafe { std::slice::from_raw_parts(ptr, len) })
}

fn packed_points(values: &[f64]) -> Vec<Vector3<f64>> {
    values
        .chunks_exact(3)
        .map(|c| Vector3::new(c[0], c[1], c[2]))
        .collect()
}

unsafe fn pose_arg(pose: *const f64, what: &str) -> Result<RigidTransform, PkStatus> {
    let values = unsafe { slice_arg(pose, 12, what)? };
    let rotation: [f64; 9] = values[..9].try_into().unwrap();
    let translation: [f64; 3] = values[9..].try_into().unwrap();
    RigidTransform::from_rows_projected(&rotation, &translation).map_err(from_error)
}

fn write_pose(pose: &RigidTransform, out: *mut f64) -> PkStatus {
    if out.is_null() {
        return fail(PkStatus::InvalidArgument, "null pose output");
    }
    let (rotation, translation) = pose.to_row_major();
    let slice = unsafe { std::slice::from_raw_parts_mut(out, 12) };
    slice[..9].copy_from_slice(&rotation);
    slice[9..].copy_from_slice(&translation);
    PkStatus::Ok
}

// ---------------------------------------------------------------------
// Clouds and meshes
// ---------------------------------------------------------------------

/// Builds a cloud from `n` packed xyz points and optional packed rgb
/// colors (`rgb` may be null).
///
/// # Safety
/// `xyz` must point to `3 * n` doubles and `rgb` to `3 * n` doubles when
/// non-null.
#[no_mangle]
pub unsafe extern "C" fn pk_cloud_new(
    xyz: *const f64,
    rgb: *const f64,
    n: usize,
    out: *mut *mut PkCloud,
) -> PkStatus {
    guarded(|| {
        let positions = match unsafe { slice_arg(xyz, n * 3, "xyz") } {
            Ok(values) => packed_points(values),
            Err(status) => return status,
        };
        let cloud = if rgb.is_null() {
            ColoredPointCloud::new(positions)
        } else {
            let colors = match unsafe { slice_arg(rgb, n * 3, "rgb") } {
                Ok(values) => values.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
                Err(status) => return status,
            };
            ColoredPointCloud::with_colors(positions, colors)
        };
        match cloud {
            Ok(cloud) => unsafe { write_handle(out, PkCloud(cloud)) },
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `cloud` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pk_cloud_free(cloud: *mut PkCloud) {
    if !cloud.is_null() {
        drop(unsafe { Box::from_raw(cloud) });
    }
}

/// # Safety
/// `cloud` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_cloud_len(cloud: *const PkCloud) -> usize {
    if cloud.is_null() {
        return 0;
    }
    unsafe { &*cloud }.0.len()
}

/// Loads a mesh from an `.obj` or `.ply` file.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pk_mesh_load(path: *const c_char, out: *mut *mut PkMesh) -> PkStatus {
    guarded(|| {
        if path.is_null() {
            return fail(PkStatus::InvalidArgument, "null path");
        }
        let path = match unsafe { CStr::from_ptr(path) }.to_str() {
            Ok(path) => path,
            Err(_) => return fail(PkStatus::InvalidArgument, "path is not valid UTF-8"),
        };
        match posekit::io::load_mesh(path) {
            Ok(mesh) => unsafe { write_handle(out, PkMesh(mesh)) },
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `mesh` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pk_mesh_free(mesh: *mut PkMesh) {
    if !mesh.is_null() {
        drop(unsafe { Box::from_raw(mesh) });
    }
}

/// Bounding-box diagonal of the mesh vertices (meters).
///
/// # Safety
/// `mesh` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_mesh_diagonal(mesh: *const PkMesh) -> f64 {
    if mesh.is_null() {
        return 0.0;
    }
    posekit::mesh_diagonal(&unsafe { &*mesh }.0)
}

/// The mesh vertex set as a cloud.
///
/// # Safety
/// `mesh` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pk_mesh_vertex_cloud(
    mesh: *const PkMesh,
    out: *mut *mut PkCloud,
) -> PkStatus {
    guarded(|| {
        if mesh.is_null() {
            return fail(PkStatus::InvalidArgument, "null mesh");
        }
        unsafe { write_handle(out, PkCloud((*mesh).0.vertex_cloud())) }
    })
}

/// `n` area-weighted surface samples, deterministic per seed.
///
/// # Safety
/// `mesh` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pk_mesh_sample_surface(
    mesh: *const PkMesh,
    n: usize,
    seed: u64,
    out: *mut *mut PkCloud,
) -> PkStatus {
    guarded(|| {
        if mesh.is_null() {
            return fail(PkStatus::InvalidArgument, "null mesh");
        }
        match sample_mesh_surface(&unsafe { &*mesh }.0, n, seed) {
            Ok(cloud) => unsafe { write_handle(out, PkCloud(cloud)) },
            Err(e) => from_error(e),
        }
    })
}

// ---------------------------------------------------------------------
// Symmetry annotations
// ---------------------------------------------------------------------

/// A fresh annotation with no pose ambiguity.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pk_symmetry_new(out: *mut *mut PkSymmetry) -> PkStatus {
    guarded(|| unsafe { write_handle(out, PkSymmetry(SymmetryAnnotation::none())) })
}

/// A textureless-sphere annotation.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pk_symmetry_sphere(out: *mut *mut PkSymmetry) -> PkStatus {
    guarded(|| unsafe { write_handle(out, PkSymmetry(SymmetryAnnotation::sphere())) })
}

/// Appends a discrete self-map (12-double pose, identity excluded).
///
/// # Safety
/// `symmetry` must be a live handle, `pose` must point to 12 doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_symmetry_add_discrete(
    symmetry: *mut PkSymmetry,
    pose: *const f64,
) -> PkStatus {
    guarded(|| {
        if symmetry.is_null() {
            return fail(PkStatus::InvalidArgument, "null symmetry");
        }
        let transform = match unsafe { pose_arg(pose, "discrete pose") } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let current = unsafe { &mut *symmetry };
        let mut discrete = current.0.discrete().to_vec();
        discrete.push(transform);
        current.0 = SymmetryAnnotation::new(
            discrete,
            current.0.continuous_axes().to_vec(),
            current.0.is_textureless_sphere(),
        );
        PkStatus::Ok
    })
}

/// Appends a continuous rotation axis (unit direction, point on axis).
///
/// # Safety
/// `symmetry` must be a live handle; `direction` and `point` must point
/// to 3 doubles each.
#[no_mangle]
pub unsafe extern "C" fn pk_symmetry_add_axis(
    symmetry: *mut PkSymmetry,
    direction: *const f64,
    point: *const f64,
) -> PkStatus {
    guarded(|| {
        if symmetry.is_null() {
            return fail(PkStatus::InvalidArgument, "null symmetry");
        }
        let direction = match unsafe { slice_arg(direction, 3, "direction") } {
            Ok(v) => Vector3::new(v[0], v[1], v[2]),
            Err(status) => return status,
        };
        let point = match unsafe { slice_arg(point, 3, "point") } {
            Ok(v) => Vector3::new(v[0], v[1], v[2]),
            Err(status) => return status,
        };
        let axis = match SymmetryAxis::new_normalizing(direction, point) {
            Ok(axis) => axis,
            Err(e) => return from_error(e),
        };
        let current = unsafe { &mut *symmetry };
        let mut axes = current.0.continuous_axes().to_vec();
        axes.push(axis);
        current.0 = SymmetryAnnotation::new(
            current.0.discrete().to_vec(),
            axes,
            current.0.is_textureless_sphere(),
        );
        PkStatus::Ok
    })
}

/// # Safety
/// `symmetry` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pk_symmetry_free(symmetry: *mut PkSymmetry) {
    if !symmetry.is_null() {
        drop(unsafe { Box::from_raw(symmetry) });
    }
}

// ---------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------

unsafe fn metric_instance(
    object: *const PkCloud,
    gt_pose: *const f64,
    pred_pose: *const f64,
    symmetry: Option<*const PkSymmetry>,
) -> Result<EvaluationInstance, PkStatus> {
    if object.is_null() {
        return Err(fail(PkStatus::InvalidArgument, "null object cloud"));
    }
    let gt = unsafe { pose_arg(gt_pose, "gt pose")? };
    let pred = unsafe { pose_arg(pred_pose, "pred pose")? };
    let annotation = match symmetry {
        None => SymmetryAnnotation::none(),
        Some(ptr) if ptr.is_null() => SymmetryAnnotation::none(),
        Some(ptr) => unsafe { &*ptr }.0.clone(),
    };
    EvaluationInstance::new(unsafe { &*object }.0.clone(), gt, pred, annotation)
        .map_err(from_error)
}

fn write_value(value: f64, out: *mut f64) -> PkStatus {
    if out.is_null() {
        return fail(PkStatus::InvalidArgument, "null output");
    }
    unsafe { *out = value };
    PkStatus::Ok
}

/// Mean corresponding-point distance between the two poses.
///
/// # Safety
/// `object` must be a live handle; poses must point to 12 doubles; `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn pk_metric_add(
    object: *const PkCloud,
    gt_pose: *const f64,
    pred_pose: *const f64,
    out: *mut f64,
) -> PkStatus {
    guarded(
        || match unsafe { metric_instance(object, gt_pose, pred_pose, None) } {
            Ok(inst) => write_value(add(&inst), out),
            Err(status) => status,
        },
    )
}

/// Mean nearest-point distance between the two poses.
///
/// # Safety
/// As [`pk_metric_add`].
#[no_mangle]
pub unsafe extern "C" fn pk_metric_add_s(
    object: *const PkCloud,
    gt_pose: *const f64,
    pred_pose: *const f64,
    out: *mut f64,
) -> PkStatus {
    guarded(
        || match unsafe { metric_instance(object, gt_pose, pred_pose, None) } {
            Ok(inst) => write_value(add_s(&inst), out),
            Err(status) => status,
        },
    )
}

/// Minimum ADD over the finite equivalent ground-truth set.
///
/// # Safety
/// As [`pk_metric_add`]; `symmetry` may be null for no ambiguity.
#[no_mangle]
pub unsafe extern "C" fn pk_metric_acpd(
    object: *const PkCloud,
    gt_pose: *const f64,
    pred_pose: *const f64,
    symmetry: *const PkSymmetry,
    out: *mut f64,
) -> PkStatus {
    guarded(
        || match unsafe { metric_instance(object, gt_pose, pred_pose, Some(symmetry)) } {
            Ok(inst) => match acpd(&inst) {
                Ok(value) => write_value(value, out),
                Err(e) => from_error(e),
            },
            Err(status) => status,
        },
    )
}

/// Infimum of ADD over all equivalent ground truths, sampling each
/// continuous axis at `n_axis_samples` angles.
///
/// # Safety
/// As [`pk_metric_acpd`].
#[no_mangle]
pub unsafe extern "C" fn pk_metric_iadd(
    object: *const PkCloud,
    gt_pose: *const f64,
    pred_pose: *const f64,
    symmetry: *const PkSymmetry,
    n_axis_samples: usize,
    out: *mut f64,
) -> PkStatus {
    guarded(
        || match unsafe { metric_instance(object, gt_pose, pred_pose, Some(symmetry)) } {
            Ok(inst) => {
                let cfg = MetricConfig {
                    n_axis_samples,
                    ..Default::default()
                };
                match iadd(&inst, &cfg) {
                    Ok(value) => write_value(value, out),
                    Err(e) => from_error(e),
                }
            }
            Err(status) => status,
        },
    )
}

/// Exact area under the accuracy-vs-threshold curve on `[0, d_max]`,
/// normalized by `d_max`. Encode missing detections as infinity.
///
/// # Safety
/// `errors` must point to `n` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pk_auc(
    errors: *const f64,
    n: usize,
    d_max: f64,
    out: *mut f64,
) -> PkStatus {
    guarded(|| {
        let errors = match unsafe { slice_arg(errors, n, "errors") } {
            Ok(e) => e,
            Err(status) => return status,
        };
        match auc(errors, d_max) {
            Ok(value) => write_value(value, out),
            Err(e) => from_error(e),
        }
    })
}

// ---------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------

/// Mirror of the fitting configuration.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PkFitConfig {
    pub confidence_threshold: f64,
    pub inlier_threshold: f64,
    pub max_iterations: usize,
    pub success_confidence: f64,
    pub local_opt_rounds: usize,
    pub seed: u64,
}

impl PkFitConfig {
    fn to_config(self) -> FitConfig {
        FitConfig {
            confidence_threshold: self.confidence_threshold,
            inlier_threshold: self.inlier_threshold,
            max_iterations: self.max_iterations,
            success_confidence: self.success_confidence,
            local_opt_rounds: self.local_opt_rounds,
            seed: self.seed,
        }
    }
}

/// Summary of a consensus fit.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PkFitReport {
    pub inlier_count: usize,
    pub inlier_rms: f64,
    pub iterations_used: usize,
    pub success_iteration: usize,
}

/// Writes the default fitting configuration.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pk_fit_config_default(out: *mut PkFitConfig) -> PkStatus {
    if out.is_null() {
        return fail(PkStatus::InvalidArgument, "null output");
    }
    let cfg = FitConfig::default();
    unsafe {
        *out = PkFitConfig {
            confidence_threshold: cfg.confidence_threshold,
            inlier_threshold: cfg.inlier_threshold,
            max_iterations: cfg.max_iterations,
            success_confidence: cfg.success_confidence,
            local_opt_rounds: cfg.local_opt_rounds,
            seed: cfg.seed,
        };
    }
    PkStatus::Ok
}

unsafe fn correspondence_args(
    object_xyz: *const f64,
    scene_xyz: *const f64,
    confidences: *const f64,
    k: usize,
) -> Result<CorrespondenceSet, PkStatus> {
    let object = packed_points(unsafe { slice_arg(object_xyz, k * 3, "object points")? });
    let scene = packed_points(unsafe { slice_arg(scene_xyz, k * 3, "scene points")? });
    let confidence = if confidences.is_null() {
        vec![1.0; k]
    } else {
        unsafe { slice_arg(confidences, k, "confidences")? }.to_vec()
    };
    CorrespondenceSet::new(object, scene, confidence).map_err(from_error)
}

/// Weighted least-squares rigid fit of `k` correspondences. `weights`
/// may be null for uniform weighting.
///
/// # Safety
/// Buffers must hold `3 * k` doubles (`weights`: `k`); `out_pose` must
/// point to 12 doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_fit_least_squares(
    object_xyz: *const f64,
    scene_xyz: *const f64,
    weights: *const f64,
    k: usize,
    out_pose: *mut f64,
) -> PkStatus {
    guarded(|| {
        let corr =
            match unsafe { correspondence_args(object_xyz, scene_xyz, std::ptr::null(), k) } {
                Ok(corr) => corr,
                Err(status) => return status,
            };
        let weights = if weights.is_null() {
            None
        } else {
            match unsafe { slice_arg(weights, k, "weights") } {
                Ok(w) => Some(w),
                Err(status) => return status,
            }
        };
        match least_squares_fit(&corr, weights) {
            Ok(pose) => write_pose(&pose, out_pose),
            Err(e) => from_error(e),
        }
    })
}

#[allow(clippy::too_many_arguments)]
unsafe fn consensus(
    object_xyz: *const f64,
    scene_xyz: *const f64,
    confidences: *const f64,
    k: usize,
    config: *const PkFitConfig,
    out_pose: *mut f64,
    out_report: *mut PkFitReport,
    progressive: bool,
) -> PkStatus {
    let corr = match unsafe { correspondence_args(object_xyz, scene_xyz, confidences, k) } {
        Ok(corr) => corr,
        Err(status) => return status,
    };
    let cfg = if config.is_null() {
        FitConfig::default()
    } else {
        unsafe { *config }.to_config()
    };
    let result = if progressive {
        prosac_fit(&corr, &cfg)
    } else {
        ransac_fit(&corr, &cfg)
    };
    match result {
        Ok(result) => {
            if !out_report.is_null() {
                unsafe {
                    *out_report = PkFitReport {
                        inlier_count: result.inlier_indices.len(),
                        inlier_rms: result.inlier_rms,
                        iterations_used: result.iterations_used,
                        success_iteration: result.success_iteration,
                    };
                }
            }
            write_pose(&result.pose, out_pose)
        }
        Err(e) => from_error(e),
    }
}

/// Uniform-sampling consensus fit. `config` may be null for defaults,
/// `out_report` may be null.
///
/// # Safety
/// As [`pk_fit_least_squares`], plus `confidences` must hold `k` doubles
/// when non-null.
#[no_mangle]
pub unsafe extern "C" fn pk_fit_ransac(
    object_xyz: *const f64,
    scene_xyz: *const f64,
    confidences: *const f64,
    k: usize,
    config: *const PkFitConfig,
    out_pose: *mut f64,
    out_report: *mut PkFitReport,
) -> PkStatus {
    guarded(|| unsafe {
        consensus(
            object_xyz, scene_xyz, confidences, k, config, out_pose, out_report, false,
        )
    })
}

/// Confidence-progressive consensus fit. `config` may be null for
/// defaults, `out_report` may be null.
///
/// # Safety
/// As [`pk_fit_ransac`].
#[no_mangle]
pub unsafe extern "C" fn pk_fit_prosac(
    object_xyz: *const f64,
    scene_xyz: *const f64,
    confidences: *const f64,
    k: usize,
    config: *const PkFitConfig,
    out_pose: *mut f64,
    out_report: *mut PkFitReport,
) -> PkStatus {
    guarded(|| unsafe {
        consensus(
            object_xyz, scene_xyz, confidences, k, config, out_pose, out_report, true,
        )
    })
}

// ---------------------------------------------------------------------
// Segmentation
// ---------------------------------------------------------------------

/// Pinhole intrinsics mirror.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PkIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
}

/// Runs the full heatmap refinement chain and returns the selected point
/// indices as a caller-owned buffer (release with [`pk_indices_free`]).
///
/// # Safety
/// `cloud` must be a live handle; `scores` must hold one double per
/// cloud point; out-pointers must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn pk_refine_segmentation(
    cloud: *const PkCloud,
    scores: *const f64,
    n_scores: usize,
    intrinsics: *const PkIntrinsics,
    sigma: f64,
    min_size: usize,
    out_indices: *mut *mut usize,
    out_count: *mut usize,
    out_component_count: *mut usize,
) -> PkStatus {
    guarded(|| {
        if cloud.is_null() || intrinsics.is_null() {
            return fail(PkStatus::InvalidArgument, "null cloud or intrinsics");
        }
        if out_indices.is_null() || out_count.is_null() {
            return fail(PkStatus::InvalidArgument, "null output pointer");
        }
        let scores = match unsafe { slice_arg(scores, n_scores, "scores") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let c = unsafe { *intrinsics };
        let cam = match CameraIntrinsics::new(c.fx, c.fy, c.cx, c.cy, c.width, c.height) {
            Ok(cam) => cam,
            Err(e) => return from_error(e),
        };
        match refine_segmentation(&unsafe { &*cloud }.0, scores, &cam, sigma, min_size) {
            Ok(result) => {
                let mut indices = result.point_indices.into_boxed_slice();
                unsafe {
                    *out_count = indices.len();
                    *out_indices = indices.as_mut_ptr();
                    if !out_component_count.is_null() {
                        *out_component_count = result.component_count;
                    }
                }
                std::mem::forget(indices);
                PkStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a buffer returned by [`pk_refine_segmentation`].
///
/// # Safety
/// `indices` and `count` must come from a single successful call.
#[no_mangle]
pub unsafe extern "C" fn pk_indices_free(indices: *mut usize, count: usize) {
    if !indices.is_null() {
        drop(unsafe { Box::from_raw(std::ptr::slice_from_raw_parts_mut(indices, count)) });
    }
}
