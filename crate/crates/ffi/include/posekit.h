/* C interface for the posekit 6D pose evaluation and estimation toolkit. */

#ifndef POSEKIT_H
#define POSEKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of a toolkit call.
typedef enum {
  PK_STATUS_OK = 0,
  PK_STATUS_INVALID_ARGUMENT = 1,
  PK_STATUS_PARSE_ERROR = 2,
  PK_STATUS_IO_ERROR = 3,
  PK_STATUS_FIT_FAILED = 4,
  PK_STATUS_DEGENERATE = 5,
  PK_STATUS_UNKNOWN_OBJECT = 6,
  PK_STATUS_INTERNAL_ERROR = 7,
} PkStatus;

// An immutable colored point cloud.
typedef struct PkCloud PkCloud;

// An immutable triangle mesh.
typedef struct PkMesh PkMesh;

// A mutable symmetry annotation under construction.
typedef struct PkSymmetry PkSymmetry;

// Mirror of the fitting configuration.
typedef struct {
  double confidence_threshold;
  double inlier_threshold;
  size_t max_iterations;
  double success_confidence;
  size_t local_opt_rounds;
  uint64_t seed;
} PkFitConfig;

// Summary of a consensus fit.
typedef struct {
  size_t inlier_count;
  double inlier_rms;
  size_t iterations_used;
  size_t success_iteration;
} PkFitReport;

// Pinhole intrinsics mirror.
typedef struct {
  double fx;
  double fy;
  double cx;
  double cy;
  uint32_t width;
  uint32_t height;
} PkIntrinsics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. The
// pointer stays valid until the next failing toolkit call on the same
// thread.
const char *pk_last_error_message(void);

// Builds a cloud from `n` packed xyz points and optional packed rgb
// colors (`rgb` may be null).
//
// # Safety
// `xyz` must point to `3 * n` doubles and `rgb` to `3 * n` doubles when
// non-null.
PkStatus pk_cloud_new(const double *xyz, const double *rgb, size_t n, PkCloud **out);

// # Safety
// `cloud` must come from this library and not be freed twice.
void pk_cloud_free(PkCloud *cloud);

// # Safety
// `cloud` must be a live handle.
size_t pk_cloud_len(const PkCloud *cloud);

// Loads a mesh from an `.obj` or `.ply` file.
//
// # Safety
// `path` must be a NUL-terminated string.
PkStatus pk_mesh_load(const char *path, PkMesh **out);

// # Safety
// `mesh` must come from this library and not be freed twice.
void pk_mesh_free(PkMesh *mesh);

// Bounding-box diagonal of the mesh vertices (meters).
//
// # Safety
// `mesh` must be a live handle.
double pk_mesh_diagonal(const PkMesh *mesh);

// The mesh vertex set as a cloud.
//
// # Safety
// `mesh` must be a live handle, `out` a valid pointer.
PkStatus pk_mesh_vertex_cloud(const PkMesh *mesh, PkCloud **out);

// `n` area-weighted surface samples, deterministic per seed.
//
// # Safety
// `mesh` must be a live handle, `out` a valid pointer.
PkStatus pk_mesh_sample_surface(const PkMesh *mesh, size_t n, uint64_t seed, PkCloud **out);

// A fresh annotation with no pose ambiguity.
//
// # Safety
// `out` must be a valid pointer.
PkStatus pk_symmetry_new(PkSymmetry **out);

// A textureless-sphere annotation.
//
// # Safety
// `out` must be a valid pointer.
PkStatus pk_symmetry_sphere(PkSymmetry **out);

// Appends a discrete self-map (12-double pose, identity excluded).
//
// # Safety
// `symmetry` must be a live handle, `pose` must point to 12 doubles.
PkStatus pk_symmetry_add_discrete(PkSymmetry *symmetry, const double *pose);

// Appends a continuous rotation axis (unit direction, point on axis).
//
// # Safety
// `symmetry` must be a live handle; `direction` and `point` must point
// to 3 doubles each.
PkStatus pk_symmetry_add_axis(PkSymmetry *symmetry, const double *direction, const double *point);

// # Safety
// `symmetry` must come from this library and not be freed twice.
void pk_symmetry_free(PkSymmetry *symmetry);

// Mean corresponding-point distance between the two poses.
//
// # Safety
// `object` must be a live handle; poses must point to 12 doubles; `out`
// must be valid.
PkStatus pk_metric_add(const PkCloud *object,
                       const double *gt_pose,
                       const double *pred_pose,
                       double *out);

// Mean nearest-point distance between the two poses.
//
// # Safety
// As [`pk_metric_add`].
PkStatus pk_metric_add_s(const PkCloud *object,
                         const double *gt_pose,
                         const double *pred_pose,
                         double *out);

// Minimum ADD over the finite equivalent ground-truth set.
//
// # Safety
// As [`pk_metric_add`]; `symmetry` may be null for no ambiguity.
PkStatus pk_metric_acpd(const PkCloud *object,
                        const double *gt_pose,
                        const double *pred_pose,
                        const PkSymmetry *symmetry,
                        double *out);

// Infimum of ADD over all equivalent ground truths, sampling each
// continuous axis at `n_axis_samples` angles.
//
// # Safety
// As [`pk_metric_acpd`].
PkStatus pk_metric_iadd(const PkCloud *object,
                        const double *gt_pose,
                        const double *pred_pose,
                        const PkSymmetry *symmetry,
                        size_t n_axis_samples,
                        double *out);

// Exact area under the accuracy-vs-threshold curve on `[0, d_max]`,
// normalized by `d_max`. Encode missing detections as infinity.
//
// # Safety
// `errors` must point to `n` doubles; `out` must be valid.
PkStatus pk_auc(const double *errors, size_t n, double d_max, double *out);

// Writes the default fitting configuration.
//
// # Safety
// `out` must be a valid pointer.
PkStatus pk_fit_config_default(PkFitConfig *out);

// Weighted least-squares rigid fit of `k` correspondences. `weights`
// may be null for uniform weighting.
//
// # Safety
// Buffers must hold `3 * k` doubles (`weights`: `k`); `out_pose` must
// point to 12 doubles.
PkStatus pk_fit_least_squares(const double *object_xyz,
                              const double *scene_xyz,
                              const double *weights,
                              size_t k,
                              double *out_pose);

// Uniform-sampling consensus fit. `config` may be null for defaults,
// `out_report` may be null.
//
// # Safety
// As [`pk_fit_least_squares`], plus `confidences` must hold `k` doubles
// when non-null.
PkStatus pk_fit_ransac(const double *object_xyz,
                       const double *scene_xyz,
                       const double *confidences,
                       size_t k,
                       const PkFitConfig *config,
                       double *out_pose,
                       PkFitReport *out_report);

// Confidence-progressive consensus fit. `config` may be null for
// defaults, `out_report` may be null.
//
// # Safety
// As [`pk_fit_ransac`].
PkStatus pk_fit_prosac(const double *object_xyz,
                       const double *scene_xyz,
                       const double *confidences,
                       size_t k,
                       const PkFitConfig *config,
                       double *out_pose,
                       PkFitReport *out_report);

// Runs the full heatmap refinement chain and returns the selected point
// indices as a caller-owned buffer (release with [`pk_indices_free`]).
//
// # Safety
// `cloud` must be a live handle; `scores` must hold one double per
// cloud point; out-pointers must be valid.
PkStatus pk_refine_segmentation(const PkCloud *cloud,
                                const double *scores,
                                size_t n_scores,
                                const PkIntrinsics *intrinsics,
                                double sigma,
                                size_t min_size,
                                size_t **out_indices,
                                size_t *out_count,
                                size_t *out_component_count);

// Releases a buffer returned by [`pk_refine_segmentation`].
//
// # Safety
// `indices` and `count` must come from a single successful call.
void pk_indices_free(size_t *indices, size_t count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSEKIT_H */
