//! ADD, ADD-S, ACPD and IADD pose-error metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ColoredPointCloud, RigidTransform};
use crate::metrics::symmetry::{expand_equivalent_poses, SymmetryAnnotation};
use crate::spatial::KdTree3;

/// The pose-error metrics the toolkit can report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Add,
    #[serde(rename = "adds")]
    AddS,
    Acpd,
    Iadd,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Add,
        MetricKind::AddS,
        MetricKind::Acpd,
        MetricKind::Iadd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Add => "add",
            MetricKind::AddS => "adds",
            MetricKind::Acpd => "acpd",
            MetricKind::Iadd => "iadd",
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "add" => Ok(MetricKind::Add),
            "adds" | "add-s" | "add_s" => Ok(MetricKind::AddS),
            "acpd" => Ok(MetricKind::Acpd),
            "iadd" => Ok(MetricKind::Iadd),
            other => Err(Error::InvalidInput(format!("unknown metric '{other}'"))),
        }
    }
}

/// Knobs for the continuous-symmetry handling of IADD.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricConfig {
    /// Angle samples per continuous axis; at least 2.
    pub n_axis_samples: usize,
    /// Optionally refine the best sampled angle by golden-section search
    /// (single-axis case only).
    pub refine_continuous: bool,
    /// The metrics a batch evaluation reports.
    pub metric_set: Vec<MetricKind>,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            n_axis_samples: 360,
            refine_continuous: false,
            metric_set: vec![MetricKind::Add, MetricKind::AddS, MetricKind::Iadd],
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_axis_samples < 2 {
            return Err(Error::InvalidInput(
                "n_axis_samples must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// One evaluation unit: object points, ground-truth and predicted poses,
/// and the object's symmetry class.
#[derive(Debug, Clone)]
pub struct EvaluationInstance {
    pub object_points: ColoredPointCloud,
    pub gt_pose: RigidTransform,
    pub pred_pose: RigidTransform,
    pub symmetry: SymmetryAnnotation,
}

impl EvaluationInstance {
    pub fn new(
        object_points: ColoredPointCloud,
        gt_pose: RigidTransform,
        pred_pose: RigidTransform,
        symmetry: SymmetryAnnotation,
    ) -> Result<Self> {
        if object_points.is_empty() {
            return Err(Error::InvalidInput(
                "object cloud must contain at least one point".into(),
            ));
        }
        Ok(Self {
            object_points,
            gt_pose,
            pred_pose,
            symmetry,
        })
    }
}

/// Mean distance between corresponding points under the two poses.
pub fn add(inst: &EvaluationInstance) -> f64 {
    add_between(&inst.object_points, &inst.pred_pose, &inst.gt_pose)
}

fn add_between(points: &ColoredPointCloud, a: &RigidTransform, b: &RigidTransform) -> f64 {
    let sum: f64 = points
        .positions()
        .iter()
        .map(|v| (a.apply_point(v) - b.apply_point(v)).norm())
        .sum();
    sum / points.len() as f64
}

/// Mean distance from each predicted point to its nearest ground-truth
/// point. Exact nearest neighbors via a k-d tree.
pub fn add_s(inst: &EvaluationInstance) -> f64 {
    let gt_points: Vec<_> = inst
        .object_points
        .positions()
        .iter()
        .map(|v| inst.gt_pose.apply_point(v))
        .collect();
    let tree = KdTree3::build(&gt_points);
    let sum: f64 = inst
        .object_points
        .positions()
        .iter()
        .map(|v| {
            let p = inst.pred_pose.apply_point(v);
            tree.nearest(&p).expect("non-empty cloud").1
        })
        .sum();
    sum / inst.object_points.len() as f64
}

/// Minimum ADD over the finite set of equivalent ground-truth poses.
///
/// Errors when the symmetry has a continuous axis or is a sphere.
pub fn acpd(inst: &EvaluationInstance) -> Result<f64> {
    if inst.symmetry.is_textureless_sphere() || inst.symmetry.has_continuous() {
        return Err(Error::InfiniteGroundTruthSet);
    }
    let poses = expand_equivalent_poses(&inst.gt_pose, &inst.symmetry, 2)?;
    Ok(min_add_over(&inst.object_points, &inst.pred_pose, &poses))
}

fn min_add_over(
    points: &ColoredPointCloud,
    pred: &RigidTransform,
    gt_poses: &[RigidTransform],
) -> f64 {
    gt_poses
        .iter()
        .map(|gt| add_between(points, pred, gt))
        .fold(f64::INFINITY, f64::min)
}

/// Infimum of ADD over all equivalent ground-truth poses.
///
/// Dispatches on the ambiguity class: plain ADD for asymmetric objects,
/// the discrete minimum for finite sets, a sampled (optionally refined)
/// minimum for continuous axes, and the center distance for a textureless
/// sphere.
pub fn iadd(inst: &EvaluationInstance, cfg: &MetricConfig) -> Result<f64> {
    cfg.validate()?;
    if inst.symmetry.is_textureless_sphere() {
        return Ok((inst.pred_pose.translation() - inst.gt_pose.translation()).norm());
    }
    if inst.symmetry.is_trivial() {
        return Ok(add(inst));
    }
    if !inst.symmetry.has_continuous() {
        return acpd(inst);
    }
    let poses = expand_equivalent_poses(&inst.gt_pose, &inst.symmetry, cfg.n_axis_samples)?;
    let sampled = min_add_over(&inst.object_points, &inst.pred_pose, &poses);
    if cfg.refine_continuous
        && inst.symmetry.continuous_axes().len() == 1
        && inst.symmetry.discrete().is_empty()
    {
        return Ok(refine_single_axis(inst, cfg.n_axis_samples).min(sampled));
    }
    Ok(sampled)
}

/// Golden-section refinement of the best sampled angle for a single
/// continuous axis with no discrete part.
fn refine_single_axis(inst: &EvaluationInstance, n: usize) -> f64 {
    let axis = &inst.symmetry.continuous_axes()[0];
    let value = |angle: f64| {
        let gt = inst.gt_pose.compose(&axis.rotation(angle));
        add_between(&inst.object_points, &inst.pred_pose, &gt)
    };
    let step = std::f64::consts::TAU / n as f64;
    let mut best_angle = 0.0;
    let mut best_value = f64::INFINITY;
    for k in 0..n {
        let angle = -std::f64::consts::PI + step * k as f64;
        let v = value(angle);
        if v < best_value {
            best_value = v;
            best_angle = angle;
        }
    }
    // Golden-section search on the bracket around the best sample.
    let inv_phi = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (best_angle - step, best_angle + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (value(x1), value(x2));
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = value(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = value(x2);
        }
    }
    best_value.min(f1).min(f2)
}
