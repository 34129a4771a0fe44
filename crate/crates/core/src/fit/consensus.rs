//! RANSAC and PROSAC hypothesize-and-verify pose fitting.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fit::correspondences::CorrespondenceSet;
use crate::fit::kabsch::least_squares_fit;
use crate::geometry::RigidTransform;

/// Minimal sample size for a rigid 3D hypothesis.
const MIN_SAMPLE: usize = 3;

/// Object-point triangles with area below this are rejected as hypothesis
/// samples (square meters).
const MIN_SAMPLE_AREA: f64 = 1e-12;

/// Redraw budget per iteration before the iteration is counted as empty.
const MAX_SAMPLE_REDRAWS: usize = 100;

/// Total sample count after which the progressive schedule has fully
/// converged to uniform sampling over all correspondences.
const PROSAC_T_N: f64 = 200_000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Correspondences at or below this confidence are dropped up front.
    pub confidence_threshold: f64,
    /// Maximum residual for a pair to count as an inlier (meters).
    pub inlier_threshold: f64,
    /// Hard cap on hypothesis iterations.
    pub max_iterations: usize,
    /// Target probability that at least one all-inlier sample was drawn;
    /// drives the adaptive iteration bound.
    pub success_confidence: f64,
    /// Rounds of refit-on-inliers local optimization after the search.
    pub local_opt_rounds: usize,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            confidence_threshold: 0.8,
            inlier_threshold: 0.010,
            max_iterations: 20_000,
            success_confidence: 0.999,
            local_opt_rounds: 3,
            seed: 0,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.confidence_threshold) {
            return Err(Error::InvalidInput(
                "confidence_threshold must be in [0, 1]".into(),
            ));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(self.inlier_threshold > 0.0) {
            return Err(Error::InvalidInput(
                "inlier_threshold must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.success_confidence) {
            return Err(Error::InvalidInput(
                "success_confidence must be in [0, 1)".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub pose: RigidTransform,
    /// Indices into the input correspondence set, ascending.
    pub inlier_indices: Vec<usize>,
    /// Root-mean-square residual over the reported inliers.
    pub inlier_rms: f64,
    /// Hypothesis iterations executed before termination.
    pub iterations_used: usize,
    /// Iteration at which the final consensus size was first reached.
    pub success_iteration: usize,
}

/// Uniform-sampling consensus fit.
pub fn ransac_fit(corr: &CorrespondenceSet, cfg: &FitConfig) -> Result<FitResult> {
    consensus_fit(corr, cfg, None)
}

/// Progressive consensus fit: correspondences are sorted by confidence
/// (ties broken by original index) and samples are drawn from a growing
/// prefix of that ranking, converging to uniform sampling over the full
/// set. Verification, tie-breaking, local optimization and termination
/// match [`ransac_fit`].
pub fn prosac_fit(corr: &CorrespondenceSet, cfg: &FitConfig) -> Result<FitResult> {
    let mut order: Vec<usize> = (0..corr.len()).collect();
    order.sort_by(|&a, &b| {
        corr.confidences()[b]
            .partial_cmp(&corr.confidences()[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    consensus_fit(corr, cfg, Some(order))
}

struct Best {
    pose: RigidTransform,
    inlier_count: usize,
    inlier_rms: f64,
}

fn consensus_fit(
    corr: &CorrespondenceSet,
    cfg: &FitConfig,
    order: Option<Vec<usize>>,
) -> Result<FitResult> {
    cfg.validate()?;
    let k = corr.len();
    if k < MIN_SAMPLE {
        return Err(Error::InsufficientCorrespondences(k));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut schedule = order.map(|o| ProsacSchedule::new(o, k));

    let mut best: Option<Best> = None;
    let mut bound = cfg.max_iterations;
    let mut iterations = 0usize;
    let mut success_iteration = 0usize;

    while iterations < bound {
        iterations += 1;
        let Some(sample) = draw_sample(corr, &mut rng, schedule.as_mut(), iterations) else {
            continue;
        };
        let Ok(pose) = least_squares_fit(&corr.select(&sample), None) else {
            continue;
        };
        let (count, rms) = score(corr, &pose, cfg.inlier_threshold);
        if count < MIN_SAMPLE {
            continue;
        }
        let improves = match &best {
            None => true,
            Some(b) => count > b.inlier_count || (count == b.inlier_count && rms < b.inlier_rms),
        };
        if improves {
            let grew = best.as_ref().is_none_or(|b| count > b.inlier_count);
            if grew {
                success_iteration = iterations;
            }
            best = Some(Best {
                pose,
                inlier_count: count,
                inlier_rms: rms,
            });
            bound = adaptive_bound(count, k, cfg);
        }
    }

    let mut best = best.ok_or(Error::FitFailed)?;

    // Local optimization: iterated refit on the current inlier set.
    for _ in 0..cfg.local_opt_rounds {
        let inliers = collect_inliers(corr, &best.pose, cfg.inlier_threshold);
        let Ok(pose) = least_squares_fit(&corr.select(&inliers), None) else {
            break;
        };
        let (count, rms) = score(corr, &pose, cfg.inlier_threshold);
        if count > best.inlier_count || (count == best.inlier_count && rms < best.inlier_rms) {
            best = Best {
                pose,
                inlier_count: count,
                inlier_rms: rms,
            };
        } else {
            break;
        }
    }

    let inlier_indices = collect_inliers(corr, &best.pose, cfg.inlier_threshold);
    let inlier_rms = rms_over(corr, &best.pose, &inlier_indices);
    Ok(FitResult {
        pose: best.pose,
        inlier_indices,
        inlier_rms,
        iterations_used: iterations,
        success_iteration,
    })
}

fn residual(corr: &CorrespondenceSet, pose: &RigidTransform, i: usize) -> f64 {
    (pose.apply_point(&corr.object_points()[i]) - corr.scene_points()[i]).norm()
}

fn score(corr: &CorrespondenceSet, pose: &RigidTransform, threshold: f64) -> (usize, f64) {
    let mut count = 0usize;
    let mut sum_sq = 0.0;
    for i in 0..corr.len() {
        let r = residual(corr, pose, i);
        if r <= threshold {
            count += 1;
            sum_sq += r * r;
        }
    }
    let rms = if count > 0 {
        (sum_sq / count as f64).sqrt()
    } else {
        f64::INFINITY
    };
    (count, rms)
}

fn collect_inliers(corr: &CorrespondenceSet, pose: &RigidTransform, threshold: f64) -> Vec<usize> {
    (0..corr.len())
        .filter(|&i| residual(corr, pose, i) <= threshold)
        .collect()
}

fn rms_over(corr: &CorrespondenceSet, pose: &RigidTransform, indices: &[usize]) -> f64 {
    if indices.is_empty() {
        return f64::INFINITY;
    }
    let sum_sq: f64 = indices
        .iter()
        .map(|&i| {
            let r = residual(corr, pose, i);
            r * r
        })
        .sum();
    (sum_sq / indices.len() as f64).sqrt()
}

fn adaptive_bound(inlier_count: usize, total: usize, cfg: &FitConfig) -> usize {
    let w = inlier_count as f64 / total as f64;
    let p_sample = w.powi(MIN_SAMPLE as i32);
    if p_sample >= 1.0 {
        return 1;
    }
    if p_sample <= 0.0 {
        return cfg.max_iterations;
    }
    let needed = (1.0 - cfg.success_confidence).ln() / (1.0 - p_sample).ln();
    if !needed.is_finite() || needed >= cfg.max_iterations as f64 {
        cfg.max_iterations
    } else {
        (needed.ceil() as usize).max(1)
    }
}

fn triangle_area(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

fn draw_sample(
    corr: &CorrespondenceSet,
    rng: &mut ChaCha8Rng,
    schedule: Option<&mut ProsacSchedule>,
    iteration: usize,
) -> Option<Vec<usize>> {
    let k = corr.len();
    match schedule {
        None => draw_non_degenerate(corr, rng, |rng| distinct_uniform(rng, k, MIN_SAMPLE)),
        Some(schedule) => {
            schedule.advance(iteration);
            let saturated = schedule.saturated(iteration);
            let n = schedule.prefix;
            let order = &schedule.order;
            if saturated {
                draw_non_degenerate(corr, rng, |rng| {
                    distinct_uniform(rng, k, MIN_SAMPLE)
                        .into_iter()
                        .map(|i| order[i])
                        .collect()
                })
            } else {
                // Semi-random draw: the newest ranked point joins two
                // uniform picks from the stronger prefix.
                draw_non_degenerate(corr, rng, |rng| {
                    let mut sample: Vec<usize> = distinct_uniform(rng, n - 1, MIN_SAMPLE - 1)
                        .into_iter()
                        .map(|i| order[i])
                        .collect();
                    sample.push(order[n - 1]);
                    sample
                })
            }
        }
    }
}

fn draw_non_degenerate(
    corr: &CorrespondenceSet,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Vec<usize>,
) -> Option<Vec<usize>> {
    for _ in 0..MAX_SAMPLE_REDRAWS {
        let sample = draw(rng);
        let area = triangle_area(
            &corr.object_points()[sample[0]],
            &corr.object_points()[sample[1]],
            &corr.object_points()[sample[2]],
        );
        if area >= MIN_SAMPLE_AREA {
            return Some(sample);
        }
    }
    None
}

fn distinct_uniform(rng: &mut ChaCha8Rng, upper: usize, count: usize) -> Vec<usize> {
    debug_assert!(upper >= count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let candidate = rng.random_range(0..upper);
        if !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

/// Standard progressive growth schedule: `T_n` is the expected number of
/// uniform samples drawn entirely from the top-`n` prefix after `T_N`
/// total samples; its discretized increments `T'_n` decide when the
/// sampling prefix grows.
struct ProsacSchedule {
    order: Vec<usize>,
    total: usize,
    prefix: usize,
    t_n: f64,
    t_prime: f64,
}

impl ProsacSchedule {
    fn new(order: Vec<usize>, total: usize) -> Self {
        let mut t_m = PROSAC_T_N;
        for i in 0..MIN_SAMPLE {
            t_m *= (MIN_SAMPLE - i) as f64 / (total - i) as f64;
        }
        Self {
            order,
            total,
            prefix: MIN_SAMPLE,
            t_n: t_m,
            t_prime: 1.0,
        }
    }

    fn advance(&mut self, iteration: usize) {
        while self.prefix < self.total && iteration as f64 > self.t_prime {
            let next = self.t_n * (self.prefix + 1) as f64
                / (self.prefix + 1 - MIN_SAMPLE) as f64;
            self.t_prime += (next - self.t_n).ceil();
            self.t_n = next;
            self.prefix += 1;
        }
    }

    fn saturated(&self, iteration: usize) -> bool {
        self.prefix >= self.total && iteration as f64 > self.t_prime
    }
}
