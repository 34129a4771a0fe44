//! Exact nearest-neighbor search over 3D points.

use nalgebra::Vector3;

/// A static k-d tree with exact backtracking queries.
///
/// Built once over a point set; queries return the true nearest neighbor,
/// never an approximation.
#[derive(Debug, Clone)]
pub struct KdTree3 {
    // Implicit balanced layout: node k splits on axis depth % 3 and owns
    // the median of its index range.
    points: Vec<Vector3<f64>>,
    order: Vec<u32>,
}

impl KdTree3 {
    pub fn build(points: &[Vector3<f64>]) -> Self {
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        let points = points.to_vec();
        if !order.is_empty() {
            build_recursive(&points, &mut order, 0);
        }
        Self { points, order }
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Index and Euclidean distance of the nearest stored point.
    pub fn nearest(&self, query: &Vector3<f64>) -> Option<(usize, f64)> {
        if self.order.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(0, self.order.len(), 0, query, &mut best);
        Some((best.0, best.1.sqrt()))
    }

    fn search(
        &self,
        lo: usize,
        hi: usize,
        depth: usize,
        query: &Vector3<f64>,
        best: &mut (usize, f64),
    ) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let index = self.order[mid] as usize;
        let point = &self.points[index];
        let d2 = (query - point).norm_squared();
        if d2 < best.1 {
            *best = (index, d2);
        }
        let axis = depth % 3;
        let delta = query[axis] - point[axis];
        let (near, far) = if delta < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(near.0, near.1, depth + 1, query, best);
        // The far half can only win if the splitting plane is closer than
        // the current best.
        if delta * delta < best.1 {
            self.search(far.0, far.1, depth + 1, query, best);
        }
    }
}

fn build_recursive(points: &[Vector3<f64>], order: &mut [u32], depth: usize) {
    if order.len() <= 1 {
        return;
    }
    let axis = depth % 3;
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        points[a as usize][axis]
            .partial_cmp(&points[b as usize][axis])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let (left, rest) = order.split_at_mut(mid);
    build_recursive(points, left, depth + 1);
    build_recursive(points, &mut rest[1..], depth + 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_brute_force_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = rng.random_range(1..200);
            let points: Vec<Vector3<f64>> = (0..n)
                .map(|_| {
                    Vector3::new(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    )
                })
                .collect();
            let tree = KdTree3::build(&points);
            for _ in 0..50 {
                let q = Vector3::new(
                    rng.random_range(-1.5..1.5),
                    rng.random_range(-1.5..1.5),
                    rng.random_range(-1.5..1.5),
                );
                let (_, got) = tree.nearest(&q).unwrap();
                let want = points
                    .iter()
                    .map(|p| (q - p).norm())
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn handles_duplicates() {
        let points = vec![Vector3::zeros(); 8];
        let tree = KdTree3::build(&points);
        let (_, d) = tree.nearest(&Vector3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn empty_tree_returns_none() {
        assert!(KdTree3::build(&[]).nearest(&Vector3::zeros()).is_none());
    }
}
