//! Otsu's threshold over the valid heatmap region.

use crate::error::{Error, Result};
use crate::seg::heatmap::Heatmap2D;

const BINS: usize = 256;

/// The bin boundary in (0, 1) maximizing between-class variance over a
/// 256-bin histogram of the valid pixels. Ties resolve to the lower
/// boundary.
///
/// Errors when the valid pixels hold fewer than two distinct values.
pub fn otsu_threshold(map: &Heatmap2D) -> Result<f64> {
    let mut histogram = [0usize; BINS];
    let mut total = 0usize;
    for (value, &valid) in map.values().iter().zip(map.valid()) {
        if valid {
            histogram[bin_of(*value)] += 1;
            total += 1;
        }
    }
    if histogram.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::DegenerateHistogram);
    }

    let grand_sum: f64 = histogram
        .iter()
        .enumerate()
        .map(|(i, &c)| bin_center(i) * c as f64)
        .sum();

    let mut best_boundary = 0usize;
    let mut best_variance = f64::NEG_INFINITY;
    let mut weight_bg = 0.0;
    let mut sum_bg = 0.0;
    // Boundary k separates bins 0..=k from k+1..; its threshold value is
    // (k+1)/BINS.
    for (k, &count) in histogram.iter().enumerate().take(BINS - 1) {
        weight_bg += count as f64;
        sum_bg += bin_center(k) * count as f64;
        let weight_fg = total as f64 - weight_bg;
        if weight_bg == 0.0 || weight_fg == 0.0 {
            continue;
        }
        let mean_bg = sum_bg / weight_bg;
        let mean_fg = (grand_sum - sum_bg) / weight_fg;
        let variance = weight_bg * weight_fg * (mean_bg - mean_fg) * (mean_bg - mean_fg);
        if variance > best_variance {
            best_variance = variance;
            best_boundary = k;
        }
    }
    Ok((best_boundary + 1) as f64 / BINS as f64)
}

fn bin_of(value: f64) -> usize {
    ((value.clamp(0.0, 1.0) * BINS as f64) as usize).min(BINS - 1)
}

fn bin_center(bin: usize) -> f64 {
    (bin as f64 + 0.5) / BINS as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn map_of(values: Vec<f64>) -> Heatmap2D {
        let n = values.len();
        Heatmap2D::from_parts(n, 1, values, vec![true; n])
    }

    /// Naive oracle: for each of the 255 boundaries, partition the raw
    /// pixel values by bin index and compute the between-class variance
    /// directly.
    fn exhaustive_oracle(values: &[f64]) -> f64 {
        let mut best = (f64::NEG_INFINITY, 0usize);
        for k in 0..BINS - 1 {
            let (mut w0, mut w1, mut s0, mut s1) = (0.0, 0.0, 0.0, 0.0);
            for &v in values {
                let center = bin_center(bin_of(v));
                if bin_of(v) <= k {
                    w0 += 1.0;
                    s0 += center;
                } else {
                    w1 += 1.0;
                    s1 += center;
                }
            }
            if w0 == 0.0 || w1 == 0.0 {
                continue;
            }
            let d = s0 / w0 - s1 / w1;
            let variance = w0 * w1 * d * d;
            if variance > best.0 {
                best = (variance, k);
            }
        }
        (best.1 + 1) as f64 / BINS as f64
    }

    #[test]
    fn bimodal_split_lands_between_the_modes() {
        let mut values = vec![0.2; 50];
        values.extend(vec![0.8; 50]);
        let t = otsu_threshold(&map_of(values)).unwrap();
        assert!(t > 0.2 && t <= 0.8, "threshold {t}");
    }

    #[test]
    fn matches_exhaustive_oracle_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..100 {
            let n = rng.random_range(16..512);
            let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let got = otsu_threshold(&map_of(values.clone())).unwrap();
            let want = exhaustive_oracle(&values);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn whole_bin_offset_shifts_the_boundary_exactly() {
        // An offset of an exact bin multiple shifts the histogram as a
        // block, so the selected boundary must move by exactly that
        // offset. (A fractional-bin offset redistributes bin contents
        // and the argmax of a flat histogram may jump further.)
        let offset = 3.0 / BINS as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        for _ in 0..50 {
            let n = rng.random_range(32..256);
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..0.9)).collect();
            let shifted: Vec<f64> = values.iter().map(|v| v + offset).collect();
            let a = otsu_threshold(&map_of(values)).unwrap();
            let b = otsu_threshold(&map_of(shifted)).unwrap();
            assert!(((b - a) - offset).abs() < 1e-12, "a {a} b {b}");
        }
    }

    #[test]
    fn constant_map_is_degenerate() {
        assert!(matches!(
            otsu_threshold(&map_of(vec![0.5; 64])),
            Err(Error::DegenerateHistogram)
        ));
    }

    #[test]
    fn no_valid_pixels_is_degenerate() {
        let map = Heatmap2D::from_parts(4, 1, vec![0.1, 0.9, 0.4, 0.6], vec![false; 4]);
        assert!(matches!(
            otsu_threshold(&map),
            Err(Error::DegenerateHistogram)
        ));
    }

    #[test]
    fn invalid_pixels_do_not_skew_the_histogram() {
        // Lots of invalid zeros plus a clean bimodal valid region.
        let mut values = vec![0.0; 100];
        let mut valid = vec![false; 100];
        for i in 0..20 {
            values[i] = if i < 10 { 0.3 } else { 0.9 };
            valid[i] = true;
        }
        let map = Heatmap2D::from_parts(100, 1, values, valid);
        let t = otsu_threshold(&map).unwrap();
        assert!(t > 0.3 && t <= 0.9, "threshold {t}");
    }
}
