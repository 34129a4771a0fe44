//! Separable Gaussian smoothing with zero padding.

use crate::error::{Error, Result};
use crate::seg::heatmap::Heatmap2D;

/// Smooths the heatmap with a normalized Gaussian kernel of radius
/// `ceil(3*sigma)`, zero padding at the borders. The valid mask is dilated
/// by the kernel footprint.
pub fn gaussian_smooth(map: &Heatmap2D, sigma: f64) -> Result<Heatmap2D> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(sigma > 0.0) {
        return Err(Error::InvalidInput("sigma must be positive".into()));
    }
    let radius = (3.0 * sigma).ceil() as usize;
    let kernel = gaussian_kernel(sigma, radius);
    let (w, h) = (map.width(), map.height());

    // Horizontal pass, then vertical.
    let mut horizontal = vec![0.0; w * h];
    for v in 0..h {
        for u in 0..w {
            let mut acc = 0.0;
            for (k, &weight) in kernel.iter().enumerate() {
                let du = k as isize - radius as isize;
                let uu = u as isize + du;
                if uu >= 0 && (uu as usize) < w {
                    acc += weight * map.values()[v * w + uu as usize];
                }
            }
            horizontal[v * w + u] = acc;
        }
    }
    let mut values = vec![0.0; w * h];
    for v in 0..h {
        for u in 0..w {
            let mut acc = 0.0;
            for (k, &weight) in kernel.iter().enumerate() {
                let dv = k as isize - radius as isize;
                let vv = v as isize + dv;
                if vv >= 0 && (vv as usize) < h {
                    acc += weight * horizontal[vv as usize * w + u];
                }
            }
            values[v * w + u] = acc;
        }
    }

    // Square dilation of the valid mask by the kernel radius, separable
    // as two 1-D max filters.
    let mut horizontal_valid = vec![false; w * h];
    for v in 0..h {
        for u in 0..w {
            let lo = u.saturating_sub(radius);
            let hi = (u + radius).min(w - 1);
            horizontal_valid[v * w + u] = (lo..=hi).any(|uu| map.valid()[v * w + uu]);
        }
    }
    let mut valid = vec![false; w * h];
    for v in 0..h {
        for u in 0..w {
            let lo = v.saturating_sub(radius);
            let hi = (v + radius).min(h - 1);
            valid[v * w + u] = (lo..=hi).any(|vv| horizontal_valid[vv * w + u]);
        }
    }

    Ok(Heatmap2D::from_parts(w, h, values, valid))
}

fn gaussian_kernel(sigma: f64, radius: usize) -> Vec<f64> {
    let mut kernel: Vec<f64> = (0..=2 * radius)
        .map(|k| {
            let d = k as f64 - radius as f64;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = kernel.iter().sum();
    for k in &mut kernel {
        *k /= sum;
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_map(w: usize, h: usize, value: f64) -> Heatmap2D {
        Heatmap2D::from_parts(w, h, vec![value; w * h], vec![true; w * h])
    }

    #[test]
    fn constant_interior_is_unchanged() {
        let map = constant_map(40, 40, 0.6);
        let smoothed = gaussian_smooth(&map, 2.0).unwrap();
        let radius = 6;
        for v in radius..40 - radius {
            for u in radius..40 - radius {
                assert!((smoothed.value(u, v) - 0.6).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn impulse_mass_is_preserved() {
        let mut values = vec![0.0; 41 * 41];
        let mut valid = vec![false; 41 * 41];
        values[20 * 41 + 20] = 1.0;
        valid[20 * 41 + 20] = true;
        let map = Heatmap2D::from_parts(41, 41, values, valid);
        let smoothed = gaussian_smooth(&map, 2.0).unwrap();
        let total: f64 = smoothed.values().iter().sum();
        assert!((total - 1.0).abs() < 1e-6);
        // Kernel symmetry around the impulse.
        assert_eq!(smoothed.value(18, 20), smoothed.value(22, 20));
        assert_eq!(smoothed.value(20, 17), smoothed.value(20, 23));
        assert!(smoothed.value(20, 20) > smoothed.value(21, 20));
    }

    #[test]
    fn matches_dense_convolution_oracle() {
        let (w, h) = (11, 11);
        let mut values = vec![0.0; w * h];
        for (i, v) in values.iter_mut().enumerate() {
            *v = ((i * 37 + 11) % 101) as f64 / 101.0;
        }
        let map = Heatmap2D::from_parts(w, h, values.clone(), vec![true; w * h]);
        let sigma = 1.3;
        let smoothed = gaussian_smooth(&map, sigma).unwrap();

        let radius = (3.0 * sigma).ceil() as isize;
        let kernel_1d = gaussian_kernel(sigma, radius as usize);
        for v in 0..h as isize {
            for u in 0..w as isize {
                let mut acc = 0.0;
                for dv in -radius..=radius {
                    for du in -radius..=radius {
                        let (uu, vv) = (u + du, v + dv);
                        if uu >= 0 && uu < w as isize && vv >= 0 && vv < h as isize {
                            let weight = kernel_1d[(du + radius) as usize]
                                * kernel_1d[(dv + radius) as usize];
                            acc += weight * values[vv as usize * w + uu as usize];
                        }
                    }
                }
                assert!((smoothed.value(u as usize, v as usize) - acc).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn valid_mask_dilates_by_the_footprint() {
        let mut valid = vec![false; 31 * 31];
        valid[15 * 31 + 15] = true;
        let map = Heatmap2D::from_parts(31, 31, vec![0.0; 31 * 31], valid);
        let smoothed = gaussian_smooth(&map, 1.0).unwrap();
        let radius = 3usize;
        for v in 0..31usize {
            for u in 0..31usize {
                let inside = u.abs_diff(15) <= radius && v.abs_diff(15) <= radius;
                assert_eq!(smoothed.is_valid(u, v), inside, "({u}, {v})");
            }
        }
    }

    #[test]
    fn non_positive_sigma_errors() {
        let map = constant_map(4, 4, 0.1);
        assert!(gaussian_smooth(&map, 0.0).is_err());
    }
}
