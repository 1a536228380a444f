//! Shared rescaling of raw label-dissimilarity margins onto [0, 1].

use crate::numeric::{logist, median};

/// Map raw margins to label dissimilarities via
/// `LD(i) = logist(raw(i) / median_j |raw(j)|)`.
///
/// A zero margin maps to 0.5, positive margins (classifier prefers another
/// class) land above 0.5, negative ones below. When the median of the
/// absolute margins is zero the divisor falls back to the smallest positive
/// magnitude; if every margin is zero, every LD is 0.5.
pub fn ld_scale(raw: &[f64]) -> Vec<f64> {
    if raw.is_empty() {
        return vec![];
    }
    let magnitudes: Vec<f64> = raw.iter().map(|v| v.abs()).collect();
    let mut divisor = median(&magnitudes).expect("non-empty margins");
    if divisor == 0.0 {
        divisor = magnitudes
            .iter()
            .copied()
            .filter(|&m| m > 0.0)
            .fold(f64::INFINITY, f64::min);
        if !divisor.is_finite() {
            // All margins are exactly zero.
            return vec![0.5; raw.len()];
        }
    }
    raw.iter().map(|&v| logist(v / divisor)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_margin_maps_to_half() {
        let ld = ld_scale(&[0.0, 1.0, -1.0, 2.0]);
        assert_eq!(ld[0], 0.5);
    }

    #[test]
    fn margin_equal_to_median_magnitude_maps_to_logistic_of_one() {
        // |margins| = [2, 2, 2, 4]: median 2, so a margin of +2 maps to
        // logist(1) = e/(1+e) = 0.731058...
        let ld = ld_scale(&[2.0, -2.0, 2.0, 4.0]);
        assert!((ld[0] - 0.7310585786300049).abs() < 1e-4);
        assert!((ld[1] - (1.0 - 0.7310585786300049)).abs() < 1e-4);
    }

    #[test]
    fn signs_split_around_half() {
        let ld = ld_scale(&[3.0, -0.5, 0.2, -7.0]);
        assert!(ld[0] > 0.5);
        assert!(ld[1] < 0.5);
        assert!(ld[2] > 0.5);
        assert!(ld[3] < 0.5);
    }

    #[test]
    fn infinite_margin_saturates() {
        let ld = ld_scale(&[f64::NEG_INFINITY, 1.0, -1.0]);
        assert_eq!(ld[0], 0.0);
    }

    #[test]
    fn zero_median_falls_back_to_smallest_positive() {
        // Magnitudes [0, 0, 0, 1, 2]: median 0, smallest positive 1.
        let ld = ld_scale(&[0.0, 0.0, 0.0, 1.0, -2.0]);
        assert_eq!(ld[0], 0.5);
        assert!((ld[3] - logist_ref(1.0)).abs() < 1e-12);
        assert!((ld[4] - logist_ref(-2.0)).abs() < 1e-12);
    }

    #[test]
    fn all_zero_margins_give_all_half() {
        assert_eq!(ld_scale(&[0.0, 0.0, 0.0]), vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn output_stays_in_unit_interval() {
        let raw = [-1e9, -3.0, -1e-9, 0.0, 1e-9, 5.0, 1e9];
        for v in ld_scale(&raw) {
            assert!((0.0..=1.0).contains(&v));
        }
    }

    fn logist_ref(z: f64) -> f64 {
        1.0 / (1.0 + (-z).exp())
    }
}
