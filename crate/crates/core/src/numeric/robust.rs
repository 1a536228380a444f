//! Robust location and scale estimates.

use crate::error::Error;
use crate::Result;

/// Consistency factor that makes the MAD estimate the standard deviation at
/// the normal distribution (1 / Φ⁻¹(0.75)).
pub const MAD_CONSISTENCY: f64 = 1.4826;

/// Median of a sample; for an even count, the mean of the two central order
/// statistics. Errors on an empty sample.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in median"));
    let n = sorted.len();
    if n % 2 == 1 {
        Ok(sorted[n / 2])
    } else {
        Ok((sorted[n / 2 - 1] + sorted[n / 2]) / 2.0)
    }
}

/// Median absolute deviation about the median, scaled by
/// [`MAD_CONSISTENCY`]. Errors on an empty sample.
pub fn mad(values: &[f64]) -> Result<f64> {
    let med = median(values)?;
    let deviations: Vec<f64> = values.iter().map(|v| (v - med).abs()).collect();
    Ok(MAD_CONSISTENCY * median(&deviations)?)
}

/// Robust location and scale: `(median, mad)` in one call.
pub fn robust_location_scale(values: &[f64]) -> Result<(f64, f64)> {
    Ok((median(values)?, mad(values)?))
}
