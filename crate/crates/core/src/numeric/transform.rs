//! Farness cutoff calibration.
//!
//! Raw farness values are nonnegative and usually right-skewed, so a plain
//! quantile of a normal fit would misplace the cutoff. Instead the sample is
//! rescaled by its own robust scale, pushed through a Yeo-Johnson power
//! transform whose exponent is chosen to make the central part of the
//! distribution as Gaussian as possible, and the cutoff is placed at a
//! normal quantile of the transformed values and mapped back. Dividing a
//! farness column by this cutoff puts the flagging threshold at exactly 1.

use super::robust::{mad, median, robust_location_scale};
use super::stats::normal_quantile;
use crate::error::Error;
use crate::Result;

/// Search interval for the power-transform exponent.
const LAMBDA_RANGE: (f64, f64) = (-4.0, 4.0);

/// Fraction trimmed from each tail before fitting the exponent, so extreme
/// values cannot drag the transform away from the central bulk.
const TRIM_FRACTION: f64 = 0.05;

/// Below this magnitude the exponent is treated as zero (logarithmic
/// branch); both directions of the transform use the same cut.
const LAMBDA_ZERO_TOL: f64 = 1e-12;

/// Yeo-Johnson power transform with exponent `lambda`.
///
/// Strictly increasing in `x` for every `lambda`, with `yeo_johnson(0, λ) = 0`
/// and identity at `λ = 1` (exact for nonnegative and negative inputs alike).
pub fn yeo_johnson(x: f64, lambda: f64) -> f64 {
    if lambda == 1.0 {
        return x;
    }
    if x >= 0.0 {
        if lambda.abs() < LAMBDA_ZERO_TOL {
            x.ln_1p()
        } else {
            // ((1 + x)^λ - 1) / λ, via expm1/ln_1p for small-argument accuracy.
            (lambda * x.ln_1p()).exp_m1() / lambda
        }
    } else {
        let two_minus = 2.0 - lambda;
        if two_minus.abs() < LAMBDA_ZERO_TOL {
            -(-x).ln_1p()
        } else {
            -((two_minus * (-x).ln_1p()).exp_m1()) / two_minus
        }
    }
}

/// Inverse of [`yeo_johnson`] in its first argument.
pub fn yeo_johnson_inverse(y: f64, lambda: f64) -> f64 {
    if lambda == 1.0 {
        return y;
    }
    if y >= 0.0 {
        if lambda.abs() < LAMBDA_ZERO_TOL {
            y.exp_m1()
        } else {
            // (1 + λy)^(1/λ) - 1; outside the transform's range this yields
            // NaN, which callers must reject.
            let base = lambda * y;
            if base <= -1.0 {
                return f64::NAN;
            }
            (base.ln_1p() / lambda).exp_m1()
        }
    } else {
        let two_minus = 2.0 - lambda;
        if two_minus.abs() < LAMBDA_ZERO_TOL {
            -(-y).exp_m1()
        } else {
            let base = -two_minus * y;
            if base <= -1.0 {
                return f64::NAN;
            }
            -(base.ln_1p() / two_minus).exp_m1()
        }
    }
}

/// Result of calibrating a raw farness sample.
///
/// The fitted transform chain is `T(x) = s · ψ(x / s, λ)` with robust
/// pre-scale `s` and Yeo-Johnson `ψ`; `location` and `scale` are the median
/// and MAD of the transformed sample, and
/// `cutoff = T⁻¹(location + scale · Φ⁻¹(quantile))`. Dividing raw values by
/// `cutoff` yields normalized farness with the flagging threshold at 1.
#[derive(Debug, Clone)]
pub struct FarnessCalibration {
    /// Fitted (or imposed) Yeo-Johnson exponent.
    pub lambda: f64,
    /// Robust pre-scale applied before the power transform.
    pub pre_scale: f64,
    /// Median of the transformed sample.
    pub location: f64,
    /// MAD of the transformed sample.
    pub scale: f64,
    /// Probability at which the cutoff is placed.
    pub quantile: f64,
    /// Cutoff in raw farness units; always finite and positive.
    pub cutoff: f64,
}

impl FarnessCalibration {
    /// Forward transform `T(x) = s · ψ(x / s, λ)` (exact identity at λ = 1).
    pub fn transform_value(&self, x: f64) -> f64 {
        if self.lambda == 1.0 {
            x
        } else {
            self.pre_scale * yeo_johnson(x / self.pre_scale, self.lambda)
        }
    }

    /// Inverse transform `T⁻¹(y) = s · ψ⁻¹(y / s, λ)`.
    pub fn inverse_transform_value(&self, y: f64) -> f64 {
        if self.lambda == 1.0 {
            y
        } else {
            self.pre_scale * yeo_johnson_inverse(y / self.pre_scale, self.lambda)
        }
    }

    /// Normalize one raw farness value.
    pub fn normalize(&self, x: f64) -> f64 {
        x / self.cutoff
    }
}

fn validate_farness_sample(values: &[f64]) -> Result<()> {
    if values.len() < 10 {
        return Err(Error::TooFewValues {
            got: values.len(),
            needed: 10,
        });
    }
    for &v in values {
        if !v.is_finite() {
            return Err(Error::InvalidInput("non-finite farness value".into()));
        }
        if v < 0.0 {
            return Err(Error::InvalidInput(format!("negative farness value {v}")));
        }
    }
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return Err(Error::DegenerateFarness("all values equal".into()));
    }
    Ok(())
}

/// Robust pre-scale of a nonnegative, not-all-equal sample: MAD, falling
/// back to the median and then the mean when the preceding estimate is zero.
fn robust_pre_scale(values: &[f64]) -> f64 {
    let s = mad(values).expect("validated sample");
    if s > 0.0 {
        return s;
    }
    let m = median(values).expect("validated sample");
    if m > 0.0 {
        return m;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Central order statistics with `TRIM_FRACTION` removed from each tail.
fn trimmed_sorted(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("validated sample"));
    let cut = (TRIM_FRACTION * sorted.len() as f64).floor() as usize;
    sorted[cut..sorted.len() - cut].to_vec()
}

/// Gaussian profile log-likelihood of the transformed central sample,
/// up to constants that do not depend on `lambda`.
fn profile_log_likelihood(central: &[f64], jacobian_sum: f64, lambda: f64) -> f64 {
    let m = central.len() as f64;
    let mut mean = 0.0;
    let transformed: Vec<f64> = central.iter().map(|&u| yeo_johnson(u, lambda)).collect();
    for &t in &transformed {
        mean += t;
    }
    mean /= m;
    let mut var = 0.0;
    for &t in &transformed {
        var += (t - mean) * (t - mean);
    }
    var /= m;
    if !(var > 0.0) || !var.is_finite() {
        return f64::NEG_INFINITY;
    }
    -0.5 * m * var.ln() + (lambda - 1.0) * jacobian_sum
}

/// Golden-section maximization over `range`; deterministic fixed iteration
/// count, returning the best evaluated point.
fn fit_lambda(central: &[f64], range: (f64, f64)) -> f64 {
    let jacobian_sum: f64 = central.iter().map(|&u| u.ln_1p()).sum();
    let ll = |lambda: f64| profile_log_likelihood(central, jacobian_sum, lambda);

    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = range;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = ll(x1);
    let mut f2 = ll(x2);
    let mut best = (x1, f1);
    if f2 > best.1 {
        best = (x2, f2);
    }
    for _ in 0..60 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = ll(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = ll(x2);
        }
        if f1 > best.1 {
            best = (x1, f1);
        }
        if f2 > best.1 {
            best = (x2, f2);
        }
    }
    best.0
}

/// Calibrate a raw farness sample at the given quantile (for example 0.995),
/// fitting the power-transform exponent on the central 90% of the sample.
///
/// A negative exponent bounds the transform from above, and for very
/// heavy-tailed samples the requested quantile can land beyond that bound,
/// leaving no finite cutoff. When that happens the exponent is refitted over
/// `[0, 4]`, where the transform is unbounded above and a cutoff always
/// exists; the unconstrained fit is kept whenever it is usable.
pub fn calibrate_farness(values: &[f64], quantile: f64) -> Result<FarnessCalibration> {
    validate_farness_sample(values)?;
    let pre_scale = robust_pre_scale(values);
    let scaled: Vec<f64> = values.iter().map(|&v| v / pre_scale).collect();
    let central = trimmed_sorted(&scaled);
    if central.iter().all(|&v| v == central[0]) {
        return Err(Error::DegenerateFarness(
            "central 90% of values are all equal".into(),
        ));
    }
    let lambda = fit_lambda(&central, LAMBDA_RANGE);
    match finish_calibration(values, quantile, pre_scale, lambda) {
        Err(_) if lambda < 0.0 => {
            let lambda = fit_lambda(&central, (0.0, LAMBDA_RANGE.1));
            finish_calibration(values, quantile, pre_scale, lambda)
        }
        other => other,
    }
}

/// Calibrate with an imposed exponent instead of fitting it; `lambda = 1`
/// keeps raw units and places the cutoff at `location + scale · Φ⁻¹(q)`.
pub fn calibrate_farness_fixed_lambda(
    values: &[f64],
    quantile: f64,
    lambda: f64,
) -> Result<FarnessCalibration> {
    validate_farness_sample(values)?;
    let pre_scale = robust_pre_scale(values);
    finish_calibration(values, quantile, pre_scale, lambda)
}

fn finish_calibration(
    values: &[f64],
    quantile: f64,
    pre_scale: f64,
    lambda: f64,
) -> Result<FarnessCalibration> {
    if !(quantile > 0.0 && quantile < 1.0) {
        return Err(Error::InvalidInput(format!(
            "quantile must lie strictly between 0 and 1, got {quantile}"
        )));
    }
    let mut calib = FarnessCalibration {
        lambda,
        pre_scale,
        location: 0.0,
        scale: 0.0,
        quantile,
        cutoff: 1.0,
    };
    let transformed: Vec<f64> = values.iter().map(|&v| calib.transform_value(v)).collect();
    let (location, mut scale) = robust_location_scale(&transformed)?;
    if scale == 0.0 {
        // More than half the transformed values tie; fall back to the
        // classical standard deviation before giving up.
        let mean = transformed.iter().sum::<f64>() / transformed.len() as f64;
        let var = transformed
            .iter()
            .map(|&t| (t - mean) * (t - mean))
            .sum::<f64>()
            / (transformed.len() - 1) as f64;
        scale = var.sqrt();
        if scale == 0.0 {
            return Err(Error::DegenerateFarness(
                "transformed values have zero spread".into(),
            ));
        }
    }
    calib.location = location;
    calib.scale = scale;
    let cutoff = calib.inverse_transform_value(location + scale * normal_quantile(quantile));
    if !cutoff.is_finite() || cutoff <= 0.0 {
        return Err(Error::DegenerateFarness(format!(
            "calibrated cutoff {cutoff} is not a positive finite value"
        )));
    }
    calib.cutoff = cutoff;
    Ok(calib)
}
