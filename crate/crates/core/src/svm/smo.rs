//! Binary soft-margin SVM trained by sequential minimal optimization.
//!
//! The working pair is always the maximal violating pair, chosen with
//! strict comparisons so the first qualifying index wins ties; combined
//! with a fixed iteration budget this makes training fully deterministic.

use crate::error::Error;
use crate::numeric::mat::Mat;
use crate::Result;

/// KKT tolerance: training stops when the most violating pair disagrees by
/// no more than twice this value.
const TOL: f64 = 1e-3;

/// Floor for the second derivative along the working-pair direction.
const ETA_FLOOR: f64 = 1e-12;

/// Multipliers within `BOUND_EPS_REL * cost` of a box edge count as sitting
/// on that edge. Without this slack a multiplier left a few ulps above zero
/// by cancellation still passes the strict movability test, gets picked as
/// half of the working pair, and clips the joint step to that same dust —
/// stalling training while the KKT gap is still wide.
const BOUND_EPS_REL: f64 = 1e-12;

/// A trained binary SVM over rows of a kernel matrix.
///
/// The model stores signed dual coefficients `alpha_y[p] = α_p · y_p` for
/// the support rows `support[p]`; the decision value of any kernel row `t`
/// is `Σ_p alpha_y[p] · K(t, support[p]) + bias`.
#[derive(Debug, Clone)]
pub struct SvmModel {
    /// Kernel-row indices with nonzero dual coefficient.
    pub support: Vec<usize>,
    /// Signed dual coefficients α·y aligned with `support`.
    pub alpha_y: Vec<f64>,
    /// Intercept.
    pub bias: f64,
    /// Box constraint used in training.
    pub cost: f64,
    /// False when training stopped before reaching the KKT tolerance
    /// (iteration budget exhausted, or the best working pair could no
    /// longer move); the model then holds the best iterate found.
    pub converged: bool,
    /// Number of working-pair updates performed.
    pub iterations: usize,
}

impl SvmModel {
    /// Decision value of kernel row `t`.
    pub fn decision_value(&self, kernel: &Mat, t: usize) -> f64 {
        let mut sum = self.bias;
        for (p, &idx) in self.support.iter().enumerate() {
            sum += self.alpha_y[p] * kernel.get(t, idx);
        }
        sum
    }

    /// Decision values for every row of the kernel matrix.
    pub fn decision_values(&self, kernel: &Mat) -> Vec<f64> {
        (0..kernel.rows())
            .map(|t| self.decision_value(kernel, t))
            .collect()
    }
}

/// Train on the kernel rows listed in `indices`, whose signed labels `y`
/// (+1 or -1) are aligned with `indices`. Rows outside `indices` take no
/// part in training but can be scored afterwards.
pub fn train_svm_smo(
    kernel: &Mat,
    indices: &[usize],
    y: &[f64],
    cost: f64,
) -> Result<SvmModel> {
    let m = indices.len();
    if y.len() != m {
        return Err(Error::InvalidInput(format!(
            "{} labels for {m} training rows",
            y.len()
        )));
    }
    if !(cost > 0.0) {
        return Err(Error::InvalidInput(format!("cost must be > 0, got {cost}")));
    }
    if !y.iter().any(|&v| v == 1.0) || !y.iter().any(|&v| v == -1.0) {
        return Err(Error::InvalidInput(
            "training needs both classes present".into(),
        ));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidInput("labels must be +1 or -1".into()));
    }

    let k = |p: usize, q: usize| kernel.get(indices[p], indices[q]);
    let bound_eps = BOUND_EPS_REL * cost;
    let at_lower = move |a: f64| a <= bound_eps;
    let at_upper = move |a: f64| a >= cost - bound_eps;
    let mut alpha = vec![0.0f64; m];
    // f[p] = Σ_q α_q y_q K(p, q), the decision value without bias; starts at
    // zero because all α do.
    let mut f = vec![0.0f64; m];

    // Budget: each update touches two kernel rows of length m.
    let max_iter = (10_000_000usize / (2 * m).max(1)).max(1000);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        // Most violating pair: the smallest error reachable by moving up
        // and the largest reachable by moving down.
        let mut i_up: Option<usize> = None;
        let mut b_up = f64::INFINITY;
        let mut i_low: Option<usize> = None;
        let mut b_low = f64::NEG_INFINITY;
        for p in 0..m {
            let e = f[p] - y[p];
            let can_up =
                (y[p] > 0.0 && !at_upper(alpha[p])) || (y[p] < 0.0 && !at_lower(alpha[p]));
            let can_low =
                (y[p] < 0.0 && !at_upper(alpha[p])) || (y[p] > 0.0 && !at_lower(alpha[p]));
            if can_up && e < b_up {
                b_up = e;
                i_up = Some(p);
            }
            if can_low && e > b_low {
                b_low = e;
                i_low = Some(p);
            }
        }
        let (i, j) = match (i_up, i_low) {
            (Some(i), Some(j)) => (i, j),
            _ => {
                converged = true;
                break;
            }
        };
        if b_low - b_up <= 2.0 * TOL {
            converged = true;
            break;
        }

        let e_i = f[i] - y[i];
        let e_j = f[j] - y[j];
        let eta = (k(i, i) + k(j, j) - 2.0 * k(i, j)).max(ETA_FLOOR);

        let (lo, hi) = if y[i] != y[j] {
            (
                (alpha[j] - alpha[i]).max(0.0),
                (cost + alpha[j] - alpha[i]).min(cost),
            )
        } else {
            (
                (alpha[i] + alpha[j] - cost).max(0.0),
                (alpha[i] + alpha[j]).min(cost),
            )
        };

        let unclipped = alpha[j] + y[j] * (e_i - e_j) / eta;
        let new_j = unclipped.clamp(lo, hi);
        let delta_j = new_j - alpha[j];
        if delta_j.abs() < 1e-14 {
            // The most violating pair can no longer move; further passes
            // would loop on the same pair.
            break;
        }
        let new_i = alpha[i] + y[i] * y[j] * (alpha[j] - new_j);
        let delta_i = new_i - alpha[i];
        alpha[i] = new_i;
        alpha[j] = new_j;
        for (p, fp) in f.iter_mut().enumerate() {
            *fp += delta_i * y[i] * k(p, i) + delta_j * y[j] * k(p, j);
        }
        iterations += 1;
    }
    if iterations >= max_iter {
        converged = false;
    }

    // Intercept: average over free support vectors, else the midpoint of
    // the feasible interval.
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for p in 0..m {
        if !at_lower(alpha[p]) && !at_upper(alpha[p]) {
            free_sum += y[p] - f[p];
            free_count += 1;
        }
    }
    let bias = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        let mut b_up = f64::INFINITY;
        let mut b_low = f64::NEG_INFINITY;
        for p in 0..m {
            let e = f[p] - y[p];
            let can_up =
                (y[p] > 0.0 && !at_upper(alpha[p])) || (y[p] < 0.0 && !at_lower(alpha[p]));
            let can_low =
                (y[p] < 0.0 && !at_upper(alpha[p])) || (y[p] > 0.0 && !at_lower(alpha[p]));
            if can_up {
                b_up = b_up.min(e);
            }
            if can_low {
                b_low = b_low.max(e);
            }
        }
        if b_up.is_finite() && b_low.is_finite() {
            -(b_up + b_low) / 2.0
        } else {
            0.0
        }
    };

    let mut support = Vec::new();
    let mut alpha_y = Vec::new();
    for p in 0..m {
        if !at_lower(alpha[p]) {
            support.push(indices[p]);
            alpha_y.push(alpha[p] * y[p]);
        }
    }
    Ok(SvmModel {
        support,
        alpha_y,
        bias,
        cost,
        converged,
        iterations,
    })
}

/// Map class labels 1 and 2 onto the signs +1 and -1 used in training.
pub fn signed_labels(labels: &[usize]) -> Vec<f64> {
    labels
        .iter()
        .map(|&l| if l == 1 { 1.0 } else { -1.0 })
        .collect()
}
