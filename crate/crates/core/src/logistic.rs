//! Binary logistic regression fitted by iteratively reweighted least
//! squares with step halving, absolute-residual label dissimilarity, and
//! farness dispatched to the Mahalanobis route (low dimension) or the
//! linear-kernel subspace route (high dimension).
//!
//! Classes follow the 0/1 response convention here: the crate's class 1
//! maps to response 1 and class 2 to response 0 (see [`binary_response`]).

use crate::da::{da_farness, train_da, DaMode};
use crate::data::LabeledInput;
use crate::error::Error;
use crate::numeric::{Mat, SymmetricMatrix};
use crate::svm::{compute_kernel, svm_farness, KernelSpec};
use crate::Result;

/// Hard cap on IRLS iterations.
const MAX_ITERATIONS: usize = 100;
/// Convergence threshold on the largest accepted coefficient update.
const COEF_TOL: f64 = 1e-8;
/// A |linear predictor| beyond this flags quasi-separation.
const SEPARATION_BOUND: f64 = 30.0;
/// Ridge penalty applied to the slopes (never the intercept) on refit.
const SEPARATION_RIDGE: f64 = 1e-6;
/// Fitted probabilities are clamped into [PROB_CLAMP, 1 - PROB_CLAMP].
const PROB_CLAMP: f64 = 1e-12;
/// Floor on the IRLS weights so the normal equations stay solvable.
const WEIGHT_FLOOR: f64 = 1e-10;
/// Most step halvings attempted before an iteration gives up.
const MAX_HALVINGS: u32 = 30;

/// Numerically stable logistic function `exp(z) / (1 + exp(z))`.
pub fn logist(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Numerically stable `ln(1 + exp(z))`.
fn log1p_exp(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}

/// Fitted binary logistic model for a 0/1 response.
#[derive(Debug, Clone)]
pub struct LogisticModel {
    /// Intercept term.
    pub intercept: f64,
    /// One slope per input column; dropped constant columns hold 0.
    pub coefficients: Vec<f64>,
    /// Clamped fitted probabilities for the training rows (empty when the
    /// model wraps external coefficients).
    pub fitted: Vec<f64>,
    /// Whether the coefficient updates fell under tolerance in time.
    pub converged: bool,
    /// Ridge penalty that was active (0 unless quasi-separation forced one).
    pub ridge: f64,
    /// Penalized negative log-likelihood after each accepted step, starting
    /// from the all-zero coefficient vector. Never increasing.
    pub objective_path: Vec<f64>,
    /// Human-readable notes, e.g. dropped constant columns.
    pub warnings: Vec<String>,
}

impl LogisticModel {
    /// Wrap externally fitted coefficients (for example from a sparse fit)
    /// so they score through the same machinery as a trained model.
    pub fn from_coefficients(intercept: f64, coefficients: Vec<f64>) -> Self {
        LogisticModel {
            intercept,
            coefficients,
            fitted: Vec::new(),
            converged: true,
            ridge: 0.0,
            objective_path: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Linear predictor `β̂₀ + ⟨x, β̂⟩`.
    pub fn linear_predictor(&self, x: &[f64]) -> f64 {
        assert_eq!(
            x.len(),
            self.coefficients.len(),
            "feature vector length must match the coefficient count"
        );
        self.intercept
            + x.iter()
                .zip(&self.coefficients)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    /// Clamped predicted probability of response 1.
    pub fn probability(&self, x: &[f64]) -> f64 {
        clamp_probability(logist(self.linear_predictor(x)))
    }

    /// Clamped predicted probabilities for every row of `m`.
    pub fn probabilities(&self, m: &Mat) -> Vec<f64> {
        (0..m.rows()).map(|i| self.probability(m.row(i))).collect()
    }
}

struct IrlsFit {
    beta: Vec<f64>,
    fitted: Vec<f64>,
    converged: bool,
    objective_path: Vec<f64>,
}

enum IrlsOutcome {
    Done(IrlsFit),
    Separated,
}

/// One IRLS run over the active columns. With `ridge == 0` the run aborts
/// with [`IrlsOutcome::Separated`] as soon as any linear predictor leaves
/// `[-SEPARATION_BOUND, SEPARATION_BOUND]`; a ridged run never aborts.
fn fit_irls(features: &Mat, active: &[usize], y: &[u8], ridge: f64) -> Result<IrlsOutcome> {
    let n = features.rows();
    let p = active.len();

    let eta_of = |beta: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let row = features.row(i);
                beta[0]
                    + active
                        .iter()
                        .enumerate()
                        .map(|(a, &c)| beta[a + 1] * row[c])
                        .sum::<f64>()
            })
            .collect()
    };
    let objective_of = |beta: &[f64], eta: &[f64]| -> f64 {
        let nll: f64 = eta
            .iter()
            .zip(y)
            .map(|(&e, &yi)| log1p_exp(e) - f64::from(yi) * e)
            .sum();
        nll + 0.5 * ridge * beta[1..].iter().map(|b| b * b).sum::<f64>()
    };

    let mut beta = vec![0.0; p + 1];
    let mut eta = eta_of(&beta);
    let mut objective = objective_of(&beta, &eta);
    let mut objective_path = vec![objective];
    let mut converged = false;

    for _ in 0..MAX_ITERATIONS {
        if ridge == 0.0 && eta.iter().any(|e| e.abs() > SEPARATION_BOUND) {
            return Ok(IrlsOutcome::Separated);
        }
        let pi: Vec<f64> = eta.iter().map(|&e| logist(e)).collect();

        // Gradient of the penalized negative log-likelihood.
        let mut grad = vec![0.0; p + 1];
        for i in 0..n {
            let r = pi[i] - f64::from(y[i]);
            grad[0] += r;
            let row = features.row(i);
            for (a, &c) in active.iter().enumerate() {
                grad[a + 1] += r * row[c];
            }
        }
        for a in 0..p {
            grad[a + 1] += ridge * beta[a + 1];
        }

        // Weighted normal-equations matrix XᵀWX, ridged on the slopes.
        let mut h = SymmetricMatrix::zeros(p + 1);
        for i in 0..n {
            let w = (pi[i] * (1.0 - pi[i])).max(WEIGHT_FLOOR);
            let row = features.row(i);
            h.set(0, 0, h.get(0, 0) + w);
            for (a, &ca) in active.iter().enumerate() {
                h.set(a + 1, 0, h.get(a + 1, 0) + w * row[ca]);
                for (b, &cb) in active.iter().enumerate().take(a + 1) {
                    h.set(a + 1, b + 1, h.get(a + 1, b + 1) + w * row[ca] * row[cb]);
                }
            }
        }
        for a in 1..=p {
            h.set(a, a, h.get(a, a) + ridge);
        }

        let delta = h.ridge_cholesky()?.solve(&grad);

        // Step halving: take the first fraction of the Newton step that does
        // not increase the objective (tiny relative slack for rounding at
        // the optimum).
        let mut accepted = None;
        let mut scale = 1.0;
        for _ in 0..=MAX_HALVINGS {
            let cand: Vec<f64> = beta
                .iter()
                .zip(&delta)
                .map(|(b, d)| b - scale * d)
                .collect();
            let cand_eta = eta_of(&cand);
            let cand_obj = objective_of(&cand, &cand_eta);
            if cand_obj <= objective + 1e-12 * (1.0 + objective.abs()) {
                accepted = Some((cand, cand_eta, cand_obj, scale));
                break;
            }
            scale *= 0.5;
        }
        let Some((new_beta, new_eta, new_obj, taken)) = accepted else {
            break; // no descent step found: stay at the current iterate
        };
        let max_update = delta
            .iter()
            .map(|d| (taken * d).abs())
            .fold(0.0_f64, f64::max);
        beta = new_beta;
        eta = new_eta;
        objective = new_obj;
        objective_path.push(objective);
        if max_update < COEF_TOL {
            converged = true;
            break;
        }
    }

    if ridge == 0.0 && eta.iter().any(|e| e.abs() > SEPARATION_BOUND) {
        return Ok(IrlsOutcome::Separated);
    }
    let fitted = eta.iter().map(|&e| clamp_probability(logist(e))).collect();
    Ok(IrlsOutcome::Done(IrlsFit {
        beta,
        fitted,
        converged,
        objective_path,
    }))
}

/// Fit a binary logistic regression of a 0/1 response on feature columns.
///
/// Constant columns are dropped with a warning and keep coefficient 0.
/// Training first runs unpenalized; if any linear predictor exceeds
/// `SEPARATION_BOUND` in magnitude (quasi-separation) the model is refitted
/// with a small ridge on the slopes so the optimum is finite.
pub fn train_logistic(features: &Mat, y: &[u8]) -> Result<LogisticModel> {
    let n = features.rows();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if y.len() != n {
        return Err(Error::InvalidInput(format!(
            "{n} feature rows but {} responses",
            y.len()
        )));
    }
    if y.iter().any(|&v| v > 1) {
        return Err(Error::InvalidInput("responses must be 0 or 1".into()));
    }
    let ones = y.iter().filter(|&&v| v == 1).count();
    if ones == 0 || ones == n {
        return Err(Error::InvalidInput(
            "both response classes must be present".into(),
        ));
    }

    let d = features.cols();
    let mut active = Vec::new();
    let mut warnings = Vec::new();
    for c in 0..d {
        let first = features.get(0, c);
        if (0..n).all(|i| features.get(i, c) == first) {
            warnings.push(format!(
                "column {c} is constant and was dropped; its coefficient is 0"
            ));
        } else {
            active.push(c);
        }
    }

    let (fit, ridge) = match fit_irls(features, &active, y, 0.0)? {
        IrlsOutcome::Done(fit) => (fit, 0.0),
        IrlsOutcome::Separated => {
            warnings.push(format!(
                "quasi-separation detected (|linear predictor| > {SEPARATION_BOUND}); \
                 refit with ridge {SEPARATION_RIDGE} on the slopes"
            ));
            match fit_irls(features, &active, y, SEPARATION_RIDGE)? {
                IrlsOutcome::Done(fit) => (fit, SEPARATION_RIDGE),
                IrlsOutcome::Separated => unreachable!("a ridged run never aborts"),
            }
        }
    };

    let mut coefficients = vec![0.0; d];
    for (a, &c) in active.iter().enumerate() {
        coefficients[c] = fit.beta[a + 1];
    }
    Ok(LogisticModel {
        intercept: fit.beta[0],
        coefficients,
        fitted: fit.fitted,
        converged: fit.converged,
        ridge,
        objective_path: fit.objective_path,
        warnings,
    })
}

/// Map the crate's 1-based binary class labels to the 0/1 response
/// convention used here: class 1 ↦ response 1, class 2 ↦ response 0.
pub fn binary_response(labels: &[usize]) -> Result<Vec<u8>> {
    labels
        .iter()
        .map(|&l| match l {
            1 => Ok(1),
            2 => Ok(0),
            other => Err(Error::InvalidInput(format!(
                "binary response needs class labels 1 or 2, got {other}"
            ))),
        })
        .collect()
}

/// Absolute-residual label dissimilarity `|y − π̂|`, already in [0, 1].
pub fn logistic_ld(y: u8, pi_hat: f64) -> f64 {
    (f64::from(y) - pi_hat).abs()
}

/// Label dissimilarity for every object.
pub fn logistic_lds(y: &[u8], fitted: &[f64]) -> Vec<f64> {
    y.iter()
        .zip(fitted)
        .map(|(&yi, &p)| logistic_ld(yi, p))
        .collect()
}

/// 0.5-threshold prediction: response 1 exactly when `π̂ > 0.5`.
pub fn logistic_predict(pi_hat: f64) -> u8 {
    u8::from(pi_hat > 0.5)
}

/// Route used for the farness side of the logistic display.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FarnessDispatch {
    /// Mahalanobis distances under one pooled covariance matrix.
    MahalanobisPooled,
    /// Mahalanobis distances under per-class covariance matrices.
    MahalanobisPerClass,
    /// Kernel-subspace route with a linear kernel, for high dimension.
    Kpca,
}

impl FarnessDispatch {
    /// Default rule: the Mahalanobis route needs `d ≤ n_g / 5` for every
    /// class; otherwise the kernel-subspace route is used.
    pub fn default_for(dim: usize, class_sizes: &[usize]) -> Self {
        if class_sizes.iter().all(|&n_g| 5 * dim <= n_g) {
            FarnessDispatch::MahalanobisPooled
        } else {
            FarnessDispatch::Kpca
        }
    }
}

/// Normalized farness for the logistic display.
#[derive(Debug, Clone)]
pub struct LogisticFarness {
    /// Route that produced the values.
    pub dispatch: FarnessDispatch,
    /// Raw (uncalibrated) farness from the underlying route, n x G.
    pub raw: Mat,
    /// n x G farness; the flagging cutoff is 1 in every column.
    pub normalized: Mat,
    /// Notes propagated from the underlying route.
    pub warnings: Vec<String>,
}

/// Farness of every object from each class, delegated to the Mahalanobis
/// route or to the linear-kernel subspace route.
pub fn logistic_farness(
    input: &LabeledInput,
    dispatch: FarnessDispatch,
    quantile: f64,
) -> Result<LogisticFarness> {
    match dispatch {
        FarnessDispatch::MahalanobisPooled | FarnessDispatch::MahalanobisPerClass => {
            let mode = if dispatch == FarnessDispatch::MahalanobisPooled {
                DaMode::Linear
            } else {
                DaMode::Quadratic
            };
            let model = train_da(input, mode)?;
            let far = da_farness(&model, input, quantile)?;
            Ok(LogisticFarness {
                dispatch,
                raw: far.raw,
                normalized: far.normalized,
                warnings: Vec::new(),
            })
        }
        FarnessDispatch::Kpca => {
            let kernel = compute_kernel(&KernelSpec::Linear, input.matrix())?;
            let far = svm_farness(&kernel, input.labels(), input.n_classes(), quantile)?;
            Ok(LogisticFarness {
                dispatch,
                raw: far.raw,
                normalized: far.normalized,
                warnings: far.warnings,
            })
        }
    }
}
