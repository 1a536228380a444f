//! Gaussian discriminant analysis: per-class (quadratic) or pooled (linear)
//! covariance models, class log-likelihoods, raw label-dissimilarity
//! margins, and Mahalanobis farness.

use crate::data::{InputKind, LabeledInput};
use crate::error::Error;
use crate::numeric::mat::{covariance, mahalanobis_prefactored};
use crate::numeric::transform::{calibrate_farness, FarnessCalibration};
use crate::numeric::{Cholesky, Mat, SymmetricMatrix};
use crate::Result;

/// Covariance structure of the Gaussian model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DaMode {
    /// One pooled covariance matrix shared by all classes.
    Linear,
    /// A separate covariance matrix per class.
    Quadratic,
}

/// One fitted class: mean, covariance (with its Cholesky factor), and prior.
#[derive(Debug, Clone)]
pub struct ClassGaussian {
    pub mean: Vec<f64>,
    pub cov: SymmetricMatrix,
    chol: Cholesky,
    pub prior: f64,
}

/// Fitted discriminant model.
#[derive(Debug, Clone)]
pub struct DaModel {
    pub mode: DaMode,
    pub dim: usize,
    pub classes: Vec<ClassGaussian>,
}

/// Fit a discriminant model on coordinate input.
///
/// Quadratic mode needs every class to have at least `d + 1` members;
/// linear mode pools the within-class covariance with divisor `n - G`.
pub fn train_da(input: &LabeledInput, mode: DaMode) -> Result<DaModel> {
    if input.kind() != InputKind::Features {
        return Err(Error::InvalidInput(
            "discriminant analysis needs coordinate input".into(),
        ));
    }
    let m = input.matrix();
    let n = input.n();
    let d = m.cols();
    let g_count = input.n_classes();

    let mut means = Vec::with_capacity(g_count);
    let mut member_lists = Vec::with_capacity(g_count);
    for g in 1..=g_count {
        let members = input.class_members(g);
        let mut mean = vec![0.0; d];
        for &i in &members {
            for (j, v) in m.row(i).iter().enumerate() {
                mean[j] += v;
            }
        }
        for v in &mut mean {
            *v /= members.len() as f64;
        }
        means.push(mean);
        member_lists.push(members);
    }

    let covariances: Vec<SymmetricMatrix> = match mode {
        DaMode::Quadratic => {
            let mut covs = Vec::with_capacity(g_count);
            for g in 1..=g_count {
                let members = &member_lists[g - 1];
                if members.len() < d + 1 {
                    return Err(Error::ClassTooSmallForQda {
                        class: g,
                        size: members.len(),
                        dim: d,
                    });
                }
                let pts = Mat::from_fn(members.len(), d, |r, c| m.get(members[r], c));
                covs.push(covariance(&pts, &means[g - 1])?);
            }
            covs
        }
        DaMode::Linear => {
            if n <= g_count {
                return Err(Error::DegenerateClass {
                    class: 0,
                    size: n,
                    needed: g_count + 1,
                });
            }
            // Pooled within-class scatter with divisor n - G.
            let mut pooled = SymmetricMatrix::zeros(d);
            for g in 1..=g_count {
                let mean = &means[g - 1];
                for &i in &member_lists[g - 1] {
                    let row = m.row(i);
                    for a in 0..d {
                        for b in 0..=a {
                            let v = pooled.get(a, b) + (row[a] - mean[a]) * (row[b] - mean[b]);
                            pooled.set(a, b, v);
                        }
                    }
                }
            }
            let div = (n - g_count) as f64;
            let mut scaled = SymmetricMatrix::zeros(d);
            for a in 0..d {
                for b in 0..=a {
                    scaled.set(a, b, pooled.get(a, b) / div);
                }
            }
            vec![scaled; g_count]
        }
    };

    let mut classes = Vec::with_capacity(g_count);
    for g in 0..g_count {
        let cov = covariances[g].clone();
        let chol = cov.ridge_cholesky()?;
        classes.push(ClassGaussian {
            mean: means[g].clone(),
            cov,
            chol,
            prior: member_lists[g].len() as f64 / n as f64,
        });
    }

    Ok(DaModel {
        mode,
        dim: d,
        classes,
    })
}

impl DaModel {
    /// Gaussian log-likelihood of membership in each class:
    /// `ln p̂_g - (d/2) ln 2π - ½ ln det Σ̂_g - ½ MD²(x, μ̂_g, Σ̂_g)`.
    pub fn log_likelihoods(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim as f64;
        let half_log_tau = 0.5 * d * (2.0 * std::f64::consts::PI).ln();
        self.classes
            .iter()
            .map(|c| {
                let md = mahalanobis_prefactored(x, &c.mean, &c.chol);
                c.prior.ln() - half_log_tau - 0.5 * c.chol.log_det() - 0.5 * md * md
            })
            .collect()
    }

    /// Log-likelihoods for every row of `m`, as an n x G matrix.
    pub fn log_likelihood_matrix(&self, m: &Mat) -> Mat {
        let g = self.classes.len();
        let mut out = Mat::zeros(m.rows(), g);
        for i in 0..m.rows() {
            let ell = self.log_likelihoods(m.row(i));
            for (j, v) in ell.iter().enumerate() {
                out.set(i, j, *v);
            }
        }
        out
    }

    /// Mahalanobis farness of every row from every class (n x G).
    pub fn farness_raw(&self, m: &Mat) -> Mat {
        let g = self.classes.len();
        Mat::from_fn(m.rows(), g, |i, j| {
            let c = &self.classes[j];
            mahalanobis_prefactored(m.row(i), &c.mean, &c.chol)
        })
    }
}

/// Mahalanobis farness of every object from every class, raw through
/// normalized.
#[derive(Debug, Clone)]
pub struct DaFarness {
    /// Raw Mahalanobis distances, n x G.
    pub raw: Mat,
    /// Per-class calibrations fitted on the in-class raw distances.
    pub calibrations: Vec<FarnessCalibration>,
    /// Raw columns divided by the calibrated cutoff; 1 is the flagging
    /// threshold.
    pub normalized: Mat,
}

/// Raw Mahalanobis distances calibrated per class so the flagging cutoff
/// sits at 1.
pub fn da_farness(model: &DaModel, input: &LabeledInput, quantile: f64) -> Result<DaFarness> {
    let raw = model.farness_raw(input.matrix());
    let n = input.n();
    let g_count = model.classes.len();
    let mut calibrations = Vec::with_capacity(g_count);
    let mut normalized = Mat::zeros(n, g_count);
    for g in 0..g_count {
        let in_class: Vec<f64> = (0..n)
            .filter(|&i| input.labels()[i] == g + 1)
            .map(|i| raw.get(i, g))
            .collect();
        let calib = calibrate_farness(&in_class, quantile)?;
        for i in 0..n {
            normalized.set(i, g, calib.normalize(raw.get(i, g)));
        }
        calibrations.push(calib);
    }
    Ok(DaFarness {
        raw,
        calibrations,
        normalized,
    })
}

/// Class assignment by maximum log-likelihood. A tie goes to the given
/// label when it attains the maximum, else to the smallest class index
/// attaining it.
pub fn predict_with_given(ell: &[f64], given: usize) -> usize {
    let max = ell.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if ell[given - 1] == max {
        return given;
    }
    ell.iter().position(|&v| v == max).unwrap() + 1
}

/// Raw label-dissimilarity margin from the class log-likelihoods.
///
/// When the given class does not attain the maximum, the margin is
/// `max_g ℓ(x, g) - ℓ(x, given)` (positive). When it does, the margin is
/// the runner-up excluding the given class minus `ℓ(x, given)`
/// (nonpositive). Needs at least two classes.
pub fn da_ld_raw(ell: &[f64], given: usize) -> f64 {
    assert!(ell.len() >= 2, "label dissimilarity needs at least 2 classes");
    let own = ell[given - 1];
    let max = ell.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if own != max {
        return max - own;
    }
    let second = ell
        .iter()
        .enumerate()
        .filter(|&(g, _)| g != given - 1)
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    second - own
}
