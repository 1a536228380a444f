//! Class subspaces in kernel feature space: principal-component scores,
//! score distances, orthogonal distances, and the combined farness.
//!
//! Everything is computed from kernel entries alone. A class subspace is
//! the span of its members' centered feature vectors; scores are
//! coordinates on the orthonormal principal axes of that span, and the
//! orthogonal distance is the distance from a point to its projection.

use crate::error::Error;
use crate::numeric::eigen::sym_eigen;
use crate::numeric::mat::{Mat, SymmetricMatrix};
use crate::numeric::robust::{mad, median};
use crate::numeric::transform::{calibrate_farness, FarnessCalibration};
use crate::Result;

/// Eigenvalues below this fraction of the largest are treated as zero and
/// their components discarded.
const COMPONENT_TOL: f64 = 1e-10;

/// Components whose member-score MAD is at or below this fraction of the
/// member-score range cannot be standardized and are left out of the score
/// distance.
const MAD_FLOOR: f64 = 1e-12;

/// Squared orthogonal distances may come out slightly negative by
/// cancellation; values above this (relative) floor are clamped to zero,
/// values below it are reported as numerical errors.
const OD_CLAMP: f64 = 1e-8;

/// Principal-component model of one class in kernel feature space.
#[derive(Debug, Clone)]
pub struct ClassSubspace {
    /// Class label the subspace belongs to (1-based).
    pub class: usize,
    /// Kernel-row indices of the class members.
    pub members: Vec<usize>,
    /// Kept eigenvalues of the centered class kernel, descending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvector matrix (members x kept components).
    weights: Mat,
    /// Row means of the class-restricted kernel.
    row_means: Vec<f64>,
    /// Grand mean of the class-restricted kernel; also the squared norm of
    /// the class center.
    grand_mean: f64,
    /// Median of member scores per kept component.
    score_location: Vec<f64>,
    /// MAD of member scores per kept component.
    score_mad: Vec<f64>,
    /// Components whose MAD sits below the floor; they still span the
    /// subspace but are excluded from the score distance.
    sd_excluded: Vec<bool>,
}

impl ClassSubspace {
    /// Number of kept components.
    pub fn kept(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Principal scores of kernel row `x` on this class's axes.
    pub fn scores(&self, kernel: &Mat, x: usize) -> Vec<f64> {
        let cross_mean = self.cross_mean(kernel, x);
        let mut out = Vec::with_capacity(self.kept());
        for j in 0..self.kept() {
            let mut sum = 0.0;
            for (a, &b) in self.members.iter().enumerate() {
                let centered =
                    kernel.get(x, b) - cross_mean - self.row_means[a] + self.grand_mean;
                sum += self.weights.get(a, j) * centered;
            }
            out.push(sum / self.eigenvalues[j].sqrt());
        }
        out
    }

    /// Mean kernel value between row `x` and the class members.
    fn cross_mean(&self, kernel: &Mat, x: usize) -> f64 {
        let m = self.members.len();
        self.members.iter().map(|&b| kernel.get(x, b)).sum::<f64>() / m as f64
    }

    /// Squared distance from row `x` to the class center in feature space.
    pub fn center_sq_distance(&self, kernel: &Mat, x: usize) -> f64 {
        kernel.get(x, x) - 2.0 * self.cross_mean(kernel, x) + self.grand_mean
    }

    /// Robustly standardized score distance of kernel row `x` from the
    /// class, skipping components that cannot be standardized.
    pub fn score_distance(&self, kernel: &Mat, x: usize) -> f64 {
        let t = self.scores(kernel, x);
        let mut sum = 0.0;
        for j in 0..self.kept() {
            if self.sd_excluded[j] {
                continue;
            }
            let z = (t[j] - self.score_location[j]) / self.score_mad[j];
            sum += z * z;
        }
        sum.sqrt()
    }

    /// Distance from kernel row `x` to its projection on the class
    /// subspace. Zero when the point lies in the span, as every member
    /// does.
    pub fn orthogonal_distance(&self, kernel: &Mat, x: usize) -> Result<f64> {
        let center_sq = self.center_sq_distance(kernel, x);
        let t = self.scores(kernel, x);
        let od2 = center_sq - t.iter().map(|v| v * v).sum::<f64>();
        let floor = -OD_CLAMP * center_sq.abs().max(1.0);
        if od2 < floor {
            return Err(Error::Numeric(format!(
                "squared orthogonal distance {od2} is negative beyond rounding"
            )));
        }
        Ok(od2.max(0.0).sqrt())
    }
}

/// Build the principal-component model of class `class` from the full
/// kernel matrix and the member row indices.
pub fn kpca_class_subspace(kernel: &Mat, class: usize, members: &[usize]) -> Result<ClassSubspace> {
    let m = members.len();
    if m < 2 {
        return Err(Error::InvalidInput(format!(
            "class {class} needs at least 2 members for a subspace, has {m}"
        )));
    }
    let mut row_means = vec![0.0; m];
    for (a, &i) in members.iter().enumerate() {
        row_means[a] = members.iter().map(|&j| kernel.get(i, j)).sum::<f64>() / m as f64;
    }
    let grand_mean = row_means.iter().sum::<f64>() / m as f64;
    let centered = SymmetricMatrix::from_lower_fn(m, |a, b| {
        kernel.get(members[a], members[b]) - row_means[a] - row_means[b] + grand_mean
    });
    let eig = sym_eigen(&centered)?;
    let lambda_max = eig.values.first().copied().unwrap_or(0.0);
    let kept: usize = eig
        .values
        .iter()
        .take_while(|&&v| v > COMPONENT_TOL * lambda_max && v > 0.0)
        .count();

    let eigenvalues: Vec<f64> = eig.values[..kept].to_vec();
    let weights = Mat::from_fn(m, kept, |a, j| eig.vectors.get(a, j));

    let mut subspace = ClassSubspace {
        class,
        members: members.to_vec(),
        eigenvalues,
        weights,
        row_means,
        grand_mean,
        score_location: vec![0.0; kept],
        score_mad: vec![0.0; kept],
        sd_excluded: vec![false; kept],
    };

    // Member scores per component come straight from the eigenpairs:
    // score of member a on component j is sqrt(lambda_j) * w_aj.
    for j in 0..kept {
        let scores: Vec<f64> = (0..m)
            .map(|a| subspace.eigenvalues[j].sqrt() * subspace.weights.get(a, j))
            .collect();
        let loc = median(&scores)?;
        let scale = mad(&scores)?;
        let range = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - scores.iter().copied().fold(f64::INFINITY, f64::min);
        subspace.score_location[j] = loc;
        subspace.score_mad[j] = scale;
        subspace.sd_excluded[j] = scale <= MAD_FLOOR * range;
    }
    Ok(subspace)
}

/// Farness of every object from every class via kernel principal
/// components, raw through normalized.
#[derive(Debug, Clone)]
pub struct SvmFarness {
    /// Robust score distances (n x G), unscaled.
    pub sd: Mat,
    /// Orthogonal distances (n x G), unscaled.
    pub od: Mat,
    /// sqrt(SD'^2 + OD'^2) after the median scalings, before calibration.
    pub raw: Mat,
    /// Per-class calibrations fitted on in-class raw values.
    pub calibrations: Vec<FarnessCalibration>,
    /// Raw columns divided by the calibrated cutoff; 1 flags an outlier.
    pub normalized: Mat,
    /// Degenerate scalings that were dropped, described per event.
    pub warnings: Vec<String>,
}

/// Out-of-class orthogonal distances are genuine only when the class
/// subspaces differ; when they coincide the distances are rounding noise.
/// The noise in a squared distance is amplified by the square root, so the
/// degeneracy test compares the scaling median against this fraction of the
/// largest center distance.
const OD_DEGENERATE: f64 = 1e-5;

/// Score-distance scaling medians are unitless (robustly standardized), so
/// only an essentially exact zero marks degeneracy.
const SD_DEGENERATE: f64 = 1e-9;

/// Compute farness for all objects and classes: per class, score and
/// orthogonal distances; scale score distances by their in-class median and
/// orthogonal distances by their out-of-class median; combine as
/// sqrt(SD^2 + OD^2); calibrate per class so the flagging cutoff is 1.
///
/// A degenerate scaling median (subspaces that coincide, or score
/// distances collapsing to zero) drops that term with a warning instead of
/// dividing by noise.
pub fn svm_farness(
    kernel: &Mat,
    labels: &[usize],
    n_classes: usize,
    quantile: f64,
) -> Result<SvmFarness> {
    let n = kernel.rows();
    let mut subspaces = Vec::with_capacity(n_classes);
    for g in 1..=n_classes {
        let members: Vec<usize> = (0..n).filter(|&i| labels[i] == g).collect();
        if members.is_empty() {
            return Err(Error::EmptyClass(g));
        }
        subspaces.push(kpca_class_subspace(kernel, g, &members)?);
    }

    let mut sd = Mat::zeros(n, n_classes);
    let mut od = Mat::zeros(n, n_classes);
    for (gi, sub) in subspaces.iter().enumerate() {
        for i in 0..n {
            sd.set(i, gi, sub.score_distance(kernel, i));
            od.set(i, gi, sub.orthogonal_distance(kernel, i)?);
        }
    }

    let mut raw = Mat::zeros(n, n_classes);
    let mut warnings = Vec::new();
    for gi in 0..n_classes {
        let in_sd: Vec<f64> = (0..n)
            .filter(|&i| labels[i] == gi + 1)
            .map(|i| sd.get(i, gi))
            .collect();
        let sd_med = median(&in_sd)?;
        let sd_scale_max = (0..n).map(|i| sd.get(i, gi)).fold(0.0f64, f64::max);
        let sd_divisor = if sd_med > SD_DEGENERATE * sd_scale_max.max(1.0) {
            Some(sd_med)
        } else {
            warnings.push(format!(
                "class {}: in-class median score distance is zero; score distances dropped",
                gi + 1
            ));
            None
        };

        let out_od: Vec<f64> = (0..n)
            .filter(|&i| labels[i] != gi + 1)
            .map(|i| od.get(i, gi))
            .collect();
        let center_scale = (0..n)
            .map(|i| subspaces[gi].center_sq_distance(kernel, i).max(0.0).sqrt())
            .fold(0.0f64, f64::max);
        let od_divisor = if out_od.is_empty() {
            None
        } else {
            let od_med = median(&out_od)?;
            if od_med > OD_DEGENERATE * center_scale {
                Some(od_med)
            } else {
                warnings.push(format!(
                    "class {}: class subspaces coincide; orthogonal distances dropped",
                    gi + 1
                ));
                None
            }
        };

        for i in 0..n {
            let mut sum = 0.0;
            if let Some(d) = sd_divisor {
                let v = sd.get(i, gi) / d;
                sum += v * v;
            }
            if let Some(d) = od_divisor {
                let v = od.get(i, gi) / d;
                sum += v * v;
            }
            raw.set(i, gi, sum.sqrt());
        }
    }

    let mut calibrations = Vec::with_capacity(n_classes);
    let mut normalized = Mat::zeros(n, n_classes);
    for gi in 0..n_classes {
        let in_class: Vec<f64> = (0..n)
            .filter(|&i| labels[i] == gi + 1)
            .map(|i| raw.get(i, gi))
            .collect();
        let calib = calibrate_farness(&in_class, quantile)?;
        for i in 0..n {
            normalized.set(i, gi, calib.normalize(raw.get(i, gi)));
        }
        calibrations.push(calib);
    }

    Ok(SvmFarness {
        sd,
        od,
        raw,
        calibrations,
        normalized,
        warnings,
    })
}
