//! Principal component analysis on raw coordinates.

use super::eigen::sym_eigen;
use super::mat::{column_means, covariance, Mat};
use crate::Result;

/// Eigenvalues this far below the largest one count as rank deficiency.
const RANK_TOL: f64 = 1e-12;

/// Fitted principal components.
#[derive(Debug, Clone)]
pub struct Pca {
    /// Column means of the training points.
    pub center: Vec<f64>,
    /// d x k loadings; columns are unit-length principal directions.
    pub loadings: Mat,
    /// n x k scores of the training points.
    pub scores: Mat,
    /// Variances along the kept components (descending).
    pub eigenvalues: Vec<f64>,
    /// Fraction of total variance captured by the kept components.
    pub explained_fraction: f64,
}

impl Pca {
    /// Number of components actually kept (can be below the requested count
    /// when the data has lower rank).
    pub fn n_components(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Project one point onto the kept components.
    pub fn transform_point(&self, x: &[f64]) -> Vec<f64> {
        let d = self.center.len();
        assert_eq!(x.len(), d);
        let centered: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        (0..self.n_components())
            .map(|j| {
                let mut s = 0.0;
                for r in 0..d {
                    s += centered[r] * self.loadings.get(r, j);
                }
                s
            })
            .collect()
    }
}

/// Fit principal components of the rows of `points`.
///
/// At most `n_components` directions are kept; directions whose eigenvalue
/// falls below `1e-12` times the largest are treated as rank deficiency and
/// dropped, so the result can hold fewer components than requested.
pub fn pca(points: &Mat, n_components: usize) -> Result<Pca> {
    let n = points.rows();
    let d = points.cols();
    let center = column_means(points);
    let cov = covariance(points, &center)?;
    let eig = sym_eigen(&cov)?;

    let lambda_max = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let mut kept = 0;
    for &v in eig.values.iter().take(n_components.min(d)) {
        if v > RANK_TOL * lambda_max && v > 0.0 {
            kept += 1;
        } else {
            break;
        }
    }

    let total: f64 = eig.values.iter().map(|&v| v.max(0.0)).sum();
    let captured: f64 = eig.values.iter().take(kept).map(|&v| v.max(0.0)).sum();
    let explained_fraction = if total > 0.0 { captured / total } else { 0.0 };

    let loadings = Mat::from_fn(d, kept, |r, j| eig.vectors.get(r, j));
    let scores = Mat::from_fn(n, kept, |i, j| {
        let row = points.row(i);
        let mut s = 0.0;
        for r in 0..d {
            s += (row[r] - center[r]) * loadings.get(r, j);
        }
        s
    });

    Ok(Pca {
        center,
        loadings,
        scores,
        eigenvalues: eig.values[..kept].to_vec(),
        explained_fraction,
    })
}
