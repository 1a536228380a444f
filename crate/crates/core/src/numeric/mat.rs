//! Dense row-major matrices, exactly-symmetric matrices, and Cholesky
//! factorization with automatic ridge escalation.

use crate::error::Error;
use crate::Result;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    /// Matrix filled with zeros.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Matrix from a closure evaluated at every `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Matrix from row-major data; `data.len()` must equal `rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Borrow row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// All entries in row-major order.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `self * v` for a vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc = 0.0;
                for j in 0..self.cols {
                    acc += row[j] * v[j];
                }
                acc
            })
            .collect()
    }

    /// Largest absolute entry (0 for an empty matrix).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Symmetric matrix with exact entry-level symmetry: `get(i, j)` and
/// `get(j, i)` return the same stored value.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    /// Lower triangle in row-major order: entry (i, j) with j <= i lives at
    /// index i * (i + 1) / 2 + j.
    lower: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            dim,
            lower: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    /// Build from a closure evaluated only on the lower triangle (`j <= i`),
    /// which guarantees symmetry by construction.
    pub fn from_lower_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymmetricMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                m.lower[i * (i + 1) / 2 + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.lower[r * (r + 1) / 2 + c]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.lower[r * (r + 1) / 2 + c] = v;
    }

    /// Mean of the diagonal entries.
    pub fn mean_diagonal(&self) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        let mut s = 0.0;
        for i in 0..self.dim {
            s += self.get(i, i);
        }
        s / self.dim as f64
    }

    pub fn is_finite(&self) -> bool {
        self.lower.iter().all(|v| v.is_finite())
    }

    /// Expand to a dense matrix.
    pub fn to_mat(&self) -> Mat {
        Mat::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Cholesky factorization with ridge escalation.
    ///
    /// A diagonal ridge `eps * mean(diag)` is always added before
    /// factorizing, starting at `eps = 1e-10`. If a pivot drops below
    /// `1e-300` the ridge is escalated tenfold, up to `eps = 1e-6`; past
    /// that the matrix is reported as singular.
    pub fn ridge_cholesky(&self) -> Result<Cholesky> {
        let mean_diag = self.mean_diagonal();
        let mut eps = 1e-10;
        while eps <= 1e-6 * (1.0 + 1e-12) {
            if let Some(chol) = cholesky_attempt(self, eps * mean_diag) {
                return Ok(chol);
            }
            eps *= 10.0;
        }
        Err(Error::SingularCovariance)
    }
}

/// Pivot floor below which a Cholesky factorization is refused; keeps the
/// log-determinant finite.
const MIN_PIVOT: f64 = 1e-300;

fn cholesky_attempt(a: &SymmetricMatrix, ridge: f64) -> Option<Cholesky> {
    let n = a.dim();
    let mut l = Mat::zeros(n, n);
    let mut log_det = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a.get(i, j);
            if i == j {
                sum += ridge;
            }
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if !(sum > MIN_PIVOT) || !sum.is_finite() {
                    return None;
                }
                let piv = sum.sqrt();
                l.set(i, j, piv);
                log_det += 2.0 * piv.ln();
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Some(Cholesky { l, log_det })
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`, plus
/// `log det A = 2 Σ ln L_ii`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Mat,
    log_det: f64,
}

impl Cholesky {
    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    pub fn factor(&self) -> &Mat {
        &self.l
    }

    /// Solve `L z = b` by forward substitution.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut z = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l.get(i, k) * z[k];
            }
            z[i] = s / self.l.get(i, i);
        }
        z
    }

    /// Solve `A x = b` via forward then backward substitution.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let z = self.solve_lower(b);
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in i + 1..n {
                s -= self.l.get(k, i) * x[k];
            }
            x[i] = s / self.l.get(i, i);
        }
        x
    }

    /// Squared Mahalanobis-type quadratic form `diffᵀ A⁻¹ diff`.
    pub fn quad_form_inv(&self, diff: &[f64]) -> f64 {
        let z = self.solve_lower(diff);
        z.iter().map(|v| v * v).sum()
    }
}

/// Mahalanobis distance of `x` from `center` under covariance `cov`.
///
/// The covariance is factorized with [`SymmetricMatrix::ridge_cholesky`];
/// the distance is `sqrt((x - center)ᵀ cov⁻¹ (x - center))`.
pub fn mahalanobis(x: &[f64], center: &[f64], cov: &SymmetricMatrix) -> Result<f64> {
    let chol = cov.ridge_cholesky()?;
    Ok(mahalanobis_prefactored(x, center, &chol))
}

/// Mahalanobis distance reusing an existing factorization.
pub fn mahalanobis_prefactored(x: &[f64], center: &[f64], chol: &Cholesky) -> f64 {
    assert_eq!(x.len(), center.len());
    assert_eq!(x.len(), chol.dim());
    let diff: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
    chol.quad_form_inv(&diff).max(0.0).sqrt()
}

/// Sample covariance of the rows of `points` about `center`, with divisor
/// `n - 1`. Needs at least two rows.
pub fn covariance(points: &Mat, center: &[f64]) -> Result<SymmetricMatrix> {
    let n = points.rows();
    let d = points.cols();
    assert_eq!(center.len(), d);
    if n < 2 {
        return Err(Error::DegenerateClass {
            class: 0,
            size: n,
            needed: 2,
        });
    }
    let mut cov = SymmetricMatrix::zeros(d);
    for i in 0..d {
        for j in 0..=i {
            let mut s = 0.0;
            for r in 0..n {
                let row = points.row(r);
                s += (row[i] - center[i]) * (row[j] - center[j]);
            }
            cov.set(i, j, s / (n - 1) as f64);
        }
    }
    Ok(cov)
}

/// Column means of `points`.
pub fn column_means(points: &Mat) -> Vec<f64> {
    let n = points.rows();
    let d = points.cols();
    let mut m = vec![0.0; d];
    for r in 0..n {
        let row = points.row(r);
        for j in 0..d {
            m[j] += row[j];
        }
    }
    if n > 0 {
        for v in &mut m {
            *v /= n as f64;
        }
    }
    m
}
