//! Kernel functions: linear, polynomial, radial basis, and a substring
//! spectrum kernel for raw text.

use std::collections::HashMap;

use crate::error::Error;
use crate::numeric::mat::Mat;
use crate::Result;

/// Which kernel to evaluate, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// Plain inner product.
    Linear,
    /// (gamma * <x, y> + coef0)^degree.
    Polynomial { gamma: f64, coef0: f64, degree: u32 },
    /// exp(-gamma * ||x - y||^2).
    Rbf { gamma: f64 },
    /// Inner product of overlapping substring counts of the given length,
    /// case-folded.
    Spectrum { length: usize },
    /// The caller supplies the kernel matrix directly.
    Precomputed,
}

impl KernelSpec {
    /// Check parameter constraints: positive gamma, degree and substring
    /// length at least 1.
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear | KernelSpec::Precomputed => Ok(()),
            KernelSpec::Polynomial { gamma, degree, .. } => {
                if !(gamma > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "polynomial kernel needs gamma > 0, got {gamma}"
                    )));
                }
                if degree < 1 {
                    return Err(Error::InvalidInput("polynomial degree must be >= 1".into()));
                }
                Ok(())
            }
            KernelSpec::Rbf { gamma } => {
                if !(gamma > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "rbf kernel needs gamma > 0, got {gamma}"
                    )));
                }
                Ok(())
            }
            KernelSpec::Spectrum { length } => {
                if length < 1 {
                    return Err(Error::InvalidInput(
                        "spectrum substring length must be >= 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Evaluate a vector kernel on two feature rows.
pub fn kernel_value(spec: &KernelSpec, a: &[f64], b: &[f64]) -> f64 {
    match *spec {
        KernelSpec::Linear => dot(a, b),
        KernelSpec::Polynomial {
            gamma,
            coef0,
            degree,
        } => (gamma * dot(a, b) + coef0).powi(degree as i32),
        KernelSpec::Rbf { gamma } => (-gamma * squared_distance(a, b)).exp(),
        KernelSpec::Spectrum { .. } | KernelSpec::Precomputed => {
            unreachable!("not a vector kernel")
        }
    }
}

/// Kernel matrix of a feature matrix under a vector kernel. The result is
/// exactly symmetric (each pair is evaluated once and mirrored).
pub fn compute_kernel(spec: &KernelSpec, features: &Mat) -> Result<Mat> {
    spec.validate()?;
    match spec {
        KernelSpec::Spectrum { .. } => Err(Error::InvalidInput(
            "spectrum kernel applies to strings, not feature vectors".into(),
        )),
        KernelSpec::Precomputed => Err(Error::InvalidInput(
            "precomputed kernel must be supplied as an input matrix".into(),
        )),
        _ => {
            if !features.is_finite() {
                return Err(Error::InvalidInput(
                    "non-finite feature value in kernel computation".into(),
                ));
            }
            let n = features.rows();
            let mut k = Mat::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = kernel_value(spec, features.row(i), features.row(j));
                    k.set(i, j, v);
                    k.set(j, i, v);
                }
            }
            Ok(k)
        }
    }
}

/// Overlapping substring counts of length `p` over the case-folded bytes of
/// `text`. An empty or too-short string yields an empty count table.
fn substring_counts(text: &str, p: usize) -> HashMap<Vec<u8>, u64> {
    let folded: Vec<u8> = text.bytes().map(|b| b.to_ascii_lowercase()).collect();
    let mut counts = HashMap::new();
    if folded.len() >= p {
        for window in folded.windows(p) {
            *counts.entry(window.to_vec()).or_insert(0u64) += 1;
        }
    }
    counts
}

/// Spectrum kernel matrix over raw strings: K(i, j) is the inner product of
/// the two substring count vectors. Counts are accumulated in integers, so
/// the result is exact and independent of summation order.
pub fn compute_spectrum_kernel(texts: &[String], length: usize) -> Result<Mat> {
    KernelSpec::Spectrum { length }.validate()?;
    let tables: Vec<HashMap<Vec<u8>, u64>> = texts
        .iter()
        .map(|t| substring_counts(t, length))
        .collect();
    let n = texts.len();
    let mut k = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            // Iterate over the smaller table for speed; the sum of integer
            // products is order-free.
            let (small, large) = if tables[i].len() <= tables[j].len() {
                (&tables[i], &tables[j])
            } else {
                (&tables[j], &tables[i])
            };
            let mut acc: u64 = 0;
            for (sub, &c) in small {
                if let Some(&d) = large.get(sub) {
                    acc += c * d;
                }
            }
            k.set(i, j, acc as f64);
            k.set(j, i, acc as f64);
        }
    }
    Ok(k)
}
