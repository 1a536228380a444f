//! Support vector machine diagnostics: kernels, a deterministic SMO
//! trainer, decision-value label dissimilarity, and farness through class
//! subspaces in kernel feature space.

pub mod kernel;
pub mod kpca;
pub mod smo;

pub use kernel::{compute_kernel, compute_spectrum_kernel, kernel_value, KernelSpec};
pub use kpca::{kpca_class_subspace, svm_farness, ClassSubspace, SvmFarness};
pub use smo::{signed_labels, train_svm_smo, SvmModel};

use crate::ld::ld_scale;

/// Label dissimilarity from binary decision values: the margin counts
/// against the given label, so the raw value is `-d(i)` for class 1 and
/// `+d(i)` for class 2, then rescaled onto [0, 1] with the shared logistic
/// mapping.
pub fn svm_ld(decision_values: &[f64], labels: &[usize]) -> Vec<f64> {
    let raw: Vec<f64> = decision_values
        .iter()
        .zip(labels)
        .map(|(&d, &l)| if l == 1 { -d } else { d })
        .collect();
    ld_scale(&raw)
}

/// Predicted class from a decision value: positive side is class 1, zero
/// and below is class 2.
pub fn svm_predict(decision_value: f64) -> usize {
    if decision_value > 0.0 {
        1
    } else {
        2
    }
}
