//! Deterministic numerical building blocks.
//!
//! Everything here is dependency-free on purpose: dense matrices, robust
//! location/scale, symmetric eigendecomposition, Cholesky-based Mahalanobis
//! distances, principal components, and the power-transform calibration used
//! to place farness cutoffs. Summations run in fixed index order so repeated
//! runs produce bit-identical results.

pub mod eigen;
pub mod mat;
pub mod pca;
pub mod robust;
pub mod stats;
pub mod transform;

pub use eigen::{sym_eigen, EigenDecomposition};
pub use mat::{Cholesky, Mat, SymmetricMatrix};
pub use pca::{pca, Pca};
pub use robust::{mad, median, robust_location_scale};
pub use stats::{logist, normal_quantile};
pub use transform::{
    calibrate_farness, calibrate_farness_fixed_lambda, yeo_johnson, yeo_johnson_inverse,
    FarnessCalibration,
};
