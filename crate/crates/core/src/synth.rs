//! Deterministic synthetic instances for demos and the test suite.
//!
//! Every generator is a pure function of its seed (ChaCha8 stream, fixed
//! Box-Muller transform), so an instance name plus a seed pins the data
//! down to the last bit on every platform.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::LabeledInput;
use crate::error::Error;
use crate::numeric::Mat;
use crate::Result;

/// Names accepted by [`instance`], in display order.
pub const INSTANCE_NAMES: &[&str] = &["blobs2", "blobs3", "binary400", "mislabel"];

/// Default seed for generated instances.
pub const DEFAULT_SEED: u64 = 7;

/// Standard normal draws via the Box-Muller transform. The mapping from
/// uniform stream to normals is fixed here rather than delegated, so the
/// emitted instances never change underneath a dependency upgrade.
fn standard_normals(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count + 1);
    while out.len() < count {
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        // 1 - u1 is in (0, 1], keeping the logarithm finite.
        let radius = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (sin, cos) = (2.0 * PI * u2).sin_cos();
        out.push(radius * cos);
        out.push(radius * sin);
    }
    out.truncate(count);
    out
}

/// Spherical Gaussian classes (unit standard deviation) around the given
/// centers, `n_per` objects each, all coordinates from one seeded stream.
pub fn gaussian_classes(centers: &[&[f64]], n_per: usize, seed: u64) -> (Mat, Vec<usize>) {
    let d = centers[0].len();
    assert!(centers.iter().all(|c| c.len() == d), "centers share a dimension");
    let n = centers.len() * n_per;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = standard_normals(&mut rng, n * d);
    let mut rows = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for (c, center) in centers.iter().enumerate() {
        for i in 0..n_per {
            let base = (c * n_per + i) * d;
            for (j, &mu) in center.iter().enumerate() {
                rows.push(mu + noise[base + j]);
            }
            labels.push(c + 1);
        }
    }
    (Mat::from_rows(n, d, rows), labels)
}

/// One spherical Gaussian sample (n x d) centered at the origin, for
/// cutoff-calibration studies.
pub fn single_gaussian(n: usize, d: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Mat::from_rows(n, d, standard_normals(&mut rng, n * d))
}

fn feature_names(d: usize) -> Vec<String> {
    (1..=d).map(|j| format!("x{j}")).collect()
}

fn labeled(matrix: Mat, labels: Vec<usize>, class_names: &[&str]) -> LabeledInput {
    let d = matrix.cols();
    LabeledInput::features(
        matrix,
        labels,
        class_names.iter().map(|s| s.to_string()).collect(),
        feature_names(d),
    )
    .expect("generated instances are valid")
}

/// Two well-separated 2-D Gaussian classes, 60 objects each: a clean
/// binary instance for discriminant analysis, SVM, and logistic runs.
pub fn blobs2(seed: u64) -> LabeledInput {
    let (m, labels) = gaussian_classes(&[&[0.0, 0.0], &[6.0, 0.0]], 60, seed);
    labeled(m, labels, &["left", "right"])
}

/// Three well-separated 2-D Gaussian classes, 40 objects each: a clean
/// instance for one-vs-one voting.
pub fn blobs3(seed: u64) -> LabeledInput {
    let (m, labels) = gaussian_classes(&[&[0.0, 0.0], &[7.0, 0.0], &[0.0, 7.0]], 40, seed);
    labeled(m, labels, &["a", "b", "c"])
}

/// 400 objects in two overlapping 2-D Gaussian classes (200 each, centers
/// 2.5 apart): binary labels with continuous coordinates, so dissimilarity
/// ties do not occur and neighborhood frequencies move in steps of 1/k.
pub fn binary400(seed: u64) -> LabeledInput {
    let (m, labels) = gaussian_classes(&[&[0.0, 0.0], &[2.5, 0.0]], 200, seed);
    labeled(m, labels, &["no", "yes"])
}

/// Indices (1-based) of the objects whose labels [`mislabel`] flips.
pub const MISLABELED_INDICES: [usize; 5] = [3, 97, 214, 350, 481];

/// Two 2-D Gaussian classes of 500 objects at (-4, 0) and (4, 0) with unit
/// standard deviation, then five fixed objects of class 1 relabeled as
/// class 2: a controlled label-noise instance. Returns the input and the
/// 1-based indices of the flipped objects.
pub fn mislabel(seed: u64) -> (LabeledInput, Vec<usize>) {
    let (m, mut labels) = gaussian_classes(&[&[-4.0, 0.0], &[4.0, 0.0]], 500, seed);
    for &idx in &MISLABELED_INDICES {
        labels[idx - 1] = 2;
    }
    (
        labeled(m, labels, &["minus", "plus"]),
        MISLABELED_INDICES.to_vec(),
    )
}

/// Generate a named instance.
pub fn instance(name: &str, seed: u64) -> Result<LabeledInput> {
    match name {
        "blobs2" => Ok(blobs2(seed)),
        "blobs3" => Ok(blobs3(seed)),
        "binary400" => Ok(binary400(seed)),
        "mislabel" => Ok(mislabel(seed).0),
        _ => Err(Error::InvalidInput(format!(
            "unknown instance {name:?}; available: {}",
            INSTANCE_NAMES.join(", ")
        ))),
    }
}

/// Render a feature input as CSV with the labels in a named first column.
/// Numbers use shortest round-trip formatting, so re-ingesting reproduces
/// the exact matrix.
pub fn to_features_csv(input: &LabeledInput, labels_col: &str) -> String {
    let mut out = String::from(labels_col);
    for name in input.feature_names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for i in 0..input.n() {
        out.push_str(&input.class_names()[input.labels()[i] - 1]);
        for j in 0..input.matrix().cols() {
            out.push(',');
            out.push_str(&format!("{}", input.matrix().get(i, j)));
        }
        out.push('\n');
    }
    out
}
