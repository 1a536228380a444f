//! k-nearest-neighbor diagnostics on pairwise dissimilarities.
//!
//! Neighborhoods are tie-inflated: every object whose dissimilarity equals
//! the k-th smallest is included, so the effective size k(i) is at least k.
//! Label dissimilarity compares the neighborhood frequency of the given
//! label against its strongest competitor and maps the difference onto
//! [0, 1]. Farness to a class is the median of the k smallest
//! dissimilarities to that class, rescaled by the column median and then
//! calibrated per class so the flagging cutoff sits at 1.

use crate::error::Error;
use crate::numeric::mat::Mat;
use crate::numeric::robust::median;
use crate::numeric::transform::{calibrate_farness, FarnessCalibration};
use crate::Result;

/// Tie-inflated neighborhood of one object.
#[derive(Debug, Clone)]
pub struct Neighborhood {
    /// Object the neighborhood belongs to.
    pub owner: usize,
    /// Neighbor indices in ascending index order; never contains the owner.
    pub members: Vec<usize>,
    /// The k-th smallest dissimilarity from the owner. Every member sits at
    /// or below this value, every non-member strictly above it.
    pub d_star: f64,
}

impl Neighborhood {
    /// Effective neighborhood size k(i) = |N(i)|, at least the requested k.
    pub fn k_effective(&self) -> usize {
        self.members.len()
    }
}

/// Neighborhood label counts and frequencies of one object.
#[derive(Debug, Clone)]
pub struct ClassFrequencies {
    /// Number of neighbors per class, indexed by `g - 1`.
    pub counts: Vec<usize>,
    /// counts / k(i); sums to 1.
    pub phi: Vec<f64>,
}

/// Collect the neighborhood of object `i`: everything at or below the k-th
/// smallest dissimilarity, so exact ties at that value are all included.
///
/// Dissimilarity comparisons are bitwise exact; no tolerance is applied.
pub fn build_neighborhood(diss: &Mat, i: usize, k: usize) -> Result<Neighborhood> {
    let n = diss.rows();
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    order.sort_by(|&a, &b| {
        diss.get(i, a)
            .partial_cmp(&diss.get(i, b))
            .expect("validated dissimilarities are finite")
            .then(a.cmp(&b))
    });
    let d_star = diss.get(i, order[k - 1]);
    let mut members: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&j| diss.get(i, j) <= d_star)
        .collect();
    members.sort_unstable();
    Ok(Neighborhood {
        owner: i,
        members,
        d_star,
    })
}

/// Count neighborhood labels and convert to frequencies.
pub fn class_frequencies(
    nb: &Neighborhood,
    labels: &[usize],
    n_classes: usize,
) -> ClassFrequencies {
    let mut counts = vec![0usize; n_classes];
    for &j in &nb.members {
        counts[labels[j] - 1] += 1;
    }
    let k = nb.k_effective() as f64;
    let phi = counts.iter().map(|&c| c as f64 / k).collect();
    ClassFrequencies { counts, phi }
}

/// Most frequent neighborhood label. Frequency ties go to the tied class
/// whose members in the neighborhood have the lowest average dissimilarity
/// to the owner; any remaining exact tie goes to the smallest class index.
pub fn knn_predict(nb: &Neighborhood, labels: &[usize], diss: &Mat, n_classes: usize) -> usize {
    let freq = class_frequencies(nb, labels, n_classes);
    let top = *freq.counts.iter().max().expect("at least one class");
    let mut best: Option<(usize, f64)> = None;
    for g in 1..=n_classes {
        if freq.counts[g - 1] != top {
            continue;
        }
        let mut sum = 0.0;
        for &j in &nb.members {
            if labels[j] == g {
                sum += diss.get(nb.owner, j);
            }
        }
        let avg = sum / top as f64;
        match best {
            Some((_, best_avg)) if avg >= best_avg => {}
            _ => best = Some((g, avg)),
        }
    }
    best.expect("some class attains the top count").0
}

/// Label dissimilarity of the owner under its given label.
///
/// The raw value is the frequency of the strongest competing label minus
/// the frequency of the given label, in [-1, 1]; it is mapped onto [0, 1]
/// by (raw + 1) / 2. Computed as a single integer ratio
/// (k(i) + ñ - n_given) / (2 k(i)), so with k(i) = 5 the result lands
/// exactly on multiples of 0.1.
pub fn knn_ld(nb: &Neighborhood, labels: &[usize], given: usize, n_classes: usize) -> f64 {
    assert!(n_classes >= 2, "label dissimilarity needs at least 2 classes");
    let freq = class_frequencies(nb, labels, n_classes);
    let n_given = freq.counts[given - 1];
    let strongest_other = freq
        .counts
        .iter()
        .enumerate()
        .filter(|&(g, _)| g != given - 1)
        .map(|(_, &c)| c)
        .max()
        .expect("at least one competing class");
    let k = nb.k_effective();
    (k + strongest_other - n_given) as f64 / (2 * k) as f64
}

/// Farness of every object from every class, raw through normalized.
#[derive(Debug, Clone)]
pub struct KnnFarness {
    /// Medians of the k smallest dissimilarities to each class (n x G).
    pub raw: Mat,
    /// Raw columns divided by their own median over all objects.
    pub scaled: Mat,
    /// Per-class calibrations fitted on the scaled in-class values.
    pub calibrations: Vec<FarnessCalibration>,
    /// Scaled columns divided by the calibrated cutoff; 1 is the flagging
    /// threshold.
    pub normalized: Mat,
}

/// Raw kNN farness: for each object and class, the median of the k smallest
/// dissimilarities to members of that class, the object itself never
/// counting. Classes with fewer than k eligible members contribute all they
/// have rather than failing.
pub fn knn_raw_farness(
    diss: &Mat,
    labels: &[usize],
    n_classes: usize,
    k: usize,
) -> Result<Mat> {
    let n = diss.rows();
    if k == 0 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    let mut raw = Mat::zeros(n, n_classes);
    for g in 1..=n_classes {
        let members: Vec<usize> = (0..n).filter(|&j| labels[j] == g).collect();
        if members.is_empty() {
            return Err(Error::EmptyClass(g));
        }
        for i in 0..n {
            let mut dists: Vec<f64> = members
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| diss.get(i, j))
                .collect();
            if dists.is_empty() {
                // The object is the sole member of its own class; it is the
                // class, so its distance to it is zero.
                raw.set(i, g - 1, 0.0);
                continue;
            }
            dists.sort_by(|a, b| a.partial_cmp(b).expect("finite dissimilarities"));
            dists.truncate(k);
            raw.set(i, g - 1, median(&dists)?);
        }
    }
    Ok(raw)
}

/// Compute kNN farness end to end: raw medians from [`knn_raw_farness`],
/// each column rescaled by its own median, then calibrated per class so the
/// flagging cutoff of every class sits at 1.
pub fn knn_farness(
    diss: &Mat,
    labels: &[usize],
    n_classes: usize,
    k: usize,
    quantile: f64,
) -> Result<KnnFarness> {
    let n = diss.rows();
    let raw = knn_raw_farness(diss, labels, n_classes, k)?;

    let mut scaled = Mat::zeros(n, n_classes);
    for g in 0..n_classes {
        let column: Vec<f64> = (0..n).map(|i| raw.get(i, g)).collect();
        let med = median(&column)?;
        let divisor = if med > 0.0 { med } else { 1.0 };
        for i in 0..n {
            scaled.set(i, g, raw.get(i, g) / divisor);
        }
    }

    let mut calibrations = Vec::with_capacity(n_classes);
    let mut normalized = Mat::zeros(n, n_classes);
    for g in 0..n_classes {
        let in_class: Vec<f64> = (0..n)
            .filter(|&i| labels[i] == g + 1)
            .map(|i| scaled.get(i, g))
            .collect();
        let calib = calibrate_farness(&in_class, quantile)?;
        for i in 0..n {
            normalized.set(i, g, calib.normalize(scaled.get(i, g)));
        }
        calibrations.push(calib);
    }

    Ok(KnnFarness {
        raw,
        scaled,
        calibrations,
        normalized,
    })
}

/// Pairwise euclidean distances of feature rows, as a dissimilarity matrix
/// with an exactly zero diagonal.
pub fn euclidean_dissimilarity(features: &Mat) -> Mat {
    let n = features.rows();
    let mut d = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut sum = 0.0;
            for c in 0..features.cols() {
                let diff = features.get(i, c) - features.get(j, c);
                sum += diff * diff;
            }
            let dist = sum.sqrt();
            d.set(i, j, dist);
            d.set(j, i, dist);
        }
    }
    d
}
