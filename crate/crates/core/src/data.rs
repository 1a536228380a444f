//! Labeled input data and the per-object diagnostic table.

use crate::error::Error;
use crate::numeric::Mat;
use crate::Result;
use serde::{Deserialize, Serialize};

/// What the object-by-object matrix of a [`LabeledInput`] contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    /// n x d coordinates.
    Features,
    /// n x n pairwise dissimilarities.
    Dissimilarity,
    /// n x n kernel (inner product) matrix.
    Kernel,
}

/// Validated labeled objects: a matrix plus dense class labels `1..=G`.
#[derive(Debug, Clone)]
pub struct LabeledInput {
    kind: InputKind,
    matrix: Mat,
    labels: Vec<usize>,
    class_names: Vec<String>,
    feature_names: Vec<String>,
}

/// Relative tolerance when checking that a square input matrix is symmetric.
const SYMMETRY_TOL: f64 = 1e-12;

impl LabeledInput {
    /// Labeled coordinate data (n x d).
    pub fn features(
        matrix: Mat,
        labels: Vec<usize>,
        class_names: Vec<String>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if feature_names.len() != matrix.cols() {
            return Err(Error::InvalidInput(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                matrix.cols()
            )));
        }
        let input = LabeledInput {
            kind: InputKind::Features,
            matrix,
            labels,
            class_names,
            feature_names,
        };
        input.validate_common()?;
        Ok(input)
    }

    /// Labeled pairwise dissimilarities (n x n, symmetric, zero diagonal,
    /// nonnegative). Minor floating-point asymmetry is averaged away.
    pub fn dissimilarity(
        matrix: Mat,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let matrix = symmetrized(matrix, "dissimilarity")?;
        let scale = matrix.max_abs();
        for i in 0..matrix.rows() {
            if matrix.get(i, i).abs() > SYMMETRY_TOL * scale {
                return Err(Error::InvalidInput(format!(
                    "dissimilarity diagonal entry ({i}, {i}) is {}, expected 0",
                    matrix.get(i, i)
                )));
            }
            for j in 0..matrix.cols() {
                if matrix.get(i, j) < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "negative dissimilarity at ({i}, {j})"
                    )));
                }
            }
        }
        let mut matrix = matrix;
        for i in 0..matrix.rows() {
            matrix.set(i, i, 0.0);
        }
        let input = LabeledInput {
            kind: InputKind::Dissimilarity,
            matrix,
            labels,
            class_names,
            feature_names: vec![],
        };
        input.validate_common()?;
        Ok(input)
    }

    /// Labeled kernel matrix (n x n, symmetric).
    pub fn kernel(matrix: Mat, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        let matrix = symmetrized(matrix, "kernel")?;
        let input = LabeledInput {
            kind: InputKind::Kernel,
            matrix,
            labels,
            class_names,
        feature_names: vec![],
        };
        input.validate_common()?;
        Ok(input)
    }

    fn validate_common(&self) -> Result<()> {
        let n = self.matrix.rows();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if !self.matrix.is_finite() {
            return Err(Error::InvalidInput("non-finite entry in data matrix".into()));
        }
        if self.labels.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} objects",
                self.labels.len(),
                n
            )));
        }
        let g = self.class_names.len();
        if g == 0 {
            return Err(Error::InvalidInput("no classes".into()));
        }
        let mut seen = vec![false; g];
        for (i, &label) in self.labels.iter().enumerate() {
            if label < 1 || label > g {
                return Err(Error::InvalidInput(format!(
                    "label {label} of object {i} outside 1..={g}"
                )));
            }
            seen[label - 1] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::EmptyClass(missing + 1));
        }
        Ok(())
    }

    pub fn kind(&self) -> InputKind {
        self.kind
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// Number of objects.
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of classes G.
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Dense labels in `1..=G`.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Feature (column) names; empty unless the input holds coordinates.
    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Indices of the objects in class `g` (1-based class), ascending.
    pub fn class_members(&self, g: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == g).then_some(i))
            .collect()
    }

    /// Member counts per class, indexed by `g - 1`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_classes()];
        for &l in &self.labels {
            sizes[l - 1] += 1;
        }
        sizes
    }
}

fn symmetrized(matrix: Mat, what: &str) -> Result<Mat> {
    if matrix.rows() != matrix.cols() {
        return Err(Error::InvalidInput(format!(
            "{what} matrix is {}x{}, expected square",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let scale = matrix.max_abs().max(1.0);
    let n = matrix.rows();
    let mut out = matrix.clone();
    for i in 0..n {
        for j in 0..i {
            let a = matrix.get(i, j);
            let b = matrix.get(j, i);
            if (a - b).abs() > SYMMETRY_TOL * scale {
                return Err(Error::InvalidInput(format!(
                    "{what} matrix is asymmetric at ({i}, {j}): {a} vs {b}"
                )));
            }
            let v = 0.5 * (a + b);
            out.set(i, j, v);
            out.set(j, i, v);
        }
    }
    Ok(out)
}

/// Map raw label strings to dense `1..=G` in order of first appearance,
/// returning the mapped labels and the class names.
pub fn map_labels(raw: &[String]) -> (Vec<usize>, Vec<String>) {
    let mut names: Vec<String> = Vec::new();
    let mut mapped = Vec::with_capacity(raw.len());
    for r in raw {
        let id = match names.iter().position(|n| n == r) {
            Some(p) => p + 1,
            None => {
                names.push(r.clone());
                names.len()
            }
        };
        mapped.push(id);
    }
    (mapped, names)
}

/// Diagnostics for one object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    /// 1-based object index in input order.
    pub index: usize,
    /// Given class label in `1..=G`.
    pub given: usize,
    /// Label the classifier would assign.
    pub predicted: usize,
    /// Label dissimilarity in [0, 1]; above 0.5 means the classifier
    /// disagrees with the given label.
    pub ld: f64,
    /// Normalized farness from each class (cutoff at 1), length G.
    pub farness: Vec<f64>,
    /// Overall outlyingness: the smallest entry of `farness`.
    pub outlyingness: f64,
    /// True when the object is far from every class (`outlyingness > 1`).
    pub outlier: bool,
    /// Farness before cutoff normalization, length G.
    pub farness_raw: Vec<f64>,
}

/// Per-object diagnostics for a whole data set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticTable {
    /// Which classifier produced the table ("da", "knn", "svm", "logistic",
    /// "vote").
    pub classifier: String,
    /// Class names in label order.
    pub class_names: Vec<String>,
    /// Quantile at which the farness cutoffs were calibrated.
    pub quantile: f64,
    pub rows: Vec<DiagnosticRow>,
}

/// Confusion counts plus per-class outlier counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionSummary {
    /// `counts[g - 1][h - 1]` objects with given class g and predicted
    /// class h.
    pub counts: Vec<Vec<usize>>,
    /// `outlier_counts[g - 1][h - 1]` outliers among those objects, so a
    /// display can carve them out of their predicted segment.
    pub outlier_counts: Vec<Vec<usize>>,
    /// Outliers among the objects of each given class (row sums of
    /// `outlier_counts`).
    pub outliers_per_class: Vec<usize>,
}

impl DiagnosticTable {
    /// Assemble a table from per-object results, deriving outlyingness and
    /// the outlier flag from the normalized farness rows.
    pub fn assemble(
        classifier: &str,
        class_names: Vec<String>,
        quantile: f64,
        given: &[usize],
        predicted: &[usize],
        ld: &[f64],
        farness: &Mat,
        farness_raw: &Mat,
    ) -> Self {
        let n = given.len();
        assert_eq!(predicted.len(), n);
        assert_eq!(ld.len(), n);
        assert_eq!(farness.rows(), n);
        assert_eq!(farness.cols(), class_names.len());
        let rows = (0..n)
            .map(|i| {
                let f: Vec<f64> = farness.row(i).to_vec();
                let outlyingness = f.iter().copied().fold(f64::INFINITY, f64::min);
                DiagnosticRow {
                    index: i + 1,
                    given: given[i],
                    predicted: predicted[i],
                    ld: ld[i],
                    farness: f,
                    outlyingness,
                    outlier: outlyingness > 1.0,
                    farness_raw: farness_raw.row(i).to_vec(),
                }
            })
            .collect();
        DiagnosticTable {
            classifier: classifier.to_string(),
            class_names,
            quantile,
            rows,
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Fraction of objects whose predicted label differs from the given one.
    pub fn misclassification_rate(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let wrong = self
            .rows
            .iter()
            .filter(|r| r.predicted != r.given)
            .count();
        wrong as f64 / self.rows.len() as f64
    }

    /// Confusion counts (given x predicted) and outliers per given class.
    pub fn build_confusion(&self) -> ConfusionSummary {
        let g = self.n_classes();
        let mut counts = vec![vec![0usize; g]; g];
        let mut outlier_counts = vec![vec![0usize; g]; g];
        let mut outliers = vec![0usize; g];
        for row in &self.rows {
            counts[row.given - 1][row.predicted - 1] += 1;
            if row.outlier {
                outlier_counts[row.given - 1][row.predicted - 1] += 1;
                outliers[row.given - 1] += 1;
            }
        }
        ConfusionSummary {
            counts,
            outlier_counts,
            outliers_per_class: outliers,
        }
    }

    /// CSV rendering with header
    /// `index,given,predicted,LD,f_1..f_G,O,outlier`.
    pub fn to_csv_string(&self) -> String {
        let g = self.n_classes();
        let mut out = String::from("index,given,predicted,LD");
        for j in 1..=g {
            out.push_str(&format!(",f_{j}"));
        }
        out.push_str(",O,outlier\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}",
                row.index, row.given, row.predicted, row.ld
            ));
            for v in &row.farness {
                out.push_str(&format!(",{v}"));
            }
            out.push_str(&format!(",{},{}\n", row.outlyingness, row.outlier));
        }
        out
    }

    /// Pretty-printed JSON rendering.
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_table() -> DiagnosticTable {
        let farness = Mat::from_rows(
            4,
            2,
            vec![0.2, 1.5, 1.2, 1.1, 0.4, 0.9, 2.0, 3.0],
        );
        let raw = farness.clone();
        DiagnosticTable::assemble(
            "da",
            vec!["a".into(), "b".into()],
            0.995,
            &[1, 1, 2, 2],
            &[1, 2, 2, 1],
            &[0.1, 0.8, 0.3, 0.9],
            &farness,
            &raw,
        )
    }

    #[test]
    fn labels_must_cover_every_class() {
        let m = Mat::from_rows(3, 1, vec![1.0, 2.0, 3.0]);
        // Class 2 never appears.
        let err = LabeledInput::features(
            m,
            vec![1, 1, 3],
            vec!["a".into(), "b".into(), "c".into()],
            vec!["x".into()],
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyClass(2)));
    }

    #[test]
    fn labels_must_stay_in_range() {
        let m = Mat::from_rows(2, 1, vec![1.0, 2.0]);
        let err =
            LabeledInput::features(m, vec![1, 4], vec!["a".into()], vec!["x".into()]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn dissimilarity_validation() {
        let ok = Mat::from_rows(2, 2, vec![0.0, 1.0, 1.0, 0.0]);
        assert!(LabeledInput::dissimilarity(ok, vec![1, 2], vec!["a".into(), "b".into()]).is_ok());

        let asym = Mat::from_rows(2, 2, vec![0.0, 1.0, 2.0, 0.0]);
        assert!(
            LabeledInput::dissimilarity(asym, vec![1, 2], vec!["a".into(), "b".into()]).is_err()
        );

        let negative = Mat::from_rows(2, 2, vec![0.0, -1.0, -1.0, 0.0]);
        assert!(
            LabeledInput::dissimilarity(negative, vec![1, 2], vec!["a".into(), "b".into()])
                .is_err()
        );

        let diag = Mat::from_rows(2, 2, vec![0.5, 1.0, 1.0, 0.0]);
        assert!(
            LabeledInput::dissimilarity(diag, vec![1, 2], vec!["a".into(), "b".into()]).is_err()
        );
    }

    #[test]
    fn map_labels_uses_first_appearance_order() {
        let raw: Vec<String> = ["setosa", "virginica", "setosa", "versicolor", "virginica"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let (labels, names) = map_labels(&raw);
        assert_eq!(labels, vec![1, 2, 1, 3, 2]);
        assert_eq!(names, vec!["setosa", "virginica", "versicolor"]);
    }

    #[test]
    fn outlyingness_is_row_minimum() {
        let t = toy_table();
        assert_eq!(t.rows[0].outlyingness, 0.2);
        assert!(!t.rows[0].outlier);
        // Row 2: farness (1.2, 1.1), minimum 1.1 > 1 so it is an outlier.
        assert_eq!(t.rows[1].outlyingness, 1.1);
        assert!(t.rows[1].outlier);
        assert_eq!(t.rows[3].outlyingness, 2.0);
        assert!(t.rows[3].outlier);
    }

    #[test]
    fn confusion_counts_by_hand() {
        let t = toy_table();
        let c = t.build_confusion();
        // given 1: predicted (1, 2); given 2: predicted (2, 1).
        assert_eq!(c.counts, vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(c.outliers_per_class, vec![1, 1]);
        assert_eq!(t.misclassification_rate(), 0.5);
    }

    #[test]
    fn csv_header_shape() {
        let t = toy_table();
        let csv = t.to_csv_string();
        let first = csv.lines().next().unwrap();
        assert_eq!(first, "index,given,predicted,LD,f_1,f_2,O,outlier");
        assert_eq!(csv.lines().count(), 5);
        let second = csv.lines().nth(1).unwrap();
        assert_eq!(second, "1,1,1,0.1,0.2,1.5,0.2,false");
    }

    #[test]
    fn json_round_trip_is_identity() {
        let t = toy_table();
        let json = t.to_json_string().unwrap();
        let back: DiagnosticTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        // And serializing again yields the same bytes.
        assert_eq!(back.to_json_string().unwrap(), json);
    }

    #[test]
    fn class_membership_helpers() {
        let m = Mat::from_rows(5, 1, vec![0.0; 5]);
        let input = LabeledInput::features(
            m,
            vec![1, 2, 1, 2, 2],
            vec!["a".into(), "b".into()],
            vec!["x".into()],
        )
        .unwrap();
        assert_eq!(input.class_members(1), vec![0, 2]);
        assert_eq!(input.class_members(2), vec![1, 3, 4]);
        assert_eq!(input.class_sizes(), vec![2, 3]);
    }
}
