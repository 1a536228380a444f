//! End-to-end runs: train one classifier family on a labeled input and
//! assemble the per-object diagnostic table.
//!
//! Each `run_*` function owns the family's plumbing — which input kinds it
//! accepts, how predictions and label dissimilarities are computed, and
//! which farness route applies — and returns the same artifact: a
//! [`DiagnosticTable`] plus any warnings worth surfacing. The table's
//! `farness_raw` column always holds the values the cutoff calibration was
//! fitted on (pre-normalization), whatever the family calls them.

use crate::da::{da_farness, da_ld_raw, predict_with_given, train_da, DaMode};
use crate::data::{DiagnosticTable, InputKind, LabeledInput};
use crate::error::Error;
use crate::knn::{build_neighborhood, euclidean_dissimilarity, knn_farness, knn_ld, knn_predict};
use crate::ld::ld_scale;
use crate::logistic::{
    binary_response, logistic_farness, logistic_lds, logistic_predict, train_logistic,
    FarnessDispatch, LogisticModel,
};
use crate::numeric::Mat;
use crate::svm::{
    compute_kernel, signed_labels, svm_farness, svm_ld, svm_predict, train_svm_smo, KernelSpec,
};
use crate::voting::{svm_one_vs_one, voting_lds, voting_predict};
use crate::Result;

/// Result of one classifier run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Per-object diagnostics, ready for export and plotting.
    pub table: DiagnosticTable,
    /// Non-fatal notes (dropped farness terms, fallbacks, ...).
    pub warnings: Vec<String>,
}

fn require_features(input: &LabeledInput, what: &str) -> Result<()> {
    if input.kind() != InputKind::Features {
        return Err(Error::InvalidInput(format!(
            "{what} needs coordinate (feature) input"
        )));
    }
    Ok(())
}

fn require_binary(input: &LabeledInput, what: &str) -> Result<()> {
    let g = input.n_classes();
    if g != 2 {
        return Err(Error::InvalidInput(format!(
            "{what} handles exactly 2 classes, got {g}; use one-vs-one voting for more"
        )));
    }
    Ok(())
}

/// Resolve the kernel matrix a kernel-based run works on: compute it from
/// features, or take the input's own matrix when it already is a kernel.
fn kernel_for(input: &LabeledInput, spec: &KernelSpec) -> Result<Mat> {
    match (input.kind(), spec) {
        (InputKind::Kernel, KernelSpec::Precomputed) => Ok(input.matrix().clone()),
        (InputKind::Kernel, _) => Err(Error::InvalidInput(
            "the input already is a kernel matrix; drop the kernel options".into(),
        )),
        (InputKind::Features, KernelSpec::Precomputed) => Err(Error::InvalidInput(
            "a precomputed kernel was requested but the input holds features".into(),
        )),
        (InputKind::Features, spec) => compute_kernel(spec, input.matrix()),
        (InputKind::Dissimilarity, _) => Err(Error::InvalidInput(
            "kernel methods need features or a kernel matrix, not dissimilarities".into(),
        )),
    }
}

/// Linear or quadratic discriminant analysis: log-likelihood margins for
/// the label dissimilarity, Mahalanobis distances for farness.
pub fn run_da(input: &LabeledInput, mode: DaMode, quantile: f64) -> Result<RunOutput> {
    require_features(input, "discriminant analysis")?;
    let model = train_da(input, mode)?;
    let ll = model.log_likelihood_matrix(input.matrix());
    let labels = input.labels();
    let mut predicted = Vec::with_capacity(input.n());
    let mut ld_raw = Vec::with_capacity(input.n());
    for i in 0..input.n() {
        let ell = ll.row(i);
        predicted.push(predict_with_given(ell, labels[i]));
        ld_raw.push(da_ld_raw(ell, labels[i]));
    }
    let ld = ld_scale(&ld_raw);
    let far = da_farness(&model, input, quantile)?;
    Ok(RunOutput {
        table: DiagnosticTable::assemble(
            "da",
            input.class_names().to_vec(),
            quantile,
            labels,
            &predicted,
            &ld,
            &far.normalized,
            &far.raw,
        ),
        warnings: Vec::new(),
    })
}

/// k-nearest neighbors on a dissimilarity matrix (computed from features
/// when needed): tie-inflated neighborhood frequencies for the label
/// dissimilarity, neighborhood medians for farness.
pub fn run_knn(input: &LabeledInput, k: usize, quantile: f64) -> Result<RunOutput> {
    let diss = match input.kind() {
        InputKind::Features => euclidean_dissimilarity(input.matrix()),
        InputKind::Dissimilarity => input.matrix().clone(),
        InputKind::Kernel => {
            return Err(Error::InvalidInput(
                "nearest neighbors needs features or dissimilarities, not a kernel".into(),
            ))
        }
    };
    let labels = input.labels();
    let g = input.n_classes();
    let mut predicted = Vec::with_capacity(input.n());
    let mut ld = Vec::with_capacity(input.n());
    for i in 0..input.n() {
        let nb = build_neighborhood(&diss, i, k)?;
        predicted.push(knn_predict(&nb, labels, &diss, g));
        ld.push(knn_ld(&nb, labels, labels[i], g));
    }
    let far = knn_farness(&diss, labels, g, k, quantile)?;
    Ok(RunOutput {
        table: DiagnosticTable::assemble(
            "knn",
            input.class_names().to_vec(),
            quantile,
            labels,
            &predicted,
            &ld,
            &far.normalized,
            &far.scaled,
        ),
        warnings: Vec::new(),
    })
}

/// Binary support vector machine: decision-value margins for the label
/// dissimilarity, per-class kernel subspace distances for farness.
pub fn run_svm(
    input: &LabeledInput,
    spec: &KernelSpec,
    cost: f64,
    quantile: f64,
) -> Result<RunOutput> {
    require_binary(input, "the binary SVM")?;
    let kernel = kernel_for(input, spec)?;
    let labels = input.labels();
    let indices: Vec<usize> = (0..input.n()).collect();
    let model = train_svm_smo(&kernel, &indices, &signed_labels(labels), cost)?;
    let mut warnings = Vec::new();
    if !model.converged {
        warnings.push(format!(
            "SVM training stopped before reaching its tolerance after {} updates; using the best iterate",
            model.iterations
        ));
    }
    let decisions = model.decision_values(&kernel);
    let ld = svm_ld(&decisions, labels);
    let predicted: Vec<usize> = decisions.iter().map(|&d| svm_predict(d)).collect();
    let far = svm_farness(&kernel, labels, 2, quantile)?;
    warnings.extend(far.warnings);
    Ok(RunOutput {
        table: DiagnosticTable::assemble(
            "svm",
            input.class_names().to_vec(),
            quantile,
            labels,
            &predicted,
            &ld,
            &far.normalized,
            &far.raw,
        ),
        warnings,
    })
}

/// Binary logistic regression: absolute probability residuals for the
/// label dissimilarity; farness through the Mahalanobis route in low
/// dimension or the linear-kernel subspace route otherwise, overridable.
///
/// When `coefficients` is given the model is not trained: the named values
/// (with `intercept` for the constant term) are used as-is, and features
/// without a coefficient get 0 — externally fitted sparse models plug in
/// this way.
pub fn run_logistic(
    input: &LabeledInput,
    dispatch: Option<FarnessDispatch>,
    coefficients: Option<&[(String, f64)]>,
    quantile: f64,
) -> Result<RunOutput> {
    require_features(input, "logistic regression")?;
    require_binary(input, "logistic regression")?;
    let y = binary_response(input.labels())?;
    let (model, mut warnings) = match coefficients {
        None => {
            let model = train_logistic(input.matrix(), &y)?;
            let warnings = model.warnings.clone();
            (model, warnings)
        }
        Some(pairs) => (
            model_from_named_coefficients(input.feature_names(), pairs)?,
            Vec::new(),
        ),
    };
    let fitted = model.probabilities(input.matrix());
    let ld = logistic_lds(&y, &fitted);
    // Response 1 is class 1, response 0 is class 2.
    let predicted: Vec<usize> = fitted
        .iter()
        .map(|&p| if logistic_predict(p) == 1 { 1 } else { 2 })
        .collect();
    let dispatch = dispatch.unwrap_or_else(|| {
        FarnessDispatch::default_for(input.matrix().cols(), &input.class_sizes())
    });
    let far = logistic_farness(input, dispatch, quantile)?;
    warnings.extend(far.warnings);
    Ok(RunOutput {
        table: DiagnosticTable::assemble(
            "logistic",
            input.class_names().to_vec(),
            quantile,
            input.labels(),
            &predicted,
            &ld,
            &far.normalized,
            &far.raw,
        ),
        warnings,
    })
}

fn model_from_named_coefficients(
    feature_names: &[String],
    pairs: &[(String, f64)],
) -> Result<LogisticModel> {
    let mut intercept = 0.0;
    let mut coefficients = vec![0.0; feature_names.len()];
    for (name, value) in pairs {
        if name == "intercept" {
            intercept = *value;
            continue;
        }
        match feature_names.iter().position(|f| f == name) {
            Some(j) => coefficients[j] = *value,
            None => {
                return Err(Error::InvalidInput(format!(
                    "unknown coefficient name {name:?}; known features: intercept, {}",
                    feature_names.join(", ")
                )))
            }
        }
    }
    Ok(LogisticModel::from_coefficients(intercept, coefficients))
}

/// One-vs-one majority voting with a binary SVM per class pair: vote
/// margins for the label dissimilarity, kernel subspace farness by default
/// (Mahalanobis routes available for feature input).
///
/// With 2 classes the ensemble is the single binary SVM, so the run
/// delegates to [`run_svm`] and says so.
pub fn run_vote(
    input: &LabeledInput,
    spec: &KernelSpec,
    cost: f64,
    dispatch: Option<FarnessDispatch>,
    quantile: f64,
) -> Result<RunOutput> {
    if input.n_classes() == 2 {
        let mut out = run_svm(input, spec, cost, quantile)?;
        out.warnings.push(
            "2 classes: one-vs-one voting reduces to the binary SVM, reported as such".into(),
        );
        return Ok(out);
    }
    let kernel = kernel_for(input, spec)?;
    let labels = input.labels();
    let g = input.n_classes();
    let votes = svm_one_vs_one(&kernel, labels, g, cost)?;
    let ld = voting_lds(&votes, labels);
    let predicted: Vec<usize> = (0..input.n())
        .map(|i| voting_predict(votes.votes(i)))
        .collect();
    let (raw, normalized, warnings) = match dispatch {
        None | Some(FarnessDispatch::Kpca) => {
            let far = svm_farness(&kernel, labels, g, quantile)?;
            (far.raw, far.normalized, far.warnings)
        }
        Some(route) => {
            let far = logistic_farness(input, route, quantile)?;
            (far.raw, far.normalized, far.warnings)
        }
    };
    Ok(RunOutput {
        table: DiagnosticTable::assemble(
            "vote",
            input.class_names().to_vec(),
            quantile,
            labels,
            &predicted,
            &ld,
            &normalized,
            &raw,
        ),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut state = seed;
        move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        }
    }

    /// Well-separated blobs in 2-D: `centers.len()` classes, `n_per`
    /// objects each, noise amplitude well below the center spacing.
    fn blobs(centers: &[(f64, f64)], n_per: usize, seed: u64) -> LabeledInput {
        let mut next = lcg(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (c, &(cx, cy)) in centers.iter().enumerate() {
            for _ in 0..n_per {
                rows.push(cx + 0.5 * next());
                rows.push(cy + 0.5 * next());
                labels.push(c + 1);
            }
        }
        let names = (0..centers.len()).map(|c| format!("c{}", c + 1)).collect();
        LabeledInput::features(
            Mat::from_rows(centers.len() * n_per, 2, rows),
            labels,
            names,
            vec!["x1".into(), "x2".into()],
        )
        .unwrap()
    }

    fn two_blobs() -> LabeledInput {
        blobs(&[(0.0, 0.0), (8.0, 0.0)], 20, 7)
    }

    #[test]
    fn da_on_separated_blobs_is_clean_and_valid() {
        let input = two_blobs();
        let out = run_da(&input, DaMode::Quadratic, 0.995).unwrap();
        assert_eq!(out.table.classifier, "da");
        assert_eq!(out.table.misclassification_rate(), 0.0);
        for row in &out.table.rows {
            assert!(row.ld < 0.5, "clean object with ld {}", row.ld);
            assert_eq!(row.farness.len(), 2);
            let min = row.farness.iter().copied().fold(f64::INFINITY, f64::min);
            assert_eq!(row.outlyingness, min);
        }
        // The export satisfies the shipped schema.
        let schema: serde_json::Value =
            serde_json::from_str(crate::io::DIAGNOSTICS_SCHEMA).unwrap();
        let validator = jsonschema::validator_for(&schema).unwrap();
        let doc: serde_json::Value =
            serde_json::from_str(&out.table.to_json_string().unwrap()).unwrap();
        assert!(validator.validate(&doc).is_ok());
    }

    #[test]
    fn knn_dissimilarities_on_binary_labels_step_by_one_over_k() {
        let input = two_blobs();
        let out = run_knn(&input, 5, 0.995).unwrap();
        assert_eq!(out.table.classifier, "knn");
        for row in &out.table.rows {
            let steps = row.ld * 5.0;
            assert!(
                (steps - steps.round()).abs() < 1e-12,
                "ld {} is not a multiple of 1/5",
                row.ld
            );
        }
        // Same result whether distances are computed here or supplied.
        let diss = euclidean_dissimilarity(input.matrix());
        let supplied = LabeledInput::dissimilarity(
            diss,
            input.labels().to_vec(),
            input.class_names().to_vec(),
        )
        .unwrap();
        let out2 = run_knn(&supplied, 5, 0.995).unwrap();
        for (a, b) in out.table.rows.iter().zip(&out2.table.rows) {
            assert_eq!(a.ld, b.ld);
            assert_eq!(a.predicted, b.predicted);
            assert!((a.outlyingness - b.outlyingness).abs() < 1e-12);
        }
    }

    #[test]
    fn svm_separates_the_blobs_and_grades_ld_by_side() {
        let input = two_blobs();
        let out = run_svm(&input, &KernelSpec::Linear, 10.0, 0.995).unwrap();
        assert_eq!(out.table.classifier, "svm");
        assert_eq!(out.table.misclassification_rate(), 0.0);
        for row in &out.table.rows {
            assert!((row.predicted == row.given) == (row.ld < 0.5));
        }
    }

    #[test]
    fn svm_rejects_more_than_two_classes() {
        let input = blobs(&[(0.0, 0.0), (8.0, 0.0), (0.0, 8.0)], 8, 3);
        let err = run_svm(&input, &KernelSpec::Linear, 10.0, 0.995).unwrap_err();
        assert!(err.to_string().contains("voting"));
    }

    #[test]
    fn input_kind_mismatches_are_rejected() {
        let input = two_blobs();
        let diss = LabeledInput::dissimilarity(
            euclidean_dissimilarity(input.matrix()),
            input.labels().to_vec(),
            input.class_names().to_vec(),
        )
        .unwrap();
        assert!(run_da(&diss, DaMode::Linear, 0.995).is_err());
        assert!(run_svm(&diss, &KernelSpec::Linear, 1.0, 0.995).is_err());
        assert!(run_logistic(&diss, None, None, 0.995).is_err());

        let kernel = LabeledInput::kernel(
            compute_kernel(&KernelSpec::Linear, input.matrix()).unwrap(),
            input.labels().to_vec(),
            input.class_names().to_vec(),
        )
        .unwrap();
        assert!(run_knn(&kernel, 5, 0.995).is_err());
        // A kernel input must not come with kernel-building options.
        assert!(run_svm(&kernel, &KernelSpec::Rbf { gamma: 1.0 }, 1.0, 0.995).is_err());
        assert!(run_svm(&kernel, &KernelSpec::Precomputed, 1.0, 0.995).is_ok());
        // And features must not claim to be precomputed.
        assert!(run_svm(&input, &KernelSpec::Precomputed, 1.0, 0.995).is_err());
    }

    #[test]
    fn logistic_runs_with_external_sparse_coefficients() {
        let input = two_blobs();
        // Only x1 carries a coefficient; the blobs sit at x1 ≈ 0 and
        // x1 ≈ 8, so a boundary at x1 = 4 separates them. Class 1 is
        // response 1 and needs a positive linear predictor on its side.
        let coefs = vec![("intercept".to_string(), 4.0), ("x1".to_string(), -1.0)];
        let out = run_logistic(&input, None, Some(&coefs), 0.995).unwrap();
        assert_eq!(out.table.classifier, "logistic");
        assert_eq!(out.table.misclassification_rate(), 0.0);

        let bad = vec![("x9".to_string(), 1.0)];
        let err = run_logistic(&input, None, Some(&bad), 0.995).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("x9"));
        assert!(msg.contains("x1, x2"));
    }

    #[test]
    fn vote_on_three_blobs_is_unanimous() {
        let input = blobs(&[(0.0, 0.0), (9.0, 0.0), (0.0, 9.0)], 12, 11);
        let out = run_vote(&input, &KernelSpec::Linear, 10.0, None, 0.995).unwrap();
        assert_eq!(out.table.classifier, "vote");
        assert_eq!(out.table.misclassification_rate(), 0.0);
        for row in &out.table.rows {
            assert_eq!(row.ld, 0.0);
            assert_eq!(row.farness.len(), 3);
        }
        // The Mahalanobis override takes the discriminant route instead of
        // the kernel subspaces; farness values must differ somewhere.
        let pooled = run_vote(
            &input,
            &KernelSpec::Linear,
            10.0,
            Some(FarnessDispatch::MahalanobisPooled),
            0.995,
        )
        .unwrap();
        let differs = out
            .table
            .rows
            .iter()
            .zip(&pooled.table.rows)
            .any(|(a, b)| (a.farness[0] - b.farness[0]).abs() > 1e-9);
        assert!(differs);
    }

    #[test]
    fn vote_on_two_classes_reports_the_binary_svm() {
        let input = two_blobs();
        let out = run_vote(&input, &KernelSpec::Linear, 10.0, None, 0.995).unwrap();
        assert_eq!(out.table.classifier, "svm");
        assert!(out
            .warnings
            .iter()
            .any(|w| w.contains("reduces to the binary SVM")));
    }
}
