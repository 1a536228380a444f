//! Diagnostics for classification results.
//!
//! Given a trained classifier and labeled objects, this crate computes two
//! quantities per object:
//!
//! * **label dissimilarity** `LD(i)` in `[0, 1]`: how much the classifier
//!   disagrees with the given label of object `i` (values above 0.5 mean the
//!   object would be assigned to a different class);
//! * **farness** `f(i, g)` in `[0, ∞)`: how far object `i` sits from class
//!   `g`, normalized so that a calibrated cutoff lands at 1.
//!
//! Both are available for discriminant analysis, k-nearest neighbors,
//! support vector machines, logistic regression, and one-vs-one majority
//! voting ensembles. The [`viz`] module renders the resulting diagnostics as
//! per-class scatter plots ("class maps") and stacked mosaic displays; the
//! `classmap` binary drives the whole pipeline from CSV input to SVG/JSON/CSV
//! output.
//!
//! All computations are deterministic: rerunning a pipeline on identical
//! input produces byte-identical output.

pub mod data;
pub mod da;
pub mod error;
pub mod io;
pub mod knn;
pub mod ld;
pub mod logistic;
pub mod numeric;
pub mod pipeline;
pub mod svm;
pub mod synth;
pub mod viz;
pub mod voting;

pub use data::{ConfusionSummary, DiagnosticRow, DiagnosticTable, InputKind, LabeledInput};
pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
