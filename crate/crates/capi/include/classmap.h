/* C interface of the classmap classification-diagnostics library. */

#ifndef CLASSMAP_H
#define CLASSMAP_H

/* Generated from the classmap-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a C-ABI call.
enum CmStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  // The call succeeded.
  CM_STATUS_OK = 0,
  // A required pointer argument was null.
  CM_STATUS_NULL_ARGUMENT = 1,
  // The input data or an argument was structurally invalid.
  CM_STATUS_INVALID_INPUT = 2,
  // The input was structurally valid but a numerical step failed
  // (degenerate distributions, no convergence, …).
  CM_STATUS_NUMERIC = 3,
  // An index argument was out of range for the handle.
  CM_STATUS_INDEX_OUT_OF_RANGE = 4,
  // An internal invariant failed; the library caught a panic.
  CM_STATUS_INTERNAL = 5,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum CmStatus CmStatus;
#else
typedef int32_t CmStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Which kernel a support-vector run should use.
enum CmKernelKind
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  // Plain inner product.
  CM_KERNEL_KIND_LINEAR = 0,
  // `(gamma * <x, y> + coef0) ^ degree`.
  CM_KERNEL_KIND_POLYNOMIAL = 1,
  // `exp(-gamma * ||x - y||^2)`.
  CM_KERNEL_KIND_RBF = 2,
  // The input handle already holds the kernel matrix.
  CM_KERNEL_KIND_PRECOMPUTED = 3,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum CmKernelKind CmKernelKind;
#else
typedef int32_t CmKernelKind;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// How farness from each class is measured for logistic and voting runs.
enum CmFarness
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  // Pick automatically: covariance-based when every class has at least
  // five objects per dimension, kernel-subspace otherwise.
  CM_FARNESS_DEFAULT = 0,
  // Distances under one pooled covariance matrix.
  CM_FARNESS_POOLED_COVARIANCE = 1,
  // Distances under per-class covariance matrices.
  CM_FARNESS_PER_CLASS_COVARIANCE = 2,
  // Kernel-subspace distances (suited to high dimension).
  CM_FARNESS_KERNEL_SUBSPACE = 3,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum CmFarness CmFarness;
#else
typedef int32_t CmFarness;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// A labeled data set: coordinates, pairwise dissimilarities, or a kernel
// matrix, together with 1-based class labels.
typedef struct CmInput CmInput;

// Per-object diagnostics produced by one classifier run, plus any
// warnings the run emitted.
typedef struct CmTable CmTable;

// Kernel configuration for [`cm_run_svm`] and [`cm_run_vote`]; fields
// irrelevant to `kind` are ignored.
typedef struct CmKernelConfig {
  // Kernel family.
  CmKernelKind kind;
  // Scale factor of the polynomial and RBF kernels.
  double gamma;
  // Offset of the polynomial kernel.
  double coef0;
  // Exponent of the polynomial kernel.
  uint32_t degree;
} CmKernelConfig;

// Scalar diagnostics of one object; the per-class farness vectors are
// copied out separately with [`cm_table_copy_farness`].
typedef struct CmRow {
  // 1-based object index in input order.
  size_t index;
  // Given class label in `1..=n_classes`.
  uint32_t given;
  // Label the classifier would assign.
  uint32_t predicted;
  // Label dissimilarity in [0, 1]; above 0.5 the classifier disagrees
  // with the given label.
  double ld;
  // Smallest normalized farness over all classes.
  double outlyingness;
  // True when the object is far from every class (outlyingness > 1).
  bool outlier;
} CmRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static nul-terminated string; never free it.
const char *cm_version(void);

// Message of the most recent failure on the calling thread, or null when
// the last call succeeded. The pointer stays valid until the next failing
// call on the same thread; never free it.
const char *cm_last_error_message(void);

// Create a data set of `n` objects with `d` coordinates each.
//
// `values` is row-major `n x d`; `labels` holds `n` class labels in
// `1..=n_classes`; `class_names` may be null, in which case classes are
// named "1", "2", ….  On success writes a new handle to `out`; release it
// with [`cm_input_free`].
//
// # Safety
// `values` must point to `n * d` doubles, `labels` to `n` `u32` values,
// `class_names` to `n_classes` strings when non-null, and `out` must be a
// valid destination pointer.
CmStatus cm_input_features_new(const double *values,
                               size_t n,
                               size_t d,
                               const uint32_t *labels,
                               const char *const *class_names,
                               size_t n_classes,
                               struct CmInput **out);

// Create a data set from a symmetric `n x n` dissimilarity matrix
// (row-major, zero diagonal). See [`cm_input_features_new`] for the label
// arguments and ownership rules.
//
// # Safety
// `values` must point to `n * n` doubles; other arguments as in
// [`cm_input_features_new`].
CmStatus cm_input_dissimilarity_new(const double *values,
                                    size_t n,
                                    const uint32_t *labels,
                                    const char *const *class_names,
                                    size_t n_classes,
                                    struct CmInput **out);

// Create a data set from a symmetric positive semi-definite `n x n` kernel
// matrix (row-major). See [`cm_input_features_new`] for the label
// arguments and ownership rules.
//
// # Safety
// `values` must point to `n * n` doubles; other arguments as in
// [`cm_input_features_new`].
CmStatus cm_input_kernel_new(const double *values,
                             size_t n,
                             const uint32_t *labels,
                             const char *const *class_names,
                             size_t n_classes,
                             struct CmInput **out);

// Create a data set from `n` labeled strings by building the kernel of
// overlapping substring counts of the given length (case-folded). The
// resulting handle behaves like a kernel input: run it with kernel kind
// [`CmKernelKind::Precomputed`].
//
// # Safety
// `texts` must point to `n` nul-terminated strings; other arguments as in
// [`cm_input_features_new`].
CmStatus cm_input_strings_new(const char *const *texts,
                              size_t n,
                              const uint32_t *labels,
                              const char *const *class_names,
                              size_t n_classes,
                              size_t substring_length,
                              struct CmInput **out);

// Number of objects in the data set; 0 when `input` is null.
//
// # Safety
// `input` must be null or a live handle from a `cm_input_*_new` call.
size_t cm_input_n_objects(const struct CmInput *input);

// Number of classes in the data set; 0 when `input` is null.
//
// # Safety
// `input` must be null or a live handle from a `cm_input_*_new` call.
size_t cm_input_n_classes(const struct CmInput *input);

// Release a data-set handle; null is ignored. Each handle must be freed
// exactly once.
//
// # Safety
// `input` must be null or an owned handle not freed before.
void cm_input_free(struct CmInput *input);

// Run discriminant analysis on coordinate data. `quadratic` selects
// per-class covariance matrices; otherwise one pooled matrix is used.
// `quantile` in (0, 1) sets the farness cutoff calibration (0.995 is the
// conventional choice). On success writes a new table handle to `out`;
// release it with [`cm_table_free`].
//
// # Safety
// `input` must be a live input handle and `out` a valid destination.
CmStatus cm_run_da(const struct CmInput *input,
                   bool quadratic,
                   double quantile,
                   struct CmTable **out);

// Run the k-nearest-neighbor diagnostic on coordinate or dissimilarity
// data. See [`cm_run_da`] for `quantile` and ownership rules.
//
// # Safety
// `input` must be a live input handle and `out` a valid destination.
CmStatus cm_run_knn(const struct CmInput *input, size_t k, double quantile, struct CmTable **out);

// Train a binary soft-margin SVM and compute its diagnostics. `config`
// may be null: coordinate data then uses the linear kernel and kernel
// data is used as-is. See [`cm_run_da`] for `quantile` and ownership.
//
// # Safety
// `input` must be a live input handle, `config` null or valid, and `out`
// a valid destination.
CmStatus cm_run_svm(const struct CmInput *input,
                    const struct CmKernelConfig *config,
                    double cost,
                    double quantile,
                    struct CmTable **out);

// Fit a binary logistic regression on coordinate data and compute its
// diagnostics. See [`cm_run_da`] for `quantile` and ownership rules.
//
// # Safety
// `input` must be a live input handle and `out` a valid destination.
CmStatus cm_run_logistic(const struct CmInput *input,
                         CmFarness farness,
                         double quantile,
                         struct CmTable **out);

// Score coordinate data under fixed logistic coefficients instead of
// fitting them. `names` holds `n_coefficients` feature names — each either
// a feature of the input ("x1", "x2", …) or "intercept" — aligned with
// `values`. See [`cm_run_da`] for `quantile` and ownership rules.
//
// # Safety
// `input` must be a live input handle, `names` must point to
// `n_coefficients` nul-terminated strings, `values` to as many doubles,
// and `out` must be a valid destination.
CmStatus cm_run_logistic_with_coefficients(const struct CmInput *input,
                                           const char *const *names,
                                           const double *values,
                                           size_t n_coefficients,
                                           CmFarness farness,
                                           double quantile,
                                           struct CmTable **out);

// Run one-vs-one majority voting over pairwise SVMs for any number of
// classes (two classes reduce to the single binary SVM). `config` as in
// [`cm_run_svm`]; see [`cm_run_da`] for `quantile` and ownership rules.
//
// # Safety
// `input` must be a live input handle, `config` null or valid, and `out`
// a valid destination.
CmStatus cm_run_vote(const struct CmInput *input,
                     const struct CmKernelConfig *config,
                     double cost,
                     CmFarness farness,
                     double quantile,
                     struct CmTable **out);

// Number of objects in the table; 0 when `table` is null.
//
// # Safety
// `table` must be null or a live handle from a `cm_run_*` call.
size_t cm_table_n_objects(const struct CmTable *table);

// Number of classes in the table; 0 when `table` is null.
//
// # Safety
// `table` must be null or a live handle from a `cm_run_*` call.
size_t cm_table_n_classes(const struct CmTable *table);

// Name of the classifier that produced the table ("da", "knn", "svm",
// "logistic", or "vote"); null when `table` is null. Borrowed from the
// handle — do not free.
//
// # Safety
// `table` must be null or a live handle from a `cm_run_*` call.
const char *cm_table_classifier(const struct CmTable *table);

// Name of class `class` (1-based); null when out of range. Borrowed from
// the handle — do not free.
//
// # Safety
// `table` must be null or a live handle from a `cm_run_*` call.
const char *cm_table_class_name(const struct CmTable *table, size_t class_);

// Copy the scalar diagnostics of object `index` (0-based storage order)
// into `row`.
//
// # Safety
// `table` must be a live table handle and `row` a valid destination.
CmStatus cm_table_row(const struct CmTable *table, size_t index, struct CmRow *row);

// Copy the normalized farness of object `index` from every class into
// `out`, which must hold at least `cm_table_n_classes` doubles. Values
// above 1 lie beyond the calibrated cutoff.
//
// # Safety
// `table` must be a live table handle and `out` must point to `len`
// writable doubles.
CmStatus cm_table_copy_farness(const struct CmTable *table, size_t index, double *out, size_t len);

// Copy the farness of object `index` before cutoff normalization; same
// contract as [`cm_table_copy_farness`].
//
// # Safety
// `table` must be a live table handle and `out` must point to `len`
// writable doubles.
CmStatus cm_table_copy_farness_raw(const struct CmTable *table,
                                   size_t index,
                                   double *out,
                                   size_t len);

// Number of warnings the run emitted; 0 when `table` is null.
//
// # Safety
// `table` must be null or a live handle from a `cm_run_*` call.
size_t cm_table_warning_count(const struct CmTable *table);

// Warning `index` (0-based), or null when out of range. Borrowed from the
// handle — do not free.
//
// # Safety
// `table` must be null or a live handle from a `cm_run_*` call.
const char *cm_table_warning(const struct CmTable *table, size_t index);

// Serialize the table as pretty-printed JSON. Writes a heap-allocated
// string to `out`; release it with [`cm_string_free`].
//
// # Safety
// `table` must be a live table handle and `out` a valid destination.
CmStatus cm_table_to_json(const struct CmTable *table, char **out);

// Serialize the table as CSV with one row per object. Writes a
// heap-allocated string to `out`; release it with [`cm_string_free`].
//
// # Safety
// `table` must be a live table handle and `out` a valid destination.
CmStatus cm_table_to_csv(const struct CmTable *table, char **out);

// Render the class map of class `class` (1-based) as an SVG document:
// one marker per member of the class, label dissimilarity against
// farness. Writes a heap-allocated string to `out`; release it with
// [`cm_string_free`].
//
// # Safety
// `table` must be a live table handle and `out` a valid destination.
CmStatus cm_table_classmap_svg(const struct CmTable *table, size_t class_, char **out);

// Render the stacked mosaic of predicted classes per given class as an
// SVG document; `show_outliers` carves the flagged objects into their own
// segments. Writes a heap-allocated string to `out`; release it with
// [`cm_string_free`].
//
// # Safety
// `table` must be a live table handle and `out` a valid destination.
CmStatus cm_table_mosaic_svg(const struct CmTable *table, bool show_outliers, char **out);

// Release a table handle; null is ignored. Each handle must be freed
// exactly once.
//
// # Safety
// `table` must be null or an owned handle not freed before.
void cm_table_free(struct CmTable *table);

// Release a string obtained from a `char **` out-parameter; null is
// ignored.
//
// # Safety
// `text` must be null or a string returned by this library and not freed
// before.
void cm_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLASSMAP_H */
