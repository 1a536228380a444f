//! C ABI for the `classmap` classification-diagnostics library.
//!
//! The interface follows a conventional handle-and-status-code shape:
//!
//! * Data sets and diagnostic tables live behind the opaque handles
//!   [`CmInput`] and [`CmTable`]; constructors hand out owned pointers that
//!   must be released with the matching `*_free` function exactly once.
//! * Every fallible function returns a [`CmStatus`]; on failure a
//!   human-readable message is stored per thread and can be read with
//!   [`cm_last_error_message`].
//! * Strings returned through `char **` out-parameters are heap-allocated
//!   and must be released with [`cm_string_free`]. Strings returned as bare
//!   `const char *` borrow from the handle (or are static) and must not be
//!   freed.
//!
//! All functions are safe to call from multiple threads as long as each
//! handle is used from one thread at a time; error messages are
//! thread-local.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use classmap::da::DaMode;
use classmap::logistic::FarnessDispatch;
use classmap::numeric::Mat;
use classmap::pipeline::{run_da, run_knn, run_logistic, run_svm, run_vote, RunOutput};
use classmap::svm::{compute_spectrum_kernel, KernelSpec};
use classmap::viz::{layout_classmap, layout_mosaic, PlotOptions};
use classmap::{DiagnosticTable, Error, InputKind, LabeledInput};

/// Outcome of a C-ABI call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The input data or an argument was structurally invalid.
    InvalidInput = 2,
    /// The input was structurally valid but a numerical step failed
    /// (degenerate distributions, no convergence, …).
    Numeric = 3,
    /// An index argument was out of range for the handle.
    IndexOutOfRange = 4,
    /// An internal invariant failed; the library caught a panic.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let owned = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: CmStatus, message: &str) -> CmStatus {
    set_last_error(message);
    status
}

fn fail_with(err: &Error) -> CmStatus {
    let status = match err.exit_code() {
        3 => CmStatus::Numeric,
        _ => CmStatus::InvalidInput,
    };
    fail(status, &err.to_string())
}

/// Run `body` with panics converted into [`CmStatus::Internal`] so they can
/// never unwind across the ABI boundary.
fn guarded(body: impl FnOnce() -> CmStatus) -> CmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(CmStatus::Internal, "internal panic"),
    }
}

/// A labeled data set: coordinates, pairwise dissimilarities, or a kernel
/// matrix, together with 1-based class labels.
pub struct CmInput {
    inner: LabeledInput,
}

/// Per-object diagnostics produced by one classifier run, plus any
/// warnings the run emitted.
pub struct CmTable {
    table: DiagnosticTable,
    classifier: CString,
    class_names: Vec<CString>,
    warnings: Vec<CString>,
}

/// Scalar diagnostics of one object; the per-class farness vectors are
/// copied out separately with [`cm_table_copy_farness`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CmRow {
    /// 1-based object index in input order.
    pub index: usize,
    /// Given class label in `1..=n_classes`.
    pub given: u32,
    /// Label the classifier would assign.
    pub predicted: u32,
    /// Label dissimilarity in [0, 1]; above 0.5 the classifier disagrees
    /// with the given label.
    pub ld: f64,
    /// Smallest normalized farness over all classes.
    pub outlyingness: f64,
    /// True when the object is far from every class (outlyingness > 1).
    pub outlier: bool,
}

/// Which kernel a support-vector run should use.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmKernelKind {
    /// Plain inner product.
    Linear = 0,
    /// `(gamma * <x, y> + coef0) ^ degree`.
    Polynomial = 1,
    /// `exp(-gamma * ||x - y||^2)`.
    Rbf = 2,
    /// The input handle already holds the kernel matrix.
    Precomputed = 3,
}

/// Kernel configuration for [`cm_run_svm`] and [`cm_run_vote`]; fields
/// irrelevant to `kind` are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CmKernelConfig {
    /// Kernel family.
    pub kind: CmKernelKind,
    /// Scale factor of the polynomial and RBF kernels.
    pub gamma: f64,
    /// Offset of the polynomial kernel.
    pub coef0: f64,
    /// Exponent of the polynomial kernel.
    pub degree: u32,
}

/// How farness from each class is measured for logistic and voting runs.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmFarness {
    /// Pick automatically: covariance-based when every class has at least
    /// five objects per dimension, kernel-subspace otherwise.
    Default = 0,
    /// Distances under one pooled covariance matrix.
    PooledCovariance = 1,
    /// Distances under per-class covariance matrices.
    PerClassCovariance = 2,
    /// Kernel-subspace distances (suited to high dimension).
    KernelSubspace = 3,
}

impl CmFarness {
    fn to_dispatch(self) -> Option<FarnessDispatch> {
        match self {
            CmFarness::Default => None,
            CmFarness::PooledCovariance => Some(FarnessDispatch::MahalanobisPooled),
            CmFarness::PerClassCovariance => Some(FarnessDispatch::MahalanobisPerClass),
            CmFarness::KernelSubspace => Some(FarnessDispatch::Kpca),
        }
    }
}

/// Library version as a static nul-terminated string; never free it.
#[no_mangle]
pub extern "C" fn cm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on the calling thread, or null when
/// the last call succeeded. The pointer stays valid until the next failing
/// call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn cm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |msg| msg.as_ptr())
    })
}

/// Collect `n` 1-based labels and optional class names into Rust form.
///
/// # Safety
/// Caller guarantees `labels` points to `n` readable `u32` values and
/// `class_names`, when non-null, to `n_classes` nul-terminated strings.
unsafe fn gather_classes(
    labels: *const u32,
    n: usize,
    class_names: *const *const c_char,
    n_classes: usize,
) -> Result<(Vec<usize>, Vec<String>), CmStatus> {
    if labels.is_null() {
        return Err(fail(CmStatus::NullArgument, "labels pointer is null"));
    }
    let labels: Vec<usize> = std::slice::from_raw_parts(labels, n)
        .iter()
        .map(|&l| l as usize)
        .collect();
    let names = if class_names.is_null() {
        if n_classes == 0 {
            return Err(fail(
                CmStatus::InvalidInput,
                "n_classes must be positive when class_names is null",
            ));
        }
        (1..=n_classes).map(|g| g.to_string()).collect()
    } else {
        let mut names = Vec::with_capacity(n_classes);
        for (g, &name) in std::slice::from_raw_parts(class_names, n_classes)
            .iter()
            .enumerate()
        {
            if name.is_null() {
                return Err(fail(
                    CmStatus::NullArgument,
                    &format!("class name {} is null", g + 1),
                ));
            }
            match CStr::from_ptr(name).to_str() {
                Ok(s) => names.push(s.to_string()),
                Err(_) => {
                    return Err(fail(
                        CmStatus::InvalidInput,
                        &format!("class name {} is not valid UTF-8", g + 1),
                    ))
                }
            }
        }
        names
    };
    Ok((labels, names))
}

/// Copy a borrowed `rows x cols` row-major array into a matrix.
///
/// # Safety
/// Caller guarantees `values` points to `rows * cols` readable doubles.
unsafe fn gather_matrix(
    values: *const f64,
    rows: usize,
    cols: usize,
) -> Result<Mat, CmStatus> {
    if values.is_null() {
        return Err(fail(CmStatus::NullArgument, "values pointer is null"));
    }
    if rows == 0 || cols == 0 {
        return Err(fail(CmStatus::InvalidInput, "matrix dimensions must be positive"));
    }
    let data = std::slice::from_raw_parts(values, rows * cols).to_vec();
    Ok(Mat::from_rows(rows, cols, data))
}

fn finish_input(
    out: *mut *mut CmInput,
    built: classmap::Result<LabeledInput>,
) -> CmStatus {
    match built {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(CmInput { inner })) };
            clear_last_error();
            CmStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Create a data set of `n` objects with `d` coordinates each.
///
/// `values` is row-major `n x d`; `labels` holds `n` class labels in
/// `1..=n_classes`; `class_names` may be null, in which case classes are
/// named "1", "2", ….  On success writes a new handle to `out`; release it
/// with [`cm_input_free`].
///
/// # Safety
/// `values` must point to `n * d` doubles, `labels` to `n` `u32` values,
/// `class_names` to `n_classes` strings when non-null, and `out` must be a
/// valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_input_features_new(
    values: *const f64,
    n: usize,
    d: usize,
    labels: *const u32,
    class_names: *const *const c_char,
    n_classes: usize,
    out: *mut *mut CmInput,
) -> CmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CmStatus::NullArgument, "out pointer is null");
        }
        let matrix = match gather_matrix(values, n, d) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let (labels, names) = match gather_classes(labels, n, class_names, n_classes) {
            Ok(v) => v,
            Err(status) => return status,
        };
        let feature_names = (1..=d).map(|j| format!("x{j}")).collect();
        finish_input(
            out,
            LabeledInput::features(matrix, labels, names, feature_names),
        )
    })
}

/// Create a data set from a symmetric `n x n` dissimilarity matrix
/// (row-major, zero diagonal). See [`cm_input_features_new`] for the label
/// arguments and ownership rules.
///
/// # Safety
/// `values` must point to `n * n` doubles; other arguments as in
/// [`cm_input_features_new`].
#[no_mangle]
pub unsafe extern "C" fn cm_input_dissimilarity_new(
    values: *const f64,
    n: usize,
    labels: *const u32,
    class_names: *const *const c_char,
    n_classes: usize,
    out: *mut *mut CmInput,
) -> CmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CmStatus::NullArgument, "out pointer is null");
        }
        let matrix = match gather_matrix(values, n, n) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let (labels, names) = match gather_classes(labels, n, class_names, n_classes) {
            Ok(v) => v,
            Err(status) => return status,
        };
        finish_input(out, LabeledInput::dissimilarity(matrix, labels, names))
    })
}

/// Create a data set from a symmetric positive semi-definite `n x n` kernel
/// matrix (row-major). See [`cm_input_features_new`] for the label
/// arguments and ownership rules.
///
/// # Safety
/// `values` must point to `n * n` doubles; other arguments as in
/// [`cm_input_features_new`].
#[no_mangle]
pub unsafe extern "C" fn cm_input_kernel_new(
    values: *const f64,
    n: usize,
    labels: *const u32,
    class_names: *const *const c_char,
    n_classes: usize,
    out: *mut *mut CmInput,
) -> CmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CmStatus::NullArgument, "out pointer is null");
        }
        let matrix = match gather_matrix(values, n, n) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let (labels, names) = match gather_classes(labels, n, class_names, n_classes) {
            Ok(v) => v,
            Err(status) => return status,
        };
        finish_input(out, LabeledInput::kernel(matrix, labels, names))
    })
}

/// Create a data set from `n` labeled strings by building the kernel of
/// overlapping substring counts of the given length (case-folded). The
/// resulting handle behaves like a kernel input: run it with kernel kind
/// [`CmKernelKind::Precomputed`].
///
/// # Safety
/// `texts` must point to `n` nul-terminated strings; other arguments as in
/// [`cm_input_features_new`].
#[no_mangle]
pub unsafe extern "C" fn cm_input_strings_new(
    texts: *const *const c_char,
    n: usize,
    labels: *const u32,
    class_names: *const *const c_char,
    n_classes: usize,
    substring_length: usize,
    out: *mut *mut CmInput,
) -> CmStatus {
    guarded(|| {
        if out.is_null() {
            return fail(CmStatus::NullArgument, "out pointer is null");
        }
        if texts.is_null() {
            return fail(CmStatus::NullArgument, "texts pointer is null");
        }
        let mut owned = Vec::with_capacity(n);
        for (i, &text) in std::slice::from_raw_parts(texts, n).iter().enumerate() {
            if text.is_null() {
                return fail(CmStatus::NullArgument, &format!("text {} is null", i + 1));
            }
            match CStr::from_ptr(text).to_str() {
                Ok(s) => owned.push(s.to_string()),
                Err(_) => {
                    return fail(
                        CmStatus::InvalidInput,
                        &format!("text {} is not valid UTF-8", i + 1),
                    )
                }
            }
        }
        let (labels, names) = match gather_classes(labels, n, class_names, n_classes) {
            Ok(v) => v,
            Err(status) => return status,
        };
        let kernel = match compute_spectrum_kernel(&owned, substring_length) {
            Ok(k) => k,
            Err(e) => return fail_with(&e),
        };
        finish_input(out, LabeledInput::kernel(kernel, labels, names))
    })
}

/// Number of objects in the data set; 0 when `input` is null.
///
/// # Safety
/// `input` must be null or a live handle from a `cm_input_*_new` call.
#[no_mangle]
pub unsafe extern "C" fn cm_input_n_objects(input: *const CmInput) -> usize {
    if input.is_null() {
        return 0;
    }
    let handle = &*input;
    handle.inner.n()
}

/// Number of classes in the data set; 0 when `input` is null.
///
/// # Safety
/// `input` must be null or a live handle from a `cm_input_*_new` call.
#[no_mangle]
pub unsafe extern "C" fn cm_input_n_classes(input: *const CmInput) -> usize {
    if input.is_null() {
        return 0;
    }
    let handle = &*input;
    handle.inner.n_classes()
}

/// Release a data-set handle; null is ignored. Each handle must be freed
/// exactly once.
///
/// # Safety
/// `input` must be null or an owned handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cm_input_free(input: *mut CmInput) {
    if !input.is_null() {
        drop(Box::from_raw(input));
    }
}

fn kernel_spec_from(config: *const CmKernelConfig, input: &LabeledInput) -> KernelSpec {
    if config.is_null() {
        return match input.kind() {
            InputKind::Kernel => KernelSpec::Precomputed,
            _ => KernelSpec::Linear,
        };
    }
    let config = unsafe { *config };
    match config.kind {
        CmKernelKind::Linear => KernelSpec::Linear,
        CmKernelKind::Polynomial => KernelSpec::Polynomial {
            gamma: config.gamma,
            coef0: config.coef0,
            degree: config.degree,
        },
        CmKernelKind::Rbf => KernelSpec::Rbf {
            gamma: config.gamma,
        },
        CmKernelKind::Precomputed => KernelSpec::Precomputed,
    }
}

fn finish_run(out: *mut *mut CmTable, run: classmap::Result<RunOutput>) -> CmStatus {
    match run {
        Ok(output) => {
            let table = output.table;
            let classifier = CString::new(table.classifier.clone()).unwrap_or_default();
            let class_names = table
                .class_names
                .iter()
                .map(|n| CString::new(n.as_str()).unwrap_or_default())
                .collect();
            let warnings = output
                .warnings
                .iter()
                .map(|w| CString::new(w.as_str()).unwrap_or_default())
                .collect();
            let handle = CmTable {
                table,
                classifier,
                class_names,
                warnings,
            };
            unsafe { *out = Box::into_raw(Box::new(handle)) };
            clear_last_error();
            CmStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Shared preamble of the run functions: null checks on the handles.
unsafe fn run_args<'a>(
    input: *const CmInput,
    out: *mut *mut CmTable,
) -> Result<&'a LabeledInput, CmStatus> {
    if input.is_null() {
        return Err(fail(CmStatus::NullArgument, "input handle is null"));
    }
    if out.is_null() {
        return Err(fail(CmStatus::NullArgument, "out pointer is null"));
    }
    Ok(&(*input).inner)
}

/// Run discriminant analysis on coordinate data. `quadratic` selects
/// per-class covariance matrices; otherwise one pooled matrix is used.
/// `quantile` in (0, 1) sets the farness cutoff calibration (0.995 is the
/// conventional choice). On success writes a new table handle to `out`;
/// release it with [`cm_table_free`].
///
/// # Safety
/// `input` must be a live input handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_run_da(
    input: *const CmInput,
    quadratic: bool,
    quantile: f64,
    out: *mut *mut CmTable,
) -> CmStatus {
    guarded(|| {
        let data = match run_args(input, out) {
            Ok(v) => v,
            Err(status) => return status,
        };
        let mode = if quadratic {
            DaMode::Quadratic
        } else {
            DaMode::Linear
        };
        finish_run(out, run_da(data, mode, quantile))
    })
}

/// Run the k-nearest-neighbor diagnostic on coordinate or dissimilarity
/// data. See [`cm_run_da`] for `quantile` and ownership rules.
///
/// # Safety
/// `input` must be a live input handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_run_knn(
    input: *const CmInput,
    k: usize,
    quantile: f64,
    out: *mut *mut CmTable,
) -> CmStatus {
    guarded(|| {
        let data = match run_args(input, out) {
            Ok(v) => v,
            Err(status) => return status,
        };
        finish_run(out, run_knn(data, k, quantile))
    })
}

/// Train a binary soft-margin SVM and compute its diagnostics. `config`
/// may be null: coordinate data then uses the linear kernel and kernel
/// data is used as-is. See [`cm_run_da`] for `quantile` and ownership.
///
/// # Safety
/// `input` must be a live input handle, `config` null or valid, and `out`
/// a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_run_svm(
    input: *const CmInput,
    config: *const CmKernelConfig,
    cost: f64,
    quantile: f64,
    out: *mut *mut CmTable,
) -> CmStatus {
    guarded(|| {
        let data = match run_args(input, out) {
            Ok(v) => v,
            Err(status) => return status,
        };
        let spec = kernel_spec_from(config, data);
        finish_run(out, run_svm(data, &spec, cost, quantile))
    })
}

/// Fit a binary logistic regression on coordinate data and compute its
/// diagnostics. See [`cm_run_da`] for `quantile` and ownership rules.
///
/// # Safety
/// `input` must be a live input handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_run_logistic(
    input: *const CmInput,
    farness: CmFarness,
    quantile: f64,
    out: *mut *mut CmTable,
) -> CmStatus {
    guarded(|| {
        let data = match run_args(input, out) {
            Ok(v) => v,
            Err(status) => return status,
        };
        finish_run(
            out,
            run_logistic(data, farness.to_dispatch(), None, quantile),
        )
    })
}

/// Score coordinate data under fixed logistic coefficients instead of
/// fitting them. `names` holds `n_coefficients` feature names — each either
/// a feature of the input ("x1", "x2", …) or "intercept" — aligned with
/// `values`. See [`cm_run_da`] for `quantile` and ownership rules.
///
/// # Safety
/// `input` must be a live input handle, `names` must point to
/// `n_coefficients` nul-terminated strings, `values` to as many doubles,
/// and `out` must be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_run_logistic_with_coefficients(
    input: *const CmInput,
    names: *const *const c_char,
    values: *const f64,
    n_coefficients: usize,
    farness: CmFarness,
    quantile: f64,
    out: *mut *mut CmTable,
) -> CmStatus {
    guarded(|| {
        let data = match run_args(input, out) {
            Ok(v) => v,
            Err(status) => return status,
        };
        if names.is_null() || values.is_null() {
            return fail(CmStatus::NullArgument, "coefficient arrays are null");
        }
        let values = std::slice::from_raw_parts(values, n_coefficients);
        let mut pairs = Vec::with_capacity(n_coefficients);
        for (i, &name) in std::slice::from_raw_parts(names, n_coefficients)
            .iter()
            .enumerate()
        {
            if name.is_null() {
                return fail(
                    CmStatus::NullArgument,
                    &format!("coefficient name {} is null", i + 1),
                );
            }
            match CStr::from_ptr(name).to_str() {
                Ok(s) => pairs.push((s.to_string(), values[i])),
                Err(_) => {
                    return fail(
                        CmStatus::InvalidInput,
                        &format!("coefficient name {} is not valid UTF-8", i + 1),
                    )
                }
            }
        }
        finish_run(
            out,
            run_logistic(data, farness.to_dispatch(), Some(&pairs), quantile),
        )
    })
}

/// Run one-vs-one majority voting over pairwise SVMs for any number of
/// classes (two classes reduce to the single binary SVM). `config` as in
/// [`cm_run_svm`]; see [`cm_run_da`] for `quantile` and ownership rules.
///
/// # Safety
/// `input` must be a live input handle, `config` null or valid, and `out`
/// a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_run_vote(
    input: *const CmInput,
    config: *const CmKernelConfig,
    cost: f64,
    farness: CmFarness,
    quantile: f64,
    out: *mut *mut CmTable,
) -> CmStatus {
    guarded(|| {
        let data = match run_args(input, out) {
            Ok(v) => v,
            Err(status) => return status,
        };
        let spec = kernel_spec_from(config, data);
        finish_run(
            out,
            run_vote(data, &spec, cost, farness.to_dispatch(), quantile),
        )
    })
}

/// Number of objects in the table; 0 when `table` is null.
///
/// # Safety
/// `table` must be null or a live handle from a `cm_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn cm_table_n_objects(table: *const CmTable) -> usize {
    if table.is_null() {
        return 0;
    }
    let handle = &*table;
    handle.table.n()
}

/// Number of classes in the table; 0 when `table` is null.
///
/// # Safety
/// `table` must be null or a live handle from a `cm_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn cm_table_n_classes(table: *const CmTable) -> usize {
    if table.is_null() {
        return 0;
    }
    let handle = &*table;
    handle.table.n_classes()
}

/// Name of the classifier that produced the table ("da", "knn", "svm",
/// "logistic", or "vote"); null when `table` is null. Borrowed from the
/// handle — do not free.
///
/// # Safety
/// `table` must be null or a live handle from a `cm_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn cm_table_classifier(table: *const CmTable) -> *const c_char {
    if table.is_null() {
        return ptr::null();
    }
    let handle = &*table;
    handle.classifier.as_ptr()
}

/// Name of class `class` (1-based); null when out of range. Borrowed from
/// the handle — do not free.
///
/// # Safety
/// `table` must be null or a live handle from a `cm_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn cm_table_class_name(
    table: *const CmTable,
    class: usize,
) -> *const c_char {
    if table.is_null() {
        return ptr::null();
    }
    let handle = &*table;
    match handle.class_names.get(class.wrapping_sub(1)) {
        Some(name) => name.as_ptr(),
        None => ptr::null(),
    }
}

/// Copy the scalar diagnostics of object `index` (0-based storage order)
/// into `row`.
///
/// # Safety
/// `table` must be a live table handle and `row` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_table_row(
    table: *const CmTable,
    index: usize,
    row: *mut CmRow,
) -> CmStatus {
    guarded(|| {
        if table.is_null() || row.is_null() {
            return fail(CmStatus::NullArgument, "table or row pointer is null");
        }
        let t = &(*table).table;
        let Some(r) = t.rows.get(index) else {
            return fail(
                CmStatus::IndexOutOfRange,
                &format!("row {index} out of range for {} objects", t.n()),
            );
        };
        *row = CmRow {
            index: r.index,
            given: r.given as u32,
            predicted: r.predicted as u32,
            ld: r.ld,
            outlyingness: r.outlyingness,
            outlier: r.outlier,
        };
        clear_last_error();
        CmStatus::Ok
    })
}

unsafe fn copy_per_class(
    table: *const CmTable,
    index: usize,
    out: *mut f64,
    len: usize,
    raw: bool,
) -> CmStatus {
    if table.is_null() || out.is_null() {
        return fail(CmStatus::NullArgument, "table or out pointer is null");
    }
    let t = &(*table).table;
    let Some(r) = t.rows.get(index) else {
        return fail(
            CmStatus::IndexOutOfRange,
            &format!("row {index} out of range for {} objects", t.n()),
        );
    };
    let source = if raw { &r.farness_raw } else { &r.farness };
    if len < source.len() {
        return fail(
            CmStatus::InvalidInput,
            &format!("buffer holds {len} values, need {}", source.len()),
        );
    }
    std::ptr::copy_nonoverlapping(source.as_ptr(), out, source.len());
    clear_last_error();
    CmStatus::Ok
}

/// Copy the normalized farness of object `index` from every class into
/// `out`, which must hold at least `cm_table_n_classes` doubles. Values
/// above 1 lie beyond the calibrated cutoff.
///
/// # Safety
/// `table` must be a live table handle and `out` must point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cm_table_copy_farness(
    table: *const CmTable,
    index: usize,
    out: *mut f64,
    len: usize,
) -> CmStatus {
    guarded(|| copy_per_class(table, index, out, len, false))
}

/// Copy the farness of object `index` before cutoff normalization; same
/// contract as [`cm_table_copy_farness`].
///
/// # Safety
/// `table` must be a live table handle and `out` must point to `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cm_table_copy_farness_raw(
    table: *const CmTable,
    index: usize,
    out: *mut f64,
    len: usize,
) -> CmStatus {
    guarded(|| copy_per_class(table, index, out, len, true))
}

/// Number of warnings the run emitted; 0 when `table` is null.
///
/// # Safety
/// `table` must be null or a live handle from a `cm_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn cm_table_warning_count(table: *const CmTable) -> usize {
    if table.is_null() {
        return 0;
    }
    let handle = &*table;
    handle.warnings.len()
}

/// Warning `index` (0-based), or null when out of range. Borrowed from the
/// handle — do not free.
///
/// # Safety
/// `table` must be null or a live handle from a `cm_run_*` call.
#[no_mangle]
pub unsafe extern "C" fn cm_table_warning(
    table: *const CmTable,
    index: usize,
) -> *const c_char {
    if table.is_null() {
        return ptr::null();
    }
    let handle = &*table;
    match handle.warnings.get(index) {
        Some(w) => w.as_ptr(),
        None => ptr::null(),
    }
}

fn finish_string(out: *mut *mut c_char, text: String) -> CmStatus {
    match CString::new(text) {
        Ok(owned) => {
            unsafe { *out = owned.into_raw() };
            clear_last_error();
            CmStatus::Ok
        }
        Err(_) => fail(CmStatus::Internal, "generated text contained a nul byte"),
    }
}

/// Serialize the table as pretty-printed JSON. Writes a heap-allocated
/// string to `out`; release it with [`cm_string_free`].
///
/// # Safety
/// `table` must be a live table handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_table_to_json(
    table: *const CmTable,
    out: *mut *mut c_char,
) -> CmStatus {
    guarded(|| {
        if table.is_null() || out.is_null() {
            return fail(CmStatus::NullArgument, "table or out pointer is null");
        }
        let handle = &*table;
        match handle.table.to_json_string() {
            Ok(json) => finish_string(out, json),
            Err(e) => fail_with(&e),
        }
    })
}

/// Serialize the table as CSV with one row per object. Writes a
/// heap-allocated string to `out`; release it with [`cm_string_free`].
///
/// # Safety
/// `table` must be a live table handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_table_to_csv(
    table: *const CmTable,
    out: *mut *mut c_char,
) -> CmStatus {
    guarded(|| {
        if table.is_null() || out.is_null() {
            return fail(CmStatus::NullArgument, "table or out pointer is null");
        }
        let handle = &*table;
        finish_string(out, handle.table.to_csv_string())
    })
}

/// Render the class map of class `class` (1-based) as an SVG document:
/// one marker per member of the class, label dissimilarity against
/// farness. Writes a heap-allocated string to `out`; release it with
/// [`cm_string_free`].
///
/// # Safety
/// `table` must be a live table handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_table_classmap_svg(
    table: *const CmTable,
    class: usize,
    out: *mut *mut c_char,
) -> CmStatus {
    guarded(|| {
        if table.is_null() || out.is_null() {
            return fail(CmStatus::NullArgument, "table or out pointer is null");
        }
        match layout_classmap(&(*table).table, class, &PlotOptions::default()) {
            Ok(spec) => finish_string(out, spec.to_svg()),
            Err(e) => fail_with(&e),
        }
    })
}

/// Render the stacked mosaic of predicted classes per given class as an
/// SVG document; `show_outliers` carves the flagged objects into their own
/// segments. Writes a heap-allocated string to `out`; release it with
/// [`cm_string_free`].
///
/// # Safety
/// `table` must be a live table handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn cm_table_mosaic_svg(
    table: *const CmTable,
    show_outliers: bool,
    out: *mut *mut c_char,
) -> CmStatus {
    guarded(|| {
        if table.is_null() || out.is_null() {
            return fail(CmStatus::NullArgument, "table or out pointer is null");
        }
        let t = &(*table).table;
        let confusion = t.build_confusion();
        match layout_mosaic(
            &confusion,
            &t.class_names,
            show_outliers,
            &PlotOptions::default(),
        ) {
            Ok(spec) => finish_string(out, spec.to_svg()),
            Err(e) => fail_with(&e),
        }
    })
}

/// Release a table handle; null is ignored. Each handle must be freed
/// exactly once.
///
/// # Safety
/// `table` must be null or an owned handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cm_table_free(table: *mut CmTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Release a string obtained from a `char **` out-parameter; null is
/// ignored.
///
/// # Safety
/// `text` must be null or a string returned by this library and not freed
/// before.
#[no_mangle]
pub unsafe extern "C" fn cm_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
