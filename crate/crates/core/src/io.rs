//! CSV ingestion and artifact export.
//!
//! All readers expect UTF-8 CSV with a header row. Numbers are parsed with
//! a locale-independent decimal point; parse failures report the file,
//! line, and column. Raw class labels may be arbitrary strings and are
//! mapped to dense `1..=G` in order of first appearance — an order that
//! downstream tie-breaking also relies on.

use std::fs;
use std::path::Path;

use crate::data::{map_labels, DiagnosticTable, InputKind, LabeledInput};
use crate::error::Error;
use crate::numeric::Mat;
use crate::Result;

/// JSON Schema the exported diagnostics validate against; also shipped at
/// `schema/diagnostics.schema.json` and written next to every JSON export.
pub const DIAGNOSTICS_SCHEMA: &str = include_str!("../../../schema/diagnostics.schema.json");

/// Labeled raw texts, for the substring-spectrum kernel.
#[derive(Debug, Clone)]
pub struct LabeledStrings {
    /// One text per object, verbatim (not trimmed).
    pub texts: Vec<String>,
    /// Dense labels in `1..=G`, in first-appearance order.
    pub labels: Vec<usize>,
    /// Class names in label order.
    pub class_names: Vec<String>,
}

/// A parsed CSV file: unique header names plus one record per data row,
/// each remembering its 1-based line number.
struct CsvFile {
    headers: Vec<String>,
    rows: Vec<CsvRow>,
}

struct CsvRow {
    line: u64,
    cells: Vec<String>,
}

fn read_csv(path: &Path) -> Result<CsvFile> {
    let display = path.display().to_string();
    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: display.clone(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(&display, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    for (i, h) in headers.iter().enumerate() {
        if headers[..i].contains(h) {
            return Err(Error::CsvData {
                path: display,
                line: 1,
                column: i + 1,
                message: format!("duplicate header name {h:?}"),
            });
        }
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(&display, e))?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push(CsvRow {
            line,
            cells: record.iter().map(str::to_string).collect(),
        });
    }
    Ok(CsvFile { headers, rows })
}

/// Map a csv-crate error, surfacing the record line when one is attached.
fn csv_error(path: &str, e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => Error::CsvData {
            path: path.to_string(),
            line: pos.line(),
            column: 0,
            message: strip_position_prefix(&e),
        },
        None => Error::Csv {
            path: path.to_string(),
            message: e.to_string(),
        },
    }
}

/// The csv crate prefixes messages with "CSV error: record N (line: ...):";
/// the coordinates are reported separately, so keep only the description.
fn strip_position_prefix(e: &csv::Error) -> String {
    let s = e.to_string();
    match s.rsplit_once("): ") {
        Some((_, tail)) => tail.to_string(),
        None => s,
    }
}

fn parse_number(path: &str, line: u64, column: usize, cell: &str) -> Result<f64> {
    let value: f64 = cell.trim().parse().map_err(|_| Error::CsvData {
        path: path.to_string(),
        line,
        column,
        message: format!("cannot parse {cell:?} as a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::CsvData {
            path: path.to_string(),
            line,
            column,
            message: format!("non-finite value {cell:?}"),
        });
    }
    Ok(value)
}

/// Locate the labels column, or say which columns exist.
fn labels_column(file: &CsvFile, labels_col: &str, path: &str) -> Result<usize> {
    file.headers
        .iter()
        .position(|h| h == labels_col)
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "labels column {labels_col:?} not found in {path}; available columns: {}",
                file.headers.join(", ")
            ))
        })
}

/// Split every row into its raw label and the remaining cells.
fn split_rows(file: &CsvFile, label_idx: usize) -> (Vec<String>, Vec<CsvRow>) {
    let mut raw_labels = Vec::with_capacity(file.rows.len());
    let mut rest = Vec::with_capacity(file.rows.len());
    for row in &file.rows {
        raw_labels.push(row.cells[label_idx].trim().to_string());
        rest.push(CsvRow {
            line: row.line,
            cells: row
                .cells
                .iter()
                .enumerate()
                .filter_map(|(i, c)| (i != label_idx).then(|| c.clone()))
                .collect(),
        });
    }
    (raw_labels, rest)
}

/// Parse the non-label cells of every row as a numeric matrix, reporting
/// the original file coordinates on failure.
fn numeric_matrix(path: &str, label_idx: usize, rows: &[CsvRow], cols: usize) -> Result<Mat> {
    let mut data = Vec::with_capacity(rows.len() * cols);
    for row in rows {
        for (j, cell) in row.cells.iter().enumerate() {
            // Columns at or past the removed labels column sat one further
            // right in the file.
            let file_col = if j >= label_idx { j + 2 } else { j + 1 };
            data.push(parse_number(path, row.line, file_col, cell)?);
        }
    }
    Ok(Mat::from_rows(rows.len(), cols, data))
}

/// Read labeled coordinates: one labels column (by name), every other
/// column a numeric feature.
pub fn ingest_features(path: &Path, labels_col: &str) -> Result<LabeledInput> {
    let display = path.display().to_string();
    let file = read_csv(path)?;
    let label_idx = labels_column(&file, labels_col, &display)?;
    if file.headers.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "{display} has no feature columns besides {labels_col:?}"
        )));
    }
    let (raw_labels, rows) = split_rows(&file, label_idx);
    let (labels, class_names) = map_labels(&raw_labels);
    let matrix = numeric_matrix(&display, label_idx, &rows, file.headers.len() - 1)?;
    let feature_names = file
        .headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| (i != label_idx).then(|| h.clone()))
        .collect();
    LabeledInput::features(matrix, labels, class_names, feature_names)
}

/// Read a labeled square matrix (pairwise dissimilarities or a kernel):
/// one labels column plus exactly n numeric columns for n rows.
pub fn ingest_square(path: &Path, labels_col: &str, kind: InputKind) -> Result<LabeledInput> {
    let display = path.display().to_string();
    let file = read_csv(path)?;
    let label_idx = labels_column(&file, labels_col, &display)?;
    let (raw_labels, rows) = split_rows(&file, label_idx);
    let n = rows.len();
    let cols = file.headers.len() - 1;
    if cols != n {
        return Err(Error::InvalidInput(format!(
            "{display} has {n} rows but {cols} value columns; a pairwise matrix must be square"
        )));
    }
    let (labels, class_names) = map_labels(&raw_labels);
    let matrix = numeric_matrix(&display, label_idx, &rows, cols)?;
    match kind {
        InputKind::Dissimilarity => LabeledInput::dissimilarity(matrix, labels, class_names),
        InputKind::Kernel => LabeledInput::kernel(matrix, labels, class_names),
        InputKind::Features => Err(Error::InvalidInput(
            "feature matrices are not square inputs; use ingest_features".into(),
        )),
    }
}

/// Read labeled raw texts: one labels column plus exactly one text column.
/// Texts are kept verbatim (quoted whitespace included) for substring
/// counting.
pub fn ingest_strings(path: &Path, labels_col: &str) -> Result<LabeledStrings> {
    let display = path.display().to_string();
    let file = read_csv(path)?;
    let label_idx = labels_column(&file, labels_col, &display)?;
    if file.headers.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "{display} must have exactly one text column besides {labels_col:?}, found {}",
            file.headers.len() - 1
        )));
    }
    let (raw_labels, rows) = split_rows(&file, label_idx);
    if rows.is_empty() {
        return Err(Error::EmptySample);
    }
    let (labels, class_names) = map_labels(&raw_labels);
    let texts = rows.into_iter().map(|r| {
        let mut cells = r.cells;
        cells.pop().expect("one text cell per row")
    });
    Ok(LabeledStrings {
        texts: texts.collect(),
        labels,
        class_names,
    })
}

/// Read externally fitted model coefficients from a two-column CSV with
/// header `name,value`. Returns (name, value) pairs in file order.
pub fn read_coefficients(path: &Path) -> Result<Vec<(String, f64)>> {
    let display = path.display().to_string();
    let file = read_csv(path)?;
    if file.headers != ["name", "value"] {
        return Err(Error::InvalidInput(format!(
            "{display} must have header \"name,value\", found \"{}\"",
            file.headers.join(",")
        )));
    }
    let mut out: Vec<(String, f64)> = Vec::with_capacity(file.rows.len());
    for row in &file.rows {
        let name = row.cells[0].trim().to_string();
        if out.iter().any(|(n, _)| *n == name) {
            return Err(Error::CsvData {
                path: display,
                line: row.line,
                column: 1,
                message: format!("duplicate coefficient name {name:?}"),
            });
        }
        let value = parse_number(&display, row.line, 2, &row.cells[1])?;
        out.push((name, value));
    }
    if out.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(out)
}

/// Read a diagnostic table back from its JSON export, validating label
/// ranges against the class list.
pub fn read_diagnostics_json(path: &Path) -> Result<DiagnosticTable> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: display,
        source,
    })?;
    let table: DiagnosticTable = serde_json::from_str(&text)?;
    let g = table.n_classes();
    for row in &table.rows {
        for label in [row.given, row.predicted] {
            if label < 1 || label > g {
                return Err(Error::InvalidInput(format!(
                    "object {}: class label {label} unknown; known classes are 1..={g} ({})",
                    row.index,
                    table.class_names.join(", ")
                )));
            }
        }
        if row.farness.len() != g || row.farness_raw.len() != g {
            return Err(Error::InvalidInput(format!(
                "object {}: farness has {} entries for {g} classes",
                row.index,
                row.farness.len()
            )));
        }
    }
    Ok(table)
}

/// Write a text artifact, mapping failures to the crate error type.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn temp_csv(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn features_parse_with_first_appearance_label_order() {
        let f = temp_csv("x1,species,x2\n1.0,pear,2.0\n3.5,apple,-1e-2\n0.25,pear,4\n");
        let input = ingest_features(f.path(), "species").unwrap();
        assert_eq!(input.n(), 3);
        assert_eq!(input.kind(), InputKind::Features);
        assert_eq!(input.labels(), &[1, 2, 1]);
        assert_eq!(input.class_names(), &["pear".to_string(), "apple".to_string()]);
        assert_eq!(input.feature_names(), &["x1".to_string(), "x2".to_string()]);
        assert_eq!(input.matrix().get(1, 1), -1e-2);
        assert_eq!(input.matrix().get(2, 1), 4.0);
    }

    #[test]
    fn bad_cells_report_file_line_and_column() {
        let f = temp_csv("label,x1,x2\na,1.0,2.0\nb,oops,3.0\n");
        let err = ingest_features(f.path(), "label").unwrap_err();
        match err {
            Error::CsvData { line, column, message, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, 2);
                assert!(message.contains("oops"));
            }
            other => panic!("expected cell error, got {other}"),
        }
        // Labels column on the right shifts reported file columns.
        let f = temp_csv("x1,x2,label\n1.0,2.0,a\n1.0,nan,b\n");
        let err = ingest_features(f.path(), "label").unwrap_err();
        match err {
            Error::CsvData { line, column, .. } => {
                assert_eq!((line, column), (3, 2));
            }
            other => panic!("expected cell error, got {other}"),
        }
    }

    #[test]
    fn ragged_rows_report_their_line() {
        let f = temp_csv("label,x1,x2\na,1.0,2.0\nb,3.0\n");
        let err = ingest_features(f.path(), "label").unwrap_err();
        match err {
            Error::CsvData { line, .. } => assert_eq!(line, 3),
            other => panic!("expected csv error with line, got {other}"),
        }
    }

    #[test]
    fn duplicate_headers_are_rejected() {
        let f = temp_csv("x1,label,x1\n1.0,a,2.0\n");
        let err = ingest_features(f.path(), "label").unwrap_err();
        assert!(err.to_string().contains("duplicate header"));
    }

    #[test]
    fn missing_labels_column_lists_the_available_ones() {
        let f = temp_csv("x1,x2\n1.0,2.0\n");
        let err = ingest_features(f.path(), "label").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("\"label\""));
        assert!(msg.contains("x1, x2"));
    }

    #[test]
    fn square_inputs_must_be_square() {
        let f = temp_csv("label,o1,o2,o3\na,0,1,2\nb,1,0,3\n");
        let err = ingest_square(f.path(), "label", InputKind::Dissimilarity).unwrap_err();
        assert!(err.to_string().contains("square"));

        let f = temp_csv("label,o1,o2\na,0,1\nb,1,0\n");
        let input = ingest_square(f.path(), "label", InputKind::Dissimilarity).unwrap();
        assert_eq!(input.kind(), InputKind::Dissimilarity);
        assert_eq!(input.matrix().get(0, 1), 1.0);

        let f = temp_csv("label,o1,o2\na,2,1\nb,1,2\n");
        let input = ingest_square(f.path(), "label", InputKind::Kernel).unwrap();
        assert_eq!(input.kind(), InputKind::Kernel);
    }

    #[test]
    fn strings_keep_text_verbatim() {
        let f = temp_csv("class,seq\nx,\" AbC \"\ny,acgt\nx,\"a,b\"\n");
        let strings = ingest_strings(f.path(), "class").unwrap();
        assert_eq!(strings.texts, vec![" AbC ", "acgt", "a,b"]);
        assert_eq!(strings.labels, vec![1, 2, 1]);
        assert_eq!(strings.class_names, vec!["x", "y"]);

        let f = temp_csv("class,seq,extra\nx,a,b\ny,c,d\n");
        assert!(ingest_strings(f.path(), "class").is_err());
    }

    #[test]
    fn coefficients_parse_and_reject_duplicates() {
        let f = temp_csv("name,value\nintercept,0.5\nx1,-2.25\n");
        let coefs = read_coefficients(f.path()).unwrap();
        assert_eq!(
            coefs,
            vec![("intercept".to_string(), 0.5), ("x1".to_string(), -2.25)]
        );

        let f = temp_csv("name,value\nx1,1\nx1,2\n");
        let err = read_coefficients(f.path()).unwrap_err();
        assert!(err.to_string().contains("duplicate coefficient"));

        let f = temp_csv("coef,val\nx1,1\n");
        assert!(read_coefficients(f.path()).is_err());
    }

    #[test]
    fn diagnostics_json_round_trip_is_identity() {
        let farness = Mat::from_rows(2, 2, vec![0.5, 1.5, 2.0, 0.25]);
        let table = DiagnosticTable::assemble(
            "knn",
            vec!["a".into(), "b".into()],
            0.995,
            &[1, 2],
            &[2, 2],
            &[0.75, 0.0],
            &farness,
            &farness,
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("diagnostics.json");
        write_text(&path, &table.to_json_string().unwrap()).unwrap();
        let back = read_diagnostics_json(&path).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn diagnostics_json_with_unknown_class_label_is_rejected() {
        let farness = Mat::from_rows(1, 2, vec![0.5, 1.5]);
        let mut table = DiagnosticTable::assemble(
            "da",
            vec!["a".into(), "b".into()],
            0.995,
            &[1],
            &[1],
            &[0.0],
            &farness,
            &farness,
        );
        table.rows[0].predicted = 7;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("diagnostics.json");
        write_text(&path, &table.to_json_string().unwrap()).unwrap();
        let err = read_diagnostics_json(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("label 7 unknown"));
        assert!(msg.contains("a, b"));
    }

    #[test]
    fn exported_json_validates_against_the_shipped_schema() {
        let schema: serde_json::Value = serde_json::from_str(DIAGNOSTICS_SCHEMA).unwrap();
        let validator = jsonschema::validator_for(&schema).unwrap();

        let farness = Mat::from_rows(3, 2, vec![0.5, 1.5, 2.0, 0.25, 1.2, 1.3]);
        let table = DiagnosticTable::assemble(
            "svm",
            vec!["a".into(), "b".into()],
            0.995,
            &[1, 2, 1],
            &[2, 2, 1],
            &[0.75, 0.0, 1.0],
            &farness,
            &farness,
        );
        let doc: serde_json::Value =
            serde_json::from_str(&table.to_json_string().unwrap()).unwrap();
        assert!(validator.validate(&doc).is_ok());

        // The schema has teeth: a wrong classifier name and an
        // out-of-range dissimilarity both fail.
        let mut bad = doc.clone();
        bad["classifier"] = "nearest-centroid".into();
        assert!(validator.validate(&bad).is_err());
        let mut bad = doc;
        bad["rows"][0]["ld"] = 1.5.into();
        assert!(validator.validate(&bad).is_err());
    }

    #[test]
    fn missing_file_reports_the_path() {
        let err = ingest_features(Path::new("/nonexistent/data.csv"), "label").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/data.csv"));
        assert_eq!(err.exit_code(), 2);
    }
}
