//! CSV ingestion: distance matrices and point clouds.
//!
//! Both readers accept an optional header row (detected by trying to
//! parse the first record as numbers), require binary64 decimal
//! literals, and report failures with one-based row/column positions.

use std::fmt;
use std::path::Path;

use cyclerep_core::complex::{ComplexError, DissimilarityMatrix};

#[derive(Debug)]
pub enum IngestError {
    Io(std::io::Error),
    Csv(csv::Error),
    Parse { row: usize, col: usize, text: String },
    NonFinite { row: usize, col: usize },
    RaggedRow { row: usize, expected: usize, found: usize },
    NotSquare { rows: usize, cols: usize },
    Asymmetric { row: usize, col: usize },
    NegativeEntry { row: usize, col: usize },
    NonzeroDiagonal { row: usize },
    TooFewPoints { found: usize },
    Complex(ComplexError),
}

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IngestError::Io(e) => write!(f, "io error: {e}"),
            IngestError::Csv(e) => write!(f, "csv error: {e}"),
            IngestError::Parse { row, col, text } => {
                write!(f, "row {row}, column {col}: cannot parse {text:?} as a number")
            }
            IngestError::NonFinite { row, col } => {
                write!(f, "row {row}, column {col}: entry is not finite")
            }
            IngestError::RaggedRow { row, expected, found } => {
                write!(f, "row {row}: expected {expected} columns, found {found}")
            }
            IngestError::NotSquare { rows, cols } => {
                write!(f, "distance matrix must be square: {rows} rows, {cols} columns")
            }
            IngestError::Asymmetric { row, col } => {
                write!(f, "row {row}, column {col}: entry differs from its transpose")
            }
            IngestError::NegativeEntry { row, col } => {
                write!(f, "row {row}, column {col}: negative distance")
            }
            IngestError::NonzeroDiagonal { row } => {
                write!(f, "row {row}: nonzero diagonal entry")
            }
            IngestError::TooFewPoints { found } => {
                write!(f, "need at least 2 points, found {found}")
            }
            IngestError::Complex(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IngestError {}

impl From<std::io::Error> for IngestError {
    fn from(e: std::io::Error) -> Self {
        IngestError::Io(e)
    }
}

impl From<csv::Error> for IngestError {
    fn from(e: csv::Error) -> Self {
        IngestError::Csv(e)
    }
}

impl From<ComplexError> for IngestError {
    fn from(e: ComplexError) -> Self {
        IngestError::Complex(e)
    }
}

fn parse_field(text: &str, row: usize, col: usize) -> Result<f64, IngestError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| IngestError::Parse { row, col, text: text.to_string() })?;
    if !v.is_finite() {
        return Err(IngestError::NonFinite { row, col });
    }
    Ok(v)
}

/// Read every record as a numeric row; a non-numeric first record is
/// treated as a header and skipped. Row/column indices in errors are
/// one-based file positions (header included in the count).
fn read_numeric_rows(path: &Path) -> Result<Vec<Vec<f64>>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let file_row = idx + 1;
        if record.iter().all(|s| s.trim().is_empty()) {
            continue;
        }
        let parsed: Result<Vec<f64>, IngestError> = record
            .iter()
            .enumerate()
            .map(|(c, s)| parse_field(s, file_row, c + 1))
            .collect();
        match parsed {
            Ok(row) => rows.push(row),
            // Allow exactly one non-numeric record, the header, at the
            // top of the file; anywhere else it is an error.
            Err(_) if idx == 0 => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

fn check_rectangular(rows: &[Vec<f64>]) -> Result<usize, IngestError> {
    let width = rows.first().map_or(0, Vec::len);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(IngestError::RaggedRow {
                row: i + 1,
                expected: width,
                found: row.len(),
            });
        }
    }
    Ok(width)
}

/// Indices to keep after removing points at exact distance zero from an
/// earlier point (first occurrence wins).
fn dedupe_by_distance(rows: &[Vec<f64>]) -> Vec<usize> {
    let mut keep: Vec<usize> = Vec::new();
    for j in 0..rows.len() {
        if keep.iter().all(|&i| rows[i][j] != 0.0) {
            keep.push(j);
        }
    }
    keep
}

/// Read a distance-matrix CSV: square, exactly symmetric, zero
/// diagonal, non-negative. With `dedupe`, points at exact distance zero
/// from an earlier point are dropped.
pub fn read_distance_matrix(
    path: &Path,
    dedupe: bool,
) -> Result<DissimilarityMatrix, IngestError> {
    let mut rows = read_numeric_rows(path)?;
    let width = check_rectangular(&rows)?;
    if rows.len() != width {
        return Err(IngestError::NotSquare { rows: rows.len(), cols: width });
    }
    let n = rows.len();
    for i in 0..n {
        if rows[i][i] != 0.0 {
            return Err(IngestError::NonzeroDiagonal { row: i + 1 });
        }
        for j in 0..n {
            if rows[i][j] < 0.0 {
                return Err(IngestError::NegativeEntry { row: i + 1, col: j + 1 });
            }
            if rows[i][j] != rows[j][i] {
                return Err(IngestError::Asymmetric { row: i + 1, col: j + 1 });
            }
        }
    }
    if dedupe {
        let keep = dedupe_by_distance(&rows);
        rows = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| rows[i][j]).collect())
            .collect();
    }
    if rows.len() < 2 {
        return Err(IngestError::TooFewPoints { found: rows.len() });
    }
    Ok(DissimilarityMatrix::from_f64_rows(&rows)?)
}

/// Read a point-cloud CSV: one point per row, equal arity, finite
/// coordinates. With `dedupe`, exact duplicate rows are dropped.
pub fn read_point_cloud(path: &Path, dedupe: bool) -> Result<Vec<Vec<f64>>, IngestError> {
    let mut rows = read_numeric_rows(path)?;
    let width = check_rectangular(&rows)?;
    if width == 0 {
        return Err(IngestError::TooFewPoints { found: 0 });
    }
    if dedupe {
        let mut kept: Vec<Vec<f64>> = Vec::new();
        for row in rows {
            if !kept.iter().any(|k| k == &row) {
                kept.push(row);
            }
        }
        rows = kept;
    }
    if rows.len() < 2 {
        return Err(IngestError::TooFewPoints { found: rows.len() });
    }
    Ok(rows)
}
