//! Exact rational arithmetic and column-major sparse matrices over ℚ.
//!
//! Every chain coefficient, filtration key, and LP pivot in this crate is an
//! [`ExactRational`]; there is no floating-point arithmetic anywhere in the
//! algebra. Floats appear only at the boundary: exact embedding of binary64
//! inputs via [`rat_from_float`] and lossy display via [`rat_to_f64`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational in canonical form: positive denominator,
/// gcd(|numerator|, denominator) = 1. The backing type maintains canonical
/// form after every arithmetic operation.
pub type ExactRational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational n/d (d ≠ 0); normalizes sign and reduces.
pub fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

/// Conversion error for non-finite float input.
#[derive(Debug, Clone, PartialEq)]
pub enum RationalError {
    /// NaN or infinite input has no rational value.
    NonFinite(f64),
}

impl fmt::Display for RationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalError::NonFinite(x) => write!(f, "non-finite value {x} has no exact rational"),
        }
    }
}

impl core::error::Error for RationalError {}

/// Exact rational value of a finite binary64 number.
///
/// Every finite binary64 is a dyadic rational; the result converts back to
/// the input bit-exactly via [`rat_to_f64`] (the single exception is -0.0,
/// which maps to the rational zero and returns as +0.0, an equal value).
pub fn rat_from_float(x: f64) -> Result<ExactRational, RationalError> {
    if !x.is_finite() {
        return Err(RationalError::NonFinite(x));
    }
    Ok(ExactRational::from_float(x).expect("finite floats are rational"))
}

/// Nearest binary64 to an exact rational. Values beyond the binary64 range
/// saturate to the signed infinity.
pub fn rat_to_f64(r: &ExactRational) -> f64 {
    match r.to_f64() {
        Some(v) => v,
        None => {
            if r.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Render `r` as "n/d" ("n" when integral); exact, for reports and dumps.
pub fn rat_to_string(r: &ExactRational) -> String {
    use alloc::format;
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Structural errors for sparse-matrix construction and slicing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    RowIndexOutOfRange { index: usize, num_rows: usize },
    ColumnIndexOutOfRange { index: usize, num_cols: usize },
    DuplicateIndex { index: usize },
    UnsortedOrZeroEntry { column: usize },
    DimensionMismatch { left: usize, right: usize },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::RowIndexOutOfRange { index, num_rows } => {
                write!(f, "row index {index} out of range ({num_rows} rows)")
            }
            MatrixError::ColumnIndexOutOfRange { index, num_cols } => {
                write!(f, "column index {index} out of range ({num_cols} columns)")
            }
            MatrixError::DuplicateIndex { index } => {
                write!(f, "duplicate index {index} in selection")
            }
            MatrixError::UnsortedOrZeroEntry { column } => {
                write!(f, "column {column}: entries must be strictly row-sorted and nonzero")
            }
            MatrixError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
        }
    }
}

impl core::error::Error for MatrixError {}

/// Sparse column entries: (row index, value), strictly increasing rows, no
/// stored zeros.
pub type SparseColumn = Vec<(usize, ExactRational)>;

/// Column-major sparse matrix over ℚ.
///
/// Columns keep their entries sorted by row index with no zeros, so equality
/// is structural and column merges (the workhorse of boundary reduction and
/// rank computation) are single linear passes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    num_rows: usize,
    columns: Vec<SparseColumn>,
}

impl SparseRationalMatrix {
    /// Zero matrix of the given shape.
    pub fn zero(num_rows: usize, num_cols: usize) -> Self {
        SparseRationalMatrix {
            num_rows,
            columns: alloc::vec![Vec::new(); num_cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let columns = (0..n)
            .map(|j| alloc::vec![(j, rat_int(1))])
            .collect();
        SparseRationalMatrix { num_rows: n, columns }
    }

    /// Build from explicit sparse columns; validates the column invariants.
    pub fn from_columns(
        num_rows: usize,
        columns: Vec<SparseColumn>,
    ) -> Result<Self, MatrixError> {
        for (j, col) in columns.iter().enumerate() {
            validate_column(col, num_rows, j)?;
        }
        Ok(SparseRationalMatrix { num_rows, columns })
    }

    /// Build from dense rows of exact rationals (test and oracle convenience).
    pub fn from_rows(rows: &[Vec<ExactRational>]) -> Self {
        let num_rows = rows.len();
        let num_cols = rows.first().map_or(0, Vec::len);
        let mut columns = alloc::vec![Vec::new(); num_cols];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), num_cols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    columns[j].push((i, v.clone()));
                }
            }
        }
        SparseRationalMatrix { num_rows, columns }
    }

    /// Build from dense rows of integers.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let converted: Vec<Vec<ExactRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.columns.len()
    }

    /// Entries of column `j`.
    pub fn column(&self, j: usize) -> &[(usize, ExactRational)] {
        &self.columns[j]
    }

    pub fn is_column_zero(&self, j: usize) -> bool {
        self.columns[j].is_empty()
    }

    /// Largest row index with a nonzero entry in column `j` (the "low" of
    /// the column), if any. Columns are row-sorted, so this is the last entry.
    pub fn column_low(&self, j: usize) -> Option<usize> {
        self.columns[j].last().map(|&(i, _)| i)
    }

    /// Value at (i, j); zero when not stored.
    pub fn entry(&self, i: usize, j: usize) -> ExactRational {
        match self.columns[j].binary_search_by_key(&i, |&(r, _)| r) {
            Ok(pos) => self.columns[j][pos].1.clone(),
            Err(_) => ExactRational::zero(),
        }
    }

    /// Replace column `j`; validates the column invariants.
    pub fn set_column(&mut self, j: usize, col: SparseColumn) -> Result<(), MatrixError> {
        validate_column(&col, self.num_rows, j)?;
        self.columns[j] = col;
        Ok(())
    }

    /// column[dst] += factor · column[src] (sparse merge; zeros dropped).
    pub fn add_scaled_column(&mut self, dst: usize, src: usize, factor: &ExactRational) {
        if factor.is_zero() || self.columns[src].is_empty() {
            return;
        }
        let merged = merge_scaled(&self.columns[dst], &self.columns[src], factor);
        self.columns[dst] = merged;
    }

    /// Rank over ℚ by sparse left-to-right column reduction: each column is
    /// cancelled against recorded pivot columns until its low row is fresh or
    /// the column vanishes. Nonzero reduced columns have distinct lows and
    /// are therefore independent.
    pub fn rank(&self) -> usize {
        let mut pivots: BTreeMap<usize, SparseColumn> = BTreeMap::new();
        let mut rank = 0;
        for j in 0..self.num_cols() {
            let mut col = self.columns[j].clone();
            while let Some(&(low, ref coeff)) = col.last() {
                match pivots.get(&low) {
                    Some(piv) => {
                        let piv_coeff = &piv.last().expect("pivot columns are nonzero").1;
                        let factor = -(coeff / piv_coeff);
                        col = merge_scaled(&col, piv, &factor);
                    }
                    None => break,
                }
            }
            if let Some(&(low, _)) = col.last() {
                pivots.insert(low, col);
                rank += 1;
            }
        }
        rank
    }

    /// Submatrix with the selected rows and columns, re-indexed in the order
    /// given (selection order becomes the new index order).
    pub fn submatrix(
        &self,
        rows: &[usize],
        cols: &[usize],
    ) -> Result<SparseRationalMatrix, MatrixError> {
        let mut row_map: BTreeMap<usize, usize> = BTreeMap::new();
        for (new, &old) in rows.iter().enumerate() {
            if old >= self.num_rows {
                return Err(MatrixError::RowIndexOutOfRange {
                    index: old,
                    num_rows: self.num_rows,
                });
            }
            if row_map.insert(old, new).is_some() {
                return Err(MatrixError::DuplicateIndex { index: old });
            }
        }
        let mut columns = Vec::with_capacity(cols.len());
        let mut seen_cols: BTreeMap<usize, ()> = BTreeMap::new();
        for &old in cols {
            if old >= self.num_cols() {
                return Err(MatrixError::ColumnIndexOutOfRange {
                    index: old,
                    num_cols: self.num_cols(),
                });
            }
            if seen_cols.insert(old, ()).is_some() {
                return Err(MatrixError::DuplicateIndex { index: old });
            }
            let mut col: SparseColumn = self.columns[old]
                .iter()
                .filter_map(|(r, v)| row_map.get(r).map(|&nr| (nr, v.clone())))
                .collect();
            col.sort_by_key(|&(r, _)| r);
            columns.push(col);
        }
        Ok(SparseRationalMatrix {
            num_rows: rows.len(),
            columns,
        })
    }

    /// Exact matrix product self · rhs.
    pub fn matmul(&self, rhs: &SparseRationalMatrix) -> Result<SparseRationalMatrix, MatrixError> {
        if self.num_cols() != rhs.num_rows() {
            return Err(MatrixError::DimensionMismatch {
                left: self.num_cols(),
                right: rhs.num_rows(),
            });
        }
        let columns = (0..rhs.num_cols())
            .map(|j| self.mul_sparse_vec(rhs.column(j)))
            .collect();
        Ok(SparseRationalMatrix {
            num_rows: self.num_rows,
            columns,
        })
    }

    /// Exact product self · v for a sparse vector over the columns.
    pub fn mul_sparse_vec(&self, v: &[(usize, ExactRational)]) -> SparseColumn {
        let mut acc: SparseColumn = Vec::new();
        for (k, coeff) in v {
            acc = merge_scaled(&acc, &self.columns[*k], coeff);
        }
        acc
    }

    /// Dense copy (tests and debug output).
    pub fn to_dense(&self) -> Vec<Vec<ExactRational>> {
        let mut rows = alloc::vec![alloc::vec![ExactRational::zero(); self.num_cols()]; self.num_rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                rows[*i][j] = v.clone();
            }
        }
        rows
    }
}

fn validate_column(col: &SparseColumn, num_rows: usize, j: usize) -> Result<(), MatrixError> {
    let mut prev: Option<usize> = None;
    for (i, v) in col {
        if *i >= num_rows {
            return Err(MatrixError::RowIndexOutOfRange {
                index: *i,
                num_rows,
            });
        }
        if v.is_zero() || prev.is_some_and(|p| p >= *i) {
            return Err(MatrixError::UnsortedOrZeroEntry { column: j });
        }
        prev = Some(*i);
    }
    Ok(())
}

/// a + factor · b as a fresh sorted sparse column with zeros dropped.
pub fn merge_scaled(
    a: &[(usize, ExactRational)],
    b: &[(usize, ExactRational)],
    factor: &ExactRational,
) -> SparseColumn {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut ia, mut ib) = (0, 0);
    while ia < a.len() || ib < b.len() {
        match (a.get(ia), b.get(ib)) {
            (Some((ra, va)), Some((rb, vb))) => {
                use core::cmp::Ordering;
                match ra.cmp(rb) {
                    Ordering::Less => {
                        out.push((*ra, va.clone()));
                        ia += 1;
                    }
                    Ordering::Greater => {
                        out.push((*rb, vb * factor));
                        ib += 1;
                    }
                    Ordering::Equal => {
                        let sum = va + &(vb * factor);
                        if !sum.is_zero() {
                            out.push((*ra, sum));
                        }
                        ia += 1;
                        ib += 1;
                    }
                }
            }
            (Some((ra, va)), None) => {
                out.push((*ra, va.clone()));
                ia += 1;
            }
            (None, Some((rb, vb))) => {
                out.push((*rb, vb * factor));
                ib += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}
