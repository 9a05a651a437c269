//! Tuples of equal-length nonnegative columns with a common support, and the
//! row-stacking / columnwise-Kronecker algebra on them.

use crate::vector::{direct_sum, kron, NonNegVector, SupportSet};
use crate::{tol, Error};

/// A `d`-tuple of equal-length nonnegative columns sharing one support set.
/// Row `i` of the tuple is the vector `(p_i^(1), ..., p_i^(d))`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    columns: Vec<NonNegVector>,
}

impl MatrixTuple {
    pub fn new(columns: Vec<NonNegVector>) -> Result<Self, Error> {
        if columns.is_empty() {
            return Err(Error::InvalidValue("tuple must have at least one column".into()));
        }
        let rows = columns[0].len();
        for (k, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {k} has length {}, expected {rows}",
                    c.len()
                )));
            }
        }
        for i in 0..rows {
            let nonzero = columns.iter().filter(|c| c.entries()[i] > tol::ZERO).count();
            if nonzero != 0 && nonzero != columns.len() {
                return Err(Error::InvalidValue(format!(
                    "columns do not share a common support: row {i} is zero in some columns only"
                )));
            }
        }
        Ok(MatrixTuple { columns })
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self, Error> {
        let cols = columns
            .iter()
            .map(|c| NonNegVector::from_slice(c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(cols)
    }

    /// Wrap a single vector as a `d = 1` tuple.
    pub fn single(p: &NonNegVector) -> Self {
        MatrixTuple { columns: vec![p.clone()] }
    }

    pub fn d(&self) -> usize {
        self.columns.len()
    }

    pub fn rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn columns(&self) -> &[NonNegVector] {
        &self.columns
    }

    pub fn column(&self, k: usize) -> &NonNegVector {
        &self.columns[k]
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.columns[col].entries()[row]
    }

    /// The common support (computed from the union, which by the invariant
    /// equals every column's support).
    pub fn support(&self) -> SupportSet {
        SupportSet::from_sorted(
            (0..self.rows())
                .filter(|&i| self.columns.iter().any(|c| c.entries()[i] > tol::ZERO))
                .collect(),
        )
    }

    pub fn has_full_support(&self) -> bool {
        self.support().len() == self.rows()
    }

    /// True when every column sums to 1 within [`tol::NORM`].
    pub fn columns_normalized(&self) -> bool {
        self.columns.iter().all(|c| (c.sum() - 1.0).abs() <= tol::NORM)
    }

    pub fn normalized_columns(&self) -> Result<MatrixTuple, Error> {
        let cols = self
            .columns
            .iter()
            .map(|c| c.normalized().map(|p| p.into_nonneg()))
            .collect::<Result<Vec<_>, _>>()?;
        MatrixTuple::new(cols)
    }

    /// Columns restricted to the support rows.
    pub(crate) fn restricted_to_support(&self) -> (Vec<Vec<f64>>, SupportSet) {
        let supp = self.support();
        let cols = self
            .columns
            .iter()
            .map(|c| supp.indices().iter().map(|&i| c.entries()[i]).collect())
            .collect();
        (cols, supp)
    }
}

/// `P ⊞ Q`: stack the tuples, i.e. the columnwise direct sum.
pub fn tuple_boxplus(p: &MatrixTuple, q: &MatrixTuple) -> Result<MatrixTuple, Error> {
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch(format!(
            "boxplus needs equal d: {} vs {}",
            p.d(),
            q.d()
        )));
    }
    let cols = p
        .columns()
        .iter()
        .zip(q.columns())
        .map(|(a, b)| direct_sum(a, b))
        .collect();
    MatrixTuple::new(cols)
}

/// `P ⊠ Q`: the columnwise Kronecker product. All columns use the same row
/// order, so rows stay aligned across the tuple.
pub fn tuple_boxtimes(p: &MatrixTuple, q: &MatrixTuple) -> Result<MatrixTuple, Error> {
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch(format!(
            "boxtimes needs equal d: {} vs {}",
            p.d(),
            q.d()
        )));
    }
    let len = p.rows().checked_mul(q.rows()).unwrap_or(usize::MAX);
    if len > crate::caps::TENSOR_LEN {
        return Err(Error::SizeCapExceeded(format!(
            "boxtimes would materialize {} x {} rows",
            p.rows(),
            q.rows()
        )));
    }
    let cols = p
        .columns()
        .iter()
        .zip(q.columns())
        .map(|(a, b)| kron(a, b))
        .collect();
    MatrixTuple::new(cols)
}

/// `P^{⊠n}` for `n >= 1`, subject to the tensor length cap.
pub fn tuple_tensor_power(p: &MatrixTuple, n: usize) -> Result<MatrixTuple, Error> {
    if n == 0 {
        return Err(Error::InvalidValue("tuple tensor power requires n >= 1".into()));
    }
    crate::vector::check_power_len(p.rows(), n)?;
    let mut acc = p.clone();
    for _ in 1..n {
        acc = tuple_boxtimes(&acc, p)?;
    }
    Ok(acc)
}

/// Row-multiset equality modulo all-zero rows, entrywise within
/// [`tol::ENTRY`]. The tuple analogue of [`crate::vector::equiv`].
pub fn tuple_equiv(p: &MatrixTuple, q: &MatrixTuple) -> bool {
    if p.d() != q.d() {
        return false;
    }
    let rows_of = |t: &MatrixTuple| -> Vec<Vec<f64>> {
        let mut rows: Vec<Vec<f64>> = (0..t.rows())
            .map(|i| (0..t.d()).map(|k| t.entry(i, k)).collect())
            .filter(|r: &Vec<f64>| r.iter().any(|&e| e > tol::ZERO))
            .collect();
        rows.sort_by(|a, b| a.partial_cmp(b).expect("finite entries"));
        rows
    };
    let pr = rows_of(p);
    let qr = rows_of(q);
    pr.len() == qr.len()
        && pr
            .iter()
            .zip(&qr)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol::ENTRY))
}
