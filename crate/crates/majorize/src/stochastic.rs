//! Column-stochastic matrices: the transition witnesses of every order
//! decided by this crate. `T` acts on the left of column vectors.

use crate::tuple::MatrixTuple;
use crate::vector::NonNegVector;
use crate::{tol, Error};

/// An `m x n` matrix with nonnegative entries whose columns each sum to 1
/// within [`tol::NORM`]. Stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl StochasticMatrix {
    pub fn new(rows: usize, cols: usize, mut data: Vec<f64>) -> Result<Self, Error> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "storage of length {} does not match {rows} x {cols}",
                data.len()
            )));
        }
        for e in data.iter_mut() {
            if !e.is_finite() || *e < -tol::NORM {
                return Err(Error::InvalidValue(format!("entry {e} must be nonnegative")));
            }
            // roundoff from solvers may leave tiny negative dust
            if *e < 0.0 {
                *e = 0.0;
            }
        }
        for j in 0..cols {
            let s: f64 = (0..rows).map(|i| data[i * cols + j]).sum();
            if (s - 1.0).abs() > tol::NORM {
                return Err(Error::InvalidValue(format!(
                    "column {j} sums to {s}, expected 1 within {:e}",
                    tol::NORM
                )));
            }
        }
        Ok(StochasticMatrix { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        StochasticMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Row-major entries, as serialized in witness files.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `T x` for a column vector of length `cols`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} applied to {} x {} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j) * x[j]).sum())
            .collect())
    }

    pub fn apply_vector(&self, x: &NonNegVector) -> Result<NonNegVector, Error> {
        NonNegVector::new(self.apply(x.entries())?.iter().map(|&e| e.max(0.0)).collect())
    }

    /// `T P` columnwise. Common support is preserved: a row of `TP` is zero
    /// in one column exactly when the corresponding rows of `T` miss the
    /// support of `P`, which does not depend on the column.
    pub fn apply_tuple(&self, p: &MatrixTuple) -> Result<MatrixTuple, Error> {
        let cols = p
            .columns()
            .iter()
            .map(|c| self.apply_vector(c))
            .collect::<Result<Vec<_>, _>>()?;
        MatrixTuple::new(cols)
    }

    /// `self * other`.
    pub fn compose(&self, other: &StochasticMatrix) -> Result<StochasticMatrix, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{} x {} times {} x {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.entry(k, j);
                }
            }
        }
        StochasticMatrix::new(self.rows, other.cols, data)
    }

    /// Square with rows also summing to 1 within [`tol::NORM`].
    pub fn is_bistochastic(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                let s: f64 = (0..self.cols).map(|j| self.entry(i, j)).sum();
                (s - 1.0).abs() <= tol::NORM
            })
    }

    /// `max_{i,k} |(T p^(k))_i - q^(k)_i|`.
    pub fn max_residual(&self, p: &MatrixTuple, q: &MatrixTuple) -> Result<f64, Error> {
        if p.d() != q.d() || q.rows() != self.rows || p.rows() != self.cols {
            return Err(Error::DimensionMismatch("residual shapes do not line up".into()));
        }
        let mut worst = 0.0f64;
        for k in 0..p.d() {
            let tp = self.apply(p.column(k).entries())?;
            for (i, v) in tp.iter().enumerate() {
                worst = worst.max((v - q.entry(i, k)).abs());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_columns() {
        assert!(StochasticMatrix::new(2, 2, vec![0.5, 0.0, 0.5, 1.0]).is_ok());
        assert!(StochasticMatrix::new(2, 2, vec![0.5, 0.5, 0.4, 0.5]).is_err());
        assert!(StochasticMatrix::new(2, 2, vec![1.5, 0.0, -0.5, 1.0]).is_err());
    }

    #[test]
    fn identity_and_apply() {
        let id = StochasticMatrix::identity(3);
        assert!(id.is_bistochastic());
        let x = vec![0.2, 0.3, 0.5];
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn compose_is_stochastic() {
        let a = StochasticMatrix::new(2, 2, vec![0.3, 0.6, 0.7, 0.4]).unwrap();
        let b = StochasticMatrix::new(2, 2, vec![0.9, 0.2, 0.1, 0.8]).unwrap();
        let c = a.compose(&b).unwrap();
        for j in 0..2 {
            let s: f64 = (0..2).map(|i| c.entry(i, j)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
