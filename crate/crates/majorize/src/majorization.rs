//! One-shot order decisions: the three vector preorders (partial-sum tests)
//! and matrix majorization as linear feasibility with explicit transition
//! witnesses.

use crate::exact::{exact_feasibility, rational_columns, ExactOutcome};
use crate::lp::{phase_one, residual, Feasibility, LpOutcome};
use crate::stochastic::StochasticMatrix;
use crate::tuple::MatrixTuple;
use crate::vector::{NonNegVector, ProbVector};
use crate::{caps, tol, Error};

/// Verdict of a feasibility question, with the witness when one exists.
/// `residual` is the max-norm of `T P - Q`; it is infinite when infeasible.
#[derive(Clone, Debug)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub witness: Option<StochasticMatrix>,
    pub residual: f64,
}

impl FeasibilityResult {
    fn infeasible() -> Self {
        FeasibilityResult { feasible: false, witness: None, residual: f64::INFINITY }
    }
}

fn prefix_sums_desc(x: &NonNegVector, len: usize) -> Vec<f64> {
    let sorted = x.padded(len).sorted_desc();
    let mut acc = 0.0;
    sorted
        .entries()
        .iter()
        .map(|e| {
            acc += e;
            acc
        })
        .collect()
}

/// Hardy-Littlewood-Pólya test: does `p` majorize `q`? True when every
/// initial partial sum of `p` sorted decreasingly dominates that of `q`
/// (vectors are zero-padded to a common length first).
pub fn hlp_majorizes(p: &ProbVector, q: &ProbVector) -> bool {
    dominates(p, q)
}

fn dominates(p: &NonNegVector, q: &NonNegVector) -> bool {
    let len = p.len().max(q.len());
    let sp = prefix_sums_desc(p, len);
    let sq = prefix_sums_desc(q, len);
    sp.iter().zip(&sq).all(|(a, b)| *a >= b - tol::CMP)
}

/// Submajorization: true when `p` sits below `q` in the weak order, i.e.
/// every initial sorted partial sum of `q` dominates that of `p`.
/// Equivalently, some bistochastic `T` has `T q >= p` entrywise. No
/// total-mass equality is required, but mass can never grow.
pub fn submajorizes(p: &NonNegVector, q: &NonNegVector) -> bool {
    dominates(q, p)
}

/// Modified majorization: the partial-sum test of `p` over `q` together with
/// equality of total masses and of support sizes.
pub fn modified_majorizes(p: &NonNegVector, q: &NonNegVector) -> bool {
    (p.sum() - q.sum()).abs() <= tol::CMP
        && p.support_size() == q.support_size()
        && dominates(p, q)
}

/// Is there a column-stochastic `T` with `T p^(k) = q^(k)` for all `k`?
///
/// Solved as phase-1 linear feasibility over the entries of `T` restricted
/// to the support rows of `P` and `Q`. Column-mass mismatches are refuted
/// without solving, and `Q = P` short-circuits to the identity witness.
/// Solver trouble surfaces as [`Error::NumericalFailure`], never as an
/// infeasible verdict.
pub fn matrix_majorizes(p: &MatrixTuple, q: &MatrixTuple) -> Result<FeasibilityResult, Error> {
    let d = p.d();
    if q.d() != d {
        return Err(Error::DimensionMismatch(format!("{} vs {} columns", d, q.d())));
    }

    for k in 0..d {
        if (p.column(k).sum() - q.column(k).sum()).abs() > tol::CMP {
            return Ok(FeasibilityResult::infeasible());
        }
    }

    if p.rows() == q.rows() {
        let equal = (0..d).all(|k| {
            p.column(k)
                .entries()
                .iter()
                .zip(q.column(k).entries())
                .all(|(a, b)| (a - b).abs() <= tol::LP / 10.0)
        });
        if equal {
            let id = StochasticMatrix::identity(p.rows());
            let res = id.max_residual(p, q)?;
            return Ok(FeasibilityResult { feasible: true, witness: Some(id), residual: res });
        }
    }

    let (pc, psupp) = p.restricted_to_support();
    let (qc, qsupp) = q.restricted_to_support();
    let n = psupp.len();
    let m = qsupp.len();
    if n == 0 || m == 0 {
        // masses already matched above, so either both tuples are zero or
        // only zero-threshold dust separates them
        if n == 0 && m == 0 {
            let (rows_t, cols_t) = (q.rows(), p.rows());
            let mut data = vec![0.0; rows_t * cols_t];
            data[..cols_t].fill(1.0);
            let t = StochasticMatrix::new(rows_t, cols_t, data)?;
            let res = t.max_residual(p, q)?;
            return Ok(FeasibilityResult { feasible: true, witness: Some(t), residual: res });
        }
        return Ok(FeasibilityResult::infeasible());
    }
    if n * m > caps::LP_VARS {
        return Err(Error::SizeCapExceeded(format!(
            "transition has {n} x {m} = {} variables, cap is {}",
            n * m,
            caps::LP_VARS
        )));
    }

    // Variables T'_{ij} on support rows, indexed j*m + i. Constraints:
    // each column of T' sums to 1 (n rows), then T' p^(k) = q^(k) (d*m rows).
    let nrows = n + d * m;
    let mut cols = Vec::with_capacity(n * m);
    for j in 0..n {
        for i in 0..m {
            let mut col = Vec::with_capacity(1 + d);
            col.push((j, 1.0));
            for (k, pcol) in pc.iter().enumerate() {
                if pcol[j] > 0.0 {
                    col.push((n + k * m + i, pcol[j]));
                }
            }
            cols.push(col);
        }
    }
    let mut rhs = vec![1.0; n];
    for qcol in &qc {
        rhs.extend_from_slice(qcol);
    }
    let prob = Feasibility { nrows, cols, rhs };

    match phase_one(&prob)? {
        LpOutcome::Infeasible => Ok(FeasibilityResult::infeasible()),
        LpOutcome::Feasible(x) => {
            if residual(&prob, &x) > tol::LP {
                return Err(Error::NumericalFailure(format!(
                    "phase-1 claims feasibility but the residual is {:.3e}",
                    residual(&prob, &x)
                )));
            }
            // Embed T' into the full row space. Columns of T outside the
            // support of P never act on anything; route them to the first
            // support row of Q to keep T column-stochastic.
            let (rows_t, cols_t) = (q.rows(), p.rows());
            let mut data = vec![0.0; rows_t * cols_t];
            for (jj, &j_full) in psupp.indices().iter().enumerate() {
                for (ii, &i_full) in qsupp.indices().iter().enumerate() {
                    data[i_full * cols_t + j_full] = x[jj * m + ii].max(0.0);
                }
            }
            let sink = qsupp.indices()[0];
            for j_full in 0..cols_t {
                if !psupp.contains(j_full) {
                    data[sink * cols_t + j_full] = 1.0;
                }
            }
            // normalize away roundoff in the column sums before validating
            for j in 0..cols_t {
                let s: f64 = (0..rows_t).map(|i| data[i * cols_t + j]).sum();
                if s > 0.0 && (s - 1.0).abs() <= tol::NORM {
                    for i in 0..rows_t {
                        data[i * cols_t + j] /= s;
                    }
                }
            }
            let t = StochasticMatrix::new(rows_t, cols_t, data)?;
            let res = t.max_residual(p, q)?;
            if res > tol::LP {
                return Err(Error::NumericalFailure(format!(
                    "extracted witness has residual {res:.3e} above {:.0e}",
                    tol::LP
                )));
            }
            Ok(FeasibilityResult { feasible: true, witness: Some(t), residual: res })
        }
    }
}

/// Exact-rational verdict for the same feasibility question. Inputs are
/// converted to the rationals their floats denote exactly; the verdict has
/// no tolerances. Caps at [`caps::EXACT_CELLS`] transition cells.
pub fn exact_matrix_majorizes(p: &MatrixTuple, q: &MatrixTuple) -> Result<FeasibilityResult, Error> {
    if q.d() != p.d() {
        return Err(Error::DimensionMismatch(format!("{} vs {} columns", p.d(), q.d())));
    }
    let pr = rational_columns(p)?;
    let qr = rational_columns(q)?;
    match exact_feasibility(&pr, &qr)? {
        ExactOutcome::Infeasible => Ok(FeasibilityResult::infeasible()),
        ExactOutcome::Feasible(x) => {
            let (n, m) = (p.rows(), q.rows());
            let mut data = vec![0.0; m * n];
            for j in 0..n {
                for i in 0..m {
                    let v = &x[j * m + i];
                    data[i * n + j] = rational_to_f64(v);
                }
            }
            let t = StochasticMatrix::new(m, n, data)?;
            Ok(FeasibilityResult { feasible: true, witness: Some(t), residual: 0.0 })
        }
    }
}

fn rational_to_f64(v: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(0.0)
}

/// Is there a bistochastic `T` with `T p = q`? This is the feasibility side
/// of the Hardy-Littlewood-Pólya equivalence; vectors are zero-padded to a
/// common length and `T` is square on that length.
pub fn bistochastic_majorizes(
    p: &NonNegVector,
    q: &NonNegVector,
) -> Result<FeasibilityResult, Error> {
    if (p.sum() - q.sum()).abs() > tol::CMP {
        return Ok(FeasibilityResult::infeasible());
    }
    let len = p.len().max(q.len());
    if len * len > caps::LP_VARS {
        return Err(Error::SizeCapExceeded(format!(
            "bistochastic witness needs {len} x {len} entries"
        )));
    }
    let pp = p.padded(len);
    let qp = q.padded(len);

    // Variables T_{ij} indexed i*len + j. Constraints: column sums (len),
    // row sums (len), then T p = q (len).
    let nrows = 3 * len;
    let mut cols = Vec::with_capacity(len * len);
    for i in 0..len {
        for j in 0..len {
            let mut col = vec![(j, 1.0), (len + i, 1.0)];
            if pp.entries()[j] != 0.0 {
                col.push((2 * len + i, pp.entries()[j]));
            }
            cols.push(col);
        }
    }
    let mut rhs = vec![1.0; 2 * len];
    rhs.extend_from_slice(qp.entries());
    let prob = Feasibility { nrows, cols, rhs };

    match phase_one(&prob)? {
        LpOutcome::Infeasible => Ok(FeasibilityResult::infeasible()),
        LpOutcome::Feasible(x) => {
            let t = StochasticMatrix::new(len, len, x.iter().map(|&v| v.max(0.0)).collect())?;
            let tp = t.apply(pp.entries())?;
            let res = tp
                .iter()
                .zip(qp.entries())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if res > tol::LP {
                return Err(Error::NumericalFailure(format!(
                    "bistochastic witness residual {res:.3e}"
                )));
            }
            Ok(FeasibilityResult { feasible: true, witness: Some(t), residual: res })
        }
    }
}
