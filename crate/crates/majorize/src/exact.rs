//! Exact-rational phase-1 simplex: the independent oracle behind the
//! floating-point feasibility decisions. No tolerances anywhere; verdicts
//! are exact for exactly-represented inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{caps, Error};

/// Convert a float to the rational it denotes exactly (binary expansion).
/// Never goes through a decimal string.
pub fn rational_from_f64(x: f64) -> Result<BigRational, Error> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::InvalidValue(format!("{x} has no exact rational value")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Feasible(Vec<BigRational>),
    Infeasible,
}

/// Decide `A x = b, x >= 0` exactly. Dense tableau, Bland's rule, so
/// termination is guaranteed and no numerical failure mode exists.
pub fn exact_phase_one(
    nrows: usize,
    cols: &[Vec<(usize, BigRational)>],
    rhs: &[BigRational],
) -> Result<ExactOutcome, Error> {
    let r = nrows;
    let nstruct = cols.len();
    if rhs.len() != r {
        return Err(Error::DimensionMismatch(format!("rhs has {} entries for {r} rows", rhs.len())));
    }
    if r == 0 {
        return Ok(ExactOutcome::Feasible(vec![BigRational::zero(); nstruct]));
    }

    let zero = BigRational::zero();
    let one = BigRational::one();

    // Dense tableau over structural + artificial columns, rows flipped so b >= 0.
    let width = nstruct + r + 1;
    let mut t = vec![zero.clone(); r * width];
    for i in 0..r {
        let neg = rhs[i] < zero;
        t[i * width + nstruct + r] = if neg { -rhs[i].clone() } else { rhs[i].clone() };
        t[i * width + nstruct + i] = one.clone();
        for (j, col) in cols.iter().enumerate() {
            for (row, v) in col {
                if *row == i {
                    let v = if neg { -v.clone() } else { v.clone() };
                    t[i * width + j] = &t[i * width + j] + v;
                }
            }
        }
    }

    let mut basis: Vec<usize> = (nstruct..nstruct + r).collect();

    loop {
        // Reduced cost of structural column j under phase-1 costs:
        // rc_j = -sum over artificial-basic rows of t[i][j].
        // Bland: enter the first column with rc < 0.
        let mut entering = None;
        'cols: for j in 0..nstruct {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = zero.clone();
            for i in 0..r {
                if basis[i] >= nstruct {
                    rc = rc - &t[i * width + j];
                }
            }
            if rc < zero {
                entering = Some(j);
                break 'cols;
            }
        }
        let Some(j) = entering else {
            let mass: BigRational = (0..r)
                .filter(|&i| basis[i] >= nstruct)
                .map(|i| t[i * width + nstruct + r].clone())
                .sum();
            if mass.is_zero() {
                let mut x = vec![zero.clone(); nstruct];
                for i in 0..r {
                    if basis[i] < nstruct {
                        x[basis[i]] = t[i * width + nstruct + r].clone();
                    }
                }
                return Ok(ExactOutcome::Feasible(x));
            }
            return Ok(ExactOutcome::Infeasible);
        };

        // Ratio test; Bland tie-break on the basic variable index.
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..r {
            let a = &t[i * width + j];
            if a > &zero {
                let theta = &t[i * width + nstruct + r] / a;
                match &leave {
                    None => leave = Some((i, theta)),
                    Some((li, lt)) => {
                        if theta < *lt || (theta == *lt && basis[i] < basis[*li]) {
                            leave = Some((i, theta));
                        }
                    }
                }
            }
        }
        let Some((lpos, _)) = leave else {
            // cannot happen: the phase-1 objective is bounded below by zero
            return Err(Error::NumericalFailure("unbounded exact phase-1 direction".into()));
        };

        let piv = t[lpos * width + j].clone();
        for k in 0..width {
            t[lpos * width + k] = &t[lpos * width + k] / &piv;
        }
        for i in 0..r {
            if i == lpos {
                continue;
            }
            let f = t[i * width + j].clone();
            if !f.is_zero() {
                for k in 0..width {
                    let delta = &f * &t[lpos * width + k];
                    t[i * width + k] = &t[i * width + k] - delta;
                }
            }
        }
        basis[lpos] = j;
    }
}

/// Exact matrix-majorization feasibility over rational columns: is there a
/// column-stochastic `T` with `T p^(k) = q^(k)` for every `k`?
///
/// Shapes: `p` and `q` are slices of `d` columns each; all columns within a
/// tuple share a length. Returns the witness as exact rationals.
pub fn exact_feasibility(
    p: &[Vec<BigRational>],
    q: &[Vec<BigRational>],
) -> Result<ExactOutcome, Error> {
    let d = p.len();
    if d == 0 || q.len() != d {
        return Err(Error::DimensionMismatch(format!("{} vs {} columns", p.len(), q.len())));
    }
    let n = p[0].len();
    let m = q[0].len();
    if p.iter().any(|c| c.len() != n) || q.iter().any(|c| c.len() != m) {
        return Err(Error::DimensionMismatch("ragged columns".into()));
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidValue("empty columns".into()));
    }
    if n * m > caps::EXACT_CELLS {
        return Err(Error::SizeCapExceeded(format!(
            "{n} x {m} transition exceeds the exact cap of {} cells",
            caps::EXACT_CELLS
        )));
    }
    for k in 0..d {
        if p[k].iter().any(|v| v.is_negative()) || q[k].iter().any(|v| v.is_negative()) {
            return Err(Error::InvalidValue("negative entries".into()));
        }
        // A stochastic map preserves column mass; mismatch is an immediate refutation.
        let sp: BigRational = p[k].iter().sum();
        let sq: BigRational = q[k].iter().sum();
        if sp != sq {
            return Ok(ExactOutcome::Infeasible);
        }
    }
    if p == q {
        let mut x = vec![BigRational::zero(); m * n];
        for i in 0..n {
            x[i * m + i] = BigRational::one();
        }
        return Ok(ExactOutcome::Feasible(x));
    }

    // Variables T_{ij} indexed j*m + i; constraints: column sums (n rows),
    // then T p^(k) = q^(k) blocks (d*m rows).
    let nrows = n + d * m;
    let mut cols = Vec::with_capacity(n * m);
    for j in 0..n {
        for i in 0..m {
            let mut col = Vec::with_capacity(1 + d);
            col.push((j, BigRational::one()));
            for k in 0..d {
                if !p[k][j].is_zero() {
                    col.push((n + k * m + i, p[k][j].clone()));
                }
            }
            cols.push(col);
        }
    }
    let mut rhs = vec![BigRational::one(); n];
    for k in 0..d {
        rhs.extend(q[k].iter().cloned());
    }
    exact_phase_one(nrows, &cols, &rhs)
}

/// Lift float tuples to exact rationals (binary expansion) columnwise.
pub fn rational_columns(t: &crate::tuple::MatrixTuple) -> Result<Vec<Vec<BigRational>>, Error> {
    t.columns()
        .iter()
        .map(|c| c.entries().iter().map(|&e| rational_from_f64(e)).collect())
        .collect()
}

/// [`exact_feasibility`] packaged as a [`FeasibilityResult`]: the witness is
/// converted to floats, the verdict and the zero residual are exact.
pub fn exact_feasibility_result(
    p: &[Vec<BigRational>],
    q: &[Vec<BigRational>],
) -> Result<crate::majorization::FeasibilityResult, Error> {
    use crate::majorization::FeasibilityResult;
    use num_traits::ToPrimitive;
    match exact_feasibility(p, q)? {
        ExactOutcome::Infeasible => Ok(FeasibilityResult {
            feasible: false,
            witness: None,
            residual: f64::INFINITY,
        }),
        ExactOutcome::Feasible(x) => {
            let n = p[0].len();
            let m = q[0].len();
            let mut data = vec![0.0; m * n];
            for j in 0..n {
                for i in 0..m {
                    data[i * n + j] = x[j * m + i].to_f64().unwrap_or(0.0);
                }
            }
            Ok(FeasibilityResult {
                feasible: true,
                witness: Some(crate::stochastic::StochasticMatrix::new(m, n, data)?),
                residual: 0.0,
            })
        }
    }
}

/// Exact bistochastic feasibility: is there a doubly stochastic `T` with
/// `T p = q`? Vectors are zero-padded to a common length. This is the
/// exact twin of the floating-point Hardy-Littlewood-Pólya oracle.
pub fn exact_bistochastic_majorizes(
    p: &[BigRational],
    q: &[BigRational],
) -> Result<crate::majorization::FeasibilityResult, Error> {
    use crate::majorization::FeasibilityResult;
    use num_traits::ToPrimitive;
    if p.is_empty() || q.is_empty() {
        return Err(Error::InvalidValue("empty vectors".into()));
    }
    if p.iter().chain(q.iter()).any(|v| v.is_negative()) {
        return Err(Error::InvalidValue("negative entries".into()));
    }
    let len = p.len().max(q.len());
    if len * len > caps::EXACT_CELLS {
        return Err(Error::SizeCapExceeded(format!(
            "{len} x {len} bistochastic witness exceeds the exact cap"
        )));
    }
    let sp: BigRational = p.iter().sum();
    let sq: BigRational = q.iter().sum();
    if sp != sq {
        return Ok(FeasibilityResult { feasible: false, witness: None, residual: f64::INFINITY });
    }
    let zero = BigRational::zero();
    let pad = |v: &[BigRational], i: usize| v.get(i).cloned().unwrap_or_else(|| zero.clone());

    // Variables T_{ij} indexed i*len + j; constraints: column sums, row
    // sums, then T p = q.
    let mut cols = Vec::with_capacity(len * len);
    for i in 0..len {
        for j in 0..len {
            let mut col = vec![(j, BigRational::one()), (len + i, BigRational::one())];
            let pj = pad(p, j);
            if !pj.is_zero() {
                col.push((2 * len + i, pj));
            }
            cols.push(col);
        }
    }
    let mut rhs = vec![BigRational::one(); 2 * len];
    for i in 0..len {
        rhs.push(pad(q, i));
    }
    match exact_phase_one(3 * len, &cols, &rhs)? {
        ExactOutcome::Infeasible => Ok(FeasibilityResult {
            feasible: false,
            witness: None,
            residual: f64::INFINITY,
        }),
        ExactOutcome::Feasible(x) => {
            let data: Vec<f64> = x.iter().map(|v| v.to_f64().unwrap_or(0.0)).collect();
            Ok(FeasibilityResult {
                feasible: true,
                witness: Some(crate::stochastic::StochasticMatrix::new(len, len, data)?),
                residual: 0.0,
            })
        }
    }
}

pub fn rational_of_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_float_is_binary_exact() {
        // 0.1 is not a decimal tenth in binary
        let r = rational_from_f64(0.1).unwrap();
        assert_ne!(r, ratio(1, 10));
        assert_eq!(r, BigRational::new(BigInt::from(3602879701896397u64), BigInt::from(1u64) << 55));
        assert_eq!(rational_from_f64(0.5).unwrap(), ratio(1, 2));
    }

    #[test]
    fn identity_when_tuples_match() {
        let p = vec![vec![ratio(1, 2), ratio(1, 2)], vec![ratio(1, 4), ratio(3, 4)]];
        match exact_feasibility(&p, &p).unwrap() {
            ExactOutcome::Feasible(x) => {
                assert_eq!(x[0], BigRational::one());
                assert_eq!(x[3], BigRational::one());
            }
            ExactOutcome::Infeasible => panic!("identity must be feasible"),
        }
    }

    #[test]
    fn mass_mismatch_is_infeasible() {
        let p = vec![vec![ratio(1, 2), ratio(1, 2)]];
        let q = vec![vec![ratio(1, 2), ratio(1, 4)]];
        assert_eq!(exact_feasibility(&p, &q).unwrap(), ExactOutcome::Infeasible);
    }

    #[test]
    fn crossing_dichotomy_is_infeasible() {
        // two dichotomies where neither one-shot direction holds
        let p = vec![
            vec![ratio(3, 4), ratio(1, 4)],
            vec![ratio(1, 4), ratio(3, 4)],
        ];
        let q = vec![
            vec![ratio(9, 10), ratio(1, 10)],
            vec![ratio(1, 2), ratio(1, 2)],
        ];
        assert_eq!(exact_feasibility(&p, &q).unwrap(), ExactOutcome::Infeasible);
    }

    #[test]
    fn collapse_to_row_of_masses_is_feasible() {
        let p = vec![
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ratio(1, 8), ratio(7, 8)],
        ];
        let q = vec![vec![ratio(1, 1)], vec![ratio(1, 1)]];
        match exact_feasibility(&p, &q).unwrap() {
            ExactOutcome::Feasible(x) => assert!(x.iter().all(|v| *v == BigRational::one())),
            ExactOutcome::Infeasible => panic!("all-ones row must be reachable"),
        }
    }
}
