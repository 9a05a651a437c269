//! The constructive side: tensor-power orders with explicit transitions,
//! catalysts in closed form, noise-mixed targets, and the end-to-end
//! approximate-catalytic pipeline. Every witness returned here is verified
//! against independently recomputed data before it leaves.

use crate::criteria::{check_matrix_necessary, check_matrix_sufficient, CheckConfig, CheckReport,
    SpectrumGrid, Verdict};
use crate::majorization::{hlp_majorizes, matrix_majorizes};
use crate::stochastic::StochasticMatrix;
use crate::tuple::{tuple_boxtimes, tuple_tensor_power, MatrixTuple};
use crate::vector::{check_power_len, direct_sum, kron, tensor_power, tensor_word, NonNegVector,
    ProbVector};
use crate::{caps, tol, Error};

/// A tensor-power order: `transition` maps `P` boxtimes-power `order` onto
/// the same power of `Q` within `residual`.
#[derive(Clone, Debug)]
pub struct AsymptoticWitness {
    pub order: usize,
    pub transition: StochasticMatrix,
    pub residual: f64,
}

/// Search `n = 1, 2, ...` for the least tensor power at which `P` maps onto
/// `Q`. `None` means no power up to `n_max` is feasible, which refutes
/// nothing. A power whose feasibility problem would blow a size cap aborts
/// the search with [`Error::SizeCapExceeded`] instead of silently skipping.
pub fn find_asymptotic_n(
    p: &MatrixTuple,
    q: &MatrixTuple,
    n_max: usize,
) -> Result<Option<AsymptoticWitness>, Error> {
    if n_max == 0 {
        return Err(Error::InvalidValue("n_max must be at least 1".into()));
    }
    for n in 1..=n_max {
        let pn = tuple_tensor_power(p, n)?;
        let qn = tuple_tensor_power(q, n)?;
        let result = matrix_majorizes(&pn, &qn)?;
        if result.feasible {
            return Ok(Some(AsymptoticWitness {
                order: n,
                transition: result.witness.expect("feasible result carries a witness"),
                residual: result.residual,
            }));
        }
    }
    Ok(None)
}

/// The `d = 1` specialization: the least `n <= n_max` with
/// `p` tensor-power-majorizing `q`, decided by sorted partial sums rather
/// than a feasibility solve.
pub fn find_asymptotic_n_vector(
    p: &ProbVector,
    q: &ProbVector,
    n_max: usize,
) -> Result<Option<usize>, Error> {
    if n_max == 0 {
        return Err(Error::InvalidValue("n_max must be at least 1".into()));
    }
    for n in 1..=n_max {
        check_power_len(p.len(), n)?;
        check_power_len(q.len(), n)?;
        let pn = ProbVector::new(tensor_power(p, n)?)?;
        let qn = ProbVector::new(tensor_power(q, n)?)?;
        if hlp_majorizes(&pn, &qn) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// The mixed tensor words `p^(n-1-s) ⊗ q^(s)` for `s = 0..n`, whose direct
/// sum is the standard catalyst.
fn catalyst_words(p: &NonNegVector, q: &NonNegVector, n: usize) -> Result<Vec<NonNegVector>, Error> {
    if n == 0 {
        return Err(Error::InvalidValue("catalyst order must be at least 1".into()));
    }
    let mut total: usize = 0;
    for s in 0..n {
        let len = p
            .len()
            .checked_pow((n - 1 - s) as u32)
            .and_then(|a| a.checked_mul(q.len().pow(s as u32)))
            .unwrap_or(usize::MAX);
        total = total.saturating_add(len);
    }
    if total > caps::TENSOR_LEN {
        return Err(Error::SizeCapExceeded(format!(
            "catalyst of order {n} would have {total} entries"
        )));
    }
    (0..n)
        .map(|s| Ok(kron(&tensor_word(p, n - 1 - s)?, &tensor_word(q, s)?)))
        .collect()
}

/// The standard catalyst of order `n`: the normalized direct sum of the
/// mixed tensor words. Order 1 is the scalar `(1)`, order 2 is
/// `(p ⊕ q) / 2`.
pub fn build_catalyst_vector(p: &ProbVector, q: &ProbVector, n: usize) -> Result<ProbVector, Error> {
    let words = catalyst_words(p, q, n)?;
    let mut acc = words[0].clone();
    for w in &words[1..] {
        acc = direct_sum(&acc, w);
    }
    acc.normalized()
}

/// The cross-term block `s`: the words strictly between the pure powers, so
/// that `p ⊗ r` and `q ⊗ r` decompose as `p^(⊗n) ⊕ s` and `s ⊕ q^(⊗n)` up
/// to row order. `None` at order 1, where the block is empty.
pub fn catalyst_cross_terms(
    p: &ProbVector,
    q: &ProbVector,
    n: usize,
) -> Result<Option<NonNegVector>, Error> {
    if n == 0 {
        return Err(Error::InvalidValue("catalyst order must be at least 1".into()));
    }
    if n == 1 {
        return Ok(None);
    }
    let mut acc: Option<NonNegVector> = None;
    for j in 1..n {
        let word = kron(&tensor_word(p, n - j)?, &tensor_word(q, j)?);
        acc = Some(match acc {
            None => word,
            Some(a) => direct_sum(&a, &word),
        });
    }
    Ok(acc)
}

/// Columnwise catalyst for a tuple pair, all columns sharing the order.
#[derive(Clone, Debug)]
pub struct CatalystTuple {
    pub columns: Vec<ProbVector>,
    pub order: usize,
}

impl CatalystTuple {
    pub fn as_tuple(&self) -> Result<MatrixTuple, Error> {
        MatrixTuple::new(self.columns.iter().map(|c| c.as_nonneg().clone()).collect())
    }
}

/// Catalyst columns `r^(k) = (1/n) ⊕_s p^(k)^(n-1-s) ⊗ q^(k)^(s)`,
/// normalized by construction (each word carries the column masses, which
/// are 1 for normalized inputs).
pub fn build_catalyst_tuple(
    p: &MatrixTuple,
    q: &MatrixTuple,
    n: usize,
) -> Result<CatalystTuple, Error> {
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch(format!("{} vs {} columns", p.d(), q.d())));
    }
    let columns = (0..p.d())
        .map(|k| {
            build_catalyst_vector(
                &p.column(k).clone().normalized()?,
                &q.column(k).clone().normalized()?,
                n,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CatalystTuple { columns, order: n })
}

/// Mix every column of `Q` with the noise vector `w`:
/// `q^(k) -> (1 - eps/2) q^(k) + (eps/2) w`, which moves each column by at
/// most `eps` in 1-norm.
pub fn noise_mix(q: &MatrixTuple, w: &ProbVector, epsilon: f64) -> Result<MatrixTuple, Error> {
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::InvalidValue(format!("epsilon {epsilon} must lie in (0, 2]")));
    }
    if w.len() != q.rows() {
        return Err(Error::DimensionMismatch(format!(
            "noise vector has {} entries for {} rows",
            w.len(),
            q.rows()
        )));
    }
    // written as a + (eps/2)(b - a) so a column equal to the noise vector
    // is reproduced bit for bit
    let half = epsilon / 2.0;
    let cols = q
        .columns()
        .iter()
        .map(|c| {
            NonNegVector::new(
                c.entries()
                    .iter()
                    .zip(w.entries())
                    .map(|(&a, &b)| (a + half * (b - a)).max(0.0))
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    MatrixTuple::new(cols)
}

/// A verified approximate-catalytic transformation: `transition` maps
/// `p^(k) ⊗ r^(k)` onto `q_eps^(k) ⊗ r^(k)` within `residual`.
#[derive(Clone, Debug)]
pub struct CatalyticWitness {
    pub q_eps: MatrixTuple,
    pub catalyst: CatalystTuple,
    pub transition: StochasticMatrix,
    pub order: usize,
    pub residual: f64,
    pub necessity: CheckReport,
    pub sufficiency: CheckReport,
}

#[derive(Clone, Debug)]
pub enum CatalyticOutcome {
    Found(Box<CatalyticWitness>),
    /// The divergence conditions already fail non-strictly; no catalyst can
    /// exist at any accuracy, so no search is run.
    NecessaryViolated(CheckReport),
    /// Every order up to the cap was solved and found infeasible. Not a
    /// refutation; the required order may simply be larger.
    NotFoundBelowCap { n_max: usize },
}

/// The full approximate-catalytic pipeline: refuse on a violated necessary
/// condition, otherwise mix `Q` toward the noise vector (the fixed column
/// itself when requested, uniform otherwise), confirm the strict
/// sufficiency margins, search for the tensor-power order, build the
/// catalyst of that order, and extract the catalytic transition by a final
/// feasibility solve on `P ⊠ R` versus `Q_eps ⊠ R`.
pub fn approx_catalytic_search(
    p: &MatrixTuple,
    q: &MatrixTuple,
    epsilon: f64,
    n_max: usize,
    fixed_column: Option<usize>,
    grid: &SpectrumGrid,
    cfg: &CheckConfig,
) -> Result<CatalyticOutcome, Error> {
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch(format!("{} vs {} columns", p.d(), q.d())));
    }
    if !p.has_full_support() || !q.has_full_support() {
        return Err(Error::InvalidValue(
            "the catalytic pipeline requires full-support tuples".into(),
        ));
    }
    if !p.columns_normalized() || !q.columns_normalized() {
        return Err(Error::InvalidValue("columns must be normalized".into()));
    }
    for k in 0..p.d() {
        for l in k + 1..p.d() {
            let same = p
                .column(k)
                .entries()
                .iter()
                .zip(p.column(l).entries())
                .all(|(a, b)| (a - b).abs() <= tol::ENTRY);
            if same {
                return Err(Error::ColumnsNotDistinct(format!(
                    "columns {k} and {l} of the source coincide"
                )));
            }
        }
    }
    if let Some(k) = fixed_column {
        if k >= q.d() {
            return Err(Error::InvalidValue(format!("fixed column {k} out of range {}", q.d())));
        }
    }

    let necessity = check_matrix_necessary(p, q, grid, cfg)?;
    if necessity.verdict == Verdict::Violated {
        return Ok(CatalyticOutcome::NecessaryViolated(necessity));
    }

    let w = match fixed_column {
        Some(k) => ProbVector::new(q.column(k).clone())?,
        None => ProbVector::uniform(q.rows())?,
    };
    let q_eps = noise_mix(q, &w, epsilon)?;
    let sufficiency = check_matrix_sufficient(p, &q_eps, grid, cfg)?;

    let Some(asymptotic) = find_asymptotic_n(p, &q_eps, n_max)? else {
        return Ok(CatalyticOutcome::NotFoundBelowCap { n_max });
    };

    let catalyst = build_catalyst_tuple(p, &q_eps, asymptotic.order)?;
    let r = catalyst.as_tuple()?;
    let pr = tuple_boxtimes(p, &r)?;
    let qr = tuple_boxtimes(&q_eps, &r)?;
    let feas = matrix_majorizes(&pr, &qr)?;
    if !feas.feasible {
        // the tensor-power witness guarantees existence; reaching this
        // branch means the final solve lost it numerically
        return Err(Error::NumericalFailure(
            "catalytic transition solve failed despite a tensor-power witness".into(),
        ));
    }
    Ok(CatalyticOutcome::Found(Box::new(CatalyticWitness {
        q_eps,
        catalyst,
        transition: feas.witness.expect("feasible result carries a witness"),
        order: asymptotic.order,
        residual: feas.residual,
        necessity,
        sufficiency,
    })))
}

/// A bistochastic matrix with `T p = q`, built from at most `len - 1`
/// two-coordinate averaging steps on the sorted vectors and conjugated by
/// the sorting permutations. Requires `p` to majorize `q`.
pub fn bistochastic_witness(p: &ProbVector, q: &ProbVector) -> Result<StochasticMatrix, Error> {
    if !hlp_majorizes(p, q) {
        return Err(Error::InvalidValue("p does not majorize q; no bistochastic map exists".into()));
    }
    let len = p.len().max(q.len());
    if len * len > caps::LP_VARS {
        return Err(Error::SizeCapExceeded(format!(
            "bistochastic witness would have {len} x {len} entries"
        )));
    }
    let pp = p.padded(len);
    let qp = q.padded(len);
    let sort_perm = |v: &NonNegVector| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..len).collect();
        idx.sort_by(|&a, &b| v.entries()[b].partial_cmp(&v.entries()[a]).expect("finite"));
        idx
    };
    let sp = sort_perm(&pp);
    let sq = sort_perm(&qp);
    let mut ps: Vec<f64> = sp.iter().map(|&i| pp.entries()[i]).collect();
    let qs: Vec<f64> = sq.iter().map(|&i| qp.entries()[i]).collect();

    // Accumulate the averaging steps into m, acting on sorted coordinates.
    let mut m = vec![0.0f64; len * len];
    for i in 0..len {
        m[i * len + i] = 1.0;
    }
    let mut steps = 0usize;
    loop {
        let worst = ps.iter().zip(&qs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if worst <= 1e-10 {
            break;
        }
        if steps > 8 * len {
            return Err(Error::NumericalFailure(
                "averaging construction did not converge".into(),
            ));
        }
        let j = (0..len)
            .find(|&j| ps[j] < qs[j] - 1e-12)
            .ok_or_else(|| Error::NumericalFailure("no deficit coordinate found".into()))?;
        let i = (0..j)
            .rev()
            .find(|&i| ps[i] > qs[i] + 1e-12)
            .ok_or_else(|| Error::NumericalFailure("no surplus coordinate found".into()))?;
        let delta = (ps[i] - qs[i]).min(qs[j] - ps[j]);
        let t = delta / (ps[i] - ps[j]);
        ps[i] -= delta;
        ps[j] += delta;
        for c in 0..len {
            let (ri, rj) = (m[i * len + c], m[j * len + c]);
            m[i * len + c] = (1.0 - t) * ri + t * rj;
            m[j * len + c] = t * ri + (1.0 - t) * rj;
        }
        steps += 1;
    }

    // Undo the sorting: T[sq[a]][sp[b]] = m[a][b].
    let mut data = vec![0.0f64; len * len];
    for a in 0..len {
        for b in 0..len {
            data[sq[a] * len + sp[b]] = m[a * len + b];
        }
    }
    let t = StochasticMatrix::new(len, len, data)?;
    let tp = t.apply(pp.entries())?;
    let res = tp.iter().zip(qp.entries()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if res > tol::LP {
        return Err(Error::NumericalFailure(format!(
            "averaging witness has residual {res:.3e}"
        )));
    }
    Ok(t)
}
