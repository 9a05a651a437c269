//! The monotone quantities that govern asymptotic and catalytic orders:
//! power sums `f_alpha` and their extreme limits, Shannon entropy and the
//! log-product derivation, Rényi entropies and divergences, and the matrix
//! families (alpha-divergences, tropical divergences, derivations, the
//! lambda-trajectory joining them, and the multiple Chernoff divergence).
//!
//! Products over columns are evaluated in the log domain (sums of
//! `alpha_k * ln p`) with log-sum-exp for the outer sum, so large tensor
//! powers neither overflow nor underflow. All logarithms are natural.

use crate::num::log_sum_exp;
use crate::tuple::MatrixTuple;
use crate::vector::{NonNegVector, ProbVector};
use crate::{tol, Error};

/// A real number or positive infinity, as produced by Rényi divergences on
/// mismatched supports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn as_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }
}

/// `lhs - rhs` as a margin. `None` when both sides are infinite: such a
/// comparison is incomparable-at-infinity, not an equality.
pub fn ext_margin(lhs: ExtReal, rhs: ExtReal) -> Option<f64> {
    match (lhs, rhs) {
        (ExtReal::Infinite, ExtReal::Infinite) => None,
        (ExtReal::Infinite, ExtReal::Finite(_)) => Some(f64::INFINITY),
        (ExtReal::Finite(_), ExtReal::Infinite) => Some(f64::NEG_INFINITY),
        (ExtReal::Finite(a), ExtReal::Finite(b)) => Some(a - b),
    }
}

// ---------------------------------------------------------------------------
// scalar families
// ---------------------------------------------------------------------------

/// `f_alpha(p) = sum over supp p of p_i^alpha`. The restriction to the
/// support matters only for `alpha <= 0`.
pub fn f_alpha(p: &NonNegVector, alpha: f64) -> f64 {
    p.entries()
        .iter()
        .filter(|&&e| e > tol::ZERO)
        .map(|&e| e.powf(alpha))
        .sum()
}

/// `ln f_alpha(p)`, stable for exponents far beyond what `f_alpha` itself
/// can represent.
pub fn log_f_alpha(p: &NonNegVector, alpha: f64) -> f64 {
    let terms: Vec<f64> = p
        .entries()
        .iter()
        .filter(|&&e| e > tol::ZERO)
        .map(|&e| alpha * e.ln())
        .collect();
    log_sum_exp(&terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremeSign {
    Plus,
    Minus,
}

/// `f_inf(p) = max over supp p`, `f_{-inf}(p) = (min over supp p)^{-1}`.
///
/// Panics on a zero vector: both extremes are taken over the support.
pub fn f_extreme(p: &NonNegVector, sign: ExtremeSign) -> f64 {
    match sign {
        ExtremeSign::Plus => p.max_entry(),
        ExtremeSign::Minus => {
            1.0 / p.min_support_entry().expect("f_extreme needs a nonzero vector")
        }
    }
}

/// Shannon entropy `-sum p_i ln p_i` with `0 ln 0 = 0`.
pub fn shannon_entropy(p: &NonNegVector) -> f64 {
    -p.entries()
        .iter()
        .filter(|&&e| e > tol::ZERO)
        .map(|&e| e * e.ln())
        .sum::<f64>()
}

/// `H'_0(p) = sum over supp p of ln p_i`, the derivation paired with the
/// support count the way Shannon entropy is paired with total mass.
pub fn h0_prime(p: &NonNegVector) -> f64 {
    p.entries()
        .iter()
        .filter(|&&e| e > tol::ZERO)
        .map(|&e| e.ln())
        .sum()
}

/// Rényi entropy for `alpha` in `[0, inf]` (pass `f64::INFINITY` for the
/// min-entropy endpoint).
pub fn renyi_entropy(p: &ProbVector, alpha: f64) -> f64 {
    assert!(alpha >= 0.0 && !alpha.is_nan(), "Rényi order must lie in [0, inf]");
    if alpha == 0.0 {
        (p.support_size() as f64).ln()
    } else if alpha == 1.0 {
        shannon_entropy(p)
    } else if alpha.is_infinite() {
        -p.max_entry().ln()
    } else {
        log_f_alpha(p, alpha) / (1.0 - alpha)
    }
}

/// Rényi divergence for `alpha` in `[0, inf]`, with the support case split:
///
/// * `alpha = 0`: `-ln sum_{i in supp p} q_i`, needs overlapping supports;
/// * `alpha in (0,1)`: `(alpha-1)^{-1} ln sum p_i^alpha q_i^{1-alpha}`,
///   needs overlapping supports;
/// * `alpha = 1`: Kullback-Leibler, needs `supp p` inside `supp q`;
/// * `alpha in (1,inf)`: same power sum, needs `supp p` inside `supp q`;
/// * `alpha = inf`: `max_{i in supp q} ln(p_i / q_i)`, needs `supp p`
///   inside `supp q`;
/// * infinite otherwise.
///
/// Vectors are zero-padded to a common length first.
pub fn renyi_divergence(p: &ProbVector, q: &ProbVector, alpha: f64) -> ExtReal {
    assert!(alpha >= 0.0 && !alpha.is_nan(), "Rényi order must lie in [0, inf]");
    let len = p.len().max(q.len());
    let pp = p.padded(len);
    let qp = q.padded(len);
    let pe = pp.entries();
    let qe = qp.entries();

    let overlap = (0..len).any(|i| pe[i] > tol::ZERO && qe[i] > tol::ZERO);
    let p_inside_q = (0..len).all(|i| pe[i] <= tol::ZERO || qe[i] > tol::ZERO);

    if alpha == 0.0 {
        if !overlap {
            return ExtReal::Infinite;
        }
        let mass: f64 = (0..len).filter(|&i| pe[i] > tol::ZERO).map(|i| qe[i]).sum();
        ExtReal::Finite(-mass.ln())
    } else if alpha < 1.0 {
        if !overlap {
            return ExtReal::Infinite;
        }
        let terms: Vec<f64> = (0..len)
            .filter(|&i| pe[i] > tol::ZERO && qe[i] > tol::ZERO)
            .map(|i| alpha * pe[i].ln() + (1.0 - alpha) * qe[i].ln())
            .collect();
        ExtReal::Finite(log_sum_exp(&terms) / (alpha - 1.0))
    } else if alpha == 1.0 {
        if !p_inside_q {
            return ExtReal::Infinite;
        }
        let kl: f64 = (0..len)
            .filter(|&i| pe[i] > tol::ZERO)
            .map(|i| pe[i] * (pe[i].ln() - qe[i].ln()))
            .sum();
        ExtReal::Finite(kl)
    } else if alpha.is_finite() {
        if !p_inside_q {
            return ExtReal::Infinite;
        }
        let terms: Vec<f64> = (0..len)
            .filter(|&i| pe[i] > tol::ZERO)
            .map(|i| alpha * pe[i].ln() + (1.0 - alpha) * qe[i].ln())
            .collect();
        ExtReal::Finite(log_sum_exp(&terms) / (alpha - 1.0))
    } else {
        if !p_inside_q {
            return ExtReal::Infinite;
        }
        let worst = (0..len)
            .filter(|&i| qe[i] > tol::ZERO && pe[i] > tol::ZERO)
            .map(|i| pe[i].ln() - qe[i].ln())
            .fold(f64::NEG_INFINITY, f64::max);
        ExtReal::Finite(worst)
    }
}

/// Kullback-Leibler divergence, the `alpha = 1` member.
pub fn kl_divergence(p: &ProbVector, q: &ProbVector) -> ExtReal {
    renyi_divergence(p, q, 1.0)
}

// ---------------------------------------------------------------------------
// test-spectrum parameters
// ---------------------------------------------------------------------------

/// Where an exponent tuple sits in the admissible parameter sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaRegion {
    /// All entries nonnegative (the probability simplex).
    APlus,
    /// Entry `k` is at least 1, all others nonpositive.
    AMinus(usize),
    /// A standard basis vector; degenerate for the divergences.
    Basis(usize),
}

/// A tuple of exponents summing to 1, classified into `A_+`, `A_-`, or a
/// basis vector. Tuples outside those sets are rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaTuple {
    values: Vec<f64>,
    region: AlphaRegion,
}

impl AlphaTuple {
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::InvalidValue("alpha tuple must be nonempty".into()));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > tol::PARAM {
            return Err(Error::InvalidValue(format!("alpha entries sum to {sum}, expected 1")));
        }
        let region = classify_alpha(&values).ok_or_else(|| {
            Error::InvalidValue(format!("alpha {values:?} lies outside A_+ and A_-"))
        })?;
        Ok(AlphaTuple { values, region })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn d(&self) -> usize {
        self.values.len()
    }

    pub fn region(&self) -> AlphaRegion {
        self.region
    }

    pub fn is_basis(&self) -> bool {
        matches!(self.region, AlphaRegion::Basis(_))
    }

    pub fn alpha_max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn classify_alpha(values: &[f64]) -> Option<AlphaRegion> {
    let t = tol::PARAM;
    if let Some(k) = values.iter().position(|&v| (v - 1.0).abs() <= t) {
        if values.iter().enumerate().all(|(l, &v)| l == k || v.abs() <= t) {
            return Some(AlphaRegion::Basis(k));
        }
    }
    if values.iter().all(|&v| v >= -t) {
        return Some(AlphaRegion::APlus);
    }
    for (k, &v) in values.iter().enumerate() {
        if v >= 1.0 - t && values.iter().enumerate().all(|(l, &w)| l == k || w <= t) {
            return Some(AlphaRegion::AMinus(k));
        }
    }
    None
}

/// A tropical direction: entries summing to 0 with exactly one positive
/// entry `beta_k` and the rest nonpositive.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTuple {
    values: Vec<f64>,
    k: usize,
}

impl BetaTuple {
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        let sum: f64 = values.iter().sum();
        if sum.abs() > tol::PARAM {
            return Err(Error::InvalidValue(format!("beta entries sum to {sum}, expected 0")));
        }
        let (k, &bmax) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
            .ok_or_else(|| Error::InvalidValue("beta tuple must be nonempty".into()))?;
        if bmax <= tol::PARAM {
            return Err(Error::InvalidValue("beta must be nonzero".into()));
        }
        if values.iter().enumerate().any(|(l, &v)| l != k && v > tol::PARAM) {
            return Err(Error::InvalidValue(format!(
                "beta {values:?} has more than one positive entry"
            )));
        }
        Ok(BetaTuple { values, k })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn d(&self) -> usize {
        self.values.len()
    }

    /// Index of the distinguished (positive) entry.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn beta_max(&self) -> f64 {
        self.values[self.k]
    }

    pub fn beta_min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Rescaled so that `beta_max = 1`; the tropical divergence is invariant
    /// under this.
    pub fn normalized(&self) -> BetaTuple {
        let s = self.beta_max();
        BetaTuple { values: self.values.iter().map(|v| v / s).collect(), k: self.k }
    }
}

// ---------------------------------------------------------------------------
// matrix families
// ---------------------------------------------------------------------------

fn check_d(p: &MatrixTuple, d: usize, what: &str) -> Result<(), Error> {
    if p.d() != d {
        return Err(Error::DimensionMismatch(format!(
            "{what} has {d} entries for a tuple with {} columns",
            p.d()
        )));
    }
    Ok(())
}

/// `ln f_alpha(P) = ln sum over support rows of prod_k (p_i^(k))^{alpha_k}`.
pub fn log_matrix_f(p: &MatrixTuple, alpha: &AlphaTuple) -> Result<f64, Error> {
    check_d(p, alpha.d(), "alpha")?;
    let supp = p.support();
    let terms: Vec<f64> = supp
        .indices()
        .iter()
        .map(|&i| {
            alpha
                .values()
                .iter()
                .enumerate()
                .map(|(k, &a)| if a == 0.0 { 0.0 } else { a * p.entry(i, k).ln() })
                .sum()
        })
        .collect();
    Ok(log_sum_exp(&terms))
}

/// `f_alpha(P)`; may overflow to infinity where only the logarithm is
/// representable.
pub fn matrix_f(p: &MatrixTuple, alpha: &AlphaTuple) -> Result<f64, Error> {
    Ok(log_matrix_f(p, alpha)?.exp())
}

fn log_matrix_f_tropical(p: &MatrixTuple, beta: &BetaTuple) -> Result<f64, Error> {
    check_d(p, beta.d(), "beta")?;
    let supp = p.support();
    Ok(supp
        .indices()
        .iter()
        .map(|&i| {
            beta.values()
                .iter()
                .enumerate()
                .map(|(k, &b)| if b == 0.0 { 0.0 } else { b * p.entry(i, k).ln() })
                .sum()
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `f^T_beta(P) = max over support rows of prod_k (p_i^(k))^{beta_k}`.
pub fn matrix_f_tropical(p: &MatrixTuple, beta: &BetaTuple) -> Result<f64, Error> {
    Ok(log_matrix_f_tropical(p, beta)?.exp())
}

/// The derivation quantity at column `k`:
/// `sum over l != k of gamma_l * D_1(p^(k) || p^(l))`, expecting normalized
/// columns with a common support. `gamma[k]` is ignored.
pub fn matrix_derivation(p: &MatrixTuple, k: usize, gamma: &[f64]) -> Result<f64, Error> {
    check_d(p, gamma.len(), "gamma")?;
    if k >= p.d() {
        return Err(Error::InvalidValue(format!("column index {k} out of range {}", p.d())));
    }
    if gamma.iter().any(|&g| !g.is_finite() || g < 0.0) {
        return Err(Error::InvalidValue("gamma weights must be nonnegative".into()));
    }
    let supp = p.support();
    let mut total = 0.0;
    for (l, &g) in gamma.iter().enumerate() {
        if l == k || g == 0.0 {
            continue;
        }
        let kl: f64 = supp
            .indices()
            .iter()
            .map(|&i| {
                let a = p.entry(i, k);
                let b = p.entry(i, l);
                a * (a.ln() - b.ln())
            })
            .sum();
        total += g * kl;
    }
    Ok(total)
}

/// The matrix alpha-divergence `(alpha_max - 1)^{-1} ln f_alpha(P)`.
/// Undefined on basis tuples, where the normalizer vanishes.
pub fn matrix_divergence(p: &MatrixTuple, alpha: &AlphaTuple) -> Result<f64, Error> {
    if alpha.is_basis() {
        return Err(Error::InvalidValue(
            "matrix divergence is undefined on basis exponent tuples".into(),
        ));
    }
    Ok(log_matrix_f(p, alpha)? / (alpha.alpha_max() - 1.0))
}

/// The tropical divergence `beta_max^{-1} ln f^T_beta(P)`; invariant under
/// positive rescaling of `beta`.
pub fn matrix_divergence_tropical(p: &MatrixTuple, beta: &BetaTuple) -> Result<f64, Error> {
    Ok(log_matrix_f_tropical(p, beta)? / beta.beta_max())
}

/// The divergence along the trajectory `alpha^lambda = e_k + (lambda-1) beta`
/// through the vertex `e_k` (with `beta` rescaled so `beta_k = 1`):
/// the matrix divergence away from `lambda = 1`, the derivation quantity at
/// `lambda = 1`, and the tropical divergence at `lambda = inf`. The three
/// pieces form one continuous curve, non-decreasing for
/// `lambda >= beta_min / (beta_min - 1)`.
pub fn trajectory_divergence(p: &MatrixTuple, beta: &BetaTuple, lambda: f64) -> Result<f64, Error> {
    if lambda < 0.0 || lambda.is_nan() {
        return Err(Error::InvalidValue(format!("lambda {lambda} must lie in [0, inf]")));
    }
    let beta = beta.normalized();
    let k = beta.k();
    if lambda.is_infinite() {
        return matrix_divergence_tropical(p, &beta);
    }
    if lambda == 1.0 {
        let gamma: Vec<f64> = beta.values().iter().map(|&b| (-b).max(0.0)).collect();
        return matrix_derivation(p, k, &gamma);
    }
    let values: Vec<f64> = beta
        .values()
        .iter()
        .enumerate()
        .map(|(l, &b)| if l == k { lambda } else { (lambda - 1.0) * b })
        .collect();
    let alpha = AlphaTuple::new(values)?;
    matrix_divergence(p, &alpha)
}

/// Multiple Chernoff divergence: the worst pairwise discrimination exponent
/// `min over k != l of max over alpha in [0,1] of
/// (1-alpha) D_alpha(p^(k) || p^(l))`.
///
/// Expects normalized, pairwise-distinct columns on a common support; a
/// coinciding pair is an error (the value would degenerate to 0).
pub fn chernoff_divergence(p: &MatrixTuple) -> Result<f64, Error> {
    chernoff_divergence_with_grid(p, 65)
}

/// Same, with an explicit size for the initial scan grid (the default is 65
/// points; the scan is followed by golden-section refinement to 1e-8).
pub fn chernoff_divergence_with_grid(p: &MatrixTuple, grid: usize) -> Result<f64, Error> {
    if p.d() < 2 {
        return Err(Error::InvalidValue("Chernoff divergence needs at least two columns".into()));
    }
    if grid < 3 {
        return Err(Error::InvalidValue("grid must have at least 3 points".into()));
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
                    "columns {k} and {l} coincide; the divergence would be 0"
                )));
            }
        }
    }
    let supp = p.support();
    let mut best = f64::INFINITY;
    for k in 0..p.d() {
        for l in 0..p.d() {
            if k == l {
                continue;
            }
            // (1-a) D_a(p^(k) || p^(l)) = -ln sum_i (p_i^(k))^a (p_i^(l))^(1-a)
            // on a common support; concave in a and zero at both endpoints.
            let exponent = |a: f64| -> f64 {
                let terms: Vec<f64> = supp
                    .indices()
                    .iter()
                    .map(|&i| a * p.entry(i, k).ln() + (1.0 - a) * p.entry(i, l).ln())
                    .collect();
                -log_sum_exp(&terms)
            };
            let step = 1.0 / (grid - 1) as f64;
            let mut arg = 0.0;
            let mut val = f64::NEG_INFINITY;
            for g in 0..grid {
                let a = g as f64 * step;
                let v = exponent(a);
                if v > val {
                    val = v;
                    arg = a;
                }
            }
            let (mut lo, mut hi) = ((arg - step).max(0.0), (arg + step).min(1.0));
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            let (mut m1, mut m2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
            let (mut f1, mut f2) = (exponent(m1), exponent(m2));
            while hi - lo > 1e-8 {
                if f1 < f2 {
                    lo = m1;
                    m1 = m2;
                    f1 = f2;
                    m2 = lo + phi * (hi - lo);
                    f2 = exponent(m2);
                } else {
                    hi = m2;
                    m2 = m1;
                    f2 = f1;
                    m1 = hi - phi * (hi - lo);
                    f1 = exponent(m1);
                }
            }
            best = best.min(val.max(f1).max(f2));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuple::tuple_boxtimes;

    fn nv(e: &[f64]) -> NonNegVector {
        NonNegVector::from_slice(e).unwrap()
    }

    fn pv(e: &[f64]) -> ProbVector {
        ProbVector::from_slice(e).unwrap()
    }

    fn mt(cols: &[&[f64]]) -> MatrixTuple {
        MatrixTuple::from_columns(&cols.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Two-row tuple with column `k` equal to `(1-t, t)` and uniform columns
    /// elsewhere; the standard separating family for these monotones.
    fn test_matrix(d: usize, k: usize, t: f64) -> MatrixTuple {
        let cols: Vec<Vec<f64>> = (0..d)
            .map(|c| if c == k { vec![1.0 - t, t] } else { vec![0.5, 0.5] })
            .collect();
        MatrixTuple::from_columns(&cols).unwrap()
    }

    #[test]
    fn f_alpha_values() {
        let p = nv(&[0.75, 0.25]);
        assert!((f_alpha(&p, 2.0) - 10.0 / 16.0).abs() < 1e-15);
        assert!((f_alpha(&pv(&[0.2, 0.3, 0.5]), 1.0) - 1.0).abs() < 1e-12);
        assert_eq!(f_alpha(&nv(&[0.5, 0.0, 0.5]), 0.0), 2.0);
    }

    #[test]
    fn f_extreme_values_and_limit() {
        let p = nv(&[0.5, 0.3, 0.2]);
        assert_eq!(f_extreme(&p, ExtremeSign::Plus), 0.5);
        assert!((f_extreme(&p, ExtremeSign::Minus) - 5.0).abs() < 1e-12);
        // f_inf as the alpha -> inf limit of f_alpha^(1/alpha)
        let alpha = 1e4;
        let lim = (log_f_alpha(&p, alpha) / alpha).exp();
        assert!((lim - 0.5).abs() < 1e-6);
    }

    #[test]
    fn entropy_values() {
        assert!((shannon_entropy(&pv(&[0.5, 0.5])) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(shannon_entropy(&pv(&[1.0, 0.0])), 0.0);
        let n = 5;
        let un = ProbVector::uniform(n).unwrap();
        assert!((h0_prime(&un) + n as f64 * (n as f64).ln()).abs() < 1e-12);
        assert_eq!(h0_prime(&nv(&[1.0])), 0.0);
    }

    #[test]
    fn entropy_leibniz_rules() {
        let p = nv(&[0.3, 0.6]);
        let q = nv(&[0.2, 0.5, 0.1]);
        let pq = crate::vector::kron(&p, &q);
        let lhs = shannon_entropy(&pq);
        let rhs = shannon_entropy(&p) * q.sum() + p.sum() * shannon_entropy(&q);
        assert!((lhs - rhs).abs() < 1e-12);
        let lhs0 = h0_prime(&pq);
        let rhs0 = h0_prime(&p) * q.support_size() as f64 + p.support_size() as f64 * h0_prime(&q);
        assert!((lhs0 - rhs0).abs() < 1e-12);
    }

    #[test]
    fn renyi_entropy_cases() {
        let u = ProbVector::uniform(6).unwrap();
        for &a in &[0.0, 0.5, 1.0, 2.0, 17.0, f64::INFINITY] {
            assert!((renyi_entropy(&u, a) - 6f64.ln()).abs() < 1e-12, "alpha={a}");
        }
        assert!((renyi_entropy(&pv(&[0.5, 0.25, 0.25]), f64::INFINITY) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn renyi_entropy_continuous_at_one() {
        let p = pv(&[0.61, 0.18, 0.13, 0.08]);
        let h1 = renyi_entropy(&p, 1.0);
        assert!((renyi_entropy(&p, 1.0 + 1e-6) - h1).abs() < 1e-4);
        assert!((renyi_entropy(&p, 1.0 - 1e-6) - h1).abs() < 1e-4);
    }

    #[test]
    fn renyi_divergence_cases() {
        let p = pv(&[0.4, 0.35, 0.25]);
        for &a in &[0.0, 0.3, 0.5, 1.0, 2.0, 10.0, f64::INFINITY] {
            let v = renyi_divergence(&p, &p, a).as_f64();
            assert!(v.abs() < 1e-12, "alpha={a}: {v}");
        }
        // skew duality on (0,1)
        let q = pv(&[0.2, 0.3, 0.5]);
        for &a in &[0.25, 0.5, 0.75] {
            let lhs = renyi_divergence(&p, &q, a).as_f64();
            let rhs = a / (1.0 - a) * renyi_divergence(&q, &p, 1.0 - a).as_f64();
            assert!((lhs - rhs).abs() < 1e-12, "alpha={a}");
        }
        // support escape at alpha >= 1
        let wide = pv(&[0.5, 0.25, 0.25]);
        let narrow = pv(&[0.5, 0.5, 0.0]);
        assert!(renyi_divergence(&wide, &narrow, 2.0).is_infinite());
        assert!(renyi_divergence(&wide, &narrow, 1.0).is_infinite());
        assert!(!renyi_divergence(&narrow, &wide, 2.0).is_infinite());
    }

    #[test]
    fn ext_margin_cases() {
        use ExtReal::*;
        assert_eq!(ext_margin(Finite(2.0), Finite(0.5)), Some(1.5));
        assert_eq!(ext_margin(Infinite, Finite(0.5)), Some(f64::INFINITY));
        assert_eq!(ext_margin(Finite(0.5), Infinite), Some(f64::NEG_INFINITY));
        assert_eq!(ext_margin(Infinite, Infinite), None);
    }

    #[test]
    fn alpha_tuple_classification() {
        assert_eq!(AlphaTuple::new(vec![0.25, 0.75]).unwrap().region(), AlphaRegion::APlus);
        assert_eq!(AlphaTuple::new(vec![2.0, -1.0]).unwrap().region(), AlphaRegion::AMinus(0));
        assert_eq!(AlphaTuple::new(vec![0.0, 1.0]).unwrap().region(), AlphaRegion::Basis(1));
        assert!(AlphaTuple::new(vec![1.5, -0.2, -0.3]).is_ok());
        assert!(AlphaTuple::new(vec![0.5, 0.75, -0.25]).is_err());
        assert!(AlphaTuple::new(vec![0.5, 0.4]).is_err());
    }

    #[test]
    fn beta_tuple_rules() {
        let b = BetaTuple::new(vec![2.0, -0.5, -1.5]).unwrap();
        assert_eq!(b.k(), 0);
        assert_eq!(b.beta_max(), 2.0);
        let n = b.normalized();
        assert!((n.beta_max() - 1.0).abs() < 1e-15);
        assert!(BetaTuple::new(vec![0.0, 0.0]).is_err());
        assert!(BetaTuple::new(vec![1.0, 1.0, -2.0]).is_err());
        assert!(BetaTuple::new(vec![1.0, -0.5]).is_err());
    }

    #[test]
    fn matrix_f_degenerate_cases() {
        let p = mt(&[&[0.3, 0.7], &[0.3, 0.7]]);
        let a = AlphaTuple::new(vec![0.5, 0.5]).unwrap();
        assert!((matrix_f(&p, &a).unwrap() - 1.0).abs() < 1e-12);
        let q = mt(&[&[0.3, 0.7], &[0.6, 0.4]]);
        let e1 = AlphaTuple::new(vec![1.0, 0.0]).unwrap();
        assert!((matrix_f(&q, &e1).unwrap() - 1.0).abs() < 1e-12);
        assert!(matrix_divergence(&q, &e1).is_err());
    }

    #[test]
    fn matrix_f_multiplicative_over_boxtimes() {
        let p = mt(&[&[0.3, 0.7], &[0.6, 0.4]]);
        let q = mt(&[&[0.2, 0.5, 0.3], &[0.5, 0.25, 0.25]]);
        let a = AlphaTuple::new(vec![1.6, -0.6]).unwrap();
        let pq = tuple_boxtimes(&p, &q).unwrap();
        let lhs = matrix_f(&pq, &a).unwrap();
        let rhs = matrix_f(&p, &a).unwrap() * matrix_f(&q, &a).unwrap();
        assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn tropical_closed_form_on_test_matrix() {
        for &t in &[0.1, 0.2, 0.3, 0.4, 0.5] {
            for d in 2..=3 {
                for k in 0..d {
                    let p = test_matrix(d, k, t);
                    let mut beta = vec![-1.0 / (d - 1) as f64; d];
                    beta[k] = 1.0;
                    let b = BetaTuple::new(beta).unwrap();
                    let expect = (2.0 * (1.0 - t)).powf(b.beta_max());
                    assert!((matrix_f_tropical(&p, &b).unwrap() - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn tropical_scale_invariance() {
        let p = mt(&[&[0.3, 0.7], &[0.6, 0.4]]);
        let scaled =
            MatrixTuple::new(p.columns().iter().map(|c| c.scaled(2.5).unwrap()).collect())
                .unwrap();
        let b = BetaTuple::new(vec![1.0, -1.0]).unwrap();
        let lhs = matrix_f_tropical(&p, &b).unwrap();
        let rhs = matrix_f_tropical(&scaled, &b).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        // equal columns give the neutral value 1
        let eq = mt(&[&[0.3, 0.7], &[0.3, 0.7]]);
        assert!((matrix_f_tropical(&eq, &b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivation_closed_form_on_test_matrix() {
        for &t in &[0.1, 0.2, 0.3, 0.4, 0.5] {
            let p = test_matrix(3, 1, t);
            let gamma = vec![0.0, 0.7, 0.0];
            // derivation at column 0; only the (1-t, t) column contributes
            let got = matrix_derivation(&p, 0, &gamma).unwrap();
            let expect = 0.5 * 0.7 * (1.0 / (4.0 * t * (1.0 - t))).ln();
            assert!((got - expect).abs() < 1e-12, "t={t}: {got} vs {expect}");
        }
        let eq = mt(&[&[0.3, 0.7], &[0.3, 0.7]]);
        assert_eq!(matrix_derivation(&eq, 0, &[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn derivation_leibniz_over_boxtimes() {
        let p = mt(&[&[0.3, 0.7], &[0.6, 0.4]]);
        let q = mt(&[&[0.2, 0.5, 0.3], &[0.5, 0.25, 0.25]]);
        let gamma = vec![0.0, 1.3];
        let pq = tuple_boxtimes(&p, &q).unwrap();
        let lhs = matrix_derivation(&pq, 0, &gamma).unwrap();
        let rhs = matrix_derivation(&p, 0, &gamma).unwrap() * q.column(0).sum()
            + p.column(0).sum() * matrix_derivation(&q, 0, &gamma).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn divergence_reduces_to_renyi_for_dichotomies() {
        let p1 = pv(&[0.3, 0.7]);
        let p2 = pv(&[0.6, 0.4]);
        let p = mt(&[&[0.3, 0.7], &[0.6, 0.4]]);
        for &a in &[0.5, 0.65, 0.9, 1.5, 2.0, 7.0] {
            let tup = AlphaTuple::new(vec![a, 1.0 - a]).unwrap();
            let lhs = matrix_divergence(&p, &tup).unwrap();
            let rhs = renyi_divergence(&p1, &p2, a).as_f64();
            assert!((lhs - rhs).abs() < 1e-12, "alpha={a}");
        }
        let b = BetaTuple::new(vec![1.0, -1.0]).unwrap();
        let lhs = matrix_divergence_tropical(&p, &b).unwrap();
        let rhs = renyi_divergence(&p1, &p2, f64::INFINITY).as_f64();
        assert!((lhs - rhs).abs() < 1e-15);
        // positive rescaling of beta changes nothing
        let b2 = BetaTuple::new(vec![3.0, -3.0]).unwrap();
        assert!((matrix_divergence_tropical(&p, &b2).unwrap() - lhs).abs() < 1e-15);
    }

    #[test]
    fn divergence_nonnegative_and_faithful() {
        let eq = mt(&[&[0.3, 0.7], &[0.3, 0.7]]);
        let a = AlphaTuple::new(vec![0.25, 0.75]).unwrap();
        assert!(matrix_divergence(&eq, &a).unwrap().abs() < 1e-12);
        let p = mt(&[&[0.3, 0.7], &[0.6, 0.4]]);
        assert!(matrix_divergence(&p, &a).unwrap() > 0.0);
    }

    #[test]
    fn faithfulness_depends_on_the_touched_columns() {
        // columns 0 and 1 coincide, column 2 differs
        let p = mt(&[&[0.3, 0.7], &[0.3, 0.7], &[0.6, 0.4]]);
        // parameters touching only the equal columns vanish ...
        let a_eq = AlphaTuple::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert!(matrix_divergence(&p, &a_eq).unwrap().abs() < 1e-12);
        let b_eq = BetaTuple::new(vec![1.0, -1.0, 0.0]).unwrap();
        assert!(matrix_divergence_tropical(&p, &b_eq).unwrap().abs() < 1e-15);
        // ... while touching the distinct column yields strict positivity
        let a_ne = AlphaTuple::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert!(matrix_divergence(&p, &a_ne).unwrap() > 1e-3);
        let b_ne = BetaTuple::new(vec![1.0, 0.0, -1.0]).unwrap();
        assert!(matrix_divergence_tropical(&p, &b_ne).unwrap() > 1e-3);
    }

    #[test]
    fn trajectory_limits_and_monotonicity() {
        let p = mt(&[&[0.3, 0.5, 0.2], &[0.5, 0.2, 0.3], &[0.25, 0.35, 0.4]]);
        let b = BetaTuple::new(vec![1.0, -0.4, -0.6]).unwrap();
        let deriv = trajectory_divergence(&p, &b, 1.0).unwrap();
        for &l in &[1.0 - 1e-5, 1.0 + 1e-5] {
            let v = trajectory_divergence(&p, &b, l).unwrap();
            assert!((v - deriv).abs() < 1e-3, "lambda={l}: {v} vs {deriv}");
        }
        let trop = trajectory_divergence(&p, &b, f64::INFINITY).unwrap();
        let far = trajectory_divergence(&p, &b, 1e4).unwrap();
        assert!((far - trop).abs() < 1e-3, "{far} vs {trop}");
        // non-decreasing beyond beta_min / (beta_min - 1)
        let start = b.beta_min() / (b.beta_min() - 1.0);
        let mut prev = f64::NEG_INFINITY;
        let mut l = start;
        while l < 40.0 {
            let v = trajectory_divergence(&p, &b, l).unwrap();
            assert!(v >= prev - 1e-9, "trajectory decreased at lambda={l}");
            prev = v;
            l += 0.37;
        }
        assert!(trop >= prev - 1e-9);
    }

    #[test]
    fn chernoff_positive_with_lower_bound() {
        let p = mt(&[&[0.3, 0.7], &[0.6, 0.4]]);
        let c = chernoff_divergence(&p).unwrap();
        assert!(c > 0.0);
        let p1 = pv(&[0.3, 0.7]);
        let p2 = pv(&[0.6, 0.4]);
        let bhatta = 0.5 * renyi_divergence(&p1, &p2, 0.5).as_f64();
        assert!(c >= bhatta - 1e-12);
        // independent of scan refinement
        let fine = chernoff_divergence_with_grid(&p, 650).unwrap();
        assert!((c - fine).abs() < 1e-6);
        // coinciding columns are rejected
        let eq = mt(&[&[0.3, 0.7], &[0.3, 0.7]]);
        assert!(matches!(chernoff_divergence(&eq), Err(Error::ColumnsNotDistinct(_))));
    }
}
