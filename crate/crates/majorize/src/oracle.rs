//! Independent verification machinery: deterministic random instances,
//! the data-processing fuzzer, and numeric limit confirmation. Everything
//! here is a pure function of its seed, so parallel and serial runs agree.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::criteria::{build_grid, SpectrumGrid};
use crate::exec::map_range;
use crate::monotones::{
    matrix_derivation, matrix_divergence, matrix_divergence_tropical, trajectory_divergence,
    BetaTuple,
};
use crate::stochastic::StochasticMatrix;
use crate::tuple::MatrixTuple;
use crate::vector::{NonNegVector, ProbVector};
use crate::{tol, Error};

/// Deterministic generator parameters: `rows` input outcomes, `out_rows`
/// output outcomes, `d` columns, and the fraction of structurally zero rows.
#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub seed: u64,
    pub rows: usize,
    pub out_rows: usize,
    pub d: usize,
    pub sparsity: f64,
}

/// Per-trial seed derivation: one splitmix64 scramble of
/// `base + index * 0x9E3779B97F4A7C15`. Serial and parallel runs therefore
/// draw identical streams.
pub fn split_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Strictly positive exponential draw; the inverse-CDF of `Exp(1)`.
fn exponential(rng: &mut ChaCha8Rng) -> f64 {
    let u = uniform01(rng);
    (-(1.0 - u).ln()).max(1e-300)
}

pub(crate) fn random_index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// Normalized exponential draws: uniform on the probability simplex.
pub fn random_prob_vector(seed: u64, len: usize) -> Result<ProbVector, Error> {
    let mut rng = rng_from(seed);
    prob_vector_from_rng(&mut rng, len)
}

fn prob_vector_from_rng(rng: &mut ChaCha8Rng, len: usize) -> Result<ProbVector, Error> {
    if len == 0 {
        return Err(Error::InvalidValue("cannot draw a zero-length vector".into()));
    }
    let raw: Vec<f64> = (0..len).map(|_| exponential(rng)).collect();
    NonNegVector::new(raw)?.normalized()
}

/// A column-stochastic `out_rows x rows` matrix, columns uniform on the
/// simplex. Deterministic per seed.
pub fn random_stochastic(spec: &RandomSpec) -> Result<StochasticMatrix, Error> {
    let mut rng = rng_from(spec.seed);
    let (m, n) = (spec.out_rows, spec.rows);
    if m == 0 || n == 0 {
        return Err(Error::InvalidValue("stochastic matrix needs positive dimensions".into()));
    }
    let mut data = vec![0.0; m * n];
    for j in 0..n {
        let col = prob_vector_from_rng(&mut rng, m)?;
        for i in 0..m {
            data[i * n + j] = col.entries()[i];
        }
    }
    StochasticMatrix::new(m, n, data)
}

/// A tuple of `d` normalized columns on `rows` outcomes with a common
/// support; `sparsity` controls the fraction of zeroed rows (at least one
/// row always survives). Deterministic per seed.
pub fn random_tuple(spec: &RandomSpec) -> Result<MatrixTuple, Error> {
    let mut rng = rng_from(spec.seed);
    let n = spec.rows;
    if n == 0 || spec.d == 0 {
        return Err(Error::InvalidValue("tuple needs positive dimensions".into()));
    }
    if !(0.0..=1.0).contains(&spec.sparsity) {
        return Err(Error::InvalidValue("sparsity must lie in [0, 1]".into()));
    }
    let zeros = ((spec.sparsity * n as f64) as usize).min(n - 1);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = random_index(&mut rng, i + 1);
        idx.swap(i, j);
    }
    let zero_rows: Vec<bool> = {
        let mut z = vec![false; n];
        for &i in idx.iter().take(zeros) {
            z[i] = true;
        }
        z
    };
    let cols = (0..spec.d)
        .map(|_| {
            let mut raw = vec![0.0; n];
            for (i, slot) in raw.iter_mut().enumerate() {
                if !zero_rows[i] {
                    *slot = exponential(&mut rng);
                }
            }
            NonNegVector::new(raw)?.normalized().map(|p| p.into_nonneg())
        })
        .collect::<Result<Vec<_>, Error>>()?;
    MatrixTuple::new(cols)
}

// ---------------------------------------------------------------------------
// data-processing fuzz
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct FuzzConfig {
    pub trials: usize,
    pub seed: u64,
    pub d: usize,
    /// Input rows are drawn from `2..=max_rows`, output rows from
    /// `1..=max_out_rows`.
    pub max_rows: usize,
    pub max_out_rows: usize,
    pub resolution: usize,
    pub lambda_max: f64,
    /// Margins below `-tol` count as violations.
    pub tol: f64,
}

impl FuzzConfig {
    pub fn new(trials: usize, seed: u64, d: usize) -> Self {
        FuzzConfig {
            trials,
            seed,
            d,
            max_rows: 5,
            max_out_rows: 5,
            resolution: 8,
            lambda_max: 64.0,
            tol: tol::CMP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub trials: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub worst_case: String,
}

/// Draw `(P, T)` pairs and assert that every sampled monotone is ordered
/// between `P` and `TP`: the divergences and tropical divergences on the
/// grid and the pairwise derivation quantities may never increase under a
/// stochastic map. Reports the worst margin across all trials.
pub fn data_processing_fuzz(cfg: &FuzzConfig) -> Result<FuzzReport, Error> {
    let grid = build_grid(cfg.d, cfg.resolution, cfg.lambda_max)?;
    let results = map_range(cfg.trials, |trial| fuzz_trial(cfg, &grid, trial));
    let mut worst = f64::INFINITY;
    let mut worst_case = String::from("(none)");
    let mut violations = 0usize;
    for r in results {
        let (margin, desc) = r?;
        if margin < -cfg.tol {
            violations += 1;
        }
        if margin < worst {
            worst = margin;
            worst_case = desc;
        }
    }
    Ok(FuzzReport { trials: cfg.trials, violations, worst_margin: worst, worst_case })
}

fn fuzz_trial(
    cfg: &FuzzConfig,
    grid: &SpectrumGrid,
    trial: usize,
) -> Result<(f64, String), Error> {
    let seed = split_seed(cfg.seed, trial as u64);
    let mut rng = rng_from(seed);
    let rows = 2 + random_index(&mut rng, cfg.max_rows.max(2) - 1);
    let out_rows = 1 + random_index(&mut rng, cfg.max_out_rows.max(1));
    let p = random_tuple(&RandomSpec {
        seed: split_seed(seed, 1),
        rows,
        out_rows,
        d: cfg.d,
        sparsity: 0.0,
    })?;
    let t = random_stochastic(&RandomSpec {
        seed: split_seed(seed, 2),
        rows,
        out_rows,
        d: cfg.d,
        sparsity: 0.0,
    })?;
    let q = t.apply_tuple(&p)?;

    let mut worst = f64::INFINITY;
    let mut desc = String::new();
    for a in &grid.alpha_points {
        let m = matrix_divergence(&p, a)? - matrix_divergence(&q, a)?;
        if m < worst {
            worst = m;
            desc = format!("trial {trial}: alpha={:?}", a.values());
        }
    }
    for b in &grid.beta_points {
        let m = matrix_divergence_tropical(&p, b)? - matrix_divergence_tropical(&q, b)?;
        if m < worst {
            worst = m;
            desc = format!("trial {trial}: beta={:?}", b.values());
        }
    }
    for &(k, l) in &grid.kl_pairs {
        let mut gamma = vec![0.0; cfg.d];
        gamma[l] = 1.0;
        let m = matrix_derivation(&p, k, &gamma)? - matrix_derivation(&q, k, &gamma)?;
        if m < worst {
            worst = m;
            desc = format!("trial {trial}: derivation pair ({k},{l})");
        }
    }
    Ok((worst, desc))
}

// ---------------------------------------------------------------------------
// limit confirmation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct LimitReport {
    /// `max |trajectory(1 ± 1e-5) - derivation value|`.
    pub derivation_gap: f64,
    /// `|trajectory(1e4) - tropical value|`.
    pub tropical_gap: f64,
    /// Largest decrease between consecutive trajectory samples beyond the
    /// monotonicity threshold (nonpositive when the curve is monotone).
    pub monotonicity_defect: f64,
    pub tolerance: f64,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.derivation_gap <= self.tolerance
            && self.tropical_gap <= self.tolerance
            && self.monotonicity_defect <= 1e-9
    }
}

/// Confirm the two endpoint limits of the trajectory divergence and its
/// monotonicity beyond `beta_min / (beta_min - 1)` on a dyadic grid.
pub fn limit_check(p: &MatrixTuple, beta: &BetaTuple, tolerance: f64) -> Result<LimitReport, Error> {
    let beta = beta.normalized();
    let deriv = trajectory_divergence(p, &beta, 1.0)?;
    let mut derivation_gap = 0.0f64;
    for l in [1.0 - 1e-5, 1.0 + 1e-5] {
        derivation_gap = derivation_gap.max((trajectory_divergence(p, &beta, l)? - deriv).abs());
    }
    let tropical = trajectory_divergence(p, &beta, f64::INFINITY)?;
    let tropical_gap = (trajectory_divergence(p, &beta, 1e4)? - tropical).abs();

    let threshold = beta.beta_min() / (beta.beta_min() - 1.0);
    let mut lambdas: Vec<f64> = (1..=12).map(|j| 1.0 - 0.5f64.powi(j)).collect();
    lambdas.push(1.0);
    lambdas.extend((0..=12).map(|j| 1.0 + 0.5f64.powi(j)));
    let mut power = 2.0;
    while power <= 64.0 {
        lambdas.push(power);
        power *= 2.0;
    }
    lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    lambdas.dedup();
    lambdas.retain(|&l| l >= threshold);
    lambdas.push(f64::INFINITY);

    let mut monotonicity_defect = f64::NEG_INFINITY;
    let mut prev = f64::NEG_INFINITY;
    for &l in &lambdas {
        let v = trajectory_divergence(p, &beta, l)?;
        monotonicity_defect = monotonicity_defect.max(prev - v);
        prev = v;
    }
    Ok(LimitReport { derivation_gap, tropical_gap, monotonicity_defect, tolerance })
}
