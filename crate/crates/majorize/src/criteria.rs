//! Executable forms of the sufficiency and necessity criteria: each check
//! scans a deterministic discretization of the test spectrum and returns a
//! structured verdict with the worst margin and the parameter attaining it.
//!
//! Scans are embarrassingly parallel over grid points; margins are merged
//! sequentially in enumeration order, so ties break deterministically.

use serde::{Deserialize, Serialize};

use crate::exec::map_slice;
use crate::monotones::{
    ext_margin, f_extreme, log_f_alpha, matrix_derivation, matrix_divergence,
    matrix_divergence_tropical, renyi_divergence, renyi_entropy, shannon_entropy, AlphaTuple,
    BetaTuple, ExtReal, ExtremeSign,
};
use crate::tuple::MatrixTuple;
use crate::vector::{NonNegVector, ProbVector};
use crate::{tol, Error};

/// Comparison tolerances for verdict classification.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckConfig {
    /// A margin below `-tol_cmp` is a violation.
    pub tol_cmp: f64,
    /// A margin must exceed this to count as strict.
    pub tol_strict: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { tol_cmp: tol::CMP, tol_strict: tol::STRICT }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StrictlySatisfied,
    NonStrictlySatisfied,
    Violated,
}

/// Outcome of a criterion scan. `margin` is the minimum, over the grid, of
/// the sign-adjusted difference (positive = the required inequality holds
/// with room); `worst_point` names the parameter attaining it.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub margin: f64,
    pub worst_point: String,
    pub points_evaluated: usize,
    /// Points where both sides were infinite; excluded from the margin
    /// rather than counted as equal.
    pub points_incomparable: usize,
    /// For the matrix sufficiency scan: the verdict of the weaker pairwise
    /// max-divergence condition in place of the full tropical family.
    pub pairwise_tropical: Option<Verdict>,
}

fn classify(margin: f64, cfg: &CheckConfig) -> Verdict {
    if margin < -cfg.tol_cmp {
        Verdict::Violated
    } else if margin > cfg.tol_strict {
        Verdict::StrictlySatisfied
    } else {
        Verdict::NonStrictlySatisfied
    }
}

/// One family of evaluated grid points. Margins stay plain floats in the
/// hot path; the describing closure runs only for the single worst point.
/// A `None` margin is incomparable-at-infinity.
struct Family<'a> {
    margins: Vec<Option<f64>>,
    describe: Box<dyn Fn(usize) -> String + 'a>,
}

impl<'a> Family<'a> {
    fn new<F>(margins: Vec<Option<f64>>, describe: F) -> Self
    where
        F: Fn(usize) -> String + 'a,
    {
        Family { margins, describe: Box::new(describe) }
    }

    fn finite<F>(margins: Vec<f64>, describe: F) -> Self
    where
        F: Fn(usize) -> String + 'a,
    {
        Family::new(margins.into_iter().map(Some).collect(), describe)
    }
}

fn summarize(families: Vec<Family>, cfg: &CheckConfig) -> CheckReport {
    let mut margin = f64::INFINITY;
    let mut worst: Option<String> = None;
    let mut evaluated = 0usize;
    let mut incomparable = 0usize;
    for family in &families {
        for (i, m) in family.margins.iter().enumerate() {
            match m {
                None => incomparable += 1,
                Some(m) => {
                    evaluated += 1;
                    if *m < margin {
                        margin = *m;
                        worst = Some((family.describe)(i));
                    }
                }
            }
        }
    }
    let Some(worst) = worst else {
        return CheckReport {
            verdict: Verdict::NonStrictlySatisfied,
            margin: 0.0,
            worst_point: "(no comparable points)".into(),
            points_evaluated: 0,
            points_incomparable: incomparable,
            pairwise_tropical: None,
        };
    };
    // keep reports serializable; infinities only arise from one-sided
    // support escapes
    let clamped = margin.clamp(-f64::MAX, f64::MAX);
    CheckReport {
        verdict: classify(clamped, cfg),
        margin: clamped,
        worst_point: worst,
        points_evaluated: evaluated,
        points_incomparable: incomparable,
        pairwise_tropical: None,
    }
}

// ---------------------------------------------------------------------------
// the spectrum grid
// ---------------------------------------------------------------------------

/// A deterministic discretization of the test spectrum for `d` columns:
/// exponent tuples covering the simplex and the cone regions (the latter
/// sampled along the vertex trajectories), tropical directions normalized
/// to `beta_max = 1`, the ordered column pairs for the derivation
/// conditions, and the trajectory parameter grid itself.
#[derive(Clone, Debug)]
pub struct SpectrumGrid {
    pub d: usize,
    pub resolution: usize,
    pub lambda_max: f64,
    pub alpha_points: Vec<AlphaTuple>,
    pub beta_points: Vec<BetaTuple>,
    pub kl_pairs: Vec<(usize, usize)>,
    /// Trajectory parameters: the mirrored dyadic ladder below 1, 1 itself,
    /// the ladder and doubling sequence above 1, and infinity.
    pub lambda_points: Vec<f64>,
    /// Scalar spectra reused by the vector-order checks.
    pub scalar_unit: Vec<f64>,
    pub scalar_above: Vec<f64>,
    pub scalar_negative: Vec<f64>,
}

/// Compositions of `total` into `parts` nonnegative integers, lexicographic.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut c = Vec::with_capacity(parts);
            c.push(first);
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

fn lambda_ladder_above(lambda_max: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=12).map(|j| 1.0 + 0.5f64.powi(j)).collect();
    let mut p = 2.0;
    while p <= lambda_max {
        v.push(p);
        p *= 2.0;
    }
    v.push(lambda_max);
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v.retain(|&l| l > 1.0 && l <= lambda_max);
    v
}

fn lambda_ladder_below() -> Vec<f64> {
    (1..=12).rev().map(|j| 1.0 - 0.5f64.powi(j)).collect()
}

/// Build the spectrum grid. `resolution` is the lattice density per simplex
/// axis; `lambda_max` bounds the trajectory parameter. Spectra above
/// `d = 6` are refused: the lattice grows combinatorially and no finite
/// certificate exists to aim for.
pub fn build_grid(d: usize, resolution: usize, lambda_max: f64) -> Result<SpectrumGrid, Error> {
    if d == 0 {
        return Err(Error::InvalidValue("grid needs d >= 1".into()));
    }
    if d > 6 {
        return Err(Error::SizeCapExceeded(format!("test spectrum for d = {d} is refused (max 6)")));
    }
    if resolution < 2 {
        return Err(Error::InvalidValue("grid resolution must be at least 2".into()));
    }
    if !(lambda_max > 1.0) {
        return Err(Error::InvalidValue("lambda_max must exceed 1".into()));
    }

    let above = lambda_ladder_above(lambda_max);
    let below = lambda_ladder_below();

    let mut alpha_points = Vec::new();
    for comp in compositions(resolution, d) {
        if comp.iter().any(|&c| c == resolution) {
            continue; // basis vector
        }
        let values: Vec<f64> = comp.iter().map(|&c| c as f64 / resolution as f64).collect();
        alpha_points.push(AlphaTuple::new(values).expect("lattice point is admissible"));
    }

    let mut beta_points = Vec::new();
    if d >= 2 {
        for k in 0..d {
            for comp in compositions(resolution, d - 1) {
                let mut values = Vec::with_capacity(d);
                let mut it = comp.iter();
                for l in 0..d {
                    if l == k {
                        values.push(1.0);
                    } else {
                        values.push(-(*it.next().unwrap() as f64) / resolution as f64);
                    }
                }
                beta_points.push(BetaTuple::new(values).expect("direction is admissible"));
            }
        }
    }

    // cone and near-vertex points along the trajectories through each vertex
    for beta in &beta_points {
        let k = beta.k();
        for &l in above.iter().chain(below.iter()) {
            let values: Vec<f64> = beta
                .values()
                .iter()
                .enumerate()
                .map(|(i, &b)| if i == k { l } else { (l - 1.0) * b })
                .collect();
            alpha_points.push(AlphaTuple::new(values).expect("trajectory point is admissible"));
        }
    }

    let mut kl_pairs = Vec::new();
    for k in 0..d {
        for l in 0..d {
            if k != l {
                kl_pairs.push((k, l));
            }
        }
    }

    let mut lambda_points = below.clone();
    lambda_points.push(1.0);
    lambda_points.extend_from_slice(&above);
    lambda_points.push(f64::INFINITY);

    let mut scalar_unit: Vec<f64> =
        (1..resolution).map(|m| m as f64 / resolution as f64).collect();
    scalar_unit.extend((1..=12).map(|j| 0.5f64.powi(j)));
    scalar_unit.extend(below.iter().copied());
    scalar_unit.sort_by(|a, b| a.partial_cmp(b).unwrap());
    scalar_unit.dedup();
    scalar_unit.retain(|&a| a > 0.0 && a < 1.0);

    let scalar_above = above.clone();
    let scalar_negative: Vec<f64> = above.iter().map(|&l| 1.0 - l).collect();

    Ok(SpectrumGrid {
        d,
        resolution,
        lambda_max,
        alpha_points,
        beta_points,
        kl_pairs,
        lambda_points,
        scalar_unit,
        scalar_above,
        scalar_negative,
    })
}

impl SpectrumGrid {
    /// Default density: 16 per axis up to `d = 3`, 8 at `d = 4`, 4 at
    /// `d = 5, 6`; larger `d` is refused.
    pub fn default_for_d(d: usize) -> Result<SpectrumGrid, Error> {
        let resolution = match d {
            0 => return Err(Error::InvalidValue("grid needs d >= 1".into())),
            1..=3 => 16,
            4 => 8,
            5 | 6 => 4,
            _ => {
                return Err(Error::SizeCapExceeded(format!(
                    "test spectrum for d = {d} is refused (max 6)"
                )))
            }
        };
        build_grid(d, resolution, 64.0)
    }
}

// ---------------------------------------------------------------------------
// vector-order criteria
// ---------------------------------------------------------------------------

/// Approximate asymptotic/catalytic order between probability vectors:
/// verdict on `H_alpha(q) >= H_alpha(p)` across `alpha in [1, inf]`, the
/// entropy form of `f_alpha(p) >= f_alpha(q)`.
pub fn check_aubrun_nechita(
    p: &ProbVector,
    q: &ProbVector,
    grid: &SpectrumGrid,
    cfg: &CheckConfig,
) -> CheckReport {
    let mut alphas = vec![1.0];
    alphas.extend_from_slice(&grid.scalar_above);
    alphas.push(f64::INFINITY);
    let margins = map_slice(&alphas, |&a| renyi_entropy(q, a) - renyi_entropy(p, a));
    let family = Family::finite(margins, move |i| format!("H_alpha at alpha={}", alphas[i]));
    summarize(vec![family], cfg)
}

/// Exact asymptotic order: the strict power-sum/entropy conditions under
/// which some tensor power of `p` majorizes the same power of `q`.
pub fn check_jensen(
    p: &ProbVector,
    q: &ProbVector,
    grid: &SpectrumGrid,
    cfg: &CheckConfig,
) -> CheckReport {
    let mut low = vec![0.0];
    low.extend_from_slice(&grid.scalar_unit);
    let low_margins = map_slice(&low, |&a| log_f_alpha(q, a) - log_f_alpha(p, a));
    let mut high = grid.scalar_above.clone();
    high.push(f64::INFINITY);
    let high_margins = map_slice(&high, |&a| {
        if a.is_infinite() {
            f_extreme(p, ExtremeSign::Plus).ln() - f_extreme(q, ExtremeSign::Plus).ln()
        } else {
            log_f_alpha(p, a) - log_f_alpha(q, a)
        }
    });
    let families = vec![
        Family::finite(low_margins, move |i| {
            format!("f_alpha at alpha={} (q side must dominate)", low[i])
        }),
        Family::finite(high_margins, move |i| {
            format!("f_alpha at alpha={} (p side must dominate)", high[i])
        }),
        Family::finite(vec![shannon_entropy(q) - shannon_entropy(p)], |_| "H_1".into()),
    ];
    summarize(families, cfg)
}

/// Exact catalytic order: strict power-sum conditions over `(0,1)` and
/// `(1,inf)`, the Shannon condition, and either a strictly smaller support
/// or the equal-support refinement through `H'_0` and negative exponents.
///
/// The same conditions are re-derived through divergences against the
/// uniform reference; a decisive disagreement between the two routes is an
/// internal error.
pub fn check_klimesh(
    p: &ProbVector,
    q: &ProbVector,
    grid: &SpectrumGrid,
    cfg: &CheckConfig,
) -> Result<CheckReport, Error> {
    // order is permutation-invariant; canonically sorted vectors make the
    // supports nested
    let ps = ProbVector::new(p.sorted_desc())?;
    let qs = ProbVector::new(q.sorted_desc())?;

    let np = ps.support_size();
    let nq = qs.support_size();
    let mut families = vec![
        Family::finite(
            map_slice(&grid.scalar_unit, |&a| log_f_alpha(&qs, a) - log_f_alpha(&ps, a)),
            |i| format!("f_alpha at alpha={} (q side must dominate)", grid.scalar_unit[i]),
        ),
        Family::finite(
            vec![shannon_entropy(&qs) - shannon_entropy(&ps)],
            |_| "H_1".into(),
        ),
        Family::finite(
            map_slice(&grid.scalar_above, |&a| log_f_alpha(&ps, a) - log_f_alpha(&qs, a)),
            |i| format!("f_alpha at alpha={} (p side must dominate)", grid.scalar_above[i]),
        ),
        Family::finite(
            vec![(nq as f64).ln() - (np as f64).ln()],
            move |_| format!("support sizes {np} vs {nq}"),
        ),
    ];
    if np == nq {
        families.push(Family::finite(vec![h0_prime_margin(&qs, &ps)], |_| "H_0'".into()));
        families.push(Family::finite(
            map_slice(&grid.scalar_negative, |&a| log_f_alpha(&ps, a) - log_f_alpha(&qs, a)),
            |i| format!("f_alpha at alpha={} (p side must dominate)", grid.scalar_negative[i]),
        ));
    }
    let report = summarize(families, cfg);

    // cross-evaluate through divergences against the uniform distribution on
    // the larger support
    let len = ps.len().max(qs.len());
    let n_union = np.max(nq);
    let u = ProbVector::uniform_on(
        &NonNegVector::new(
            (0..len).map(|i| if i < n_union { 1.0 } else { 0.0 }).collect(),
        )?
        .support(),
        len,
    )?;
    let mut alphas: Vec<f64> = grid.scalar_unit.iter().copied().filter(|&a| a > 0.5).collect();
    alphas.push(1.0);
    alphas.extend_from_slice(&grid.scalar_above);
    let direct = map_slice(&alphas, |&a| {
        ext_margin(renyi_divergence(&ps, &u, a), renyi_divergence(&qs, &u, a))
    });
    let reverse = map_slice(&alphas, |&a| {
        ext_margin(renyi_divergence(&u, &ps, a), renyi_divergence(&u, &qs, a))
    });
    let cross_report = summarize(
        vec![
            Family::new(direct, |i| format!("D_alpha(.||u) at alpha={}", alphas[i])),
            Family::new(reverse, |i| format!("D_alpha(u||.) at alpha={}", alphas[i])),
        ],
        cfg,
    );

    // The two margin scales differ by positive factors, so verdicts may
    // legitimately differ near the thresholds; flag only decisive sign
    // contradictions.
    let decisive = 1e-6;
    if (report.margin > decisive && cross_report.margin < -decisive)
        || (report.margin < -decisive && cross_report.margin > decisive)
    {
        return Err(Error::CrossCheckFailed(format!(
            "power-sum route margin {:.3e} at {} vs uniform-divergence route margin {:.3e} at {}",
            report.margin, report.worst_point, cross_report.margin, cross_report.worst_point
        )));
    }
    Ok(report)
}

fn h0_prime_margin(q: &ProbVector, p: &ProbVector) -> f64 {
    crate::monotones::h0_prime(q) - crate::monotones::h0_prime(p)
}

// ---------------------------------------------------------------------------
// matrix-order criteria
// ---------------------------------------------------------------------------

fn check_tuple_dims(p: &MatrixTuple, q: &MatrixTuple, grid: &SpectrumGrid) -> Result<(), Error> {
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch(format!("{} vs {} columns", p.d(), q.d())));
    }
    if p.d() != grid.d {
        return Err(Error::DimensionMismatch(format!(
            "tuples have {} columns but the grid was built for d = {}",
            p.d(),
            grid.d
        )));
    }
    Ok(())
}

fn kl_pair(p: &MatrixTuple, k: usize, l: usize) -> Result<f64, Error> {
    let mut gamma = vec![0.0; p.d()];
    gamma[l] = 1.0;
    matrix_derivation(p, k, &gamma)
}

fn alpha_family<'a>(p: &MatrixTuple, q: &MatrixTuple, grid: &'a SpectrumGrid) -> Family<'a> {
    let margins = map_slice(&grid.alpha_points, |a| {
        matrix_divergence(p, a)
            .and_then(|vp| matrix_divergence(q, a).map(|vq| vp - vq))
            .expect("grid tuples exclude basis vectors")
    });
    Family::finite(margins, |i| format!("alpha={:?}", grid.alpha_points[i].values()))
}

/// Strict sufficiency scan for asymptotic matrix majorization of `Q` by `P`:
/// matrix divergences on the full exponent grid, tropical divergences on
/// the sampled directions, and the pairwise relative-entropy conditions.
/// The report also carries the verdict of the weaker pairwise
/// max-divergence variant in `pairwise_tropical`.
pub fn check_matrix_sufficient(
    p: &MatrixTuple,
    q: &MatrixTuple,
    grid: &SpectrumGrid,
    cfg: &CheckConfig,
) -> Result<CheckReport, Error> {
    check_tuple_dims(p, q, grid)?;
    let beta_margins = map_slice(&grid.beta_points, |b| {
        matrix_divergence_tropical(p, b)
            .and_then(|vp| matrix_divergence_tropical(q, b).map(|vq| vp - vq))
            .expect("dimensions already checked")
    });
    let kl_margins = map_slice(&grid.kl_pairs, |&(k, l)| {
        kl_pair(p, k, l)
            .and_then(|vp| kl_pair(q, k, l).map(|vq| vp - vq))
            .expect("dimensions already checked")
    });
    let families = vec![
        alpha_family(p, q, grid),
        Family::finite(beta_margins, |i| format!("beta={:?}", grid.beta_points[i].values())),
        Family::finite(kl_margins, |i| {
            let (k, l) = grid.kl_pairs[i];
            format!("relative entropy pair ({k},{l})")
        }),
    ];
    let mut report = summarize(families, cfg);

    // weaker tropical condition: strictness only on the pairwise directions
    let mut pairwise = Vec::new();
    for &(k, l) in &grid.kl_pairs {
        let mut values = vec![0.0; grid.d];
        values[k] = 1.0;
        values[l] = -1.0;
        let b = BetaTuple::new(values)?;
        pairwise.push(matrix_divergence_tropical(p, &b)? - matrix_divergence_tropical(q, &b)?);
    }
    report.pairwise_tropical =
        Some(summarize(vec![Family::finite(pairwise, |_| String::new())], cfg).verdict);
    Ok(report)
}

/// Necessity scan: the non-strict divergence conditions on the exponent
/// grid alone. This is also the exact criterion for approximate catalytic
/// matrix majorization.
pub fn check_matrix_necessary(
    p: &MatrixTuple,
    q: &MatrixTuple,
    grid: &SpectrumGrid,
    cfg: &CheckConfig,
) -> Result<CheckReport, Error> {
    check_tuple_dims(p, q, grid)?;
    Ok(summarize(vec![alpha_family(p, q, grid)], cfg))
}

/// The `d = 2` specialization through one-parameter Rényi divergences: both
/// orderings over `alpha in [1/2, inf]`, with `alpha = inf` through the
/// pairwise max-divergence. Mirrors the matrix scan point for point, so the
/// two must produce identical verdicts on matching grids.
pub fn check_relative(
    p1: &ProbVector,
    p2: &ProbVector,
    q1: &ProbVector,
    q2: &ProbVector,
    grid: &SpectrumGrid,
    cfg: &CheckConfig,
) -> Result<CheckReport, Error> {
    if grid.d != 2 {
        return Err(Error::DimensionMismatch(format!(
            "relative check needs a d = 2 grid, got d = {}",
            grid.d
        )));
    }
    for (a, b, name) in [(p1, p2, "p"), (q1, q2, "q")] {
        if a.support().indices() != b.support().indices() {
            return Err(Error::InvalidValue(format!(
                "the {name} pair must share a common support"
            )));
        }
    }

    let eval = |a: f64, flipped: bool| -> ExtReal {
        if flipped {
            let m = ext_margin(renyi_divergence(p2, p1, a), renyi_divergence(q2, q1, a));
            ExtReal::Finite(m.expect("common supports keep divergences finite"))
        } else {
            let m = ext_margin(renyi_divergence(p1, p2, a), renyi_divergence(q1, q2, a));
            ExtReal::Finite(m.expect("common supports keep divergences finite"))
        }
    };

    // D_{(a,1-a)} is D_a(first||second) for a >= 1/2 and
    // D_{1-a}(second||first) below
    let scalar_of = |tup: &AlphaTuple| {
        let a = tup.values()[0];
        if a >= 0.5 {
            (a, false)
        } else {
            (1.0 - a, true)
        }
    };
    let alpha_margins = map_slice(&grid.alpha_points, |tup| {
        let (order, flipped) = scalar_of(tup);
        eval(order, flipped).as_f64()
    });
    let beta_margins = map_slice(&grid.beta_points, |b| eval(f64::INFINITY, b.k() == 1).as_f64());
    let kl_margins = map_slice(&grid.kl_pairs, |&(k, _)| eval(1.0, k == 1).as_f64());
    let fmt = |order: f64, flipped: bool| {
        format!("alpha={order}{}", if flipped { " (reversed)" } else { "" })
    };
    let families = vec![
        Family::finite(alpha_margins, move |i| {
            let (order, flipped) = scalar_of(&grid.alpha_points[i]);
            fmt(order, flipped)
        }),
        Family::finite(beta_margins, move |i| {
            fmt(f64::INFINITY, grid.beta_points[i].k() == 1)
        }),
        Family::finite(kl_margins, move |i| fmt(1.0, grid.kl_pairs[i].0 == 1)),
    ];
    Ok(summarize(families, cfg))
}

// ---------------------------------------------------------------------------
// spectrum tabulation
// ---------------------------------------------------------------------------

/// One row of a spectrum scan: the monotone family, the parameter, both
/// evaluations, and their difference.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScanRow {
    pub family: String,
    pub parameter: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

fn fmt_values(values: &[f64]) -> String {
    let inner: Vec<String> = values.iter().map(|v| format!("{v}")).collect();
    format!("({})", inner.join(","))
}

/// Evaluate every grid point on both tuples, for machine-readable scans and
/// external plotting.
pub fn tabulate_spectrum(
    p: &MatrixTuple,
    q: &MatrixTuple,
    grid: &SpectrumGrid,
) -> Result<Vec<ScanRow>, Error> {
    check_tuple_dims(p, q, grid)?;
    let mut rows: Vec<ScanRow> = map_slice(&grid.alpha_points, |a| {
        let lhs = matrix_divergence(p, a).expect("no basis tuples in the grid");
        let rhs = matrix_divergence(q, a).expect("no basis tuples in the grid");
        ScanRow {
            family: "alpha-divergence".into(),
            parameter: fmt_values(a.values()),
            lhs,
            rhs,
            margin: lhs - rhs,
        }
    });
    rows.extend(map_slice(&grid.beta_points, |b| {
        let lhs = matrix_divergence_tropical(p, b).expect("dimensions checked");
        let rhs = matrix_divergence_tropical(q, b).expect("dimensions checked");
        ScanRow {
            family: "tropical-divergence".into(),
            parameter: fmt_values(b.values()),
            lhs,
            rhs,
            margin: lhs - rhs,
        }
    }));
    rows.extend(map_slice(&grid.kl_pairs, |&(k, l)| {
        let lhs = kl_pair(p, k, l).expect("dimensions checked");
        let rhs = kl_pair(q, k, l).expect("dimensions checked");
        ScanRow {
            family: "derivation".into(),
            parameter: format!("({k},{l})"),
            lhs,
            rhs,
            margin: lhs - rhs,
        }
    }));
    Ok(rows)
}
