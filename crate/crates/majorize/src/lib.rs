//! Majorization orders between finite probability vectors and tuples of them.
//!
//! The library decides the one-shot preorders (majorization, submajorization,
//! modified majorization, and matrix majorization via linear feasibility with
//! explicit transition witnesses), evaluates the complete monotone families
//! that govern the asymptotic and catalytic versions of these orders (power
//! sums `f_alpha`, Rényi entropies and divergences, matrix alpha-divergences,
//! their tropical limits and derivation quantities), and turns the known
//! sufficient/necessary criteria into executable spectrum scans with margins.
//!
//! On the constructive side it searches for tensor-power orders with explicit
//! stochastic witnesses, builds catalysts in closed form, and runs the full
//! approximate-catalytic pipeline (noise mixing, strictness confirmation,
//! witness extraction, residual verification).
//!
//! Everything is dense `f64` at desk scale; an exact-rational feasibility
//! oracle backs the floating-point decisions in tests. Grid scans and fuzz
//! trials run data-parallel under the `parallel` feature (enabled by
//! default); disabling it yields a fully sequential build.

pub mod criteria;
pub mod exact;
mod exec;
pub mod lp;
pub mod majorization;
pub mod monotones;
pub mod oracle;
pub mod stochastic;
pub mod tuple;
pub mod vector;
pub mod witness;

mod error;

pub use error::Error;

/// Tolerances shared across the crate. All quantities are dimensionless.
pub mod tol {
    /// Entries at or below this count as zero for support computations.
    pub const ZERO: f64 = 1e-12;
    /// Allowed deviation of a probability vector or stochastic column from sum 1.
    pub const NORM: f64 = 1e-9;
    /// Entrywise tolerance for the `equiv` relation and multiset comparisons.
    pub const ENTRY: f64 = 1e-9;
    /// Tolerance on partial-sum and margin comparisons.
    pub const CMP: f64 = 1e-9;
    /// A margin must exceed this to count as strictly satisfied.
    pub const STRICT: f64 = 1e-7;
    /// Maximum residual of a linear-feasibility witness.
    pub const LP: f64 = 1e-8;
    /// Tolerance on parameter-tuple sum constraints.
    pub const PARAM: f64 = 1e-9;
}

/// Hard size caps; exceeding one is reported as [`Error::SizeCapExceeded`].
pub mod caps {
    /// Longest vector a tensor power is allowed to materialize.
    pub const TENSOR_LEN: usize = 1 << 22;
    /// Largest number of variables in a floating-point feasibility problem.
    pub const LP_VARS: usize = 250_000;
    /// Largest `rows(P) * rows(Q)` handled by the exact-rational solver.
    pub const EXACT_CELLS: usize = 1024;
}

pub(crate) mod num {
    /// log(sum(exp(x))) over the given terms, stable against under/overflow.
    /// Empty input yields negative infinity.
    pub fn log_sum_exp(terms: &[f64]) -> f64 {
        let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !m.is_finite() {
            return m;
        }
        let s: f64 = terms.iter().map(|&t| (t - m).exp()).sum();
        m + s.ln()
    }
}
