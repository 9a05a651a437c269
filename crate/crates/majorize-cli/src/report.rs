//! Machine-readable reports. Every report embeds the full effective
//! configuration so a run can be reproduced from its output alone, and
//! serializing then parsing any report is the identity.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use majorize::criteria::{ScanRow, Verdict};
use majorize::stochastic::StochasticMatrix;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    pub config: EffectiveConfig,
    pub wall_time_ms: u64,
    pub body: Body,
}

/// The settings a run actually used, after merging flags over file options
/// over defaults.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EffectiveConfig {
    pub d: usize,
    pub resolution: usize,
    pub lambda_max: f64,
    pub n_max: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    pub tol_cmp: f64,
    pub tol_strict: f64,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fixed_column: Option<usize>,
    pub tensor_len_cap: usize,
    pub lp_var_cap: usize,
}

/// A dense row-major matrix with stated dimensions.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl From<&StochasticMatrix> for Matrix {
    fn from(t: &StochasticMatrix) -> Self {
        Matrix { rows: t.rows(), cols: t.cols(), data: t.data().to_vec() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    /// One-shot feasibility. `residual` and `transition` are present
    /// exactly when feasible.
    Feasibility {
        feasible: bool,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        residual: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        transition: Option<Matrix>,
    },
    /// A criterion scan verdict with its worst margin.
    Criterion {
        verdict: Verdict,
        margin: f64,
        worst_point: String,
        points_evaluated: usize,
        points_incomparable: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pairwise_tropical: Option<Verdict>,
        grid_alpha_points: usize,
        grid_beta_points: usize,
    },
    /// A constructive search outcome.
    Witness {
        outcome: WitnessOutcome,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        order: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        transition: Option<Matrix>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        transition_residual: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        catalyst_columns: Option<Vec<Vec<f64>>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        catalyst_verified: Option<bool>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        mixed_target_columns: Option<Vec<Vec<f64>>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        mixing_drift: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        refusal_margin: Option<f64>,
    },
    /// A full spectrum tabulation for external plotting.
    Scan {
        grid_alpha_points: usize,
        grid_beta_points: usize,
        grid_kl_pairs: usize,
        rows: Vec<ScanRow>,
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found,
    NotFoundBelowCap,
    NecessaryViolated,
}

/// Serialize the report and write it atomically (temp file + rename), or to
/// stdout when no path is given.
pub fn emit(report: &Report, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("reports always serialize");
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            {
                let mut f = std::fs::File::create(&tmp)?;
                f.write_all(text.as_bytes())?;
                f.write_all(b"\n")?;
                f.sync_all()?;
            }
            std::fs::rename(&tmp, path)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips() {
        let report = Report {
            tool: "majorize".into(),
            version: "0.0.0".into(),
            command: "check".into(),
            mode: Some("jensen".into()),
            config: EffectiveConfig {
                d: 1,
                resolution: 16,
                lambda_max: 64.0,
                n_max: 8,
                epsilon: None,
                tol_cmp: 1e-9,
                tol_strict: 1e-7,
                exact: false,
                seed: Some(42),
                fixed_column: None,
                tensor_len_cap: 1 << 22,
                lp_var_cap: 250_000,
            },
            wall_time_ms: 3,
            body: Body::Criterion {
                verdict: Verdict::StrictlySatisfied,
                margin: 0.25,
                worst_point: "alpha=2".into(),
                points_evaluated: 40,
                points_incomparable: 0,
                pairwise_tropical: None,
                grid_alpha_points: 75,
                grid_beta_points: 2,
            },
        };
        let text = serde_json::to_string(&report).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(report, back);
    }
}
