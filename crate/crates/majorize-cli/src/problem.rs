//! Problem-file parsing: a self-describing JSON document with the column
//! tuples and an optional options block. Numbers are accepted as JSON
//! numbers or as strings; a string of the form `"a/b"` parses as an exact
//! fraction and survives into exact mode losslessly. Plain floats convert
//! to rationals via their exact binary expansion, never through a decimal
//! string.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use majorize::tuple::MatrixTuple;

#[derive(Debug)]
pub enum ProblemError {
    Parse(String),
    Validation(String),
}

impl std::fmt::Display for ProblemError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProblemError::Parse(m) => write!(f, "parse error: {m}"),
            ProblemError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum NumberLit {
    Float(f64),
    Text(String),
}

impl NumberLit {
    pub fn to_rational(&self, what: &str) -> Result<BigRational, ProblemError> {
        match self {
            NumberLit::Float(v) => BigRational::from_float(*v)
                .ok_or_else(|| ProblemError::Validation(format!("{what}: {v} is not finite"))),
            NumberLit::Text(s) => {
                if let Some((num, den)) = s.split_once('/') {
                    let parse = |t: &str| {
                        t.trim().parse::<BigInt>().map_err(|e| {
                            ProblemError::Parse(format!("{what}: bad fraction {s:?}: {e}"))
                        })
                    };
                    let den = parse(den)?;
                    if den.is_zero() {
                        return Err(ProblemError::Validation(format!(
                            "{what}: fraction {s:?} has a zero denominator"
                        )));
                    }
                    Ok(BigRational::new(parse(num)?, den))
                } else {
                    let v: f64 = s.trim().parse().map_err(|e| {
                        ProblemError::Parse(format!("{what}: bad number {s:?}: {e}"))
                    })?;
                    BigRational::from_float(v).ok_or_else(|| {
                        ProblemError::Validation(format!("{what}: {v} is not finite"))
                    })
                }
            }
        }
    }

}

/// Settings that may live in the problem file; command-line flags win.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub resolution: Option<usize>,
    pub lambda_max: Option<f64>,
    pub n_max: Option<usize>,
    pub epsilon: Option<f64>,
    pub tol_cmp: Option<f64>,
    pub tol_strict: Option<f64>,
    pub exact: Option<bool>,
    pub seed: Option<u64>,
    pub fixed_column: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub d: usize,
    pub p: Vec<Vec<NumberLit>>,
    pub q: Vec<Vec<NumberLit>>,
    #[serde(default)]
    pub options: Options,
}

pub struct Problem {
    pub d: usize,
    pub p: MatrixTuple,
    pub q: MatrixTuple,
    pub p_exact: Vec<Vec<BigRational>>,
    pub q_exact: Vec<Vec<BigRational>>,
    pub options: Options,
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let file: ProblemFile =
        serde_json::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))?;
    if file.d == 0 {
        return Err(ProblemError::Validation("d must be at least 1".into()));
    }
    for (name, cols) in [("p", &file.p), ("q", &file.q)] {
        if cols.len() != file.d {
            return Err(ProblemError::Validation(format!(
                "{name} has {} columns, expected d = {}",
                cols.len(),
                file.d
            )));
        }
    }
    let lift = |name: &str, cols: &[Vec<NumberLit>]| -> Result<Vec<Vec<BigRational>>, ProblemError> {
        cols.iter()
            .enumerate()
            .map(|(k, col)| {
                col.iter()
                    .enumerate()
                    .map(|(i, lit)| {
                        let v = lit.to_rational(&format!("{name} column {k} entry {i}"))?;
                        if v.is_negative() {
                            return Err(ProblemError::Validation(format!(
                                "{name} column {k} entry {i} is negative"
                            )));
                        }
                        Ok(v)
                    })
                    .collect()
            })
            .collect()
    };
    let p_exact = lift("p", &file.p)?;
    let q_exact = lift("q", &file.q)?;
    let to_tuple = |name: &str, cols: &[Vec<BigRational>]| -> Result<MatrixTuple, ProblemError> {
        let f: Vec<Vec<f64>> = cols
            .iter()
            .map(|c| c.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
            .collect();
        MatrixTuple::from_columns(&f)
            .map_err(|e| ProblemError::Validation(format!("{name}: {e}")))
    };
    Ok(Problem {
        d: file.d,
        p: to_tuple("p", &p_exact)?,
        q: to_tuple("q", &q_exact)?,
        p_exact,
        q_exact,
        options: file.options,
    })
}
