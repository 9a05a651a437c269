//! Nonnegative vectors, probability vectors, and their algebra: direct sums,
//! Kronecker products, tensor powers, sorting, support, and the padding
//! equivalence `equiv`.

use crate::{caps, tol, Error};

/// A finite vector of nonnegative weights. The fundamental object of the
/// crate; probability vectors are the normalized special case.
#[derive(Clone, Debug, PartialEq)]
pub struct NonNegVector {
    entries: Vec<f64>,
}

/// Row indices carrying at least one entry above the zero threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        SupportSet { indices }
    }
}

impl NonNegVector {
    /// Requires at least one entry; every entry must be finite and >= 0.
    pub fn new(entries: Vec<f64>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::InvalidValue("vector must have at least one entry".into()));
        }
        for (i, &e) in entries.iter().enumerate() {
            if !e.is_finite() || e < 0.0 {
                return Err(Error::InvalidValue(format!(
                    "entry {i} is {e}; entries must be finite and nonnegative"
                )));
            }
        }
        Ok(NonNegVector { entries })
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self, Error> {
        Self::new(entries.to_vec())
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The 1-norm (plain sum; entries are nonnegative).
    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// Indices with entries above the zero threshold.
    pub fn support(&self) -> SupportSet {
        SupportSet::from_sorted(
            (0..self.len()).filter(|&i| self.entries[i] > tol::ZERO).collect(),
        )
    }

    /// `|supp x|`.
    pub fn support_size(&self) -> usize {
        self.entries.iter().filter(|&&e| e > tol::ZERO).count()
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().cloned().fold(0.0, f64::max)
    }

    /// Smallest entry on the support; `None` for the zero vector.
    pub fn min_support_entry(&self) -> Option<f64> {
        self.entries
            .iter()
            .cloned()
            .filter(|&e| e > tol::ZERO)
            .fold(None, |acc, e| Some(acc.map_or(e, |m: f64| m.min(e))))
    }

    /// Entries rearranged in non-increasing order; the multiset is unchanged.
    pub fn sorted_desc(&self) -> NonNegVector {
        let mut v = self.entries.clone();
        v.sort_by(|a, b| b.partial_cmp(a).expect("entries are finite"));
        NonNegVector { entries: v }
    }

    /// Zero-padded copy of length `len` (at least the current length).
    pub fn padded(&self, len: usize) -> NonNegVector {
        let mut v = self.entries.clone();
        v.resize(len.max(v.len()), 0.0);
        NonNegVector { entries: v }
    }

    pub fn scaled(&self, c: f64) -> Result<NonNegVector, Error> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidValue(format!("scale factor {c} must be nonnegative")));
        }
        Ok(NonNegVector { entries: self.entries.iter().map(|e| e * c).collect() })
    }

    /// Rescale to total mass 1. Fails on the zero vector.
    pub fn normalized(&self) -> Result<ProbVector, Error> {
        let s = self.sum();
        if s <= tol::ZERO {
            return Err(Error::InvalidValue("cannot normalize a zero vector".into()));
        }
        ProbVector::new(self.scaled(1.0 / s)?)
    }
}

/// A [`NonNegVector`] whose entries sum to 1 within [`tol::NORM`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector(NonNegVector);

impl ProbVector {
    pub fn new(v: NonNegVector) -> Result<Self, Error> {
        let s = v.sum();
        if (s - 1.0).abs() > tol::NORM {
            return Err(Error::InvalidValue(format!(
                "entries sum to {s}, expected 1 within {:e}",
                tol::NORM
            )));
        }
        Ok(ProbVector(v))
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self, Error> {
        Self::new(NonNegVector::from_slice(entries)?)
    }

    /// The uniform distribution on `n` outcomes.
    pub fn uniform(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidValue("uniform distribution needs n >= 1".into()));
        }
        Self::new(NonNegVector::new(vec![1.0 / n as f64; n])?)
    }

    /// Uniform on the given support indices, embedded in a length-`len` vector.
    pub fn uniform_on(support: &SupportSet, len: usize) -> Result<Self, Error> {
        if support.is_empty() {
            return Err(Error::InvalidValue("uniform distribution needs nonempty support".into()));
        }
        let mut v = vec![0.0; len];
        let w = 1.0 / support.len() as f64;
        for &i in support.indices() {
            if i >= len {
                return Err(Error::InvalidValue(format!("support index {i} out of range {len}")));
            }
            v[i] = w;
        }
        Self::new(NonNegVector::new(v)?)
    }

    pub fn as_nonneg(&self) -> &NonNegVector {
        &self.0
    }

    pub fn into_nonneg(self) -> NonNegVector {
        self.0
    }
}

impl std::ops::Deref for ProbVector {
    type Target = NonNegVector;

    fn deref(&self) -> &NonNegVector {
        &self.0
    }
}

/// Concatenation `x ⊕ y`.
pub fn direct_sum(x: &NonNegVector, y: &NonNegVector) -> NonNegVector {
    let mut v = Vec::with_capacity(x.len() + y.len());
    v.extend_from_slice(x.entries());
    v.extend_from_slice(y.entries());
    NonNegVector { entries: v }
}

/// Kronecker product `x ⊗ y` of length `|x|·|y|`.
///
/// The row order is fixed: the index of the first factor varies slowest, so
/// `(x ⊗ y)[i·|y| + j] = x_i · y_j`. With this convention the product is
/// exactly associative and columnwise products of tuples stay row-aligned.
pub fn kron(x: &NonNegVector, y: &NonNegVector) -> NonNegVector {
    let mut v = Vec::with_capacity(x.len() * y.len());
    for &a in x.entries() {
        for &b in y.entries() {
            v.push(a * b);
        }
    }
    NonNegVector { entries: v }
}

/// `x^{⊗n}` for `n >= 1`. Refuses to materialize more than
/// [`caps::TENSOR_LEN`] entries.
pub fn tensor_power(x: &NonNegVector, n: usize) -> Result<NonNegVector, Error> {
    if n == 0 {
        return Err(Error::InvalidValue("tensor power requires n >= 1".into()));
    }
    check_power_len(x.len(), n)?;
    let mut acc = x.clone();
    for _ in 1..n {
        acc = kron(&acc, x);
    }
    Ok(acc)
}

/// `x^{⊗n}` extended with `x^{⊗0} = (1)`, for assembling mixed tensor words.
pub(crate) fn tensor_word(x: &NonNegVector, n: usize) -> Result<NonNegVector, Error> {
    if n == 0 {
        return Ok(NonNegVector { entries: vec![1.0] });
    }
    tensor_power(x, n)
}

pub(crate) fn check_power_len(base: usize, n: usize) -> Result<(), Error> {
    let mut len: usize = 1;
    for _ in 0..n {
        len = len.checked_mul(base).unwrap_or(usize::MAX);
        if len > caps::TENSOR_LEN {
            return Err(Error::SizeCapExceeded(format!(
                "tensor power {base}^{n} exceeds {} entries",
                caps::TENSOR_LEN
            )));
        }
    }
    Ok(())
}

/// The `≈` relation: equal as multisets after padding with zeros, entrywise
/// within [`tol::ENTRY`].
pub fn equiv(x: &NonNegVector, y: &NonNegVector) -> bool {
    let len = x.len().max(y.len());
    let xs = x.padded(len).sorted_desc();
    let ys = y.padded(len).sorted_desc();
    xs.entries()
        .iter()
        .zip(ys.entries())
        .all(|(a, b)| (a - b).abs() <= tol::ENTRY)
}
