//! Predicates on finite integer sequences.
//!
//! Everything here is exact: products and powers are computed with
//! arbitrary-precision integers, so no predicate can be fooled by overflow.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence must be non-empty")]
    Empty,
    #[error("entry {index} is negative")]
    NegativeEntry { index: usize },
}

/// A finite, non-empty integer sequence `a_offset, a_{offset+1}, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    values: Vec<BigInt>,
    offset: i64,
}

impl Sequence {
    pub fn new<I, T>(values: I) -> Result<Self, SeqError>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::with_offset(values, 0)
    }

    pub fn with_offset<I, T>(values: I, offset: i64) -> Result<Self, SeqError>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let values: Vec<BigInt> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(SeqError::Empty);
        }
        Ok(Self { values, offset })
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry-wise absolute values, keeping the offset.
    pub fn abs(&self) -> Sequence {
        Sequence {
            values: self.values.iter().map(|v| v.abs()).collect(),
            offset: self.offset,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `a_{i-1} a_{i+1} <= a_i^2` at every interior index.
    pub fn is_log_concave(&self) -> bool {
        self.values
            .windows(3)
            .all(|w| &w[0] * &w[2] <= &w[1] * &w[1])
    }

    /// Nonzero entries occupy a contiguous block of indices.
    pub fn has_no_internal_zeros(&self) -> bool {
        let first = self.values.iter().position(|v| !v.is_zero());
        let last = self.values.iter().rposition(|v| !v.is_zero());
        match (first, last) {
            (Some(a), Some(b)) => self.values[a..=b].iter().all(|v| !v.is_zero()),
            _ => true,
        }
    }

    /// Weakly increasing up to some index, weakly decreasing after it.
    pub fn is_unimodal(&self) -> bool {
        let v = &self.values;
        let mut i = 0;
        while i + 1 < v.len() && v[i] <= v[i + 1] {
            i += 1;
        }
        while i + 1 < v.len() && v[i] >= v[i + 1] {
            i += 1;
        }
        i + 1 >= v.len()
    }

    /// Nonzero entries follow the pattern `s * (-1)^i` for one global sign
    /// `s`. Zeros may pad either end but may not appear between nonzeros.
    pub fn is_sign_alternating(&self) -> bool {
        if !self.has_no_internal_zeros() {
            return false;
        }
        let mut global: Option<bool> = None;
        for (i, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            // true when the entry agrees with (+1) * (-1)^i
            let agrees = v.is_positive() == (i % 2 == 0);
            match global {
                None => global = Some(agrees),
                Some(g) if g != agrees => return false,
                _ => {}
            }
        }
        true
    }

    /// `e_i^{k-j} e_k^{j-i} <= e_j^{k-i}` for every `i < j < k`.
    ///
    /// For strictly positive sequences this is equivalent to log-concavity;
    /// on sequences with zeros it additionally rules out internal zeros
    /// between positive entries.
    pub fn power_inequality_holds(&self) -> Result<bool, SeqError> {
        if let Some(index) = self.values.iter().position(|v| v.is_negative()) {
            return Err(SeqError::NegativeEntry { index });
        }
        let v = &self.values;
        let n = v.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let lhs = Pow::pow(&v[i], (k - j) as u32) * Pow::pow(&v[k], (j - i) as u32);
                    let rhs = Pow::pow(&v[j], (k - i) as u32);
                    if lhs > rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Convolution (Cauchy product) of two sequences.
    pub fn convolve(&self, other: &Sequence) -> Sequence {
        let mut out = vec![BigInt::zero(); self.len() + other.len() - 1];
        for (i, a) in self.values.iter().enumerate() {
            for (j, b) in other.values.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Sequence {
            values: out,
            offset: self.offset + other.offset,
        }
    }
}

/// Verdicts for log-concavity and related shape properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub log_concave: bool,
    pub no_internal_zeros: bool,
    pub unimodal: bool,
    pub sign_alternating: bool,
    pub nonnegative: bool,
}

impl SequenceReport {
    /// Alternation is read off `signed`; the remaining predicates are
    /// evaluated on absolute values.
    pub fn of_signed(signed: &Sequence) -> Self {
        let abs = signed.abs();
        Self {
            log_concave: abs.is_log_concave(),
            no_internal_zeros: abs.has_no_internal_zeros(),
            unimodal: abs.is_unimodal(),
            sign_alternating: signed.is_sign_alternating(),
            nonnegative: signed.is_nonnegative(),
        }
    }

    pub fn of_nonnegative(seq: &Sequence) -> Self {
        Self {
            log_concave: seq.is_log_concave(),
            no_internal_zeros: seq.has_no_internal_zeros(),
            unimodal: seq.is_unimodal(),
            sign_alternating: seq.is_sign_alternating(),
            nonnegative: seq.is_nonnegative(),
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
