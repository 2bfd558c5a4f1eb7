//! Representability of classes `sum_i e_i [P^(k-i) x P^i]` in the Chow group
//! of `P^n x P^m`, with monomial-map witnesses.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monomial::{multiplicity_sequence, MixedConfig, MonomialError, MonomialIdeal};
use crate::polytope::{mixed_volume_pair, LatticePolytope, PolytopeError};
use crate::seq::Sequence;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomclassError {
    #[error("dimension k = {k} exceeds n + m = {total}")]
    DimensionTooLarge { k: usize, total: usize },
    #[error("index {index} outside the admissible range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("expected {expected} coefficients, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("class is not representable up to a multiple by a non-exceptional class")]
    NotEligible,
    #[error("support is a single index; the witness would be a hypersurface, not a monomial map")]
    SingleSupport,
    #[error("witness exponent {0} does not fit the monomial engine")]
    TooLarge(BigInt),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// `sum_i e_i [P^(k-i) x P^i]` in `A_k(P^n x P^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyClass {
    n: usize,
    m: usize,
    k: usize,
    coefficients: BTreeMap<usize, BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    RepresentableExactly,
    NotRepresentable,
    RepresentableUpToMultiple,
    NotRepresentableUpToAnyMultiple,
}

impl Verdict {
    pub fn is_representable(self) -> bool {
        matches!(self, Verdict::RepresentableExactly | Verdict::RepresentableUpToMultiple)
    }
}

impl HomologyClass {
    /// Missing indices are zero. Keys outside `max(0,k-n)..=min(m,k)` are
    /// rejected.
    pub fn new(
        n: usize,
        m: usize,
        k: usize,
        coefficients: BTreeMap<usize, BigInt>,
    ) -> Result<Self, HomclassError> {
        if k > n + m {
            return Err(HomclassError::DimensionTooLarge { k, total: n + m });
        }
        let (lo, hi) = (k.saturating_sub(n), m.min(k));
        if let Some(&index) = coefficients.keys().find(|&&i| i < lo || i > hi) {
            return Err(HomclassError::IndexOutOfRange { index, lo, hi });
        }
        Ok(Self { n, m, k, coefficients })
    }

    /// Coefficients for every admissible index in increasing order.
    pub fn from_dense(n: usize, m: usize, k: usize, e: Vec<BigInt>) -> Result<Self, HomclassError> {
        if k > n + m {
            return Err(HomclassError::DimensionTooLarge { k, total: n + m });
        }
        let lo = k.saturating_sub(n);
        let expected = m.min(k) - lo + 1;
        if e.len() != expected {
            return Err(HomclassError::WrongLength { expected, found: e.len() });
        }
        Self::new(n, m, k, e.into_iter().enumerate().map(|(j, v)| (lo + j, v)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index_range(&self) -> (usize, usize) {
        (self.k.saturating_sub(self.n), self.m.min(self.k))
    }

    pub fn coefficient(&self, i: usize) -> BigInt {
        self.coefficients.get(&i).cloned().unwrap_or_default()
    }

    pub fn dense(&self) -> Vec<BigInt> {
        let (lo, hi) = self.index_range();
        (lo..=hi).map(|i| self.coefficient(i)).collect()
    }

    /// The same class viewed in `P^m x P^n`.
    pub fn swapped(&self) -> HomologyClass {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(&i, v)| (self.k - i, v.clone()))
            .collect();
        HomologyClass {
            n: self.m,
            m: self.n,
            k: self.k,
            coefficients,
        }
    }

    pub fn scaled(&self, c: &BigInt) -> HomologyClass {
        HomologyClass {
            coefficients: self.coefficients.iter().map(|(&i, v)| (i, v * c)).collect(),
            ..self.clone()
        }
    }

    /// Indices of the nonzero coefficients, first and last.
    fn support(&self) -> Option<(usize, usize)> {
        let nz: Vec<usize> = self
            .coefficients
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&i, _)| i)
            .collect();
        Some((*nz.first()?, *nz.last()?))
    }
}

/// A class supported at one index whose factor dimensions are extreme is a
/// multiple of `[P^n x P^m]`, `[P^n x P^0]`, `[P^0 x P^m]` or `[P^0 x P^0]`.
fn exceptional_index(xi: &HomologyClass) -> Option<usize> {
    let (p, q) = xi.support()?;
    if p != q {
        return None;
    }
    let pair = (xi.k - p, p);
    let corners = [(xi.n, xi.m), (xi.n, 0), (0, xi.m), (0, 0)];
    corners.contains(&pair).then_some(p)
}

pub fn classify(xi: &HomologyClass) -> Verdict {
    if let Some(i) = exceptional_index(xi) {
        return if xi.coefficient(i).is_one() {
            Verdict::RepresentableExactly
        } else {
            Verdict::NotRepresentable
        };
    }
    let seq = Sequence::new(xi.dense()).expect("index range is nonempty");
    if !seq.is_all_zero() && seq.is_nonnegative() && seq.is_log_concave() && seq.has_no_internal_zeros() {
        Verdict::RepresentableUpToMultiple
    } else {
        Verdict::NotRepresentableUpToAnyMultiple
    }
}

/// Graph of the monomial map `(z_0^l1 : z_1^l1 : z_0^(l1-l2) z_2^l2 : ...)`
/// realising a multiple of the trimmed, dense part of a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// First and last index of the support in the original class.
    pub support: (usize, usize),
    /// The common multiple `e` of `e_p, ..., e_(q-1)`.
    pub common_multiple: BigInt,
    pub lambda: Vec<u32>,
    /// `e^r / e_p` with `r = q - p`.
    pub multiple: BigInt,
    pub map_exponents: Vec<Vec<u32>>,
    /// Graph degrees `l_1 ... l_j = e^j e_(p+j) / e_p` for `j = 0..=r`.
    pub predicted_degrees: Vec<BigInt>,
    /// `multiple * e_(p+j)`: the graph degrees after the degree-`e`
    /// Veronese embedding of the source, which scales entry `j` by `e^(r-j)`.
    pub class_coefficients: Vec<BigInt>,
}

impl Witness {
    pub fn ideal(&self) -> Result<MonomialIdeal, MonomialError> {
        MonomialIdeal::new(self.map_exponents[0].len(), self.map_exponents.clone())
    }
}

pub fn construct_witness(xi: &HomologyClass) -> Result<Witness, HomclassError> {
    if classify(xi) != Verdict::RepresentableUpToMultiple {
        return Err(HomclassError::NotEligible);
    }
    let (p, q) = xi.support().ok_or(HomclassError::NotEligible)?;
    if p == q {
        return Err(HomclassError::SingleSupport);
    }
    let e: Vec<BigInt> = (p..=q).map(|i| xi.coefficient(i)).collect();
    let r = q - p;
    let common = e[..r].iter().fold(BigInt::one(), |acc, x| acc.lcm(x));
    let mut lambda = Vec::with_capacity(r);
    for j in 1..=r {
        let l = &common * &e[j] / &e[j - 1];
        lambda.push(l.to_u32().ok_or(HomclassError::TooLarge(l))?);
    }
    debug_assert!(lambda.windows(2).all(|w| w[0] >= w[1]));
    let l1 = lambda[0];
    let mut map_exponents = Vec::with_capacity(r + 1);
    let mut first = vec![0u32; r + 1];
    first[0] = l1;
    map_exponents.push(first);
    let mut second = vec![0u32; r + 1];
    second[1] = l1;
    map_exponents.push(second);
    for i in 2..=r {
        let mut g = vec![0u32; r + 1];
        g[0] = l1 - lambda[i - 1];
        g[i] = lambda[i - 1];
        map_exponents.push(g);
    }
    let predicted_degrees = (0..=r)
        .map(|j| Pow::pow(&common, j as u32) * &e[j] / &e[0])
        .collect();
    let multiple = Pow::pow(&common, r as u32) / &e[0];
    let class_coefficients = e.iter().map(|x| &multiple * x).collect();
    Ok(Witness {
        support: (p, q),
        class_coefficients,
        multiple,
        common_multiple: common,
        lambda,
        map_exponents,
        predicted_degrees,
    })
}

/// Degrees found by each route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCheck {
    pub monomial: Vec<BigInt>,
    pub polytope: Vec<BigInt>,
    pub holds: bool,
}

/// Recomputes the graph degrees as mixed multiplicities of the map's ideal
/// and as mixed volumes of the simplex with `conv{0, l_i e_i}`.
pub fn check_witness(w: &Witness, config: &MixedConfig) -> Result<WitnessCheck, HomclassError> {
    let r = w.lambda.len();
    let monomial = multiplicity_sequence(&w.ideal()?, config)?;
    let lambda: Vec<i64> = w.lambda.iter().map(|&l| l as i64).collect();
    let shephard = LatticePolytope::shephard(&lambda)?;
    let simplex = LatticePolytope::standard_simplex(r);
    let polytope = (0..=r)
        .map(|j| Ok(mixed_volume_pair(&simplex, &shephard, j)?.to_integer()))
        .collect::<Result<Vec<BigInt>, HomclassError>>()?;
    let embedded = (0..=r).all(|j| {
        &w.predicted_degrees[j] * Pow::pow(&w.common_multiple, (r - j) as u32) == w.class_coefficients[j]
    });
    let holds = embedded && monomial == w.predicted_degrees && polytope == w.predicted_degrees;
    Ok(WitnessCheck { monomial, polytope, holds })
}

pub fn verify_witness(w: &Witness) -> bool {
    check_witness(w, &MixedConfig::default()).is_ok_and(|c| c.holds)
}

/// True when the witness accounts for `multiple * xi` on its support.
pub fn witness_scaling_holds(xi: &HomologyClass, w: &Witness) -> bool {
    let (p, q) = w.support;
    w.class_coefficients.len() == q - p + 1
        && (p..=q).all(|i| w.class_coefficients[i - p] == &w.multiple * xi.coefficient(i))
        && w.class_coefficients.iter().all(|c| !c.is_negative())
}
