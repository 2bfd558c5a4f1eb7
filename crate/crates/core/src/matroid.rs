//! Matroids given by rank oracles on bitset subsets of the ground set.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::linalg;
use crate::poly::IntPolynomial;

/// Default cap on the ground set for flat enumeration.
pub const DEFAULT_MAX_GROUND: usize = 16;
/// Cap for the subset-sum oracle.
pub const WHITNEY_MAX_GROUND: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set of size {size} exceeds the limit of {limit}")]
    GroundSetTooLarge { size: usize, limit: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, found: usize },
    #[error("element {0} is not in the ground set")]
    ElementOutOfRange(usize),
    #[error("rank function violates the matroid axioms on subset {0:#b}")]
    InvalidRankFunction(u64),
}

type RankFn = dyn Fn(u64) -> usize + Send + Sync;

/// A matroid on ground set `0..ground_size` (at most 64 elements).
#[derive(Clone)]
pub struct Matroid {
    ground_size: usize,
    rank_fn: Arc<RankFn>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("ground_size", &self.ground_size)
            .field("rank", &self.rank())
            .finish()
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Spreads the bits of `s` over `0..n+1`, leaving bit `e` clear.
fn insert_gap(s: u64, e: usize) -> u64 {
    let low = s & ((1u64 << e) - 1);
    let high = s >> e;
    low | high.checked_shl(e as u32 + 1).unwrap_or(0)
}

impl Matroid {
    /// Wraps an arbitrary rank function after spot-checking the axioms on
    /// random subsets (all subsets when the ground set has at most 10
    /// elements).
    pub fn from_rank_fn<F>(ground_size: usize, f: F) -> Result<Self, MatroidError>
    where
        F: Fn(u64) -> usize + Send + Sync + 'static,
    {
        if ground_size > 64 {
            return Err(MatroidError::GroundSetTooLarge { size: ground_size, limit: 64 });
        }
        let m = Self {
            ground_size,
            rank_fn: Arc::new(f),
        };
        m.check_axioms(256, 0x5eed)?;
        Ok(m)
    }

    fn from_rank_fn_unchecked<F>(ground_size: usize, f: F) -> Self
    where
        F: Fn(u64) -> usize + Send + Sync + 'static,
    {
        Self {
            ground_size,
            rank_fn: Arc::new(f),
        }
    }

    /// Column matroid of a rational matrix. Columns are scaled to integer
    /// vectors, then ranks come from fraction-free elimination.
    pub fn from_matrix(rows: &[Vec<BigRational>]) -> Result<Self, MatroidError> {
        let cols = rows.first().map_or(0, Vec::len);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatroidError::RaggedMatrix { row, expected: cols, found: r.len() });
            }
        }
        if cols > 64 {
            return Err(MatroidError::GroundSetTooLarge { size: cols, limit: 64 });
        }
        let columns: Vec<Vec<BigInt>> = (0..cols)
            .map(|c| {
                let col: Vec<BigRational> = rows.iter().map(|r| r[c].clone()).collect();
                let lcm = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                col.iter().map(|x| (x * &lcm).to_integer()).collect()
            })
            .collect();
        Ok(Self::from_rank_fn_unchecked(cols, move |s| {
            let chosen: Vec<Vec<BigInt>> = (0..columns.len())
                .filter(|&c| s >> c & 1 == 1)
                .map(|c| columns[c].clone())
                .collect();
            if chosen.is_empty() {
                0
            } else {
                linalg::rank(chosen)
            }
        }))
    }

    /// Convenience wrapper for integer matrices.
    pub fn from_int_matrix(rows: &[Vec<i64>]) -> Result<Self, MatroidError> {
        let rat: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::from_matrix(&rat)
    }

    /// Cycle matroid on the edges of `g`.
    pub fn cycle_matroid(g: &Graph) -> Result<Self, MatroidError> {
        let edges = g.edges().to_vec();
        if edges.len() > 64 {
            return Err(MatroidError::GroundSetTooLarge { size: edges.len(), limit: 64 });
        }
        let n = g.vertex_count();
        Ok(Self::from_rank_fn_unchecked(edges.len(), move |s| {
            let chosen: Vec<(usize, usize)> = (0..edges.len())
                .filter(|&i| s >> i & 1 == 1)
                .map(|i| edges[i])
                .collect();
            let sub = Graph::new(n, chosen).expect("edges already validated");
            n - sub.component_count()
        }))
    }

    /// Uniform matroid `U_{r,n}`.
    pub fn uniform(r: usize, n: usize) -> Self {
        Self::from_rank_fn_unchecked(n, move |s| (s.count_ones() as usize).min(r))
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn ground(&self) -> u64 {
        full_mask(self.ground_size)
    }

    pub fn rank_of(&self, s: u64) -> usize {
        (self.rank_fn)(s & self.ground())
    }

    pub fn rank(&self) -> usize {
        self.rank_of(self.ground())
    }

    pub fn closure(&self, s: u64) -> u64 {
        let r = self.rank_of(s);
        let mut out = s;
        for e in 0..self.ground_size {
            if s >> e & 1 == 0 && self.rank_of(s | 1 << e) == r {
                out |= 1 << e;
            }
        }
        out
    }

    pub fn is_loop(&self, e: usize) -> bool {
        e < self.ground_size && self.rank_of(1 << e) == 0
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        e < self.ground_size && self.rank_of(self.ground() & !(1 << e)) < self.rank()
    }

    pub fn has_loop(&self) -> bool {
        (0..self.ground_size).any(|e| self.is_loop(e))
    }

    /// Checks the rank axioms on `samples` random subsets, or on every
    /// subset when the ground set has at most 10 elements.
    pub fn check_axioms(&self, samples: usize, seed: u64) -> Result<(), MatroidError> {
        let n = self.ground_size;
        if self.rank_of(0) != 0 {
            return Err(MatroidError::InvalidRankFunction(0));
        }
        let check = |s: u64, t: u64| -> bool {
            let rs = self.rank_of(s);
            if rs > s.count_ones() as usize {
                return false;
            }
            for e in 0..n {
                if s >> e & 1 == 0 {
                    let d = self.rank_of(s | 1 << e) as isize - rs as isize;
                    if !(0..=1).contains(&d) {
                        return false;
                    }
                }
            }
            self.rank_of(s | t) + self.rank_of(s & t) <= rs + self.rank_of(t)
        };
        if n <= 10 {
            for s in 0..=full_mask(n) {
                if !check(s, !s & full_mask(n)) {
                    return Err(MatroidError::InvalidRankFunction(s));
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let s = rng.gen::<u64>() & self.ground();
                let t = rng.gen::<u64>() & self.ground();
                if !check(s, t) {
                    return Err(MatroidError::InvalidRankFunction(s));
                }
            }
        }
        Ok(())
    }

    /// `M \ e`, with elements above `e` shifted down by one.
    pub fn delete(&self, e: usize) -> Result<Matroid, MatroidError> {
        if e >= self.ground_size {
            return Err(MatroidError::ElementOutOfRange(e));
        }
        let inner = Arc::clone(&self.rank_fn);
        Ok(Self::from_rank_fn_unchecked(self.ground_size - 1, move |s| {
            inner(insert_gap(s, e))
        }))
    }

    /// `M / e`, with elements above `e` shifted down by one.
    pub fn contract(&self, e: usize) -> Result<Matroid, MatroidError> {
        if e >= self.ground_size {
            return Err(MatroidError::ElementOutOfRange(e));
        }
        let inner = Arc::clone(&self.rank_fn);
        let re = inner(1 << e);
        Ok(Self::from_rank_fn_unchecked(self.ground_size - 1, move |s| {
            inner(insert_gap(s, e) | 1 << e) - re
        }))
    }

    /// Lattice of flats, capped at `LOGCAVE_MAX_GROUND` (default 16) elements.
    pub fn flats(&self) -> Result<FlatLattice, MatroidError> {
        let limit = max_ground();
        if self.ground_size > limit {
            return Err(MatroidError::GroundSetTooLarge { size: self.ground_size, limit });
        }
        let bottom = self.closure(0);
        let mut seen: HashSet<u64> = HashSet::from([bottom]);
        let mut queue = vec![bottom];
        while let Some(f) = queue.pop() {
            for e in 0..self.ground_size {
                if f >> e & 1 == 0 {
                    let g = self.closure(f | 1 << e);
                    if seen.insert(g) {
                        queue.push(g);
                    }
                }
            }
        }
        let mut flats: Vec<(usize, u64)> = seen.into_iter().map(|f| (self.rank_of(f), f)).collect();
        flats.sort_unstable();
        let ranks: Vec<usize> = flats.iter().map(|&(r, _)| r).collect();
        let flats: Vec<u64> = flats.into_iter().map(|(_, f)| f).collect();
        let mut mobius: Vec<BigInt> = Vec::with_capacity(flats.len());
        for (i, &x) in flats.iter().enumerate() {
            if i == 0 {
                mobius.push(BigInt::one());
                continue;
            }
            let mut sum = BigInt::zero();
            for (j, &y) in flats[..i].iter().enumerate() {
                if y & !x == 0 && y != x {
                    sum += &mobius[j];
                }
            }
            mobius.push(-sum);
        }
        Ok(FlatLattice { flats, ranks, mobius })
    }

    /// Characteristic polynomial via the Möbius function of the lattice of
    /// flats. Zero when the matroid has a loop.
    pub fn characteristic_polynomial(&self) -> Result<IntPolynomial, MatroidError> {
        let lattice = self.flats()?;
        if self.has_loop() {
            return Ok(IntPolynomial::zero());
        }
        let r = self.rank();
        let mut coeffs = vec![BigInt::zero(); r + 1];
        for (i, mu) in lattice.mobius.iter().enumerate() {
            coeffs[r - lattice.ranks[i]] += mu;
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// Independent check: `sum over S of (-1)^|S| q^(r - rank S)`.
    pub fn whitney_oracle(&self) -> Result<IntPolynomial, MatroidError> {
        if self.ground_size > WHITNEY_MAX_GROUND {
            return Err(MatroidError::GroundSetTooLarge {
                size: self.ground_size,
                limit: WHITNEY_MAX_GROUND,
            });
        }
        let r = self.rank();
        let mut coeffs = vec![BigInt::zero(); r + 1];
        for s in 0..=self.ground() {
            let k = r - self.rank_of(s);
            if s.count_ones() % 2 == 0 {
                coeffs[k] += 1;
            } else {
                coeffs[k] -= 1;
            }
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// True when both matroids have the same rank on every subset.
    pub fn same_rank_function(&self, other: &Matroid) -> bool {
        self.ground_size == other.ground_size
            && (0..=self.ground()).all(|s| self.rank_of(s) == other.rank_of(s))
    }
}

fn max_ground() -> usize {
    std::env::var("LOGCAVE_MAX_GROUND")
        .ok()
        .and_then(|v| v.parse().ok())
        .map_or(DEFAULT_MAX_GROUND, |v: usize| v.min(64))
}

/// Flats sorted by rank, with Möbius values `mu(0, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatLattice {
    flats: Vec<u64>,
    ranks: Vec<usize>,
    mobius: Vec<BigInt>,
}

impl FlatLattice {
    pub fn flats(&self) -> &[u64] {
        &self.flats
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn mobius(&self) -> &[BigInt] {
        &self.mobius
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Pairs `(i, j)` with flat `j` covering flat `i`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &x) in self.flats.iter().enumerate() {
            for (j, &y) in self.flats.iter().enumerate() {
                if self.ranks[j] == self.ranks[i] + 1 && x & !y == 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }
}
