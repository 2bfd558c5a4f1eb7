//! Monomial ideals and their mixed multiplicities.
//!
//! # Computational strategy
//!
//! For monomial ideals `I` in `S = k[z_0..z_n]` with `m` the ideal of all
//! variables, `m^u I / m^(u+1) I` has dimension equal to the number of minimal
//! generators of `m^u I` (graded Nakayama: the denominator is `m` times the
//! numerator). So
//!
//! ```text
//! HP(u, v_1..v_s) = #mingens(m^u J_1^v_1 ... J_s^v_s)
//! ```
//!
//! and the mixed multiplicity `e_i` is the mixed finite difference
//! `D_u^i0 D_v1^i1 ... D_vs^is HP` evaluated anywhere in the region where
//! `HP` is polynomial.
//!
//! The generator count is not found by enumerating monomials. With
//! `I = prod J_k^v_k` computed explicitly, `d_1 < ... < d_r` its generator
//! degrees and `A_t` the ideal of generators of degree at most `t`, a degree
//! `D` monomial `b` is a minimal generator of `m^u I` iff `b` lies in
//! `A_(D-u)` but not in `A_(D-u-1)`. Summing over degrees,
//!
//! ```text
//! #mingens(m^u I) = sum_j H(S/A_(d_(j-1)), u + d_j) - H(S/A_(d_j), u + d_j)
//! ```
//!
//! with `A_(d_0) = 0`. Each Hilbert function is read off the numerator of the
//! Hilbert series, computed by the pivot recursion
//! `K(A) = K(A + (p)) + t^deg(p) K(A : p)`. None of this depends on `u`, so the
//! `u` base point can be pushed past the exact regularity threshold for free
//! and only the `v` base point needs the doubling certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seq::binomial;

pub type Exponent = Vec<u32>;

/// Largest total degree accepted for a single generator.
pub const MAX_DEGREE: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonomialError {
    #[error("expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero ideal is not allowed")]
    ZeroIdeal,
    #[error("a monomial ideal needs at least one variable")]
    NoVariables,
    #[error("constant monomial has no Jacobian ideal")]
    ConstantMonomial,
    #[error("multi-index {index:?} must have {expected} entries summing to {total}")]
    BadIndex { index: Vec<u32>, expected: usize, total: usize },
    #[error("at least one ideal is required")]
    NoIdeals,
    #[error("generator degree {0} exceeds the supported maximum")]
    DegreeTooLarge(u64),
    #[error("values did not stabilise under base-point doubling (last base points u={base_u}, v={base_v})")]
    NonStable { base_u: u64, base_v: u64 },
}

fn degree(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Minimal elements under divisibility, sorted by degree then lexicographically.
fn minimalize(mut gens: Vec<Exponent>) -> Vec<Exponent> {
    gens.sort_unstable_by(|a, b| degree(a).cmp(&degree(b)).then_with(|| a.cmp(b)));
    gens.dedup();
    let single_degree = gens.first().map(|g| degree(g)) == gens.last().map(|g| degree(g));
    if single_degree {
        return gens;
    }
    let mut kept: Vec<Exponent> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| divides(k, &g)) {
            kept.push(g);
        }
    }
    kept
}

/// A nonzero monomial ideal, stored by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    num_vars: usize,
    gens: Vec<Exponent>,
}

impl MonomialIdeal {
    pub fn new(num_vars: usize, gens: Vec<Exponent>) -> Result<Self, MonomialError> {
        if num_vars == 0 {
            return Err(MonomialError::NoVariables);
        }
        if gens.is_empty() {
            return Err(MonomialError::ZeroIdeal);
        }
        if let Some(g) = gens.iter().find(|g| g.len() != num_vars) {
            return Err(MonomialError::DimensionMismatch { expected: num_vars, found: g.len() });
        }
        if let Some(d) = gens
            .iter()
            .map(|g| g.iter().map(|&x| x as u64).sum::<u64>())
            .find(|&d| d > MAX_DEGREE)
        {
            return Err(MonomialError::DegreeTooLarge(d));
        }
        Ok(Self {
            num_vars,
            gens: minimalize(gens),
        })
    }

    /// The ideal of all variables.
    pub fn maximal(num_vars: usize) -> Self {
        let gens = (0..num_vars)
            .map(|j| {
                let mut e = vec![0; num_vars];
                e[j] = 1;
                e
            })
            .collect();
        Self { num_vars, gens }
    }

    pub fn unit(num_vars: usize) -> Self {
        Self {
            num_vars,
            gens: vec![vec![0; num_vars]],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn max_degree(&self) -> u64 {
        self.gens.iter().map(|g| degree(g)).max().unwrap_or(0)
    }

    pub fn is_equigenerated(&self) -> bool {
        let d = degree(&self.gens[0]);
        self.gens.iter().all(|g| degree(g) == d)
    }

    pub fn contains(&self, monomial: &[u32]) -> bool {
        self.gens.iter().any(|g| divides(g, monomial))
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, MonomialError> {
        if self.num_vars != other.num_vars {
            return Err(MonomialError::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        let mut sums = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Ok(MonomialIdeal {
            num_vars: self.num_vars,
            gens: minimalize(sums),
        })
    }

    pub fn power(&self, k: u32) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.num_vars);
        for _ in 0..k {
            acc = acc.product(self).expect("same ring");
        }
        acc
    }
}

/// `J_h`: generated by `h / z_j` for every variable dividing the monomial `h`.
pub fn jacobian_ideal_of_monomial(h: &[u32]) -> Result<MonomialIdeal, MonomialError> {
    if h.is_empty() {
        return Err(MonomialError::NoVariables);
    }
    if h.iter().all(|&x| x == 0) {
        return Err(MonomialError::ConstantMonomial);
    }
    let gens = (0..h.len())
        .filter(|&j| h[j] > 0)
        .map(|j| {
            let mut e = h.to_vec();
            e[j] -= 1;
            e
        })
        .collect();
    MonomialIdeal::new(h.len(), gens)
}

/// Sparse integer polynomial in `t`.
type TPoly = BTreeMap<u64, BigInt>;

fn tpoly_add_shifted(acc: &mut TPoly, p: &TPoly, shift: u64) {
    for (k, c) in p {
        let e = acc.entry(k + shift).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            acc.remove(&(k + shift));
        }
    }
}

fn tpoly_mul_one_minus(p: &TPoly, d: u64) -> TPoly {
    let mut out = p.clone();
    let neg: TPoly = p.iter().map(|(k, c)| (*k, -c)).collect();
    tpoly_add_shifted(&mut out, &neg, d);
    out
}

/// Numerator `K(t)` of the Hilbert series `K(t) / (1-t)^N` of `S / <gens>`,
/// for a minimal generating set.
fn hilbert_numerator(gens: Vec<Exponent>) -> TPoly {
    if gens.is_empty() {
        return TPoly::from([(0, BigInt::one())]);
    }
    let nvars = gens[0].len();
    // Pairwise coprime generators: K = prod (1 - t^deg g).
    let mut used = vec![false; nvars];
    let mut coprime = true;
    'outer: for g in &gens {
        for (j, &x) in g.iter().enumerate() {
            if x > 0 {
                if used[j] {
                    coprime = false;
                    break 'outer;
                }
                used[j] = true;
            }
        }
    }
    if coprime {
        let mut k = TPoly::from([(0, BigInt::one())]);
        for g in &gens {
            k = tpoly_mul_one_minus(&k, degree(g));
        }
        return k;
    }
    // Pivot x_j^e: j occurs in the most generators, e is the median of its
    // exponents over generators that are not pure powers.
    let mut counts = vec![0usize; nvars];
    for g in &gens {
        if g.iter().filter(|&&x| x > 0).count() >= 2 {
            for (j, &x) in g.iter().enumerate() {
                if x > 0 {
                    counts[j] += 1;
                }
            }
        }
    }
    let j = (0..nvars).max_by_key(|&j| (counts[j], std::cmp::Reverse(j))).unwrap();
    let mut exps: Vec<u32> = gens
        .iter()
        .filter(|g| g[j] > 0 && g.iter().filter(|&&x| x > 0).count() >= 2)
        .map(|g| g[j])
        .collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2];

    let mut pivot = vec![0u32; nvars];
    pivot[j] = e;
    let mut sum: Vec<Exponent> = gens.iter().filter(|g| g[j] < e).cloned().collect();
    sum.push(pivot);
    let sum = minimalize(sum);
    let colon = minimalize(
        gens.into_iter()
            .map(|mut g| {
                g[j] = g[j].saturating_sub(e);
                g
            })
            .collect(),
    );
    let mut k = hilbert_numerator(sum);
    let c = hilbert_numerator(colon);
    tpoly_add_shifted(&mut k, &c, e as u64);
    k
}

/// `H(S/A, d) = sum_k c_k C(d - k + N - 1, N - 1)`.
fn hilbert_function(k: &TPoly, nvars: usize, d: u64) -> BigInt {
    let mut total = BigInt::zero();
    for (&deg, c) in k {
        if deg <= d {
            total += c * binomial(d - deg + nvars as u64 - 1, nvars as u64 - 1);
        }
    }
    total
}

/// Precomputed data answering `#mingens(m^u I)` for any `u`.
struct GeneratorCounter {
    nvars: usize,
    /// `(d_j, K(A_(d_(j-1))), K(A_(d_j)))`
    levels: Vec<(u64, TPoly, TPoly)>,
}

impl GeneratorCounter {
    fn new(ideal: &MonomialIdeal) -> Self {
        let nvars = ideal.num_vars;
        let mut degrees: Vec<u64> = ideal.gens.iter().map(|g| degree(g)).collect();
        degrees.dedup();
        let mut levels = Vec::with_capacity(degrees.len());
        let mut prev = TPoly::from([(0, BigInt::one())]);
        for &d in &degrees {
            let upto: Vec<Exponent> =
                ideal.gens.iter().filter(|g| degree(g) <= d).cloned().collect();
            let k = hilbert_numerator(upto);
            levels.push((d, prev, k.clone()));
            prev = k;
        }
        Self { nvars, levels }
    }

    fn count(&self, u: u64) -> BigInt {
        self.levels
            .iter()
            .map(|(d, before, after)| {
                hilbert_function(before, self.nvars, u + d)
                    - hilbert_function(after, self.nvars, u + d)
            })
            .sum()
    }

    /// Smallest `u` from which `count` agrees with a polynomial in `u`.
    fn polynomial_from(&self) -> u64 {
        let n = self.nvars as i64;
        let mut bound = 0i64;
        for (d, before, after) in &self.levels {
            for k in [before, after] {
                let top = k.keys().next_back().copied().unwrap_or(0) as i64;
                bound = bound.max(top - n + 1 - *d as i64);
            }
        }
        bound as u64
    }
}

fn check_ring(ideals: &[MonomialIdeal]) -> Result<usize, MonomialError> {
    let first = ideals.first().ok_or(MonomialError::NoIdeals)?;
    for j in ideals {
        if j.num_vars != first.num_vars {
            return Err(MonomialError::DimensionMismatch {
                expected: first.num_vars,
                found: j.num_vars,
            });
        }
    }
    Ok(first.num_vars)
}

/// Caches `J_k^v` incrementally per ideal.
struct PowerCache<'a> {
    ideals: &'a [MonomialIdeal],
    powers: Vec<Vec<MonomialIdeal>>,
}

impl<'a> PowerCache<'a> {
    fn new(ideals: &'a [MonomialIdeal]) -> Self {
        let powers = ideals
            .iter()
            .map(|j| vec![MonomialIdeal::unit(j.num_vars)])
            .collect();
        Self { ideals, powers }
    }

    fn power(&mut self, k: usize, v: u32) -> &MonomialIdeal {
        while self.powers[k].len() <= v as usize {
            let next = self.powers[k].last().unwrap().product(&self.ideals[k]).unwrap();
            self.powers[k].push(next);
        }
        &self.powers[k][v as usize]
    }

    fn product(&mut self, powers: &[u32]) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.ideals[0].num_vars);
        for (k, &v) in powers.iter().enumerate() {
            if v > 0 {
                let p = self.power(k, v).clone();
                acc = acc.product(&p).unwrap();
            }
        }
        acc
    }
}

/// Number of minimal generators of `m^u J_1^v_1 ... J_s^v_s`.
pub fn min_gen_count(
    u: u64,
    ideals: &[MonomialIdeal],
    powers: &[u32],
) -> Result<BigInt, MonomialError> {
    check_ring(ideals)?;
    if powers.len() != ideals.len() {
        return Err(MonomialError::DimensionMismatch {
            expected: ideals.len(),
            found: powers.len(),
        });
    }
    let product = PowerCache::new(ideals).product(powers);
    Ok(GeneratorCounter::new(&product).count(u))
}

/// Independent check on `min_gen_count`: enumerates every monomial up to the
/// largest possible generator degree and tests minimality directly.
pub fn min_gen_count_brute_force(
    u: u64,
    ideals: &[MonomialIdeal],
    powers: &[u32],
) -> Result<u64, MonomialError> {
    let nvars = check_ring(ideals)?;
    let product = PowerCache::new(ideals).product(powers);
    let in_ideal = |b: &[u32]| {
        product
            .gens
            .iter()
            .any(|g| divides(g, b) && degree(b) - degree(g) >= u)
    };
    let top = u + product.max_degree();
    let mut count = 0u64;
    let mut current = vec![0u32; nvars];
    fn walk(
        j: usize,
        remaining: u64,
        current: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32]),
    ) {
        if j + 1 == current.len() {
            current[j] = remaining as u32;
            visit(current);
            return;
        }
        for x in 0..=remaining {
            current[j] = x as u32;
            walk(j + 1, remaining - x, current, visit);
        }
    }
    for d in 0..=top {
        walk(0, d, &mut current, &mut |b: &[u32]| {
            if in_ideal(b) {
                let minimal = (0..b.len()).all(|j| {
                    if b[j] == 0 {
                        return true;
                    }
                    let mut c = b.to_vec();
                    c[j] -= 1;
                    !in_ideal(&c)
                });
                if minimal {
                    count += 1;
                }
            }
        });
    }
    Ok(count)
}

pub const DEFAULT_BASE_V: u64 = 2;

/// Base points for finite differences. Unset fields fall back to defaults:
/// `u` starts at `num_vars * max_degree * (n + 1)` raised to the exact
/// polynomial threshold, and `v` at 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixedConfig {
    pub base_u: Option<u64>,
    pub base_v: Option<u64>,
    pub max_doublings: u32,
}

impl Default for MixedConfig {
    fn default() -> Self {
        Self {
            base_u: None,
            base_v: None,
            max_doublings: 3,
        }
    }
}

/// `e_i(m | J_1..J_s)` for every multi-index `i = (i_0..i_s)` with `|i| = n`,
/// where `n + 1` is the number of variables. Index entry `i_0` is the power
/// of `u`, entry `i_k` the power of `v_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedMultiplicityProfile {
    pub total_degree: usize,
    pub values: BTreeMap<Vec<u32>, BigInt>,
}

impl MixedMultiplicityProfile {
    pub fn get(&self, index: &[u32]) -> Option<&BigInt> {
        self.values.get(index)
    }
}

fn all_indices(parts: usize, total: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in all_indices(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn box_points(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn validate_index(index: &[u32], parts: usize, n: usize) -> Result<(), MonomialError> {
    if index.len() != parts || index.iter().map(|&x| x as usize).sum::<usize>() != n {
        return Err(MonomialError::BadIndex {
            index: index.to_vec(),
            expected: parts,
            total: n,
        });
    }
    Ok(())
}

/// One extraction of the requested indices at base points `(bu, bv)`.
fn extract(
    targets: &[Vec<u32>],
    bu_floor: u64,
    bv: u32,
    cache: &mut PowerCache,
) -> (Vec<BigInt>, u64) {
    let mut needed: BTreeSet<Vec<u32>> = BTreeSet::new();
    for t in targets {
        for offs in box_points(&t[1..]) {
            needed.insert(offs);
        }
    }
    let counters: HashMap<Vec<u32>, GeneratorCounter> = needed
        .into_iter()
        .map(|offs| {
            let v: Vec<u32> = offs.iter().map(|&a| a + bv).collect();
            let ideal = cache.product(&v);
            (offs, GeneratorCounter::new(&ideal))
        })
        .collect();
    let bu = counters
        .values()
        .map(GeneratorCounter::polynomial_from)
        .max()
        .unwrap_or(0)
        .max(bu_floor);
    let values = targets
        .iter()
        .map(|t| {
            let mut total = BigInt::zero();
            for offs in box_points(&t[1..]) {
                let counter = &counters[&offs];
                let mut weight = BigInt::one();
                for (k, &a) in offs.iter().enumerate() {
                    weight *= binomial(t[k + 1] as u64, a as u64);
                }
                let v_parity: u32 = offs.iter().zip(&t[1..]).map(|(a, i)| i - a).sum();
                for a0 in 0..=t[0] {
                    let w = &weight * binomial(t[0] as u64, a0 as u64);
                    let term = w * counter.count(bu + a0 as u64);
                    if (v_parity + t[0] - a0).is_multiple_of(2) {
                        total += term;
                    } else {
                        total -= term;
                    }
                }
            }
            total
        })
        .collect();
    (values, bu)
}

fn mixed_values(
    ideals: &[MonomialIdeal],
    targets: &[Vec<u32>],
    config: &MixedConfig,
) -> Result<Vec<BigInt>, MonomialError> {
    let nvars = check_ring(ideals)?;
    let n = nvars - 1;
    for t in targets {
        validate_index(t, ideals.len() + 1, n)?;
    }
    let max_deg = ideals.iter().map(MonomialIdeal::max_degree).max().unwrap_or(1).max(1);
    let mut bu = config
        .base_u
        .unwrap_or(nvars as u64 * max_deg * (n as u64 + 1));
    let mut bv = config.base_v.unwrap_or(DEFAULT_BASE_V) as u32;
    let mut cache = PowerCache::new(ideals);
    let (mut prev, used) = extract(targets, bu, bv, &mut cache);
    bu = used;
    for _ in 0..config.max_doublings {
        let (next, used) = extract(targets, 2 * bu, 2 * bv, &mut cache);
        bu = used;
        bv *= 2;
        if next == prev && next.iter().all(|x| !x.is_negative()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(MonomialError::NonStable { base_u: bu, base_v: bv as u64 })
}

/// All mixed multiplicities `e_i(m | J_1..J_s)`.
pub fn mixed_multiplicities(
    ideals: &[MonomialIdeal],
) -> Result<MixedMultiplicityProfile, MonomialError> {
    mixed_multiplicities_with(ideals, &MixedConfig::default())
}

pub fn mixed_multiplicities_with(
    ideals: &[MonomialIdeal],
    config: &MixedConfig,
) -> Result<MixedMultiplicityProfile, MonomialError> {
    let nvars = check_ring(ideals)?;
    let n = nvars - 1;
    let targets = all_indices(ideals.len() + 1, n as u32);
    let values = mixed_values(ideals, &targets, config)?;
    Ok(MixedMultiplicityProfile {
        total_degree: n,
        values: targets.into_iter().zip(values).collect(),
    })
}

/// A single mixed multiplicity; cheaper than the full profile.
pub fn mixed_multiplicity(
    ideals: &[MonomialIdeal],
    index: &[u32],
    config: &MixedConfig,
) -> Result<BigInt, MonomialError> {
    Ok(mixed_values(ideals, &[index.to_vec()], config)?.remove(0))
}

/// `(e_0(m|J), ..., e_n(m|J))` where `e_i` is the coefficient indexed by
/// `(n - i, i)`.
pub fn multiplicity_sequence(
    ideal: &MonomialIdeal,
    config: &MixedConfig,
) -> Result<Vec<BigInt>, MonomialError> {
    let n = ideal.num_vars - 1;
    let targets: Vec<Vec<u32>> = (0..=n as u32).map(|i| vec![n as u32 - i, i]).collect();
    mixed_values(std::slice::from_ref(ideal), &targets, config)
}
