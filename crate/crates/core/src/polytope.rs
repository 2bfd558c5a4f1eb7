//! Exact lattice polytopes: hulls, Minkowski sums, volumes, mixed volumes.
//!
//! Hulls and volumes come from a placing triangulation: points are inserted
//! one at a time, each new point is coned over the boundary facets it sees
//! strictly, and the cones' determinants add up to `d!` times the volume.
//! All orientation tests are integer determinants.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a polytope needs at least one point")]
    Empty,
    #[error("expected {expected} polytopes, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("entries must be positive and weakly decreasing")]
    NotDescending,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("polynomial needs at least two variables")]
    TooFewVariables,
    #[error("coordinate {0} exceeds the supported magnitude")]
    CoordinateTooLarge(i128),
}

/// Largest coordinate magnitude a polytope may have; differences and
/// Minkowski sums of a few such points still fit in `i64`.
pub const MAX_COORDINATE: i64 = 1 << 52;

fn checked_coord(x: i128) -> Result<i64, PolytopeError> {
    if x.abs() > MAX_COORDINATE as i128 {
        Err(PolytopeError::CoordinateTooLarge(x))
    } else {
        Ok(x as i64)
    }
}

/// Convex hull of finitely many integer points, stored by its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

struct Hull {
    extreme: Vec<usize>,
    affine_dim: usize,
    /// `affine_dim!` times the relative volume in the projected coordinates.
    scaled_volume: BigInt,
}

fn det_of(rows: &[&[i64]], base: &[i64], x: &[i64]) -> BigInt {
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    m.push(x.iter().zip(base).map(|(a, b)| a - b).collect());
    linalg::det(&m)
}

/// Placing triangulation of full-dimensional points in `R^d`.
fn triangulate(pts: &[Vec<i64>], d: usize) -> Hull {
    // Greedy affinely independent start.
    let mut simplex = vec![0usize];
    for i in 1..pts.len() {
        if simplex.len() == d + 1 {
            break;
        }
        let rows: Vec<Vec<BigInt>> = simplex[1..]
            .iter()
            .chain(std::iter::once(&i))
            .map(|&j| pts[j].iter().zip(&pts[0]).map(|(a, b)| BigInt::from(a - b)).collect())
            .collect();
        if linalg::rank(rows) == simplex.len() {
            simplex.push(i);
        }
    }
    debug_assert_eq!(simplex.len(), d + 1);

    let orient = |facet: &[usize], x: &[i64]| -> BigInt {
        let rows: Vec<&[i64]> = facet[1..].iter().map(|&j| pts[j].as_slice()).collect();
        det_of(&rows, &pts[facet[0]], x)
    };
    let interior_sign = |facet: &[usize]| -> bool {
        let total: BigInt = simplex.iter().map(|&w| orient(facet, &pts[w])).sum();
        total.is_positive()
    };

    // facet vertices (sorted) -> interior lies on the positive side
    let mut facets: HashMap<Vec<usize>, bool> = HashMap::new();
    for skip in 0..=d {
        let f: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &v)| v)
            .collect();
        let s = interior_sign(&f);
        facets.insert(f, s);
    }
    let mut scaled_volume = {
        let rows: Vec<&[i64]> = simplex[1..d].iter().map(|&j| pts[j].as_slice()).collect();
        det_of(&rows, &pts[simplex[0]], &pts[simplex[d]]).abs()
    };

    let in_simplex: HashSet<usize> = simplex.iter().copied().collect();
    for i in 0..pts.len() {
        if in_simplex.contains(&i) {
            continue;
        }
        let x = &pts[i];
        let mut visible = Vec::new();
        for (f, &positive) in &facets {
            let o = orient(f, x);
            if (positive && o.is_negative()) || (!positive && o.is_positive()) {
                scaled_volume += o.abs();
                visible.push(f.clone());
            }
        }
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in &visible {
            for skip in 0..d {
                let r: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridges.entry(r).or_insert(0) += 1;
            }
            facets.remove(f);
        }
        for (r, count) in ridges {
            if count == 1 {
                let mut f = r;
                f.push(i);
                f.sort_unstable();
                let s = interior_sign(&f);
                facets.insert(f, s);
            }
        }
    }

    // A boundary vertex is extreme iff the hyperplanes of the facets through
    // it meet only in that point.
    let mut normals_at: BTreeMap<usize, HashSet<Vec<BigInt>>> = BTreeMap::new();
    for f in facets.keys() {
        let rows: Vec<Vec<i64>> = f[1..]
            .iter()
            .map(|&j| pts[j].iter().zip(&pts[f[0]]).map(|(a, b)| a - b).collect())
            .collect();
        let normal: Vec<BigRational> = (0..d)
            .map(|k| {
                let minor: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != k)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let m = linalg::det(&minor);
                BigRational::from_integer(if k % 2 == 0 { m } else { -m })
            })
            .collect();
        let normal = linalg::primitive(&normal);
        for &v in f {
            normals_at.entry(v).or_default().insert(normal.clone());
        }
    }
    let extreme = normals_at
        .into_iter()
        .filter(|(_, ns)| linalg::rank(ns.iter().cloned().collect()) == d)
        .map(|(v, _)| v)
        .collect();
    Hull {
        extreme,
        affine_dim: d,
        scaled_volume,
    }
}

/// Hull of arbitrary points: reduces to the affine span, then triangulates.
fn hull(points: &[Vec<i64>]) -> Hull {
    let base = &points[0];
    let diffs: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| BigInt::from(a - b)).collect())
        .collect();
    let pivots = linalg::pivot_columns(diffs);
    let d = pivots.len();
    if d == 0 {
        return Hull {
            extreme: vec![0],
            affine_dim: 0,
            scaled_volume: BigInt::zero(),
        };
    }
    // Projection to the pivot coordinates is injective on the affine span.
    let projected: Vec<Vec<i64>> = points
        .iter()
        .map(|p| pivots.iter().map(|&c| p[c]).collect())
        .collect();
    triangulate(&projected, d)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

impl LatticePolytope {
    /// Convex hull of `points`, keeping only extreme points.
    pub fn from_points(dim: usize, points: Vec<Vec<i64>>) -> Result<Self, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::Empty);
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(PolytopeError::DimensionMismatch { expected: dim, found: p.len() });
        }
        for &x in points.iter().flatten() {
            checked_coord(x as i128)?;
        }
        let mut pts = points;
        pts.sort_unstable();
        pts.dedup();
        let h = hull(&pts);
        let mut vertices: Vec<Vec<i64>> = h.extreme.into_iter().map(|i| pts[i].clone()).collect();
        vertices.sort_unstable();
        Ok(Self { dim, vertices })
    }

    /// `conv{0, e_1, ..., e_n}`.
    pub fn standard_simplex(dim: usize) -> Self {
        let mut pts = vec![vec![0; dim]];
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 1;
            pts.push(e);
        }
        Self::from_points(dim, pts).expect("nonempty")
    }

    pub fn point(coords: Vec<i64>) -> Self {
        Self {
            dim: coords.len(),
            vertices: vec![coords],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Dimension of the affine span.
    pub fn affine_dim(&self) -> usize {
        hull(&self.vertices).affine_dim
    }

    pub fn volume(&self) -> BigRational {
        let h = hull(&self.vertices);
        if h.affine_dim < self.dim {
            return BigRational::zero();
        }
        BigRational::new(h.scaled_volume, factorial(self.dim))
    }

    /// `n!` times the volume, an integer for lattice polytopes.
    pub fn normalized_volume(&self) -> BigInt {
        let h = hull(&self.vertices);
        if h.affine_dim < self.dim {
            BigInt::zero()
        } else {
            h.scaled_volume
        }
    }

    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<Self, PolytopeError> {
        if self.dim != other.dim {
            return Err(PolytopeError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::from_points(self.dim, pts)
    }

    /// Dilation by an integer factor.
    pub fn scale(&self, k: i64) -> Result<Self, PolytopeError> {
        let mut vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|&x| checked_coord(x as i128 * k as i128)).collect())
            .collect::<Result<Vec<Vec<i64>>, _>>()?;
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Self { dim: self.dim, vertices })
    }

    pub fn translate(&self, t: &[i64]) -> Result<Self, PolytopeError> {
        if t.len() != self.dim {
            return Err(PolytopeError::DimensionMismatch { expected: self.dim, found: t.len() });
        }
        let mut vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(&x, &y)| checked_coord(x as i128 + y as i128)).collect())
            .collect::<Result<Vec<Vec<i64>>, _>>()?;
        vertices.sort_unstable();
        Ok(Self { dim: self.dim, vertices })
    }

    pub fn negate(&self) -> Self {
        let mut vertices: Vec<Vec<i64>> =
            self.vertices.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        vertices.sort_unstable();
        Self { dim: self.dim, vertices }
    }

    /// `conv{0, l_1 e_1, ..., l_n e_n}` for `l_1 >= ... >= l_n >= 1`.
    pub fn shephard(lambda: &[i64]) -> Result<Self, PolytopeError> {
        if lambda.is_empty() {
            return Err(PolytopeError::Empty);
        }
        if lambda.iter().any(|&l| l < 1) || lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(PolytopeError::NotDescending);
        }
        let n = lambda.len();
        let mut pts = vec![vec![0; n]];
        for (i, &l) in lambda.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = l;
            pts.push(e);
        }
        Self::from_points(n, pts)
    }

    /// Hull of the exponent vectors with the first coordinate dropped.
    pub fn dehomogenized(exponents: &[Vec<u32>]) -> Result<Self, PolytopeError> {
        let first = exponents.first().ok_or(PolytopeError::Empty)?;
        if first.is_empty() {
            return Err(PolytopeError::TooFewVariables);
        }
        let n = first.len() - 1;
        let pts = exponents
            .iter()
            .map(|e| {
                if e.len() != n + 1 {
                    return Err(PolytopeError::DimensionMismatch { expected: n + 1, found: e.len() });
                }
                Ok(e[1..].iter().map(|&x| x as i64).collect())
            })
            .collect::<Result<Vec<Vec<i64>>, _>>()?;
        Self::from_points(n, pts)
    }
}

/// `MV(P_1, ..., P_n) = sum over nonempty S of (-1)^(n-|S|) vol(sum_S P_i)`,
/// normalised so the standard simplex repeated `n` times gives 1.
pub fn mixed_volume(polytopes: &[LatticePolytope]) -> Result<BigRational, PolytopeError> {
    let n = polytopes.first().map_or(0, |p| p.dim);
    if polytopes.len() != n || n == 0 {
        return Err(PolytopeError::WrongCount { expected: n.max(1), found: polytopes.len() });
    }
    if let Some(p) = polytopes.iter().find(|p| p.dim != n) {
        return Err(PolytopeError::DimensionMismatch { expected: n, found: p.dim });
    }
    let mut sums: Vec<Option<LatticePolytope>> = vec![None; 1 << n];
    let mut total = BigInt::zero();
    for mask in 1usize..(1 << n) {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let sum = if rest == 0 {
            polytopes[top].clone()
        } else {
            sums[rest].as_ref().unwrap().minkowski_sum(&polytopes[top])?
        };
        let v = sum.normalized_volume();
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total += v;
        } else {
            total -= v;
        }
        sums[mask] = Some(sum);
    }
    Ok(BigRational::new(total, factorial(n)))
}

/// `MV(P, ..., P, Q, ..., Q)` with `P` repeated `n - i` times.
pub fn mixed_volume_pair(
    p: &LatticePolytope,
    q: &LatticePolytope,
    i: usize,
) -> Result<BigRational, PolytopeError> {
    let n = p.dim;
    let mut list = vec![p.clone(); n - i.min(n)];
    list.extend(std::iter::repeat_n(q.clone(), i.min(n)));
    mixed_volume(&list)
}

/// `Delta_h`: hull in `R^n` of the dehomogenized exponents of monomials in
/// the partial derivatives of `h`. Like terms are combined first; with
/// combined terms no cancellation can occur during differentiation, so the
/// result depends only on the support.
pub fn newton_polytope_delta_h(
    terms: &[(BigRational, Vec<u32>)],
) -> Result<LatticePolytope, PolytopeError> {
    let mut combined: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    let width = terms.first().map(|t| t.1.len()).ok_or(PolytopeError::ZeroPolynomial)?;
    for (c, e) in terms {
        if e.len() != width {
            return Err(PolytopeError::DimensionMismatch { expected: width, found: e.len() });
        }
        *combined.entry(e.clone()).or_insert_with(BigRational::zero) += c;
    }
    combined.retain(|_, c| !c.is_zero());
    if combined.is_empty() {
        return Err(PolytopeError::ZeroPolynomial);
    }
    if width < 2 {
        return Err(PolytopeError::TooFewVariables);
    }
    let degrees: HashSet<u64> = combined.keys().map(|e| e.iter().map(|&x| x as u64).sum()).collect();
    if degrees.len() > 1 {
        return Err(PolytopeError::NotHomogeneous);
    }
    if degrees.contains(&0) {
        return Err(PolytopeError::ConstantPolynomial);
    }
    let mut exps = Vec::new();
    for m in combined.keys() {
        for j in 0..width {
            if m[j] > 0 {
                let mut e = m.clone();
                e[j] -= 1;
                exps.push(e);
            }
        }
    }
    LatticePolytope::dehomogenized(&exps)
}
