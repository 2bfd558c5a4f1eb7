//! Fraction-free integer elimination shared by the matroid and polytope code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Bareiss elimination in place. Returns the rank and the pivot columns.
fn bareiss(m: &mut [Vec<BigInt>]) -> (usize, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for cc in c + 1..cols {
                let v = (&m[rank][c] * &m[r][cc] - &m[r][c] * &m[rank][cc]) / &prev;
                m[r][cc] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        pivots.push(c);
        rank += 1;
    }
    (rank, pivots)
}

pub(crate) fn rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    bareiss(&mut rows).0
}

/// Indices of pivot columns in row-echelon form; their count is the rank.
pub(crate) fn pivot_columns(mut rows: Vec<Vec<BigInt>>) -> Vec<usize> {
    bareiss(&mut rows).1
}

/// Determinant of a square integer matrix, trying `i128` first.
pub(crate) fn det(rows: &[Vec<i64>]) -> BigInt {
    if let Some(d) = det_i128(rows) {
        return BigInt::from(d);
    }
    let mut big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    det_big(&mut big)
}

fn det_big(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                m[r][c] = (&m[k][k] * &m[r][c] - &m[r][k] * &m[k][c]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn det_i128(rows: &[Vec<i64>]) -> Option<i128> {
    let n = rows.len();
    if n == 0 {
        return Some(1);
    }
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| m[r][k] != 0) else {
            return Some(0);
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let a = m[k][k].checked_mul(m[r][c])?;
                let b = m[r][k].checked_mul(m[k][c])?;
                m[r][c] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    sign.checked_mul(m[n - 1][n - 1])
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive. The zero vector maps to itself.
pub(crate) fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let lead_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if lead_negative { -g } else { g };
    ints.into_iter().map(|x| x / &g).collect()
}
