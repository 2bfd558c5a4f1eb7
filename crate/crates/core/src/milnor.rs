//! Milnor-number profiles `mu^i(h)` of homogeneous polynomials.
//!
//! Three routes are offered and the caller picks one explicitly:
//! hyperplane arrangements (through the matroid of the linear forms),
//! monomials (through mixed multiplicities of the Jacobian ideal), and
//! hypersurfaces with isolated singular points (from local Milnor numbers).

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::matroid::{Matroid, MatroidError};
use crate::monomial::{
    jacobian_ideal_of_monomial, multiplicity_sequence, MixedConfig, MonomialError,
};
use crate::poly::IntPolynomial;
use crate::polytope::{mixed_volume_pair, LatticePolytope, PolytopeError};
use crate::seq::{binomial, Sequence};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MilnorError {
    #[error("an arrangement needs at least one form")]
    NoForms,
    #[error("form {row} has {found} coefficients, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("form {0} is zero")]
    ZeroForm(usize),
    #[error("forms {0} and {1} are proportional")]
    Proportional(usize, usize),
    #[error("characteristic polynomial is not divisible by q - 1")]
    DivisionFailure,
    #[error("restriction to the distinguished hyperplane leaves no forms")]
    RestrictionDegenerate,
    #[error("form index {0} out of range")]
    FormOutOfRange(usize),
    #[error("degree and dimension must both be at least 1")]
    InvalidDegree,
    #[error("local Milnor numbers must be positive")]
    NonPositiveMilnorNumber,
    #[error("local Milnor numbers sum to {sum}, more than (d-1)^n = {bound}")]
    SumTooLarge { sum: BigInt, bound: BigInt },
    #[error("profile has {found} entries, expected {expected}")]
    ProfileLength { expected: usize, found: usize },
    #[error("Newton polytope lives in R^{found}, expected R^{expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Arrangement,
    Monomial,
    GenericIsolated,
}

/// `(mu^0, ..., mu^n)` for a hypersurface in `P^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuProfile {
    pub values: Vec<BigInt>,
    pub ambient_dim: usize,
    pub route: Route,
}

impl MuProfile {
    pub fn new(values: Vec<BigInt>, route: Route) -> Result<Self, MilnorError> {
        if values.is_empty() {
            return Err(MilnorError::ProfileLength { expected: 1, found: 0 });
        }
        Ok(Self {
            ambient_dim: values.len() - 1,
            values,
            route,
        })
    }

    pub fn sequence(&self) -> Sequence {
        Sequence::new(self.values.clone()).expect("nonempty")
    }
}

/// A central arrangement of pairwise non-proportional linear forms in
/// `n + 1` variables, stored as primitive integer vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    forms: Vec<Vec<BigInt>>,
}

impl Arrangement {
    pub fn new(forms: &[Vec<BigRational>]) -> Result<Self, MilnorError> {
        let width = forms.first().ok_or(MilnorError::NoForms)?.len();
        let mut prim = Vec::with_capacity(forms.len());
        for (row, f) in forms.iter().enumerate() {
            if f.len() != width {
                return Err(MilnorError::Ragged { row, expected: width, found: f.len() });
            }
            if f.iter().all(Zero::is_zero) {
                return Err(MilnorError::ZeroForm(row));
            }
            let p = linalg::primitive(f);
            if let Some(j) = prim.iter().position(|q| *q == p) {
                return Err(MilnorError::Proportional(j, row));
            }
            prim.push(p);
        }
        Ok(Self { forms: prim })
    }

    pub fn from_int(forms: &[Vec<i64>]) -> Result<Self, MilnorError> {
        let rat: Vec<Vec<BigRational>> = forms
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::new(&rat)
    }

    pub fn forms(&self) -> &[Vec<BigInt>] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `n`, where the forms live in `n + 1` variables.
    pub fn projective_dim(&self) -> usize {
        self.forms[0].len() - 1
    }

    /// Matroid on the forms (columns of the coefficient matrix).
    pub fn matroid(&self) -> Result<Matroid, MilnorError> {
        let width = self.forms[0].len();
        let rows: Vec<Vec<BigRational>> = (0..width)
            .map(|k| {
                self.forms
                    .iter()
                    .map(|f| BigRational::from_integer(f[k].clone()))
                    .collect()
            })
            .collect();
        Ok(Matroid::from_matrix(&rows)?)
    }

    /// Characteristic polynomial of the central arrangement in `C^(n+1)`.
    pub fn characteristic_polynomial(&self) -> Result<IntPolynomial, MilnorError> {
        let m = self.matroid()?;
        let chi = m.characteristic_polynomial()?;
        let extra = self.forms[0].len() - m.rank();
        Ok(&IntPolynomial::monomial(extra) * &chi)
    }

    /// Characteristic polynomial of the decone: the central one divided by
    /// `q - 1`.
    pub fn decone_polynomial(&self) -> Result<IntPolynomial, MilnorError> {
        self.characteristic_polynomial()?
            .divide_by_q_minus_1()
            .map_err(|_| MilnorError::DivisionFailure)
    }

    pub fn delete(&self, index: usize) -> Result<Arrangement, MilnorError> {
        if index >= self.forms.len() {
            return Err(MilnorError::FormOutOfRange(index));
        }
        let mut forms = self.forms.clone();
        forms.remove(index);
        if forms.is_empty() {
            return Err(MilnorError::NoForms);
        }
        Ok(Arrangement { forms })
    }

    /// The other forms restricted to the hyperplane of form `index`, written
    /// in the coordinates left after eliminating its first nonzero variable,
    /// with proportional duplicates merged.
    pub fn restrict(&self, index: usize) -> Result<Arrangement, MilnorError> {
        let h = self.forms.get(index).ok_or(MilnorError::FormOutOfRange(index))?;
        let p = h.iter().position(|x| !x.is_zero()).expect("nonzero form");
        let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
        let mut forms = Vec::new();
        for (j, f) in self.forms.iter().enumerate() {
            if j == index {
                continue;
            }
            let g: Vec<BigRational> = (0..f.len())
                .filter(|&k| k != p)
                .map(|k| BigRational::from_integer(&h[p] * &f[k] - &f[p] * &h[k]))
                .collect();
            if g.is_empty() || g.iter().all(Zero::is_zero) {
                continue;
            }
            let g = linalg::primitive(&g);
            if seen.insert(g.clone()) {
                forms.push(g);
            }
        }
        if forms.is_empty() {
            return Err(MilnorError::RestrictionDegenerate);
        }
        Ok(Arrangement { forms })
    }

    /// Terms of the product of the forms, as `(coefficient, exponents)`.
    pub fn defining_polynomial(&self) -> Vec<(BigRational, Vec<u32>)> {
        let width = self.forms[0].len();
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::from([(vec![0; width], BigInt::one())]);
        for f in &self.forms {
            let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
            for (e, c) in &acc {
                for (k, a) in f.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2[k] += 1;
                    *next.entry(e2).or_insert_with(BigInt::zero) += c * a;
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
        acc.into_iter()
            .map(|(e, c)| (BigRational::from_integer(c), e))
            .collect()
    }
}

/// `mu^i` as the absolute coefficients of the decone characteristic
/// polynomial, padded with zeros to length `n + 1`.
pub fn mu_arrangement(a: &Arrangement) -> Result<MuProfile, MilnorError> {
    let m = a.matroid()?;
    let reduced = m
        .characteristic_polynomial()?
        .divide_by_q_minus_1()
        .map_err(|_| MilnorError::DivisionFailure)?;
    let n = a.projective_dim();
    let mut values: Vec<BigInt> = reduced.descending().into_iter().map(|c| c.abs()).collect();
    values.resize(n + 1, BigInt::zero());
    MuProfile::new(values, Route::Arrangement)
}

/// `mu^i(h) = e_i(m | J_h)` for a monomial `h` given by its exponents.
pub fn mu_monomial(h: &[u32], config: &MixedConfig) -> Result<MuProfile, MilnorError> {
    let j = jacobian_ideal_of_monomial(h)?;
    MuProfile::new(multiplicity_sequence(&j, config)?, Route::Monomial)
}

/// Degree `d` hypersurface in `P^n` with isolated singular points of the
/// given local Milnor numbers.
pub fn mu_generic_isolated(
    d: u64,
    n: usize,
    local_milnor_numbers: &[BigInt],
) -> Result<MuProfile, MilnorError> {
    if d < 1 || n < 1 {
        return Err(MilnorError::InvalidDegree);
    }
    if local_milnor_numbers.iter().any(|m| !m.is_positive()) {
        return Err(MilnorError::NonPositiveMilnorNumber);
    }
    let base = BigInt::from(d - 1);
    let mut values: Vec<BigInt> = (0..n).map(|i| Pow::pow(&base, i as u32)).collect();
    let bound = Pow::pow(&base, n as u32);
    let sum: BigInt = local_milnor_numbers.iter().sum();
    if sum > bound {
        return Err(MilnorError::SumTooLarge { sum, bound });
    }
    values.push(bound - sum);
    MuProfile::new(values, Route::GenericIsolated)
}

/// Coefficients of `sum_i (-1)^i mu^i H^i (1+H)^(n-i)` truncated at `H^n`.
pub fn csm_class(mu: &MuProfile) -> Vec<BigInt> {
    let n = mu.ambient_dim;
    (0..=n)
        .map(|k| {
            let mut c = BigInt::zero();
            for i in 0..=k {
                let term = &mu.values[i] * binomial((n - i) as u64, (k - i) as u64);
                if i % 2 == 0 {
                    c += term;
                } else {
                    c -= term;
                }
            }
            c
        })
        .collect()
}

/// `sum_i (-1)^i mu^i`.
pub fn euler_characteristic(mu: &MuProfile) -> BigInt {
    mu.values
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { v.clone() } else { -v })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRow {
    pub i: usize,
    pub lower: Option<BigInt>,
    pub mu: BigInt,
    pub upper: BigInt,
    pub lower_holds: Option<bool>,
    pub upper_holds: bool,
}

impl BoundRow {
    pub fn lower_equal(&self) -> Option<bool> {
        self.lower.as_ref().map(|b| *b == self.mu)
    }

    pub fn upper_equal(&self) -> bool {
        self.upper == self.mu
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundAudit {
    pub rows: Vec<BoundRow>,
}

impl BoundAudit {
    pub fn all_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.upper_holds && r.lower_holds != Some(false))
    }

    pub fn equality_throughout(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.upper_equal() && r.lower_equal() == Some(true))
    }
}

/// Checks `b_i <= mu^i <= MV(Delta, ..., Delta, Delta_h, ..., Delta_h)` with
/// `Delta_h` repeated `i` times. Betti numbers default to `mu` on the
/// arrangement route and are otherwise only checked when supplied.
pub fn kouchnirenko_audit(
    mu: &MuProfile,
    delta_h: &LatticePolytope,
    betti: Option<&[BigInt]>,
) -> Result<BoundAudit, MilnorError> {
    let n = mu.ambient_dim;
    if delta_h.dim() != n {
        return Err(MilnorError::DimensionMismatch { expected: n, found: delta_h.dim() });
    }
    let betti: Option<Vec<BigInt>> = match (betti, mu.route) {
        (Some(b), _) => {
            if b.len() != n + 1 {
                return Err(MilnorError::ProfileLength { expected: n + 1, found: b.len() });
            }
            Some(b.to_vec())
        }
        (None, Route::Arrangement) => Some(mu.values.clone()),
        (None, _) => None,
    };
    let simplex = LatticePolytope::standard_simplex(n);
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let upper = if n == 0 {
            BigInt::one()
        } else {
            mixed_volume_pair(&simplex, delta_h, i)?.to_integer()
        };
        let m = mu.values[i].clone();
        let lower = betti.as_ref().map(|b| b[i].clone());
        rows.push(BoundRow {
            i,
            lower_holds: lower.as_ref().map(|b| *b <= m),
            upper_holds: m <= upper,
            lower,
            mu: m,
            upper,
        });
    }
    Ok(BoundAudit { rows })
}

/// `mu^i(h) = mu^i(h') + mu^(i-1)(h'')` for `0 < i <= n`, where `h'` drops
/// the distinguished form and `h''` restricts to it.
pub fn triple_recursion_check(a: &Arrangement, index: usize) -> Result<bool, MilnorError> {
    if a.len() < 2 {
        return Err(MilnorError::NoForms);
    }
    let full = mu_arrangement(a)?;
    let deleted = mu_arrangement(&a.delete(index)?)?;
    let restricted = mu_arrangement(&a.restrict(index)?)?;
    let n = a.projective_dim();
    Ok((1..=n).all(|i| full.values[i] == &deleted.values[i] + &restricted.values[i - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn boolean(n: usize) -> Arrangement {
        let forms: Vec<Vec<i64>> = (0..=n)
            .map(|i| (0..=n).map(|j| (i == j) as i64).collect())
            .collect();
        Arrangement::from_int(&forms).unwrap()
    }

    fn random_arrangement(rng: &mut ChaCha8Rng) -> Arrangement {
        let width = rng.gen_range(2..=4);
        loop {
            let k = rng.gen_range(2..=8);
            let forms: Vec<Vec<i64>> = (0..k)
                .map(|_| (0..width).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            if let Ok(a) = Arrangement::from_int(&forms) {
                return a;
            }
        }
    }

    #[test]
    fn arrangement_examples() {
        assert_eq!(mu_arrangement(&boolean(2)).unwrap().values, ints(&[1, 2, 1]));
        for d in 2..=5 {
            let forms: Vec<Vec<i64>> = (0..d).map(|k| vec![1, k]).collect();
            let a = Arrangement::from_int(&forms).unwrap();
            assert_eq!(mu_arrangement(&a).unwrap().values, ints(&[1, d - 1]));
        }
        // three concurrent lines z0-z1, z1-z2, z0-z2
        let braid = Arrangement::from_int(&[vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]).unwrap();
        assert_eq!(mu_arrangement(&braid).unwrap().values, ints(&[1, 2, 0]));
    }

    #[test]
    fn arrangement_validation() {
        assert_eq!(
            Arrangement::from_int(&[vec![1, 2], vec![-2, -4]]),
            Err(MilnorError::Proportional(0, 1))
        );
        assert_eq!(Arrangement::from_int(&[vec![0, 0]]), Err(MilnorError::ZeroForm(0)));
    }

    #[test]
    fn monomial_examples() {
        let cfg = MixedConfig::default();
        for n in 1..=3usize {
            let mu = mu_monomial(&vec![1; n + 1], &cfg).unwrap();
            let expected: Vec<BigInt> = (0..=n).map(|i| binomial(n as u64, i as u64)).collect();
            assert_eq!(mu.values, expected);
        }
        assert_eq!(mu_monomial(&[3, 0, 0], &cfg).unwrap().values, ints(&[1, 0, 0]));
        assert_eq!(mu_monomial(&[1, 1, 0], &cfg).unwrap().values, ints(&[1, 1, 0]));
        assert!(matches!(
            mu_monomial(&[0, 0], &cfg),
            Err(MilnorError::Monomial(MonomialError::ConstantMonomial))
        ));
    }

    #[test]
    fn generic_isolated_examples() {
        assert_eq!(mu_generic_isolated(3, 2, &[]).unwrap().values, ints(&[1, 2, 4]));
        assert_eq!(mu_generic_isolated(3, 2, &ints(&[3])).unwrap().values, ints(&[1, 2, 1]));
        assert_eq!(mu_generic_isolated(2, 2, &ints(&[1])).unwrap().values, ints(&[1, 1, 0]));
        assert!(matches!(
            mu_generic_isolated(2, 2, &ints(&[2])),
            Err(MilnorError::SumTooLarge { .. })
        ));
    }

    #[test]
    fn csm_and_euler() {
        let p = |v: &[i64]| MuProfile::new(ints(v), Route::Monomial).unwrap();
        assert_eq!(csm_class(&p(&[1, 2, 1])), ints(&[1, 0, 0]));
        assert_eq!(csm_class(&p(&[1, 0, 0, 0])), ints(&[1, 3, 3, 1]));
        assert_eq!(csm_class(&p(&[1, 1, 0])), ints(&[1, 1, 0]));
        assert_eq!(euler_characteristic(&p(&[1, 2, 1])), BigInt::zero());
        assert_eq!(euler_characteristic(&p(&[1, 4])), BigInt::from(-3));
        assert_eq!(euler_characteristic(&p(&[1, 0, 0])), BigInt::one());
    }

    #[test]
    fn euler_matches_top_csm_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..100 {
            let n = rng.gen_range(0..=6);
            let v: Vec<i64> = (0..=n).map(|_| rng.gen_range(0..50)).collect();
            let mu = MuProfile::new(ints(&v), Route::Monomial).unwrap();
            assert_eq!(csm_class(&mu)[n], euler_characteristic(&mu));
        }
    }

    #[test]
    fn torus_bounds_are_equalities() {
        let one = BigRational::one();
        for n in 1..=3usize {
            let h = vec![(one.clone(), vec![1u32; n + 1])];
            let dh = crate::polytope::newton_polytope_delta_h(&h).unwrap();
            let mu = mu_monomial(&vec![1; n + 1], &MixedConfig::default()).unwrap();
            let betti: Vec<BigInt> = (0..=n).map(|i| binomial(n as u64, i as u64)).collect();
            let audit = kouchnirenko_audit(&mu, &dh, Some(&betti)).unwrap();
            assert!(audit.equality_throughout(), "{audit:?}");
        }
    }

    #[test]
    fn cuspidal_cubic_bounds() {
        let one = BigRational::one();
        let h = vec![(one.clone(), vec![1, 2, 0]), (-one, vec![0, 1, 2])];
        let dh = crate::polytope::newton_polytope_delta_h(&h).unwrap();
        let mu = mu_generic_isolated(3, 2, &ints(&[3])).unwrap();
        let audit = kouchnirenko_audit(&mu, &dh, Some(&ints(&[1, 1, 0]))).unwrap();
        let row = &audit.rows[2];
        assert_eq!((row.lower.clone().unwrap(), row.mu.clone(), row.upper.clone()), (0.into(), 1.into(), 2.into()));
        assert!(audit.all_hold());
    }

    #[test]
    fn triple_recursion_examples() {
        assert!(triple_recursion_check(&boolean(2), 2).unwrap());
        let two = Arrangement::from_int(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(triple_recursion_check(&two, 0).unwrap());
        let generic = Arrangement::from_int(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        for i in 0..4 {
            assert!(triple_recursion_check(&generic, i).unwrap());
        }
        assert_eq!(mu_arrangement(&generic).unwrap().values, ints(&[1, 3, 3]));
    }

    #[test]
    fn random_arrangements() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..30 {
            let a = random_arrangement(&mut rng);
            let mu = mu_arrangement(&a).unwrap();
            assert_eq!(mu.values[0], BigInt::one());
            assert_eq!(mu.values[1], BigInt::from(a.len() as i64 - 1));
            let s = mu.sequence();
            assert!(s.is_log_concave() && s.has_no_internal_zeros());
            let central = a.characteristic_polynomial().unwrap();
            let decone = a.decone_polynomial().unwrap();
            assert_eq!(central, &IntPolynomial::linear_root(1) * &decone);
            assert_eq!(decone.evaluate(1), euler_characteristic(&mu));
            for i in 0..a.len() {
                assert!(triple_recursion_check(&a, i).unwrap(), "{a:?} {i}");
            }
        }
    }

    #[test]
    fn route_consistency() {
        let cfg = MixedConfig::default();
        for n in 1..=3 {
            assert_eq!(
                mu_monomial(&vec![1; n + 1], &cfg).unwrap().values,
                mu_arrangement(&boolean(n)).unwrap().values
            );
        }
    }

    #[test]
    fn defining_polynomial_of_boolean() {
        let p = boolean(2).defining_polynomial();
        assert_eq!(p, vec![(BigRational::one(), vec![1, 1, 1])]);
    }

    #[test]
    fn monomial_upper_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let cfg = MixedConfig::default();
        for _ in 0..20 {
            let width = rng.gen_range(2..=4);
            let h: Vec<u32> = (0..width).map(|_| rng.gen_range(0..=3)).collect();
            if h.iter().all(|&x| x == 0) {
                continue;
            }
            let mu = mu_monomial(&h, &cfg).unwrap();
            let dh = crate::polytope::newton_polytope_delta_h(&[(BigRational::one(), h.clone())]).unwrap();
            let audit = kouchnirenko_audit(&mu, &dh, None).unwrap();
            assert!(audit.all_hold(), "{h:?} {audit:?}");
        }
    }
}
