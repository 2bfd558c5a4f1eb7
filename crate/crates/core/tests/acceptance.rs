//! End-to-end acceptance checks. Runs without the libtest harness so that one
//! pass/fail line per criterion is always printed.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use logcave::graph::{canonical_form, ChromaticSolver, Graph};
use logcave::homclass::{check_witness, classify, construct_witness, HomologyClass, Verdict};
use logcave::matroid::Matroid;
use logcave::milnor::{
    csm_class, euler_characteristic, kouchnirenko_audit, mu_arrangement, mu_monomial,
    triple_recursion_check, Arrangement, MuProfile,
};
use logcave::monomial::{mixed_multiplicity, multiplicity_sequence, MixedConfig, MonomialIdeal};
use logcave::polytope::{mixed_volume, mixed_volume_pair, newton_polytope_delta_h, LatticePolytope};
use logcave::{IntPolynomial, Sequence};

type Outcome = Result<String, String>;

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn ideal(vars: usize, gens: &[Vec<u32>]) -> MonomialIdeal {
    MonomialIdeal::new(vars, gens.to_vec()).unwrap()
}

/// `(z0^l1, z1^l1, z0^(l1-l2) z2^l2, ..., z0^(l1-ln) zn^ln)`
fn shephard_ideal(lambda: &[u32]) -> MonomialIdeal {
    let n = lambda.len();
    let l1 = lambda[0];
    let mut gens = Vec::new();
    let mut g = vec![0; n + 1];
    g[0] = l1;
    gens.push(g);
    let mut g = vec![0; n + 1];
    g[1] = l1;
    gens.push(g);
    for i in 2..=n {
        let mut g = vec![0; n + 1];
        g[0] = l1 - lambda[i - 1];
        g[i] = lambda[i - 1];
        gens.push(g);
    }
    ideal(n + 1, &gens)
}

fn crit1() -> Outcome {
    let j1 = ideal(3, &[vec![1, 2, 0], vec![0, 3, 1], vec![1, 0, 1]]);
    let j2 = ideal(3, &[vec![1, 2, 0], vec![0, 3, 1], vec![1, 0, 2]]);
    let cfg = MixedConfig::default();
    let mut got = Vec::new();
    for (a, b, want) in [(&j1, &j1, 1), (&j1, &j2, 1), (&j2, &j2, 2)] {
        let e = mixed_multiplicity(&[a.clone(), b.clone()], &[0, 1, 1], &cfg).map_err(err)?;
        ensure(e == BigInt::from(want), || format!("expected {want}, got {e}"))?;
        got.push(e.to_string());
    }
    Ok(format!("e_(0,1,1) = {}", got.join(", ")))
}

fn torus_profiles() -> Result<Vec<MuProfile>, String> {
    (1..=4usize)
        .map(|n| mu_monomial(&vec![1; n + 1], &MixedConfig::default()).map_err(err))
        .collect()
}

fn crit2() -> Outcome {
    let one = BigRational::one();
    for (n, mu) in (1..=4usize).zip(torus_profiles()?) {
        let want: Vec<BigInt> = (0..=n).map(|i| binomial(n as u64, i as u64)).collect();
        ensure(mu.values == want, || format!("n={n}: mu {:?}", mu.values))?;
        let dh = newton_polytope_delta_h(&[(one.clone(), vec![1; n + 1])]).map_err(err)?;
        let audit = kouchnirenko_audit(&mu, &dh, Some(&want)).map_err(err)?;
        ensure(audit.equality_throughout(), || format!("n={n}: {audit:?}"))?;
    }
    Ok("binomial profiles, both bounds sharp for n=1..4".into())
}

fn descending(n: usize, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for tail in descending(n - 1, max) {
        let floor = tail.first().copied().unwrap_or(1);
        for head in floor..=max {
            let mut v = vec![head];
            v.extend(&tail);
            out.push(v);
        }
    }
    out
}

fn crit3() -> Outcome {
    let cfg = MixedConfig::default();
    let mut count = 0;
    for n in 1..=3usize {
        let simplex = LatticePolytope::standard_simplex(n);
        for lambda in descending(n, 4) {
            let li: Vec<i64> = lambda.iter().map(|&x| x as i64).collect();
            let shep = LatticePolytope::shephard(&li).map_err(err)?;
            let mono = multiplicity_sequence(&shephard_ideal(&lambda), &cfg).map_err(err)?;
            let mut prod = BigInt::one();
            for i in 0..=n {
                if i > 0 {
                    prod *= lambda[i - 1];
                }
                let mv = mixed_volume_pair(&simplex, &shep, i).map_err(err)?;
                ensure(mv == BigRational::from_integer(prod.clone()), || {
                    format!("lambda {lambda:?} i={i}: MV {mv} vs {prod}")
                })?;
                ensure(mono[i] == prod, || format!("lambda {lambda:?} i={i}: e_i {} vs {prod}", mono[i]))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} partitions agree on both routes"))
}

fn random_equigenerated(rng: &mut ChaCha8Rng, vars: usize) -> Vec<Vec<u32>> {
    let d = rng.gen_range(1..=3u32);
    let count = rng.gen_range(2..=vars + 2);
    let mut gens = Vec::new();
    for _ in 0..count {
        let mut e = vec![0u32; vars];
        for _ in 0..d {
            e[rng.gen_range(0..vars)] += 1;
        }
        gens.push(e);
    }
    gens
}

fn crit4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cases: Vec<Vec<Vec<Vec<u32>>>> = (0..50)
        .map(|_| {
            let vars = rng.gen_range(2..=4);
            (0..vars - 1).map(|_| random_equigenerated(&mut rng, vars)).collect()
        })
        .collect();
    let results: Vec<Result<bool, String>> = cases
        .par_iter()
        .map(|gens| {
            let vars = gens[0][0].len();
            let ideals: Vec<MonomialIdeal> = gens.iter().map(|g| ideal(vars, g)).collect();
            let polys = gens
                .iter()
                .map(|g| LatticePolytope::dehomogenized(g).map_err(err))
                .collect::<Result<Vec<_>, _>>()?;
            let mv = mixed_volume(&polys).map_err(err)?;
            let mut index = vec![1u32; vars];
            index[0] = 0;
            let e = mixed_multiplicity(&ideals, &index, &MixedConfig::default()).map_err(err)?;
            ensure(mv == BigRational::from_integer(e.clone()), || {
                format!("{gens:?}: MV {mv} vs e {e}")
            })?;
            Ok(!e.is_zero())
        })
        .collect();
    let nonzero = results.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().filter(|&b| b).count();
    Ok(format!("50 tuples ({nonzero} nonzero), MV = e_(0,1,...,1)"))
}

/// Connected graphs on exactly `n` vertices up to isomorphism, by adding one
/// edge at a time and deduplicating canonical forms at each edge count.
fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut level = vec![Graph::empty(n)];
    let mut out = Vec::new();
    loop {
        for g in &level {
            if g.component_count() == 1 {
                out.push(g.clone());
            }
        }
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let have: HashSet<(usize, usize)> = g.edges().iter().copied().collect();
            for &p in &pairs {
                if have.contains(&p) {
                    continue;
                }
                let mut edges = g.edges().to_vec();
                edges.push(p);
                let h = Graph::new(n, edges).unwrap();
                if seen.insert(canonical_form(&h).expect("small graphs canonicalize")) {
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            return out;
        }
        level = next;
    }
}

fn crit5() -> Outcome {
    let mut per_size = Vec::new();
    let mut all = Vec::new();
    for n in 1..=7 {
        let gs = connected_graphs(n);
        per_size.push(gs.len());
        all.extend(gs);
    }
    ensure(per_size == [1, 1, 2, 6, 21, 112, 853], || format!("counts {per_size:?}"))?;
    let solver = ChromaticSolver::new();
    all.par_iter()
        .map(|g| {
            let p = solver.chromatic_polynomial(g).map_err(err)?;
            for q in 0..=7u64 {
                ensure(p.evaluate(q) == g.coloring_count_oracle(q), || {
                    format!("{:?} at q={q}", g.edges())
                })?;
            }
            let seq = p.coefficient_sequence().ok_or("zero polynomial")?;
            let abs = seq.abs();
            ensure(
                abs.is_log_concave() && abs.has_no_internal_zeros() && seq.is_sign_alternating(),
                || format!("{:?}: {p}", g.edges()),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(format!(
        "{} connected graphs ({} on 7 vertices) match the oracle at q=0..7",
        all.len(),
        per_size[6]
    ))
}

fn crit6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut loopless = 0;
    for t in 0..200 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=10);
        let m: Vec<Vec<BigRational>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        let den = rng.gen_range(1..=3i64);
                        let num = if rng.gen_bool(0.15) { 0 } else { rng.gen_range(-3..=3i64) };
                        BigRational::new(num.into(), den.into())
                    })
                    .collect()
            })
            .collect();
        let mat = Matroid::from_matrix(&m).map_err(err)?;
        let chi = mat.characteristic_polynomial().map_err(err)?;
        let oracle = mat.whitney_oracle().map_err(err)?;
        ensure(chi == oracle, || format!("case {t}: {chi} vs {oracle}"))?;
        if chi.is_zero() {
            ensure(mat.has_loop(), || format!("case {t}: zero polynomial without a loop"))?;
            continue;
        }
        loopless += 1;
        let seq = chi.coefficient_sequence().unwrap();
        let abs = seq.abs();
        ensure(
            seq.is_sign_alternating() && abs.is_log_concave() && abs.has_no_internal_zeros(),
            || format!("case {t}: {chi}"),
        )?;
    }
    Ok(format!("200 matrices ({loopless} loopless) agree with the rank-sum oracle"))
}

fn random_arrangement(rng: &mut ChaCha8Rng) -> Arrangement {
    loop {
        let vars = rng.gen_range(2..=4);
        let want = rng.gen_range(2..=8);
        let mut forms: Vec<Vec<i64>> = Vec::new();
        for _ in 0..want * 4 {
            if forms.len() == want {
                break;
            }
            let f: Vec<i64> = (0..vars).map(|_| rng.gen_range(-2..=2)).collect();
            if f.iter().all(|&x| x == 0) {
                continue;
            }
            let proportional = forms.iter().any(|g| {
                (0..vars).all(|i| (0..vars).all(|j| f[i] * g[j] == f[j] * g[i]))
            });
            if !proportional {
                forms.push(f);
            }
        }
        if forms.len() >= 2 {
            return Arrangement::from_int(&forms).unwrap();
        }
    }
}

fn arrangements() -> Vec<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..30).map(|_| random_arrangement(&mut rng)).collect()
}

fn crit7() -> Outcome {
    let q_minus_1 = IntPolynomial::linear_root(1);
    for (t, a) in arrangements().iter().enumerate() {
        let full = a.characteristic_polynomial().map_err(err)?;
        let decone = a.decone_polynomial().map_err(err)?;
        ensure(full == &q_minus_1 * &decone, || format!("arrangement {t}: {full} vs (q-1)({decone})"))?;
        let mu = mu_arrangement(a).map_err(err)?;
        ensure(mu.values[0].is_one(), || format!("arrangement {t}: mu0 = {}", mu.values[0]))?;
        let distinct = BigInt::from(a.len() - 1);
        ensure(mu.values[1] == distinct, || {
            format!("arrangement {t}: mu1 = {} with {} forms", mu.values[1], a.len())
        })?;
        for i in 0..a.len() {
            ensure(triple_recursion_check(a, i).map_err(err)?, || {
                format!("arrangement {t}: recursion fails at form {i}")
            })?;
        }
    }
    Ok("30 arrangements: decone, mu0, mu1 and recursion at every form".into())
}

fn crit8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut accepted = 0;
    while accepted < 100 {
        let len = rng.gen_range(2..=4usize);
        let e: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=6)).collect();
        if !Sequence::new(e.clone()).unwrap().is_log_concave() {
            continue;
        }
        let r = len - 1;
        let xi = HomologyClass::from_dense(r, r, r, e.iter().map(|&x| BigInt::from(x)).collect())
            .map_err(err)?;
        ensure(classify(&xi) == Verdict::RepresentableUpToMultiple, || format!("{e:?} not accepted"))?;
        let w = construct_witness(&xi).map_err(|x| format!("{e:?}: {x}"))?;
        let check = check_witness(&w, &MixedConfig::default()).map_err(err)?;
        ensure(check.holds, || format!("{e:?}: {check:?} vs {:?}", w.predicted_degrees))?;
        accepted += 1;
    }
    let mut rejected = 0;
    for len in 2..=4usize {
        let mut stack = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() < len {
                for x in 0..=6i64 {
                    let mut p: Vec<i64> = prefix.clone();
                    p.push(x);
                    stack.push(p);
                }
                continue;
            }
            let s = Sequence::new(prefix.clone()).unwrap();
            if s.has_no_internal_zeros() && s.is_log_concave() {
                continue;
            }
            let r = len - 1;
            let xi = HomologyClass::from_dense(r, r, r, s.values().to_vec()).map_err(err)?;
            ensure(classify(&xi) == Verdict::NotRepresentableUpToAnyMultiple, || {
                format!("{prefix:?} accepted")
            })?;
            rejected += 1;
        }
    }
    for n in 1..=3usize {
        for m in 1..=3usize {
            for c in 1..=6i64 {
                // c [P^n x P^0] in A_n(P^n x P^m)
                let mut coeffs = std::collections::BTreeMap::new();
                coeffs.insert(0, BigInt::from(c));
                let xi = HomologyClass::new(n, m, n, coeffs).map_err(err)?;
                let want = if c == 1 { Verdict::RepresentableExactly } else { Verdict::NotRepresentable };
                ensure(classify(&xi) == want, || format!("{c}[P^{n} x P^0] in P^{n} x P^{m}"))?;
            }
        }
    }
    Ok(format!("100 round trips on both routes, {rejected} sequences rejected, exceptional multiples rejected"))
}

fn crit9() -> Outcome {
    let check = |mu: &MuProfile, label: &str| -> Result<BigInt, String> {
        let csm = csm_class(mu);
        let alt: BigInt = mu
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| if i % 2 == 0 { v.clone() } else { -v })
            .sum();
        let top = csm.last().cloned().unwrap_or_default();
        ensure(top == alt && euler_characteristic(mu) == alt, || {
            format!("{label}: top csm {top}, alternating sum {alt}")
        })?;
        Ok(alt)
    };
    let mut count = 0;
    for (n, mu) in (1..=4).zip(torus_profiles()?) {
        let chi = check(&mu, &format!("torus n={n}"))?;
        ensure(chi.is_zero(), || format!("torus n={n}: euler {chi}"))?;
        count += 1;
    }
    for (t, a) in arrangements().iter().enumerate() {
        let mu = mu_arrangement(a).map_err(err)?;
        let chi = check(&mu, &format!("arrangement {t}"))?;
        let at_one = a.decone_polynomial().map_err(err)?.evaluate(1);
        ensure(chi == at_one, || format!("arrangement {t}: {chi} vs decone(1) {at_one}"))?;
        count += 1;
    }
    Ok(format!("{count} profiles coherent"))
}

fn random_polytope(rng: &mut ChaCha8Rng, dim: usize) -> LatticePolytope {
    let count = rng.gen_range(1..=dim + 4);
    let pts: Vec<Vec<i64>> = (0..count)
        .map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect())
        .collect();
    LatticePolytope::from_points(dim, pts).unwrap()
}

fn crit10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut strict = 0;
    for t in 0..100 {
        let dim = *[2usize, 3].choose(&mut rng).unwrap();
        let a = random_polytope(&mut rng, dim);
        let b = random_polytope(&mut rng, dim);
        let rest: Vec<LatticePolytope> = (2..dim).map(|_| random_polytope(&mut rng, dim)).collect();
        let mv = |x: &LatticePolytope, y: &LatticePolytope| {
            let mut args = vec![x.clone(), y.clone()];
            args.extend(rest.iter().cloned());
            mixed_volume(&args)
        };
        let aa = mv(&a, &a).map_err(err)?;
        let bb = mv(&b, &b).map_err(err)?;
        let ab = mv(&a, &b).map_err(err)?;
        ensure(!aa.is_negative() && !bb.is_negative() && !ab.is_negative(), || format!("pair {t}: negative"))?;
        ensure(&aa * &bb <= &ab * &ab, || format!("pair {t}: {aa} * {bb} > {ab}^2"))?;
        if &aa * &bb < &ab * &ab {
            strict += 1;
        }
    }
    Ok(format!("100 pairs, {strict} strict"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 counterexample mixed multiplicities", crit1, 10),
        ("2 torus profile and sharp bounds", crit2, 30),
        ("3 Shephard dual route", crit3, 60),
        ("4 mixed volume equals mixed multiplicity", crit4, 300),
        ("5 chromatic corpus", crit5, 300),
        ("6 matroid oracle equivalence", crit6, 120),
        ("7 decone and triple recursion", crit7, 120),
        ("8 representability round trip", crit8, 300),
        ("9 csm and Euler coherence", crit9, 5),
        ("10 Alexandrov-Fenchel", crit10, 120),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if elapsed <= Duration::from_secs(limit) {
                Ok(d)
            } else {
                Err(format!("{d}; over the {limit} s budget"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({:.2} s): {detail}", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2} s): {why}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
