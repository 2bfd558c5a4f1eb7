//! Directory audits. Each file is dispatched on its extension, checked
//! independently, and reported as one JSON line; a summary line follows.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use walkdir::WalkDir;

use logcave::formats;
use logcave::graph::ChromaticSolver;
use logcave::matroid::Matroid;
use logcave::milnor::{kouchnirenko_audit, mu_arrangement, mu_monomial, MuProfile};
use logcave::monomial::{multiplicity_sequence, MixedConfig};
use logcave::polytope::{mixed_volume_pair, newton_polytope_delta_h, LatticePolytope};
use logcave::{IntPolynomial, Sequence};

use crate::{classify_value, emit, AuditMode};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Default)]
struct Report {
    invariants: Map<String, Value>,
    verdicts: Map<String, Value>,
}

impl Report {
    fn verdict(&mut self, name: &str, status: Status, reason: Option<String>) {
        let s = match status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        };
        let mut v = Map::new();
        v.insert("status".into(), json!(s));
        if let Some(r) = reason {
            v.insert("reason".into(), json!(r));
        }
        self.verdicts.insert(name.into(), Value::Object(v));
    }

    fn check(&mut self, name: &str, ok: bool) {
        let reason = (!ok).then(|| format!("{name} violated"));
        self.verdict(name, if ok { Status::Pass } else { Status::Fail }, reason);
    }

    fn skip(&mut self, name: &str, reason: &str) {
        self.verdict(name, Status::Skipped, Some(reason.into()));
    }

    fn failed(&self) -> bool {
        self.verdicts.values().any(|v| v["status"] == "fail")
    }

    fn all_skipped(&self) -> bool {
        self.verdicts.values().all(|v| v["status"] == "skipped")
    }
}

fn coefficient_checks(r: &mut Report, p: &IntPolynomial, signed: bool) {
    match p.coefficient_sequence() {
        Some(seq) => {
            let abs = seq.abs();
            r.check("log_concave", abs.is_log_concave());
            r.check("no_internal_zeros", abs.has_no_internal_zeros());
            if signed {
                r.check("sign_alternating", seq.is_sign_alternating());
            }
        }
        None => r.skip("log_concave", "zero polynomial"),
    }
}

fn sequence_checks(r: &mut Report, seq: &Sequence) {
    r.check("log_concave", seq.is_log_concave());
    r.check("no_internal_zeros", seq.has_no_internal_zeros());
}

fn bound_checks(r: &mut Report, mu: &MuProfile, delta_h: &LatticePolytope) -> Result<()> {
    r.invariants.insert("mu".into(), emit::ints(&mu.values));
    let audit = kouchnirenko_audit(mu, delta_h, None)?;
    r.invariants.insert("bounds".into(), emit::bound_audit(&audit));
    r.check("bounds", audit.all_hold());
    Ok(())
}

fn graph_file(r: &mut Report, text: &str, mode: &AuditMode) -> Result<()> {
    let g = formats::parse_graph(text)?;
    if mode.bound {
        r.skip("bounds", "no Milnor profile for a graph");
        return Ok(());
    }
    let p = ChromaticSolver::new().chromatic_polynomial(&g)?;
    r.invariants.insert("chromatic".into(), emit::polynomial(&p));
    coefficient_checks(r, &p, true);
    Ok(())
}

fn matrix_file(r: &mut Report, text: &str, mode: &AuditMode) -> Result<()> {
    let rows = formats::parse_matrix(text)?;
    if mode.logconcave {
        let p = Matroid::from_matrix(&rows)?.characteristic_polynomial()?;
        r.invariants.insert("characteristic".into(), emit::polynomial(&p));
        coefficient_checks(r, &p, true);
        return Ok(());
    }
    let a = formats::parse_arrangement(text)?;
    let mu = mu_arrangement(&a)?;
    if mu.ambient_dim == 0 {
        r.skip("bounds", "arrangement in P^0");
        return Ok(());
    }
    let dh = newton_polytope_delta_h(&a.defining_polynomial())?;
    bound_checks(r, &mu, &dh)
}

fn ideal_file(r: &mut Report, text: &str, mode: &AuditMode, cfg: &MixedConfig) -> Result<()> {
    let j = formats::parse_ideal(text)?;
    if mode.bound {
        r.skip("bounds", "no Milnor profile for an ideal");
    } else if !j.is_equigenerated() {
        r.skip("log_concave", "ideal is not equigenerated");
    } else {
        let seq = multiplicity_sequence(&j, cfg)?;
        r.invariants.insert("projective_degrees".into(), emit::ints(&seq));
        sequence_checks(r, &Sequence::new(seq)?);
    }
    Ok(())
}

fn polynomial_file(r: &mut Report, text: &str, mode: &AuditMode, cfg: &MixedConfig) -> Result<()> {
    let terms = formats::parse_polynomial(text)?;
    let dh = newton_polytope_delta_h(&terms)?;
    r.invariants.insert("newton_vertices".into(), emit::matrix(dh.vertices()));
    if terms.len() != 1 {
        let what = if mode.bound { "bounds" } else { "log_concave" };
        r.skip(what, "no Milnor profile route for a general polynomial");
        return Ok(());
    }
    let mu = mu_monomial(&terms[0].1, cfg)?;
    if mode.bound {
        bound_checks(r, &mu, &dh)
    } else {
        r.invariants.insert("mu".into(), emit::ints(&mu.values));
        sequence_checks(r, &mu.sequence());
        Ok(())
    }
}

fn polytope_file(r: &mut Report, text: &str, mode: &AuditMode) -> Result<()> {
    let p = formats::parse_polytope(text)?;
    if mode.bound {
        r.skip("bounds", "no Milnor profile for a polytope");
        return Ok(());
    }
    let n = p.dim();
    if n == 0 {
        r.skip("log_concave", "zero-dimensional ambient space");
        return Ok(());
    }
    let simplex = LatticePolytope::standard_simplex(n);
    let mv = (0..=n)
        .map(|i| Ok(mixed_volume_pair(&simplex, &p, i)?.to_integer()))
        .collect::<Result<Vec<_>>>()?;
    r.invariants.insert("mixed_volumes_with_simplex".into(), emit::ints(&mv));
    r.check("log_concave", Sequence::new(mv)?.is_log_concave());
    Ok(())
}

fn class_file(r: &mut Report, text: &str, mode: &AuditMode, cfg: &MixedConfig) -> Result<()> {
    let xi = formats::parse_class_json(text)?;
    if mode.bound {
        r.skip("bounds", "no Milnor profile for a class");
        return Ok(());
    }
    let (value, ok) = classify_value(&xi, cfg)?;
    r.invariants.insert("classification".into(), value);
    r.check("witness", ok);
    Ok(())
}

fn audit_file(path: &Path, root: &Path, mode: &AuditMode, cfg: &MixedConfig) -> (Value, bool) {
    let start = Instant::now();
    let mut r = Report::default();
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let result = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .and_then(|text| match ext {
            "graph" => graph_file(&mut r, &text, mode),
            "matrix" => matrix_file(&mut r, &text, mode),
            "ideal" => ideal_file(&mut r, &text, mode, cfg),
            "poly" => polynomial_file(&mut r, &text, mode, cfg),
            "polytope" => polytope_file(&mut r, &text, mode),
            "json" => class_file(&mut r, &text, mode, cfg),
            _ => {
                r.skip("input", "unrecognised extension");
                Ok(())
            }
        });
    if let Err(e) = result {
        r.verdict("input", Status::Fail, Some(format!("{e:#}")));
    }
    let failed = r.failed();
    let name = path.strip_prefix(root).unwrap_or(path).display().to_string();
    let value = json!({
        "file": name,
        "invariants": r.invariants,
        "verdicts": r.verdicts,
        "time_ms": start.elapsed().as_millis() as u64,
        "skipped": r.all_skipped(),
    });
    (value, failed)
}

pub fn run(mode: &AuditMode, dir: &Path, threads: Option<usize>, cfg: &MixedConfig) -> Result<bool> {
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.with_context(|| format!("walking {}", dir.display()))?;
        if entry.file_type().is_file() {
            files.push(entry.into_path());
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let reports: Vec<(Value, bool)> =
        pool.install(|| files.par_iter().map(|f| audit_file(f, dir, mode, cfg)).collect());
    let failed = reports.iter().filter(|(_, f)| *f).count();
    for (value, _) in &reports {
        println!("{}", serde_json::to_string(value)?);
    }
    let summary = json!({ "summary": { "files": reports.len(), "failed": failed } });
    println!("{}", serde_json::to_string(&summary)?);
    Ok(failed == 0)
}
