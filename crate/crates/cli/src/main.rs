use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use logcave::formats;
use logcave::graph::ChromaticSolver;
use logcave::homclass::{check_witness, classify, construct_witness, Verdict};
use logcave::matroid::Matroid;
use logcave::milnor::{csm_class, euler_characteristic, mu_arrangement, mu_generic_isolated, mu_monomial};
use logcave::monomial::{mixed_multiplicities_with, MixedConfig};
use logcave::polytope::{mixed_volume, newton_polytope_delta_h};

mod audit;
mod emit;

#[derive(Parser)]
#[command(name = "logcave", version, about = "Exact log-concavity computations")]
struct Cli {
    /// Emit JSON (the only output format).
    #[arg(long, global = true, default_value_t = true)]
    json: bool,
    /// Base point for the stable level of the monomial engine.
    #[arg(long, global = true, value_name = "B")]
    base_point: Option<u64>,
    /// Worker threads for audits (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic polynomial of a graph file.
    Chromatic { graph: PathBuf },
    /// Characteristic polynomial of a matrix or graph matroid.
    Charpoly {
        #[command(flatten)]
        source: CharpolySource,
        /// Also divide by (q - 1).
        #[arg(long)]
        reduced: bool,
    },
    /// Milnor-number profile with CSM class and Euler characteristic.
    Mu {
        #[command(flatten)]
        route: MuRoute,
    },
    /// Mixed volume of n polytopes in R^n.
    Mixedvol {
        #[arg(required = true)]
        polytopes: Vec<PathBuf>,
    },
    /// All mixed multiplicities of the maximal ideal and the given ideals.
    Mixedmult {
        #[arg(required = true)]
        ideals: Vec<PathBuf>,
    },
    /// Vertices of the Newton polytope of the partial derivatives.
    Newton { polynomial: PathBuf },
    /// Representability verdict and witness for a class JSON file.
    Classify { class: PathBuf },
    /// Run every applicable check over a directory.
    Audit {
        #[command(flatten)]
        mode: AuditMode,
        dir: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CharpolySource {
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MuRoute {
    #[arg(long)]
    arrangement: Option<PathBuf>,
    /// Exponents of a monomial, e.g. "1 1 1".
    #[arg(long, value_name = "EXPONENTS")]
    monomial: Option<String>,
    /// Degree, ambient dimension, then local Milnor numbers.
    #[arg(long, num_args = 2.., value_name = "D N MU")]
    isolated: Option<Vec<String>>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct AuditMode {
    /// Kouchnirenko-type bounds on Milnor profiles.
    #[arg(long)]
    pub bound: bool,
    /// Log-concavity of every invariant that has a sequence.
    #[arg(long)]
    pub logconcave: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parsed<T>(path: &Path, parse: fn(&str) -> Result<T, formats::ParseError>) -> Result<T> {
    parse(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn config(base_point: Option<u64>) -> MixedConfig {
    MixedConfig { base_v: base_point, ..MixedConfig::default() }
}

fn cmd_chromatic(path: &Path) -> Result<Value> {
    let g = parsed(path, formats::parse_graph)?;
    let p = ChromaticSolver::new().chromatic_polynomial(&g)?;
    let mut out = Map::new();
    out.insert("polynomial".into(), emit::polynomial(&p));
    emit::coefficient_verdicts(&p, &mut out);
    Ok(Value::Object(out))
}

fn cmd_charpoly(source: &CharpolySource, reduced: bool) -> Result<Value> {
    let m = match (&source.matrix, &source.graph) {
        (Some(path), _) => Matroid::from_matrix(&parsed(path, formats::parse_matrix)?)?,
        (_, Some(path)) => Matroid::cycle_matroid(&parsed(path, formats::parse_graph)?)?,
        _ => unreachable!("clap enforces one source"),
    };
    let p = m.characteristic_polynomial()?;
    let mut out = Map::new();
    out.insert("polynomial".into(), emit::polynomial(&p));
    out.insert("rank".into(), json!(m.rank()));
    emit::coefficient_verdicts(&p, &mut out);
    if reduced {
        if m.has_loop() {
            bail!("not divisible by (q - 1): the matroid has a loop, so its polynomial is zero");
        }
        out.insert("reduced".into(), emit::polynomial(&p.divide_by_q_minus_1()?));
    }
    Ok(Value::Object(out))
}

fn cmd_mu(route: &MuRoute, cfg: &MixedConfig) -> Result<Value> {
    let mut extra = Map::new();
    let mu = if let Some(path) = &route.arrangement {
        let a = parsed(path, formats::parse_arrangement)?;
        extra.insert("decone_polynomial".into(), emit::polynomial(&a.decone_polynomial()?));
        mu_arrangement(&a)?
    } else if let Some(exps) = &route.monomial {
        mu_monomial(&formats::parse_exponents(exps)?, cfg)?
    } else if let Some(args) = &route.isolated {
        let d: u64 = args[0].parse().context("degree")?;
        let n: usize = args[1].parse().context("ambient dimension")?;
        let local = args[2..]
            .iter()
            .map(|s| s.parse::<BigInt>().with_context(|| format!("Milnor number '{s}'")))
            .collect::<Result<Vec<_>>>()?;
        mu_generic_isolated(d, n, &local)?
    } else {
        unreachable!("clap enforces one route")
    };
    let mut out = emit::mu_profile(&mu, &csm_class(&mu), &euler_characteristic(&mu));
    out.append(&mut extra);
    Ok(Value::Object(out))
}

fn cmd_mixedvol(paths: &[PathBuf]) -> Result<Value> {
    let polys = paths
        .iter()
        .map(|p| parsed(p, formats::parse_polytope))
        .collect::<Result<Vec<_>>>()?;
    let mv = mixed_volume(&polys)?;
    Ok(json!({ "mixed_volume": mv.to_string() }))
}

fn cmd_mixedmult(paths: &[PathBuf], cfg: &MixedConfig) -> Result<Value> {
    let ideals = paths
        .iter()
        .map(|p| parsed(p, formats::parse_ideal))
        .collect::<Result<Vec<_>>>()?;
    let profile = mixed_multiplicities_with(&ideals, cfg)?;
    let values: Map<String, Value> = profile
        .values
        .iter()
        .map(|(k, v)| {
            let key = k.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            (key, emit::int(v))
        })
        .collect();
    Ok(json!({ "total_degree": profile.total_degree, "values": values }))
}

fn cmd_newton(path: &Path) -> Result<Value> {
    let terms = parsed(path, formats::parse_polynomial)?;
    let p = newton_polytope_delta_h(&terms)?;
    Ok(json!({
        "dim": p.dim(),
        "vertices": emit::matrix(p.vertices()),
        "normalized_volume": emit::int(&p.normalized_volume()),
    }))
}

pub fn classify_value(xi: &logcave::homclass::HomologyClass, cfg: &MixedConfig) -> Result<(Value, bool)> {
    let verdict = classify(xi);
    let mut ok = true;
    let mut out = Map::new();
    out.insert("verdict".into(), json!(format!("{verdict:?}")));
    out.insert("representable".into(), json!(verdict.is_representable()));
    let witness = if verdict == Verdict::RepresentableUpToMultiple {
        match construct_witness(xi) {
            Ok(w) => match check_witness(&w, cfg) {
                Ok(check) => {
                    ok = check.holds;
                    emit::witness(&w, Some(check.holds))
                }
                Err(e) => {
                    out.insert("note".into(), json!(format!("witness not verified: {e}")));
                    emit::witness(&w, None)
                }
            },
            Err(e) => {
                out.insert("note".into(), json!(e.to_string()));
                Value::Null
            }
        }
    } else {
        Value::Null
    };
    out.insert("witness".into(), witness);
    Ok((Value::Object(out), ok))
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = config(cli.base_point);
    let value = match &cli.command {
        Command::Chromatic { graph } => cmd_chromatic(graph)?,
        Command::Charpoly { source, reduced } => cmd_charpoly(source, *reduced)?,
        Command::Mu { route } => cmd_mu(route, &cfg)?,
        Command::Mixedvol { polytopes } => cmd_mixedvol(polytopes)?,
        Command::Mixedmult { ideals } => cmd_mixedmult(ideals, &cfg)?,
        Command::Newton { polynomial } => cmd_newton(polynomial)?,
        Command::Classify { class } => {
            let (v, ok) = classify_value(&parsed(class, formats::parse_class_json)?, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&v)?);
            return Ok(ok);
        }
        Command::Audit { mode, dir } => return audit::run(mode, dir, cli.threads, &cfg),
    };
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
