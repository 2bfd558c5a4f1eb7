//! Plain-text input formats. Blank lines and `#` comments are ignored
//! everywhere; errors carry the 1-based line number where known.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;
use thiserror::Error;

use crate::graph::Graph;
use crate::homclass::HomologyClass;
use crate::milnor::Arrangement;
use crate::monomial::MonomialIdeal;
use crate::polytope::LatticePolytope;

/// Largest vertex count or dimension accepted by a header line.
pub const MAX_HEADER_SIZE: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn invalid(e: impl std::fmt::Display) -> ParseError {
    ParseError::Invalid(e.to_string())
}

/// Non-empty lines with comments stripped, paired with their line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn number<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} '{tok}'")))
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    keyword: &str,
) -> Result<(usize, usize), ParseError> {
    let (line, toks) = lines
        .next()
        .ok_or_else(|| syntax(1, format!("missing '{keyword} <n>' header")))?;
    if toks.len() != 2 || toks[0] != keyword {
        return Err(syntax(line, format!("expected '{keyword} <n>'")));
    }
    let n: usize = number(line, toks[1], "size")?;
    if n > MAX_HEADER_SIZE {
        return Err(syntax(line, format!("size {n} exceeds {MAX_HEADER_SIZE}")));
    }
    Ok((line, n))
}

/// `p <vertex_count>` followed by one `u v` pair per line, 0-indexed.
/// Repeated edges and loops are kept.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (_, n) = header(&mut lines, "p")?;
    let mut edges = Vec::new();
    for (line, toks) in lines {
        if toks.len() != 2 {
            return Err(syntax(line, "expected 'u v'"));
        }
        let u: usize = number(line, toks[0], "vertex")?;
        let v: usize = number(line, toks[1], "vertex")?;
        if u >= n || v >= n {
            return Err(syntax(line, format!("vertex out of range for {n} vertices")));
        }
        edges.push((u, v));
    }
    Graph::new(n, edges).map_err(invalid)
}

/// One row per line of integer or `p/q` entries.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<BigRational>>, ParseError> {
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (line, toks) in content_lines(text) {
        let row = toks
            .iter()
            .map(|t| number::<BigRational>(line, t, "rational"))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(syntax(
                    line,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(syntax(1, "matrix has no rows"));
    }
    Ok(rows)
}

/// Matrix format, one linear form per row.
pub fn parse_arrangement(text: &str) -> Result<Arrangement, ParseError> {
    Arrangement::new(&parse_matrix(text)?).map_err(invalid)
}

/// `vars <count>` followed by one exponent vector per line.
pub fn parse_ideal(text: &str) -> Result<MonomialIdeal, ParseError> {
    let mut lines = content_lines(text);
    let (hline, vars) = header(&mut lines, "vars")?;
    let mut gens = Vec::new();
    for (line, toks) in lines {
        if toks.len() != vars {
            return Err(syntax(line, format!("expected {vars} exponents, found {}", toks.len())));
        }
        gens.push(
            toks.iter()
                .map(|t| number::<u32>(line, t, "exponent"))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if gens.is_empty() {
        return Err(syntax(hline, "ideal has no generators"));
    }
    MonomialIdeal::new(vars, gens).map_err(invalid)
}

/// `dim <n>` followed by one integer point per line.
pub fn parse_polytope(text: &str) -> Result<LatticePolytope, ParseError> {
    let mut lines = content_lines(text);
    let (hline, dim) = header(&mut lines, "dim")?;
    let mut points = Vec::new();
    for (line, toks) in lines {
        if toks.len() != dim {
            return Err(syntax(line, format!("expected {dim} coordinates, found {}", toks.len())));
        }
        points.push(
            toks.iter()
                .map(|t| number::<i64>(line, t, "coordinate"))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if points.is_empty() {
        return Err(syntax(hline, "polytope has no points"));
    }
    LatticePolytope::from_points(dim, points).map_err(invalid)
}

/// One term per line: `<coeff> <e0> ... <en>`.
pub fn parse_polynomial(text: &str) -> Result<Vec<(BigRational, Vec<u32>)>, ParseError> {
    let mut terms: Vec<(BigRational, Vec<u32>)> = Vec::new();
    for (line, toks) in content_lines(text) {
        if toks.len() < 2 {
            return Err(syntax(line, "expected a coefficient and exponents"));
        }
        let c: BigRational = number(line, toks[0], "coefficient")?;
        let e = toks[1..]
            .iter()
            .map(|t| number::<u32>(line, t, "exponent"))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some((_, first)) = terms.first() {
            if first.len() != e.len() {
                return Err(syntax(line, format!("expected {} exponents", first.len())));
            }
        }
        terms.push((c, e));
    }
    if terms.is_empty() {
        return Err(syntax(1, "polynomial has no terms"));
    }
    Ok(terms)
}

/// Whitespace-separated exponents of a monomial, e.g. `"1 1 1"`.
pub fn parse_exponents(text: &str) -> Result<Vec<u32>, ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.is_empty() {
        return Err(syntax(1, "no exponents"));
    }
    toks.iter().map(|t| number(1, t, "exponent")).collect()
}

fn json_usize(v: &Value, key: &str) -> Result<usize, ParseError> {
    v.get(key)
        .and_then(Value::as_u64)
        .and_then(|x| usize::try_from(x).ok())
        .filter(|&x| x <= MAX_HEADER_SIZE)
        .ok_or_else(|| invalid(format!("field '{key}' must be an integer in 0..={MAX_HEADER_SIZE}")))
}

fn json_bigint(v: &Value) -> Result<BigInt, ParseError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| invalid(format!("coefficient {n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| invalid(format!("coefficient '{s}' is not an integer"))),
        other => Err(invalid(format!("coefficient {other} is not an integer"))),
    }
}

/// `{"n": .., "m": .., "k": .., "e": ..}` where `e` is either a dense array
/// over the admissible indices or an object keyed by index. Coefficients may
/// be JSON integers or decimal strings.
pub fn parse_class_json(text: &str) -> Result<HomologyClass, ParseError> {
    let v: Value = serde_json::from_str(text).map_err(|e| syntax(e.line(), e.to_string()))?;
    let (n, m, k) = (json_usize(&v, "n")?, json_usize(&v, "m")?, json_usize(&v, "k")?);
    match v.get("e") {
        Some(Value::Array(items)) => {
            let e = items.iter().map(json_bigint).collect::<Result<Vec<_>, _>>()?;
            HomologyClass::from_dense(n, m, k, e).map_err(invalid)
        }
        Some(Value::Object(map)) => {
            let mut coeffs = BTreeMap::new();
            for (key, val) in map {
                let i: usize = key
                    .parse()
                    .map_err(|_| invalid(format!("index '{key}' is not a nonnegative integer")))?;
                coeffs.insert(i, json_bigint(val)?);
            }
            HomologyClass::new(n, m, k, coeffs).map_err(invalid)
        }
        _ => Err(invalid("field 'e' must be an array or an object")),
    }
}
