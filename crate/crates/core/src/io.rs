//! Text formats.
//!
//! * `.cplx`: one maximal simplex per line, vertex labels separated by
//!   whitespace.
//! * `.field`: one pair per line, `a b -> a b c`.
//! * `.mf`: one cell per line, `a b c : 7` or `a b c : 7/2`.
//!
//! Blank lines and lines starting with `#` are ignored in all three.

use std::fmt::Write as _;

use num_rational::Rational64;

use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::DiscreteVectorField;
use crate::morse_fn::MorseFunction;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim_start();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, l))
    })
}

/// Whitespace separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (s + 1, t)).collect()
}

pub fn parse_cplx(text: &str) -> Result<SimplicialComplex> {
    let mut facets = Vec::new();
    for (line, l) in content_lines(text) {
        let toks = tokens(l);
        let mut seen = Vec::new();
        for &(col, t) in &toks {
            crate::complex::validate_label(t)
                .map_err(|_| parse_error(line, col, format!("invalid vertex label `{t}`")))?;
            if seen.contains(&t) {
                return Err(parse_error(line, col, format!("vertex `{t}` repeated")));
            }
            seen.push(t);
        }
        facets.push(seen);
    }
    if facets.is_empty() {
        return Err(parse_error(1, 1, "no simplices"));
    }
    SimplicialComplex::build_from_maximal(&facets)
}

/// Maximal cells in `(dimension, lexicographic)` order.
pub fn write_cplx(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for c in k.facets() {
        out.push_str(&k.cell_name(c));
        out.push('\n');
    }
    out
}

fn resolve_cell(k: &SimplicialComplex, line: usize, toks: &[(usize, &str)]) -> Result<CellId> {
    let col = toks.first().map_or(1, |t| t.0);
    if toks.is_empty() {
        return Err(parse_error(line, col, "empty cell"));
    }
    let labels: Vec<&str> = toks.iter().map(|t| t.1).collect();
    for &(c, l) in toks {
        if k.find_cell(&[l]).is_none() {
            return Err(parse_error(line, c, format!("unknown vertex `{l}`")));
        }
    }
    k.find_cell(&labels)
        .ok_or_else(|| parse_error(line, col, format!("`{}` is not a cell", labels.join(" "))))
}

/// Parses and validates a `.field` file against `k`.
pub fn parse_field<'a>(k: &'a SimplicialComplex, text: &str) -> Result<DiscreteVectorField<'a>> {
    let mut pairs = Vec::new();
    for (line, l) in content_lines(text) {
        let toks = tokens(l);
        let Some(arrow) = toks.iter().position(|t| t.1 == "->") else {
            return Err(parse_error(line, 1, "expected `lower -> upper`"));
        };
        let lower = resolve_cell(k, line, &toks[..arrow])?;
        let upper_toks = &toks[arrow + 1..];
        if upper_toks.is_empty() {
            return Err(parse_error(line, toks[arrow].0 + 2, "missing upper cell"));
        }
        let upper = resolve_cell(k, line, upper_toks)?;
        pairs.push((lower, upper));
    }
    Ok(DiscreteVectorField::validate(k, pairs)?)
}

pub fn write_field(field: &DiscreteVectorField<'_>) -> String {
    let k = field.complex();
    let mut out = String::new();
    for (lo, hi) in field.pairs() {
        let _ = writeln!(out, "{} -> {}", k.cell_name(lo), k.cell_name(hi));
    }
    out
}

fn parse_rational(s: &str) -> Option<Rational64> {
    match s.split_once('/') {
        None => s.parse::<i64>().ok().map(Rational64::from_integer),
        Some((p, q)) => {
            let (p, q) = (p.parse::<i64>().ok()?, q.parse::<i64>().ok()?);
            (q != 0).then(|| Rational64::new(p, q))
        }
    }
}

/// Parses a `.mf` file; every cell of `k` needs exactly one value.
pub fn parse_mf(k: &SimplicialComplex, text: &str) -> Result<MorseFunction> {
    let mut values: Vec<Option<Rational64>> = vec![None; k.num_cells()];
    for (line, l) in content_lines(text) {
        let toks = tokens(l);
        let Some(colon) = toks.iter().position(|t| t.1 == ":") else {
            return Err(parse_error(line, 1, "expected `cell : value`"));
        };
        let cell = resolve_cell(k, line, &toks[..colon])?;
        let rest = &toks[colon + 1..];
        let [(col, v)] = rest else {
            let col = rest.get(1).map_or(toks[colon].0 + 1, |t| t.0);
            return Err(parse_error(line, col, "expected a single value"));
        };
        let value = parse_rational(v)
            .ok_or_else(|| parse_error(line, *col, format!("`{v}` is not an integer or p/q")))?;
        if values[cell.index()].replace(value).is_some() {
            return Err(parse_error(
                line,
                1,
                format!("second value for `{}`", k.cell_name(cell)),
            ));
        }
    }
    MorseFunction::from_partial(k, values)
}

pub fn write_mf(k: &SimplicialComplex, f: &MorseFunction) -> String {
    let mut out = String::new();
    for c in k.cell_ids() {
        let v = f.value(c);
        if v.is_integer() {
            let _ = writeln!(out, "{} : {}", k.cell_name(c), v.numer());
        } else {
            let _ = writeln!(out, "{} : {}/{}", k.cell_name(c), v.numer(), v.denom());
        }
    }
    out
}
