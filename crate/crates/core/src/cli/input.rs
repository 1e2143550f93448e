//! Presentation and morphism files.
//!
//! ```text
//! schema: crystalcalc/1
//! p: 3
//! generators: x y
//! weights: 1 -1
//! relation: x*y - 1
//! witness: y
//! ```
//!
//! `invert: g` adds a generator `g_inv` with relation `g*g_inv - 1`.
//! Morphism files hold one `image: <gen> = <expression>` line per source
//! generator; expressions are Laurent polynomials in the target generators.

use super::SCHEMA;
use crate::error::{Error, Result};
use crate::padic_linalg::Zpn;
use crate::power_series::PDSeries;
use crate::smooth_lift::{IntRelation, Presentation};
use std::collections::BTreeMap;

/// `c * Π name^e`
pub type Term = (i64, Vec<(String, i64)>);

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Splits `x^2*y - 3*x^-1 + 2` into signed terms.
pub fn parse_expression(s: &str, line: usize) -> Result<Vec<Term>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err(line, "empty expression"));
    }
    let mut pieces = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'*' {
            pieces.push(&s[start..i]);
            start = i;
        }
    }
    pieces.push(&s[start..]);
    pieces.into_iter().map(|p| parse_term(p, line)).collect()
}

fn parse_term(s: &str, line: usize) -> Result<Term> {
    let (sign, body) = match s.as_bytes().first() {
        Some(b'-') => (-1, &s[1..]),
        Some(b'+') => (1, &s[1..]),
        _ => (1, s),
    };
    let mut coeff = sign;
    let mut vars: Vec<(String, i64)> = Vec::new();
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(parse_err(line, format!("empty factor in {s:?}")));
        }
        if let Ok(c) = factor.parse::<i64>() {
            coeff *= c;
            continue;
        }
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<i64>().map_err(|_| parse_err(line, format!("bad exponent in {factor:?}")))?),
            None => (factor, 1),
        };
        if !name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(parse_err(line, format!("bad variable name {name:?}")));
        }
        match vars.iter_mut().find(|(n, _)| n == name) {
            Some(v) => v.1 += e,
            None => vars.push((name.to_string(), e)),
        }
    }
    Ok((coeff, vars))
}

/// `key: value` lines after the schema header; blank lines and `#` comments
/// are skipped.
fn fields(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    let mut header = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (key, value) = t.split_once(':').ok_or_else(|| parse_err(line, "expected `key: value`"))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if !header {
            if key != "schema" || value != SCHEMA {
                return Err(parse_err(line, format!("first line must be `schema: {SCHEMA}`")));
            }
            header = true;
            continue;
        }
        out.push((line, key, value));
    }
    if !header {
        return Err(parse_err(1, "missing schema header"));
    }
    Ok(out)
}

/// Parses a presentation over `F_p`; `p` from the file must agree with
/// `expected_p` when both are given.
pub fn parse_presentation(text: &str, expected_p: Option<u64>) -> Result<Presentation> {
    let mut p = expected_p;
    let mut gens: Vec<String> = Vec::new();
    let mut weights: Option<Vec<i64>> = None;
    let mut relations: Vec<(usize, Vec<Term>)> = Vec::new();
    let mut witness: Vec<(usize, String)> = Vec::new();
    let mut inverted: Vec<(usize, String)> = Vec::new();
    for (line, key, value) in fields(text)? {
        match key.as_str() {
            "p" => {
                let v: u64 = value.parse().map_err(|_| parse_err(line, "p must be an integer"))?;
                if expected_p.is_some_and(|e| e != v) {
                    return Err(parse_err(line, format!("file is over F_{v} but --p is {}", expected_p.unwrap())));
                }
                p = Some(v);
            }
            "generators" => gens = value.split_whitespace().map(String::from).collect(),
            "weights" => {
                let w = value
                    .split_whitespace()
                    .map(|s| s.parse::<i64>().map_err(|_| parse_err(line, format!("bad weight {s:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                weights = Some(w);
            }
            "relation" => relations.push((line, parse_expression(&value, line)?)),
            "witness" => witness.extend(value.split_whitespace().map(|s| (line, s.to_string()))),
            "invert" => inverted.push((line, value)),
            other => return Err(parse_err(line, format!("unknown field {other:?}"))),
        }
    }
    let p = p.ok_or_else(|| parse_err(1, "no `p:` line and no --p"))?;
    for (line, g) in &inverted {
        if !gens.contains(g) {
            return Err(parse_err(*line, format!("cannot invert unknown generator {g:?}")));
        }
        let inv = format!("{g}_inv");
        gens.push(inv.clone());
        relations.push((*line, vec![(1, vec![(g.clone(), 1), (inv.clone(), 1)]), (-1, vec![])]));
        witness.push((*line, inv));
        if let Some(w) = weights.as_mut() {
            let i = gens.iter().position(|x| x == g).unwrap();
            let wi = w.get(i).copied().unwrap_or(0);
            w.push(-wi);
        }
    }
    let index = |line: usize, name: &str| -> Result<usize> {
        gens.iter().position(|g| g == name).ok_or_else(|| parse_err(line, format!("unknown generator {name:?}")))
    };
    let mut int_relations: Vec<IntRelation> = Vec::new();
    for (line, terms) in &relations {
        let mut rel = Vec::new();
        for (c, vars) in terms {
            let mut e = vec![0u32; gens.len()];
            for (name, k) in vars {
                if *k < 0 {
                    return Err(parse_err(*line, "relations are polynomials; use `invert:` for units"));
                }
                e[index(*line, name)?] += *k as u32;
            }
            rel.push((e, *c));
        }
        int_relations.push(rel);
    }
    let witness = witness.iter().map(|(l, n)| index(*l, n)).collect::<Result<Vec<_>>>()?;
    let a = Presentation::new(Zpn::new(p, 1)?, gens, int_relations, witness)?;
    match weights {
        Some(w) => a.with_weights(w),
        None => Ok(a),
    }
}

/// Evaluates an expression with each generator name bound to a series.
pub fn evaluate(terms: &[Term], vars: &BTreeMap<String, PDSeries>, zero: &PDSeries, line: usize) -> Result<PDSeries> {
    let spec = zero.spec();
    let mut acc = zero.clone();
    for (c, factors) in terms {
        let mut t = PDSeries::constant_i64(spec, *c);
        for (name, e) in factors {
            let v = vars.get(name).ok_or_else(|| parse_err(line, format!("unknown generator {name:?}")))?;
            t = t.try_mul(&v.pow_i64(*e)?)?;
        }
        acc = acc.try_add(&t)?;
    }
    Ok(acc)
}

/// Image expressions keyed by source generator, in file order.
pub fn parse_morphism(text: &str) -> Result<Vec<(usize, String, Vec<Term>)>> {
    let mut out = Vec::new();
    for (line, key, value) in fields(text)? {
        if key != "image" {
            return Err(parse_err(line, format!("unknown field {key:?}")));
        }
        let (gen, expr) = value.split_once('=').ok_or_else(|| parse_err(line, "expected `image: <gen> = <expr>`"))?;
        out.push((line, gen.trim().to_string(), parse_expression(expr, line)?));
    }
    Ok(out)
}
