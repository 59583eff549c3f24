//! The text grammars shared by every CLI command.
//!
//! Polynomials over prime fields print as a bracketed digit string ascending
//! by degree (`[2021]` = 2 + 2x² + x³). Extension fields print bracketed
//! comma-separated tokens from {0, 1, a, a^2, ...} where `a` is the field
//! generator (`[1,a,a^2,0,1]`). Multisets print as `{1,2,4}^2 + {0}`: a coset
//! named by any member, `^k` an optional multiplicity, `+` for union.

use std::sync::Arc;

use crate::cosets::{CosetMultiset, CosetTable};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Poly;

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

pub fn format_poly(p: &Poly) -> String {
    let field = p.field();
    if field.is_prime_field() {
        let mut s = String::with_capacity(p.coeffs().len() + 2);
        s.push('[');
        for c in p.coeffs() {
            s.push_str(&c.index().to_string());
        }
        s.push(']');
        s
    } else {
        let tokens: Vec<String> = p.coeffs().iter().map(|&c| format_element(field, c)).collect();
        format!("[{}]", tokens.join(","))
    }
}

pub fn format_element(field: &Arc<Field>, c: FieldElement) -> String {
    if field.is_prime_field() {
        return c.index().to_string();
    }
    match field.log_of(c) {
        None => "0".to_string(),
        Some(0) => "1".to_string(),
        Some(1) => "a".to_string(),
        Some(k) => format!("a^{k}"),
    }
}

/// Parse the polynomial grammar against a concrete field.
pub fn parse_poly(field: &Arc<Field>, s: &str) -> Result<Poly> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| parse_err(0, "polynomial must be bracketed like [2021]"))?;
    if field.is_prime_field() {
        let p = field.characteristic();
        if p > 9 {
            return Err(parse_err(
                0,
                "digit grammar only covers prime fields up to GF(9)",
            ));
        }
        let mut coeffs = Vec::with_capacity(inner.len());
        for (i, ch) in inner.char_indices() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| parse_err(i + 1, format!("expected a digit, found {ch:?}")))?;
            if d as u64 >= p {
                return Err(parse_err(
                    i + 1,
                    format!("digit {d} is not a residue mod {p}"),
                ));
            }
            coeffs.push(field.element(d as u64));
        }
        Ok(Poly::from_coeffs(field.clone(), coeffs))
    } else {
        if inner.is_empty() {
            return Ok(Poly::zero(field.clone()));
        }
        let mut coeffs = Vec::new();
        let mut offset = 1usize;
        for tok in inner.split(',') {
            coeffs.push(parse_element(field, tok.trim(), offset)?);
            offset += tok.len() + 1;
        }
        Ok(Poly::from_coeffs(field.clone(), coeffs))
    }
}

fn parse_element(field: &Arc<Field>, tok: &str, pos: usize) -> Result<FieldElement> {
    match tok {
        "0" => Ok(field.zero()),
        "1" => Ok(field.one()),
        "a" => Ok(field.generator()),
        _ => {
            let exp = tok
                .strip_prefix("a^")
                .and_then(|e| e.parse::<u64>().ok())
                .ok_or_else(|| parse_err(pos, format!("unknown coefficient token {tok:?}")))?;
            Ok(field.pow(field.generator(), exp))
        }
    }
}

pub fn format_multiset(ms: &CosetMultiset) -> String {
    let table = ms.table();
    let mut terms = Vec::new();
    for (coset, &m) in table.cosets().iter().zip(ms.multiplicities()) {
        if m == 0 {
            continue;
        }
        let members: Vec<String> = coset.iter().map(|z| z.to_string()).collect();
        let body = format!("{{{}}}", members.join(","));
        if m == 1 {
            terms.push(body);
        } else {
            terms.push(format!("{body}^{m}"));
        }
    }
    if terms.is_empty() {
        "{}".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Parse the multiset grammar: `{1,2,4}^2 + {0}`. A coset may be named by
/// any member; repeating a coset accumulates multiplicity.
pub fn parse_multiset(table: &Arc<CosetTable>, s: &str) -> Result<CosetMultiset> {
    let mut mults = vec![0u32; table.coset_count()];
    let trimmed = s.trim();
    if trimmed == "{}" {
        return CosetMultiset::new(table.clone(), mults);
    }
    let nq = table.split().coprime;
    let mut pos = 0usize;
    for term in trimmed.split('+') {
        let t = term.trim();
        let open = t
            .strip_prefix('{')
            .ok_or_else(|| parse_err(pos, "expected a coset term like {1,2,4}"))?;
        let (body, rest) = open
            .split_once('}')
            .ok_or_else(|| parse_err(pos, "unterminated coset braces"))?;
        let mult: u32 = match rest.trim() {
            "" => 1,
            r => r
                .strip_prefix('^')
                .and_then(|m| m.trim().parse().ok())
                .ok_or_else(|| parse_err(pos, format!("bad multiplicity suffix {rest:?}")))?,
        };
        let mut coset_idx = None;
        for member in body.split(',') {
            let z: u64 = member
                .trim()
                .parse()
                .map_err(|_| parse_err(pos, format!("bad residue {member:?}")))?;
            if z >= nq {
                return Err(parse_err(
                    pos,
                    format!("residue {z} out of range mod {nq}"),
                ));
            }
            let idx = table.coset_of(z);
            match coset_idx {
                None => coset_idx = Some(idx),
                Some(prev) if prev != idx => {
                    return Err(parse_err(
                        pos,
                        format!("residues {body} span more than one coset"),
                    ));
                }
                _ => {}
            }
        }
        let idx = coset_idx.ok_or_else(|| parse_err(pos, "empty coset term"))?;
        mults[idx] += mult;
        pos += term.len() + 1;
    }
    CosetMultiset::new(table.clone(), mults)
}

/// CLI inputs may name a code either by multiset or by generator polynomial;
/// dispatch on the first character.
pub fn parse_multiset_or_poly(table: &Arc<CosetTable>, s: &str) -> Result<CosetMultiset> {
    let t = s.trim();
    if t.starts_with('{') {
        parse_multiset(table, t)
    } else if t.starts_with('[') {
        let poly = parse_poly(table.field(), t)?;
        CosetMultiset::from_poly(table, &poly)
    } else {
        Err(parse_err(
            0,
            "expected a multiset starting with '{' or a polynomial starting with '['",
        ))
    }
}
