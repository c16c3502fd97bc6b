//! Line-oriented facts files:
//!
//! ```text
//! <kind> <context> <word> [| <template>] [^ <n>] = <lo>/<hi> # label
//! ```
//!
//! `kind` is `L`, `SL`, `SCL` or `CL`. A `hi` of `=` repeats `lo` and `inf`
//! leaves the upper end open. When both ends are fractions, separate them
//! with ` / ` (spaces) or write four slash-separated integers.

use std::path::Path;

use super::engine::{Db, FactId, Provenance};
use super::interval::{parse_rational, Interval, Rational};
use super::quantity::{Context, Quantity, Template};
use crate::error::{Error, Result};
use crate::parse::Alphabet;
use crate::verbal::template_by_name;

pub const DEFAULT_SEEDS: &str = include_str!("../../seeds/default.facts");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactLine {
    pub quantity: Quantity,
    pub interval: Interval,
    pub label: String,
}

pub fn parse_template(spec: &str, alphabet: &mut Alphabet) -> Result<Template> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("gamma3set") || spec == "Gamma3" {
        return Ok(Template::Gamma3Set);
    }
    match template_by_name(spec, None, alphabet) {
        Ok(t) => Ok(Template::word(t.body())),
        Err(_) => Ok(Template::word(&alphabet.parse(spec)?)),
    }
}

/// `SL [x,y]^2 | [x,y]^2`, `L FREE [x,y]^3 | [x,y] ^ 1`, `SCL PERFECT g`, ...
/// The context may be omitted, in which case `default_context` applies.
pub fn parse_quantity(text: &str, default_context: Context, alphabet: &mut Alphabet) -> Result<Quantity> {
    let text = text.trim();
    let (kind, rest) = text
        .split_once(char::is_whitespace)
        .ok_or_else(|| Error::parse(0, format!("expected '<kind> <word>', got '{text}'")))?;
    let rest = rest.trim_start();
    let (context, rest) = match rest.split_once(char::is_whitespace) {
        Some((c, r)) if Context::parse(c).is_some() => (Context::parse(c).unwrap(), r.trim_start()),
        _ => (default_context, rest),
    };
    let kind = kind.to_ascii_uppercase();
    match kind.as_str() {
        "SCL" | "CL" => {
            let g = alphabet.parse(rest)?;
            Ok(if kind == "SCL" {
                Quantity::scl(&g, context)
            } else {
                Quantity::cl(&g, context)
            })
        }
        "SL" | "L" => {
            let (g_text, t_text) = rest
                .split_once('|')
                .ok_or_else(|| Error::parse(0, format!("{kind} needs '<word> | <template>'")))?;
            let (t_text, n) = split_exponent(t_text)?;
            let g = alphabet.parse(g_text.trim())?;
            let template = parse_template(t_text, alphabet)?;
            if kind == "SL" {
                if n.is_some() {
                    return Err(Error::parse(0, "SL takes no exponent"));
                }
                Ok(Quantity::sl(&g, template, context))
            } else {
                Ok(Quantity::l(&g, template, n.unwrap_or(1), context))
            }
        }
        other => Err(Error::parse(0, format!("unknown quantity kind '{other}'"))),
    }
}

/// Split a trailing ` ^ n` (whitespace before the caret) from the template.
fn split_exponent(t: &str) -> Result<(&str, Option<u32>)> {
    let t = t.trim_end();
    if let Some(pos) = t.rfind('^') {
        let before = &t[..pos];
        let after = t[pos + 1..].trim();
        if before.ends_with(char::is_whitespace) && !after.is_empty() && after.chars().all(|c| c.is_ascii_digit()) {
            let n: u32 = after.parse().map_err(|_| Error::parse(pos, "bad exponent"))?;
            if n == 0 {
                return Err(Error::parse(pos, "exponent must be at least 1"));
            }
            return Ok((before.trim_end(), Some(n)));
        }
    }
    Ok((t, None))
}

pub fn parse_bounds(s: &str) -> Result<Interval> {
    let bad = |m: &str| Error::InvalidArgument(format!("bound '{s}': {m}"));
    let s = s.trim();
    let (lo, hi) = if let Some((lo, hi)) = s.split_once(" / ") {
        (lo.trim().to_string(), hi.trim().to_string())
    } else {
        let parts: Vec<&str> = s.split('/').map(str::trim).collect();
        match parts.as_slice() {
            [lo, hi] => (lo.to_string(), hi.to_string()),
            [a, b, c] if *c == "=" || c.eq_ignore_ascii_case("inf") => (format!("{a}/{b}"), c.to_string()),
            [_, _, _] => return Err(bad("ambiguous; separate the two ends with ' / '")),
            [a, b, c, d] => (format!("{a}/{b}"), format!("{c}/{d}")),
            _ => return Err(bad("expected <lo>/<hi>")),
        }
    };
    let lo: Rational = parse_rational(&lo)?;
    let hi = match hi.as_str() {
        "=" => Some(lo.clone()),
        h if h.eq_ignore_ascii_case("inf") => None,
        h => Some(parse_rational(h)?),
    };
    Interval::new(lo, hi)
}

pub fn parse_facts(text: &str, alphabet: &mut Alphabet) -> Result<Vec<FactLine>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let at = |e: Error| Error::InvalidArgument(format!("line {}: {e}", i + 1));
        let (body, label) = match raw.split_once('#') {
            Some((b, l)) => (b.trim(), l.trim()),
            None => (raw.trim(), ""),
        };
        if body.is_empty() {
            continue;
        }
        // words never contain '=', so the first one separates the bounds
        let (q, b) = body
            .split_once('=')
            .ok_or_else(|| at(Error::parse(0, "missing '= <bounds>'")))?;
        let quantity = parse_quantity(q, Context::Free, alphabet).map_err(at)?;
        let interval = parse_bounds(b).map_err(at)?;
        out.push(FactLine {
            quantity,
            interval,
            label: if label.is_empty() { format!("line {}", i + 1) } else { label.to_string() },
        });
    }
    Ok(out)
}

pub fn format_fact_line(f: &FactLine, alphabet: &Alphabet) -> String {
    let lo = super::interval::fmt_rational(f.interval.lo());
    let hi = match f.interval.hi() {
        Some(h) if h == f.interval.lo() => "=".to_string(),
        Some(h) => super::interval::fmt_rational(h),
        None => "inf".to_string(),
    };
    format!("{} = {lo} / {hi} # {}", f.quantity.to_spec(alphabet), f.label)
}

/// Add every line of `text` to `db` as a seed.
pub fn seed_db(db: &mut Db, text: &str) -> Result<Vec<FactId>> {
    let lines = parse_facts(text, db.alphabet_mut())?;
    lines
        .into_iter()
        .map(|l| db.add_fact(l.quantity, l.interval, Provenance::Seed { label: l.label }))
        .collect()
}

pub fn seed_db_from_file(db: &mut Db, path: &Path) -> Result<Vec<FactId>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    seed_db(db, &text)
}
