use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::{OpKind, SchemeSpec};
use crate::error::{Error, Result};

use OpKind::{T, W};

const COEFFICIENTS: &str = include_str!("../../data/coefficients.txt");

pub const CATALOG_NAMES: [&str; 10] =
    ["S1", "S2", "S4", "S4c", "S4RK", "S6-A", "S6-B", "S6-C", "S6star", "S6c"];

/// Parses `name = decimal` lines; `#` starts a comment.
///
/// Decimals are rounded to the nearest double.
pub fn parse_constants(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (name, value) = body
            .split_once('=')
            .ok_or_else(|| Error::Constants { line, msg: "expected `name = decimal`".into() })?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(Error::Constants { line, msg: format!("bad name `{name}`") });
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Constants { line, msg: format!("bad decimal `{}`", value.trim()) })?;
        if !v.is_finite() {
            return Err(Error::Constants { line, msg: "value must be finite".into() });
        }
        if out.insert(name.to_string(), v).is_some() {
            return Err(Error::Constants { line, msg: format!("duplicate name `{name}`") });
        }
    }
    Ok(out)
}

/// The built-in constants table.
pub fn constants() -> &'static BTreeMap<String, f64> {
    static TABLE: OnceLock<BTreeMap<String, f64>> = OnceLock::new();
    TABLE.get_or_init(|| parse_constants(COEFFICIENTS).expect("built-in constants parse"))
}

/// The decimal text of a built-in constant, exactly as stored.
pub fn constant_text(name: &str) -> Option<&'static str> {
    COEFFICIENTS.lines().find_map(|l| {
        let (k, v) = l.split('#').next()?.split_once('=')?;
        (k.trim() == name).then(|| v.trim())
    })
}

/// Looks up one built-in constant; panics on a missing name.
pub fn constant(name: &str) -> f64 {
    *constants().get(name).unwrap_or_else(|| panic!("missing constant {name}"))
}

fn strang(s: f64) -> [(OpKind, f64); 3] {
    [(W, 0.5 * s), (T, s), (W, 0.5 * s)]
}

fn compose_strang(weights: &[f64]) -> Vec<(OpKind, f64)> {
    weights.iter().flat_map(|&w| strang(w)).collect()
}

fn yoshida(set: char) -> Vec<f64> {
    let w = |k: u32| constant(&format!("yoshida.{set}.w{k}"));
    let (w1, w2, w3) = (w(1), w(2), w(3));
    let w0 = 1.0 - 2.0 * (w1 + w2 + w3);
    vec![w3, w2, w1, w0, w1, w2, w3]
}

fn suzuki() -> Vec<f64> {
    let (p2, p3) = (constant("suzuki.p2"), constant("suzuki.p3"));
    let inner = [p2, p2, 1.0 - 4.0 * p2, p2, p2];
    let outer = [p3, p3, 1.0 - 4.0 * p3, p3, p3];
    outer.iter().flat_map(|&o| inner.iter().map(move |&i| o * i)).collect()
}

fn blanes_moan() -> Vec<(OpKind, f64)> {
    let c = |k: &str| constant(&format!("blanes_moan.{k}"));
    let (a1, a2, a3) = (c("a1"), c("a2"), c("a3"));
    let (b1, b2) = (c("b1"), c("b2"));
    let a4 = 1.0 - 2.0 * (a1 + a2 + a3);
    let b3 = 0.5 - (b1 + b2);
    vec![
        (W, a1), (T, b1), (W, a2), (T, b2), (W, a3), (T, b3), (W, a4),
        (T, b3), (W, a3), (T, b2), (W, a2), (T, b1), (W, a1),
    ]
}

fn s6c() -> Vec<(OpKind, f64)> {
    let c = |k: u32| constant(&format!("s6c.c{k}"));
    let (c0, c1, c2, c3, c4) = (c(0), c(1), c(2), c(3), c(4));
    vec![
        (W, c4), (T, c3), (W, c2), (T, c1), (W, c0),
        (T, c1), (W, c2), (T, c3), (W, c4),
    ]
}

/// Named scheme from the catalog. `S6` is accepted as `S6-A`.
pub fn catalog(name: &str) -> Result<SchemeSpec> {
    let theta = constant("forest_ruth.theta");
    let (program, order, symmetric) = match name {
        "S1" => (vec![(T, 1.0), (W, 1.0)], 1, false),
        "S2" => (strang(1.0).to_vec(), 2, true),
        "S4" => (compose_strang(&[theta, 1.0 - 2.0 * theta, theta]), 4, true),
        "S4c" => (
            vec![(W, 1.0 / 6.0), (T, 0.5), (W, 2.0 / 3.0), (T, 0.5), (W, 1.0 / 6.0)],
            4,
            true,
        ),
        "S4RK" => (blanes_moan(), 4, true),
        "S6" | "S6-A" => (compose_strang(&yoshida('a')), 6, true),
        "S6-B" => (compose_strang(&yoshida('b')), 6, true),
        "S6-C" => (compose_strang(&yoshida('c')), 6, true),
        "S6star" => (compose_strang(&suzuki()), 6, true),
        "S6c" => (s6c(), 6, true),
        other => return Err(Error::UnknownScheme(other.to_string())),
    };
    let canonical = if name == "S6" { "S6-A" } else { name };
    SchemeSpec::from_program(canonical, &program, order, symmetric)
}
