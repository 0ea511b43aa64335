//! JSON files for spectra, ideals, length functions and localizing systems.
//!
//! Rationals are strings `"p/q"` (integers are also accepted as numbers) and
//! the infinite value is `"inf"`. The zero prime is named `"(0)"`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::gamma::{format_rational, parse_rational, GammaValue, Rational};
use crate::ideals::{Cut, IdealDescriptor, OneDimIdeal};
use crate::lengths::CanonicalLengthFn;
use crate::locsys::{spectral_system, zero_locus, LocalizingSystem};
use crate::spectrum::{PieceKind, PrimeId, PrimeNode, SpectrumTree};
use crate::zmod::{FgZModule, ZIdeal, ZLengthFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    /// Unreadable or malformed input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input that violates a mathematical condition.
    #[error("validation error: {0}")]
    Semantic(String),
}

type Result<T> = std::result::Result<T, IoError>;

fn parse_err(msg: impl Into<String>) -> IoError {
    IoError::Parse(msg.into())
}

fn semantic(msg: impl ToString) -> IoError {
    IoError::Semantic(msg.to_string())
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn object<'a>(v: &'a Value, what: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let m = v.as_object().ok_or_else(|| parse_err(format!("{what} must be an object")))?;
    if let Some(k) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(parse_err(format!("unexpected key {k:?} in {what}")));
    }
    Ok(m)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| parse_err(format!("{what} is missing {key:?}")))
}

fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(format!("{what} must be a string")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

pub fn parse_rational_value(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|_| parse_err(format!("{what}: bad rational {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("i64").into())),
        _ => Err(parse_err(format!("{what} must be a rational string \"p/q\""))),
    }
}

pub fn parse_gamma_value(v: &Value, what: &str) -> Result<GammaValue> {
    if v.as_str().map(str::trim) == Some("inf") {
        return Ok(GammaValue::Infinity);
    }
    GammaValue::finite(parse_rational_value(v, what)?).map_err(|_| semantic(format!("{what} is negative")))
}

pub fn gamma_to_json(g: &GammaValue) -> Value {
    Value::String(g.to_string())
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn parse_spectrum(v: &Value) -> Result<SpectrumTree> {
    let m = object(v, "spectrum", &["nodes"])?;
    let mut nodes = Vec::new();
    for (k, n) in array(field(m, "nodes", "spectrum")?, "nodes")?.iter().enumerate() {
        let what = format!("node {k}");
        let o = object(n, &what, &["id", "parent", "kind"])?;
        let id = string(field(o, "id", &what)?, "id")?;
        let parent = match o.get("parent") {
            None | Some(Value::Null) => None,
            Some(p) => Some(string(p, "parent")?),
        };
        let kind_name = string(field(o, "kind", &what)?, "kind")?;
        let kind = PieceKind::parse(kind_name).ok_or_else(|| parse_err(format!("{what}: unknown kind {kind_name:?}")))?;
        nodes.push(PrimeNode::new(id, parent, kind));
    }
    SpectrumTree::from_nodes(&nodes).map_err(semantic)
}

pub fn spectrum_to_json(tree: &SpectrumTree) -> Value {
    let nodes: Vec<Value> = tree
        .to_nodes()
        .iter()
        .map(|n| json!({"id": n.id, "parent": n.parent, "kind": n.kind.as_str()}))
        .collect();
    json!({ "nodes": nodes })
}

fn prime(tree: &SpectrumTree, v: &Value) -> Result<PrimeId> {
    tree.lookup(string(v, "prime id")?).map_err(semantic)
}

/// A length-function file: a canonical form on a tree, or one of the two
/// descriptors on the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LengthFnFile {
    Canonical(CanonicalLengthFn),
    RankMultiple(Rational),
    ZWeights(ZLengthFn),
}

/// The canonical form needs the tree to resolve prime names; without one
/// only the integer descriptors parse.
pub fn parse_lengthfn(v: &Value, tree: Option<&SpectrumTree>) -> Result<LengthFnFile> {
    let m = v.as_object().ok_or_else(|| parse_err("length function must be an object"))?;
    if m.contains_key("rank_multiple") {
        let m = object(v, "length function", &["rank_multiple"])?;
        let alpha = parse_rational_value(&m["rank_multiple"], "rank_multiple")?;
        if alpha <= Rational::from_integer(0.into()) {
            return Err(semantic("rank_multiple must be positive"));
        }
        return Ok(LengthFnFile::RankMultiple(alpha));
    }
    if m.contains_key("z_weights") {
        let m = object(v, "length function", &["z_weights", "default"])?;
        let default = parse_gamma_value(field(m, "default", "length function")?, "default")?;
        let mut weights = Vec::new();
        for w in array(&m["z_weights"], "z_weights")? {
            let o = object(w, "weight", &["prime", "value"])?;
            let p = match field(o, "prime", "weight")? {
                Value::Number(n) if n.is_u64() => BigUint::from(n.as_u64().expect("u64")),
                Value::String(s) => s.parse().map_err(|_| parse_err(format!("bad prime {s:?}")))?,
                _ => return Err(parse_err("prime must be a positive integer")),
            };
            weights.push((p, parse_gamma_value(field(o, "value", "weight")?, "value")?));
        }
        let primes: BTreeSet<&BigUint> = weights.iter().map(|(p, _)| p).collect();
        if primes.len() != weights.len() {
            return Err(semantic("a prime is listed twice in z_weights"));
        }
        return ZLengthFn::infinite(weights, default).map(LengthFnFile::ZWeights).map_err(semantic);
    }
    let m = object(v, "length function", &["sigma_t", "sigma_i", "sigma_r", "sigma_v"])?;
    let tree = tree.ok_or_else(|| semantic("a canonical length function needs a spectrum"))?;
    let mut l = CanonicalLengthFn::zero();
    let ids = |key: &str| -> Result<Vec<PrimeId>> {
        match m.get(key) {
            None => Ok(Vec::new()),
            Some(a) => array(a, key)?.iter().map(|x| prime(tree, x)).collect(),
        }
    };
    let coeffs = |key: &str, name: &str| -> Result<Vec<(PrimeId, Rational)>> {
        let Some(a) = m.get(key) else { return Ok(Vec::new()) };
        array(a, key)?
            .iter()
            .map(|e| {
                let o = object(e, key, &["id", name])?;
                Ok((prime(tree, field(o, "id", key)?)?, parse_rational_value(field(o, name, key)?, name)?))
            })
            .collect()
    };
    let twice = |key: &str| semantic(format!("a prime is listed twice in {key}"));
    for p in ids("sigma_t")? {
        if !l.sigma_t.insert(p) {
            return Err(twice("sigma_t"));
        }
    }
    for p in ids("sigma_i")? {
        if !l.sigma_i.insert(p) {
            return Err(twice("sigma_i"));
        }
    }
    for (p, a) in coeffs("sigma_r", "alpha")? {
        if l.sigma_r.insert(p, a).is_some() {
            return Err(twice("sigma_r"));
        }
    }
    for (p, a) in coeffs("sigma_v", "lambda")? {
        if l.sigma_v.insert(p, a).is_some() {
            return Err(twice("sigma_v"));
        }
    }
    Ok(LengthFnFile::Canonical(l))
}

pub fn canonical_to_json(tree: &SpectrumTree, l: &CanonicalLengthFn) -> Value {
    let names = |s: &BTreeSet<PrimeId>| -> Vec<Value> { s.iter().map(|p| json!(tree.name(*p))).collect() };
    let coeffs = |m: &BTreeMap<PrimeId, Rational>, name: &str| -> Vec<Value> {
        m.iter()
            .map(|(p, a)| {
                let mut o = Map::new();
                o.insert("id".into(), json!(tree.name(*p)));
                o.insert(name.into(), rational_to_json(a));
                Value::Object(o)
            })
            .collect()
    };
    json!({
        "sigma_t": names(&l.sigma_t),
        "sigma_i": names(&l.sigma_i),
        "sigma_r": coeffs(&l.sigma_r, "alpha"),
        "sigma_v": coeffs(&l.sigma_v, "lambda"),
    })
}

pub fn z_length_to_json(l: &ZLengthFn) -> Value {
    match l {
        ZLengthFn::RankMultiple(a) => json!({ "rank_multiple": rational_to_json(a) }),
        ZLengthFn::InfiniteType { weights, default } => json!({
            "z_weights": weights
                .iter()
                .map(|(p, c)| json!({"prime": p.to_string(), "value": gamma_to_json(c)}))
                .collect::<Vec<_>>(),
            "default": gamma_to_json(default),
        }),
    }
}

fn cut_from(o: &Map<String, Value>) -> Result<Cut> {
    let gamma = parse_rational_value(field(o, "gamma", "component")?, "gamma")?;
    let inclusive = field(o, "inclusive", "component")?
        .as_bool()
        .ok_or_else(|| parse_err("inclusive must be a boolean"))?;
    Ok(Cut::raw(gamma, inclusive))
}

pub fn parse_ideal(v: &Value, tree: &SpectrumTree) -> Result<IdealDescriptor> {
    match v {
        Value::String(s) if s == "unit" => return Ok(IdealDescriptor::unit()),
        Value::String(s) if s == "zero" => return Ok(IdealDescriptor::Zero),
        Value::String(s) => return Err(parse_err(format!("unknown ideal {s:?}"))),
        _ => {}
    }
    let m = object(v, "ideal", &["components"])?;
    let mut comps = Vec::new();
    for c in array(field(m, "components", "ideal")?, "components")? {
        let o = object(c, "component", &["id", "gamma", "inclusive"])?;
        comps.push((prime(tree, field(o, "id", "component")?)?, cut_from(o)?));
    }
    IdealDescriptor::from_components(tree, comps).map_err(semantic)
}

pub fn ideal_to_json(tree: &SpectrumTree, i: &IdealDescriptor) -> Value {
    match i {
        IdealDescriptor::Zero => json!("zero"),
        IdealDescriptor::Proper(m) if m.is_empty() => json!("unit"),
        IdealDescriptor::Proper(m) => json!({
            "components": m
                .iter()
                .map(|(p, c)| json!({
                    "id": tree.name(*p),
                    "gamma": rational_to_json(c.gamma()),
                    "inclusive": c.is_inclusive(),
                }))
                .collect::<Vec<_>>()
        }),
    }
}

/// `"unit"`, `"zero"` or `{"generator": n}` for the ideal `nZ`.
pub fn parse_z_ideal(v: &Value) -> Result<ZIdeal> {
    match v {
        Value::String(s) if s == "unit" => Ok(ZIdeal(1)),
        Value::String(s) if s == "zero" => Ok(ZIdeal(0)),
        Value::Object(_) => {
            let m = object(v, "ideal", &["generator"])?;
            match field(m, "generator", "ideal")? {
                Value::Number(n) if n.is_u64() => Ok(ZIdeal(n.as_u64().expect("u64"))),
                Value::Number(n) if n.is_i64() => Ok(ZIdeal(n.as_i64().expect("i64").unsigned_abs())),
                _ => Err(parse_err("generator must be an integer")),
            }
        }
        _ => Err(parse_err("ideal must be \"unit\", \"zero\" or {\"generator\": n}")),
    }
}

pub fn z_ideal_to_json(i: ZIdeal) -> Value {
    match i.0 {
        0 => json!("zero"),
        1 => json!("unit"),
        n => json!({ "generator": n }),
    }
}

pub fn module_to_json(m: &FgZModule) -> Value {
    json!({
        "rank": m.rank(),
        "invariant_factors": m.invariant_factors().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    })
}

pub fn one_dim_ideal_to_json(i: &OneDimIdeal) -> Value {
    match i {
        OneDimIdeal::Unit => json!("unit"),
        OneDimIdeal::Zero => json!("zero"),
        OneDimIdeal::PrincipalNonunit => json!("principal_nonunit"),
        OneDimIdeal::FiniteSupport(m) => json!({
            "components": m
                .iter()
                .map(|(k, c)| json!({
                    "id": format!("M{k}"),
                    "gamma": rational_to_json(c.gamma()),
                    "inclusive": c.is_inclusive(),
                }))
                .collect::<Vec<_>>()
        }),
    }
}

/// Whether a length-function-or-system file holds a localizing system.
pub fn is_system(v: &Value) -> bool {
    v.as_object().is_some_and(|m| m.contains_key("spectral") || m.contains_key("zero_locus"))
}

/// `{"spectral": [ids]}` or `{"zero_locus": <singular canonical form>}`.
pub fn parse_system(v: &Value, tree: &SpectrumTree) -> Result<LocalizingSystem> {
    let m = object(v, "system", &["spectral", "zero_locus"])?;
    if m.len() != 1 {
        return Err(parse_err("system must have exactly one of \"spectral\", \"zero_locus\""));
    }
    if let Some(ids) = m.get("spectral") {
        let delta = array(ids, "spectral")?.iter().map(|x| prime(tree, x)).collect::<Result<BTreeSet<_>>>()?;
        return spectral_system(tree, &delta).map_err(semantic);
    }
    match parse_lengthfn(&m["zero_locus"], Some(tree))? {
        LengthFnFile::Canonical(l) => zero_locus(tree, &l).map_err(semantic),
        _ => Err(semantic("zero_locus needs a canonical length function")),
    }
}
