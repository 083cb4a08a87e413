//! Flow-map and setting documents.
//!
//! A map document looks like
//! `{"variables":["v","w"],"maps":{"w":[{"c":"6","e":{"v":1,"w":1}}]}}`.
//! Writing is canonical: variables sorted, terms by ascending total degree
//! then descending exponents, zero exponents omitted, so equal maps give
//! equal bytes and hashes.

use std::collections::BTreeMap;

use flowmap_core::{Coeff, FlowMap, Polynomial, Setting};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Key that may carry run metadata; readers ignore it.
pub const PROVENANCE_KEY: &str = "provenance";

fn schema(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {msg}"))
}

fn check_name(path: &str, name: &str) -> Result<(), CliError> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(schema(
            path,
            format!("`{name}` is not a valid location name (letters, digits, `_`, `-`, `.`)"),
        ))
    }
}

fn object<'a>(
    v: &'a Value,
    path: &str,
    allowed: &[&str],
) -> Result<&'a Map<String, Value>, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(path, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(path, format!("unexpected key `{k}`")));
    }
    Ok(obj)
}

/// Parses a map document.
pub fn map_from_str(text: &str) -> Result<FlowMap, CliError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("not valid JSON: {e}")))?;
    map_from_value(&doc)
}

pub fn map_from_value(doc: &Value) -> Result<FlowMap, CliError> {
    let top = object(doc, "document", &["variables", "maps", PROVENANCE_KEY])?;
    let vars_v = top
        .get("variables")
        .ok_or_else(|| schema("document", "missing `variables`"))?;
    let vars_a = vars_v
        .as_array()
        .ok_or_else(|| schema("variables", "expected an array of names"))?;
    if vars_a.is_empty() {
        return Err(schema("variables", "at least one variable is needed"));
    }
    let mut vars = Vec::with_capacity(vars_a.len());
    for (i, v) in vars_a.iter().enumerate() {
        let path = format!("variables[{i}]");
        let name = v
            .as_str()
            .ok_or_else(|| schema(&path, "expected a string"))?;
        check_name(&path, name)?;
        if vars.iter().any(|x: &String| x == name) {
            return Err(schema(&path, format!("`{name}` listed twice")));
        }
        vars.push(name.to_string());
    }
    let maps_v = top
        .get("maps")
        .ok_or_else(|| schema("document", "missing `maps`"))?;
    let maps = maps_v
        .as_object()
        .ok_or_else(|| schema("maps", "expected an object"))?;
    if let Some(k) = maps.keys().find(|k| !vars.contains(k)) {
        return Err(schema("maps", format!("`{k}` is not a declared variable")));
    }
    let mut comps = Vec::with_capacity(vars.len());
    for var in &vars {
        let path = format!("maps.{var}");
        let terms_v = maps
            .get(var)
            .ok_or_else(|| schema("maps", format!("missing component `{var}`")))?;
        let terms_a = terms_v
            .as_array()
            .ok_or_else(|| schema(&path, "expected an array of terms"))?;
        let mut terms = Vec::with_capacity(terms_a.len());
        for (i, t) in terms_a.iter().enumerate() {
            let tp = format!("{path}[{i}]");
            let obj = object(t, &tp, &["c", "e"])?;
            let c_text = obj
                .get("c")
                .ok_or_else(|| schema(&tp, "missing `c`"))?
                .as_str()
                .ok_or_else(|| {
                    schema(
                        &format!("{tp}.c"),
                        "coefficients are strings such as \"6\", \"-1/3\" or \"0.25\"",
                    )
                })?;
            let c: Coeff = c_text.parse().map_err(|e| schema(&format!("{tp}.c"), e))?;
            let mut exps = vec![0u32; vars.len()];
            if let Some(e) = obj.get("e") {
                let ep = format!("{tp}.e");
                let e = e
                    .as_object()
                    .ok_or_else(|| schema(&ep, "expected an object of exponents"))?;
                for (name, k) in e {
                    let idx = vars.iter().position(|v| v == name).ok_or_else(|| {
                        schema(&ep, format!("`{name}` is not a declared variable"))
                    })?;
                    let k = k
                        .as_u64()
                        .and_then(|k| u32::try_from(k).ok())
                        .ok_or_else(|| {
                            schema(
                                &format!("{ep}.{name}"),
                                "exponents are non-negative integers",
                            )
                        })?;
                    exps[idx] = k;
                }
            }
            terms.push((exps, c));
        }
        let poly = Polynomial::from_terms(&vars, terms).map_err(|e| schema(&path, e))?;
        comps.push((var.clone(), poly));
    }
    FlowMap::new(&vars, comps).map_err(|e| schema("document", e))
}

/// Canonical document for `f`.
pub fn map_to_value(f: &FlowMap) -> Value {
    let mut sorted: Vec<String> = f.variables().to_vec();
    sorted.sort();
    let f = f.reorder(&sorted).expect("same variables");
    let mut maps = Map::new();
    for (var, p) in sorted.iter().zip(f.components()) {
        let terms: Vec<Value> = p
            .graded_terms()
            .into_iter()
            .map(|(e, c)| {
                let e: BTreeMap<&str, u32> = sorted
                    .iter()
                    .zip(e)
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| (v.as_str(), k))
                    .collect();
                json!({"c": c.to_string(), "e": e})
            })
            .collect();
        maps.insert(var.clone(), Value::Array(terms));
    }
    json!({"variables": sorted, "maps": maps})
}

/// Canonical compact text; the basis of [`map_hash`].
pub fn map_to_string(f: &FlowMap) -> String {
    serde_json::to_string(&map_to_value(f)).expect("serialisable")
}

/// Pretty document with a provenance block, as written to disk.
pub fn map_to_pretty(f: &FlowMap, provenance: Option<&Value>) -> String {
    let mut doc = map_to_value(f);
    if let Some(p) = provenance {
        doc[PROVENANCE_KEY] = p.clone();
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
    s.push('\n');
    s
}

/// SHA-256 of the canonical text, hex encoded.
pub fn map_hash(f: &FlowMap) -> String {
    sha256_hex(map_to_string(f).as_bytes())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses `{"name":..,"multipliers":{..}}` against the map's variables.
pub fn setting_from_str(text: &str, vars: &[String]) -> Result<Setting, CliError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("not valid JSON: {e}")))?;
    let top = object(&doc, "setting", &["name", "multipliers", PROVENANCE_KEY])?;
    let name = top
        .get("name")
        .ok_or_else(|| schema("setting", "missing `name`"))?
        .as_str()
        .ok_or_else(|| schema("setting.name", "expected a string"))?;
    let mult = top
        .get("multipliers")
        .ok_or_else(|| schema("setting", "missing `multipliers`"))?
        .as_object()
        .ok_or_else(|| schema("setting.multipliers", "expected an object"))?;
    let mut table = Vec::with_capacity(mult.len());
    for (k, v) in mult {
        let m = v
            .as_f64()
            .ok_or_else(|| schema(&format!("setting.multipliers.{k}"), "expected a number"))?;
        table.push((k.clone(), m));
    }
    Setting::custom(name, vars, &table).map_err(|e| schema("setting.multipliers", e))
}

pub fn setting_to_value(g: &Setting) -> Value {
    let m: BTreeMap<&str, f64> = g
        .variables()
        .iter()
        .map(String::as_str)
        .zip(g.multipliers().iter().copied())
        .collect();
    json!({"name": g.name(), "multipliers": m})
}

#[cfg(test)]
mod tests {
    use super::*;
    use flowmap_core::models;

    #[test]
    fn canonical_form_sorts_and_round_trips() {
        let f = models::uv_example();
        let text = map_to_string(&f);
        let back = map_from_str(&text).unwrap();
        assert_eq!(map_to_string(&back), text);
        assert!(
            text.starts_with(r#"{"variables":["u","v"],"maps":{"u":["#),
            "{text}"
        );
    }

    #[test]
    fn duplicate_terms_merge_and_zero_exponents_vanish() {
        let text = r#"{"variables":["x"],"maps":{"x":[{"c":"1","e":{"x":2}},{"c":"1/2","e":{"x":2}},{"c":"3","e":{"x":0}}]}}"#;
        let f = map_from_str(text).unwrap();
        assert_eq!(
            map_to_string(&f),
            r#"{"variables":["x"],"maps":{"x":[{"c":"3","e":{}},{"c":"3/2","e":{"x":2}}]}}"#
        );
    }

    #[test]
    fn schema_errors_name_the_field() {
        let cases = [
            (r#"{"variables":["x"]}"#, "missing `maps`"),
            (
                r#"{"variables":["x"],"maps":{"x":[{"c":6}]}}"#,
                "maps.x[0].c",
            ),
            (
                r#"{"variables":["x"],"maps":{"x":[{"c":"1","e":{"y":1}}]}}"#,
                "maps.x[0].e",
            ),
            (
                r#"{"variables":["x"],"maps":{"x":[{"c":"1","e":{"x":-1}}]}}"#,
                "maps.x[0].e.x",
            ),
            (r#"{"variables":["x","x"],"maps":{}}"#, "variables[1]"),
            (
                r#"{"variables":["x"],"maps":{"x":[]},"extra":1}"#,
                "unexpected key `extra`",
            ),
            (
                r#"{"variables":["x"],"maps":{"x":[{"c":"1/0"}]}}"#,
                "maps.x[0].c",
            ),
        ];
        for (text, needle) in cases {
            let e = map_from_str(text).unwrap_err().to_string();
            assert!(e.contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn provenance_is_ignored() {
        let f = models::one_parameter(12, 1);
        let text = map_to_pretty(&f, Some(&json!({"seed": 3})));
        assert_eq!(map_hash(&map_from_str(&text).unwrap()), map_hash(&f));
    }

    #[test]
    fn setting_document() {
        let vars: Vec<String> = ["1", "2", "w", "1m", "p"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let text = r#"{"name":"steane","multipliers":{"1":1,"2":1,"w":0.1,"1m":1,"p":1}}"#;
        let g = setting_from_str(text, &vars).unwrap();
        assert_eq!(g.multiplier("w"), Some(0.1));
        let back = setting_from_str(&setting_to_value(&g).to_string(), &vars).unwrap();
        assert_eq!(back, g);
        assert!(setting_from_str(r#"{"name":"x","multipliers":{"1":1}}"#, &vars).is_err());
    }
}
