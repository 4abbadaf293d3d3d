//! JSON forms of engine values. Counts are decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use polylat::enumerate::{EnumerationSummary, Histogram, TopologyTable};
use polylat::statmech::{CombSurfaceCheck, ThermoResult};
use polylat::{EnsembleSpec, TopologyKey};
use serde_json::{json, Map, Value};

use crate::{Failure, Outcome, SCHEMA_ID};

/// Header shared by every document.
pub fn header(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA_ID.into());
    m.insert("engine".into(), polylat::ENGINE_VERSION.into());
    m.insert("command".into(), command.into());
    m
}

pub fn spec(s: &EnsembleSpec) -> Value {
    json!({
        "class": s.class.as_str(),
        "d": s.d,
        "N": s.size,
        "boundary": s.boundary.as_str(),
        "convention": s.convention.as_str(),
    })
}

fn bad(what: &str) -> Failure {
    Failure::Internal(format!("malformed cached document: {what}"))
}

pub fn spec_from(v: &Value) -> Outcome<EnsembleSpec> {
    let s = |k: &str| v[k].as_str().ok_or_else(|| bad(k));
    let u = |k: &str| v[k].as_u64().map(|x| x as usize).ok_or_else(|| bad(k));
    Ok(EnsembleSpec::new(
        s("class")?.parse()?,
        u("d")?,
        u("N")?,
        s("boundary")?.parse()?,
        s("convention")?.parse()?,
    )?)
}

pub fn histogram(h: &Histogram) -> Value {
    h.iter().map(|(k, c)| json!({ "k": k, "count": c.to_string() })).collect()
}

pub fn histogram_from(v: &Value) -> Outcome<Histogram> {
    let rows = v.as_array().ok_or_else(|| bad("histogram"))?;
    rows.iter()
        .map(|r| {
            let k = r["k"].as_u64().ok_or_else(|| bad("k"))? as usize;
            let c: BigUint = r["count"].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("count"))?;
            Ok((k, c))
        })
        .collect()
}

pub fn topologies(t: &TopologyTable) -> Value {
    t.classes
        .iter()
        .map(|(key, h)| {
            let mut m = Map::new();
            m.insert("key".into(), key.to_string().into());
            if let Some(sig) = key.comb_signature() {
                m.insert("signature".into(), sig.to_string().into());
            }
            m.insert("total".into(), h.total().to_string().into());
            m.insert("histogram".into(), histogram(h));
            Value::Object(m)
        })
        .collect()
}

pub fn table_from(spec: EnsembleSpec, v: &Value) -> Outcome<TopologyTable> {
    let rows = v.as_array().ok_or_else(|| bad("topologies"))?;
    let mut classes = BTreeMap::new();
    for r in rows {
        let key: TopologyKey = r["key"].as_str().ok_or_else(|| bad("key"))?.parse()?;
        classes.insert(key, histogram_from(&r["histogram"])?);
    }
    Ok(TopologyTable { spec, classes })
}

/// Enumeration document; `table` adds the per-topology breakdown.
pub fn summary_doc(s: &EnumerationSummary, table: Option<&TopologyTable>) -> Value {
    let mut m = header("enumerate");
    m.insert("spec".into(), spec(&s.spec));
    m.insert("total".into(), s.total.to_string().into());
    m.insert("visit_histogram".into(), histogram(&s.visit_histogram));
    if let Some(t) = table {
        m.insert("topologies".into(), topologies(t));
    }
    Value::Object(m)
}

pub fn summary_from(v: &Value) -> Outcome<EnumerationSummary> {
    let spec = spec_from(&v["spec"])?;
    let visit_histogram = histogram_from(&v["visit_histogram"])?;
    let total = v["total"].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("total"))?;
    Ok(EnumerationSummary { spec, total, visit_histogram, wall_time: 0.0 })
}

/// Non-finite floats become `null`.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn thermo_doc(
    command: &str,
    r: &ThermoResult,
    t: &TopologyTable,
    comb: Option<&CombSurfaceCheck>,
    with_table: bool,
) -> Value {
    let mut m = header(command);
    m.insert("spec".into(), spec(&r.spec));
    m.insert("total".into(), t.total().to_string().into());
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|w| {
            json!({
                "beta": w.beta,
                "Z": w.z.to_string(),
                "F": num(w.f),
                "FQ": num(w.fq),
                "E_sigma": num(w.e_sigma),
                "EQ_sigma": num(w.eq_sigma),
                "dF": num(w.df),
                "dFQ": num(w.dfq),
            })
        })
        .collect();
    m.insert("rows".into(), rows.into());
    let c = &r.checks;
    let mut failures = c.failures();
    let mut checks = Map::new();
    if let Some(cs) = comb {
        failures.extend(cs.violations.iter().map(|v| format!("comb surface bound: {v}")));
        checks.insert(
            "comb_surface".into(),
            json!({ "all_pass": cs.violations.is_empty(), "classes": cs.classes, "violations": cs.violations }),
        );
    }
    let mut out = Map::new();
    out.insert("all_pass".into(), failures.is_empty().into());
    out.insert("failures".into(), failures.into());
    out.insert("z0_exact".into(), c.z0_exact.map_or(Value::Null, Value::Bool));
    out.insert("min_second_difference".into(), num(c.min_second_difference));
    out.insert("max_fd_error".into(), num(c.max_fd_error));
    out.insert("min_jensen_margin".into(), num(c.min_jensen_margin));
    out.insert("e_sigma_monotone".into(), c.e_sigma_monotone.into());
    out.insert("e_sigma_in_range".into(), c.e_sigma_in_range.into());
    out.insert("animal_bound_margin".into(), opt(c.animal_bound_margin));
    out.insert("nonpositive_margin".into(), opt(c.nonpositive_margin));
    out.extend(checks);
    m.insert("checks".into(), Value::Object(out));
    if with_table {
        m.insert("topologies".into(), topologies(t));
    }
    Value::Object(m)
}

/// Exactly the statmech CSV columns.
pub const CSV_HEADER: &str = "class,d,N,boundary,convention,beta,Z,F,FQ,E_sigma,EQ_sigma,dF,dFQ";

pub fn thermo_csv(r: &ThermoResult) -> String {
    let s = &r.spec;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for w in &r.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            s.class, s.d, s.size, s.boundary, s.convention, w.beta, w.z, w.f, w.fq, w.e_sigma, w.eq_sigma, w.df, w.dfq
        ));
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
