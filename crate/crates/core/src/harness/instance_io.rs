//! JSON format for weighted-coverage instances.
//!
//! ```json
//! { "n": 3, "m": 4, "costs": [..], "covers": [[..], ..], "weights": [..], "tau": 4.0 }
//! ```
//! `covers[x]` lists the universe items (in `0..m`) covered by element `x`.

use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::coverage::CoverageFunction;
use crate::error::{Error, Result};
use crate::oracle::Instance;

#[derive(Serialize)]
struct InstanceFile<'a> {
    n: usize,
    m: usize,
    costs: &'a [f64],
    covers: &'a [Vec<u32>],
    weights: &'a [f64],
    tau: f64,
}

/// Serialises with keys in the order `n, m, costs, covers, weights, tau`.
pub fn instance_to_json(instance: &Instance<CoverageFunction>) -> String {
    let f = instance.oracle();
    let file = InstanceFile {
        n: instance.n(),
        m: f.universe_size(),
        costs: instance.costs(),
        covers: f.covers(),
        weights: f.weights(),
        tau: instance.tau(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("instance serialises");
    text.push('\n');
    text
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::schema(name, "missing field"))
}

fn count(obj: &Map<String, Value>, name: &str) -> Result<usize> {
    field(obj, name)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::schema(name, "expected a non-negative integer"))
}

fn number(value: &Value, name: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| Error::schema(name, format!("expected a number, found {value}")))
}

fn numbers(obj: &Map<String, Value>, name: &str, len: usize) -> Result<Vec<f64>> {
    let items = field(obj, name)?
        .as_array()
        .ok_or_else(|| Error::schema(name, "expected an array"))?;
    if items.len() != len {
        return Err(Error::schema(
            name,
            format!("expected {len} entries, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, v)| number(v, &format!("{name}[{i}]")))
        .collect()
}

/// Parses and validates an instance.
pub fn instance_from_json(text: &str) -> Result<Instance<CoverageFunction>> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::schema("<root>", "expected a JSON object"))?;
    let n = count(obj, "n")?;
    let m = count(obj, "m")?;
    let costs = numbers(obj, "costs", n)?;
    let weights = numbers(obj, "weights", m)?;
    let tau = number(field(obj, "tau")?, "tau")?;

    let rows = field(obj, "covers")?
        .as_array()
        .ok_or_else(|| Error::schema("covers", "expected an array of arrays"))?;
    if rows.len() != n {
        return Err(Error::schema(
            "covers",
            format!("expected {n} entries, found {}", rows.len()),
        ));
    }
    let mut covers = Vec::with_capacity(n);
    for (x, row) in rows.iter().enumerate() {
        let items = row
            .as_array()
            .ok_or_else(|| Error::schema(format!("covers[{x}]"), "expected an array"))?;
        let mut list = Vec::with_capacity(items.len());
        for item in items {
            let j = item
                .as_u64()
                .ok_or_else(|| Error::schema(format!("covers[{x}]"), format!("bad item {item}")))?;
            if j as usize >= m {
                return Err(Error::schema(
                    format!("covers[{x}]"),
                    format!("item index {j} out of range for m = {m}"),
                ));
            }
            list.push(j as u32);
        }
        covers.push(list);
    }
    Instance::new(CoverageFunction::new(weights, covers)?, costs, tau)
}

pub fn read_instance(path: &Path) -> Result<Instance<CoverageFunction>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    instance_from_json(&text)
}

pub fn write_instance(path: &Path, instance: &Instance<CoverageFunction>) -> Result<()> {
    std::fs::write(path, instance_to_json(instance)).map_err(|e| Error::io(path, e))
}
