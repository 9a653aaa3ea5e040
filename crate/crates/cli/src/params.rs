//! Flat `key = value` parameter files and `--set` overrides.

use std::collections::BTreeMap;

use toml::Value;

use crate::error::{usage, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Bool,
    FloatList,
    Text,
}

/// Every addressable setting.
pub const KEYS: &[(&str, Kind)] = &[
    ("heston.mu", Kind::Float),
    ("heston.v0", Kind::Float),
    ("heston.theta", Kind::Float),
    ("heston.kappa", Kind::Float),
    ("heston.xi", Kind::Float),
    ("heston.rho", Kind::Float),
    ("heston.c1", Kind::Float),
    ("seasonal.amplitude", Kind::Float),
    ("seasonal.frequency", Kind::Float),
    ("seasonal.phase", Kind::Float),
    ("seasonal.start_month", Kind::Int),
    ("shock.enabled", Kind::Bool),
    ("shock.expected_shocks", Kind::Float),
    ("shock.shape_b", Kind::Float),
    ("shock.eta", Kind::Float),
    ("shock.duration_months", Kind::Int),
    ("shock.alpha_low", Kind::Int),
    ("shock.alpha_high", Kind::Int),
    ("shock.suppress_retrigger", Kind::Bool),
    ("forecast.horizon_months", Kind::Int),
    ("forecast.n_sims", Kind::Int),
    ("forecast.master_seed", Kind::Int),
    ("forecast.start_year", Kind::Int),
    ("forecast.percentile_levels", Kind::FloatList),
    ("backtest.anchor", Kind::Bool),
    ("backtest.train", Kind::Text),
    ("backtest.test", Kind::Text),
    ("backtest.models", Kind::Text),
    ("sarima.order", Kind::Text),
];

/// Tables written for information only and skipped when a file is read back.
const INFORMATIONAL: &[&str] = &["run", "estimate", "amplitude_errors"];

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, kind)| *kind)
}

/// Validated settings keyed by dotted name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<String, Value>,
}

impl Params {
    pub fn parse_file(text: &str) -> CliResult<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| usage(format!("invalid parameter file: {e}")))?;
        let mut flat = Vec::new();
        flatten("", &Value::Table(table), &mut flat);
        let mut params = Self::default();
        for (key, value) in flat {
            if INFORMATIONAL.iter().any(|t| key.split('.').next() == Some(*t)) {
                continue;
            }
            params.insert(&key, value)?;
        }
        Ok(params)
    }

    /// Parses one `key=value` override.
    pub fn parse_assignment(&mut self, assignment: &str) -> CliResult<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| usage(format!("override {assignment:?} is not of the form key=value")))?;
        let (key, raw) = (key.trim(), raw.trim());
        if raw.ends_with('%') {
            return Err(percent_error(key));
        }
        let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
            Ok(mut t) => t.remove("v").expect("parsed key"),
            Err(_) => Value::String(raw.to_string()),
        };
        self.insert(key, value)
    }

    pub fn insert(&mut self, key: &str, value: Value) -> CliResult<()> {
        let kind = kind_of(key).ok_or_else(|| usage(format!("unknown parameter key {key:?}")))?;
        if let Value::String(s) = &value {
            if s.trim_end().ends_with('%') {
                return Err(percent_error(key));
            }
        }
        let ok = match kind {
            Kind::Float => value.as_float().is_some() || value.as_integer().is_some(),
            Kind::Int => value.as_integer().is_some_and(|i| i >= 0),
            Kind::Bool => value.as_bool().is_some(),
            Kind::FloatList => value
                .as_array()
                .is_some_and(|a| a.iter().all(|v| v.as_float().is_some() || v.as_integer().is_some())),
            Kind::Text => value.as_str().is_some(),
        };
        if !ok {
            return Err(usage(format!("parameter {key:?} expects {}, got {value}", describe(kind))));
        }
        self.values.insert(key.to_string(), value);
        Ok(())
    }

    /// Stores a value computed by the program; `key` must be known.
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.insert(key, value.into()).expect("resolved value matches its key");
    }

    pub fn set_floats(&mut self, key: &str, values: &[f64]) {
        self.set(key, Value::Array(values.iter().map(|&x| Value::Float(x)).collect()));
    }

    /// `key = value` lines in key order; floats round-trip exactly.
    pub fn render(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k} = {}\n", render_value(v))).collect()
    }

    pub fn remove(&mut self, key: &str) {
        self.values.remove(key);
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        self.values.get(key).and_then(|v| v.as_float().or_else(|| v.as_integer().map(|i| i as f64)))
    }

    pub fn int(&self, key: &str) -> Option<u64> {
        self.values.get(key).and_then(Value::as_integer).map(|i| i as u64)
    }

    pub fn boolean(&self, key: &str) -> Option<bool> {
        self.values.get(key).and_then(Value::as_bool)
    }

    pub fn floats(&self, key: &str) -> Option<Vec<f64>> {
        self.values.get(key).and_then(Value::as_array).map(|a| {
            a.iter().filter_map(|v| v.as_float().or_else(|| v.as_integer().map(|i| i as f64))).collect()
        })
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.values.get(key).and_then(Value::as_str)
    }
}

fn describe(kind: Kind) -> &'static str {
    match kind {
        Kind::Float => "a decimal number",
        Kind::Int => "a non-negative integer",
        Kind::Bool => "true or false",
        Kind::FloatList => "a list of numbers",
        Kind::Text => "a string",
    }
}

fn percent_error(key: &str) -> crate::error::CliError {
    usage(format!("parameter {key:?}: percent strings are not accepted; write rates as decimal fractions"))
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, Value)>) {
    match value {
        Value::Table(t) => {
            for (k, v) in t {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

pub fn render_value(value: &Value) -> String {
    match value {
        Value::Float(x) => toml_float(*x),
        Value::Array(items) => format!("[{}]", items.iter().map(render_value).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// A float rendered so that it reads back as a TOML float.
pub fn toml_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
