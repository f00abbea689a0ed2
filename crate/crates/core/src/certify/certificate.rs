//! The certificate record and its JSON form.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::search::SearchReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Identifiable,
    NotIdentifiable,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub verdict: Verdict,
    pub data: BTreeMap<String, Value>,
}

impl CheckEntry {
    pub fn new(name: &str, verdict: Verdict) -> Self {
        CheckEntry { name: name.into(), verdict, data: BTreeMap::new() }
    }

    pub fn pass_if(name: &str, ok: bool) -> Self {
        Self::new(name, if ok { Verdict::Pass } else { Verdict::Fail })
    }

    pub fn with<T: Serialize>(mut self, key: &str, value: T) -> Self {
        let v = serde_json::to_value(value).expect("serializable check data");
        self.data.insert(key.into(), v);
        self
    }
}

/// A verified second decomposition, at the level of ideals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessRecord {
    /// Coordinates of G in the W basis.
    pub w_coordinates: Vec<String>,
    /// Coefficients of G in the monomial basis of degree 4.
    pub quartic: Vec<String>,
    /// `μ` with `Φ = μ Φ(G)`.
    pub scale: String,
    pub found_by: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub format: String,
    pub tool_version: String,
    pub field: String,
    /// "characteristic zero", or "char-p analogue" for prime-field instances.
    pub scope: String,
    pub length: usize,
    pub status: Status,
    pub reason: Option<String>,
    pub rank_certified: Option<usize>,
    pub seed: u64,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<CheckEntry>,
    pub witness: Option<WitnessRecord>,
    pub search: Option<SearchReport>,
}

impl Certificate {
    pub const FORMAT: &'static str = "waring-cert/certificate/v1";

    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// JSON with every number written as a string.
    pub fn to_json(&self) -> String {
        let v = stringify_numbers(serde_json::to_value(self).expect("serializable certificate"));
        let mut s = serde_json::to_string_pretty(&v).expect("json");
        s.push('\n');
        s
    }
}

pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_become_strings() {
        let e = CheckEntry::new("x", Verdict::Pass).with("n", 43758u64).with("list", vec![1, 2]).with("ok", true);
        let v = stringify_numbers(serde_json::to_value(&e).unwrap());
        assert_eq!(v["data"]["n"], Value::String("43758".into()));
        assert_eq!(v["data"]["list"][1], Value::String("2".into()));
        assert_eq!(v["data"]["ok"], Value::Bool(true));
        assert_eq!(v["verdict"], Value::String("pass".into()));
    }
}
