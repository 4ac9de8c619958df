//! Machine-readable experiment reports.
//!
//! Reports serialize with a fixed field order and sorted maps, so the same
//! configuration yields byte-identical JSON. Wall-clock timings break that,
//! which is why they are only attached on request.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    /// Informational checks never affect the exit status.
    pub asserted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            verdict: Verdict::from_bool(ok),
            asserted: true,
            value: None,
            tolerance: None,
            samples: None,
            stderr: None,
            detail: None,
        }
    }

    /// Passes when `value <= tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value <= tolerance).value(value).tolerance(tolerance)
    }

    pub fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn tolerance(mut self, t: f64) -> Self {
        self.tolerance = Some(t);
        self
    }

    pub fn samples(mut self, m: usize) -> Self {
        self.samples = Some(m);
        self
    }

    pub fn stderr(mut self, s: f64) -> Self {
        self.stderr = Some(s);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn informational(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value) -> Self {
        Self {
            command: command.into(),
            config,
            checks: Vec::new(),
            data: BTreeMap::new(),
            timings: None,
        }
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn data(&mut self, key: impl Into<String>, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data.insert(key.into(), v);
        self
    }

    pub fn timing(&mut self, key: impl Into<String>, seconds: f64) -> &mut Self {
        self.timings.get_or_insert_with(BTreeMap::new).insert(key.into(), seconds);
        self
    }

    /// True when every asserted check passes.
    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| c.asserted).all(Check::passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.asserted && !c.passed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn informational_checks_do_not_fail() {
        let mut r = Report::new("t", Value::Null);
        r.check(Check::below("a", 0.5, 1.0));
        r.check(Check::new("b", false).informational());
        assert!(r.passed());
        r.check(Check::below("c", 2.0, 1.0));
        assert!(!r.passed());
        assert_eq!(r.failed_checks().count(), 1);
    }

    #[test]
    fn json_is_stable() {
        let mut r = Report::new("t", serde_json::json!({"seed": 7}));
        r.data("z", 1).data("a", [1.0, 2.0]);
        let s = r.to_json();
        assert!(s.find("\"a\"").unwrap() < s.find("\"z\"").unwrap());
        assert_eq!(s, r.clone().to_json());
        assert!(!s.contains("timings"));
        assert!(s.contains("\"verdict\"") || r.checks.is_empty());
    }
}
