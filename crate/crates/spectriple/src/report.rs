//! Check results and the JSON report shared by every command.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Residual for numeric checks, `None` for boolean checks.
    pub residual: Option<f64>,
    /// Outcome for boolean checks, `None` for numeric checks.
    pub value: Option<bool>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Passes iff `residual ≤ tolerance` (NaN fails).
    pub fn residual(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual: Some(residual),
            value: None,
            tolerance: Some(tolerance),
            pass: residual <= tolerance,
        }
    }

    pub fn boolean(name: impl Into<String>, value: bool) -> Self {
        Self {
            name: name.into(),
            residual: None,
            value: Some(value),
            tolerance: None,
            pass: value,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            data: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.into(), to_value(value));
        self
    }

    pub fn datum(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.data.insert(key.into(), to_value(value));
        self
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn residual(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> &mut Self {
        self.push(Check::residual(name, residual, tolerance))
    }

    pub fn boolean(&mut self, name: impl Into<String>, value: bool) -> &mut Self {
        self.push(Check::boolean(name, value))
    }

    /// Appends the checks of `other` with names prefixed by its command.
    pub fn absorb(&mut self, other: Report) {
        for mut c in other.checks {
            c.name = format!("{}: {}", other.command, c.name);
            self.checks.push(c);
        }
        self.data.insert(other.command, to_value(other.data));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Aligned text table of the checks.
    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(5).max(5);
        let mut out = format!("{}\n", self.command);
        for (k, v) in &self.parameters {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        out.push_str(&format!("{:<width$}  {:>12}  {:>9}  {}\n", "check", "value", "tol", "status"));
        for c in &self.checks {
            let value = match (c.residual, c.value) {
                (Some(r), _) => format!("{r:.3e}"),
                (None, Some(b)) => b.to_string(),
                _ => "-".into(),
            };
            let tol = c.tolerance.map(|t| format!("{t:.0e}")).unwrap_or_else(|| "-".into());
            let status = if c.pass { "pass" } else { "FAIL" };
            out.push_str(&format!("{:<width$}  {value:>12}  {tol:>9}  {status}\n", c.name));
        }
        let failed = self.failures().len();
        out.push_str(&format!("{} checks, {} failed", self.checks.len(), failed));
        if let Some(ms) = self.wall_time_ms {
            out.push_str(&format!(", {ms} ms"));
        }
        out.push('\n');
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}
