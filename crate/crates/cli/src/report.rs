use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

/// One audited inequality or invariant.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

/// A table destined for CSV, cells already formatted.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    /// Human-readable body for the default output mode.
    pub text: String,
    /// Overrides the checks table as `report.csv`.
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Self {
        Self {
            command: command.to_string(),
            params,
            result: Value::Null,
            checks: Vec::new(),
            text: String::new(),
            table: None,
        }
    }

    pub fn check(&mut self, id: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            id: id.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "checks": self.checks,
            "passed": self.passed(),
        })
    }

    fn checks_table(&self) -> Table {
        let mut t = Table::new(&["command", "check", "pass", "detail"]);
        for c in &self.checks {
            t.rows
                .push(vec![self.command.clone(), c.id.clone(), c.pass.to_string(), c.detail.clone()]);
        }
        t
    }

    pub fn render_text(&self) -> String {
        let mut s = self.text.clone();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            s.push_str(&format!("check {} {tag}: {}\n", c.id, c.detail));
        }
        s
    }

    /// Writes `report.json` and `report.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let json = serde_json::to_string_pretty(&self.to_json())? + "\n";
        fs::write(dir.join("report.json"), json)?;
        let table = self.table.clone().unwrap_or_else(|| self.checks_table());
        fs::write(dir.join("report.csv"), table.to_csv()?)?;
        Ok(())
    }
}

/// Twelve significant digits, trailing zeros trimmed, exponent form outside
/// `[1e-5, 1e12)`.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{e}")
    }
}
