//! Reports and their two renderings.
//!
//! The JSON layout is versioned by [`REPORT_SCHEMA_VERSION`] and described
//! by `schema/report.schema.json`. Every value in a table cell is a string so
//! exact rationals and polynomials survive unchanged.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::args::{Format, JobConfig};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "hochcurve";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Cell at `row`, `column`, by column name.
    pub fn cell(&self, row: usize, column: &str) -> Option<&str> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row).map(|r| r[j].as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub config: JobConfig,
    pub tables: Vec<Table>,
    /// Scalar results, e.g. a dimension.
    pub summary: BTreeMap<String, String>,
    /// Stabilization and status flags, e.g. `stable`, `exact`, `passed`.
    pub flags: BTreeMap<String, bool>,
    /// Wall-clock milliseconds; only present with `--timing`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(config: JobConfig) -> Self {
        Report {
            tool: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: REPORT_SCHEMA_VERSION,
            config,
            tables: Vec::new(),
            summary: BTreeMap::new(),
            flags: BTreeMap::new(),
            timing_ms: None,
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// A report whose `passed` flag is false signals a failed check.
    pub fn failed(&self) -> bool {
        self.flags.get("passed") == Some(&false)
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => self.to_json(),
            Format::Table => self.to_table(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let r: Report = serde_json::from_str(s).map_err(|e| e.to_string())?;
        r.validate()?;
        Ok(r)
    }

    /// Structural checks mirroring the published schema.
    pub fn validate(&self) -> Result<(), String> {
        if self.tool != TOOL_NAME {
            return Err(format!("tool is '{}'", self.tool));
        }
        if self.version.is_empty() {
            return Err("empty version".into());
        }
        if self.schema != REPORT_SCHEMA_VERSION {
            return Err(format!("schema version {}", self.schema));
        }
        self.config.validate()?;
        let mut names: Vec<&str> = self.tables.iter().map(|t| t.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err("duplicate table names".into());
        }
        for t in &self.tables {
            if t.columns.is_empty() {
                return Err(format!("table '{}' has no columns", t.name));
            }
            if let Some(r) = t.rows.iter().find(|r| r.len() != t.columns.len()) {
                return Err(format!("table '{}': row of width {} under {} columns", t.name, r.len(), t.columns.len()));
            }
        }
        Ok(())
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}  {}", self.tool, self.version, self.config.command_name());
        let config = serde_json::to_string(&self.config.command).expect("configs serialize");
        let _ = writeln!(out, "config: {config}");
        let _ = writeln!(out, "seed: {}", self.config.seed);
        for t in &self.tables {
            out.push('\n');
            let _ = writeln!(out, "[{}]", t.name);
            render_grid(&mut out, t);
        }
        if !self.summary.is_empty() {
            out.push('\n');
            for (k, v) in &self.summary {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        if !self.flags.is_empty() {
            let flags: Vec<String> = self.flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "flags: {}", flags.join(" "));
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "time: {ms} ms");
        }
        out
    }
}

fn render_grid(out: &mut String, t: &Table) {
    if t.rows.is_empty() {
        let _ = writeln!(out, "(empty)");
        return;
    }
    let width = |s: &str| s.chars().count();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|j| t.rows.iter().map(|r| width(&r[j])).chain([width(&t.columns[j])]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - width(c))))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(&t.columns));
    for r in &t.rows {
        let _ = writeln!(out, "{}", line(r));
    }
}
