use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::spec::Format;
use crate::derham::{CohomologyTable, Verdict};
use crate::error::{JetError, Result};

pub const SCHEMA: &str = "jetforge-report/1";

/// Where a failing check was observed: named coordinates such as `n`, `grade`, `row`, `col`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub coords: BTreeMap<String, i64>,
    pub detail: String,
}

impl Witness {
    pub fn new(check: &str, coords: &[(&str, i64)], detail: impl Into<String>) -> Self {
        Witness {
            check: check.to_string(),
            coords: coords.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            detail: detail.into(),
        }
    }
}

/// Machine-readable result of one run. Dimensions are exact integers; there is no timing
/// field, so identical specs give identical bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub meta: BTreeMap<String, String>,
    /// Table name to `"H[n][grade]"` (or similar) to dimension.
    pub tables: BTreeMap<String, BTreeMap<String, u64>>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(meta: BTreeMap<String, String>) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            meta,
            tables: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn add_cohomology(&mut self, name: &str, t: &CohomologyTable) {
        let entries = self.tables.entry(name.to_string()).or_default();
        for (n, row) in t.dims.iter().enumerate() {
            for (g, d) in row.iter().enumerate() {
                entries.insert(format!("H[{n}][{g}]"), *d as u64);
            }
        }
    }

    pub fn set(&mut self, table: &str, key: String, value: usize) {
        self.tables.entry(table.to_string()).or_default().insert(key, value as u64);
    }

    /// The worst verdict: any FAIL fails, otherwise any DIAGNOSTIC is diagnostic.
    pub fn overall(&self) -> Verdict {
        if self.verdicts.values().any(|v| *v == Verdict::Fail) {
            Verdict::Fail
        } else if self.verdicts.values().any(|v| *v == Verdict::Diagnostic) {
            Verdict::Diagnostic
        } else {
            Verdict::Pass
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| JetError::Emit(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.render_csv(),
            Format::Text => Ok(self.render_text()),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| JetError::Emit(e.to_string());
        w.write_record(["section", "name", "key", "value"]).map_err(err)?;
        w.write_record(["schema", "", "", self.schema.as_str()]).map_err(err)?;
        for (k, v) in &self.meta {
            w.write_record(["meta", "", k, v]).map_err(err)?;
        }
        for (t, rows) in &self.tables {
            for (k, v) in rows {
                w.write_record(["table", t, k, &v.to_string()]).map_err(err)?;
            }
        }
        for (k, v) in &self.verdicts {
            w.write_record(["verdict", "", k, verdict_name(*v)]).map_err(err)?;
        }
        for wi in &self.witnesses {
            let coords: Vec<String> = wi.coords.iter().map(|(k, v)| format!("{k}={v}")).collect();
            w.write_record(["witness", &wi.check, &coords.join(";"), &wi.detail]).map_err(err)?;
        }
        for n in &self.notes {
            w.write_record(["note", "", "", n]).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| JetError::Emit(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| JetError::Emit(e.to_string()))
    }

    fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.schema);
        for (k, v) in &self.meta {
            if k != "spec" {
                let _ = writeln!(s, "{k:>14}: {v}");
            }
        }
        for (t, rows) in &self.tables {
            let _ = writeln!(s, "\n[{t}]");
            for (k, v) in rows {
                let _ = writeln!(s, "  {k} = {v}");
            }
        }
        let _ = writeln!(s);
        for (k, v) in &self.verdicts {
            let _ = writeln!(s, "{:<11} {k}", verdict_name(*v).to_uppercase());
        }
        for w in &self.witnesses {
            let coords: Vec<String> = w.coords.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "  witness {}: {} ({})", w.check, coords.join(", "), w.detail);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// Writes `report.<ext>` into `dir` and returns its path.
    pub fn emit(&self, format: Format, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("report.{}", format.extension()));
        std::fs::write(&path, self.render(format)?)?;
        Ok(path)
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Diagnostic => "diagnostic",
    }
}
