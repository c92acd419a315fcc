//! The run-spec file format.
//!
//! One `key = value` per line; `#` starts a comment. Lists are written `[a, b, c]`, sequences
//! may also be written bare (`sigma = 2,1,1`). See `docs/spec-format.md` for the key table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Presentation};
use crate::error::{JetError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum Command {
    Cohomology,
    Rigidity,
    HolAcyclicity,
    ResolutionCheck,
    DiffDims,
}

impl Command {
    pub const ALL: [Command; 5] =
        [Command::Cohomology, Command::Rigidity, Command::HolAcyclicity, Command::ResolutionCheck, Command::DiffDims];

    pub fn name(self) -> &'static str {
        match self {
            Command::Cohomology => "cohomology",
            Command::Rigidity => "rigidity",
            Command::HolAcyclicity => "hol-acyclicity",
            Command::ResolutionCheck => "resolution-check",
            Command::DiffDims => "diff-dims",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}` (json, csv or text)")),
        }
    }
}

/// Coefficient module for `hol-acyclicity`: `A` itself, or `A` modulo the listed elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleChoice {
    #[default]
    Algebra,
    Quotient(Vec<String>),
}

/// A validated run description.
///
/// Defaults: `command = cohomology`, `sigma = [1]`, `tau` = `sigma`, `n_max = 2`,
/// `grade_max` = top of the window (the truncation, or 0 for a finite-dimensional algebra),
/// `k = 1`, `l_max = 2`, flags off, `module = A`, `format = json`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunSpec {
    pub algebra: AlgebraSpec,
    pub command: Command,
    pub sigma: Vec<u32>,
    pub tau: Option<Vec<u32>>,
    pub n_max: usize,
    pub grade_max: Option<usize>,
    pub k: usize,
    pub l_max: u32,
    pub paranoid: bool,
    pub general: bool,
    pub module: ModuleChoice,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunSpec {
    pub fn new(algebra: AlgebraSpec) -> Self {
        RunSpec {
            algebra,
            command: Command::Cohomology,
            sigma: vec![1],
            tau: None,
            n_max: 2,
            grade_max: None,
            k: 1,
            l_max: 2,
            paranoid: false,
            general: false,
            module: ModuleChoice::Algebra,
            out: None,
            format: Format::Json,
        }
    }

    pub fn tau(&self) -> &[u32] {
        self.tau.as_deref().unwrap_or(&self.sigma)
    }

    /// Top internal degree of the algebra window.
    pub fn window_top(&self) -> usize {
        match &self.algebra.presentation {
            Presentation::Graded { truncation, .. } => *truncation,
            Presentation::StructureConstants { .. } => 0,
        }
    }

    pub fn grade_max(&self) -> usize {
        self.grade_max.unwrap_or_else(|| self.window_top())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, seq) in [("sigma", Some(&self.sigma)), ("tau", self.tau.as_ref())] {
            let Some(seq) = seq else { continue };
            if seq.is_empty() {
                return Err(JetError::ValidationError(format!("{name} must be a non-empty sequence")));
            }
            if let Some(i) = seq.iter().position(|&s| s == 0) {
                return Err(JetError::ValidationError(format!(
                    "{name} must consist of positive integers, entry {} is 0",
                    i + 1
                )));
            }
        }
        let top = self.window_top();
        if self.grade_max() > top {
            return Err(JetError::ValidationError(format!(
                "grade_max = {} exceeds the margin: need grade_max <= truncation = {top}",
                self.grade_max()
            )));
        }
        if self.command == Command::ResolutionCheck && self.k == 0 {
            return Err(JetError::ValidationError("k must be at least 1".into()));
        }
        if let Presentation::Graded { generators, .. } = &self.algebra.presentation {
            if generators.is_empty() {
                return Err(JetError::ValidationError("ring needs at least one generator".into()));
            }
        }
        Ok(())
    }

    /// Canonical spec-file text; parsing it gives back `self`.
    pub fn to_spec_string(&self) -> String {
        let mut s = String::new();
        let list = |v: &[String]| format!("[{}]", v.join(", "));
        let seq = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match &self.algebra.presentation {
            Presentation::Graded { generators, relations, truncation } => {
                let _ = writeln!(s, "kind = graded");
                let _ = writeln!(s, "ring = Q[{}]", generators.join(","));
                if !relations.is_empty() {
                    let _ = writeln!(s, "relations = {}", list(relations));
                }
                let _ = writeln!(s, "truncation = {truncation}");
            }
            Presentation::StructureConstants { basis, products, generators } => {
                let _ = writeln!(s, "kind = finite_dimensional");
                let _ = writeln!(s, "basis = {}", list(basis));
                let _ = writeln!(s, "products = {}", list(products));
                if !generators.is_empty() {
                    let _ = writeln!(s, "generators = {}", list(generators));
                }
            }
        }
        let _ = writeln!(s, "assert_smooth = {}", self.algebra.assert_smooth);
        let _ = writeln!(s, "command = {}", self.command.name());
        let _ = writeln!(s, "sigma = {}", seq(&self.sigma));
        if let Some(t) = &self.tau {
            let _ = writeln!(s, "tau = {}", seq(t));
        }
        let _ = writeln!(s, "n_max = {}", self.n_max);
        if let Some(g) = self.grade_max {
            let _ = writeln!(s, "grade_max = {g}");
        }
        let _ = writeln!(s, "k = {}", self.k);
        let _ = writeln!(s, "l_max = {}", self.l_max);
        let _ = writeln!(s, "paranoid = {}", self.paranoid);
        let _ = writeln!(s, "general = {}", self.general);
        match &self.module {
            ModuleChoice::Algebra => {
                let _ = writeln!(s, "module = A");
            }
            ModuleChoice::Quotient(v) => {
                let _ = writeln!(s, "module = {}", list(v));
            }
        }
        if let Some(o) = &self.out {
            let _ = writeln!(s, "out = {}", o.display());
        }
        let _ = writeln!(s, "format = {}", self.format.name());
        s
    }

    /// The part of the spec that determines the computed report (output location excluded).
    pub fn computation_key(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.format = Format::Json;
        c.to_spec_string()
    }
}

pub fn parse_spec(path: &Path) -> Result<RunSpec> {
    let src = std::fs::read_to_string(path)?;
    parse_spec_str(&src)
}

struct Entry<'a> {
    line: usize,
    column: usize,
    value: &'a str,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> JetError {
    JetError::ParseError { line, column, message: message.into() }
}

const KEYS: [&str; 20] = [
    "kind",
    "ring",
    "relations",
    "truncation",
    "basis",
    "products",
    "generators",
    "assert_smooth",
    "command",
    "sigma",
    "tau",
    "n_max",
    "grade_max",
    "k",
    "l_max",
    "paranoid",
    "general",
    "module",
    "out",
    "format",
];

pub fn parse_spec_str(src: &str) -> Result<RunSpec> {
    let mut entries: BTreeMap<&str, Entry> = BTreeMap::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if body.trim().is_empty() {
            continue;
        }
        let Some(eq) = body.find('=') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(perr(line, col, "expected `key = value`"));
        };
        let key = body[..eq].trim();
        let key_col = body.len() - body.trim_start().len() + 1;
        if key.is_empty() {
            return Err(perr(line, key_col, "missing key before `=`"));
        }
        if let Some(p) = key.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')) {
            return Err(perr(line, key_col + p, format!("invalid character in key `{key}`")));
        }
        if !KEYS.contains(&key) {
            return Err(perr(line, key_col, format!("unknown key `{key}`")));
        }
        let rest = &body[eq + 1..];
        let value = rest.trim();
        let column = eq + 2 + (rest.len() - rest.trim_start().len());
        if value.is_empty() {
            return Err(perr(line, column, format!("missing value for `{key}`")));
        }
        if let Some(prev) = entries.get(key) {
            return Err(perr(line, key_col, format!("duplicate key `{key}` (first set on line {})", prev.line)));
        }
        entries.insert(key, Entry { line, column, value });
    }
    build(&entries)
}

fn build(e: &BTreeMap<&str, Entry>) -> Result<RunSpec> {
    let kind = e.get("kind").map(|x| x.value).unwrap_or_else(|| if e.contains_key("basis") { "finite_dimensional" } else { "graded" });
    let forbid = |keys: &[&str], kind: &str| -> Result<()> {
        for k in keys {
            if let Some(x) = e.get(k) {
                return Err(perr(x.line, 1, format!("`{k}` does not apply to kind = {kind}")));
            }
        }
        Ok(())
    };
    let presentation = match kind {
        "graded" => {
            forbid(&["basis", "products", "generators"], "graded")?;
            let ring = e.get("ring").ok_or_else(|| JetError::ValidationError("graded spec needs `ring = Q[...]`".into()))?;
            let generators = parse_ring(ring)?;
            let relations = match e.get("relations") {
                Some(x) => parse_list(x)?,
                None => Vec::new(),
            };
            let truncation = match e.get("truncation") {
                Some(x) => parse_num(x)?,
                None => return Err(JetError::ValidationError("graded spec needs `truncation`".into())),
            };
            Presentation::Graded { generators, relations, truncation }
        }
        "finite_dimensional" => {
            forbid(&["ring", "relations", "truncation"], "finite_dimensional")?;
            let need = |k: &str| e.get(k).ok_or_else(|| JetError::ValidationError(format!("finite_dimensional spec needs `{k}`")));
            let basis = parse_list(need("basis")?)?;
            let products = parse_list(need("products")?)?;
            let generators = match e.get("generators") {
                Some(x) => parse_list(x)?,
                None => Vec::new(),
            };
            Presentation::StructureConstants { basis, products, generators }
        }
        other => {
            let x = &e["kind"];
            return Err(perr(x.line, x.column, format!("unknown kind `{other}` (graded or finite_dimensional)")));
        }
    };
    let flag = |k: &str| -> Result<bool> {
        match e.get(k) {
            None => Ok(false),
            Some(x) => match x.value {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(perr(x.line, x.column, format!("`{k}` must be true or false"))),
            },
        }
    };
    let mut spec = RunSpec::new(AlgebraSpec { presentation, assert_smooth: flag("assert_smooth")? });
    if let Some(x) = e.get("command") {
        spec.command = x.value.parse().map_err(|m| perr(x.line, x.column, m))?;
    }
    if let Some(x) = e.get("sigma") {
        spec.sigma = parse_seq(x)?;
    }
    if let Some(x) = e.get("tau") {
        spec.tau = Some(parse_seq(x)?);
    }
    if let Some(x) = e.get("n_max") {
        spec.n_max = parse_num(x)?;
    }
    if let Some(x) = e.get("grade_max") {
        spec.grade_max = Some(parse_num(x)?);
    }
    if let Some(x) = e.get("k") {
        spec.k = parse_num(x)?;
    }
    if let Some(x) = e.get("l_max") {
        spec.l_max = parse_num(x)?;
    }
    spec.paranoid = flag("paranoid")?;
    spec.general = flag("general")?;
    if let Some(x) = e.get("module") {
        spec.module = if x.value == "A" { ModuleChoice::Algebra } else { ModuleChoice::Quotient(parse_list(x)?) };
    }
    if let Some(x) = e.get("out") {
        spec.out = Some(PathBuf::from(x.value));
    }
    if let Some(x) = e.get("format") {
        spec.format = x.value.parse().map_err(|m| perr(x.line, x.column, m))?;
    }
    spec.validate()?;
    Ok(spec)
}

fn parse_num<T: FromStr>(x: &Entry) -> Result<T> {
    x.value.parse().map_err(|_| perr(x.line, x.column, format!("expected a non-negative integer, found `{}`", x.value)))
}

/// `[a, b, c]` with items split on commas and surrounding whitespace trimmed.
fn parse_list(x: &Entry) -> Result<Vec<String>> {
    let v = x.value;
    if !v.starts_with('[') {
        return Err(perr(x.line, x.column, "expected a bracketed list `[...]`"));
    }
    if !v.ends_with(']') {
        return Err(perr(x.line, x.column + v.len(), "unterminated list, expected `]`"));
    }
    let inner = &v[1..v.len() - 1];
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 1;
    for item in inner.split(',') {
        let t = item.trim();
        if t.is_empty() {
            return Err(perr(x.line, x.column + offset, "empty list item"));
        }
        if let Some(p) = t.find(['[', ']']) {
            let lead = item.len() - item.trim_start().len();
            return Err(perr(x.line, x.column + offset + lead + p, "nested brackets are not allowed in list items"));
        }
        out.push(t.to_string());
        offset += item.len() + 1;
    }
    Ok(out)
}

fn parse_seq(x: &Entry) -> Result<Vec<u32>> {
    let v = x.value;
    let (inner, base) = match v.strip_prefix('[') {
        Some(r) => (r.strip_suffix(']').ok_or_else(|| perr(x.line, x.column + v.len(), "unterminated list, expected `]`"))?, 1),
        None => (v, 0),
    };
    let mut out = Vec::new();
    let mut offset = base;
    for item in inner.split(',') {
        let t = item.trim();
        let lead = item.len() - item.trim_start().len();
        let n = t.parse::<u32>().map_err(|_| perr(x.line, x.column + offset + lead, format!("expected a positive integer, found `{t}`")))?;
        out.push(n);
        offset += item.len() + 1;
    }
    Ok(out)
}

fn parse_ring(x: &Entry) -> Result<Vec<String>> {
    let v = x.value;
    let inner = v
        .strip_prefix("Q[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| perr(x.line, x.column, "expected `Q[x, y, ...]`"))?;
    let mut out = Vec::new();
    let mut offset = 2;
    for item in inner.split(',') {
        let t = item.trim();
        let lead = item.len() - item.trim_start().len();
        let ok = t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(perr(x.line, x.column + offset + lead, format!("invalid generator name `{t}`")));
        }
        if out.iter().any(|g| g == t) {
            return Err(perr(x.line, x.column + offset + lead, format!("generator `{t}` listed twice")));
        }
        out.push(t.to_string());
        offset += item.len() + 1;
    }
    Ok(out)
}
