//! Analysis configuration: a TOML document listing orders and checks.
//!
//! ```toml
//! norm_bound = 10000
//! sweep_bound = 1000
//! checks = ["hfd", "squeeze"]
//! format = "json"
//! jobs = 4
//!
//! [[orders]]
//! d = -3
//! f = 2
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::{Table, Value};

use crate::order::QuadraticOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Hfd,
    BoundaryZero,
    Profile,
    Bandaid,
    Uic,
    Squeeze,
    Elasticity,
    ClassGroup,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Hfd,
        CheckKind::BoundaryZero,
        CheckKind::Profile,
        CheckKind::Bandaid,
        CheckKind::Uic,
        CheckKind::Squeeze,
        CheckKind::Elasticity,
        CheckKind::ClassGroup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Hfd => "hfd",
            CheckKind::BoundaryZero => "boundary_zero",
            CheckKind::Profile => "profile",
            CheckKind::Bandaid => "bandaid",
            CheckKind::Uic => "uic",
            CheckKind::Squeeze => "squeeze",
            CheckKind::Elasticity => "elasticity",
            CheckKind::ClassGroup => "class_group",
        }
    }

    fn valid_names() -> String {
        Self::ALL.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}; valid checks are {}", Self::valid_names()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(format!("unknown format {s:?}; valid formats are json, csv, text")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub orders: Vec<QuadraticOrder>,
    /// Norm bound for element sweeps and exhaustive certification.
    pub norm_bound: u64,
    /// Smaller bound for the quadratic-cost sweeps (`uic`, `bandaid`).
    pub sweep_bound: u64,
    pub checks: Vec<CheckKind>,
    pub format: OutputFormat,
    pub jobs: usize,
}

/// The part of a configuration that determines the results; echoed into
/// the deterministic section of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub orders: Vec<QuadraticOrder>,
    pub norm_bound: u64,
    pub sweep_bound: u64,
    pub checks: Vec<CheckKind>,
}

impl AnalysisConfig {
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            orders: self.orders.clone(),
            norm_bound: self.norm_bound,
            sweep_bound: self.sweep_bound,
            checks: self.checks.clone(),
        }
    }

    /// Serializes back into the document format accepted by [`parse_config`].
    pub fn to_toml(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("norm_bound = {}\n", self.norm_bound));
        out.push_str(&format!("sweep_bound = {}\n", self.sweep_bound));
        let checks: Vec<String> = self.checks.iter().map(|c| format!("{:?}", c.name())).collect();
        out.push_str(&format!("checks = [{}]\n", checks.join(", ")));
        out.push_str(&format!("format = \"{}\"\n", self.format));
        out.push_str(&format!("jobs = {}\n", self.jobs));
        for o in &self.orders {
            out.push_str(&format!("\n[[orders]]\nd = {}\nf = {}\n", o.d(), o.f()));
        }
        out
    }
}

/// One validation problem, located by field path and, when found, source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.issues.len())?;
        for i in &self.issues {
            writeln!(f, "  {i}")?;
        }
        Ok(())
    }
}

const KEYS: [&str; 6] = ["orders", "norm_bound", "sweep_bound", "checks", "format", "jobs"];
pub const DEFAULT_SWEEP_BOUND: u64 = 1000;

struct Collector<'a> {
    source: &'a str,
    issues: Vec<ConfigIssue>,
}

impl Collector<'_> {
    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        let field = field.into();
        let line = locate(self.source, &field);
        self.issues.push(ConfigIssue { field, line, message: message.into() });
    }

    fn integer(&mut self, field: &str, v: &Value) -> Option<i64> {
        match v {
            Value::Integer(i) => Some(*i),
            other => {
                self.push(field, format!("expected an integer, found {}", other.type_str()));
                None
            }
        }
    }

    fn bound(&mut self, field: &str, v: &Value) -> Option<u64> {
        let i = self.integer(field, v)?;
        if i < 2 {
            self.push(field, format!("must be at least 2, got {i}"));
            return None;
        }
        Some(i as u64)
    }
}

/// Parses and validates a configuration, reporting every problem found.
pub fn parse_config(source: &str) -> Result<AnalysisConfig, ConfigError> {
    let table: Table = source.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map(|s| source[..s.start].matches('\n').count() + 1);
        ConfigError {
            issues: vec![ConfigIssue { field: "<document>".into(), line, message: e.message().trim().to_string() }],
        }
    })?;
    let mut c = Collector { source, issues: Vec::new() };

    for key in table.keys() {
        if !KEYS.contains(&key.as_str()) {
            c.push(key.clone(), format!("unknown key; expected one of {}", KEYS.join(", ")));
        }
    }

    let norm_bound = match table.get("norm_bound") {
        Some(v) => c.bound("norm_bound", v),
        None => {
            c.push("norm_bound", "missing required key");
            None
        }
    };
    let sweep_bound = match table.get("sweep_bound") {
        Some(v) => c.bound("sweep_bound", v),
        None => norm_bound.map(|b| b.min(DEFAULT_SWEEP_BOUND)),
    };

    let mut checks = Vec::new();
    match table.get("checks") {
        None => c.push("checks", "missing required key"),
        Some(Value::Array(items)) => {
            if items.is_empty() {
                c.push("checks", format!("must name at least one check; valid checks are {}", CheckKind::valid_names()));
            }
            for (i, item) in items.iter().enumerate() {
                let field = format!("checks[{i}]");
                match item.as_str().map(CheckKind::from_str) {
                    Some(Ok(k)) if checks.contains(&k) => c.push(field, format!("duplicate check {k}")),
                    Some(Ok(k)) => checks.push(k),
                    Some(Err(e)) => c.push(field, e),
                    None => c.push(field, format!("expected a string, found {}", item.type_str())),
                }
            }
        }
        Some(other) => c.push("checks", format!("expected an array of strings, found {}", other.type_str())),
    }

    let format = match table.get("format") {
        None => Some(OutputFormat::default()),
        Some(Value::String(s)) => match s.parse() {
            Ok(f) => Some(f),
            Err(e) => {
                c.push("format", e);
                None
            }
        },
        Some(other) => {
            c.push("format", format!("expected a string, found {}", other.type_str()));
            None
        }
    };

    let jobs = match table.get("jobs") {
        None => Some(1),
        Some(v) => match c.integer("jobs", v) {
            Some(j) if j >= 1 => Some(j as usize),
            Some(j) => {
                c.push("jobs", format!("must be at least 1, got {j}"));
                None
            }
            None => None,
        },
    };

    let mut orders = Vec::new();
    match table.get("orders") {
        None => c.push("orders", "missing required key"),
        Some(Value::Array(items)) => {
            if items.is_empty() {
                c.push("orders", "must list at least one order");
            }
            for (i, item) in items.iter().enumerate() {
                let base = format!("orders[{i}]");
                let Some(t) = item.as_table() else {
                    c.push(base, format!("expected a table with keys d and f, found {}", item.type_str()));
                    continue;
                };
                for key in t.keys() {
                    if key != "d" && key != "f" {
                        c.push(format!("{base}.{key}"), "unknown key; expected d or f");
                    }
                }
                let d = match t.get("d") {
                    Some(v) => c.integer(&format!("{base}.d"), v),
                    None => {
                        c.push(format!("{base}.d"), "missing required key");
                        None
                    }
                };
                let f = match t.get("f") {
                    Some(v) => c.integer(&format!("{base}.f"), v),
                    None => Some(1),
                };
                if let (Some(d), Some(f)) = (d, f) {
                    match QuadraticOrder::new(d, f) {
                        Ok(o) if orders.contains(&o) => c.push(base, format!("duplicate order (d = {d}, f = {f})")),
                        Ok(o) => orders.push(o),
                        Err(e) => c.push(base, e.to_string()),
                    }
                }
            }
        }
        Some(other) => c.push("orders", format!("expected an array of tables, found {}", other.type_str())),
    }

    if !c.issues.is_empty() {
        return Err(ConfigError { issues: c.issues });
    }
    Ok(AnalysisConfig {
        orders,
        norm_bound: norm_bound.expect("validated"),
        sweep_bound: sweep_bound.expect("validated"),
        checks,
        format: format.expect("validated"),
        jobs: jobs.expect("validated"),
    })
}

/// Best-effort source line of a field path such as `orders[1].f` or `checks[0]`.
fn locate(source: &str, field: &str) -> Option<usize> {
    let lines: Vec<&str> = source.lines().collect();
    let is_key = |line: &str, key: &str| {
        let l = line.trim_start();
        l.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
    };
    let is_header = |line: &str| line.trim_start().starts_with('[');
    let (head, rest) = match field.split_once('.') {
        Some((h, r)) => (h, Some(r)),
        None => (field, None),
    };
    let (name, index) = match head.split_once('[') {
        Some((n, i)) => (n, i.trim_end_matches(']').parse::<usize>().ok()),
        None => (head, None),
    };
    if name == "orders" {
        if let Some(i) = index {
            let header = lines
                .iter()
                .enumerate()
                .filter(|(_, l)| l.trim().replace(' ', "") == "[[orders]]")
                .nth(i)
                .map(|(n, _)| n);
            if let Some(h) = header {
                if let Some(key) = rest {
                    let found = lines
                        .iter()
                        .enumerate()
                        .skip(h + 1)
                        .take_while(|(_, l)| !is_header(l))
                        .find(|(_, l)| is_key(l, key));
                    if let Some((n, _)) = found {
                        return Some(n + 1);
                    }
                }
                return Some(h + 1);
            }
        }
    }
    lines
        .iter()
        .enumerate()
        .take_while(|(_, l)| !is_header(l))
        .find(|(_, l)| is_key(l, name))
        .map(|(n, _)| n + 1)
}
