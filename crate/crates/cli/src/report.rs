//! Verification reports and the exit status derived from them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rpm_geometry::DenseTensor;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_STRUCTURE: i32 = 3;
pub const EXIT_NOT_CLOSED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// An axiom of the input instance.
    Structure,
    /// A computed identity or theorem outcome.
    Theorem,
}

/// One verdict. `pass` is always `defect <= tolerance`; yes/no conditions
/// are encoded as defect 0 or 1 against tolerance 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Theorem,
            defect,
            tolerance,
            pass: verdict(defect, tolerance),
        }
    }

    pub fn condition(name: impl Into<String>, holds: bool) -> Self {
        Self::at_most(name, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn structural(mut self) -> Self {
        self.kind = CheckKind::Structure;
        self
    }
}

/// NaN defects fail.
pub fn verdict(defect: f64, tolerance: f64) -> bool {
    defect <= tolerance
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub instance: Value,
    pub epsilon: f64,
    pub checks: Vec<Check>,
    pub tables: BTreeMap<String, Value>,
    pub flags: BTreeMap<String, bool>,
    pub notices: Vec<String>,
}

impl Report {
    pub fn new(command: &str, instance: Value, epsilon: f64) -> Self {
        Self {
            version: REPORT_VERSION,
            command: command.to_string(),
            instance,
            epsilon,
            checks: Vec::new(),
            tables: BTreeMap::new(),
            flags: BTreeMap::new(),
            notices: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn table(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report tables are plain data");
        self.tables.insert(name.to_string(), v);
    }

    pub fn tensor(&mut self, name: &str, t: &DenseTensor) {
        self.tables.insert(name.to_string(), tensor_value(t));
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.flags.insert(name.to_string(), value);
    }

    pub fn notice(&mut self, text: impl Into<String>) {
        self.notices.push(text.into());
    }

    pub fn exit_code(&self) -> i32 {
        exit_code_of(self.checks.iter().map(|c| (c.kind, c.pass)))
    }

    /// Exit status recomputed from defect/tolerance pairs alone.
    pub fn reevaluated_exit_code(&self) -> i32 {
        exit_code_of(self.checks.iter().map(|c| (c.kind, verdict(c.defect, c.tolerance))))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} report (epsilon {:e})", self.command, self.epsilon);
        let _ = writeln!(out, "instance: {}", self.instance);
        for n in &self.notices {
            let _ = writeln!(out, "note: {n}");
        }
        if !self.flags.is_empty() {
            let _ = writeln!(out, "\nflags:");
            for (k, v) in &self.flags {
                let _ = writeln!(out, "  {k:<28} {v}");
            }
        }
        for (name, value) in &self.tables {
            let _ = writeln!(out, "\n{name}:");
            render_value(&mut out, value);
        }
        let _ = writeln!(out, "\nchecks:");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {} {:<40} defect {:.3e}  tolerance {:.3e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.defect,
                c.tolerance
            );
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(
            out,
            "\n{} of {} checks passed",
            self.checks.len() - failed,
            self.checks.len()
        );
        out
    }
}

fn exit_code_of(verdicts: impl Iterator<Item = (CheckKind, bool)>) -> i32 {
    let mut code = EXIT_PASS;
    for (kind, pass) in verdicts {
        if !pass {
            match kind {
                CheckKind::Structure => return EXIT_STRUCTURE,
                CheckKind::Theorem => code = EXIT_CHECK_FAILED,
            }
        }
    }
    code
}

/// Nested arrays indexed by slot, first slot outermost.
pub fn tensor_value(t: &DenseTensor) -> Value {
    fn nest(c: &[f64], dim: usize, rank: usize) -> Value {
        if rank == 0 {
            return Value::from(c[0]);
        }
        let stride = c.len() / dim;
        Value::Array(
            (0..dim)
                .map(|i| nest(&c[i * stride..(i + 1) * stride], dim, rank - 1))
                .collect(),
        )
    }
    nest(t.components(), t.dim(), t.rank())
}

/// Nonzero entries of nested arrays as `[i,j,..] = v` with 1-based indices.
fn render_value(out: &mut String, value: &Value) {
    fn walk(out: &mut String, v: &Value, idx: &mut Vec<usize>, shown: &mut usize) {
        match v {
            Value::Array(items) if items.iter().all(|x| x.is_array() || x.is_number()) && !items.is_empty() => {
                for (i, x) in items.iter().enumerate() {
                    idx.push(i + 1);
                    walk(out, x, idx, shown);
                    idx.pop();
                }
            }
            Value::Number(n) if !idx.is_empty() => {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if x.abs() > 1e-12 {
                    let key: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                    let _ = writeln!(out, "  [{}] = {}", key.join(","), fmt_num(x));
                    *shown += 1;
                }
            }
            other => {
                let _ = writeln!(out, "  {other}");
                *shown += 1;
            }
        }
    }
    let mut shown = 0;
    walk(out, value, &mut Vec::new(), &mut shown);
    if shown == 0 {
        let _ = writeln!(out, "  (all zero)");
    }
}

fn fmt_num(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round())
    } else {
        format!("{x:.6}")
    }
}
