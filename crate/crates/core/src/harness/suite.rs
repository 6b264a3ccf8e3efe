//! TOML instance suites.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use super::{run_theorem_one, Backend, Budgets, HarnessError, Instance, RunReport};
use crate::arith::{parse_formula, SearchMode};
use crate::machine::parse_machine;
use crate::recfun::{parse_rec_with, Library};

const STANDARD: &str = include_str!("../../data/suite.toml");
const BUILTIN_MACHINES: [(&str, &str); 2] =
    [("monus.tm", include_str!("../../data/monus.tm")), ("rigged.tm", include_str!("../../data/rigged.tm"))];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("suite file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("instance `{name}`: {message}")]
    Instance { name: String, message: String },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BudgetPatch {
    t1_steps: Option<u64>,
    t2_candidates: Option<u64>,
    slice: Option<u64>,
    ticks: Option<u64>,
}

impl BudgetPatch {
    fn apply(&self, b: &mut Budgets) {
        b.t1_steps = self.t1_steps.unwrap_or(b.t1_steps);
        b.t2_candidates = self.t2_candidates.unwrap_or(b.t2_candidates);
        b.slice = self.slice.unwrap_or(b.slice);
        b.ticks = self.ticks.unwrap_or(b.ticks);
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSuite {
    #[serde(default)]
    budgets: BudgetPatch,
    mode: Option<String>,
    #[serde(default)]
    instance: Vec<RawInstance>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    name: String,
    backend: String,
    g: Option<String>,
    machine: Option<String>,
    a: u64,
    h: String,
    expect: Option<String>,
    mode: Option<String>,
    #[serde(default)]
    budgets: BudgetPatch,
}

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub instance: Instance,
    /// Expected verdict label, if the suite states one.
    pub expect: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Suite {
    pub entries: Vec<SuiteEntry>,
}

const LABELS: [&str; 4] = ["ZeroFound", "SelfTerminationDetected", "ProofFound", "Undetermined"];

impl Suite {
    /// Parses a suite; `machine` resolves a machine file name to its text.
    pub fn parse(text: &str, machine: impl Fn(&str) -> Result<String, String>) -> Result<Suite, SuiteError> {
        let raw: RawSuite = toml::from_str(text)?;
        let lib = Library::standard();
        let mut base = Budgets::default();
        raw.budgets.apply(&mut base);
        let mut entries = Vec::new();
        for r in raw.instance {
            let bad = |message: String| SuiteError::Instance { name: r.name.clone(), message };
            let backend: Backend = r.backend.parse().map_err(bad)?;
            let h = parse_formula(&r.h).map_err(|e| bad(e.to_string()))?;
            let mut inst = match backend {
                Backend::Rec => {
                    let g = r.g.as_deref().ok_or_else(|| bad("rec backend needs `g`".into()))?;
                    let g = parse_rec_with(g, &lib).map_err(|e| bad(e.to_string()))?;
                    Instance::rec(&r.name, g, r.a, h)
                }
                Backend::Tm => {
                    let file = r.machine.as_deref().ok_or_else(|| bad("tm backend needs `machine`".into()))?;
                    let text = machine(file).map_err(bad)?;
                    let m = parse_machine(&text).map_err(|e| bad(format!("{file}: {e}")))?;
                    Instance::tm(&r.name, Arc::new(m), r.a, h)
                }
            };
            inst.budgets = base;
            r.budgets.apply(&mut inst.budgets);
            if let Some(mode) = r.mode.as_ref().or(raw.mode.as_ref()) {
                inst.mode = mode.parse::<SearchMode>().map_err(|e| bad(e.to_string()))?;
            }
            if let Some(e) = &r.expect {
                if !LABELS.contains(&e.as_str()) {
                    return Err(bad(format!("unknown verdict `{e}`")));
                }
            }
            inst.validate().map_err(|e| bad(e.to_string()))?;
            entries.push(SuiteEntry { instance: inst, expect: r.expect });
        }
        Ok(Suite { entries })
    }

    /// Loads a suite file; machine paths are relative to its directory.
    pub fn load(path: &Path) -> Result<Suite, SuiteError> {
        let io = |p: &Path, e: std::io::Error| SuiteError::Io { path: p.display().to_string(), message: e.to_string() };
        let text = std::fs::read_to_string(path).map_err(|e| io(path, e))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Suite::parse(&text, |file| std::fs::read_to_string(dir.join(file)).map_err(|e| e.to_string()))
    }

    pub fn run(&self) -> Result<Vec<RunReport>, HarnessError> {
        self.entries.iter().map(|e| run_theorem_one(&e.instance)).collect()
    }

    /// Names of entries whose verdict differs from the expected one.
    pub fn mismatches(&self, reports: &[RunReport]) -> Vec<String> {
        self.entries
            .iter()
            .zip(reports)
            .filter(|(e, r)| e.expect.as_deref().is_some_and(|x| x != r.verdict.label()))
            .map(|(e, _)| e.instance.name.clone())
            .collect()
    }
}

pub fn standard_suite() -> Suite {
    Suite::parse(STANDARD, |file| {
        BUILTIN_MACHINES
            .iter()
            .find(|(n, _)| *n == file)
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| format!("no built-in machine `{file}`"))
    })
    .expect("standard suite is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_suite_loads() {
        let s = standard_suite();
        assert_eq!(s.entries.len(), 10);
        let last = &s.entries[9].instance;
        assert_eq!(last.budgets.t1_steps, 20_000);
        assert_eq!(last.budgets.slice, 64);
        assert_eq!(s.entries[0].instance.mode, SearchMode::Saturation);
    }

    #[test]
    fn bad_suites() {
        let none = |_: &str| Err("no files".to_string());
        let one = |body: &str| format!("[[instance]]\nname = \"x\"\na = 1\nh = \"(= 0 0)\"\n{body}");
        assert!(Suite::parse(&one("backend = \"rec\""), none).is_err());
        assert!(Suite::parse(&one("backend = \"tm\"\nmachine = \"m.tm\""), none).is_err());
        assert!(Suite::parse(&one("backend = \"rec\"\ng = \"pred\""), none).is_err());
        assert!(Suite::parse(&one("backend = \"rec\"\ng = \"sub\"\nexpect = \"Maybe\""), none).is_err());
        assert!(Suite::parse(&one("backend = \"ram\"\ng = \"sub\""), none).is_err());
        assert!(Suite::parse(&one("backend = \"rec\"\ng = \"sub\"\ncolour = 1"), none).is_err());
        assert_eq!(Suite::parse(&one("backend = \"rec\"\ng = \"sub\""), none).unwrap().entries.len(), 1);
    }
}
