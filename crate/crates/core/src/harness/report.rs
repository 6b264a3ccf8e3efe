//! Table and JSON-lines renderings of harness runs.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{RunReport, Verdict};
use crate::arith::encode_proof;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Records,
}

impl FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "records" => Ok(ReportFormat::Records),
            _ => Err(format!("unknown format `{s}` (expected table or records)")),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Table => "table",
            ReportFormat::Records => "records",
        })
    }
}

/// One line of the records format. Field order is part of the format.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RunRecord {
    pub instance: String,
    pub digest: String,
    pub backend: String,
    pub a: u64,
    pub target: String,
    pub mode: String,
    pub budget_t1_steps: u64,
    pub budget_t2_candidates: u64,
    pub slice: u64,
    pub budget_ticks: u64,
    pub verdict: String,
    pub case: String,
    pub y: Option<u64>,
    pub values: Option<Vec<String>>,
    pub loop_first: Option<u64>,
    pub loop_repeat: Option<u64>,
    /// Decimal Gödel number of the proof.
    pub x: Option<String>,
    pub proof_lines: Option<usize>,
    pub undetermined_t1: Option<String>,
    pub undetermined_t2: Option<String>,
    pub validated_by: String,
    pub t1_steps: u64,
    pub t2_steps: u64,
    pub ticks: u64,
}

impl From<&RunReport> for RunRecord {
    fn from(r: &RunReport) -> RunRecord {
        let mut rec = RunRecord {
            instance: r.name.clone(),
            digest: r.digest.clone(),
            backend: r.backend.to_string(),
            a: r.a,
            target: r.target.to_string(),
            mode: r.mode.to_string(),
            budget_t1_steps: r.budgets.t1_steps,
            budget_t2_candidates: r.budgets.t2_candidates,
            slice: r.budgets.slice,
            budget_ticks: r.budgets.ticks,
            verdict: r.verdict.label().into(),
            case: r.verdict.case().into(),
            y: None,
            values: None,
            loop_first: None,
            loop_repeat: None,
            x: None,
            proof_lines: None,
            undetermined_t1: None,
            undetermined_t2: None,
            validated_by: r.validated_by.into(),
            t1_steps: r.t1_steps,
            t2_steps: r.t2_steps,
            ticks: r.ticks,
        };
        match &r.verdict {
            Verdict::ZeroFound { y, values } => {
                rec.y = Some(*y);
                rec.values = Some(values.iter().map(|v| v.to_string()).collect());
            }
            Verdict::SelfTerminationDetected { y, first, repeat } => {
                rec.y = Some(*y);
                rec.loop_first = Some(*first);
                rec.loop_repeat = Some(*repeat);
            }
            Verdict::ProofFound { x, proof } => {
                debug_assert_eq!(*x, encode_proof(proof));
                rec.x = Some(x.to_string());
                rec.proof_lines = Some(proof.len());
            }
            Verdict::Undetermined { t1, t2 } => {
                rec.undetermined_t1 = Some(t1.clone());
                rec.undetermined_t2 = Some(t2.clone());
            }
        }
        rec
    }
}

/// Long numbers shown as leading digits, an ellipsis and the digit count.
fn abbreviate(digits: &str) -> String {
    if digits.len() <= 12 {
        digits.to_string()
    } else {
        format!("{}..({} digits)", &digits[..6], digits.len())
    }
}

fn witness(r: &RunReport) -> String {
    match &r.verdict {
        Verdict::ZeroFound { y, .. } => format!("y={y}"),
        Verdict::SelfTerminationDetected { y, first, repeat } => format!("y={y} loop {first}->{repeat}"),
        Verdict::ProofFound { x, proof } => format!("x={} ({} lines)", abbreviate(&x.to_string()), proof.len()),
        Verdict::Undetermined { .. } => "-".into(),
    }
}

pub fn render_table(reports: &[RunReport]) -> String {
    let header = ["instance", "verdict", "y*/x", "t1-steps", "t2-steps", "ticks"];
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            [
                r.name.clone(),
                r.verdict.label().to_string(),
                witness(r),
                r.t1_steps.to_string(),
                r.t2_steps.to_string(),
                r.ticks.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&line(rule.iter().map(String::as_str).collect()));
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn render_records(reports: &[RunReport]) -> String {
    reports
        .iter()
        .map(|r| serde_json::to_string(&RunRecord::from(r)).expect("records serialize") + "\n")
        .collect()
}

pub fn emit_report(reports: &[RunReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => render_table(reports),
        ReportFormat::Records => render_records(reports),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abbreviation() {
        assert_eq!(abbreviate("123"), "123");
        assert_eq!(abbreviate("1234567890123"), "123456..(13 digits)");
    }

    #[test]
    fn formats_parse() {
        assert_eq!("table".parse(), Ok(ReportFormat::Table));
        assert_eq!("records".parse(), Ok(ReportFormat::Records));
        assert!("csv".parse::<ReportFormat>().is_err());
    }
}
