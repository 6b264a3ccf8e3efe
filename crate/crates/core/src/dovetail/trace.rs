//! Scheduler tick log.
//!
//! Text form:
//!
//! ```text
//! processes T1 T2
//! 1 T1 64 running
//! 2 T2 64 running
//! 3 T1 100 finished
//! ```
//!
//! A trailing line starting with `outcome` is allowed and ignored by the
//! parser.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TickStatus {
    Running,
    Finished,
    Retired,
}

impl fmt::Display for TickStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TickStatus::Running => "running",
            TickStatus::Finished => "finished",
            TickStatus::Retired => "retired",
        })
    }
}

impl FromStr for TickStatus {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "running" => Ok(TickStatus::Running),
            "finished" => Ok(TickStatus::Finished),
            "retired" => Ok(TickStatus::Retired),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TickRecord {
    pub tick: u64,
    /// Index into [`Trace::names`].
    pub process: usize,
    /// The process's cumulative steps after this tick.
    pub own_steps: u64,
    pub status: TickStatus,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Trace {
    pub names: Vec<String>,
    pub records: Vec<TickRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("tick {tick}: {message}")]
    Inconsistent { tick: u64, message: String },
}

impl Trace {
    pub fn new(names: Vec<String>) -> Trace {
        Trace { names, records: Vec::new() }
    }

    pub fn push(&mut self, r: TickRecord) {
        self.records.push(r);
    }

    /// Number of ticks each process was granted.
    pub fn slices(&self) -> Vec<u64> {
        let mut out = vec![0; self.names.len()];
        for r in &self.records {
            out[r.process] += 1;
        }
        out
    }

    pub fn render(&self) -> String {
        let mut s = format!("processes {}\n", self.names.join(" "));
        for r in &self.records {
            s.push_str(&format!("{} {} {} {}\n", r.tick, self.names[r.process], r.own_steps, r.status));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Trace, TraceError> {
        let syntax = |line: usize, message: &str| TraceError::Syntax { line, message: message.into() };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| syntax(1, "missing `processes` header"))?;
        let mut words = header.split_whitespace();
        if words.next() != Some("processes") {
            return Err(syntax(1, "missing `processes` header"));
        }
        let mut trace = Trace::new(words.map(String::from).collect());
        for (i, line) in lines {
            let n = i + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.first() == Some(&"outcome") {
                break;
            }
            let [tick, name, own, status] = fields.as_slice() else {
                return Err(syntax(n, "expected `tick process own-steps status`"));
            };
            let process = trace
                .names
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| syntax(n, &format!("unknown process `{name}`")))?;
            trace.push(TickRecord {
                tick: tick.parse().map_err(|_| syntax(n, "bad tick"))?,
                process,
                own_steps: own.parse().map_err(|_| syntax(n, "bad step count"))?,
                status: status.parse().map_err(|_| syntax(n, "bad status"))?,
            });
        }
        Ok(trace)
    }
}

/// Largest difference, over every prefix of the schedule, between the most
/// and least slices granted to processes that were still live.
pub fn fairness_audit(trace: &Trace) -> Result<u64, TraceError> {
    let n = trace.names.len();
    let mut granted = vec![0u64; n];
    let mut live = vec![true; n];
    let mut last_steps = vec![0u64; n];
    let mut worst = 0;
    for (k, r) in trace.records.iter().enumerate() {
        let bad = |message: &str| TraceError::Inconsistent { tick: r.tick, message: message.into() };
        if r.tick != k as u64 + 1 {
            return Err(bad("ticks must count up from 1"));
        }
        if r.process >= n {
            return Err(bad("unknown process"));
        }
        if !live[r.process] {
            return Err(bad("process scheduled after it stopped"));
        }
        if r.own_steps < last_steps[r.process] {
            return Err(bad("step count went down"));
        }
        if k > 0 && trace.records[k - 1].status == TickStatus::Finished {
            return Err(bad("schedule continued after a finish"));
        }
        last_steps[r.process] = r.own_steps;
        granted[r.process] += 1;
        if r.status != TickStatus::Running {
            live[r.process] = false;
        }
        let counts = || (0..n).filter(|&i| live[i]).map(|i| granted[i]);
        if let (Some(hi), Some(lo)) = (counts().max(), counts().min()) {
            worst = worst.max(hi - lo);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(tick: u64, process: usize, own_steps: u64, status: TickStatus) -> TickRecord {
        TickRecord { tick, process, own_steps, status }
    }

    #[test]
    fn empty_trace() {
        assert_eq!(fairness_audit(&Trace::new(vec!["a".into()])), Ok(0));
    }

    #[test]
    fn only_live_processes_count() {
        let mut t = Trace::new(vec!["a".into(), "b".into()]);
        t.push(rec(1, 0, 1, TickStatus::Retired));
        t.push(rec(2, 1, 1, TickStatus::Running));
        t.push(rec(3, 1, 2, TickStatus::Running));
        t.push(rec(4, 1, 3, TickStatus::Running));
        assert_eq!(fairness_audit(&t), Ok(0));
    }

    #[test]
    fn unfair_schedule_is_measured() {
        let mut t = Trace::new(vec!["a".into(), "b".into()]);
        for k in 1..=3 {
            t.push(rec(k, 0, k, TickStatus::Running));
        }
        assert_eq!(fairness_audit(&t), Ok(3));
    }

    #[test]
    fn malformed_traces() {
        let mut t = Trace::new(vec!["a".into()]);
        t.push(rec(2, 0, 1, TickStatus::Running));
        assert!(fairness_audit(&t).is_err());
        let mut t = Trace::new(vec!["a".into()]);
        t.push(rec(1, 0, 1, TickStatus::Retired));
        t.push(rec(2, 0, 2, TickStatus::Running));
        assert!(fairness_audit(&t).is_err());
        assert!(Trace::parse("").is_err());
        assert!(Trace::parse("processes a\n1 b 1 running").is_err());
        assert!(Trace::parse("processes a\n1 a x running").is_err());
        assert!(Trace::parse("processes a\n1 a 1 sleeping").is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut t = Trace::new(vec!["T1".into(), "T2".into()]);
        t.push(rec(1, 0, 64, TickStatus::Running));
        t.push(rec(2, 1, 64, TickStatus::Finished));
        let text = t.render() + "outcome winner T2\n";
        assert_eq!(Trace::parse(&text).unwrap(), t);
        assert_eq!(t.slices(), vec![1, 1]);
    }
}
