//! Resumable processes and a deterministic round-robin race between them.
//!
//! Each scheduler tick gives the next live process (in registration order,
//! wrapping around) one slice of steps. The first process to finish wins;
//! processes that give up are retired and skipped from then on.

mod adapters;
mod trace;

use std::fmt;

pub use adapters::{ProofProcess, RecProcess, TmProcess, Token};
pub use trace::{fairness_audit, TickRecord, TickStatus, Trace, TraceError};

/// Result of one `advance` call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status<O> {
    Running,
    Finished(O),
    /// The process can no longer finish, e.g. its own budget ran out.
    Retired(String),
}

pub trait Process {
    type Outcome;

    fn name(&self) -> &str;

    /// Performs at most `slice` atomic steps. Not called again after it has
    /// returned `Finished` or `Retired`.
    fn advance(&mut self, slice: u64) -> Status<Self::Outcome>;

    /// Cumulative steps taken so far.
    fn steps(&self) -> u64;
}

impl<P: Process + ?Sized> Process for Box<P> {
    type Outcome = P::Outcome;

    fn name(&self) -> &str {
        (**self).name()
    }

    fn advance(&mut self, slice: u64) -> Status<Self::Outcome> {
        (**self).advance(slice)
    }

    fn steps(&self) -> u64 {
        (**self).steps()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RaceOutcome<O> {
    Winner { index: usize, name: String, outcome: O, local_steps: u64, tick: u64 },
    AllExhausted { steps: Vec<u64>, retired: Vec<Option<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaceResult<O> {
    pub outcome: RaceOutcome<O>,
    pub trace: Trace,
}

impl<O: fmt::Display> fmt::Display for RaceOutcome<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RaceOutcome::Winner { name, outcome, local_steps, tick, .. } => {
                write!(f, "winner {name} {outcome} steps={local_steps} tick={tick}")
            }
            RaceOutcome::AllExhausted { steps, .. } => {
                let steps: Vec<String> = steps.iter().map(u64::to_string).collect();
                write!(f, "exhausted steps={}", steps.join(","))
            }
        }
    }
}

/// Races `processes` round-robin, `slice` steps per tick, for at most
/// `global_budget` ticks.
pub fn race<P: Process>(processes: &mut [P], slice: u64, global_budget: u64) -> RaceResult<P::Outcome> {
    assert!(slice >= 1, "slice must be positive");
    let mut trace = Trace::new(processes.iter().map(|p| p.name().to_string()).collect());
    let mut retired: Vec<Option<String>> = vec![None; processes.len()];
    let mut turn = 0;
    for tick in 1..=global_budget {
        let live = (0..processes.len()).map(|k| (turn + k) % processes.len().max(1)).find(|&i| retired[i].is_none());
        let Some(i) = live.filter(|_| !processes.is_empty()) else { break };
        turn = i + 1;
        let p = &mut processes[i];
        let status = p.advance(slice);
        let own = p.steps();
        match status {
            Status::Running => trace.push(TickRecord { tick, process: i, own_steps: own, status: TickStatus::Running }),
            Status::Retired(reason) => {
                trace.push(TickRecord { tick, process: i, own_steps: own, status: TickStatus::Retired });
                retired[i] = Some(reason);
            }
            Status::Finished(outcome) => {
                trace.push(TickRecord { tick, process: i, own_steps: own, status: TickStatus::Finished });
                let name = p.name().to_string();
                return RaceResult {
                    outcome: RaceOutcome::Winner { index: i, name, outcome, local_steps: own, tick },
                    trace,
                };
            }
        }
    }
    let steps = processes.iter().map(Process::steps).collect();
    RaceResult { outcome: RaceOutcome::AllExhausted { steps, retired }, trace }
}

/// A process that finishes after a fixed number of steps, or never.
#[derive(Debug, Clone)]
pub struct Countdown {
    name: String,
    remaining: Option<u64>,
    steps: u64,
    give_up_after: Option<u64>,
}

impl Countdown {
    pub fn finishing_after(name: &str, steps: u64) -> Countdown {
        Countdown { name: name.into(), remaining: Some(steps), steps: 0, give_up_after: None }
    }

    pub fn never(name: &str) -> Countdown {
        Countdown { name: name.into(), remaining: None, steps: 0, give_up_after: None }
    }

    /// Retires once it has taken `limit` steps without finishing.
    pub fn with_limit(mut self, limit: u64) -> Countdown {
        self.give_up_after = Some(limit);
        self
    }
}

impl Process for Countdown {
    type Outcome = u64;

    fn name(&self) -> &str {
        &self.name
    }

    fn advance(&mut self, slice: u64) -> Status<u64> {
        let mut allowed = slice;
        if let Some(limit) = self.give_up_after {
            allowed = allowed.min(limit.saturating_sub(self.steps));
        }
        match &mut self.remaining {
            Some(r) => {
                let k = allowed.min(*r);
                *r -= k;
                self.steps += k;
                if *r == 0 {
                    return Status::Finished(self.steps);
                }
            }
            None => self.steps += allowed,
        }
        match self.give_up_after {
            Some(limit) if self.steps >= limit => Status::Retired(format!("gave up after {limit} steps")),
            _ => Status::Running,
        }
    }

    fn steps(&self) -> u64 {
        self.steps
    }
}
