//! [`Process`] wrappers for the three engines.

use std::fmt;

use crate::arith::{ProofSearch, SearchOutcome, SearchStatus};
use crate::loop_guard::{GuardedOutcome, GuardedRun};
use crate::recfun::{EvalState, Nat, Progress};

use super::{Process, Status};

/// What a finished engine process reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Halted { steps: u64 },
    Stuck { steps: u64 },
    Loop { first: u64, repeat: u64 },
    Value(Nat),
    Proof(Nat),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Halted { steps } => write!(f, "halted steps={steps}"),
            Token::Stuck { steps } => write!(f, "stuck steps={steps}"),
            Token::Loop { first, repeat } => write!(f, "loop first={first} repeat={repeat}"),
            Token::Value(v) => write!(f, "value {v}"),
            Token::Proof(x) => write!(f, "proof x={x}"),
        }
    }
}

/// Trace files separate fields by whitespace.
fn token_name(name: &str) -> String {
    name.split_whitespace().collect::<Vec<_>>().join("_")
}

#[derive(Debug, Clone)]
pub struct TmProcess {
    name: String,
    run: GuardedRun,
}

impl TmProcess {
    pub fn new(name: &str, run: GuardedRun) -> TmProcess {
        TmProcess { name: token_name(name), run }
    }

    pub fn run(&self) -> &GuardedRun {
        &self.run
    }
}

impl Process for TmProcess {
    type Outcome = Token;

    fn name(&self) -> &str {
        &self.name
    }

    fn advance(&mut self, slice: u64) -> Status<Token> {
        match self.run.advance(slice) {
            None => Status::Running,
            Some(GuardedOutcome::Halted { steps, .. }) => Status::Finished(Token::Halted { steps: *steps }),
            Some(GuardedOutcome::Stuck { steps, .. }) => Status::Finished(Token::Stuck { steps: *steps }),
            Some(GuardedOutcome::SelfTermination { first, repeat }) => {
                Status::Finished(Token::Loop { first: *first, repeat: *repeat })
            }
            Some(other) => Status::Retired(other.label().to_string()),
        }
    }

    fn steps(&self) -> u64 {
        self.run.steps()
    }
}

#[derive(Debug, Clone)]
pub struct RecProcess {
    name: String,
    state: EvalState,
    budget: u64,
}

impl RecProcess {
    /// Retires after `budget` evaluator steps.
    pub fn new(name: &str, state: EvalState, budget: u64) -> RecProcess {
        RecProcess { name: token_name(name), state, budget }
    }
}

impl Process for RecProcess {
    type Outcome = Token;

    fn name(&self) -> &str {
        &self.name
    }

    fn advance(&mut self, slice: u64) -> Status<Token> {
        let allowed = slice.min(self.budget.saturating_sub(self.state.steps()));
        if allowed > 0 {
            match self.state.advance(allowed) {
                Ok(Progress::Done(v)) => return Status::Finished(Token::Value(v)),
                Ok(Progress::Running) => {}
                Err(e) => return Status::Retired(e.to_string()),
            }
        }
        if self.state.steps() >= self.budget {
            Status::Retired("budget exhausted".into())
        } else {
            Status::Running
        }
    }

    fn steps(&self) -> u64 {
        self.state.steps()
    }
}

#[derive(Debug, Clone)]
pub struct ProofProcess {
    name: String,
    search: ProofSearch,
}

impl ProofProcess {
    pub fn new(name: &str, search: ProofSearch) -> ProofProcess {
        ProofProcess { name: token_name(name), search }
    }

    pub fn search(&self) -> &ProofSearch {
        &self.search
    }
}

impl Process for ProofProcess {
    type Outcome = Token;

    fn name(&self) -> &str {
        &self.name
    }

    fn advance(&mut self, slice: u64) -> Status<Token> {
        match self.search.advance(slice) {
            SearchStatus::Running => Status::Running,
            SearchStatus::Done(SearchOutcome::Found { x, .. }) => Status::Finished(Token::Proof(x.clone())),
            SearchStatus::Done(SearchOutcome::NotFound { saturated: true, .. }) => {
                Status::Retired("candidate space exhausted".into())
            }
            SearchStatus::Done(SearchOutcome::NotFound { .. }) => Status::Retired("budget exhausted".into()),
        }
    }

    fn steps(&self) -> u64 {
        self.search.steps()
    }
}
