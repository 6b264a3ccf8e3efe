//! Deterministic single-tape Turing machines.
//!
//! The tape is two-way infinite, the head moves on every step, and a run
//! stops when the machine enters a halt state. A (state, symbol) pair with no
//! rule leaves the machine [`StepOutcome::Stuck`], which is kept apart from a
//! proper halt.
//!
//! States and symbols are interned: a [`MachineSpec`] owns the names and the
//! rest of the crate works with [`State`] and [`Symbol`] indices. The blank
//! is always `Symbol(0)`.

mod config;
mod exec;
mod format;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use config::{canonical_id, CanonicalId, Configuration};
pub use exec::{initial_configuration, run, step, RunOutcome, Simulator, StepOutcome, Stop, Transition};
pub use format::parse_machine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

impl Symbol {
    pub const BLANK: Symbol = Symbol(0);

    pub fn is_blank(self) -> bool {
        self == Symbol::BLANK
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::Left => "L",
            Move::Right => "R",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub next: State,
    pub write: Symbol,
    pub dir: Move,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}:` declaration")]
    Missing(&'static str),
    #[error("{}undeclared state `{name}`", line_prefix(*.line))]
    UndeclaredState { name: String, line: Option<usize> },
    #[error("{}undeclared symbol `{name}`", line_prefix(*.line))]
    UndeclaredSymbol { name: String, line: Option<usize> },
    #[error("{}duplicate declaration of `{name}`", line_prefix(*.line))]
    Duplicate { name: String, line: Option<usize> },
    #[error("{}nondeterministic: second rule for ({state}, {symbol})", line_prefix(*.line))]
    Nondeterministic { state: String, symbol: String, line: Option<usize> },
    #[error("{}halt state `{state}` has an outgoing rule", line_prefix(*.line))]
    HaltStateHasRule { state: String, line: Option<usize> },
    #[error("blank `{0}` is not in the tape alphabet")]
    BlankNotInTape(String),
    #[error("input symbol `{0}` is not in the tape alphabet")]
    InputNotInTape(String),
    #[error("the blank may not be an input symbol")]
    BlankInInput,
    #[error("at least one halt state is required")]
    NoHaltStates,
    #[error("input symbol `{0}` is not in the input alphabet")]
    InputSymbol(String),
    #[error("configuration does not belong to this machine: {0}")]
    Inconsistent(String),
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// A rule as written in a description, before interning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleDef {
    pub state: String,
    pub read: String,
    pub next: String,
    pub write: String,
    pub dir: Move,
    pub line: Option<usize>,
}

impl RuleDef {
    pub fn new(state: &str, read: &str, next: &str, write: &str, dir: Move) -> Self {
        RuleDef {
            state: state.into(),
            read: read.into(),
            next: next.into(),
            write: write.into(),
            dir,
            line: None,
        }
    }
}

/// Name-level machine description. [`MachineSpec::new`] validates it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MachineDef {
    pub states: Vec<String>,
    pub start: String,
    pub blank: String,
    pub tape_alphabet: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub halt: Vec<String>,
    pub rules: Vec<RuleDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSpec {
    state_names: Vec<String>,
    symbol_names: Vec<String>,
    state_index: HashMap<String, State>,
    symbol_index: HashMap<String, Symbol>,
    input: Vec<bool>,
    start: State,
    halting: Vec<bool>,
    /// Dense transition table indexed by `state * symbols + symbol`.
    delta: Vec<Option<Rule>>,
}

impl MachineSpec {
    pub fn new(def: &MachineDef) -> Result<MachineSpec, MachineError> {
        let mut state_index = HashMap::new();
        for name in &def.states {
            let id = State(state_index.len() as u32);
            if state_index.insert(name.clone(), id).is_some() {
                return Err(MachineError::Duplicate { name: name.clone(), line: None });
            }
        }

        // Blank first so that it interns to Symbol(0).
        if !def.tape_alphabet.contains(&def.blank) {
            return Err(MachineError::BlankNotInTape(def.blank.clone()));
        }
        let mut symbol_names = vec![def.blank.clone()];
        let mut symbol_index = HashMap::from([(def.blank.clone(), Symbol::BLANK)]);
        let mut seen_blank = false;
        for name in &def.tape_alphabet {
            if *name == def.blank {
                if seen_blank {
                    return Err(MachineError::Duplicate { name: name.clone(), line: None });
                }
                seen_blank = true;
                continue;
            }
            let id = Symbol(symbol_names.len() as u32);
            if symbol_index.insert(name.clone(), id).is_some() {
                return Err(MachineError::Duplicate { name: name.clone(), line: None });
            }
            symbol_names.push(name.clone());
        }

        let mut input = vec![false; symbol_names.len()];
        for name in &def.input_alphabet {
            if *name == def.blank {
                return Err(MachineError::BlankInInput);
            }
            let sym = *symbol_index
                .get(name)
                .ok_or_else(|| MachineError::InputNotInTape(name.clone()))?;
            input[sym.0 as usize] = true;
        }

        let lookup_state = |name: &str, line| {
            state_index
                .get(name)
                .copied()
                .ok_or_else(|| MachineError::UndeclaredState { name: name.into(), line })
        };
        let lookup_symbol = |name: &str, line| {
            symbol_index
                .get(name)
                .copied()
                .ok_or_else(|| MachineError::UndeclaredSymbol { name: name.into(), line })
        };

        let start = lookup_state(&def.start, None)?;
        if def.halt.is_empty() {
            return Err(MachineError::NoHaltStates);
        }
        let mut halting = vec![false; state_index.len()];
        for name in &def.halt {
            halting[lookup_state(name, None)?.0 as usize] = true;
        }

        let width = symbol_names.len();
        let mut delta = vec![None; state_index.len() * width];
        for rule in &def.rules {
            let from = lookup_state(&rule.state, rule.line)?;
            let read = lookup_symbol(&rule.read, rule.line)?;
            let next = lookup_state(&rule.next, rule.line)?;
            let write = lookup_symbol(&rule.write, rule.line)?;
            if halting[from.0 as usize] {
                return Err(MachineError::HaltStateHasRule { state: rule.state.clone(), line: rule.line });
            }
            let slot = &mut delta[from.0 as usize * width + read.0 as usize];
            if slot.is_some() {
                return Err(MachineError::Nondeterministic {
                    state: rule.state.clone(),
                    symbol: rule.read.clone(),
                    line: rule.line,
                });
            }
            *slot = Some(Rule { next, write, dir: rule.dir });
        }

        Ok(MachineSpec {
            state_names: def.states.clone(),
            symbol_names,
            state_index,
            symbol_index,
            input,
            start,
            halting,
            delta,
        })
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbol_names.len()
    }

    pub fn num_halt_states(&self) -> usize {
        self.halting.iter().filter(|h| **h).count()
    }

    pub fn is_halting(&self, state: State) -> bool {
        self.halting[state.0 as usize]
    }

    pub fn rule(&self, state: State, symbol: Symbol) -> Option<Rule> {
        self.delta[state.0 as usize * self.symbol_names.len() + symbol.0 as usize]
    }

    pub fn rules(&self) -> impl Iterator<Item = (State, Symbol, Rule)> + '_ {
        let width = self.symbol_names.len();
        self.delta.iter().enumerate().filter_map(move |(i, r)| {
            r.map(|rule| (State((i / width) as u32), Symbol((i % width) as u32), rule))
        })
    }

    pub fn state(&self, name: &str) -> Option<State> {
        self.state_index.get(name).copied()
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.symbol_index.get(name).copied()
    }

    pub fn state_name(&self, state: State) -> &str {
        &self.state_names[state.0 as usize]
    }

    pub fn symbol_name(&self, symbol: Symbol) -> &str {
        &self.symbol_names[symbol.0 as usize]
    }

    pub fn is_input_symbol(&self, symbol: Symbol) -> bool {
        self.input.get(symbol.0 as usize).copied().unwrap_or(false)
    }

    pub fn has_state(&self, state: State) -> bool {
        (state.0 as usize) < self.state_names.len()
    }

    pub fn has_symbol(&self, symbol: Symbol) -> bool {
        (symbol.0 as usize) < self.symbol_names.len()
    }

    /// Converts input symbol names to interned symbols.
    pub fn input_symbols<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Symbol>, MachineError> {
        names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                self.symbol(n)
                    .filter(|s| self.is_input_symbol(*s))
                    .ok_or_else(|| MachineError::InputSymbol(n.to_string()))
            })
            .collect()
    }

    /// Splits an input string into symbols. Whitespace-separated tokens are
    /// used when present, otherwise every character is one symbol.
    pub fn parse_input(&self, text: &str) -> Result<Vec<Symbol>, MachineError> {
        let text = text.trim();
        if text.contains(char::is_whitespace) {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            self.input_symbols(&tokens)
        } else {
            let chars: Vec<String> = text.chars().map(String::from).collect();
            self.input_symbols(&chars)
        }
    }

    /// Renders the machine back into the description format.
    pub fn to_description(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("states: {}\n", self.state_names.join(" ")));
        out.push_str(&format!("start: {}\n", self.state_name(self.start)));
        out.push_str(&format!("blank: {}\n", self.symbol_names[0]));
        out.push_str(&format!("tape_alphabet: {}\n", self.symbol_names.join(" ")));
        let inputs: Vec<&str> = (0..self.symbol_names.len())
            .filter(|i| self.input[*i])
            .map(|i| self.symbol_names[i].as_str())
            .collect();
        out.push_str(&format!("input_alphabet: {}\n", inputs.join(" ")));
        let halts: Vec<&str> = (0..self.state_names.len())
            .filter(|i| self.halting[*i])
            .map(|i| self.state_names[i].as_str())
            .collect();
        out.push_str(&format!("halt: {}\n", halts.join(" ")));
        for (state, symbol, rule) in self.rules() {
            out.push_str(&format!(
                "delta: {} {} -> {} {} {}\n",
                self.state_name(state),
                self.symbol_name(symbol),
                self.state_name(rule.next),
                self.symbol_name(rule.write),
                rule.dir
            ));
        }
        out
    }
}
