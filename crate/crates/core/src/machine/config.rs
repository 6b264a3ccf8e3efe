use std::collections::BTreeMap;
use std::fmt::{self, Write};

use super::{MachineSpec, State, Symbol};

/// An instantaneous description: state, head position and tape contents.
///
/// The tape is a sparse map; cells absent from it read as blank. Values built
/// through [`Configuration::new`] or produced by stepping never store an
/// explicit blank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: State,
    pub head: i64,
    pub tape: BTreeMap<i64, Symbol>,
    pub steps: u64,
}

impl Configuration {
    pub fn new(state: State, head: i64, cells: impl IntoIterator<Item = (i64, Symbol)>, steps: u64) -> Self {
        let tape = cells.into_iter().filter(|(_, s)| !s.is_blank()).collect();
        Configuration { state, head, tape, steps }
    }

    pub fn read(&self, cell: i64) -> Symbol {
        self.tape.get(&cell).copied().unwrap_or(Symbol::BLANK)
    }

    pub fn head_symbol(&self) -> Symbol {
        self.read(self.head)
    }

    pub fn is_normal(&self) -> bool {
        self.tape.values().all(|s| !s.is_blank())
    }

    /// Same configuration with every cell index and the head moved by `offset`.
    pub fn shifted(&self, offset: i64) -> Configuration {
        Configuration {
            state: self.state,
            head: self.head + offset,
            tape: self.tape.iter().map(|(k, v)| (k + offset, *v)).collect(),
            steps: self.steps,
        }
    }

    /// Number of non-blank cells with the given symbol.
    pub fn count(&self, symbol: Symbol) -> usize {
        self.tape.values().filter(|s| **s == symbol).count()
    }

    /// Human-readable rendering such as `1 1 [q0 _] 1`.
    pub fn render(&self, machine: &MachineSpec) -> String {
        let nonblank = self.tape.iter().filter(|(_, s)| !s.is_blank()).map(|(k, _)| *k);
        let lo = nonblank.clone().min().unwrap_or(self.head).min(self.head);
        let hi = nonblank.max().unwrap_or(self.head).max(self.head);
        let mut parts = Vec::new();
        for cell in lo..=hi {
            let sym = machine.symbol_name(self.read(cell));
            if cell == self.head {
                parts.push(format!("[{} {}]", machine.state_name(self.state), sym));
            } else {
                parts.push(sym.to_string());
            }
        }
        parts.join(" ")
    }
}

/// Translation-invariant key for an instantaneous description.
///
/// The text is `LEFT<state|symbol>RIGHT` where `LEFT` and `RIGHT` are the
/// tape segments on either side of the head, trimmed of outer blanks and
/// run-length encoded as `.`-separated `sym` or `sym*count` tokens over
/// interned symbol indices. Equal ids mean equal state, equal scanned symbol
/// and equal tape relative to the head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalId(String);

impl CanonicalId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Rebuilds a representative configuration with the head at cell 0.
    /// Canonicalizing the result gives back `self`.
    pub fn configuration(&self) -> Configuration {
        let open = self.0.find('<').expect("canonical id has a head marker");
        let close = self.0.find('>').expect("canonical id has a head marker");
        let (state, head_sym) = self.0[open + 1..close].split_once('|').expect("state|symbol");
        let num = |t: &str| t.parse::<u32>().expect("numeric token");
        let expand = |seg: &str| -> Vec<Symbol> {
            seg.split('.')
                .filter(|t| !t.is_empty())
                .flat_map(|t| match t.split_once('*') {
                    Some((s, n)) => std::iter::repeat(Symbol(num(s))).take(n.parse().expect("run length")),
                    None => std::iter::repeat(Symbol(num(t))).take(1),
                })
                .collect()
        };
        let left = expand(&self.0[..open]);
        let right = expand(&self.0[close + 1..]);
        let offset = left.len() as i64;
        let cells = left
            .into_iter()
            .enumerate()
            .map(|(i, s)| (i as i64 - offset, s))
            .chain(std::iter::once((0, Symbol(num(head_sym)))))
            .chain(right.into_iter().enumerate().map(|(i, s)| (i as i64 + 1, s)));
        Configuration::new(State(num(state)), 0, cells, 0)
    }
}

impl fmt::Display for CanonicalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn push_runs(out: &mut String, cells: impl Iterator<Item = Symbol>) {
    let mut current: Option<(Symbol, u64)> = None;
    let mut first = true;
    let mut flush = |out: &mut String, run: (Symbol, u64)| {
        if !first {
            out.push('.');
        }
        first = false;
        if run.1 == 1 {
            write!(out, "{}", run.0 .0).unwrap();
        } else {
            write!(out, "{}*{}", run.0 .0, run.1).unwrap();
        }
    };
    for sym in cells {
        current = match current {
            Some((s, n)) if s == sym => Some((s, n + 1)),
            Some(run) => {
                flush(out, run);
                Some((sym, 1))
            }
            None => Some((sym, 1)),
        };
    }
    if let Some(run) = current {
        flush(out, run);
    }
}

pub fn canonical_id(c: &Configuration) -> CanonicalId {
    let mut nonblank = c.tape.iter().filter(|(_, s)| !s.is_blank()).map(|(k, _)| *k);
    let first = nonblank.next();
    let last = nonblank.last().or(first);
    let lo = first.map_or(c.head, |f| f.min(c.head));
    let hi = last.map_or(c.head, |l| l.max(c.head));

    let mut text = String::new();
    push_runs(&mut text, (lo..c.head).map(|i| c.read(i)));
    write!(text, "<{}|{}>", c.state.0, c.head_symbol().0).unwrap();
    push_runs(&mut text, (c.head + 1..=hi).map(|i| c.read(i)));
    CanonicalId(text)
}
