//! Loop detection by recording instantaneous descriptions.
//!
//! A guarded run records the id of every configuration it passes through and
//! stops with [`GuardedOutcome::SelfTermination`] as soon as one repeats. By
//! determinism a repeated id means the machine cycles forever.
//!
//! Recording the full [`CanonicalId`] text at every step costs time and memory
//! linear in the used tape, which is quadratic overall for machines that keep
//! writing. The record therefore keys each id by a translation-invariant
//! rolling fingerprint maintained in O(1) per step, and confirms every
//! fingerprint hit by rebuilding the earlier configuration and comparing the
//! exact canonical ids. A fingerprint collision can never produce a false
//! repeat.
//!
//! Machines whose ids never repeat (the unary right-runner is the simplest)
//! are not caught; they end in [`GuardedOutcome::BudgetExhausted`] or
//! [`GuardedOutcome::MemoryExhausted`]. Only for machines confined to a
//! bounded stretch of tape is repetition guaranteed, which
//! [`decide_space_bounded`] exploits.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::machine::{
    canonical_id, initial_configuration, step, Configuration, MachineError, MachineSpec, Simulator, State,
    StepOutcome, Stop, Symbol,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardedOutcome {
    Halted { config: Configuration, steps: u64 },
    Stuck { config: Configuration, steps: u64 },
    SelfTermination { first: u64, repeat: u64 },
    BudgetExhausted { steps: u64 },
    MemoryExhausted { ids_recorded: u64 },
}

impl GuardedOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            GuardedOutcome::Halted { .. } => "halted",
            GuardedOutcome::Stuck { .. } => "stuck",
            GuardedOutcome::SelfTermination { .. } => "self-termination",
            GuardedOutcome::BudgetExhausted { .. } => "budget-exhausted",
            GuardedOutcome::MemoryExhausted { .. } => "memory-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardReport {
    pub outcome: GuardedOutcome,
    pub steps: u64,
    pub ids_recorded: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuardError {
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("memory cap must be at least 1")]
    ZeroMemoryCap,
    #[error("space bound must be at least 1 cell")]
    ZeroSpace,
    #[error("input of length {input} does not fit in {cells} cells")]
    InputExceedsBound { input: usize, cells: u64 },
    #[error("space-bounded run of {steps} steps ended without a verdict ({outcome})")]
    CompletenessViolated { steps: u64, outcome: &'static str },
}

const MODULUS: u64 = (1 << 61) - 1;
const BASE: u64 = 0x0d1c_8f3a_77e5_b249 % MODULUS;

fn mul_mod(a: u64, b: u64) -> u64 {
    let wide = a as u128 * b as u128;
    let folded = (wide & MODULUS as u128) + (wide >> 61);
    let folded = (folded & MODULUS as u128) + (folded >> 61);
    (folded as u64) % MODULUS
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Polynomial hash of the tape taken relative to the head:
/// `sum(symbol(c) * BASE^(c - head))` over non-blank cells, mod 2^61 - 1.
#[derive(Debug, Clone)]
struct Fingerprint {
    /// `sum(symbol(c) * BASE^c)`.
    absolute: u64,
    /// `BASE^head`.
    pow_head: u64,
    /// `BASE^-head`.
    inv_pow_head: u64,
    inv_base: u64,
}

impl Fingerprint {
    fn new(c: &Configuration) -> Self {
        let inv_base = pow_mod(BASE, MODULUS - 2);
        let pow = |exp: i64| {
            if exp >= 0 {
                pow_mod(BASE, exp as u64)
            } else {
                pow_mod(inv_base, exp.unsigned_abs())
            }
        };
        let absolute = c
            .tape
            .iter()
            .fold(0, |acc, (cell, sym)| (acc + mul_mod(sym.0 as u64, pow(*cell))) % MODULUS);
        Fingerprint { absolute, pow_head: pow(c.head), inv_pow_head: pow(-c.head), inv_base }
    }

    fn write(&mut self, old: Symbol, new: Symbol) {
        let delta = (new.0 as u64 + MODULUS - old.0 as u64) % MODULUS;
        self.absolute = (self.absolute + mul_mod(delta, self.pow_head)) % MODULUS;
    }

    fn shift(&mut self, by: i64) {
        if by > 0 {
            self.pow_head = mul_mod(self.pow_head, BASE);
            self.inv_pow_head = mul_mod(self.inv_pow_head, self.inv_base);
        } else {
            self.pow_head = mul_mod(self.pow_head, self.inv_base);
            self.inv_pow_head = mul_mod(self.inv_pow_head, BASE);
        }
    }

    fn relative(&self) -> u64 {
        mul_mod(self.absolute, self.inv_pow_head)
    }
}

/// A resumable guarded run. [`guarded_run`] drives one to completion; the
/// race scheduler advances one a slice at a time.
#[derive(Debug, Clone)]
pub struct GuardedRun {
    sim: Simulator<Arc<MachineSpec>>,
    start: Configuration,
    fingerprint: Fingerprint,
    record: HashMap<(State, u64), Vec<u64>>,
    recorded: u64,
    budget: u64,
    memory_cap: u64,
    done: Option<GuardedOutcome>,
}

impl GuardedRun {
    pub fn new(
        machine: Arc<MachineSpec>,
        input: &[Symbol],
        budget: u64,
        memory_cap: u64,
    ) -> Result<GuardedRun, GuardError> {
        let start = initial_configuration(&machine, input)?;
        GuardedRun::from_configuration(machine, start, budget, memory_cap)
    }

    pub fn from_configuration(
        machine: Arc<MachineSpec>,
        start: Configuration,
        budget: u64,
        memory_cap: u64,
    ) -> Result<GuardedRun, GuardError> {
        if memory_cap == 0 {
            return Err(GuardError::ZeroMemoryCap);
        }
        let sim = Simulator::new(machine, &start)?;
        let fingerprint = Fingerprint::new(&start);
        let mut run = GuardedRun {
            sim,
            start,
            fingerprint,
            record: HashMap::new(),
            recorded: 0,
            budget,
            memory_cap,
            done: None,
        };
        run.insert();
        Ok(run)
    }

    pub fn steps(&self) -> u64 {
        self.sim.steps() - self.start.steps
    }

    pub fn ids_recorded(&self) -> u64 {
        self.recorded
    }

    pub fn head(&self) -> i64 {
        self.sim.head()
    }

    pub fn outcome(&self) -> Option<&GuardedOutcome> {
        self.done.as_ref()
    }

    pub fn machine(&self) -> &MachineSpec {
        self.sim.machine()
    }

    pub fn configuration(&self) -> Configuration {
        self.sim.configuration()
    }

    fn key(&self) -> (State, u64) {
        (self.sim.state(), self.fingerprint.relative())
    }

    fn insert(&mut self) {
        let key = self.key();
        let steps = self.steps();
        self.record.entry(key).or_default().push(steps);
        self.recorded += 1;
    }

    /// Configuration after `k` steps of this run, rebuilt from the start.
    fn replay_to(&self, k: u64) -> Configuration {
        let mut sim = Simulator::new(self.sim.machine(), &self.start).expect("start was validated");
        for _ in 0..k {
            sim.step().expect("recorded steps were taken");
        }
        sim.configuration()
    }

    /// Earliest recorded step whose id equals the current one.
    fn find_repeat(&self) -> Option<u64> {
        let candidates = self.record.get(&self.key())?;
        let current = canonical_id(&self.sim.configuration());
        candidates.iter().copied().find(|k| canonical_id(&self.replay_to(*k)) == current)
    }

    /// Checks for a terminal configuration or an exhausted budget.
    fn check_before_step(&self) -> Option<GuardedOutcome> {
        let steps = self.steps();
        match self.sim.stop_reason() {
            Some(Stop::Halted) => Some(GuardedOutcome::Halted { config: self.sim.configuration(), steps }),
            Some(Stop::Stuck) => Some(GuardedOutcome::Stuck { config: self.sim.configuration(), steps }),
            None if steps >= self.budget => Some(GuardedOutcome::BudgetExhausted { steps }),
            None => None,
        }
    }

    fn take_step(&mut self) {
        let t = self.sim.step().expect("checked before stepping");
        self.fingerprint.write(t.old, t.new);
        self.fingerprint.shift(t.head_after - t.cell);
    }

    /// Looks the new configuration up in the record and inserts it.
    fn check_after_step(&mut self) -> Option<GuardedOutcome> {
        if let Some(first) = self.find_repeat() {
            return Some(GuardedOutcome::SelfTermination { first, repeat: self.steps() });
        }
        if self.recorded >= self.memory_cap {
            // A terminal configuration is reported as such rather than as
            // running out of memory one step too early.
            if self.sim.stop_reason().is_none() {
                return Some(GuardedOutcome::MemoryExhausted { ids_recorded: self.recorded });
            }
            return None;
        }
        self.insert();
        None
    }

    /// Performs at most `slice` steps. Returns the outcome once the run is
    /// over; later calls keep returning it.
    pub fn advance(&mut self, slice: u64) -> Option<&GuardedOutcome> {
        let mut taken = 0;
        while self.done.is_none() {
            if let Some(out) = self.check_before_step() {
                self.done = Some(out);
                break;
            }
            if taken == slice {
                break;
            }
            self.take_step();
            taken += 1;
            self.done = self.check_after_step();
        }
        self.done.as_ref()
    }

    pub fn report(&self) -> Option<GuardReport> {
        self.done.clone().map(|outcome| GuardReport {
            outcome,
            steps: self.steps(),
            ids_recorded: self.recorded,
        })
    }
}

pub fn guarded_run(m: &MachineSpec, input: &[Symbol], budget: u64, memory_cap: u64) -> Result<GuardReport, GuardError> {
    let mut run = GuardedRun::new(Arc::new(m.clone()), input, budget, memory_cap)?;
    run.advance(u64::MAX);
    Ok(run.report().expect("an unbounded slice always finishes"))
}

/// Re-simulates with the plain step function: the configuration at step
/// `first`, advanced `repeat - first` more steps, must have the same id.
pub fn replay_check(m: &MachineSpec, input: &[Symbol], first: u64, repeat: u64) -> Result<bool, MachineError> {
    if first >= repeat {
        return Ok(false);
    }
    let mut c = initial_configuration(m, input)?;
    let mut at_first = None;
    for k in 0..repeat {
        if k == first {
            at_first = Some(canonical_id(&c));
        }
        c = match step(m, &c)? {
            StepOutcome::Continue(next) => next,
            StepOutcome::Halted(_) | StepOutcome::Stuck(_) => return Ok(false),
        };
    }
    Ok(at_first == Some(canonical_id(&c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacePolicy {
    /// Leaving the window is reported as [`SpaceVerdict::ExceedsSpace`].
    Reject,
    /// Leaving the window stops the machine as if it had no rule.
    TreatAsStuck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceBound {
    pub cells: u64,
    pub policy: SpacePolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceVerdict {
    Halts(u64),
    Stuck(u64),
    Loops { first: u64, repeat: u64 },
    ExceedsSpace(u64),
}

/// Number of distinct ids of a non-halted machine inside `cells` cells,
/// plus one. Saturates at `u64::MAX`.
pub fn space_bounded_budget(m: &MachineSpec, cells: u64) -> u64 {
    let working = (m.num_states() - m.num_halt_states()) as u64;
    let tapes = u32::try_from(cells)
        .ok()
        .and_then(|c| (m.num_symbols() as u64).checked_pow(c))
        .unwrap_or(u64::MAX);
    working
        .checked_mul(cells)
        .and_then(|n| n.checked_mul(tapes))
        .and_then(|n| n.checked_add(1))
        .unwrap_or(u64::MAX)
}

/// Decides halting for a run confined to cells `0..bound.cells`.
///
/// Inside the window there are finitely many ids, so the guarded run must
/// halt, get stuck or repeat within [`space_bounded_budget`] steps. Running
/// out of budget or memory here is reported as
/// [`GuardError::CompletenessViolated`] instead of a verdict.
pub fn decide_space_bounded(m: &MachineSpec, input: &[Symbol], bound: SpaceBound) -> Result<SpaceVerdict, GuardError> {
    if bound.cells == 0 {
        return Err(GuardError::ZeroSpace);
    }
    if input.len() as u64 > bound.cells {
        return match bound.policy {
            SpacePolicy::Reject => Ok(SpaceVerdict::ExceedsSpace(0)),
            SpacePolicy::TreatAsStuck => Err(GuardError::InputExceedsBound { input: input.len(), cells: bound.cells }),
        };
    }
    let budget = space_bounded_budget(m, bound.cells);
    let mut run = GuardedRun::new(Arc::new(m.clone()), input, budget, budget.saturating_add(1))?;
    let window = 0..bound.cells as i64;
    loop {
        if let Some(out) = run.check_before_step() {
            return match out {
                GuardedOutcome::Halted { steps, .. } => Ok(SpaceVerdict::Halts(steps)),
                GuardedOutcome::Stuck { steps, .. } => Ok(SpaceVerdict::Stuck(steps)),
                other => Err(GuardError::CompletenessViolated { steps: run.steps(), outcome: other.label() }),
            };
        }
        run.take_step();
        if !window.contains(&run.head()) {
            let steps = run.steps();
            return Ok(match bound.policy {
                SpacePolicy::Reject => SpaceVerdict::ExceedsSpace(steps),
                SpacePolicy::TreatAsStuck => SpaceVerdict::Stuck(steps),
            });
        }
        match run.check_after_step() {
            None => {}
            Some(GuardedOutcome::SelfTermination { first, repeat }) => return Ok(SpaceVerdict::Loops { first, repeat }),
            Some(other) => {
                return Err(GuardError::CompletenessViolated { steps: run.steps(), outcome: other.label() })
            }
        }
    }
}
