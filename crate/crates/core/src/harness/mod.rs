//! The zero-search versus proof-search experiment.
//!
//! For a binary function `G`, a number `a` and a formula `H(v1, v2)` meant to
//! say `G(v1, v2) != 0`, two processes race:
//!
//! * T1 evaluates `G(a, 0), G(a, 1), ..` and stops at the first zero, either
//!   with the recursive-term evaluator or by running a Turing machine under
//!   the loop guard;
//! * T2 searches for a proof of `H(numeral(a), v2)`.
//!
//! The winner is mapped to a verdict and its certificate is checked again by
//! an independent route before it is reported. Verdicts correspond to the
//! cases of the argument as follows: `ZeroFound` is case Q1, a detected loop
//! is the shape of case Q2, `ProofFound` is case Q3, and `Undetermined`
//! records that every budget ran out first.

mod report;
mod suite;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arith::{
    encode_formula, xby, AxiomSystem, Formula, GodelNumber, ProofSearch, ProofSequence, SearchMode, SearchOutcome,
    SearchStatus, Term,
};
use crate::dovetail::{race, Process, RaceOutcome, Status, Trace};
use crate::loop_guard::{replay_check, GuardError, GuardedOutcome, GuardedRun};
use crate::machine::{run, MachineError, MachineSpec, RunOutcome, Symbol};
use crate::recfun::{eval_total, start_eval, EvalState, Nat, Progress, RecError, RecExpr};

pub use report::{emit_report, ReportFormat, RunRecord};
pub use suite::{standard_suite, Suite, SuiteEntry, SuiteError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("G must have arity 2, found {0}")]
    Arity(usize),
    #[error("G must not contain a μ node")]
    NotTotal,
    #[error("the {0} backend was selected but no {0} was supplied")]
    MissingBackend(Backend),
    #[error("machine must have input symbols `0` and `1`")]
    MachineAlphabet,
    #[error("all budgets must be positive")]
    ZeroBudget,
    #[error("certificate failed re-validation: {0}")]
    Rejected(String),
    #[error(transparent)]
    Rec(#[from] RecError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Guard(#[from] GuardError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Rec,
    Tm,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Rec => "rec",
            Backend::Tm => "tm",
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Backend, String> {
        match s {
            "rec" => Ok(Backend::Rec),
            "tm" => Ok(Backend::Tm),
            _ => Err(format!("unknown backend `{s}` (expected rec or tm)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Budgets {
    /// Total evaluator (or machine) steps for T1 across all `y`.
    pub t1_steps: u64,
    /// Candidates examined by T2.
    pub t2_candidates: u64,
    pub slice: u64,
    pub ticks: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { t1_steps: 1_000_000, t2_candidates: 100_000, slice: 64, ticks: 1_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub backend: Backend,
    pub g: Option<RecExpr>,
    pub machine: Option<Arc<MachineSpec>>,
    pub a: u64,
    /// Free `v1` is the slot for `a`, free `v2` the slot for `y`.
    pub h: Formula,
    pub budgets: Budgets,
    pub mode: SearchMode,
}

impl Instance {
    pub fn rec(name: &str, g: RecExpr, a: u64, h: Formula) -> Instance {
        Instance {
            name: name.into(),
            backend: Backend::Rec,
            g: Some(g),
            machine: None,
            a,
            h,
            budgets: Budgets::default(),
            mode: SearchMode::Saturation,
        }
    }

    pub fn tm(name: &str, machine: Arc<MachineSpec>, a: u64, h: Formula) -> Instance {
        Instance {
            name: name.into(),
            backend: Backend::Tm,
            g: None,
            machine: Some(machine),
            a,
            h,
            budgets: Budgets::default(),
            mode: SearchMode::Saturation,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let b = &self.budgets;
        if b.t1_steps == 0 || b.t2_candidates == 0 || b.slice == 0 || b.ticks == 0 {
            return Err(HarnessError::ZeroBudget);
        }
        if let Some(g) = &self.g {
            if g.arity() != 2 {
                return Err(HarnessError::Arity(g.arity()));
            }
            if !g.is_mu_free() {
                return Err(HarnessError::NotTotal);
            }
        }
        match self.backend {
            Backend::Rec if self.g.is_none() => Err(HarnessError::MissingBackend(Backend::Rec)),
            Backend::Tm => {
                let m = self.machine.as_ref().ok_or(HarnessError::MissingBackend(Backend::Tm))?;
                unary_symbols(m).map(|_| ())
            }
            Backend::Rec => Ok(()),
        }
    }

    /// `H` with `numeral(a)` for `v1`.
    pub fn target(&self) -> Formula {
        self.h.subst(1, &Term::numeral(self.a))
    }

    /// SHA-256 of everything that determines the run.
    pub fn digest(&self) -> String {
        let mut text = format!("backend {}\n", self.backend);
        if let Some(g) = &self.g {
            text.push_str(&format!("g {g}\n"));
        }
        if let Some(m) = &self.machine {
            text.push_str(&format!("machine\n{}", m.to_description()));
        }
        let b = &self.budgets;
        text.push_str(&format!(
            "a {}\nh {}\nbudgets {} {} {} {}\nmode {}\n",
            self.a, self.h, b.t1_steps, b.t2_candidates, b.slice, b.ticks, self.mode
        ));
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn unary_symbols(m: &MachineSpec) -> Result<(Symbol, Symbol), HarnessError> {
    match (m.symbol("0"), m.symbol("1")) {
        (Some(z), Some(o)) if m.is_input_symbol(z) && m.is_input_symbol(o) => Ok((z, o)),
        _ => Err(HarnessError::MachineAlphabet),
    }
}

/// Input `1^a 0 1^y` for the machine backend.
pub fn unary_input(m: &MachineSpec, a: u64, y: u64) -> Result<Vec<Symbol>, HarnessError> {
    let (zero, one) = unary_symbols(m)?;
    let mut v = vec![one; a as usize];
    v.push(zero);
    v.extend(std::iter::repeat(one).take(y as usize));
    Ok(v)
}

/// Output convention for the machine backend: the number of `1`s on the
/// final tape.
pub fn unary_output(m: &MachineSpec, config: &crate::machine::Configuration) -> u64 {
    m.symbol("1").map_or(0, |one| config.count(one) as u64)
}

/// How a racer finished.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finish {
    /// `values[k]` is `G(a, k)`; the last one is zero.
    Zero { y: u64, values: Vec<Nat> },
    Loop { y: u64, first: u64, repeat: u64 },
    Proof { x: GodelNumber, proof: ProofSequence },
}

enum T1Engine {
    Rec { g: RecExpr, eval: EvalState },
    Tm { machine: Arc<MachineSpec>, run: GuardedRun },
}

/// Zero search over `y`.
pub struct T1 {
    a: u64,
    y: u64,
    engine: T1Engine,
    values: Vec<Nat>,
    steps: u64,
    budget: u64,
}

impl T1 {
    fn start_y(&mut self) -> Result<(), HarnessError> {
        let remaining = self.budget - self.steps;
        match &mut self.engine {
            T1Engine::Rec { g, eval } => *eval = start_eval(g, &[Nat::from(self.a), Nat::from(self.y)])?,
            T1Engine::Tm { machine, run } => {
                let input = unary_input(machine, self.a, self.y)?;
                *run = GuardedRun::new(machine.clone(), &input, remaining, remaining + 1)?;
            }
        }
        Ok(())
    }

    /// Value of `G(a, y)` if the current evaluation just finished.
    fn chunk(&mut self, allowed: u64) -> Result<Option<Nat>, Status<Finish>> {
        match &mut self.engine {
            T1Engine::Rec { eval, .. } => {
                let before = eval.steps();
                let p = eval.advance(allowed).map_err(|e| Status::Retired(e.to_string()))?;
                self.steps += eval.steps() - before;
                Ok(match p {
                    Progress::Done(v) => Some(v),
                    Progress::Running => None,
                })
            }
            T1Engine::Tm { machine, run } => {
                let before = run.steps();
                let out = run.advance(allowed).cloned();
                self.steps += run.steps() - before;
                match out {
                    None => Ok(None),
                    Some(GuardedOutcome::Halted { config, .. }) => Ok(Some(Nat::from(unary_output(machine, &config)))),
                    Some(GuardedOutcome::SelfTermination { first, repeat }) => {
                        Err(Status::Finished(Finish::Loop { y: self.y, first, repeat }))
                    }
                    Some(GuardedOutcome::Stuck { steps, .. }) => {
                        Err(Status::Retired(format!("machine stuck at y={} after {steps} steps", self.y)))
                    }
                    Some(other) => Err(Status::Retired(format!("{} at y={}", other.label(), self.y))),
                }
            }
        }
    }
}

impl Process for T1 {
    type Outcome = Finish;

    fn name(&self) -> &str {
        "T1"
    }

    fn advance(&mut self, slice: u64) -> Status<Finish> {
        let mut left = slice;
        while left > 0 && self.steps < self.budget {
            let before = self.steps;
            let allowed = left.min(self.budget - self.steps);
            let value = match self.chunk(allowed) {
                Ok(v) => v,
                Err(status) => return status,
            };
            left -= (self.steps - before).min(left);
            let Some(v) = value else { continue };
            let zero = v.is_zero();
            self.values.push(v);
            if zero {
                return Status::Finished(Finish::Zero { y: self.y, values: self.values.clone() });
            }
            self.y += 1;
            if self.steps >= self.budget {
                break;
            }
            if let Err(e) = self.start_y() {
                return Status::Retired(e.to_string());
            }
        }
        if self.steps >= self.budget {
            Status::Retired(format!("step budget exhausted at y={}", self.y))
        } else {
            Status::Running
        }
    }

    fn steps(&self) -> u64 {
        self.steps
    }
}

pub fn build_t1(inst: &Instance) -> Result<T1, HarnessError> {
    inst.validate()?;
    let a = inst.a;
    let budget = inst.budgets.t1_steps;
    let engine = match inst.backend {
        Backend::Rec => {
            let g = inst.g.clone().expect("validated");
            let eval = start_eval(&g, &[Nat::from(a), Nat::zero()])?;
            T1Engine::Rec { g, eval }
        }
        Backend::Tm => {
            let machine = inst.machine.clone().expect("validated");
            let input = unary_input(&machine, a, 0)?;
            let run = GuardedRun::new(machine.clone(), &input, budget, budget + 1)?;
            T1Engine::Tm { machine, run }
        }
    };
    Ok(T1 { a, y: 0, engine, values: Vec::new(), steps: 0, budget })
}

/// Proof search for `H(numeral(a), v2)`.
pub struct T2 {
    search: ProofSearch,
}

impl Process for T2 {
    type Outcome = Finish;

    fn name(&self) -> &str {
        "T2"
    }

    fn advance(&mut self, slice: u64) -> Status<Finish> {
        match self.search.advance(slice) {
            SearchStatus::Running => Status::Running,
            SearchStatus::Done(SearchOutcome::Found { x, proof, .. }) => {
                Status::Finished(Finish::Proof { x: x.clone(), proof: proof.clone() })
            }
            SearchStatus::Done(SearchOutcome::NotFound { saturated: true, .. }) => {
                Status::Retired("candidate space exhausted".into())
            }
            SearchStatus::Done(SearchOutcome::NotFound { .. }) => Status::Retired("candidate budget exhausted".into()),
        }
    }

    fn steps(&self) -> u64 {
        self.search.steps()
    }
}

pub fn build_t2(inst: &Instance) -> Result<T2, HarnessError> {
    inst.validate()?;
    let search = ProofSearch::new(inst.target(), AxiomSystem::peano(), inst.budgets.t2_candidates, inst.mode);
    Ok(T2 { search })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ZeroFound { y: u64, values: Vec<Nat> },
    SelfTerminationDetected { y: u64, first: u64, repeat: u64 },
    ProofFound { x: GodelNumber, proof: ProofSequence },
    Undetermined { t1: String, t2: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ZeroFound { .. } => "ZeroFound",
            Verdict::SelfTerminationDetected { .. } => "SelfTerminationDetected",
            Verdict::ProofFound { .. } => "ProofFound",
            Verdict::Undetermined { .. } => "Undetermined",
        }
    }

    /// The case of the argument the observed outcome corresponds to.
    pub fn case(&self) -> &'static str {
        match self {
            Verdict::ZeroFound { .. } => "Q1",
            Verdict::SelfTerminationDetected { .. } => "Q2",
            Verdict::ProofFound { .. } => "Q3",
            Verdict::Undetermined { .. } => "none",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub name: String,
    pub digest: String,
    pub backend: Backend,
    pub a: u64,
    pub target: Formula,
    pub budgets: Budgets,
    pub mode: SearchMode,
    pub verdict: Verdict,
    /// Which check confirmed the certificate.
    pub validated_by: &'static str,
    pub t1_steps: u64,
    pub t2_steps: u64,
    pub ticks: u64,
    pub trace: Trace,
}

/// Checks a winner's certificate without reusing the racer's machinery.
fn revalidate(inst: &Instance, finish: &Finish) -> Result<&'static str, HarnessError> {
    let reject = |m: String| Err(HarnessError::Rejected(m));
    match finish {
        Finish::Zero { y, values } => {
            let zeros = values.iter().filter(|v| v.is_zero()).count();
            if values.len() as u64 != y + 1 || zeros != 1 || !values[*y as usize].is_zero() {
                return reject(format!("trace for y={y} is not a least-zero trace"));
            }
            match inst.backend {
                Backend::Rec => {
                    let g = inst.g.as_ref().expect("validated");
                    for (k, v) in values.iter().enumerate() {
                        let direct = eval_total(g, &[Nat::from(inst.a), Nat::from(k as u64)])?;
                        if direct != *v {
                            return reject(format!("G(a, {k}) = {direct}, trace says {v}"));
                        }
                    }
                    Ok("eval_total")
                }
                Backend::Tm => {
                    let m = inst.machine.as_ref().expect("validated");
                    let input = unary_input(m, inst.a, *y)?;
                    match run(m, &input, inst.budgets.t1_steps)? {
                        RunOutcome::Halted(c) if unary_output(m, &c) == 0 => Ok("plain run"),
                        other => reject(format!("plain run at y={y} gave {other:?}")),
                    }
                }
            }
        }
        Finish::Loop { y, first, repeat } => {
            let m = inst.machine.as_ref().expect("loops only come from machines");
            let input = unary_input(m, inst.a, *y)?;
            if replay_check(m, &input, *first, *repeat)? {
                Ok("replay")
            } else {
                reject(format!("replay of steps {first}..{repeat} at y={y} does not repeat"))
            }
        }
        Finish::Proof { x, .. } => {
            if xby(x, &encode_formula(&inst.target()), &AxiomSystem::peano()) {
                Ok("xBy")
            } else {
                reject("xBy is false for the reported code".into())
            }
        }
    }
}

pub fn run_theorem_one(inst: &Instance) -> Result<RunReport, HarnessError> {
    let t1 = build_t1(inst)?;
    let t2 = build_t2(inst)?;
    let mut racers: Vec<Box<dyn Process<Outcome = Finish>>> = vec![Box::new(t1), Box::new(t2)];
    let result = race(&mut racers, inst.budgets.slice, inst.budgets.ticks);
    let (verdict, validated_by) = match result.outcome {
        RaceOutcome::Winner { outcome, .. } => {
            let by = revalidate(inst, &outcome)?;
            let v = match outcome {
                Finish::Zero { y, values } => Verdict::ZeroFound { y, values },
                Finish::Loop { y, first, repeat } => Verdict::SelfTerminationDetected { y, first, repeat },
                Finish::Proof { x, proof } => Verdict::ProofFound { x, proof },
            };
            (v, by)
        }
        RaceOutcome::AllExhausted { retired, .. } => {
            let why = |r: &Option<String>| r.clone().unwrap_or_else(|| "scheduler ticks exhausted".into());
            (Verdict::Undetermined { t1: why(&retired[0]), t2: why(&retired[1]) }, "none")
        }
    };
    Ok(RunReport {
        name: inst.name.clone(),
        digest: inst.digest(),
        backend: inst.backend,
        a: inst.a,
        target: inst.target(),
        budgets: inst.budgets,
        mode: inst.mode,
        verdict,
        validated_by,
        t1_steps: racers[0].steps(),
        t2_steps: racers[1].steps(),
        ticks: result.trace.records.len() as u64,
        trace: result.trace,
    })
}
