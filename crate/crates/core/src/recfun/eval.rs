//! Evaluators.
//!
//! [`eval_total`] is a direct big-step interpreter for μ-free terms.
//! [`EvalState`] is a small-step machine with an explicit continuation stack
//! that can be paused after any number of transitions and resumed later; it
//! handles every term, including μ. [`eval_mu`] drives the kernel of a μ
//! through that machine one candidate at a time and records the kernel value
//! seen at each candidate.

use num_traits::Zero;

use super::{Kind, Nat, RecError, RecExpr};

fn check_args(e: &RecExpr, args: &[Nat]) -> Result<(), RecError> {
    if args.len() != e.arity() {
        return Err(RecError::ArgCount { expected: e.arity(), got: args.len() });
    }
    Ok(())
}

/// Evaluates a μ-free term. Always terminates.
pub fn eval_total(e: &RecExpr, args: &[Nat]) -> Result<Nat, RecError> {
    check_args(e, args)?;
    if !e.is_mu_free() {
        return Err(RecError::MuPresent);
    }
    Ok(total(e, args))
}

fn total(e: &RecExpr, args: &[Nat]) -> Nat {
    debug_assert_eq!(args.len(), e.arity());
    match e.kind() {
        Kind::Zero(_) => Nat::zero(),
        Kind::Succ => &args[0] + 1u32,
        Kind::Proj { index, .. } => args[index - 1].clone(),
        Kind::Comp { outer, inner } => {
            let vals: Vec<Nat> = inner.iter().map(|g| total(g, args)).collect();
            total(outer, &vals)
        }
        Kind::PrimRec { base, step } => {
            let (n, prefix) = args.split_last().expect("primrec has arity >= 1");
            let mut acc = total(base, prefix);
            let mut call: Vec<Nat> = prefix.to_vec();
            call.push(Nat::zero());
            call.push(Nat::zero());
            let (i_slot, acc_slot) = (prefix.len(), prefix.len() + 1);
            let mut i = Nat::zero();
            while &i < n {
                call[i_slot] = i.clone();
                call[acc_slot] = acc;
                acc = total(step, &call);
                i += 1u32;
            }
            acc
        }
        Kind::Mu(_) => unreachable!("rejected by eval_total"),
    }
}

/// Kernel values seen by a μ search, certifying that the result is least.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTrace {
    pub result: Nat,
    /// `(y, kernel(x.., y))` for `y = 0..=result`.
    pub witnesses: Vec<(Nat, Nat)>,
}

impl MuTrace {
    /// Nonzero below the result, zero at it.
    pub fn is_well_formed(&self) -> bool {
        let n = self.witnesses.len();
        n > 0
            && self.witnesses.iter().enumerate().all(|(i, (y, _))| *y == Nat::from(i))
            && self.witnesses[n - 1].0 == self.result
            && self.witnesses[..n - 1].iter().all(|(_, v)| !v.is_zero())
            && self.witnesses[n - 1].1.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MuOutcome {
    Value(MuTrace),
    BudgetExhausted { y: Nat, steps: u64 },
}

/// Searches `y = 0, 1, ..` for the least zero of the kernel of `e = (mu f)`.
/// `budget` caps the total number of small-step transitions.
pub fn eval_mu(e: &RecExpr, args: &[Nat], budget: u64) -> Result<MuOutcome, RecError> {
    check_args(e, args)?;
    let Kind::Mu(kernel) = e.kind() else {
        return Err(RecError::NotMu);
    };
    let mut call = args.to_vec();
    call.push(Nat::zero());
    let mut witnesses = Vec::new();
    let mut steps = 0u64;
    let mut y = Nat::zero();
    loop {
        *call.last_mut().expect("pushed above") = y.clone();
        let mut state = start_eval(kernel, &call)?;
        let value = loop {
            if steps >= budget {
                return Ok(MuOutcome::BudgetExhausted { y, steps });
            }
            let before = state.steps();
            let progress = state.advance(budget - steps)?;
            steps += state.steps() - before;
            if let Progress::Done(v) = progress {
                break v;
            }
        };
        let zero = value.is_zero();
        witnesses.push((y.clone(), value));
        if zero {
            return Ok(MuOutcome::Value(MuTrace { result: y, witnesses }));
        }
        y += 1u32;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Progress {
    Running,
    Done(Nat),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Control {
    Eval(RecExpr, Vec<Nat>),
    Return(Nat),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Frame {
    /// Evaluating the inner terms of a composition left to right.
    Comp { outer: RecExpr, inner: Vec<RecExpr>, args: Vec<Nat>, values: Vec<Nat> },
    /// Waiting for `h(prefix, next - 1)` while computing `h(prefix, target)`.
    PrimRec { step: RecExpr, prefix: Vec<Nat>, next: Nat, target: Nat },
    /// Waiting for `kernel(args, candidate)`.
    Mu { kernel: RecExpr, args: Vec<Nat>, candidate: Nat },
}

/// A paused evaluation. One transition is one push, pop or update of the
/// continuation stack, so every slice does a bounded amount of work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalState {
    control: Control,
    stack: Vec<Frame>,
    steps: u64,
    finished: bool,
}

pub fn start_eval(e: &RecExpr, args: &[Nat]) -> Result<EvalState, RecError> {
    check_args(e, args)?;
    Ok(EvalState { control: Control::Eval(e.clone(), args.to_vec()), stack: Vec::new(), steps: 0, finished: false })
}

impl EvalState {
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Value if the evaluation has completed.
    pub fn value(&self) -> Option<&Nat> {
        match (&self.control, self.stack.is_empty()) {
            (Control::Return(v), true) => Some(v),
            _ => None,
        }
    }

    /// Current μ candidate of the innermost μ frame, if any.
    pub fn mu_candidate(&self) -> Option<&Nat> {
        self.stack.iter().rev().find_map(|f| match f {
            Frame::Mu { candidate, .. } => Some(candidate),
            _ => None,
        })
    }

    /// Performs at most `slice` transitions.
    pub fn advance(&mut self, slice: u64) -> Result<Progress, RecError> {
        if self.finished {
            return Err(RecError::AlreadyDone);
        }
        let mut taken = 0;
        while taken < slice && self.value().is_none() {
            self.transition();
            self.steps += 1;
            taken += 1;
        }
        match self.value().cloned() {
            Some(v) => {
                self.finished = true;
                Ok(Progress::Done(v))
            }
            None => Ok(Progress::Running),
        }
    }

    fn transition(&mut self) {
        let control = std::mem::replace(&mut self.control, Control::Return(Nat::zero()));
        self.control = match control {
            Control::Eval(e, args) => self.enter(e, args),
            Control::Return(v) => self.resume(v),
        };
    }

    fn enter(&mut self, e: RecExpr, mut args: Vec<Nat>) -> Control {
        match e.kind() {
            Kind::Zero(_) => Control::Return(Nat::zero()),
            Kind::Succ => Control::Return(&args[0] + 1u32),
            Kind::Proj { index, .. } => Control::Return(args.swap_remove(index - 1)),
            Kind::Comp { outer, inner } => {
                let first = inner[0].clone();
                self.stack.push(Frame::Comp {
                    outer: outer.clone(),
                    inner: inner.clone(),
                    args: args.clone(),
                    values: Vec::with_capacity(inner.len()),
                });
                Control::Eval(first, args)
            }
            Kind::PrimRec { base, step } => {
                let target = args.pop().expect("primrec has arity >= 1");
                self.stack.push(Frame::PrimRec { step: step.clone(), prefix: args.clone(), next: Nat::zero(), target });
                Control::Eval(base.clone(), args)
            }
            Kind::Mu(kernel) => {
                self.stack.push(Frame::Mu { kernel: kernel.clone(), args: args.clone(), candidate: Nat::zero() });
                args.push(Nat::zero());
                Control::Eval(kernel.clone(), args)
            }
        }
    }

    fn resume(&mut self, value: Nat) -> Control {
        let frame = self.stack.last_mut().expect("resume needs a frame");
        match frame {
            Frame::Comp { inner, args, values, .. } => {
                values.push(value);
                if values.len() < inner.len() {
                    return Control::Eval(inner[values.len()].clone(), args.clone());
                }
                let Some(Frame::Comp { outer, values, .. }) = self.stack.pop() else { unreachable!() };
                Control::Eval(outer, values)
            }
            Frame::PrimRec { step, prefix, next, target } => {
                if next == target {
                    self.stack.pop();
                    return Control::Return(value);
                }
                let mut call = prefix.clone();
                call.push(next.clone());
                call.push(value);
                *next += 1u32;
                Control::Eval(step.clone(), call)
            }
            Frame::Mu { kernel, args, candidate } => {
                if value.is_zero() {
                    let Some(Frame::Mu { candidate, .. }) = self.stack.pop() else { unreachable!() };
                    return Control::Return(candidate);
                }
                *candidate += 1u32;
                let mut call = args.clone();
                call.push(candidate.clone());
                Control::Eval(kernel.clone(), call)
            }
        }
    }
}
