//! μ-recursive function terms.
//!
//! Terms are built from `zero`, `succ`, projections, composition, primitive
//! recursion and the μ-operator. Every constructor checks arities, so a
//! [`RecExpr`] value is always well-formed. Natural numbers are
//! arbitrary-precision [`BigUint`]s.
//!
//! Conventions: `Zero(n)` is the n-ary constant zero, projections are
//! 1-indexed, and primitive recursion recurses on its last argument:
//!
//! ```text
//! h(x.., 0)     = base(x..)
//! h(x.., n + 1) = step(x.., n, h(x.., n))
//! ```
//!
//! `Mu(f)` with `f` of arity n+1 denotes `x.. -> least y with f(x.., y) = 0`.
//! The kernel of a μ must itself be μ-free.

mod eval;
mod parse;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::sexpr::SexprError;

pub use eval::{eval_mu, eval_total, start_eval, EvalState, MuOutcome, MuTrace, Progress};
pub use parse::{parse_rec, parse_rec_with, Library};

pub type Nat = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("arity error at {path}: {message}")]
    Arity { path: String, message: String },
    #[error("unknown term `{0}`")]
    UnknownName(String),
    #[error("expected {expected} arguments, got {got}")]
    ArgCount { expected: usize, got: usize },
    #[error("term contains a μ node; it may not terminate")]
    MuPresent,
    #[error("expected a term of the form (mu f)")]
    NotMu,
    #[error("μ kernel at {path} contains another μ")]
    NestedMu { path: String },
    #[error("evaluation already finished")]
    AlreadyDone,
}

impl From<SexprError> for RecError {
    fn from(e: SexprError) -> Self {
        RecError::Syntax(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Zero(usize),
    Succ,
    Proj { index: usize, arity: usize },
    Comp { outer: RecExpr, inner: Vec<RecExpr> },
    PrimRec { base: RecExpr, step: RecExpr },
    Mu(RecExpr),
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Node {
    kind: Kind,
    arity: usize,
    mu_free: bool,
}

/// An arity-checked μ-recursive term. Cloning is cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecExpr(Arc<Node>);

fn arity_error(message: String) -> RecError {
    RecError::Arity { path: "root".into(), message }
}

impl RecExpr {
    fn node(kind: Kind, arity: usize, mu_free: bool) -> RecExpr {
        RecExpr(Arc::new(Node { kind, arity, mu_free }))
    }

    pub fn zero(arity: usize) -> RecExpr {
        RecExpr::node(Kind::Zero(arity), arity, true)
    }

    pub fn succ() -> RecExpr {
        RecExpr::node(Kind::Succ, 1, true)
    }

    pub fn proj(index: usize, arity: usize) -> Result<RecExpr, RecError> {
        if index == 0 || index > arity {
            return Err(arity_error(format!("projection index {index} outside 1..={arity}")));
        }
        Ok(RecExpr::node(Kind::Proj { index, arity }, arity, true))
    }

    pub fn comp(outer: RecExpr, inner: Vec<RecExpr>) -> Result<RecExpr, RecError> {
        let Some(first) = inner.first() else {
            return Err(arity_error("composition needs at least one inner term".into()));
        };
        if outer.arity() != inner.len() {
            return Err(arity_error(format!(
                "outer term has arity {} but {} inner terms were given",
                outer.arity(),
                inner.len()
            )));
        }
        let arity = first.arity();
        if let Some((i, g)) = inner.iter().enumerate().find(|(_, g)| g.arity() != arity) {
            return Err(arity_error(format!(
                "inner term {} has arity {} but the first has arity {arity}",
                i + 1,
                g.arity()
            )));
        }
        let mu_free = outer.is_mu_free() && inner.iter().all(RecExpr::is_mu_free);
        Ok(RecExpr::node(Kind::Comp { outer, inner }, arity, mu_free))
    }

    pub fn primrec(base: RecExpr, step: RecExpr) -> Result<RecExpr, RecError> {
        if step.arity() != base.arity() + 2 {
            return Err(arity_error(format!(
                "step has arity {} but base has arity {} (step needs base + 2)",
                step.arity(),
                base.arity()
            )));
        }
        let arity = base.arity() + 1;
        let mu_free = base.is_mu_free() && step.is_mu_free();
        Ok(RecExpr::node(Kind::PrimRec { base, step }, arity, mu_free))
    }

    pub fn mu(kernel: RecExpr) -> Result<RecExpr, RecError> {
        if kernel.arity() == 0 {
            return Err(arity_error("μ kernel needs arity at least 1".into()));
        }
        if !kernel.is_mu_free() {
            return Err(RecError::NestedMu { path: "root".into() });
        }
        let arity = kernel.arity() - 1;
        Ok(RecExpr::node(Kind::Mu(kernel), arity, false))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn is_mu_free(&self) -> bool {
        self.0.mu_free
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + match self.kind() {
            Kind::Zero(_) | Kind::Succ | Kind::Proj { .. } => 0,
            Kind::Comp { outer, inner } => outer.size() + inner.iter().map(RecExpr::size).sum::<usize>(),
            Kind::PrimRec { base, step } => base.size() + step.size(),
            Kind::Mu(k) => k.size(),
        }
    }
}

impl fmt::Display for RecExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Zero(n) => write!(f, "(zero {n})"),
            Kind::Succ => write!(f, "(succ)"),
            Kind::Proj { index, arity } => write!(f, "(proj {index} {arity})"),
            Kind::Comp { outer, inner } => {
                write!(f, "(comp {outer}")?;
                for g in inner {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            Kind::PrimRec { base, step } => write!(f, "(primrec {base} {step})"),
            Kind::Mu(k) => write!(f, "(mu {k})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_rules() {
        let add = RecExpr::primrec(
            RecExpr::proj(1, 1).unwrap(),
            RecExpr::comp(RecExpr::succ(), vec![RecExpr::proj(3, 3).unwrap()]).unwrap(),
        )
        .unwrap();
        assert_eq!(add.arity(), 2);
        assert!(add.is_mu_free());
        assert!(RecExpr::proj(3, 2).is_err());
        assert!(RecExpr::proj(0, 2).is_err());
        assert!(RecExpr::comp(RecExpr::succ(), vec![]).is_err());
        assert!(RecExpr::comp(RecExpr::succ(), vec![RecExpr::zero(1), RecExpr::zero(1)]).is_err());
        assert!(RecExpr::comp(add.clone(), vec![RecExpr::zero(1), RecExpr::zero(2)]).is_err());
        assert!(RecExpr::primrec(RecExpr::zero(1), RecExpr::zero(2)).is_err());
        let mu = RecExpr::mu(add.clone()).unwrap();
        assert_eq!(mu.arity(), 1);
        assert!(!mu.is_mu_free());
        let lifted = RecExpr::comp(mu, vec![RecExpr::proj(1, 2).unwrap()]).unwrap();
        assert!(matches!(RecExpr::mu(lifted), Err(RecError::NestedMu { .. })));
        assert!(RecExpr::mu(RecExpr::zero(0)).is_err());
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        let text = "(primrec (proj 1 1) (comp (succ) (proj 3 3)))";
        let e = parse_rec(text).unwrap();
        assert_eq!(e.to_string(), text);
        assert_eq!(e.size(), 5);
    }
}
