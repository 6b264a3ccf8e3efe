//! First-order arithmetic: terms, formulas, Gödel numbering, a Hilbert-style
//! proof system and proof search.
//!
//! Terms are `v_k | 0 | S t | t + u | t * u`; formulas are `t = u | ¬φ |
//! φ → ψ | ∀v_k φ`. The other connectives are abbreviations and do not appear
//! in the syntax.

mod axioms;
mod godel;
mod parse;
mod proof;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::sexpr::SexprError;

pub use axioms::{instantiate, recognize, which_axiom, AxiomSystem, Instance, Schema};
pub use godel::{
    decode_formula, decode_proof, decode_symbols, encode_formula, encode_formulas, encode_proof, encode_symbols,
    encode_term, flatten_formula, DecodeError, GodelNumber, Sym,
};
pub use parse::{parse_formula, parse_justification, parse_proof, parse_term, render_proof};
pub use proof::{check_proof, infer_proof, xby, CheckResult, Invalid, Justification, ProofLine, ProofSequence};
pub use search::{proof_search, ProofSearch, SearchMode, SearchOutcome, SearchStatus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("line {line}: {message}")]
    ProofSyntax { line: usize, message: String },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

impl From<SexprError> for ArithError {
    fn from(e: SexprError) -> Self {
        ArithError::Syntax(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(u32),
    Zero,
    Succ(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    All(u32, Box<Formula>),
}

impl Term {
    pub fn var(k: u32) -> Term {
        Term::Var(k)
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn add(t: Term, u: Term) -> Term {
        Term::Add(Box::new(t), Box::new(u))
    }

    pub fn mul(t: Term, u: Term) -> Term {
        Term::Mul(Box::new(t), Box::new(u))
    }

    /// `S(S(..S(0)))` with `n` successors.
    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    /// Inverse of [`Term::numeral`].
    pub fn as_numeral(&self) -> Option<u64> {
        let mut t = self;
        let mut n = 0;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Succ(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero => 1,
            Term::Succ(t) => 1 + t.size(),
            Term::Add(t, u) | Term::Mul(t, u) => 1 + t.size() + u.size(),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Var(k) => {
                out.insert(*k);
            }
            Term::Zero => {}
            Term::Succ(t) => t.vars(out),
            Term::Add(t, u) | Term::Mul(t, u) => {
                t.vars(out);
                u.vars(out);
            }
        }
    }

    pub fn contains_var(&self, x: u32) -> bool {
        match self {
            Term::Var(k) => *k == x,
            Term::Zero => false,
            Term::Succ(t) => t.contains_var(x),
            Term::Add(t, u) | Term::Mul(t, u) => t.contains_var(x) || u.contains_var(x),
        }
    }

    pub fn subst(&self, x: u32, by: &Term) -> Term {
        match self {
            Term::Var(k) if *k == x => by.clone(),
            Term::Var(_) | Term::Zero => self.clone(),
            Term::Succ(t) => Term::succ(t.subst(x, by)),
            Term::Add(t, u) => Term::add(t.subst(x, by), u.subst(x, by)),
            Term::Mul(t, u) => Term::mul(t.subst(x, by), u.subst(x, by)),
        }
    }

    pub fn subterms(&self, out: &mut BTreeSet<Term>) {
        out.insert(self.clone());
        match self {
            Term::Var(_) | Term::Zero => {}
            Term::Succ(t) => t.subterms(out),
            Term::Add(t, u) | Term::Mul(t, u) => {
                t.subterms(out);
                u.subterms(out);
            }
        }
    }
}

impl Formula {
    pub fn eq(t: Term, u: Term) -> Formula {
        Formula::Eq(t, u)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn imp(f: Formula, g: Formula) -> Formula {
        Formula::Imp(Box::new(f), Box::new(g))
    }

    pub fn all(x: u32, f: Formula) -> Formula {
        Formula::All(x, Box::new(f))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(t, u) => 1 + t.size() + u.size(),
            Formula::Not(f) => 1 + f.size(),
            Formula::Imp(f, g) => 1 + f.size() + g.size(),
            Formula::All(_, f) => 2 + f.size(),
        }
    }

    /// Nesting depth, counting term nodes. `0 = 0` has depth 2.
    pub fn depth(&self) -> usize {
        fn term(t: &Term) -> usize {
            match t {
                Term::Var(_) | Term::Zero => 1,
                Term::Succ(t) => 1 + term(t),
                Term::Add(t, u) | Term::Mul(t, u) => 1 + term(t).max(term(u)),
            }
        }
        match self {
            Formula::Eq(t, u) => 1 + term(t).max(term(u)),
            Formula::Not(f) | Formula::All(_, f) => 1 + f.depth(),
            Formula::Imp(f, g) => 1 + f.depth().max(g.depth()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<u32>, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Eq(t, u) => {
                let mut vs = BTreeSet::new();
                t.vars(&mut vs);
                u.vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Imp(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::All(x, f) => {
                bound.push(*x);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable index, free or bound.
    pub fn all_vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.vars(&mut out));
        let mut binders = Vec::new();
        self.binders(&mut binders);
        out.extend(binders);
        out
    }

    fn binders(&self, out: &mut Vec<u32>) {
        match self {
            Formula::Eq(..) => {}
            Formula::Not(f) => f.binders(out),
            Formula::Imp(f, g) => {
                f.binders(out);
                g.binders(out);
            }
            Formula::All(x, f) => {
                out.push(*x);
                f.binders(out);
            }
        }
    }

    fn visit_terms(&self, visit: &mut impl FnMut(&Term)) {
        match self {
            Formula::Eq(t, u) => {
                visit(t);
                visit(u);
            }
            Formula::Not(f) | Formula::All(_, f) => f.visit_terms(visit),
            Formula::Imp(f, g) => {
                f.visit_terms(visit);
                g.visit_terms(visit);
            }
        }
    }

    pub fn is_free(&self, x: u32) -> bool {
        match self {
            Formula::Eq(t, u) => t.contains_var(x) || u.contains_var(x),
            Formula::Not(f) => f.is_free(x),
            Formula::Imp(f, g) => f.is_free(x) || g.is_free(x),
            Formula::All(y, f) => *y != x && f.is_free(x),
        }
    }

    /// Replaces the free occurrences of `v_x` by `by`. Does not rename bound
    /// variables; pair with [`Formula::free_for`] when capture matters.
    pub fn subst(&self, x: u32, by: &Term) -> Formula {
        match self {
            Formula::Eq(t, u) => Formula::Eq(t.subst(x, by), u.subst(x, by)),
            Formula::Not(f) => Formula::not(f.subst(x, by)),
            Formula::Imp(f, g) => Formula::imp(f.subst(x, by), g.subst(x, by)),
            Formula::All(y, _) if *y == x => self.clone(),
            Formula::All(y, f) => Formula::all(*y, f.subst(x, by)),
        }
    }

    /// True when no free occurrence of `v_x` lies in the scope of a
    /// quantifier binding a variable of `t`.
    pub fn free_for(&self, t: &Term, x: u32) -> bool {
        let mut tv = BTreeSet::new();
        t.vars(&mut tv);
        self.free_for_inner(&tv, x, &mut Vec::new())
    }

    fn free_for_inner(&self, tv: &BTreeSet<u32>, x: u32, bound: &mut Vec<u32>) -> bool {
        match self {
            Formula::Eq(a, b) => {
                !(a.contains_var(x) || b.contains_var(x)) || !bound.iter().any(|y| tv.contains(y))
            }
            Formula::Not(f) => f.free_for_inner(tv, x, bound),
            Formula::Imp(f, g) => f.free_for_inner(tv, x, bound) && g.free_for_inner(tv, x, bound),
            Formula::All(y, _) if *y == x => true,
            Formula::All(y, f) => {
                bound.push(*y);
                let ok = f.free_for_inner(tv, x, bound);
                bound.pop();
                ok
            }
        }
    }

    pub fn subformulas(&self, out: &mut BTreeSet<Formula>) {
        out.insert(self.clone());
        match self {
            Formula::Eq(..) => {}
            Formula::Not(f) | Formula::All(_, f) => f.subformulas(out),
            Formula::Imp(f, g) => {
                f.subformulas(out);
                g.subformulas(out);
            }
        }
    }

    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.subterms(&mut out));
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(k) => write!(f, "(var {k})"),
            Term::Zero => write!(f, "0"),
            Term::Succ(t) => write!(f, "(s {t})"),
            Term::Add(t, u) => write!(f, "(+ {t} {u})"),
            Term::Mul(t, u) => write!(f, "(* {t} {u})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(t, u) => write!(f, "(= {t} {u})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::Imp(g, h) => write!(f, "(imp {g} {h})"),
            Formula::All(x, g) => write!(f, "(all {x} {g})"),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn v(k: u32) -> Term {
        Term::var(k)
    }

    #[test]
    fn numerals() {
        assert_eq!(Term::numeral(0), Term::Zero);
        assert_eq!(Term::numeral(2), Term::succ(Term::succ(Term::Zero)));
        assert_eq!(Term::numeral(5).as_numeral(), Some(5));
        assert_eq!(v(1).as_numeral(), None);
    }

    #[test]
    fn substitution_respects_binders() {
        // ∀v1 (v1 = v2) → (v1 = 0)
        let f = Formula::imp(Formula::all(1, Formula::eq(v(1), v(2))), Formula::eq(v(1), Term::Zero));
        let g = f.subst(1, &Term::numeral(1));
        assert_eq!(
            g,
            Formula::imp(Formula::all(1, Formula::eq(v(1), v(2))), Formula::eq(Term::numeral(1), Term::Zero))
        );
        assert_eq!(f.free_vars(), BTreeSet::from([1, 2]));
        assert!(f.is_free(2));
        assert!(!Formula::all(2, Formula::eq(v(2), v(2))).is_free(2));
    }

    #[test]
    fn capture_check() {
        // ∀v2 (v1 = v2): v2 is not free for v1, v3 is.
        let f = Formula::all(2, Formula::eq(v(1), v(2)));
        assert!(!f.free_for(&v(2), 1));
        assert!(!f.free_for(&Term::succ(v(2)), 1));
        assert!(f.free_for(&v(3), 1));
        assert!(f.free_for(&Term::Zero, 1));
        // No free occurrence of v1 at all: anything is free for it.
        assert!(Formula::all(1, Formula::eq(v(1), v(1))).free_for(&v(1), 1));
    }

    #[test]
    fn sizes_and_depths() {
        let f = Formula::eq(Term::Zero, Term::Zero);
        assert_eq!(f.depth(), 2);
        assert_eq!(f.size(), 3);
        assert_eq!(Formula::not(f.clone()).depth(), 3);
        assert_eq!(Formula::all(1, f).size(), 5);
    }

    proptest! {
        #[test]
        fn substituting_a_fresh_variable_is_reversible(f in arb_formula(3)) {
            let fresh = 9;
            let g = f.subst(1, &v(fresh));
            prop_assert!(f.free_for(&v(fresh), 1));
            prop_assert_eq!(g.subst(fresh, &v(1)), f.clone());
            prop_assert!(!g.is_free(1));
        }

        #[test]
        fn substitution_of_a_non_free_variable_is_identity(f in arb_formula(3), t in arb_term(3)) {
            let g = Formula::all(1, f);
            prop_assert_eq!(g.subst(1, &t), g);
        }
    }
}
