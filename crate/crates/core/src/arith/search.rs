//! Proof search.
//!
//! [`SearchMode::Numeric`] is the literal characteristic-function search: it
//! tests `x B y` for `x = 1, 2, 3, ..` and so finds the least proof code, but
//! real proof codes are astronomically large and no realistic budget reaches
//! one.
//!
//! [`SearchMode::Saturation`] is a breadth-first forward prover over a finite
//! pool built from the target: every schema instance over the target's
//! subformulas, subterms and variables (plus one fresh variable) is a seed,
//! and the closure under modus ponens, generalization and `A4` instantiation
//! is explored in order. It returns a valid proof, not necessarily the one
//! with the least code.
//!
//! In both modes a step is one candidate examined, and the budget caps the
//! number of steps.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use super::{
    decode_proof, encode_formula, encode_proof, infer_proof, instantiate, which_axiom, xby, AxiomSystem, Formula,
    GodelNumber, Instance, Justification, ProofSequence, Schema, Term,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Numeric,
    Saturation,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Numeric => "numeric",
            SearchMode::Saturation => "saturation",
        })
    }
}

impl FromStr for SearchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<SearchMode, String> {
        match s {
            "numeric" => Ok(SearchMode::Numeric),
            "saturation" => Ok(SearchMode::Saturation),
            _ => Err(format!("unknown search mode `{s}` (expected numeric or saturation)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { x: GodelNumber, steps: u64, proof: ProofSequence },
    /// `saturated` means the candidate space ran out before the budget did.
    NotFound { steps: u64, saturated: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchStatus {
    Running,
    Done(SearchOutcome),
}

#[derive(Debug, Clone)]
enum Engine {
    Numeric { next: BigUint },
    Saturation(Box<Saturator>),
}

/// A resumable proof search.
#[derive(Debug, Clone)]
pub struct ProofSearch {
    target: Formula,
    code: GodelNumber,
    sys: AxiomSystem,
    budget: u64,
    steps: u64,
    engine: Engine,
    status: SearchStatus,
}

impl ProofSearch {
    pub fn new(target: Formula, sys: AxiomSystem, budget: u64, mode: SearchMode) -> ProofSearch {
        let engine = match mode {
            SearchMode::Numeric => Engine::Numeric { next: BigUint::one() },
            SearchMode::Saturation => Engine::Saturation(Box::new(Saturator::new(&target, &sys))),
        };
        let code = encode_formula(&target);
        ProofSearch { target, code, sys, budget, steps: 0, engine, status: SearchStatus::Running }
    }

    /// Numeric search starting at `start` instead of 1.
    pub fn numeric_from(target: Formula, sys: AxiomSystem, budget: u64, start: BigUint) -> ProofSearch {
        let mut s = ProofSearch::new(target, sys, budget, SearchMode::Numeric);
        s.engine = Engine::Numeric { next: start };
        s
    }

    pub fn target(&self) -> &Formula {
        &self.target
    }

    pub fn target_code(&self) -> &GodelNumber {
        &self.code
    }

    pub fn mode(&self) -> SearchMode {
        match self.engine {
            Engine::Numeric { .. } => SearchMode::Numeric,
            Engine::Saturation(_) => SearchMode::Saturation,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn status(&self) -> &SearchStatus {
        &self.status
    }

    /// Examines at most `slice` more candidates.
    pub fn advance(&mut self, slice: u64) -> &SearchStatus {
        let mut taken = 0;
        while matches!(self.status, SearchStatus::Running) && taken < slice {
            if self.steps >= self.budget {
                self.status = SearchStatus::Done(SearchOutcome::NotFound { steps: self.steps, saturated: false });
                break;
            }
            self.steps += 1;
            taken += 1;
            let found = match &mut self.engine {
                Engine::Numeric { next } => {
                    let x = next.clone();
                    *next += 1u32;
                    xby(&x, &self.code, &self.sys).then(|| {
                        let lines = decode_proof(&x).expect("xby decoded it");
                        let proof = infer_proof(&lines, &self.sys).expect("xby checked it");
                        (x, proof)
                    })
                }
                Engine::Saturation(sat) => match sat.pop() {
                    Pop::Found(proof) => Some((encode_proof(&proof), proof)),
                    Pop::Continue => None,
                    Pop::Empty => {
                        self.steps -= 1;
                        self.status =
                            SearchStatus::Done(SearchOutcome::NotFound { steps: self.steps, saturated: true });
                        break;
                    }
                },
            };
            if let Some((x, proof)) = found {
                self.status = SearchStatus::Done(SearchOutcome::Found { x, steps: self.steps, proof });
            }
        }
        if self.steps >= self.budget && matches!(self.status, SearchStatus::Running) {
            self.status = SearchStatus::Done(SearchOutcome::NotFound { steps: self.steps, saturated: false });
        }
        &self.status
    }

    pub fn run(mut self) -> SearchOutcome {
        loop {
            if let SearchStatus::Done(o) = self.advance(u64::MAX) {
                return o.clone();
            }
        }
    }
}

pub fn proof_search(target: &Formula, sys: &AxiomSystem, budget: u64, mode: SearchMode) -> SearchOutcome {
    ProofSearch::new(target.clone(), sys.clone(), budget, mode).run()
}

/// How a derived formula was obtained; indices are into `Saturator::lines`.
#[derive(Debug, Clone, Copy)]
enum Step {
    Axiom(Schema),
    Mp(usize, usize),
    Gen(usize, u32),
}

enum Pop {
    Found(ProofSequence),
    Continue,
    Empty,
}

#[derive(Debug, Clone)]
struct Saturator {
    target: Formula,
    lines: Vec<(Formula, Step)>,
    index: HashMap<Formula, usize>,
    /// Known implications by antecedent.
    by_antecedent: HashMap<Formula, Vec<usize>>,
    queue: VecDeque<(Formula, Step)>,
    terms: Vec<Term>,
    size_limit: usize,
    a4: bool,
}

impl Saturator {
    fn new(target: &Formula, sys: &AxiomSystem) -> Saturator {
        let mut pool = BTreeSet::new();
        target.subformulas(&mut pool);
        let pool: Vec<Formula> = pool.into_iter().collect();
        let mut vars = target.all_vars();
        let fresh = vars.iter().max().map_or(1, |m| m + 1);
        vars.insert(fresh);
        let mut terms = target.subterms();
        terms.extend(vars.iter().map(|&v| Term::Var(v)));
        let terms: Vec<Term> = terms.into_iter().collect();

        let mut sat = Saturator {
            target: target.clone(),
            lines: Vec::new(),
            index: HashMap::new(),
            by_antecedent: HashMap::new(),
            queue: VecDeque::new(),
            terms,
            size_limit: 2 * target.size() + 8,
            a4: sys.contains(Schema::A4),
        };

        if let Some(s) = which_axiom(target, sys) {
            sat.queue.push_back((target.clone(), Step::Axiom(s)));
        }
        let mut seed = |schema: Schema, inst: Instance| {
            if sys.contains(schema) {
                if let Ok(f) = instantiate(schema, &inst) {
                    sat.queue.push_back((f, Step::Axiom(schema)));
                }
            }
        };
        for s in &Schema::ALL[5..13] {
            seed(*s, Instance::default());
        }
        let f = |x: &Formula| Some(x.clone());
        for b in &pool {
            for c in &pool {
                seed(Schema::A1, Instance { phi: f(b), psi: f(c), ..Default::default() });
                seed(Schema::A3, Instance { phi: f(b), psi: f(c), ..Default::default() });
            }
        }
        for b in &pool {
            for c in &pool {
                for d in &pool {
                    seed(Schema::A2, Instance { phi: f(b), psi: f(c), chi: f(d), ..Default::default() });
                }
            }
        }
        for &x in &vars {
            for b in &pool {
                seed(Schema::S9, Instance { phi: f(b), x: Some(x), ..Default::default() });
                for c in &pool {
                    seed(Schema::A5, Instance { phi: f(b), psi: f(c), x: Some(x), ..Default::default() });
                }
            }
        }
        for b in &pool {
            if let Formula::All(x, body) = b {
                for t in &sat.terms.clone() {
                    let inst = Instance { phi: Some((**body).clone()), x: Some(*x), t: Some(t.clone()), ..Default::default() };
                    if sys.contains(Schema::A4) {
                        if let Ok(f) = instantiate(Schema::A4, &inst) {
                            sat.queue.push_back((f, Step::Axiom(Schema::A4)));
                        }
                    }
                }
            }
        }
        sat
    }

    fn push(&mut self, f: Formula, step: Step) {
        if f.size() <= self.size_limit && !self.index.contains_key(&f) {
            self.queue.push_back((f, step));
        }
    }

    fn pop(&mut self) -> Pop {
        let Some((f, step)) = self.queue.pop_front() else { return Pop::Empty };
        if self.index.contains_key(&f) {
            return Pop::Continue;
        }
        let idx = self.lines.len();
        self.lines.push((f.clone(), step));
        self.index.insert(f.clone(), idx);
        if f == self.target {
            return Pop::Found(self.extract(idx));
        }

        if let Formula::Imp(a, b) = &f {
            if let Some(&ia) = self.index.get(&**a) {
                self.push((**b).clone(), Step::Mp(ia, idx));
            }
            self.by_antecedent.entry((**a).clone()).or_default().push(idx);
        }
        if let Some(imps) = self.by_antecedent.get(&f).cloned() {
            for j in imps {
                if let Formula::Imp(_, b) = &self.lines[j].0 {
                    let b = (**b).clone();
                    self.push(b, Step::Mp(idx, j));
                }
            }
        }
        if let (Formula::All(x, body), true) = (&f, self.a4) {
            for t in self.terms.clone() {
                if body.free_for(&t, *x) {
                    let inst = Formula::imp(f.clone(), body.subst(*x, &t));
                    self.push(inst, Step::Axiom(Schema::A4));
                }
            }
        }
        for v in f.free_vars() {
            self.push(Formula::all(v, f.clone()), Step::Gen(idx, v));
        }
        Pop::Continue
    }

    /// The lines `goal` depends on, renumbered in derivation order.
    fn extract(&self, goal: usize) -> ProofSequence {
        let mut needed = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(i) = stack.pop() {
            if needed.insert(i) {
                match self.lines[i].1 {
                    Step::Axiom(_) => {}
                    Step::Mp(a, b) => stack.extend([a, b]),
                    Step::Gen(a, _) => stack.push(a),
                }
            }
        }
        let renumber: HashMap<usize, usize> = needed.iter().enumerate().map(|(n, &i)| (i, n + 1)).collect();
        let mut p = ProofSequence::new();
        for &i in &needed {
            let (f, step) = &self.lines[i];
            let j = match *step {
                Step::Axiom(s) => Justification::axiom(s),
                Step::Mp(a, b) => Justification::Mp { premise: renumber[&a], implication: renumber[&b] },
                Step::Gen(a, v) => Justification::Gen { line: renumber[&a], var: v },
            };
            p.push(f.clone(), j);
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::super::{check_proof, parse_formula};
    use super::*;
    use num_traits::Zero;

    fn zz() -> Formula {
        Formula::eq(Term::Zero, Term::Zero)
    }

    fn a1_instance() -> Formula {
        Formula::imp(zz(), Formula::imp(zz(), zz()))
    }

    fn assert_sound(target: &Formula, outcome: &SearchOutcome) {
        let sys = AxiomSystem::peano();
        let SearchOutcome::Found { x, proof, .. } = outcome else { panic!("not found: {outcome:?}") };
        assert_eq!(check_proof(proof, &sys), CheckResult::Valid(target.clone()));
        assert_eq!(encode_proof(proof), *x);
        assert!(xby(x, &encode_formula(target), &sys));
    }

    use super::super::CheckResult;

    #[test]
    fn saturation_finds_axiom_instances_first() {
        let t = a1_instance();
        let o = proof_search(&t, &AxiomSystem::peano(), 10, SearchMode::Saturation);
        assert_sound(&t, &o);
        let SearchOutcome::Found { steps, proof, .. } = &o else { unreachable!() };
        assert_eq!(*steps, 1);
        assert_eq!(proof.len(), 1);
        // The one-line proof's code is the code of the single formula.
        assert_eq!(encode_proof(proof), encode_formula(&t));
    }

    #[test]
    fn saturation_proves_identity() {
        let t = Formula::imp(zz(), zz());
        let o = proof_search(&t, &AxiomSystem::logic(), 100_000, SearchMode::Saturation);
        assert_sound(&t, &o);
    }

    #[test]
    fn saturation_uses_generalization_and_a4() {
        // ¬(0 = S v2) from S3 by Gen, A4 and modus ponens.
        let t = parse_formula("(not (= 0 (s (var 2))))").unwrap();
        let o = proof_search(&t, &AxiomSystem::peano(), 100_000, SearchMode::Saturation);
        assert_sound(&t, &o);
        let SearchOutcome::Found { proof, .. } = &o else { unreachable!() };
        assert!(proof.lines.iter().any(|l| matches!(l.justification, Justification::Gen { .. })));
    }

    #[test]
    fn unprovable_target_is_not_found() {
        let t = Formula::eq(Term::Zero, Term::numeral(1));
        for mode in [SearchMode::Numeric, SearchMode::Saturation] {
            match proof_search(&t, &AxiomSystem::peano(), 2_000, mode) {
                SearchOutcome::NotFound { steps, .. } => assert!(steps <= 2_000),
                other => panic!("{other:?}"),
            }
        }
        assert_eq!(
            proof_search(&t, &AxiomSystem::peano(), 0, SearchMode::Numeric),
            SearchOutcome::NotFound { steps: 0, saturated: false }
        );
    }

    #[test]
    fn numeric_search_finds_the_least_code() {
        let t = a1_instance();
        let x = encode_formula(&t);
        let start = &x - 500u32;
        let s = ProofSearch::numeric_from(t.clone(), AxiomSystem::peano(), 1_000, start.clone());
        let o = s.run();
        assert_sound(&t, &o);
        let SearchOutcome::Found { x: found, steps, .. } = &o else { unreachable!() };
        assert_eq!(*found, x);
        assert_eq!(*steps, 501);
        // Nothing below it in the scanned window proves the target.
        let mut y = start;
        while y < x {
            assert!(!xby(&y, &encode_formula(&t), &AxiomSystem::peano()));
            y += 1u32;
        }
        // From 1, a small budget cannot get there.
        let o = proof_search(&t, &AxiomSystem::peano(), 1_000, SearchMode::Numeric);
        assert_eq!(o, SearchOutcome::NotFound { steps: 1_000, saturated: false });
        assert!(!x.is_zero());
    }

    #[test]
    fn slicing_does_not_change_the_result() {
        let t = Formula::imp(zz(), zz());
        let whole = proof_search(&t, &AxiomSystem::peano(), 100_000, SearchMode::Saturation);
        for slice in [1, 7, 64] {
            let mut s = ProofSearch::new(t.clone(), AxiomSystem::peano(), 100_000, SearchMode::Saturation);
            let o = loop {
                if let SearchStatus::Done(o) = s.advance(slice) {
                    break o.clone();
                }
            };
            assert_eq!(o, whole);
        }
    }
}
