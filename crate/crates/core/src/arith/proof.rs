//! Proof sequences, the checker, and the relation `x B y`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{decode_proof, encode_formula, instantiate, recognize, which_axiom, AxiomSystem, Formula, GodelNumber};
use super::{Instance, Schema};

/// Line references are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    /// With an empty instance the line only has to be some instance of the
    /// schema; otherwise it has to be exactly the instance given.
    Axiom { schema: Schema, instance: Instance },
    /// `premise` holds `A`, `implication` holds `A → B`, this line is `B`.
    Mp { premise: usize, implication: usize },
    /// This line is `∀v_var A` where `line` holds `A`.
    Gen { line: usize, var: u32 },
}

impl Justification {
    pub fn axiom(schema: Schema) -> Justification {
        Justification::Axiom { schema, instance: Instance::default() }
    }

    fn cites(&self) -> Vec<usize> {
        match self {
            Justification::Axiom { .. } => vec![],
            Justification::Mp { premise, implication } => vec![*premise, *implication],
            Justification::Gen { line, .. } => vec![*line],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ProofSequence {
    pub lines: Vec<ProofLine>,
}

impl ProofSequence {
    pub fn new() -> ProofSequence {
        ProofSequence::default()
    }

    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine { formula, justification });
        self.lines.len()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.lines.iter().map(|l| l.formula.clone()).collect()
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// The first `n` lines.
    pub fn prefix(&self, n: usize) -> ProofSequence {
        ProofSequence { lines: self.lines[..n].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Invalid {
    #[error("empty proof")]
    Empty,
    #[error("cites line {cited}, which is not an earlier line")]
    ForwardReference { cited: usize },
    #[error("{0} is not an axiom of this system")]
    SchemaNotInSystem(Schema),
    #[error("not an instance of {0}")]
    NotAnInstance(Schema),
    #[error("bad instantiation of {schema}: {message}")]
    BadInstance { schema: Schema, message: String },
    #[error("modus ponens does not apply")]
    MpMismatch,
    #[error("generalization does not apply")]
    GenMismatch,
    #[error("neither an axiom nor a consequence of earlier lines")]
    Unjustified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Valid(Formula),
    Invalid { line: usize, reason: Invalid },
}

impl CheckResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckResult::Valid(_))
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckResult::Valid(c) => write!(f, "valid: {c}"),
            CheckResult::Invalid { line, reason } => write!(f, "invalid at line {line}: {reason}"),
        }
    }
}

fn check_line(p: &ProofSequence, n: usize, sys: &AxiomSystem) -> Result<(), Invalid> {
    let line = &p.lines[n - 1];
    if let Some(&cited) = line.justification.cites().iter().find(|&&c| c == 0 || c >= n) {
        return Err(Invalid::ForwardReference { cited });
    }
    let at = |i: usize| &p.lines[i - 1].formula;
    match &line.justification {
        Justification::Axiom { schema, instance } => {
            if !sys.contains(*schema) {
                return Err(Invalid::SchemaNotInSystem(*schema));
            }
            if instance.is_empty() {
                return if recognize(*schema, &line.formula) { Ok(()) } else { Err(Invalid::NotAnInstance(*schema)) };
            }
            match instantiate(*schema, instance) {
                Ok(f) if f == line.formula => Ok(()),
                Ok(_) => Err(Invalid::NotAnInstance(*schema)),
                Err(message) => Err(Invalid::BadInstance { schema: *schema, message }),
            }
        }
        Justification::Mp { premise, implication } => match at(*implication) {
            Formula::Imp(a, b) if **a == *at(*premise) && **b == line.formula => Ok(()),
            _ => Err(Invalid::MpMismatch),
        },
        Justification::Gen { line: i, var } => match &line.formula {
            Formula::All(x, body) if x == var && **body == *at(*i) => Ok(()),
            _ => Err(Invalid::GenMismatch),
        },
    }
}

/// Checks every line against its justification.
pub fn check_proof(p: &ProofSequence, sys: &AxiomSystem) -> CheckResult {
    if p.is_empty() {
        return CheckResult::Invalid { line: 0, reason: Invalid::Empty };
    }
    for n in 1..=p.len() {
        if let Err(reason) = check_line(p, n, sys) {
            return CheckResult::Invalid { line: n, reason };
        }
    }
    CheckResult::Valid(p.lines[p.len() - 1].formula.clone())
}

/// Finds a justification for every line of a bare formula list: an axiom,
/// else modus ponens from two earlier lines, else generalization of an
/// earlier line. Fails at the first line with none.
pub fn infer_proof(formulas: &[Formula], sys: &AxiomSystem) -> Result<ProofSequence, (usize, Invalid)> {
    if formulas.is_empty() {
        return Err((0, Invalid::Empty));
    }
    let mut seen: HashMap<&Formula, usize> = HashMap::new();
    let mut p = ProofSequence::new();
    for (i, f) in formulas.iter().enumerate() {
        let n = i + 1;
        let justification = if let Some(schema) = which_axiom(f, sys) {
            Justification::axiom(schema)
        } else if let Some(j) = formulas[..i].iter().enumerate().find_map(|(j, g)| match g {
            Formula::Imp(a, b) if **b == *f => seen.get(&**a).map(|&premise| Justification::Mp {
                premise,
                implication: j + 1,
            }),
            _ => None,
        }) {
            j
        } else if let Formula::All(x, body) = f {
            match seen.get(&**body) {
                Some(&line) => Justification::Gen { line, var: *x },
                None => return Err((n, Invalid::Unjustified)),
            }
        } else {
            return Err((n, Invalid::Unjustified));
        };
        p.push(f.clone(), justification);
        seen.entry(f).or_insert(n);
    }
    Ok(p)
}

/// `x B y`: `x` codes a proof whose last line has code `y`.
pub fn xby(x: &GodelNumber, y: &GodelNumber, sys: &AxiomSystem) -> bool {
    let Ok(lines) = decode_proof(x) else { return false };
    match lines.last() {
        Some(last) if encode_formula(last) == *y => infer_proof(&lines, sys).is_ok(),
        _ => false,
    }
}
