//! S-expression syntax.
//!
//! ```text
//! term    := (var K) | 0 | (s T) | (+ T T) | (* T T)
//! formula := (= T T) | (not F) | (imp F F) | (all K F)
//! just    := (axiom NAME BIND*) | (mp I J) | (gen I K)
//! BIND    := (phi F) | (psi F) | (chi F) | (x K) | (t T)
//! ```
//!
//! A proof file has one line per proof step: a formula followed by its
//! justification. Blank lines and `;` comments are skipped.

use crate::sexpr::{read_all, read_one, Sexpr};

use super::{ArithError, Formula, Instance, Justification, ProofSequence, Schema, Term};

fn syntax(msg: String) -> ArithError {
    ArithError::Syntax(msg)
}

fn number<T: std::str::FromStr>(s: &Sexpr) -> Result<T, ArithError> {
    s.as_atom()
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| syntax(format!("expected a number, found {s}")))
}

pub(crate) fn term_of(s: &Sexpr) -> Result<Term, ArithError> {
    if s.as_atom() == Some("0") {
        return Ok(Term::Zero);
    }
    let items = s.as_list().unwrap_or_default();
    Ok(match (s.head(), items.get(1..).unwrap_or_default()) {
        (Some("var"), [k]) => Term::Var(number(k)?),
        (Some("s"), [t]) => Term::succ(term_of(t)?),
        (Some("+"), [t, u]) => Term::add(term_of(t)?, term_of(u)?),
        (Some("*"), [t, u]) => Term::mul(term_of(t)?, term_of(u)?),
        _ => return Err(syntax(format!("not a term: {s}"))),
    })
}

pub(crate) fn formula_of(s: &Sexpr) -> Result<Formula, ArithError> {
    let items = s.as_list().unwrap_or_default();
    Ok(match (s.head(), items.get(1..).unwrap_or_default()) {
        (Some("="), [t, u]) => Formula::eq(term_of(t)?, term_of(u)?),
        (Some("not"), [f]) => Formula::not(formula_of(f)?),
        (Some("imp"), [f, g]) => Formula::imp(formula_of(f)?, formula_of(g)?),
        (Some("all"), [k, f]) => Formula::all(number(k)?, formula_of(f)?),
        _ => return Err(syntax(format!("not a formula: {s}"))),
    })
}

pub fn parse_term(text: &str) -> Result<Term, ArithError> {
    term_of(&read_one(text)?)
}

pub fn parse_formula(text: &str) -> Result<Formula, ArithError> {
    formula_of(&read_one(text)?)
}

fn justification_of(s: &Sexpr) -> Result<Justification, ArithError> {
    let items = s.as_list().unwrap_or_default();
    let args = items.get(1..).unwrap_or_default();
    match (s.head(), args) {
        (Some("mp"), [i, j]) => Ok(Justification::Mp { premise: number(i)?, implication: number(j)? }),
        (Some("gen"), [i, k]) => Ok(Justification::Gen { line: number(i)?, var: number(k)? }),
        (Some("axiom"), [name, binds @ ..]) => {
            let schema: Schema = name.as_atom().unwrap_or("").parse().map_err(syntax)?;
            let mut instance = Instance::default();
            for b in binds {
                let pair = b.as_list().unwrap_or_default();
                let [key, value] = pair else {
                    return Err(syntax(format!("expected (NAME VALUE), found {b}")));
                };
                match key.as_atom() {
                    Some("phi") => instance.phi = Some(formula_of(value)?),
                    Some("psi") => instance.psi = Some(formula_of(value)?),
                    Some("chi") => instance.chi = Some(formula_of(value)?),
                    Some("x") => instance.x = Some(number(value)?),
                    Some("t") => instance.t = Some(term_of(value)?),
                    _ => return Err(syntax(format!("unknown metavariable in {b}"))),
                }
            }
            Ok(Justification::Axiom { schema, instance })
        }
        _ => Err(syntax(format!("not a justification: {s}"))),
    }
}

pub fn parse_justification(text: &str) -> Result<Justification, ArithError> {
    justification_of(&read_one(text)?)
}

pub fn parse_proof(text: &str) -> Result<ProofSequence, ArithError> {
    let mut p = ProofSequence::new();
    for (i, raw) in text.lines().enumerate() {
        let at = |e: ArithError| ArithError::ProofSyntax { line: i + 1, message: e.to_string() };
        let forms = read_all(raw).map_err(|e| at(e.into()))?;
        match forms.as_slice() {
            [] => continue,
            [f, j] => {
                let formula = formula_of(f).map_err(at)?;
                let justification = justification_of(j).map_err(at)?;
                p.push(formula, justification);
            }
            _ => return Err(at(syntax("expected a formula and a justification".into()))),
        }
    }
    Ok(p)
}

fn render_justification(j: &Justification) -> String {
    match j {
        Justification::Mp { premise, implication } => format!("(mp {premise} {implication})"),
        Justification::Gen { line, var } => format!("(gen {line} {var})"),
        Justification::Axiom { schema, instance } => {
            let mut s = format!("(axiom {schema}");
            let Instance { phi, psi, chi, x, t } = instance;
            for (name, f) in [("phi", phi), ("psi", psi), ("chi", chi)] {
                if let Some(f) = f {
                    s.push_str(&format!(" ({name} {f})"));
                }
            }
            if let Some(x) = x {
                s.push_str(&format!(" (x {x})"));
            }
            if let Some(t) = t {
                s.push_str(&format!(" (t {t})"));
            }
            s.push(')');
            s
        }
    }
}

/// Inverse of [`parse_proof`].
pub fn render_proof(p: &ProofSequence) -> String {
    p.lines
        .iter()
        .map(|l| format!("{} {}\n", l.formula, render_justification(&l.justification)))
        .collect()
}
