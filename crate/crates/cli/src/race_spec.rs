//! Process specs for `workbench race`.
//!
//! ```text
//! (tm NAME FILE SYMBOL..)     machine file and its input symbols
//! (rec NAME TERM ARG..)       term and natural-number arguments
//! (prove NAME FORMULA)        proof search for the formula
//! ```

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};

use workbench_core::arith::{parse_formula, AxiomSystem, ProofSearch, SearchMode};
use workbench_core::dovetail::{Process, ProofProcess, RecProcess, TmProcess, Token};
use workbench_core::loop_guard::GuardedRun;
use workbench_core::recfun::{start_eval, Library, Nat};
use workbench_core::sexpr::{read_one, Sexpr};

pub struct Caps {
    pub steps: u64,
    pub candidates: u64,
    pub memory: u64,
    pub mode: SearchMode,
}

pub type Boxed = Box<dyn Process<Outcome = Token>>;

fn atom<'a>(items: &'a [Sexpr], i: usize, what: &str) -> Result<&'a str> {
    items.get(i).and_then(Sexpr::as_atom).with_context(|| format!("expected {what} at position {i}"))
}

pub fn build(spec: &str, lib: &Library, caps: &Caps) -> Result<Boxed> {
    let form = read_one(spec).with_context(|| format!("process spec `{spec}`"))?;
    let items = form.as_list().with_context(|| format!("process spec `{spec}` must be a list"))?;
    let kind = atom(items, 0, "a process kind")?;
    let name = atom(items, 1, "a process name")?;
    let p: Boxed = match kind {
        "tm" => {
            let file = atom(items, 2, "a machine file")?;
            let text = std::fs::read_to_string(Path::new(file)).with_context(|| format!("reading {file}"))?;
            let m = workbench_core::machine::parse_machine(&text).with_context(|| format!("in {file}"))?;
            let names = items[3..]
                .iter()
                .map(|s| s.as_atom().context("machine input must be symbol names"))
                .collect::<Result<Vec<_>>>()?;
            let input = m.input_symbols(&names)?;
            Box::new(TmProcess::new(name, GuardedRun::new(Arc::new(m), &input, caps.steps, caps.memory)?))
        }
        "rec" => {
            let term = items.get(2).context("expected a term at position 2")?.to_string();
            let e = workbench_core::recfun::parse_rec_with(&term, lib)?;
            let args = items[3..]
                .iter()
                .map(|s| s.as_atom().and_then(|a| a.parse::<Nat>().ok()).context("arguments must be natural numbers"))
                .collect::<Result<Vec<_>>>()?;
            Box::new(RecProcess::new(name, start_eval(&e, &args)?, caps.steps))
        }
        "prove" => {
            if items.len() != 3 {
                bail!("expected (prove NAME FORMULA)");
            }
            let f = parse_formula(&items[2].to_string())?;
            Box::new(ProofProcess::new(name, ProofSearch::new(f, AxiomSystem::peano(), caps.candidates, caps.mode)))
        }
        other => bail!("unknown process kind `{other}` (expected tm, rec or prove)"),
    };
    Ok(p)
}
