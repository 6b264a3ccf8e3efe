//! Python bindings. Big numbers cross as Python `int`; formulas, terms and
//! proofs cross as their s-expression text.

use std::sync::Arc;

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use workbench_core::arith::{
    self, check_proof as core_check_proof, decode_formula as core_decode_formula,
    decode_proof as core_decode_proof, encode_formula as core_encode_formula, encode_proof, parse_formula,
    parse_proof, render_proof, AxiomSystem, SearchMode, SearchOutcome,
};
use workbench_core::dovetail::{fairness_audit as core_fairness_audit, Trace};
use workbench_core::harness::{self, emit_report, Budgets, Instance, ReportFormat, RunRecord, RunReport};
use workbench_core::loop_guard::{self, GuardedOutcome, SpaceBound, SpacePolicy, SpaceVerdict};
use workbench_core::machine::{self, MachineSpec, RunOutcome};
use workbench_core::recfun::{self, Library, MuOutcome, Progress, RecExpr};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A Turing machine parsed from the text description format.
#[pyclass(module = "workbench", frozen)]
struct Machine {
    spec: Arc<MachineSpec>,
}

#[pymethods]
impl Machine {
    #[new]
    fn new(text: &str) -> PyResult<Machine> {
        Ok(Machine { spec: Arc::new(machine::parse_machine(text).map_err(err)?) })
    }

    fn description(&self) -> String {
        self.spec.to_description()
    }

    /// Plain run. Returns `(outcome, steps, tape)`.
    #[pyo3(signature = (input = "", budget = 1_000_000))]
    fn run(&self, input: &str, budget: u64) -> PyResult<(String, u64, String)> {
        let input = self.spec.parse_input(input).map_err(err)?;
        let out = machine::run(&self.spec, &input, budget).map_err(err)?;
        let label = match out {
            RunOutcome::Halted(_) => "halted",
            RunOutcome::Stuck(_) => "stuck",
            RunOutcome::BudgetExhausted(_) => "budget-exhausted",
        };
        let c = out.configuration();
        Ok((label.into(), c.steps, c.render(&self.spec)))
    }

    /// Loop-guarded run. The dict has `outcome`, `steps`, `ids_recorded`
    /// and, on a repeat, `first` and `repeat`.
    #[pyo3(signature = (input = "", budget = 1_000_000, memory_cap = 1_000_000))]
    fn detect<'py>(&self, py: Python<'py>, input: &str, budget: u64, memory_cap: u64) -> PyResult<Bound<'py, PyDict>> {
        let input = self.spec.parse_input(input).map_err(err)?;
        let r = loop_guard::guarded_run(&self.spec, &input, budget, memory_cap).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("outcome", r.outcome.label())?;
        d.set_item("steps", r.steps)?;
        d.set_item("ids_recorded", r.ids_recorded)?;
        if let GuardedOutcome::SelfTermination { first, repeat } = r.outcome {
            d.set_item("first", first)?;
            d.set_item("repeat", repeat)?;
        }
        Ok(d)
    }

    /// Decides a run confined to `cells` cells: `("halts", steps)`,
    /// `("stuck", steps)`, `("loops", first, repeat)` style tuples flattened
    /// to `(verdict, a, b)` with `b = None` when unused.
    #[pyo3(signature = (cells, input = ""))]
    fn decide_space_bounded(&self, cells: u64, input: &str) -> PyResult<(String, u64, Option<u64>)> {
        let input = self.spec.parse_input(input).map_err(err)?;
        let bound = SpaceBound { cells, policy: SpacePolicy::Reject };
        Ok(match loop_guard::decide_space_bounded(&self.spec, &input, bound).map_err(err)? {
            SpaceVerdict::Halts(s) => ("halts".into(), s, None),
            SpaceVerdict::Stuck(s) => ("stuck".into(), s, None),
            SpaceVerdict::Loops { first, repeat } => ("loops".into(), first, Some(repeat)),
            SpaceVerdict::ExceedsSpace(s) => ("exceeds-space".into(), s, None),
        })
    }
}

/// A recursive term; names from the standard library may be used.
#[pyclass(module = "workbench", frozen)]
struct RecTerm {
    expr: RecExpr,
}

#[pymethods]
impl RecTerm {
    #[new]
    fn new(text: &str) -> PyResult<RecTerm> {
        Ok(RecTerm { expr: recfun::parse_rec_with(text, &Library::standard()).map_err(err)? })
    }

    #[getter]
    fn arity(&self) -> usize {
        self.expr.arity()
    }

    fn is_mu_free(&self) -> bool {
        self.expr.is_mu_free()
    }

    /// Small-step evaluation; `None` if `budget` steps are not enough.
    #[pyo3(signature = (args, budget = 1_000_000))]
    fn eval(&self, args: Vec<BigUint>, budget: u64) -> PyResult<Option<BigUint>> {
        let mut state = recfun::start_eval(&self.expr, &args).map_err(err)?;
        Ok(match state.advance(budget).map_err(err)? {
            Progress::Done(v) => Some(v),
            Progress::Running => None,
        })
    }

    /// For `(mu f)`: the least zero and the `(y, f(.., y))` pairs seen, or
    /// `None` when the budget runs out.
    #[pyo3(signature = (args, budget = 1_000_000))]
    fn mu(&self, args: Vec<BigUint>, budget: u64) -> PyResult<Option<(BigUint, Vec<(BigUint, BigUint)>)>> {
        Ok(match recfun::eval_mu(&self.expr, &args, budget).map_err(err)? {
            MuOutcome::Value(t) => Some((t.result, t.witnesses)),
            MuOutcome::BudgetExhausted { .. } => None,
        })
    }

    fn __str__(&self) -> String {
        self.expr.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RecTerm({:?})", self.expr.to_string())
    }
}

#[pyfunction]
fn encode_formula(text: &str) -> PyResult<BigUint> {
    Ok(core_encode_formula(&parse_formula(text).map_err(err)?))
}

#[pyfunction]
fn decode_formula(x: BigUint) -> PyResult<String> {
    Ok(core_decode_formula(&x).map_err(err)?.to_string())
}

/// Code of a proof given in the proof-file format.
#[pyfunction]
fn encode_proof_text(text: &str) -> PyResult<BigUint> {
    Ok(encode_proof(&parse_proof(text).map_err(err)?))
}

#[pyfunction]
fn decode_proof(x: BigUint) -> PyResult<Vec<String>> {
    Ok(core_decode_proof(&x).map_err(err)?.iter().map(|f| f.to_string()).collect())
}

/// `(valid, message)` for a proof file.
#[pyfunction]
fn check_proof(text: &str) -> PyResult<(bool, String)> {
    let p = parse_proof(text).map_err(err)?;
    let r = core_check_proof(&p, &AxiomSystem::peano());
    Ok((r.is_valid(), r.to_string()))
}

#[pyfunction]
fn xby(x: BigUint, y: BigUint) -> bool {
    arith::xby(&x, &y, &AxiomSystem::peano())
}

/// `(x, proof_text)` on success, `None` otherwise.
#[pyfunction]
#[pyo3(signature = (formula, budget = 100_000, mode = "saturation"))]
fn proof_search(formula: &str, budget: u64, mode: &str) -> PyResult<Option<(BigUint, String)>> {
    let f = parse_formula(formula).map_err(err)?;
    let mode: SearchMode = mode.parse().map_err(err)?;
    Ok(match arith::proof_search(&f, &AxiomSystem::peano(), budget, mode) {
        SearchOutcome::Found { x, proof, .. } => Some((x, render_proof(&proof))),
        SearchOutcome::NotFound { .. } => None,
    })
}

/// Largest slice disparity among live processes in a trace file.
#[pyfunction]
fn fairness_audit(text: &str) -> PyResult<u64> {
    core_fairness_audit(&Trace::parse(text).map_err(err)?).map_err(err)
}

/// One zero-search versus proof-search run.
#[pyclass(module = "workbench", frozen)]
struct Report {
    inner: RunReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn verdict(&self) -> &'static str {
        self.inner.verdict.label()
    }

    #[getter]
    fn case(&self) -> &'static str {
        self.inner.verdict.case()
    }

    #[getter]
    fn y(&self) -> Option<u64> {
        RunRecord::from(&self.inner).y
    }

    #[getter]
    fn x(&self) -> Option<BigUint> {
        match &self.inner.verdict {
            harness::Verdict::ProofFound { x, .. } => Some(x.clone()),
            _ => None,
        }
    }

    #[getter]
    fn t1_steps(&self) -> u64 {
        self.inner.t1_steps
    }

    #[getter]
    fn t2_steps(&self) -> u64 {
        self.inner.t2_steps
    }

    #[getter]
    fn ticks(&self) -> u64 {
        self.inner.ticks
    }

    fn table(&self) -> String {
        emit_report(std::slice::from_ref(&self.inner), ReportFormat::Table)
    }

    fn record(&self) -> String {
        emit_report(std::slice::from_ref(&self.inner), ReportFormat::Records)
    }

    fn trace(&self) -> String {
        self.inner.trace.render()
    }
}

/// Races zero search on `G(a, y)` against proof search for `H(a, y)`.
/// Give `g` (a term) for the rec backend or `machine` (description text)
/// for the tm backend.
#[pyfunction]
#[pyo3(signature = (a, h, g = None, machine = None, t1_steps = 1_000_000, t2_candidates = 100_000, slice = 64, ticks = 1_000_000, mode = "saturation"))]
#[allow(clippy::too_many_arguments)]
fn run_theorem_one(
    a: u64,
    h: &str,
    g: Option<&str>,
    machine: Option<&str>,
    t1_steps: u64,
    t2_candidates: u64,
    slice: u64,
    ticks: u64,
    mode: &str,
) -> PyResult<Report> {
    let h = parse_formula(h).map_err(err)?;
    let mut inst = match (g, machine) {
        (Some(g), None) => {
            Instance::rec("py", recfun::parse_rec_with(g, &Library::standard()).map_err(err)?, a, h)
        }
        (None, Some(m)) => Instance::tm("py", Arc::new(machine::parse_machine(m).map_err(err)?), a, h),
        _ => return Err(PyValueError::new_err("give exactly one of g and machine")),
    };
    inst.budgets = Budgets { t1_steps, t2_candidates, slice, ticks };
    inst.mode = mode.parse().map_err(err)?;
    Ok(Report { inner: harness::run_theorem_one(&inst).map_err(err)? })
}

/// The built-in suite as a report in `format` ("table" or "records").
#[pyfunction]
#[pyo3(signature = (format = "table"))]
fn run_suite(format: &str) -> PyResult<String> {
    let format: ReportFormat = format.parse().map_err(err)?;
    let reports = harness::standard_suite().run().map_err(err)?;
    Ok(emit_report(&reports, format))
}

#[pymodule]
fn workbench(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Machine>()?;
    m.add_class::<RecTerm>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(encode_formula, m)?)?;
    m.add_function(wrap_pyfunction!(decode_formula, m)?)?;
    m.add_function(wrap_pyfunction!(encode_proof_text, m)?)?;
    m.add_function(wrap_pyfunction!(decode_proof, m)?)?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(xby, m)?)?;
    m.add_function(wrap_pyfunction!(proof_search, m)?)?;
    m.add_function(wrap_pyfunction!(fairness_audit, m)?)?;
    m.add_function(wrap_pyfunction!(run_theorem_one, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
