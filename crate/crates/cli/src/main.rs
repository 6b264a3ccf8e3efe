mod race_spec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use workbench_core::arith::{
    check_proof, decode_formula, decode_proof, encode_formula, encode_proof, parse_formula, parse_proof,
    render_proof, AxiomSystem, GodelNumber, ProofSearch, SearchMode, SearchOutcome,
};
use workbench_core::dovetail::race;
use workbench_core::harness::{
    emit_report, run_theorem_one, standard_suite, Budgets, Instance, ReportFormat, Suite,
};
use workbench_core::loop_guard::{
    decide_space_bounded, guarded_run, GuardedOutcome, SpaceBound, SpacePolicy, SpaceVerdict,
};
use workbench_core::machine::{parse_machine, run, MachineSpec, RunOutcome};
use workbench_core::recfun::{eval_mu, parse_rec_with, start_eval, Library, MuOutcome, Nat, Progress, RecExpr};

#[derive(Parser)]
#[command(name = "workbench", version, about = "Turing machines, recursive terms, Gödel-coded proofs and dovetailed races")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Turing machine, plainly or under the loop guard.
    #[command(subcommand)]
    Tm(TmCommand),
    /// Evaluate recursive terms.
    #[command(subcommand)]
    Rec(RecCommand),
    /// Gödel numbers of formulas and proofs.
    #[command(subcommand)]
    Godel(GodelCommand),
    /// Check or search for proofs.
    #[command(subcommand)]
    Proof(ProofCommand),
    /// Dovetail several processes and write the tick trace.
    Race(RaceArgs),
    /// Race zero search on G(a, y) against proof search for H(a, y).
    Theorem1(TheoremArgs),
    /// Run an instance suite and print the summary.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct Out {
    /// Write the output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

impl Out {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct MachineInput {
    /// Machine description file.
    machine: PathBuf,
    /// Input symbols: whitespace-separated names, or one character per symbol.
    #[arg(long, default_value = "")]
    input: String,
}

#[derive(Subcommand)]
enum TmCommand {
    /// Plain simulation.
    Run {
        #[command(flatten)]
        m: MachineInput,
        #[arg(long, default_value_t = 1_000_000)]
        budget_steps: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Simulation with configuration-repeat detection.
    Detect {
        #[command(flatten)]
        m: MachineInput,
        #[arg(long, default_value_t = 1_000_000)]
        budget_steps: u64,
        /// Largest number of configurations remembered.
        #[arg(long, default_value_t = 1_000_000)]
        memory_cap: u64,
        /// Confine the run to cells 0..N and decide it outright.
        #[arg(long, value_name = "N")]
        space_bound: Option<u64>,
        #[arg(long, value_enum, default_value_t = PolicyArg::Reject)]
        space_policy: PolicyArg,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Reject,
    Stuck,
}

#[derive(Args)]
struct TermArgs {
    /// A term, or the name of a library term.
    term: String,
    /// Natural-number arguments.
    args: Vec<Nat>,
    /// Extra `(def NAME TERM)` definitions, added to the standard library.
    #[arg(long, value_name = "FILE")]
    lib: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    budget_steps: u64,
}

#[derive(Subcommand)]
enum RecCommand {
    /// Evaluate any term with the small-step evaluator.
    Eval {
        #[command(flatten)]
        t: TermArgs,
        #[command(flatten)]
        out: Out,
    },
    /// Evaluate a `(mu f)` term and list the kernel values it inspected.
    Mu {
        #[command(flatten)]
        t: TermArgs,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum GodelCommand {
    /// Print the code of a formula, or of a proof file with --proof.
    Encode {
        #[arg(required_unless_present = "proof", conflicts_with = "proof")]
        formula: Option<String>,
        #[arg(long, value_name = "FILE")]
        proof: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Decode a number as a formula, or as a sequence of formulas with --proof.
    Decode {
        number: GodelNumber,
        #[arg(long)]
        proof: bool,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    /// Logical axioms plus the arithmetic axioms and induction.
    Peano,
    /// Logical axioms only.
    Logic,
}

impl SystemArg {
    fn system(self) -> AxiomSystem {
        match self {
            SystemArg::Peano => AxiomSystem::peano(),
            SystemArg::Logic => AxiomSystem::logic(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Saturation,
    Numeric,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> SearchMode {
        match m {
            ModeArg::Saturation => SearchMode::Saturation,
            ModeArg::Numeric => SearchMode::Numeric,
        }
    }
}

#[derive(Subcommand)]
enum ProofCommand {
    /// Check a proof file line by line.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SystemArg::Peano)]
        system: SystemArg,
        #[command(flatten)]
        out: Out,
    },
    /// Search for a proof of a formula.
    Search {
        formula: String,
        #[arg(long, default_value_t = 100_000)]
        budget_candidates: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Saturation)]
        mode: ModeArg,
        /// First code tried in numeric mode.
        #[arg(long, value_name = "X")]
        start: Option<GodelNumber>,
        #[arg(long, value_enum, default_value_t = SystemArg::Peano)]
        system: SystemArg,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct RaceArgs {
    /// Process specs: `(tm NAME FILE SYMBOL..)`, `(rec NAME TERM ARG..)` or
    /// `(prove NAME FORMULA)`.
    #[arg(required = true)]
    processes: Vec<String>,
    #[arg(long, default_value_t = 64)]
    slice: u64,
    #[arg(long, default_value_t = 1_000_000)]
    budget_ticks: u64,
    /// Per-process step cap for machines and terms.
    #[arg(long, default_value_t = 1_000_000)]
    budget_steps: u64,
    #[arg(long, default_value_t = 100_000)]
    budget_candidates: u64,
    #[arg(long, default_value_t = 1_000_000)]
    memory_cap: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Saturation)]
    mode: ModeArg,
    #[arg(long, value_name = "FILE")]
    lib: Option<PathBuf>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = Budgets::default().t1_steps)]
    budget_steps: u64,
    #[arg(long, default_value_t = Budgets::default().t2_candidates)]
    budget_candidates: u64,
    #[arg(long, default_value_t = Budgets::default().slice)]
    slice: u64,
    #[arg(long, default_value_t = Budgets::default().ticks)]
    budget_ticks: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Rec,
    Tm,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Records,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Table => ReportFormat::Table,
            FormatArg::Records => ReportFormat::Records,
        }
    }
}

#[derive(Args)]
struct TheoremArgs {
    #[arg(long, value_enum, default_value_t = BackendArg::Rec)]
    backend: BackendArg,
    /// G as a term of arity 2 (rec backend).
    #[arg(long, short = 'g')]
    g: Option<String>,
    /// Machine computing G on input `1^a 0 1^y` (tm backend).
    #[arg(long)]
    machine: Option<PathBuf>,
    #[arg(long, short = 'a')]
    a: u64,
    /// H with (var 1) for a and (var 2) for y.
    #[arg(long)]
    h: String,
    #[arg(long, default_value = "theorem1")]
    name: String,
    #[arg(long, value_name = "FILE")]
    lib: Option<PathBuf>,
    #[command(flatten)]
    budgets: BudgetArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Saturation)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Also write the race trace here.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    #[command(flatten)]
    out: Out,
}

#[derive(Args)]
struct SuiteArgs {
    /// Suite file; the built-in suite when omitted.
    #[arg(long, value_name = "FILE")]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Fail when a verdict differs from the suite's `expect`.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    out: Out,
}

fn library(extra: Option<&Path>) -> Result<Library> {
    let mut lib = Library::standard();
    if let Some(path) = extra {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut combined = String::new();
        for (name, term) in lib.iter() {
            combined.push_str(&format!("(def {name} {term})\n"));
        }
        combined.push_str(&text);
        lib = Library::parse(&combined).with_context(|| format!("in {}", path.display()))?;
    }
    Ok(lib)
}

fn load_machine(path: &Path) -> Result<MachineSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_machine(&text).with_context(|| format!("in {}", path.display()))
}

fn term(text: &str, lib: &Library) -> Result<RecExpr> {
    parse_rec_with(text, lib).with_context(|| format!("term `{text}`"))
}

fn tm(cmd: TmCommand) -> Result<()> {
    match cmd {
        TmCommand::Run { m, budget_steps, out } => {
            let spec = load_machine(&m.machine)?;
            let input = spec.parse_input(&m.input)?;
            let outcome = run(&spec, &input, budget_steps)?;
            let label = match &outcome {
                RunOutcome::Halted(_) => "halted",
                RunOutcome::Stuck(_) => "stuck",
                RunOutcome::BudgetExhausted(_) => "budget-exhausted",
            };
            let c = outcome.configuration();
            out.emit(&format!("{label} steps={}\ntape {}\n", c.steps, c.render(&spec)))
        }
        TmCommand::Detect { m, budget_steps, memory_cap, space_bound, space_policy, out } => {
            let spec = load_machine(&m.machine)?;
            let input = spec.parse_input(&m.input)?;
            let line = match space_bound {
                Some(cells) => {
                    let policy = match space_policy {
                        PolicyArg::Reject => SpacePolicy::Reject,
                        PolicyArg::Stuck => SpacePolicy::TreatAsStuck,
                    };
                    match decide_space_bounded(&spec, &input, SpaceBound { cells, policy })? {
                        SpaceVerdict::Halts(s) => format!("halts steps={s}"),
                        SpaceVerdict::Stuck(s) => format!("stuck steps={s}"),
                        SpaceVerdict::Loops { first, repeat } => format!("loops first={first} repeat={repeat}"),
                        SpaceVerdict::ExceedsSpace(s) => format!("exceeds-space step={s}"),
                    }
                }
                None => {
                    let r = guarded_run(&spec, &input, budget_steps, memory_cap)?;
                    let detail = match r.outcome {
                        GuardedOutcome::SelfTermination { first, repeat } => format!(" first={first} repeat={repeat}"),
                        _ => String::new(),
                    };
                    format!("{}{detail} steps={} ids={}", r.outcome.label(), r.steps, r.ids_recorded)
                }
            };
            out.emit(&(line + "\n"))
        }
    }
}

fn rec(cmd: RecCommand) -> Result<()> {
    match cmd {
        RecCommand::Eval { t, out } => {
            let lib = library(t.lib.as_deref())?;
            let e = term(&t.term, &lib)?;
            let mut state = start_eval(&e, &t.args)?;
            let text = match state.advance(t.budget_steps)? {
                Progress::Done(v) => format!("value {v} steps={}\n", state.steps()),
                Progress::Running => format!("budget-exhausted steps={}\n", state.steps()),
            };
            out.emit(&text)
        }
        RecCommand::Mu { t, out } => {
            let lib = library(t.lib.as_deref())?;
            let e = term(&t.term, &lib)?;
            let text = match eval_mu(&e, &t.args, t.budget_steps)? {
                MuOutcome::Value(trace) => {
                    let mut s = format!("value {}\n", trace.result);
                    for (y, v) in &trace.witnesses {
                        s.push_str(&format!("witness y={y} kernel={v}\n"));
                    }
                    s
                }
                MuOutcome::BudgetExhausted { y, steps } => format!("budget-exhausted y={y} steps={steps}\n"),
            };
            out.emit(&text)
        }
    }
}

fn read_proof(path: &Path) -> Result<workbench_core::arith::ProofSequence> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_proof(&text).with_context(|| format!("in {}", path.display()))
}

fn godel(cmd: GodelCommand) -> Result<()> {
    match cmd {
        GodelCommand::Encode { formula, proof, out } => {
            let x = match (formula, proof) {
                (Some(f), None) => encode_formula(&parse_formula(&f)?),
                (None, Some(p)) => encode_proof(&read_proof(&p)?),
                _ => bail!("give either a formula or --proof"),
            };
            out.emit(&format!("{x}\n"))
        }
        GodelCommand::Decode { number, proof, out } => {
            let text = if proof {
                decode_proof(&number)?.iter().map(|f| format!("{f}\n")).collect()
            } else {
                format!("{}\n", decode_formula(&number)?)
            };
            out.emit(&text)
        }
    }
}

fn proof(cmd: ProofCommand) -> Result<()> {
    match cmd {
        ProofCommand::Check { file, system, out } => {
            let p = read_proof(&file)?;
            let result = check_proof(&p, &system.system());
            let mut text = format!("{result}\n");
            if result.is_valid() {
                text.push_str(&format!("x {}\n", encode_proof(&p)));
            }
            out.emit(&text)
        }
        ProofCommand::Search { formula, budget_candidates, mode, start, system, out } => {
            let target = parse_formula(&formula)?;
            let search = match start {
                Some(x) => {
                    if !matches!(mode, ModeArg::Numeric) {
                        bail!("--start only applies to --mode numeric");
                    }
                    ProofSearch::numeric_from(target, system.system(), budget_candidates, x)
                }
                None => ProofSearch::new(target, system.system(), budget_candidates, mode.into()),
            };
            let text = match search.run() {
                SearchOutcome::Found { x, steps, proof } => {
                    format!("found steps={steps} lines={}\nx {x}\n{}", proof.len(), render_proof(&proof))
                }
                SearchOutcome::NotFound { steps, saturated } => {
                    let why = if saturated { "saturated" } else { "budget-exhausted" };
                    format!("not-found {why} steps={steps}\n")
                }
            };
            out.emit(&text)
        }
    }
}

fn race_cmd(args: RaceArgs) -> Result<()> {
    let lib = library(args.lib.as_deref())?;
    let caps = race_spec::Caps {
        steps: args.budget_steps,
        candidates: args.budget_candidates,
        memory: args.memory_cap,
        mode: args.mode.into(),
    };
    let mut processes = args
        .processes
        .iter()
        .map(|s| race_spec::build(s, &lib, &caps))
        .collect::<Result<Vec<_>>>()?;
    if args.slice == 0 {
        bail!("--slice must be positive");
    }
    let result = race(&mut processes, args.slice, args.budget_ticks);
    args.out.emit(&format!("{}outcome {}\n", result.trace.render(), result.outcome))
}

fn theorem1(args: TheoremArgs) -> Result<()> {
    let h = parse_formula(&args.h).context("--h")?;
    let mut inst = match args.backend {
        BackendArg::Rec => {
            let lib = library(args.lib.as_deref())?;
            let g = args.g.as_deref().context("the rec backend needs -g")?;
            Instance::rec(&args.name, term(g, &lib)?, args.a, h)
        }
        BackendArg::Tm => {
            let path = args.machine.as_deref().context("the tm backend needs --machine")?;
            Instance::tm(&args.name, Arc::new(load_machine(path)?), args.a, h)
        }
    };
    let b = &args.budgets;
    inst.budgets =
        Budgets { t1_steps: b.budget_steps, t2_candidates: b.budget_candidates, slice: b.slice, ticks: b.budget_ticks };
    inst.mode = args.mode.into();
    let report = run_theorem_one(&inst)?;
    if let Some(p) = &args.trace {
        fs::write(p, report.trace.render()).with_context(|| format!("writing {}", p.display()))?;
    }
    args.out.emit(&emit_report(&[report], args.format.into()))
}

fn suite(args: SuiteArgs) -> Result<()> {
    let suite = match &args.file {
        Some(p) => Suite::load(p)?,
        None => standard_suite(),
    };
    let reports = suite.run()?;
    args.out.emit(&emit_report(&reports, args.format.into()))?;
    if args.check {
        let bad = suite.mismatches(&reports);
        if !bad.is_empty() {
            bail!("unexpected verdicts: {}", bad.join(", "));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tm(c) => tm(c),
        Command::Rec(c) => rec(c),
        Command::Godel(c) => godel(c),
        Command::Proof(c) => proof(c),
        Command::Race(a) => race_cmd(a),
        Command::Theorem1(a) => theorem1(a),
        Command::Suite(a) => suite(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
