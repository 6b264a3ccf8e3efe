use std::ops::Deref;

use super::config::Configuration;
use super::{MachineError, MachineSpec, State, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Continue(Configuration),
    Halted(Configuration),
    Stuck(Configuration),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted(Configuration),
    Stuck(Configuration),
    BudgetExhausted(Configuration),
}

impl RunOutcome {
    pub fn configuration(&self) -> &Configuration {
        match self {
            RunOutcome::Halted(c) | RunOutcome::Stuck(c) | RunOutcome::BudgetExhausted(c) => c,
        }
    }
}

pub fn initial_configuration(m: &MachineSpec, input: &[Symbol]) -> Result<Configuration, MachineError> {
    if let Some(bad) = input.iter().find(|s| !m.is_input_symbol(**s)) {
        let name = if m.has_symbol(*bad) { m.symbol_name(*bad).to_string() } else { format!("#{}", bad.0) };
        return Err(MachineError::InputSymbol(name));
    }
    Ok(Configuration::new(
        m.start(),
        0,
        input.iter().enumerate().map(|(i, s)| (i as i64, *s)),
        0,
    ))
}

fn check_consistent(m: &MachineSpec, c: &Configuration) -> Result<(), MachineError> {
    if !m.has_state(c.state) {
        return Err(MachineError::Inconsistent(format!("unknown state index {}", c.state.0)));
    }
    if let Some(bad) = c.tape.values().find(|s| !m.has_symbol(**s)) {
        return Err(MachineError::Inconsistent(format!("unknown symbol index {}", bad.0)));
    }
    Ok(())
}

/// One transition from `c`. The input configuration is left untouched.
pub fn step(m: &MachineSpec, c: &Configuration) -> Result<StepOutcome, MachineError> {
    check_consistent(m, c)?;
    if m.is_halting(c.state) {
        return Ok(StepOutcome::Halted(c.clone()));
    }
    let Some(rule) = m.rule(c.state, c.head_symbol()) else {
        return Ok(StepOutcome::Stuck(c.clone()));
    };
    let mut next = c.clone();
    if rule.write.is_blank() {
        next.tape.remove(&c.head);
    } else {
        next.tape.insert(c.head, rule.write);
    }
    next.head += rule.dir.delta();
    next.state = rule.next;
    next.steps += 1;
    Ok(StepOutcome::Continue(next))
}

/// Iterates [`step`] on a fresh simulator until the machine stops or `budget`
/// steps have been taken.
pub fn run(m: &MachineSpec, input: &[Symbol], budget: u64) -> Result<RunOutcome, MachineError> {
    let mut sim = Simulator::new(m, &initial_configuration(m, input)?)?;
    while sim.steps() < budget {
        match sim.step() {
            Ok(_) => {}
            Err(Stop::Halted) => return Ok(RunOutcome::Halted(sim.configuration())),
            Err(Stop::Stuck) => return Ok(RunOutcome::Stuck(sim.configuration())),
        }
    }
    // The budget may run out exactly when the machine reaches a halt state.
    Ok(match sim.stop_reason() {
        Some(Stop::Halted) => RunOutcome::Halted(sim.configuration()),
        Some(Stop::Stuck) => RunOutcome::Stuck(sim.configuration()),
        None => RunOutcome::BudgetExhausted(sim.configuration()),
    })
}

/// What changed during one in-place step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub cell: i64,
    pub old: Symbol,
    pub new: Symbol,
    pub from: State,
    pub to: State,
    pub head_after: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    Halted,
    Stuck,
}

/// In-place simulator over a dense tape. Produces the same sequence of
/// configurations as repeated [`step`] without cloning the tape each time.
///
/// `M` is anything that dereferences to a machine: a borrow for short runs,
/// an `Arc<MachineSpec>` for simulators that must own their machine.
#[derive(Debug, Clone)]
pub struct Simulator<M> {
    machine: M,
    cells: Vec<Symbol>,
    /// Cell index of `cells[0]`.
    origin: i64,
    head: i64,
    state: State,
    steps: u64,
}

impl<M: Deref<Target = MachineSpec>> Simulator<M> {
    pub fn new(machine: M, c: &Configuration) -> Result<Self, MachineError> {
        check_consistent(&machine, c)?;
        let lo = c.tape.keys().next().copied().unwrap_or(c.head).min(c.head);
        let hi = c.tape.keys().next_back().copied().unwrap_or(c.head).max(c.head);
        let mut cells = vec![Symbol::BLANK; (hi - lo + 1) as usize];
        for (k, v) in &c.tape {
            cells[(k - lo) as usize] = *v;
        }
        Ok(Simulator { machine, cells, origin: lo, head: c.head, state: c.state, steps: c.steps })
    }

    pub fn machine(&self) -> &MachineSpec {
        &self.machine
    }

    pub fn state(&self) -> State {
        self.state
    }

    pub fn head(&self) -> i64 {
        self.head
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn read(&self, cell: i64) -> Symbol {
        let idx = cell - self.origin;
        if idx < 0 {
            return Symbol::BLANK;
        }
        self.cells.get(idx as usize).copied().unwrap_or(Symbol::BLANK)
    }

    /// Why the machine cannot step from here, if it cannot.
    pub fn stop_reason(&self) -> Option<Stop> {
        if self.machine.is_halting(self.state) {
            Some(Stop::Halted)
        } else if self.machine.rule(self.state, self.read(self.head)).is_none() {
            Some(Stop::Stuck)
        } else {
            None
        }
    }

    pub fn step(&mut self) -> Result<Transition, Stop> {
        if let Some(stop) = self.stop_reason() {
            return Err(stop);
        }
        let old = self.read(self.head);
        let rule = self.machine.rule(self.state, old).expect("checked by stop_reason");
        self.write(self.head, rule.write);
        let t = Transition {
            cell: self.head,
            old,
            new: rule.write,
            from: self.state,
            to: rule.next,
            head_after: self.head + rule.dir.delta(),
        };
        self.head = t.head_after;
        self.state = rule.next;
        self.steps += 1;
        Ok(t)
    }

    fn write(&mut self, cell: i64, sym: Symbol) {
        if cell < self.origin {
            if sym.is_blank() {
                return;
            }
            // Grow geometrically to keep left-running machines linear.
            let grow = ((self.origin - cell) as usize).max(self.cells.len());
            let mut front = vec![Symbol::BLANK; grow];
            self.origin -= grow as i64;
            front.append(&mut self.cells);
            self.cells = front;
        }
        let idx = (cell - self.origin) as usize;
        if idx >= self.cells.len() {
            if sym.is_blank() {
                return;
            }
            self.cells.resize((idx + 1).max(self.cells.len() * 2), Symbol::BLANK);
        }
        self.cells[idx] = sym;
    }

    pub fn configuration(&self) -> Configuration {
        Configuration::new(
            self.state,
            self.head,
            self.cells.iter().enumerate().map(|(i, s)| (i as i64 + self.origin, *s)),
            self.steps,
        )
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::machine::fixtures::*;
    use crate::machine::{parse_machine, MachineDef};

    #[test]
    fn ping_pong_first_step() {
        let m = parse_machine(PING_PONG).unwrap();
        let c0 = initial_configuration(&m, &[]).unwrap();
        assert_eq!(c0.state, m.state("q0").unwrap());
        assert!(c0.tape.is_empty());
        match step(&m, &c0).unwrap() {
            StepOutcome::Continue(c1) => {
                assert_eq!(c1.state, m.state("q1").unwrap());
                assert_eq!(c1.head, 1);
                assert!(c1.tape.is_empty());
                assert_eq!(c1.steps, 1);
            }
            other => panic!("expected Continue, got {other:?}"),
        }
    }

    #[test]
    fn halted_and_stuck() {
        let m = parse_machine(PING_PONG).unwrap();
        let halted = Configuration::new(m.state("halt").unwrap(), 3, [], 9);
        assert_eq!(step(&m, &halted).unwrap(), StepOutcome::Halted(halted.clone()));
        let one = m.symbol("1").unwrap();
        let stuck = Configuration::new(m.state("q0").unwrap(), 0, [(0, one)], 0);
        assert_eq!(step(&m, &stuck).unwrap(), StepOutcome::Stuck(stuck.clone()));
    }

    #[test]
    fn inconsistent_configuration() {
        let m = parse_machine(PING_PONG).unwrap();
        let bad = Configuration::new(State(40), 0, [], 0);
        assert!(matches!(step(&m, &bad), Err(MachineError::Inconsistent(_))));
        let bad = Configuration::new(State(0), 0, [(0, Symbol(9))], 0);
        assert!(matches!(step(&m, &bad), Err(MachineError::Inconsistent(_))));
    }

    #[test]
    fn initial_configuration_places_input() {
        let m = parse_machine(crate::machine::format::tests::EXTERNAL_EXAMPLE).unwrap();
        let input = m.parse_input("10").unwrap();
        let c = initial_configuration(&m, &input).unwrap();
        assert_eq!(c.read(0), m.symbol("1").unwrap());
        assert_eq!(c.read(1), m.symbol("0").unwrap());
        assert_eq!(c.tape.len(), 2);
        assert_eq!(c.steps, 0);
        assert!(matches!(m.parse_input("12"), Err(MachineError::InputSymbol(s)) if s == "2"));
        assert!(matches!(m.parse_input("1_"), Err(MachineError::InputSymbol(_))));
    }

    #[test]
    fn run_examples() {
        let halting_start = MachineSpec::new(&MachineDef {
            states: vec!["h".into()],
            start: "h".into(),
            blank: "_".into(),
            tape_alphabet: vec!["_".into(), "1".into()],
            input_alphabet: vec!["1".into()],
            halt: vec!["h".into()],
            rules: vec![],
        })
        .unwrap();
        let input = halting_start.parse_input("111").unwrap();
        match run(&halting_start, &input, 0).unwrap() {
            RunOutcome::Halted(c) => assert_eq!(c.steps, 0),
            other => panic!("{other:?}"),
        }

        let pp = parse_machine(PING_PONG).unwrap();
        match run(&pp, &[], 100).unwrap() {
            RunOutcome::BudgetExhausted(c) => assert_eq!(c.steps, 100),
            other => panic!("{other:?}"),
        }

        let one = parse_machine(ONE_RULE_HALT).unwrap();
        match run(&one, &[], 100).unwrap() {
            RunOutcome::Halted(c) => {
                assert_eq!(c.steps, 1);
                assert_eq!(c.head, 1);
            }
            other => panic!("{other:?}"),
        }
        // A budget that ends exactly on the halting step still reports a halt.
        assert!(matches!(run(&one, &[], 1).unwrap(), RunOutcome::Halted(_)));
        assert!(matches!(run(&one, &[], 0).unwrap(), RunOutcome::BudgetExhausted(_)));
    }

    proptest! {
        #[test]
        fn simulator_matches_functional_step(m in arb_machine(), input in prop::collection::vec(1u32..3, 0..5)) {
            let input: Vec<Symbol> = input.into_iter().map(Symbol).collect();
            let mut c = initial_configuration(&m, &input).unwrap();
            let mut sim = Simulator::new(&m, &c).unwrap();
            for _ in 0..60 {
                let functional = step(&m, &c).unwrap();
                // Determinism.
                prop_assert_eq!(&functional, &step(&m, &c).unwrap());
                match (functional, sim.step()) {
                    (StepOutcome::Continue(next), Ok(_)) => {
                        prop_assert!(next.is_normal());
                        prop_assert_eq!(next.steps, c.steps + 1);
                        prop_assert_eq!(&next, &sim.configuration());
                        c = next;
                    }
                    (StepOutcome::Halted(_), Err(Stop::Halted)) | (StepOutcome::Stuck(_), Err(Stop::Stuck)) => break,
                    (f, s) => prop_assert!(false, "diverged: {:?} vs {:?}", f, s),
                }
            }
        }

        #[test]
        fn run_takes_min_of_budget_and_halting_step(m in arb_machine(), budget in 0u64..40) {
            let unbounded = run(&m, &[], 200).unwrap();
            let bounded = run(&m, &[], budget).unwrap();
            let stop = match &unbounded {
                RunOutcome::BudgetExhausted(_) => u64::MAX,
                other => other.configuration().steps,
            };
            prop_assert_eq!(bounded.configuration().steps, budget.min(stop));
        }
    }
}
