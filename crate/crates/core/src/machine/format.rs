//! Line-oriented machine description format.
//!
//! ```text
//! states: q0 q1 halt
//! start: q0
//! blank: _
//! tape_alphabet: _ 0 1
//! input_alphabet: 0 1
//! halt: halt
//! delta: q0 _ -> q1 _ R
//! ```
//!
//! `#` starts a comment. Every `delta:` line adds one rule.

use super::{MachineDef, MachineError, MachineSpec, Move, RuleDef};

pub fn parse_machine(text: &str) -> Result<MachineSpec, MachineError> {
    let mut def = MachineDef::default();
    let mut seen = [false; 6];
    const KEYS: [&str; 6] = ["states", "start", "blank", "tape_alphabet", "input_alphabet", "halt"];

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| MachineError::Syntax { line, message };
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| syntax(format!("expected `key: value`, found `{content}`")))?;
        let key = key.trim();
        let tokens: Vec<String> = rest.split_whitespace().map(String::from).collect();

        if key == "delta" {
            let [state, read, arrow, next, write, dir] = tokens.as_slice() else {
                return Err(syntax("expected `delta: STATE SYMBOL -> STATE SYMBOL L|R`".into()));
            };
            if arrow != "->" {
                return Err(syntax(format!("expected `->`, found `{arrow}`")));
            }
            let dir = match dir.as_str() {
                "L" => Move::Left,
                "R" => Move::Right,
                other => return Err(syntax(format!("direction must be L or R, found `{other}`"))),
            };
            def.rules.push(RuleDef {
                state: state.clone(),
                read: read.clone(),
                next: next.clone(),
                write: write.clone(),
                dir,
                line: Some(line),
            });
            continue;
        }

        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| syntax(format!("unknown key `{key}`")))?;
        if seen[slot] {
            return Err(syntax(format!("`{key}` declared twice")));
        }
        seen[slot] = true;
        let single = |tokens: &[String]| -> Result<String, MachineError> {
            match tokens {
                [one] => Ok(one.clone()),
                _ => Err(syntax(format!("`{key}` takes exactly one name"))),
            }
        };
        match key {
            "states" => def.states = tokens,
            "start" => def.start = single(&tokens)?,
            "blank" => def.blank = single(&tokens)?,
            "tape_alphabet" => def.tape_alphabet = tokens,
            "input_alphabet" => def.input_alphabet = tokens,
            "halt" => def.halt = tokens,
            _ => unreachable!(),
        }
    }

    for (key, present) in KEYS.iter().zip(seen) {
        // An empty input alphabet is legal but must still be declared.
        if !present {
            return Err(MachineError::Missing(key));
        }
    }
    MachineSpec::new(&def)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::machine::fixtures::*;

    pub const EXTERNAL_EXAMPLE: &str = "\
states: q0 q1 halt
start: q0
blank: _
tape_alphabet: _ 0 1
input_alphabet: 0 1
halt: halt
delta: q0 _ -> q1 _ R
delta: q1 _ -> q0 _ L
";

    #[test]
    fn parses_documented_example() {
        let m = parse_machine(EXTERNAL_EXAMPLE).unwrap();
        assert_eq!(m.num_states(), 3);
        assert_eq!(m.num_symbols(), 3);
        assert_eq!(m.rules().count(), 2);
        assert_eq!(parse_machine(&m.to_description()).unwrap(), m);
    }

    #[test]
    fn ping_pong_has_one_symbol_plus_blank() {
        let m = parse_machine(PING_PONG).unwrap();
        assert_eq!(m.num_states(), 3);
        assert_eq!(m.num_symbols(), 2);
        assert!(m.is_halting(m.state("halt").unwrap()));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# a comment\n\n{}  # trailing\n", PING_PONG);
        assert!(parse_machine(&text).is_ok());
    }

    #[test]
    fn duplicate_rule_is_nondeterministic() {
        let text = format!("{PING_PONG}delta: q0 _ -> halt 1 R\n");
        assert!(matches!(
            parse_machine(&text),
            Err(MachineError::Nondeterministic { line: Some(9), .. })
        ));
    }

    #[test]
    fn rule_from_halt_state() {
        let text = format!("{PING_PONG}delta: halt _ -> q0 _ R\n");
        assert!(matches!(parse_machine(&text), Err(MachineError::HaltStateHasRule { .. })));
    }

    #[test]
    fn undeclared_names() {
        let text = format!("{PING_PONG}delta: q0 1 -> q9 _ R\n");
        assert!(matches!(
            parse_machine(&text),
            Err(MachineError::UndeclaredState { ref name, line: Some(9) }) if name == "q9"
        ));
        let text = format!("{PING_PONG}delta: q0 7 -> q1 _ R\n");
        assert!(matches!(parse_machine(&text), Err(MachineError::UndeclaredSymbol { .. })));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = format!("{PING_PONG}delta: q0 1 => q1 _ R\n");
        assert!(matches!(parse_machine(&text), Err(MachineError::Syntax { line: 9, .. })));
        let text = format!("{PING_PONG}delta: q0 1 -> q1 _ U\n");
        assert!(matches!(parse_machine(&text), Err(MachineError::Syntax { line: 9, .. })));
        assert!(matches!(parse_machine("states q0\n"), Err(MachineError::Syntax { line: 1, .. })));
        assert!(matches!(parse_machine("states: a\nstart: a b\n"), Err(MachineError::Syntax { line: 2, .. })));
        assert!(matches!(parse_machine("states: a\n"), Err(MachineError::Missing("start"))));
    }

    #[test]
    fn alphabet_checks() {
        let text = PING_PONG.replace("input_alphabet: 1", "input_alphabet: 1 _");
        assert_eq!(parse_machine(&text), Err(MachineError::BlankInInput));
        let text = PING_PONG.replace("input_alphabet: 1", "input_alphabet: 2");
        assert!(matches!(parse_machine(&text), Err(MachineError::InputNotInTape(_))));
        let text = PING_PONG.replace("blank: _", "blank: B");
        assert!(matches!(parse_machine(&text), Err(MachineError::BlankNotInTape(_))));
        let text = PING_PONG.replace("halt: halt", "halt:");
        assert_eq!(parse_machine(&text), Err(MachineError::NoHaltStates));
    }
}
