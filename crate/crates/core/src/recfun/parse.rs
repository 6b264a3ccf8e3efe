use crate::sexpr::{read_all, read_one, Sexpr};

use super::{RecError, RecExpr};

/// Named terms that may be referred to by bare name inside other terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Library {
    entries: Vec<(String, RecExpr)>,
}

const STANDARD: &str = include_str!("../../data/std.rec");

impl Library {
    /// The shipped library: `add`, `mul`, `pred`, `sub`, `sg` and a few
    /// helpers defined from them.
    pub fn standard() -> Library {
        Library::parse(STANDARD).expect("shipped library parses")
    }

    /// Reads `(def NAME TERM)` forms. Later definitions may use earlier ones.
    pub fn parse(text: &str) -> Result<Library, RecError> {
        let mut lib = Library::default();
        for form in read_all(text)? {
            let items = form.as_list().filter(|l| l.len() == 3 && form.head() == Some("def"));
            let Some(items) = items else {
                return Err(RecError::Syntax(format!("expected (def NAME TERM), found {form}")));
            };
            let name = items[1]
                .as_atom()
                .ok_or_else(|| RecError::Syntax(format!("definition name must be an atom in {form}")))?;
            let term = build(&items[2], &lib, &mut vec![name.to_string()])?;
            lib.insert(name, term);
        }
        Ok(lib)
    }

    pub fn insert(&mut self, name: &str, term: RecExpr) {
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = term,
            None => self.entries.push((name.to_string(), term)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&RecExpr> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &RecExpr)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), t))
    }
}

/// Parses a term that uses only the core forms.
pub fn parse_rec(text: &str) -> Result<RecExpr, RecError> {
    parse_rec_with(text, &Library::default())
}

/// Parses a term, resolving bare atoms against `lib`.
pub fn parse_rec_with(text: &str, lib: &Library) -> Result<RecExpr, RecError> {
    build(&read_one(text)?, lib, &mut vec!["root".into()])
}

fn number(s: &Sexpr) -> Result<usize, RecError> {
    s.as_atom()
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| RecError::Syntax(format!("expected a number, found {s}")))
}

fn build(s: &Sexpr, lib: &Library, path: &mut Vec<String>) -> Result<RecExpr, RecError> {
    let relocate = |e: RecError, path: &[String]| match e {
        RecError::Arity { message, .. } => RecError::Arity { path: path.join("/"), message },
        RecError::NestedMu { .. } => RecError::NestedMu { path: path.join("/") },
        other => other,
    };

    if let Some(name) = s.as_atom() {
        return lib.get(name).cloned().ok_or_else(|| RecError::UnknownName(name.to_string()));
    }
    let items = s.as_list().unwrap_or_default();
    let head = s.head().ok_or_else(|| RecError::Syntax(format!("expected (FORM ...), found {s}")))?;
    let args = &items[1..];
    let wrong_shape = || RecError::Syntax(format!("malformed ({head} ...): {s}"));

    let child = |i: usize, label: String, path: &mut Vec<String>| -> Result<RecExpr, RecError> {
        path.push(label);
        let r = build(&args[i], lib, path);
        path.pop();
        r
    };

    path.push(head.to_string());
    let result = match head {
        "zero" => match args {
            [n] => Ok(RecExpr::zero(number(n)?)),
            _ => Err(wrong_shape()),
        },
        "succ" if args.is_empty() => Ok(RecExpr::succ()),
        "proj" => match args {
            [i, n] => RecExpr::proj(number(i)?, number(n)?),
            _ => Err(wrong_shape()),
        },
        "comp" if args.len() >= 2 => {
            let outer = child(0, "outer".into(), path)?;
            let inner = (1..args.len())
                .map(|i| child(i, format!("inner{i}"), path))
                .collect::<Result<Vec<_>, _>>()?;
            RecExpr::comp(outer, inner)
        }
        "primrec" if args.len() == 2 => {
            let base = child(0, "base".into(), path)?;
            let step = child(1, "step".into(), path)?;
            RecExpr::primrec(base, step)
        }
        "mu" if args.len() == 1 => {
            let kernel = child(0, "kernel".into(), path)?;
            RecExpr::mu(kernel)
        }
        "succ" | "comp" | "primrec" | "mu" => Err(wrong_shape()),
        other => Err(RecError::Syntax(format!("unknown form `{other}`"))),
    };
    let result = result.map_err(|e| relocate(e, path));
    path.pop();
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_term() {
        let add = parse_rec("(primrec (proj 1 1) (comp (succ) (proj 3 3)))").unwrap();
        assert_eq!(add.arity(), 2);
    }

    #[test]
    fn projection_out_of_range() {
        match parse_rec("(proj 3 2)") {
            Err(RecError::Arity { path, .. }) => assert_eq!(path, "root/proj"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mu_over_binary_kernel() {
        let e = parse_rec("(mu (comp (succ) (proj 2 2)))").unwrap();
        assert_eq!(e.arity(), 1);
        assert!(!e.is_mu_free());
    }

    #[test]
    fn error_paths_point_at_the_node() {
        match parse_rec("(comp (succ) (primrec (zero 1) (proj 1 2)))") {
            Err(RecError::Arity { path, .. }) => assert_eq!(path, "root/comp/inner1/primrec"),
            other => panic!("{other:?}"),
        }
        match parse_rec("(mu (comp (mu (proj 3 3)) (proj 1 2) (proj 2 2)))") {
            Err(RecError::NestedMu { path }) => assert_eq!(path, "root/mu"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_rec("(succ 1)"), Err(RecError::Syntax(_))));
        assert!(matches!(parse_rec("(comp (succ))"), Err(RecError::Syntax(_))));
        assert!(matches!(parse_rec("(frob)"), Err(RecError::Syntax(_))));
        assert!(matches!(parse_rec("(proj a 2)"), Err(RecError::Syntax(_))));
        assert!(matches!(parse_rec("(zero 1"), Err(RecError::Syntax(_))));
        assert_eq!(parse_rec("add"), Err(RecError::UnknownName("add".into())));
    }

    #[test]
    fn standard_library() {
        let lib = Library::standard();
        for (name, arity) in [("add", 2), ("mul", 2), ("pred", 1), ("sub", 2), ("sg", 1)] {
            let t = lib.get(name).unwrap_or_else(|| panic!("missing {name}"));
            assert_eq!(t.arity(), arity, "{name}");
            assert!(t.is_mu_free());
        }
        let t = parse_rec_with("(comp sub (proj 2 2) (proj 1 2))", &lib).unwrap();
        assert_eq!(t.arity(), 2);
    }

    #[test]
    fn library_format_errors() {
        assert!(Library::parse("(def a)").is_err());
        assert!(Library::parse("(define a (succ))").is_err());
        assert!(Library::parse("(def a b)").is_err());
        let lib = Library::parse("(def one (comp (succ) (zero 1)))\n(def two (comp (succ) one))").unwrap();
        assert_eq!(lib.names().collect::<Vec<_>>(), ["one", "two"]);
    }
}
