//! Minimal s-expression reader shared by the term, formula and proof formats.
//!
//! Only atoms and lists are supported. `;` starts a comment that runs to the
//! end of the line.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexpr {
    Atom(String),
    List(Vec<Sexpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SexprError {
    #[error("unexpected end of input at offset {0}")]
    UnexpectedEof(usize),
    #[error("unexpected ')' at offset {0}")]
    UnbalancedClose(usize),
    #[error("trailing input at offset {0}")]
    Trailing(usize),
    #[error("empty input")]
    Empty,
}

impl Sexpr {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(a) => Some(a),
            Sexpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items) => Some(items),
            Sexpr::Atom(_) => None,
        }
    }

    /// Head atom of a non-empty list, e.g. `comp` for `(comp f g)`.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }
}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexpr::Atom(a) => f.write_str(a),
            Sexpr::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_trivia(&mut self) {
        while let Some(&b) = self.src.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b';' {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexpr, SexprError> {
        self.skip_trivia();
        match self.src.get(self.pos) {
            None => Err(SexprError::UnexpectedEof(self.pos)),
            Some(b')') => Err(SexprError::UnbalancedClose(self.pos)),
            Some(b'(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.src.get(self.pos) {
                        None => return Err(SexprError::UnexpectedEof(self.pos)),
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Sexpr::List(items));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let start = self.pos;
                while let Some(&b) = self.src.get(self.pos) {
                    if b.is_ascii_whitespace() || b == b'(' || b == b')' || b == b';' {
                        break;
                    }
                    self.pos += 1;
                }
                // Input came from a &str and we only split on ASCII bytes.
                let atom = std::str::from_utf8(&self.src[start..self.pos]).expect("utf-8 boundary");
                Ok(Sexpr::Atom(atom.to_string()))
            }
        }
    }
}

/// Reads every top-level expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexpr>, SexprError> {
    let mut reader = Reader { src: text.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    loop {
        reader.skip_trivia();
        if reader.pos >= reader.src.len() {
            return Ok(out);
        }
        out.push(reader.read()?);
    }
}

/// Reads exactly one expression.
pub fn read_one(text: &str) -> Result<Sexpr, SexprError> {
    let mut reader = Reader { src: text.as_bytes(), pos: 0 };
    reader.skip_trivia();
    if reader.pos >= reader.src.len() {
        return Err(SexprError::Empty);
    }
    let expr = reader.read()?;
    reader.skip_trivia();
    if reader.pos < reader.src.len() {
        return Err(SexprError::Trailing(reader.pos));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_and_comments() {
        let e = read_one("(comp (succ) ; inner\n (proj 1 2))").unwrap();
        assert_eq!(e.to_string(), "(comp (succ) (proj 1 2))");
        assert_eq!(e.head(), Some("comp"));
    }

    #[test]
    fn errors() {
        assert_eq!(read_one("(a b"), Err(SexprError::UnexpectedEof(4)));
        assert_eq!(read_one(")"), Err(SexprError::UnbalancedClose(0)));
        assert_eq!(read_one("a b"), Err(SexprError::Trailing(2)));
        assert_eq!(read_one("  ; nothing"), Err(SexprError::Empty));
    }

    #[test]
    fn several_top_level() {
        let all = read_all("a (b) ; c\n(d e)").unwrap();
        assert_eq!(all.len(), 3);
    }
}
