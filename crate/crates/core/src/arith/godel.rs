//! Gödel numbering.
//!
//! A formula is written out in prefix (Polish) notation as a string of
//! symbols `s_1 .. s_n` and coded as `2^c(s_1) * 3^c(s_2) * .. * p_n^c(s_n)`.
//!
//! | symbol | code      |
//! |--------|-----------|
//! | `0`    | 1         |
//! | `S`    | 3         |
//! | `+`    | 5         |
//! | `*`    | 7         |
//! | `=`    | 9         |
//! | `¬`    | 11        |
//! | `→`    | 13        |
//! | `∀`    | 15        |
//! | `,`    | 17        |
//! | `v_k`  | 19 + 2k   |
//!
//! Every code is odd, so no exponent is zero and the symbol string can be read
//! back by dividing out consecutive primes. A proof is coded the same way, as
//! the single symbol string obtained by joining its lines with `,`. The empty
//! string, and so the empty proof, has code 1.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::{Formula, Term};

pub type GodelNumber = BigUint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    Zero,
    Succ,
    Plus,
    Times,
    Eq,
    Not,
    Imp,
    All,
    Comma,
    Var(u32),
}

impl Sym {
    pub fn code(self) -> u64 {
        match self {
            Sym::Zero => 1,
            Sym::Succ => 3,
            Sym::Plus => 5,
            Sym::Times => 7,
            Sym::Eq => 9,
            Sym::Not => 11,
            Sym::Imp => 13,
            Sym::All => 15,
            Sym::Comma => 17,
            Sym::Var(k) => 19 + 2 * k as u64,
        }
    }

    pub fn from_code(c: u64) -> Option<Sym> {
        Some(match c {
            1 => Sym::Zero,
            3 => Sym::Succ,
            5 => Sym::Plus,
            7 => Sym::Times,
            9 => Sym::Eq,
            11 => Sym::Not,
            13 => Sym::Imp,
            15 => Sym::All,
            17 => Sym::Comma,
            c if c >= 19 && c % 2 == 1 => Sym::Var(u32::try_from((c - 19) / 2).ok()?),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("0 is not a code")]
    ZeroCode,
    #[error("not a code: position {position} is empty but later primes divide it")]
    Gap { position: usize },
    #[error("not a code: exponent {exponent} at position {position} is not a symbol")]
    UnknownSymbol { position: usize, exponent: u64 },
    #[error("not a formula: expression ends early at position {position}")]
    Truncated { position: usize },
    #[error("not a formula: unexpected symbol at position {position}")]
    Unexpected { position: usize },
    #[error("not a formula: extra symbols from position {position}")]
    Trailing { position: usize },
}

/// The first `n` primes.
fn primes(n: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

fn next_prime(after: u64) -> u64 {
    let mut c = after + 1;
    loop {
        if c >= 2 && (2..).take_while(|d| d * d <= c).all(|d| c % d != 0) {
            return c;
        }
        c += 1;
    }
}

pub fn encode_symbols(syms: &[Sym]) -> GodelNumber {
    let mut x = BigUint::one();
    for (p, s) in primes(syms.len()).into_iter().zip(syms) {
        let code = u32::try_from(s.code()).expect("variable index too large to code");
        x *= BigUint::from(p).pow(code);
    }
    x
}

/// Reads the exponents of 2, 3, 5, .. until the number is used up.
pub fn decode_symbols(x: &GodelNumber) -> Result<Vec<Sym>, DecodeError> {
    if x.is_zero() {
        return Err(DecodeError::ZeroCode);
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    if let Some(mut n) = x.to_u64() {
        while n > 1 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            push_symbol(&mut out, e)?;
            p = next_prime(p);
        }
        return Ok(out);
    }
    let mut n = x.clone();
    while !n.is_one() {
        let bp = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        push_symbol(&mut out, e)?;
        p = next_prime(p);
    }
    Ok(out)
}

fn push_symbol(out: &mut Vec<Sym>, exponent: u64) -> Result<(), DecodeError> {
    let position = out.len() + 1;
    if exponent == 0 {
        return Err(DecodeError::Gap { position });
    }
    let s = Sym::from_code(exponent).ok_or(DecodeError::UnknownSymbol { position, exponent })?;
    out.push(s);
    Ok(())
}

fn flatten_term(t: &Term, out: &mut Vec<Sym>) {
    match t {
        Term::Var(k) => out.push(Sym::Var(*k)),
        Term::Zero => out.push(Sym::Zero),
        Term::Succ(t) => {
            out.push(Sym::Succ);
            flatten_term(t, out);
        }
        Term::Add(t, u) => {
            out.push(Sym::Plus);
            flatten_term(t, out);
            flatten_term(u, out);
        }
        Term::Mul(t, u) => {
            out.push(Sym::Times);
            flatten_term(t, out);
            flatten_term(u, out);
        }
    }
}

pub fn flatten_formula(f: &Formula, out: &mut Vec<Sym>) {
    match f {
        Formula::Eq(t, u) => {
            out.push(Sym::Eq);
            flatten_term(t, out);
            flatten_term(u, out);
        }
        Formula::Not(g) => {
            out.push(Sym::Not);
            flatten_formula(g, out);
        }
        Formula::Imp(g, h) => {
            out.push(Sym::Imp);
            flatten_formula(g, out);
            flatten_formula(h, out);
        }
        Formula::All(x, g) => {
            out.push(Sym::All);
            out.push(Sym::Var(*x));
            flatten_formula(g, out);
        }
    }
}

/// Code of a term standing alone; `0` codes to `2`.
pub fn encode_term(t: &Term) -> GodelNumber {
    let mut syms = Vec::new();
    flatten_term(t, &mut syms);
    encode_symbols(&syms)
}

pub fn encode_formula(f: &Formula) -> GodelNumber {
    let mut syms = Vec::new();
    flatten_formula(f, &mut syms);
    encode_symbols(&syms)
}

pub fn encode_formulas(lines: &[Formula]) -> GodelNumber {
    let mut syms = Vec::new();
    for (i, f) in lines.iter().enumerate() {
        if i > 0 {
            syms.push(Sym::Comma);
        }
        flatten_formula(f, &mut syms);
    }
    encode_symbols(&syms)
}

/// Code of the formula lines; justifications are not part of the code.
pub fn encode_proof(p: &super::ProofSequence) -> GodelNumber {
    let lines: Vec<Formula> = p.lines.iter().map(|l| l.formula.clone()).collect();
    encode_formulas(&lines)
}

struct Reader<'a> {
    syms: &'a [Sym],
    pos: usize,
    /// 1-based position of `syms[0]` in the whole code.
    base: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Result<(Sym, usize), DecodeError> {
        let position = self.base + self.pos;
        let s = *self.syms.get(self.pos).ok_or(DecodeError::Truncated { position })?;
        self.pos += 1;
        Ok((s, position))
    }

    fn term(&mut self) -> Result<Term, DecodeError> {
        let (s, position) = self.next()?;
        Ok(match s {
            Sym::Var(k) => Term::Var(k),
            Sym::Zero => Term::Zero,
            Sym::Succ => Term::succ(self.term()?),
            Sym::Plus => Term::add(self.term()?, self.term()?),
            Sym::Times => Term::mul(self.term()?, self.term()?),
            _ => return Err(DecodeError::Unexpected { position }),
        })
    }

    fn formula(&mut self) -> Result<Formula, DecodeError> {
        let (s, position) = self.next()?;
        Ok(match s {
            Sym::Eq => Formula::eq(self.term()?, self.term()?),
            Sym::Not => Formula::not(self.formula()?),
            Sym::Imp => Formula::imp(self.formula()?, self.formula()?),
            Sym::All => match self.next()? {
                (Sym::Var(x), _) => Formula::all(x, self.formula()?),
                (_, position) => return Err(DecodeError::Unexpected { position }),
            },
            _ => return Err(DecodeError::Unexpected { position }),
        })
    }

    fn whole_formula(mut self) -> Result<Formula, DecodeError> {
        let f = self.formula()?;
        if self.pos < self.syms.len() {
            return Err(DecodeError::Trailing { position: self.base + self.pos });
        }
        Ok(f)
    }
}

pub fn decode_formula(x: &GodelNumber) -> Result<Formula, DecodeError> {
    let syms = decode_symbols(x)?;
    Reader { syms: &syms, pos: 0, base: 1 }.whole_formula()
}

/// Splits the symbol string at `,` and reads each piece as a formula.
pub fn decode_proof(x: &GodelNumber) -> Result<Vec<Formula>, DecodeError> {
    let syms = decode_symbols(x)?;
    if syms.is_empty() {
        return Ok(Vec::new());
    }
    let mut lines = Vec::new();
    let mut start = 0;
    for piece in syms.split(|s| *s == Sym::Comma) {
        lines.push(Reader { syms: piece, pos: 0, base: start + 1 }.whole_formula()?);
        start += piece.len() + 1;
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::arb_formula;
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn zero_eq_zero() -> Formula {
        Formula::eq(Term::Zero, Term::Zero)
    }

    #[test]
    fn table_values() {
        assert_eq!(encode_term(&Term::Zero), big(2));
        assert_eq!(encode_term(&Term::var(1)), big(2).pow(21));
        // = 0 0  ->  2^9 * 3 * 5
        assert_eq!(encode_formula(&zero_eq_zero()), big(512 * 3 * 5));
        assert_eq!(decode_formula(&big(512 * 15)).unwrap(), zero_eq_zero());
        // S 0 as a term: 2^3 * 3^1
        assert_eq!(encode_term(&Term::numeral(1)), big(24));
        assert_eq!(encode_term(&Term::mul(Term::Zero, Term::Zero)), big(128 * 3 * 5));
    }

    #[test]
    fn non_codes() {
        assert_eq!(decode_symbols(&big(7)), Err(DecodeError::Gap { position: 1 }));
        assert_eq!(decode_formula(&big(0)), Err(DecodeError::ZeroCode));
        assert_eq!(decode_formula(&big(1)), Err(DecodeError::Truncated { position: 1 }));
        assert_eq!(decode_symbols(&big(4)), Err(DecodeError::UnknownSymbol { position: 1, exponent: 2 }));
        // 2 codes the term 0, which is not a formula.
        assert_eq!(decode_formula(&big(2)), Err(DecodeError::Unexpected { position: 1 }));
        // = 0 : missing right-hand side.
        assert_eq!(decode_formula(&big(512 * 3)), Err(DecodeError::Truncated { position: 3 }));
        // = 0 0 0
        assert_eq!(decode_formula(&big(512 * 15 * 7)), Err(DecodeError::Trailing { position: 4 }));
        let g = decode_symbols(&(big(2) * big(5)));
        assert_eq!(g, Err(DecodeError::Gap { position: 2 }));
    }

    #[test]
    fn proofs_join_lines_with_commas() {
        let f = zero_eq_zero();
        let x = encode_formulas(&[f.clone(), f.clone()]);
        let syms = decode_symbols(&x).unwrap();
        assert_eq!(syms.len(), 7);
        assert_eq!(syms[3], Sym::Comma);
        assert_eq!(decode_proof(&x).unwrap(), vec![f.clone(), f.clone()]);
        assert_eq!(decode_proof(&big(1)).unwrap(), vec![]);
        let dangling = encode_symbols(&[Sym::Eq, Sym::Zero, Sym::Zero, Sym::Comma]);
        assert_eq!(decode_proof(&dangling), Err(DecodeError::Truncated { position: 5 }));
    }

    #[test]
    fn symbol_codes_round_trip() {
        for c in 0..200 {
            if let Some(s) = Sym::from_code(c) {
                assert_eq!(s.code(), c);
            } else {
                assert!(c == 0 || c % 2 == 0);
            }
        }
    }

    proptest! {
        #[test]
        fn formula_round_trip(f in arb_formula(3)) {
            prop_assert_eq!(decode_formula(&encode_formula(&f)).unwrap(), f);
        }

        #[test]
        fn proof_round_trip(fs in proptest::collection::vec(arb_formula(2), 0..4)) {
            prop_assert_eq!(decode_proof(&encode_formulas(&fs)).unwrap(), fs);
        }

        #[test]
        fn small_numbers_decode_or_fail_cleanly(n in 0u64..2_000_000) {
            let x = big(n);
            if let Ok(f) = decode_formula(&x) {
                prop_assert_eq!(encode_formula(&f), x);
            }
        }
    }
}
