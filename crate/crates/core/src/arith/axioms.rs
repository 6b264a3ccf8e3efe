//! Axiom schemas of first-order Peano arithmetic in the usual Hilbert-style
//! presentation.
//!
//! ```text
//! A1  B → (C → B)
//! A2  (B → (C → D)) → ((B → C) → (B → D))
//! A3  (¬C → ¬B) → ((¬C → B) → C)
//! A4  ∀x B → B[x := t]            t free for x in B
//! A5  ∀x (B → C) → (B → ∀x C)     x not free in B
//! S1  v1 = v2 → (v1 = v3 → v2 = v3)
//! S2  v1 = v2 → S v1 = S v2
//! S3  ¬(0 = S v1)
//! S4  S v1 = S v2 → v1 = v2
//! S5  v1 + 0 = v1
//! S6  v1 + S v2 = S (v1 + v2)
//! S7  v1 * 0 = 0
//! S8  v1 * S v2 = (v1 * v2) + v1
//! S9  B[x := 0] → (∀x (B → B[x := S x]) → ∀x B)
//! ```
//!
//! In the instantiation `B`, `C`, `D` are `phi`, `psi`, `chi`.

use std::fmt;
use std::str::FromStr;

use super::{Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    A1,
    A2,
    A3,
    A4,
    A5,
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
}

impl Schema {
    pub const ALL: [Schema; 14] = [
        Schema::A1,
        Schema::A2,
        Schema::A3,
        Schema::A4,
        Schema::A5,
        Schema::S1,
        Schema::S2,
        Schema::S3,
        Schema::S4,
        Schema::S5,
        Schema::S6,
        Schema::S7,
        Schema::S8,
        Schema::S9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::A1 => "A1",
            Schema::A2 => "A2",
            Schema::A3 => "A3",
            Schema::A4 => "A4",
            Schema::A5 => "A5",
            Schema::S1 => "S1",
            Schema::S2 => "S2",
            Schema::S3 => "S3",
            Schema::S4 => "S4",
            Schema::S5 => "S5",
            Schema::S6 => "S6",
            Schema::S7 => "S7",
            Schema::S8 => "S8",
            Schema::S9 => "S9",
        }
    }

    /// The single formula for S1..S8, `None` for the schemas.
    pub fn fixed(self) -> Option<Formula> {
        let v = Term::var;
        let s = Term::succ;
        let eq = Formula::eq;
        Some(match self {
            Schema::S1 => Formula::imp(eq(v(1), v(2)), Formula::imp(eq(v(1), v(3)), eq(v(2), v(3)))),
            Schema::S2 => Formula::imp(eq(v(1), v(2)), eq(s(v(1)), s(v(2)))),
            Schema::S3 => Formula::not(eq(Term::Zero, s(v(1)))),
            Schema::S4 => Formula::imp(eq(s(v(1)), s(v(2))), eq(v(1), v(2))),
            Schema::S5 => eq(Term::add(v(1), Term::Zero), v(1)),
            Schema::S6 => eq(Term::add(v(1), s(v(2))), s(Term::add(v(1), v(2)))),
            Schema::S7 => eq(Term::mul(v(1), Term::Zero), Term::Zero),
            Schema::S8 => eq(Term::mul(v(1), s(v(2))), Term::add(Term::mul(v(1), v(2)), v(1))),
            _ => return None,
        })
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Schema {
    type Err = String;
    fn from_str(s: &str) -> Result<Schema, String> {
        Schema::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom schema `{s}`"))
    }
}

/// Values for the metavariables of a schema. Unused fields are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Instance {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub chi: Option<Formula>,
    pub x: Option<u32>,
    pub t: Option<Term>,
}

impl Instance {
    pub fn is_empty(&self) -> bool {
        *self == Instance::default()
    }
}

fn need<'a, T>(v: &'a Option<T>, name: &str, schema: Schema) -> Result<&'a T, String> {
    v.as_ref().ok_or_else(|| format!("{schema} needs a value for `{name}`"))
}

/// Builds the instance of `schema` under `inst`, checking side conditions.
pub fn instantiate(schema: Schema, inst: &Instance) -> Result<Formula, String> {
    use Formula as F;
    if let Some(f) = schema.fixed() {
        return Ok(f);
    }
    let phi = || need(&inst.phi, "phi", schema).cloned();
    let psi = || need(&inst.psi, "psi", schema).cloned();
    let x = || need(&inst.x, "x", schema).copied();
    Ok(match schema {
        Schema::A1 => F::imp(phi()?, F::imp(psi()?, phi()?)),
        Schema::A2 => {
            let (b, c, d) = (phi()?, psi()?, need(&inst.chi, "chi", schema)?.clone());
            F::imp(
                F::imp(b.clone(), F::imp(c.clone(), d.clone())),
                F::imp(F::imp(b.clone(), c), F::imp(b, d)),
            )
        }
        Schema::A3 => {
            let (b, c) = (phi()?, psi()?);
            F::imp(
                F::imp(F::not(c.clone()), F::not(b.clone())),
                F::imp(F::imp(F::not(c.clone()), b), c),
            )
        }
        Schema::A4 => {
            let (b, x, t) = (phi()?, x()?, need(&inst.t, "t", schema)?);
            if !b.free_for(t, x) {
                return Err(format!("{t} is not free for v{x} in {b}"));
            }
            F::imp(F::all(x, b.clone()), b.subst(x, t))
        }
        Schema::A5 => {
            let (b, c, x) = (phi()?, psi()?, x()?);
            if b.is_free(x) {
                return Err(format!("v{x} is free in {b}"));
            }
            F::imp(F::all(x, F::imp(b.clone(), c.clone())), F::imp(b, F::all(x, c)))
        }
        Schema::S9 => induction(&phi()?, x()?),
        _ => unreachable!("fixed axioms handled above"),
    })
}

fn induction(b: &Formula, x: u32) -> Formula {
    use Formula as F;
    let step = F::all(x, F::imp(b.clone(), b.subst(x, &Term::succ(Term::Var(x)))));
    F::imp(b.subst(x, &Term::Zero), F::imp(step, F::all(x, b.clone())))
}

/// The term that `v_x` was replaced by to turn `b` into `c`, if `c` is such
/// a substitution instance. `Ok(None)` means `b` has no free `v_x` and
/// `c == b`.
fn match_subst(b: &Formula, c: &Formula, x: u32) -> Result<Option<Term>, ()> {
    fn term(b: &Term, c: &Term, x: u32, found: &mut Option<Term>) -> Result<(), ()> {
        match (b, c) {
            (Term::Var(k), _) if *k == x => match found {
                Some(t) if t != c => Err(()),
                Some(_) => Ok(()),
                None => {
                    *found = Some(c.clone());
                    Ok(())
                }
            },
            (Term::Var(k), Term::Var(j)) if k == j => Ok(()),
            (Term::Zero, Term::Zero) => Ok(()),
            (Term::Succ(b), Term::Succ(c)) => term(b, c, x, found),
            (Term::Add(b1, b2), Term::Add(c1, c2)) | (Term::Mul(b1, b2), Term::Mul(c1, c2)) => {
                term(b1, c1, x, found)?;
                term(b2, c2, x, found)
            }
            _ => Err(()),
        }
    }
    fn formula(b: &Formula, c: &Formula, x: u32, found: &mut Option<Term>) -> Result<(), ()> {
        match (b, c) {
            (Formula::Eq(b1, b2), Formula::Eq(c1, c2)) => {
                term(b1, c1, x, found)?;
                term(b2, c2, x, found)
            }
            (Formula::Not(b), Formula::Not(c)) => formula(b, c, x, found),
            (Formula::Imp(b1, b2), Formula::Imp(c1, c2)) => {
                formula(b1, c1, x, found)?;
                formula(b2, c2, x, found)
            }
            (Formula::All(y, b), Formula::All(z, c)) if y == z => {
                if *y == x {
                    if b == c {
                        Ok(())
                    } else {
                        Err(())
                    }
                } else {
                    formula(b, c, x, found)
                }
            }
            _ => Err(()),
        }
    }
    let mut found = None;
    formula(b, c, x, &mut found)?;
    Ok(found)
}

/// Whether `f` is an instance of `schema`.
pub fn recognize(schema: Schema, f: &Formula) -> bool {
    use Formula::{All, Imp, Not};
    if let Some(fixed) = schema.fixed() {
        return *f == fixed;
    }
    let Imp(lhs, rhs) = f else { return false };
    match schema {
        Schema::A1 => matches!(&**rhs, Imp(_, b) if b == lhs),
        Schema::A2 => match (&**lhs, &**rhs) {
            (Imp(b, cd), Imp(bc, bd)) => match (&**cd, &**bc, &**bd) {
                (Imp(c, d), Imp(b2, c2), Imp(b3, d2)) => b == b2 && b == b3 && c == c2 && d == d2,
                _ => false,
            },
            _ => false,
        },
        Schema::A3 => match (&**lhs, &**rhs) {
            (Imp(nc, nb), Imp(ncb, c3)) => match (&**nc, &**nb, &**ncb) {
                (Not(c), Not(b), Imp(nc2, b2)) => nc2 == nc && b2 == b && c3 == c,
                _ => false,
            },
            _ => false,
        },
        Schema::A4 => {
            let All(x, b) = &**lhs else { return false };
            match match_subst(b, rhs, *x) {
                Ok(None) => true,
                Ok(Some(t)) => b.free_for(&t, *x),
                Err(()) => false,
            }
        }
        Schema::A5 => match (&**lhs, &**rhs) {
            (All(x, bc), Imp(b2, xc)) => match (&**bc, &**xc) {
                (Imp(b, c), All(y, c2)) => x == y && b == b2 && c == c2 && !b.is_free(*x),
                _ => false,
            },
            _ => false,
        },
        Schema::S9 => match &**rhs {
            Imp(_, concl) => matches!(&**concl, All(x, b) if induction(b, *x) == *f),
            _ => false,
        },
        _ => unreachable!("fixed axioms handled above"),
    }
}

/// The first schema (in table order) that `f` is an instance of.
pub fn which_axiom(f: &Formula, sys: &AxiomSystem) -> Option<Schema> {
    sys.schemas().iter().copied().find(|s| recognize(*s, f))
}

/// A set of axiom schemas; proofs may cite only these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSystem {
    schemas: Vec<Schema>,
}

impl AxiomSystem {
    /// All of A1..A5 and S1..S9.
    pub fn peano() -> AxiomSystem {
        AxiomSystem { schemas: Schema::ALL.to_vec() }
    }

    /// Only the logical schemas A1..A5.
    pub fn logic() -> AxiomSystem {
        AxiomSystem { schemas: Schema::ALL[..5].to_vec() }
    }

    pub fn schemas(&self) -> &[Schema] {
        &self.schemas
    }

    pub fn contains(&self, s: Schema) -> bool {
        self.schemas.contains(&s)
    }
}

impl Default for AxiomSystem {
    fn default() -> Self {
        AxiomSystem::peano()
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{arb_formula, arb_term};
    use super::*;
    use proptest::prelude::*;

    fn v(k: u32) -> Term {
        Term::var(k)
    }

    fn zz() -> Formula {
        Formula::eq(Term::Zero, Term::Zero)
    }

    fn inst(phi: Option<Formula>, psi: Option<Formula>, x: Option<u32>, t: Option<Term>) -> Instance {
        Instance { phi, psi, chi: None, x, t }
    }

    #[test]
    fn a1_instance() {
        let f = instantiate(Schema::A1, &inst(Some(zz()), Some(zz()), None, None)).unwrap();
        assert_eq!(f, Formula::imp(zz(), Formula::imp(zz(), zz())));
        assert!(recognize(Schema::A1, &f));
        assert!(!recognize(Schema::A2, &f));
        assert_eq!(which_axiom(&f, &AxiomSystem::peano()), Some(Schema::A1));
        assert!(instantiate(Schema::A1, &Instance::default()).is_err());
    }

    #[test]
    fn a4_side_condition() {
        // ∀v1 ∀v2 (v1 = v2): substituting v2 for v1 would be captured.
        let b = Formula::all(2, Formula::eq(v(1), v(2)));
        assert!(instantiate(Schema::A4, &inst(Some(b.clone()), None, Some(1), Some(v(2)))).is_err());
        let ok = instantiate(Schema::A4, &inst(Some(b.clone()), None, Some(1), Some(v(3)))).unwrap();
        assert!(recognize(Schema::A4, &ok));
        let captured = Formula::imp(Formula::all(1, b.clone()), Formula::all(2, Formula::eq(v(2), v(2))));
        assert!(!recognize(Schema::A4, &captured));
        // Vacuous quantifier: any t, conclusion equals the body.
        let vac = Formula::imp(Formula::all(5, zz()), zz());
        assert!(recognize(Schema::A4, &vac));
        // Inconsistent replacement.
        let bad = Formula::imp(
            Formula::all(1, Formula::eq(v(1), v(1))),
            Formula::eq(Term::Zero, Term::numeral(1)),
        );
        assert!(!recognize(Schema::A4, &bad));
    }

    #[test]
    fn a5_side_condition() {
        let b = Formula::eq(v(1), Term::Zero);
        let c = Formula::eq(v(2), Term::Zero);
        assert!(instantiate(Schema::A5, &inst(Some(b.clone()), Some(c.clone()), Some(1), None)).is_err());
        let f = instantiate(Schema::A5, &inst(Some(b.clone()), Some(c.clone()), Some(2), None)).unwrap();
        assert!(recognize(Schema::A5, &f));
        let forged = Formula::imp(
            Formula::all(1, Formula::imp(b.clone(), c.clone())),
            Formula::imp(b, Formula::all(1, c)),
        );
        assert!(!recognize(Schema::A5, &forged));
    }

    #[test]
    fn induction_instance() {
        // B(v1) = (v1 + 0 = v1)
        let b = Formula::eq(Term::add(v(1), Term::Zero), v(1));
        let f = instantiate(Schema::S9, &inst(Some(b.clone()), None, Some(1), None)).unwrap();
        let base = Formula::eq(Term::add(Term::Zero, Term::Zero), Term::Zero);
        let Formula::Imp(lhs, _) = &f else { panic!() };
        assert_eq!(**lhs, base);
        assert!(recognize(Schema::S9, &f));
        assert!(!recognize(Schema::S9, &Formula::imp(zz(), Formula::imp(zz(), Formula::all(1, b)))));
    }

    #[test]
    fn fixed_axioms_only_match_themselves() {
        let sys = AxiomSystem::peano();
        for s in &Schema::ALL[5..13] {
            let f = s.fixed().unwrap();
            assert_eq!(which_axiom(&f, &sys), Some(*s));
            assert_eq!(instantiate(*s, &Instance::default()).unwrap(), f);
        }
        assert_eq!(which_axiom(&Schema::S3.fixed().unwrap(), &AxiomSystem::logic()), None);
        assert_eq!("s9".parse::<Schema>(), Ok(Schema::S9));
        assert!("A6".parse::<Schema>().is_err());
    }

    proptest! {
        #[test]
        fn instances_are_recognised(b in arb_formula(3), c in arb_formula(3), d in arb_formula(3), t in arb_term(3), x in 1u32..4) {
            let i = Instance { phi: Some(b.clone()), psi: Some(c.clone()), chi: Some(d), x: Some(x), t: Some(t) };
            for s in Schema::ALL {
                if let Ok(f) = instantiate(s, &i) {
                    prop_assert!(recognize(s, &f), "{} {}", s, f);
                }
            }
        }

        #[test]
        fn a4_recognition_agrees_with_construction(b in arb_formula(3), t in arb_term(3), x in 1u32..4) {
            let f = Formula::imp(Formula::all(x, b.clone()), b.subst(x, &t));
            prop_assert_eq!(recognize(Schema::A4, &f), b.free_for(&t, x) || !b.is_free(x));
        }
    }
}
