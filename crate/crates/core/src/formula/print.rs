//! Canonical rendering of formulas.
//!
//! The printer is the inverse of the parser: `parse(print(f)) == f` for every
//! formula, and printing is deterministic, so the same formula always yields
//! the same bytes. Binary operators are spaced, application arguments are
//! separated by `, `, and a composition nested inside another composition is
//! always parenthesized (`(r ; s) ; t`), which keeps the grouping visible in
//! the emitted B text.

use super::{Formula, Quantifier};
use std::fmt;

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

// Binding strengths; must agree with the parser.
const PREC_IMPLIES: u8 = 10;
const PREC_AND: u8 = 20;
const PREC_PRED: u8 = 30;
const PREC_REL: u8 = 40;
const PREC_MAPLET: u8 = 50;
const PREC_COMPOSE: u8 = 55;
const PREC_ADD: u8 = 60;
const PREC_MUL: u8 = 70;
const PREC_POSTFIX: u8 = 90;
const PREC_ATOM: u8 = 100;

impl Formula {
    fn prec(&self) -> u8 {
        match self {
            Formula::Implies(..) => PREC_IMPLIES,
            Formula::And(..) => PREC_AND,
            Formula::Equal(..)
            | Formula::Member(..)
            | Formula::Subset(..)
            | Formula::Compare { .. } => PREC_PRED,
            Formula::RelSet { .. } => PREC_REL,
            Formula::Maplet(..) => PREC_MAPLET,
            Formula::Compose(..) => PREC_COMPOSE,
            Formula::Sum(..) | Formula::Diff(..) => PREC_ADD,
            Formula::Product(..) => PREC_MUL,
            Formula::Inverse(..) | Formula::Apply { .. } | Formula::Image { .. } => PREC_POSTFIX,
            Formula::Name(_)
            | Formula::Int(_)
            | Formula::Bool(_)
            | Formula::Quantified { .. }
            | Formula::SetExtension(_)
            | Formula::Comprehension { .. } => PREC_ATOM,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_inner(f)?;
            write!(f, ")")
        } else {
            self.write_inner(f)
        }
    }

    fn write_inner(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Name(n) => write!(f, "{n}"),
            Formula::Int(i) => write!(f, "{i}"),
            Formula::Bool(true) => write!(f, "TRUE"),
            Formula::Bool(false) => write!(f, "FALSE"),
            Formula::Apply { func, args } => {
                func.write_prec(f, PREC_POSTFIX)?;
                write!(f, "(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.write_prec(f, 0)?;
                }
                write!(f, ")")
            }
            Formula::Image { rel, arg } => {
                rel.write_prec(f, PREC_POSTFIX)?;
                write!(f, "[")?;
                arg.write_prec(f, 0)?;
                write!(f, "]")
            }
            Formula::Maplet(a, b) => {
                a.write_prec(f, PREC_MAPLET)?;
                write!(f, " |-> ")?;
                b.write_prec(f, PREC_MAPLET + 1)
            }
            Formula::Equal(a, b) => {
                a.write_prec(f, PREC_PRED + 1)?;
                write!(f, " = ")?;
                b.write_prec(f, PREC_PRED + 1)
            }
            Formula::Member(a, b) => {
                a.write_prec(f, PREC_PRED + 1)?;
                write!(f, " : ")?;
                b.write_prec(f, PREC_PRED + 1)
            }
            Formula::Subset(a, b) => {
                a.write_prec(f, PREC_PRED + 1)?;
                write!(f, " <: ")?;
                b.write_prec(f, PREC_PRED + 1)
            }
            Formula::RelSet { op, domain, range } => {
                domain.write_prec(f, PREC_REL + 1)?;
                write!(f, " {} ", op.token())?;
                range.write_prec(f, PREC_REL + 1)
            }
            Formula::Compose(a, b) => {
                // Both sides one level up: nested compositions keep their
                // parentheses.
                a.write_prec(f, PREC_COMPOSE + 1)?;
                write!(f, " ; ")?;
                b.write_prec(f, PREC_COMPOSE + 1)
            }
            Formula::Inverse(a) => {
                a.write_prec(f, PREC_POSTFIX)?;
                write!(f, "~")
            }
            Formula::Product(a, b) => {
                a.write_prec(f, PREC_MUL)?;
                write!(f, " * ")?;
                b.write_prec(f, PREC_MUL + 1)
            }
            Formula::Sum(a, b) => {
                a.write_prec(f, PREC_ADD)?;
                write!(f, " + ")?;
                b.write_prec(f, PREC_ADD + 1)
            }
            Formula::Diff(a, b) => {
                a.write_prec(f, PREC_ADD)?;
                write!(f, " - ")?;
                b.write_prec(f, PREC_ADD + 1)
            }
            Formula::Compare { op, lhs, rhs } => {
                lhs.write_prec(f, PREC_PRED + 1)?;
                write!(f, " {} ", op.token())?;
                rhs.write_prec(f, PREC_PRED + 1)
            }
            Formula::And(a, b) => {
                a.write_prec(f, PREC_AND)?;
                write!(f, " & ")?;
                b.write_prec(f, PREC_AND + 1)
            }
            Formula::Implies(a, b) => {
                a.write_prec(f, PREC_IMPLIES + 1)?;
                write!(f, " => ")?;
                b.write_prec(f, PREC_IMPLIES)
            }
            Formula::Quantified { q, vars, body } => {
                write!(f, "{}", if *q == Quantifier::Forall { "!" } else { "#" })?;
                if vars.len() == 1 {
                    write!(f, "{}", vars[0])?;
                } else {
                    write!(f, "({})", vars.join(", "))?;
                }
                write!(f, ".(")?;
                body.write_prec(f, 0)?;
                write!(f, ")")
            }
            Formula::SetExtension(items) => {
                write!(f, "{{")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    item.write_prec(f, 0)?;
                }
                write!(f, "}}")
            }
            Formula::Comprehension { vars, pred } => {
                write!(f, "{{{} | ", vars.join(", "))?;
                pred.write_prec(f, 0)?;
                write!(f, "}}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;

    #[track_caller]
    fn roundtrips(text: &str) {
        let f = parse_formula(text).unwrap();
        assert_eq!(f.to_string(), text, "printer changed the canonical text");
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn canonical_texts_survive_a_round_trip() {
        roundtrips("in_l = in");
        roundtrips("FB : T_IN +-> T_OUT");
        roundtrips("vec_to_in : VIN >-> T_IN");
        roundtrips("agents_in <: MI");
        roundtrips("VIN = agents_in --> BOOL");
        roundtrips("VBF = (vec_to_in ; FB) ; vec_to_out~");
        roundtrips("in_l = vec_to_in(s_in_l)");
        roundtrips("m = a |-> b");
        roundtrips("a |-> b |-> c");
        roundtrips("x * 2 > y");
        roundtrips("a & b => c");
        roundtrips("!xx.(xx : D => card(AS[{xx}]) <= 3)");
        roundtrips("#(x, y).(x |-> y : FB)");
        roundtrips("{x | x : S & x = c}");
        roundtrips("{}");
        roundtrips("{I1, I2}");
        roundtrips("dom(AS) = T_IN");
        roundtrips("AS~ : R +-> D");
    }

    #[test]
    fn left_nested_composition_keeps_parentheses() {
        let f = parse_formula("a ; b ; c").unwrap();
        assert_eq!(f.to_string(), "(a ; b) ; c");
    }

    #[test]
    fn redundant_parentheses_are_dropped() {
        let f = parse_formula("(a) = ((b))").unwrap();
        assert_eq!(f.to_string(), "a = b");
        let f = parse_formula("(a & b) => c").unwrap();
        assert_eq!(f.to_string(), "a & b => c");
    }

    #[test]
    fn necessary_parentheses_are_kept() {
        let f = parse_formula("a => (b => c)").unwrap();
        assert_eq!(f.to_string(), "a => b => c");
        let f = parse_formula("(a => b) => c").unwrap();
        assert_eq!(f.to_string(), "(a => b) => c");
        let f = parse_formula("a |-> (b |-> c)").unwrap();
        assert_eq!(f.to_string(), "a |-> (b |-> c)");
        let f = parse_formula("(f ; g)(x)").unwrap();
        assert_eq!(f.to_string(), "(f ; g)(x)");
    }
}
