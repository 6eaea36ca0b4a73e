//! Logical formulas shared by domain models and B System components.
//!
//! The same abstract syntax is used on both sides of the translation; moving a
//! formula between the two worlds is a purely syntactic rewriting of its
//! names (see [`SymbolMap`]). The surface syntax is the ASCII notation of
//! Atelier B: `:` for membership, `<:` for inclusion, `|->` for maplets,
//! `<->`/`+->`/`-->`/... for relation types, `;` for forward composition and
//! postfix `~` for inverse.

mod lexer;
mod parser;
mod print;
mod symbols;
mod typing;

pub use parser::{parse_formula, ParseError};
pub use symbols::{rewrite_from_b, rewrite_to_b, RewriteError, SymbolMap, SymbolMapError};
pub use typing::{classify_typing_pattern, TypingPattern};

use serde::Serialize;

/// Names with a fixed meaning in B. They never need an entry in a symbol map
/// and are left untouched by rewriting, unless a model deliberately shadows
/// them with an element of the same name.
pub const BUILTIN_NAMES: &[&str] = &[
    "BOOL", "INTEGER", "NATURAL", "NAT", "INT", "STRING", "MAXINT", "MININT", "card", "dom", "ran",
];

pub fn is_builtin(name: &str) -> bool {
    BUILTIN_NAMES.contains(&name)
}

/// The eight relation types of B, ordered as in the Atelier B reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelationOp {
    /// `<->` any relation
    Relation,
    /// `+->` partial function
    PartialFunction,
    /// `-->` total function
    TotalFunction,
    /// `>+>` partial injection
    PartialInjection,
    /// `>->` total injection
    TotalInjection,
    /// `+->>` partial surjection
    PartialSurjection,
    /// `-->>` total surjection
    TotalSurjection,
    /// `>->>` total bijection
    TotalBijection,
}

impl RelationOp {
    pub const ALL: [RelationOp; 8] = [
        RelationOp::Relation,
        RelationOp::PartialFunction,
        RelationOp::TotalFunction,
        RelationOp::PartialInjection,
        RelationOp::TotalInjection,
        RelationOp::PartialSurjection,
        RelationOp::TotalSurjection,
        RelationOp::TotalBijection,
    ];

    pub fn token(self) -> &'static str {
        match self {
            RelationOp::Relation => "<->",
            RelationOp::PartialFunction => "+->",
            RelationOp::TotalFunction => "-->",
            RelationOp::PartialInjection => ">+>",
            RelationOp::TotalInjection => ">->",
            RelationOp::PartialSurjection => "+->>",
            RelationOp::TotalSurjection => "-->>",
            RelationOp::TotalBijection => ">->>",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CompareOp {
    Lt,
    Gt,
    Le,
    Ge,
}

impl CompareOp {
    pub fn token(self) -> &'static str {
        match self {
            CompareOp::Lt => "<",
            CompareOp::Gt => ">",
            CompareOp::Le => "<=",
            CompareOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Abstract syntax of formulas and expressions.
///
/// Predicates and expressions share one type: the distinction is not needed
/// for rewriting or classification, and it keeps the parser and printer
/// small. `Product` covers both the cartesian product of sets and integer
/// multiplication, which B writes with the same `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Formula {
    Name(String),
    Int(i64),
    Bool(bool),
    /// `f(a, b)`
    Apply { func: Box<Formula>, args: Vec<Formula> },
    /// `r[s]` relational image
    Image { rel: Box<Formula>, arg: Box<Formula> },
    /// `a |-> b`
    Maplet(Box<Formula>, Box<Formula>),
    /// `a = b`
    Equal(Box<Formula>, Box<Formula>),
    /// `a : b`
    Member(Box<Formula>, Box<Formula>),
    /// `a <: b`
    Subset(Box<Formula>, Box<Formula>),
    /// `A <-> B` and friends
    RelSet { op: RelationOp, domain: Box<Formula>, range: Box<Formula> },
    /// `r ; s` forward composition
    Compose(Box<Formula>, Box<Formula>),
    /// `r~`
    Inverse(Box<Formula>),
    /// `a * b`
    Product(Box<Formula>, Box<Formula>),
    /// `a + b`
    Sum(Box<Formula>, Box<Formula>),
    /// `a - b`
    Diff(Box<Formula>, Box<Formula>),
    Compare { op: CompareOp, lhs: Box<Formula>, rhs: Box<Formula> },
    /// `a & b`
    And(Box<Formula>, Box<Formula>),
    /// `a => b`
    Implies(Box<Formula>, Box<Formula>),
    /// `!x.(P)` or `#x.(P)`; several variables print as `!(x, y).(P)`
    Quantified { q: Quantifier, vars: Vec<String>, body: Box<Formula> },
    /// `{a, b}`; empty for `{}`
    SetExtension(Vec<Formula>),
    /// `{x | P}`
    Comprehension { vars: Vec<String>, pred: Box<Formula> },
}

impl Formula {
    pub fn name(n: impl Into<String>) -> Formula {
        Formula::Name(n.into())
    }

    /// All names occurring free, in first-occurrence order without
    /// duplicates. Quantifier and comprehension variables bind as usual.
    /// Builtins are reported too; the rewriting layer decides what to do
    /// with them.
    pub fn free_names(&self) -> Vec<String> {
        let mut acc = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut acc);
        acc
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.free_names().iter().any(|n| n == name)
    }

    fn collect_free(&self, bound: &mut Vec<String>, acc: &mut Vec<String>) {
        match self {
            Formula::Name(n) => {
                if !bound.iter().any(|b| b == n) && !acc.iter().any(|a| a == n) {
                    acc.push(n.clone());
                }
            }
            Formula::Int(_) | Formula::Bool(_) => {}
            Formula::Apply { func, args } => {
                func.collect_free(bound, acc);
                for a in args {
                    a.collect_free(bound, acc);
                }
            }
            Formula::Image { rel, arg } => {
                rel.collect_free(bound, acc);
                arg.collect_free(bound, acc);
            }
            Formula::Maplet(a, b)
            | Formula::Equal(a, b)
            | Formula::Member(a, b)
            | Formula::Subset(a, b)
            | Formula::Compose(a, b)
            | Formula::Product(a, b)
            | Formula::Sum(a, b)
            | Formula::Diff(a, b)
            | Formula::And(a, b)
            | Formula::Implies(a, b) => {
                a.collect_free(bound, acc);
                b.collect_free(bound, acc);
            }
            Formula::RelSet { domain, range, .. } => {
                domain.collect_free(bound, acc);
                range.collect_free(bound, acc);
            }
            Formula::Compare { lhs, rhs, .. } => {
                lhs.collect_free(bound, acc);
                rhs.collect_free(bound, acc);
            }
            Formula::Inverse(a) => a.collect_free(bound, acc),
            Formula::Quantified { vars, body, .. } => {
                let depth = bound.len();
                bound.extend(vars.iter().cloned());
                body.collect_free(bound, acc);
                bound.truncate(depth);
            }
            Formula::SetExtension(items) => {
                for i in items {
                    i.collect_free(bound, acc);
                }
            }
            Formula::Comprehension { vars, pred } => {
                let depth = bound.len();
                bound.extend(vars.iter().cloned());
                pred.collect_free(bound, acc);
                bound.truncate(depth);
            }
        }
    }

    /// The formula with every name (free or bound) replaced by `_`. Two
    /// formulas with equal skeletons have the same operator structure;
    /// rewriting must preserve this.
    pub fn skeleton(&self) -> Formula {
        self.map_names(&mut |_| "_".to_string())
    }

    pub(crate) fn map_names(&self, f: &mut impl FnMut(&str) -> String) -> Formula {
        match self {
            Formula::Name(n) => Formula::Name(f(n)),
            Formula::Int(i) => Formula::Int(*i),
            Formula::Bool(b) => Formula::Bool(*b),
            Formula::Apply { func, args } => Formula::Apply {
                func: Box::new(func.map_names(f)),
                args: args.iter().map(|a| a.map_names(f)).collect(),
            },
            Formula::Image { rel, arg } => Formula::Image {
                rel: Box::new(rel.map_names(f)),
                arg: Box::new(arg.map_names(f)),
            },
            Formula::Maplet(a, b) => Formula::Maplet(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Equal(a, b) => Formula::Equal(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Member(a, b) => Formula::Member(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Subset(a, b) => Formula::Subset(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::RelSet { op, domain, range } => Formula::RelSet {
                op: *op,
                domain: Box::new(domain.map_names(f)),
                range: Box::new(range.map_names(f)),
            },
            Formula::Compose(a, b) => Formula::Compose(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Inverse(a) => Formula::Inverse(Box::new(a.map_names(f))),
            Formula::Product(a, b) => Formula::Product(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Sum(a, b) => Formula::Sum(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Diff(a, b) => Formula::Diff(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Compare { op, lhs, rhs } => Formula::Compare {
                op: *op,
                lhs: Box::new(lhs.map_names(f)),
                rhs: Box::new(rhs.map_names(f)),
            },
            Formula::And(a, b) => Formula::And(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Implies(a, b) => Formula::Implies(Box::new(a.map_names(f)), Box::new(b.map_names(f))),
            Formula::Quantified { q, vars, body } => Formula::Quantified {
                q: *q,
                vars: vars.iter().map(|v| f(v)).collect(),
                body: Box::new(body.map_names(f)),
            },
            Formula::SetExtension(items) => {
                Formula::SetExtension(items.iter().map(|i| i.map_names(f)).collect())
            }
            Formula::Comprehension { vars, pred } => Formula::Comprehension {
                vars: vars.iter().map(|v| f(v)).collect(),
                pred: Box::new(pred.map_names(f)),
            },
        }
    }
}
