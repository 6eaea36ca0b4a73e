//! Recognition of the typing idioms used by the translation rules.
//!
//! Four shapes of formula carry structural meaning when they accompany the
//! declaration of a fresh identifier `x`:
//!
//! * `x <: S` — x is a concept below S
//! * `x : S` — x is an individual of S
//! * `x : S1 <op> S2` — x is an association from S1 to S2
//! * `x = a |-> b` — x is a maplet individual with ends a and b
//!
//! Everything else is an ordinary logical formula. The sides of a typing
//! shape must be plain names: `x <: dom(r)` types nothing and is classified
//! as [`TypingPattern::NonTyping`].

use super::{Formula, RelationOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypingPattern {
    /// `x <: S`
    Subset { element: String, parent: String },
    /// `x : S`
    Member { element: String, concept: String },
    /// `x : S1 <op> S2`
    Relation { element: String, domain: String, range: String, op: RelationOp },
    /// `x = a |-> b`
    MapletEq { element: String, antecedent: String, image: String },
    NonTyping,
}

/// Total and deterministic: every formula falls in exactly one case.
pub fn classify_typing_pattern(f: &Formula) -> TypingPattern {
    match f {
        Formula::Subset(lhs, rhs) => match (name_of(lhs), name_of(rhs)) {
            (Some(element), Some(parent)) => TypingPattern::Subset {
                element: element.to_string(),
                parent: parent.to_string(),
            },
            _ => TypingPattern::NonTyping,
        },
        Formula::Member(lhs, rhs) => {
            let Some(element) = name_of(lhs) else {
                return TypingPattern::NonTyping;
            };
            match rhs.as_ref() {
                Formula::Name(concept) => TypingPattern::Member {
                    element: element.to_string(),
                    concept: concept.clone(),
                },
                Formula::RelSet { op, domain, range } => {
                    match (name_of(domain), name_of(range)) {
                        (Some(d), Some(r)) => TypingPattern::Relation {
                            element: element.to_string(),
                            domain: d.to_string(),
                            range: r.to_string(),
                            op: *op,
                        },
                        _ => TypingPattern::NonTyping,
                    }
                }
                _ => TypingPattern::NonTyping,
            }
        }
        Formula::Equal(lhs, rhs) => match (name_of(lhs), rhs.as_ref()) {
            (Some(element), Formula::Maplet(a, b)) => match (name_of(a), name_of(b)) {
                (Some(ant), Some(im)) => TypingPattern::MapletEq {
                    element: element.to_string(),
                    antecedent: ant.to_string(),
                    image: im.to_string(),
                },
                _ => TypingPattern::NonTyping,
            },
            _ => TypingPattern::NonTyping,
        },
        _ => TypingPattern::NonTyping,
    }
}

fn name_of(f: &Formula) -> Option<&str> {
    match f {
        Formula::Name(n) => Some(n),
        _ => None,
    }
}
