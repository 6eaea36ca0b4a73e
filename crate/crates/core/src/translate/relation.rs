//! From association cardinalities to B relation operators.
//!
//! The domain side constrains an association `AS` from `D` to `R` with two
//! cardinalities: the range cardinality bounds how many individuals of `R`
//! one individual of `D` may be related to, and the domain cardinality
//! bounds how many individuals of `D` one individual of `R` may be related
//! to. B expresses the common cases as relation classes (partial function,
//! total injection, ...); everything else becomes the plain relation
//! operator `<->` plus explicit predicates.

use crate::domain::{Bound, Cardinality};
use crate::formula::{is_builtin, CompareOp, Formula, Quantifier, RelationOp};

/// The four classification flags of a relation, in the order
/// (functional, total, injective, surjective).
pub type Flags = [bool; 4];

/// Which flags each operator guarantees.
pub const OPERATOR_FLAGS: [(RelationOp, Flags); 8] = [
    (RelationOp::Relation, [false, false, false, false]),
    (RelationOp::PartialFunction, [true, false, false, false]),
    (RelationOp::TotalFunction, [true, true, false, false]),
    (RelationOp::PartialInjection, [true, false, true, false]),
    (RelationOp::TotalInjection, [true, true, true, false]),
    (RelationOp::PartialSurjection, [true, false, false, true]),
    (RelationOp::TotalSurjection, [true, true, false, true]),
    (RelationOp::TotalBijection, [true, true, true, true]),
];

pub fn operator_flags(op: RelationOp) -> Flags {
    OPERATOR_FLAGS.iter().find(|(o, _)| *o == op).expect("all operators listed").1
}

pub fn operator_for_flags(flags: Flags) -> Option<RelationOp> {
    OPERATOR_FLAGS.iter().find(|(_, f)| *f == flags).map(|(o, _)| *o)
}

/// A cardinality constraint the chosen operator does not express.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residual {
    /// Each individual of the domain relates to at most one of the range.
    Functional,
    /// Each individual of the domain relates to at least one of the range.
    Total,
    /// Each individual of the range relates to at most one of the domain.
    Injective,
    /// Each individual of the range relates to at least one of the domain.
    Surjective,
    /// At most `k` individuals of the range per individual of the domain.
    RangeAtMost(u32),
    /// At least `k` individuals of the range per individual of the domain.
    RangeAtLeast(u32),
    /// At most `k` individuals of the domain per individual of the range.
    DomainAtMost(u32),
    /// At least `k` individuals of the domain per individual of the range.
    DomainAtLeast(u32),
}

/// An operator plus the predicates needed to express what it cannot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationKind {
    pub op: RelationOp,
    pub residuals: Vec<Residual>,
}

/// Choose the B relation operator for a pair of cardinalities.
///
/// The classification flags are read off the bounds: functional iff the
/// range cardinality has max 1, total iff its min is at least one,
/// injective iff the domain cardinality has max 1, surjective iff its min
/// is at least one. When the flag combination matches one of the eight
/// operators exactly, that operator carries the whole constraint; otherwise
/// the operator is `<->` and every flag becomes an explicit predicate.
/// Bounds the flags cannot see (a min or max of two or more, or a max of
/// zero) always become explicit predicates.
pub fn derive_relation_kind(dc: Cardinality, rc: Cardinality) -> RelationKind {
    let functional = matches!(rc.max, Bound::Finite(k) if k <= 1);
    let total = rc.min >= 1;
    let injective = matches!(dc.max, Bound::Finite(k) if k <= 1);
    let surjective = dc.min >= 1;
    let flags = [functional, total, injective, surjective];

    let mut residuals = Vec::new();
    let op = match operator_for_flags(flags) {
        Some(op) => op,
        None => {
            for (flag, residual) in [
                (functional, Residual::Functional),
                (total, Residual::Total),
                (injective, Residual::Injective),
                (surjective, Residual::Surjective),
            ] {
                if flag {
                    residuals.push(residual);
                }
            }
            RelationOp::Relation
        }
    };
    if let Bound::Finite(k) = rc.max {
        if k == 0 || k >= 2 {
            residuals.push(Residual::RangeAtMost(k));
        }
    }
    if rc.min >= 2 {
        residuals.push(Residual::RangeAtLeast(rc.min));
    }
    if let Bound::Finite(k) = dc.max {
        if k == 0 || k >= 2 {
            residuals.push(Residual::DomainAtMost(k));
        }
    }
    if dc.min >= 2 {
        residuals.push(Residual::DomainAtLeast(dc.min));
    }
    RelationKind { op, residuals }
}

/// Invert an operator back into the cardinality pair it stands for, as
/// (domain cardinality, range cardinality).
pub fn cardinalities_for_operator(op: RelationOp) -> (Cardinality, Cardinality) {
    let [functional, total, injective, surjective] = operator_flags(op);
    let bound = |at_most_one: bool| {
        if at_most_one { Bound::Finite(1) } else { Bound::Unbounded }
    };
    let dc = Cardinality::new(surjective as u32, bound(injective));
    let rc = Cardinality::new(total as u32, bound(functional));
    (dc, rc)
}

/// Render a residual as a predicate over the (B-side) association, domain
/// and range names. Quantified forms pick a variable that cannot capture.
pub fn residual_formula(residual: Residual, assoc: &str, domain: &str, range: &str) -> Formula {
    let name = |n: &str| Box::new(Formula::name(n));
    let fresh = |taken: [&str; 2]| {
        let mut v = "xx".to_string();
        while taken.contains(&v.as_str()) || v == assoc || is_builtin(&v) {
            v.push('x');
        }
        v
    };
    // count of range individuals related to xx: card(AS[{xx}])
    let image_card = |rel: Formula, var: &str| Formula::Apply {
        func: name("card"),
        args: vec![Formula::Image {
            rel: Box::new(rel),
            arg: Box::new(Formula::SetExtension(vec![Formula::name(var)])),
        }],
    };
    let bounded = |over: &str, rel: Formula, op: CompareOp, k: u32| {
        let var = fresh([over, "card"]);
        Formula::Quantified {
            q: Quantifier::Forall,
            vars: vec![var.clone()],
            body: Box::new(Formula::Implies(
                Box::new(Formula::Member(name(&var), name(over))),
                Box::new(Formula::Compare {
                    op,
                    lhs: Box::new(image_card(rel, &var)),
                    rhs: Box::new(Formula::Int(k as i64)),
                }),
            )),
        }
    };
    let forward = || Formula::name(assoc);
    let inverse = || Formula::Inverse(Box::new(Formula::name(assoc)));
    match residual {
        Residual::Functional => bounded(domain, forward(), CompareOp::Le, 1),
        Residual::Total => Formula::Equal(
            Box::new(Formula::Apply { func: name("dom"), args: vec![Formula::name(assoc)] }),
            name(domain),
        ),
        Residual::Injective => Formula::Member(
            Box::new(inverse()),
            Box::new(Formula::RelSet {
                op: RelationOp::PartialFunction,
                domain: name(range),
                range: name(domain),
            }),
        ),
        Residual::Surjective => Formula::Equal(
            Box::new(Formula::Apply { func: name("ran"), args: vec![Formula::name(assoc)] }),
            name(range),
        ),
        Residual::RangeAtMost(k) => bounded(domain, forward(), CompareOp::Le, k),
        Residual::RangeAtLeast(k) => bounded(domain, forward(), CompareOp::Ge, k),
        Residual::DomainAtMost(k) => bounded(range, inverse(), CompareOp::Le, k),
        Residual::DomainAtLeast(k) => bounded(range, inverse(), CompareOp::Ge, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn card(min: u32, max: Option<u32>) -> Cardinality {
        Cardinality::new(min, max.map_or(Bound::Unbounded, Bound::Finite))
    }

    #[test]
    fn the_eight_expressible_combinations_pick_their_operator() {
        let unconstrained = card(0, None);
        let cases = [
            (card(0, None), card(0, Some(1)), RelationOp::PartialFunction),
            (card(0, None), card(1, Some(1)), RelationOp::TotalFunction),
            (card(0, Some(1)), card(0, Some(1)), RelationOp::PartialInjection),
            (card(0, Some(1)), card(1, Some(1)), RelationOp::TotalInjection),
            (card(1, None), card(0, Some(1)), RelationOp::PartialSurjection),
            (card(1, None), card(1, Some(1)), RelationOp::TotalSurjection),
            (card(1, Some(1)), card(1, Some(1)), RelationOp::TotalBijection),
        ];
        let kind = derive_relation_kind(unconstrained, unconstrained);
        assert_eq!(kind, RelationKind { op: RelationOp::Relation, residuals: vec![] });
        for (dc, rc, expected) in cases {
            let kind = derive_relation_kind(dc, rc);
            assert_eq!(kind.op, expected, "dc={dc:?} rc={rc:?}");
            assert!(kind.residuals.is_empty());
        }
    }

    #[test]
    fn inexpressible_combinations_fall_back_to_relation_plus_predicates() {
        // Total without functional: no operator says "total relation".
        let kind = derive_relation_kind(card(0, None), card(1, None));
        assert_eq!(kind.op, RelationOp::Relation);
        assert_eq!(kind.residuals, vec![Residual::Total]);

        // Functional + injective + surjective but not total.
        let kind = derive_relation_kind(card(1, Some(1)), card(0, Some(1)));
        assert_eq!(kind.op, RelationOp::Relation);
        assert_eq!(
            kind.residuals,
            vec![Residual::Functional, Residual::Injective, Residual::Surjective]
        );

        // Bounds above one are always explicit predicates.
        let kind = derive_relation_kind(card(0, Some(3)), card(2, None));
        assert_eq!(kind.op, RelationOp::Relation);
        assert_eq!(
            kind.residuals,
            vec![Residual::Total, Residual::RangeAtLeast(2), Residual::DomainAtMost(3)]
        );

        // A max of zero forces emptiness on top of the functional operator.
        let kind = derive_relation_kind(card(0, None), card(0, Some(0)));
        assert_eq!(kind.op, RelationOp::PartialFunction);
        assert_eq!(kind.residuals, vec![Residual::RangeAtMost(0)]);
    }

    #[test]
    fn operators_round_trip_through_cardinalities() {
        for (op, _) in OPERATOR_FLAGS {
            let (dc, rc) = cardinalities_for_operator(op);
            let kind = derive_relation_kind(dc, rc);
            assert_eq!(kind.op, op);
            assert!(kind.residuals.is_empty(), "{op:?} must be exact");
        }
    }

    #[test]
    fn residual_predicates_print_in_fixed_form() {
        let text = |r| residual_formula(r, "FB", "T_IN", "T_OUT").to_string();
        assert_eq!(text(Residual::Total), "dom(FB) = T_IN");
        assert_eq!(text(Residual::Surjective), "ran(FB) = T_OUT");
        assert_eq!(text(Residual::Injective), "FB~ : T_OUT +-> T_IN");
        assert_eq!(
            text(Residual::Functional),
            "!xx.(xx : T_IN => card(FB[{xx}]) <= 1)"
        );
        assert_eq!(
            text(Residual::RangeAtMost(2)),
            "!xx.(xx : T_IN => card(FB[{xx}]) <= 2)"
        );
        assert_eq!(
            text(Residual::DomainAtLeast(3)),
            "!xx.(xx : T_OUT => card(FB~[{xx}]) >= 3)"
        );
    }

    #[test]
    fn quantified_residuals_avoid_capturing_names() {
        let f = residual_formula(Residual::RangeAtMost(2), "xx", "xxx", "R");
        let printed = f.to_string();
        assert_eq!(printed, "!xxxx.(xxxx : xxx => card(xx[{xxxx}]) <= 2)");
    }

    /// Semantic oracle: enumerate every relation between two small finite
    /// sets and check that a relation satisfies the cardinality bounds if
    /// and only if it belongs to the derived operator's class and satisfies
    /// every residual.
    #[test]
    fn derivation_agrees_with_brute_force_semantics() {
        let domain = 2usize; // |D|
        let range = 3usize; // |R|
        let pairs = domain * range;
        let bounds = [card(0, None), card(0, Some(1)), card(1, None), card(1, Some(1))];
        let extra = [card(0, Some(0)), card(0, Some(2)), card(2, None), card(2, Some(2))];
        for dc in bounds.iter().chain(&extra) {
            for rc in bounds.iter().chain(&extra) {
                let kind = derive_relation_kind(*dc, *rc);
                for bits in 0..(1u32 << pairs) {
                    let related = |x: usize, y: usize| bits & (1 << (x * range + y)) != 0;
                    let image = |x: usize| (0..range).filter(|y| related(x, *y)).count();
                    let preimage = |y: usize| (0..domain).filter(|x| related(*x, y)).count();

                    let in_bounds = (0..domain).all(|x| {
                        rc.min as usize <= image(x)
                            && match rc.max {
                                Bound::Finite(k) => image(x) <= k as usize,
                                Bound::Unbounded => true,
                            }
                    }) && (0..range).all(|y| {
                        dc.min as usize <= preimage(y)
                            && match dc.max {
                                Bound::Finite(k) => preimage(y) <= k as usize,
                                Bound::Unbounded => true,
                            }
                    });

                    let [f, t, i, s] = operator_flags(kind.op);
                    let mut derived = (!f || (0..domain).all(|x| image(x) <= 1))
                        && (!t || (0..domain).all(|x| image(x) >= 1))
                        && (!i || (0..range).all(|y| preimage(y) <= 1))
                        && (!s || (0..range).all(|y| preimage(y) >= 1));
                    for residual in &kind.residuals {
                        derived &= match residual {
                            Residual::Functional => (0..domain).all(|x| image(x) <= 1),
                            Residual::Total => (0..domain).all(|x| image(x) >= 1),
                            Residual::Injective => (0..range).all(|y| preimage(y) <= 1),
                            Residual::Surjective => (0..range).all(|y| preimage(y) >= 1),
                            Residual::RangeAtMost(k) => {
                                (0..domain).all(|x| image(x) <= *k as usize)
                            }
                            Residual::RangeAtLeast(k) => {
                                (0..domain).all(|x| image(x) >= *k as usize)
                            }
                            Residual::DomainAtMost(k) => {
                                (0..range).all(|y| preimage(y) <= *k as usize)
                            }
                            Residual::DomainAtLeast(k) => {
                                (0..range).all(|y| preimage(y) >= *k as usize)
                            }
                        };
                    }
                    assert_eq!(
                        in_bounds, derived,
                        "dc={dc:?} rc={rc:?} bits={bits:06b} kind={kind:?}"
                    );
                }
            }
        }
    }
}
