//! Well-formedness checking of domain models.
//!
//! Validation is total: it never stops at the first problem and never
//! mutates its input. Each check guards on the references it needs having
//! resolved, so a dangling reference produces one `REF` violation instead of
//! a cascade of spurious constraint reports — removing an element from a
//! model can therefore only introduce `REF` violations about the references
//! that now dangle, never new constraint violations about other elements.

use super::{
    Concept, ConceptKind, ConstraintId, DomainModel, Individual, IndividualRef, RefinementChain,
    ValidationReport, Violation,
};
use crate::formula::is_builtin;

/// Validate every model of the chain, in chain order.
pub fn validate_chain(chain: &RefinementChain) -> ValidationReport {
    let mut report = ValidationReport::default();
    for model in chain.models() {
        report.violations.extend(validate_model(model, chain).violations);
    }
    report
}

/// Validate one model against the chain it belongs to.
pub fn validate_model(model: &DomainModel, chain: &RefinementChain) -> ValidationReport {
    let mut r = Reporter::default();
    check_model_header(model, chain, &mut r);
    check_name_clashes(model, chain, &mut r);
    for concept in &model.concepts {
        check_concept(model, concept, chain, &mut r);
    }
    for (idx, ind) in model.individuals.iter().enumerate() {
        let subject = match &ind.name {
            Some(n) => format!("{}.{}", model.name, n),
            None => format!("{}.individuals[{idx}]", model.name),
        };
        check_individual(model, ind, &subject, chain, &mut r);
    }
    for (idx, formula) in model.formulas.iter().enumerate() {
        let subject = match &formula.label {
            Some(l) => format!("{}.{}", model.name, l),
            None => format!("{}.formulas[{idx}]", model.name),
        };
        if formula.is_gluing && model.parent.is_none() {
            r.flag(
                ConstraintId::Ref,
                &subject,
                "gluing formula in a model that does not refine another model",
            );
        }
        for name in formula.assertion.free_names() {
            let declared = chain.find_concept(model, &name).is_some()
                || chain.find_individual(model, &name).is_some();
            if !declared && !is_builtin(&name) {
                r.flag(
                    ConstraintId::Ref,
                    &subject,
                    &format!("formula mentions '{name}', which is not declared in scope"),
                );
            }
        }
    }
    ValidationReport { violations: r.violations }
}

#[derive(Default)]
struct Reporter {
    violations: Vec<Violation>,
}

impl Reporter {
    fn flag(&mut self, constraint: ConstraintId, subject: &str, message: &str) {
        if self
            .violations
            .iter()
            .any(|v| v.constraint == constraint && v.subject == subject)
        {
            return;
        }
        self.violations.push(Violation {
            constraint,
            subject: subject.to_string(),
            message: message.to_string(),
        });
    }
}

fn check_model_header(model: &DomainModel, chain: &RefinementChain, r: &mut Reporter) {
    let Some(parent_name) = model.parent.as_deref() else { return };
    match chain.model(parent_name) {
        None => r.flag(
            ConstraintId::Ref,
            &model.name,
            &format!("refined model '{parent_name}' is not part of the chain"),
        ),
        Some(parent) => {
            if model.refinement_level <= parent.refinement_level {
                r.flag(
                    ConstraintId::Ref,
                    &model.name,
                    &format!(
                        "refinement level {} is not greater than level {} of '{parent_name}'",
                        model.refinement_level, parent.refinement_level
                    ),
                );
            }
        }
    }
}

fn check_name_clashes(model: &DomainModel, chain: &RefinementChain, r: &mut Reporter) {
    let mut names: Vec<&str> = Vec::new();
    let concept_names = model.concepts.iter().map(|c| c.name.as_str());
    let individual_names = model.individuals.iter().filter_map(|i| i.name.as_deref());
    for name in concept_names.chain(individual_names) {
        let subject = format!("{}.{name}", model.name);
        if names.contains(&name) {
            r.flag(ConstraintId::Ref, &subject, "name declared more than once in the model");
        } else {
            names.push(name);
            for ancestor in chain.ancestors(model) {
                if ancestor.concept(name).is_some() || ancestor.individual(name).is_some() {
                    r.flag(
                        ConstraintId::Ref,
                        &subject,
                        &format!("name already declared in ancestor model '{}'", ancestor.name),
                    );
                    break;
                }
            }
        }
    }
    let mut labels: Vec<&str> = Vec::new();
    for formula in &model.formulas {
        if let Some(label) = formula.label.as_deref() {
            if labels.contains(&label) {
                r.flag(
                    ConstraintId::Ref,
                    &format!("{}.{label}", model.name),
                    "formula label used more than once in the model",
                );
            } else {
                labels.push(label);
            }
        }
    }
}

fn check_concept(model: &DomainModel, concept: &Concept, chain: &RefinementChain, r: &mut Reporter) {
    let subject = format!("{}.{}", model.name, concept.name);

    if concept.is_enumeration && !matches!(concept.kind, ConceptKind::Plain) {
        r.flag(ConstraintId::Ref, &subject, "only a plain concept can be an enumeration");
    }
    if concept.parent.is_some() && concept.is_defined() {
        r.flag(
            ConstraintId::Ref,
            &subject,
            "a defined concept takes its meaning from its formulas and cannot have a parent",
        );
    }

    if let Some(parent) = concept.parent.as_deref() {
        match chain.find_concept(model, parent) {
            None => r.flag(
                ConstraintId::Ref,
                &subject,
                &format!("parent concept '{parent}' is not declared in scope"),
            ),
            Some(_) => {
                if on_parent_cycle(model, concept, chain) {
                    r.flag(ConstraintId::Ref, &subject, "concept is part of a parent cycle");
                }
            }
        }
    }

    // C8: an abstract concept that is neither an association nor a defined
    // concept must be constant.
    if concept.parent.is_none()
        && matches!(concept.kind, ConceptKind::Plain)
        && concept.is_variable
    {
        r.flag(
            ConstraintId::C8,
            &subject,
            "a concept with no parent that is not an association must be constant",
        );
    }

    // C9: enumerations are constant.
    if concept.is_enumeration && concept.is_variable {
        r.flag(ConstraintId::C9, &subject, "an enumeration must be constant");
    }

    match &concept.kind {
        ConceptKind::Plain => {}
        ConceptKind::Association(assoc) => {
            let mut end_ok = [false, false];
            for (i, (role, end)) in
                [("domain", &assoc.domain), ("range", &assoc.range)].iter().enumerate()
            {
                match chain.find_concept(model, end) {
                    None => r.flag(
                        ConstraintId::Ref,
                        &subject,
                        &format!("{role} concept '{end}' is not declared in scope"),
                    ),
                    Some(_) => end_ok[i] = true,
                }
            }
            for (role, card) in [
                ("domain", &assoc.domain_cardinality),
                ("range", &assoc.range_cardinality),
            ] {
                if !card.is_well_formed() {
                    r.flag(
                        ConstraintId::Ref,
                        &subject,
                        &format!("{role} cardinality {card} has min above max"),
                    );
                }
            }
            // C11: a constant association relates constant concepts.
            if !concept.is_variable {
                for (i, (role, end)) in
                    [("domain", &assoc.domain), ("range", &assoc.range)].iter().enumerate()
                {
                    if !end_ok[i] {
                        continue;
                    }
                    let (_, end_concept) = chain.find_concept(model, end).expect("resolved");
                    if end_concept.is_variable {
                        r.flag(
                            ConstraintId::C11,
                            &subject,
                            &format!(
                                "constant association has variable {role} concept '{end}'"
                            ),
                        );
                    }
                }
            }
        }
        ConceptKind::Defined(spec) => {
            if spec.defining_formulas.is_empty() {
                r.flag(ConstraintId::Ref, &subject, "defined concept has no defining formula");
            }
            for label in &spec.defining_formulas {
                match model.formula_by_label(label) {
                    None => r.flag(
                        ConstraintId::Ref,
                        &subject,
                        &format!("defining formula '{label}' is not declared in this model"),
                    ),
                    Some(f) => {
                        if !f.assertion.mentions(&concept.name) {
                            r.flag(
                                ConstraintId::Ref,
                                &subject,
                                &format!(
                                    "defining formula '{label}' does not mention '{}'",
                                    concept.name
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
}

fn check_individual(
    model: &DomainModel,
    ind: &Individual,
    subject: &str,
    chain: &RefinementChain,
    r: &mut Reporter,
) {
    // C4: individuals that are not maplets must be named.
    if ind.name.is_none() && !ind.is_maplet() {
        r.flag(ConstraintId::C4, subject, "an individual that is not a maplet must be named");
    }
    // C5: unnamed individuals are constant.
    if ind.name.is_none() && ind.is_variable {
        r.flag(ConstraintId::C5, subject, "an unnamed individual must be constant");
    }

    let of = match chain.find_concept(model, &ind.individual_of) {
        None => {
            r.flag(
                ConstraintId::Ref,
                subject,
                &format!("concept '{}' is not declared in scope", ind.individual_of),
            );
            None
        }
        Some((_, c)) => Some(c),
    };

    if ind.initial_value.is_some() && !ind.is_variable {
        r.flag(ConstraintId::Ref, subject, "only a variable individual can take an initial value");
    }
    if let Some(init) = ind.initial_value.as_deref() {
        match chain.find_individual(model, init) {
            None => r.flag(
                ConstraintId::Ref,
                subject,
                &format!("initial value '{init}' is not a declared individual"),
            ),
            Some((_, init_ind)) => {
                if init_ind.is_variable {
                    r.flag(
                        ConstraintId::Ref,
                        subject,
                        &format!("initial value '{init}' must be a constant individual"),
                    );
                }
                if !chain.concept_descends_from(model, &init_ind.individual_of, &ind.individual_of)
                {
                    r.flag(
                        ConstraintId::Ref,
                        subject,
                        &format!(
                            "initial value '{init}' is an individual of '{}', not of '{}'",
                            init_ind.individual_of, ind.individual_of
                        ),
                    );
                }
            }
        }
    }

    let Some(maplet) = &ind.maplet else { return };

    // C1: only associations have maplet individuals.
    let assoc = match of {
        Some(c) => match c.as_association() {
            Some(a) => Some(a),
            None => {
                r.flag(
                    ConstraintId::C1,
                    subject,
                    &format!("maplet individual of '{}', which is not an association", c.name),
                );
                None
            }
        },
        None => None,
    };

    // C7: an unnamed maplet carries both of its ends.
    if ind.name.is_none() && (maplet.antecedent.is_none() || maplet.image.is_none()) {
        r.flag(
            ConstraintId::C7,
            subject,
            "an unnamed maplet individual must have both an antecedent and an image",
        );
    }

    let mut resolved_ends: [Option<&Individual>; 2] = [None, None];
    for (i, (role, end, constraint)) in [
        ("antecedent", &maplet.antecedent, ConstraintId::C2),
        ("image", &maplet.image, ConstraintId::C3),
    ]
    .iter()
    .enumerate()
    {
        let Some(end_ref) = end else { continue };
        let end_ind: Option<&Individual> = match end_ref {
            IndividualRef::Named(name) => match chain.find_individual(model, name) {
                None => {
                    r.flag(
                        ConstraintId::Ref,
                        subject,
                        &format!("{role} '{name}' is not a declared individual"),
                    );
                    None
                }
                Some((_, i)) => Some(i),
            },
            IndividualRef::Inline(inner) => {
                // Anonymous individuals in end position are elements in
                // their own right; validate them under a nested subject.
                check_individual(model, inner, &format!("{subject}.{role}"), chain, r);
                Some(inner)
            }
        };
        let Some(end_ind) = end_ind else { continue };
        resolved_ends[i] = Some(end_ind);

        // C6: ends of maplet individuals must be named.
        if end_ind.name.is_none() {
            r.flag(ConstraintId::C6, subject, &format!("{role} of the maplet is unnamed"));
        }

        // C2/C3: the ends belong to the domain and range of the association.
        if let Some(assoc) = assoc {
            let expected = if *role == "antecedent" { &assoc.domain } else { &assoc.range };
            if !chain.concept_descends_from(model, &end_ind.individual_of, expected) {
                r.flag(
                    *constraint,
                    subject,
                    &format!(
                        "{role} is an individual of '{}', not of the association {} '{expected}'",
                        end_ind.individual_of,
                        if *role == "antecedent" { "domain" } else { "range" },
                    ),
                );
            }
        }
    }

    // C10: a constant maplet with both ends has constant ends.
    if !ind.is_variable {
        if let [Some(ant), Some(im)] = resolved_ends {
            if ant.is_variable || im.is_variable {
                r.flag(
                    ConstraintId::C10,
                    subject,
                    "a constant maplet individual must have constant ends",
                );
            }
        }
    }
}

fn on_parent_cycle(model: &DomainModel, concept: &Concept, chain: &RefinementChain) -> bool {
    let start = concept.name.as_str();
    let mut seen: Vec<String> = vec![start.to_string()];
    let mut current = concept.parent.clone();
    while let Some(name) = current {
        if name == start {
            return true;
        }
        if seen.contains(&name) {
            return false; // a cycle, but not through this concept
        }
        let Some((_, c)) = chain.find_concept(model, &name) else { return false };
        seen.push(name);
        current = c.parent.clone();
    }
    false
}
