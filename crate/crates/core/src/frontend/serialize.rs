//! Rendering a [`DomainModel`] back to `.dom` text.
//!
//! The layout is canonical: the header line, then one blank-line-separated
//! section per nonempty element kind — concepts, individuals, formulas — in
//! declaration order. Default cardinalities are omitted, as is everything
//! else the parser treats as optional and absent. Parsing the output yields
//! the model back, except that maplet ends are dropped when either end is
//! not a named reference (the textual grammar has no spelling for inline
//! ends).

use crate::domain::{Concept, ConceptKind, DomainModel, Individual, IndividualRef, LogicalFormula};
use std::fmt::Write;

/// Render one model as `.dom` text, ending in a newline.
pub fn serialize_domain_model(model: &DomainModel) -> String {
    let mut out = String::new();
    out.push_str("domainmodel ");
    out.push_str(&model.name);
    if let Some(parent) = &model.parent {
        out.push_str(" refines ");
        out.push_str(parent);
    }
    out.push('\n');
    for concept in &model.concepts {
        write_concept(&mut out, concept);
    }
    if !model.individuals.is_empty() {
        out.push('\n');
    }
    for individual in &model.individuals {
        write_individual(&mut out, individual);
    }
    if !model.formulas.is_empty() {
        out.push('\n');
    }
    for formula in &model.formulas {
        write_formula(&mut out, formula);
    }
    out
}

fn write_concept(out: &mut String, c: &Concept) {
    match &c.kind {
        ConceptKind::Plain => {
            out.push_str("concept ");
            out.push_str(&c.name);
            if c.is_variable {
                out.push_str(" variable");
            }
            if c.is_enumeration {
                out.push_str(" enumeration");
            }
            if let Some(parent) = &c.parent {
                out.push_str(" subconceptof ");
                out.push_str(parent);
            }
        }
        ConceptKind::Defined(spec) => {
            out.push_str("definedconcept ");
            out.push_str(&c.name);
            if c.is_variable {
                out.push_str(" variable");
            }
            out.push_str(" where ");
            out.push_str(&spec.defining_formulas.join(", "));
        }
        ConceptKind::Association(spec) => {
            out.push_str("association ");
            out.push_str(&c.name);
            if c.is_variable {
                out.push_str(" variable");
            }
            if let Some(parent) = &c.parent {
                out.push_str(" subconceptof ");
                out.push_str(parent);
            }
            let _ = write!(out, " from {} to {}", spec.domain, spec.range);
            if !spec.domain_cardinality.is_default() {
                let _ = write!(out, " domaincard {}", spec.domain_cardinality);
            }
            if !spec.range_cardinality.is_default() {
                let _ = write!(out, " rangecard {}", spec.range_cardinality);
            }
        }
    }
    out.push('\n');
}

fn write_individual(out: &mut String, i: &Individual) {
    match &i.maplet {
        None => {
            out.push_str("individual ");
            // Unnamed plain individuals have no spelling; "_" keeps the line
            // parseable should one ever reach us.
            out.push_str(i.name.as_deref().unwrap_or("_"));
        }
        Some(ends) => {
            out.push_str("maplet");
            if let Some(name) = &i.name {
                out.push(' ');
                out.push_str(name);
            }
            if i.is_variable {
                out.push_str(" variable");
            }
            out.push_str(" of ");
            out.push_str(&i.individual_of);
            if let (Some(IndividualRef::Named(a)), Some(IndividualRef::Named(b))) =
                (&ends.antecedent, &ends.image)
            {
                let _ = write!(out, " = {a} |-> {b}");
            }
            if let Some(init) = &i.initial_value {
                out.push_str(" init ");
                out.push_str(init);
            }
            out.push('\n');
            return;
        }
    }
    if i.is_variable {
        out.push_str(" variable");
    }
    out.push_str(" of ");
    out.push_str(&i.individual_of);
    if let Some(init) = &i.initial_value {
        out.push_str(" init ");
        out.push_str(init);
    }
    out.push('\n');
}

fn write_formula(out: &mut String, f: &LogicalFormula) {
    out.push_str("formula");
    if f.is_gluing {
        out.push_str(" gluing");
    }
    if let Some(label) = &f.label {
        out.push(' ');
        out.push_str(label);
    }
    let _ = writeln!(out, ": {}", f.assertion);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{AssociationSpec, Bound, Cardinality, DefinedSpec, MapletSpec};
    use crate::formula::parse_formula;
    use crate::frontend::parse_domain_model;

    fn rich_model() -> DomainModel {
        let mut m = DomainModel::new("Saturn_2");
        m.parent = Some("Saturn_1".into());
        m.concepts.push(Concept::plain("T_IN"));
        m.concepts.push(Concept {
            is_variable: true,
            is_enumeration: true,
            parent: Some("T_IN".into()),
            ..Concept::plain("MI")
        });
        m.concepts.push(Concept {
            kind: ConceptKind::Defined(DefinedSpec {
                defining_formulas: vec!["vin_def".into(), "vin_aux".into()],
            }),
            ..Concept::plain("VIN")
        });
        m.concepts.push(Concept {
            kind: ConceptKind::Association(AssociationSpec {
                domain: "T_IN".into(),
                range: "MI".into(),
                domain_cardinality: Cardinality::new(1, Bound::Unbounded),
                range_cardinality: Cardinality::at_most_one(),
            }),
            ..Concept::plain("FB")
        });
        m.individuals.push(Individual {
            is_variable: true,
            initial_value: Some("in0".into()),
            ..Individual::named("in", "T_IN")
        });
        m.individuals.push(Individual::named("in0", "T_IN"));
        m.individuals.push(Individual {
            maplet: Some(MapletSpec {
                antecedent: Some(IndividualRef::Named("in0".into())),
                image: Some(IndividualRef::Named("mi0".into())),
            }),
            ..Individual::named("f0", "FB")
        });
        m.formulas.push(LogicalFormula {
            label: Some("vin_def".into()),
            is_gluing: false,
            assertion: parse_formula("VIN = T_IN --> BOOL").unwrap(),
        });
        m.formulas.push(LogicalFormula {
            label: None,
            is_gluing: true,
            assertion: parse_formula("in_l = vec_to_in(s_in_l)").unwrap(),
        });
        m
    }

    #[test]
    fn renders_the_canonical_layout() {
        assert_eq!(
            serialize_domain_model(&rich_model()),
            "domainmodel Saturn_2 refines Saturn_1\n\
             concept T_IN\n\
             concept MI variable enumeration subconceptof T_IN\n\
             definedconcept VIN where vin_def, vin_aux\n\
             association FB from T_IN to MI domaincard 1..* rangecard 0..1\n\
             \n\
             individual in variable of T_IN init in0\n\
             individual in0 of T_IN\n\
             maplet f0 of FB = in0 |-> mi0\n\
             \n\
             formula vin_def: VIN = T_IN --> BOOL\n\
             formula gluing: in_l = vec_to_in(s_in_l)\n"
        );
    }

    #[test]
    fn an_empty_model_is_a_single_header_line() {
        assert_eq!(serialize_domain_model(&DomainModel::new("M")), "domainmodel M\n");
    }

    #[test]
    fn parse_of_serialize_is_identity() {
        let m = rich_model();
        assert_eq!(parse_domain_model(&serialize_domain_model(&m)).unwrap(), m);
    }

    #[test]
    fn default_cardinalities_are_omitted() {
        let mut m = DomainModel::new("M");
        m.concepts.push(Concept {
            kind: ConceptKind::Association(AssociationSpec {
                domain: "X".into(),
                range: "Y".into(),
                domain_cardinality: Cardinality::DEFAULT,
                range_cardinality: Cardinality::DEFAULT,
            }),
            ..Concept::plain("A")
        });
        assert_eq!(serialize_domain_model(&m), "domainmodel M\nassociation A from X to Y\n");
    }

    #[test]
    fn inline_maplet_ends_are_not_rendered() {
        let mut m = DomainModel::new("M");
        m.individuals.push(Individual {
            maplet: Some(MapletSpec {
                antecedent: Some(IndividualRef::Inline(Box::new(Individual::named(
                    "in0", "T_IN",
                )))),
                image: Some(IndividualRef::Named("out0".into())),
            }),
            ..Individual::named("f0", "FB")
        });
        assert_eq!(
            serialize_domain_model(&m),
            "domainmodel M\n\nmaplet f0 of FB\n"
        );
    }

    #[test]
    fn unnamed_maplets_round_trip() {
        let mut m = DomainModel::new("M");
        m.individuals.push(Individual {
            name: None,
            is_variable: true,
            ..Individual::named("_", "FB")
        });
        m.individuals[0].maplet = Some(MapletSpec { antecedent: None, image: None });
        assert_eq!(serialize_domain_model(&m), "domainmodel M\n\nmaplet variable of FB\n");
        assert_eq!(parse_domain_model(&serialize_domain_model(&m)).unwrap(), m);
    }
}
