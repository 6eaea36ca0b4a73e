//! Deterministic rendering of components in clause syntax.

use super::{BComponent, ComponentKind, InitExpr, StructureError};
use std::fmt::Write;

/// Render a component as Atelier B-flavoured clause text.
///
/// Clauses appear in the fixed order SYSTEM/REFINEMENT, REFINES, SETS,
/// CONSTANTS, PROPERTIES, VARIABLES, INVARIANT, INITIALISATION, END; empty
/// clauses are omitted entirely. Declarations keep their insertion order,
/// one per line, indented four spaces; sets are separated by `;`, constants
/// and variables by `,`, formulas by `&` and initialisations by `||`. Equal
/// components always produce identical bytes.
pub fn print_component(component: &BComponent) -> Result<String, StructureError> {
    component.check_structure()?;
    let mut out = String::new();
    match component.kind {
        ComponentKind::System => writeln!(out, "SYSTEM {}", component.name).unwrap(),
        ComponentKind::Refinement => {
            writeln!(out, "REFINEMENT {}", component.name).unwrap();
            writeln!(out, "REFINES {}", component.refines.as_deref().unwrap()).unwrap();
        }
    }

    let mut sets: Vec<String> = component.abstract_sets.clone();
    sets.extend(
        component
            .enumerated_sets
            .iter()
            .map(|set| format!("{} = {{{}}}", set.name, set.items.join(", "))),
    );
    clause(&mut out, "SETS", &sets, ";");
    clause(&mut out, "CONSTANTS", &component.constants, ",");
    let properties: Vec<String> =
        component.properties.iter().map(|f| f.to_string()).collect();
    clause(&mut out, "PROPERTIES", &properties, " &");
    clause(&mut out, "VARIABLES", &component.variables, ",");
    let invariants: Vec<String> =
        component.invariants.iter().map(|f| f.to_string()).collect();
    clause(&mut out, "INVARIANT", &invariants, " &");
    let initialisations: Vec<String> = component
        .initialisations
        .iter()
        .map(|init| match &init.expr {
            InitExpr::Becomes(e) => format!("{} := {e}", init.variable),
            InitExpr::BecomesIn(e) => format!("{} :: {e}", init.variable),
        })
        .collect();
    clause(&mut out, "INITIALISATION", &initialisations, " ||");
    out.push_str("END\n");
    Ok(out)
}

fn clause(out: &mut String, keyword: &str, lines: &[String], separator: &str) {
    if lines.is_empty() {
        return;
    }
    out.push_str(keyword);
    out.push('\n');
    for (i, line) in lines.iter().enumerate() {
        out.push_str("    ");
        out.push_str(line);
        if i + 1 < lines.len() {
            out.push_str(separator);
        }
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::super::{BComponent, EnumeratedSet, InitExpr, Initialisation, StructureError};
    use super::print_component;
    use crate::formula::parse_formula;

    #[test]
    fn an_empty_system_prints_header_and_end_only() {
        let c = BComponent::system("M");
        assert_eq!(print_component(&c).unwrap(), "SYSTEM M\nEND\n");
    }

    #[test]
    fn all_clauses_print_in_fixed_order() {
        let mut c = BComponent::refinement("Saturn_2", "Saturn_1");
        c.abstract_sets.push("A".into());
        c.enumerated_sets.push(EnumeratedSet {
            name: "CO".into(),
            items: vec!["I1".into(), "I2".into()],
        });
        c.constants.push("c1".into());
        c.constants.push("c2".into());
        c.properties.push(parse_formula("c1 : A").unwrap());
        c.properties.push(parse_formula("c2 : CO").unwrap());
        c.variables.push("v".into());
        c.invariants.push(parse_formula("v : A").unwrap());
        c.initialisations.push(Initialisation {
            variable: "v".into(),
            expr: InitExpr::Becomes(parse_formula("c1").unwrap()),
        });
        let expected = "\
REFINEMENT Saturn_2
REFINES Saturn_1
SETS
    A;
    CO = {I1, I2}
CONSTANTS
    c1,
    c2
PROPERTIES
    c1 : A &
    c2 : CO
VARIABLES
    v
INVARIANT
    v : A
INITIALISATION
    v := c1
END
";
        assert_eq!(print_component(&c).unwrap(), expected);
        // Printing is pure and deterministic.
        assert_eq!(print_component(&c).unwrap(), expected);
    }

    #[test]
    fn becomes_element_of_prints_with_double_colon() {
        let mut c = BComponent::system("M");
        c.abstract_sets.push("S".into());
        c.variables.push("v".into());
        c.initialisations.push(Initialisation {
            variable: "v".into(),
            expr: InitExpr::BecomesIn(parse_formula("S").unwrap()),
        });
        assert!(print_component(&c).unwrap().contains("    v :: S\n"));
    }

    #[test]
    fn structural_defects_are_rejected() {
        let mut c = BComponent::system("M");
        c.refines = Some("X".into());
        assert_eq!(
            print_component(&c),
            Err(StructureError::SystemRefines { component: "M".into() })
        );

        let mut c = BComponent::refinement("M", "P");
        c.refines = None;
        assert!(matches!(
            print_component(&c),
            Err(StructureError::MissingRefines { .. })
        ));

        let mut c = BComponent::system("M");
        c.variables.push("v".into());
        c.properties.push(parse_formula("v : INTEGER").unwrap());
        assert_eq!(
            print_component(&c),
            Err(StructureError::VariableInProperties {
                component: "M".into(),
                variable: "v".into()
            })
        );

        let mut c = BComponent::system("M");
        c.initialisations.push(Initialisation {
            variable: "w".into(),
            expr: InitExpr::Becomes(parse_formula("0").unwrap()),
        });
        assert!(matches!(
            print_component(&c),
            Err(StructureError::UnknownInitVariable { .. })
        ));

        let mut c = BComponent::system("M");
        c.abstract_sets.push("S".into());
        c.enumerated_sets.push(EnumeratedSet { name: "S".into(), items: vec![] });
        assert!(matches!(print_component(&c), Err(StructureError::DuplicateSet { .. })));

        let mut c = BComponent::system("M");
        c.enumerated_sets.push(EnumeratedSet { name: "A".into(), items: vec!["I".into()] });
        c.enumerated_sets.push(EnumeratedSet { name: "B".into(), items: vec!["I".into()] });
        assert!(matches!(
            print_component(&c),
            Err(StructureError::DuplicateSetItem { .. })
        ));
    }

    #[test]
    fn quantified_variables_in_properties_are_not_variable_uses() {
        let mut c = BComponent::system("M");
        c.variables.push("xx".into());
        c.abstract_sets.push("S".into());
        // The bound xx below is a fresh quantifier variable, not the state
        // variable; the free-name scan must not confuse the two.
        c.properties.push(parse_formula("!xx.(xx : S => xx = xx)").unwrap());
        c.invariants.push(parse_formula("xx : S").unwrap());
        c.initialisations.push(Initialisation {
            variable: "xx".into(),
            expr: InitExpr::BecomesIn(parse_formula("S").unwrap()),
        });
        assert!(print_component(&c).is_ok());
    }
}
