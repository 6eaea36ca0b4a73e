//! B System components and textual deltas.
//!
//! A [`BComponent`] is the abstract syntax of one B System component: a
//! `SYSTEM` at the root of a development or a `REFINEMENT` of another
//! component, with the clause inventory we need (sets, constants,
//! properties, variables, invariants, initialisations). [`print_component`]
//! renders it in Atelier B-flavoured ASCII clause syntax; printing is
//! deterministic and preserves declaration order.
//!
//! A [`BDelta`] describes one *addition* made on the B side — a new set,
//! constant, variable, formula or initialisation — and is what the
//! back-propagation pass consumes. Deltas are read from a small line-oriented
//! surface syntax by [`parse_deltas`]; see that function for the grammar.

mod delta;
mod print;

pub use delta::{parse_deltas, Addition, BDelta, DeltaParseError};
pub use print::print_component;

use crate::formula::Formula;
use serde::Serialize;
use thiserror::Error;

/// Whether a component starts a development or refines another component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    System,
    Refinement,
}

/// A named set whose elements are exhaustively enumerated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumeratedSet {
    pub name: String,
    pub items: Vec<String>,
}

/// The right-hand side of an initialisation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum InitExpr {
    /// Deterministic assignment `x := e`.
    Becomes(Formula),
    /// Non-deterministic choice `x :: S` of an element of a set.
    BecomesIn(Formula),
}

/// One substitution of the INITIALISATION clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Initialisation {
    pub variable: String,
    pub expr: InitExpr,
}

/// One B System component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BComponent {
    pub name: String,
    pub kind: ComponentKind,
    /// Name of the refined component; present exactly for refinements.
    pub refines: Option<String>,
    pub abstract_sets: Vec<String>,
    pub enumerated_sets: Vec<EnumeratedSet>,
    pub constants: Vec<String>,
    pub properties: Vec<Formula>,
    pub variables: Vec<String>,
    pub invariants: Vec<Formula>,
    pub initialisations: Vec<Initialisation>,
}

impl BComponent {
    pub fn system(name: impl Into<String>) -> BComponent {
        BComponent {
            name: name.into(),
            kind: ComponentKind::System,
            refines: None,
            abstract_sets: Vec::new(),
            enumerated_sets: Vec::new(),
            constants: Vec::new(),
            properties: Vec::new(),
            variables: Vec::new(),
            invariants: Vec::new(),
            initialisations: Vec::new(),
        }
    }

    pub fn refinement(name: impl Into<String>, refines: impl Into<String>) -> BComponent {
        BComponent {
            kind: ComponentKind::Refinement,
            refines: Some(refines.into()),
            ..BComponent::system(name)
        }
    }

    /// True when every clause is empty.
    pub fn is_empty(&self) -> bool {
        self.abstract_sets.is_empty()
            && self.enumerated_sets.is_empty()
            && self.constants.is_empty()
            && self.properties.is_empty()
            && self.variables.is_empty()
            && self.invariants.is_empty()
            && self.initialisations.is_empty()
    }

    /// Check the structural invariants that printing relies on.
    pub fn check_structure(&self) -> Result<(), StructureError> {
        match (self.kind, &self.refines) {
            (ComponentKind::System, Some(_)) => {
                return Err(StructureError::SystemRefines { component: self.name.clone() })
            }
            (ComponentKind::Refinement, None) => {
                return Err(StructureError::MissingRefines { component: self.name.clone() })
            }
            _ => {}
        }
        // Variables can be involved only in invariants.
        for property in &self.properties {
            for name in property.free_names() {
                if self.variables.contains(&name) {
                    return Err(StructureError::VariableInProperties {
                        component: self.name.clone(),
                        variable: name,
                    });
                }
            }
        }
        for init in &self.initialisations {
            if !self.variables.contains(&init.variable) {
                return Err(StructureError::UnknownInitVariable {
                    component: self.name.clone(),
                    variable: init.variable.clone(),
                });
            }
        }
        let mut set_names: Vec<&str> = Vec::new();
        for name in self.abstract_sets.iter().chain(self.enumerated_sets.iter().map(|e| &e.name))
        {
            if set_names.contains(&name.as_str()) {
                return Err(StructureError::DuplicateSet {
                    component: self.name.clone(),
                    set: name.clone(),
                });
            }
            set_names.push(name);
        }
        let mut items: Vec<&str> = Vec::new();
        for set in &self.enumerated_sets {
            for item in &set.items {
                if items.contains(&item.as_str()) {
                    return Err(StructureError::DuplicateSetItem {
                        component: self.name.clone(),
                        item: item.clone(),
                    });
                }
                items.push(item);
            }
        }
        Ok(())
    }
}

/// A structural defect that makes a component unprintable.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum StructureError {
    #[error("system component '{component}' must not refine another component")]
    SystemRefines { component: String },
    #[error("refinement component '{component}' does not name the component it refines")]
    MissingRefines { component: String },
    #[error("variable '{variable}' appears in a PROPERTIES formula of '{component}'")]
    VariableInProperties { component: String, variable: String },
    #[error("initialised variable '{variable}' is not declared in '{component}'")]
    UnknownInitVariable { component: String, variable: String },
    #[error("set '{set}' is declared more than once in '{component}'")]
    DuplicateSet { component: String, set: String },
    #[error("item '{item}' belongs to more than one enumerated set of '{component}'")]
    DuplicateSetItem { component: String, item: String },
}
