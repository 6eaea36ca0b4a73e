//! Forward translation of a refinement chain into B System components.
//!
//! The chain is translated root-first: the root model becomes a `SYSTEM`
//! component, every other model a `REFINEMENT` of its parent's component.
//! Within a model, concepts are translated first, then individuals, then
//! the formulas that are not already consumed as defining formulas of a
//! defined concept.
//!
//! Every element yields a small group of additions ([`DeclGroup`]). The
//! groups are folded into the component in order, and also returned as is:
//! they use the same [`Addition`] vocabulary as back-propagation deltas, so
//! a group can be replayed through the reverse pass to reconstruct the
//! element it came from.

mod element;
mod mangle;
mod relation;

pub use element::{translate_concept, translate_formula, translate_individual};
pub use mangle::{is_reserved_b_name, mangle};
pub use relation::{
    cardinalities_for_operator, derive_relation_kind, operator_flags, operator_for_flags,
    residual_formula, Flags, RelationKind, Residual, OPERATOR_FLAGS,
};

use crate::bsystem::{Addition, BComponent, StructureError};
use crate::domain::{validate_chain, DomainModel, RefinementChain, ValidationReport};
use crate::formula::{RewriteError, SymbolMap, SymbolMapError};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Everything the per-element translators need to know.
pub struct TranslationContext<'a> {
    pub(crate) chain: &'a RefinementChain,
    pub(crate) model: &'a DomainModel,
    pub(crate) symbols: &'a SymbolMap,
}

impl<'a> TranslationContext<'a> {
    pub fn new(
        chain: &'a RefinementChain,
        model: &'a DomainModel,
        symbols: &'a SymbolMap,
    ) -> TranslationContext<'a> {
        TranslationContext { chain, model, symbols }
    }
}

/// Which domain element a declaration group came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ElementId {
    Concept(String),
    Individual(String),
    Formula { label: Option<String>, index: usize },
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementId::Concept(n) | ElementId::Individual(n) => write!(f, "{n}"),
            ElementId::Formula { label: Some(l), .. } => write!(f, "{l}"),
            ElementId::Formula { label: None, index } => write!(f, "formulas[{index}]"),
        }
    }
}

/// The additions one domain element contributed to one component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeclGroup {
    /// B name of the component the additions belong to.
    pub component: String,
    /// Domain model the element lives in.
    pub model: String,
    pub element: ElementId,
    pub additions: Vec<Addition>,
}

/// A non-fatal translation note.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    /// `model.element` path of the subject.
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "warning: {}: {}", self.subject, self.message)
    }
}

/// The result of translating a whole chain.
#[derive(Debug, Clone)]
pub struct Translation {
    pub components: Vec<BComponent>,
    pub groups: Vec<DeclGroup>,
    pub symbols: SymbolMap,
    pub warnings: Vec<Warning>,
}

impl Translation {
    pub fn component(&self, name: &str) -> Option<&BComponent> {
        self.components.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("domain models are not valid:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Symbols(#[from] SymbolMapError),
    #[error("name has no B correspondence: {0}")]
    Rewrite(#[from] RewriteError),
    #[error("translated component is not well-formed: {0}")]
    Structure(#[from] StructureError),
}

/// Component names per model, root first. Components live in their own
/// namespace, so they are mangled independently of element symbols.
pub fn component_names(chain: &RefinementChain) -> Vec<(String, String)> {
    let mut names: Vec<(String, String)> = Vec::new();
    for model in chain.models() {
        let taken = |s: &str| names.iter().any(|(_, b)| b == s);
        let b = mangle(&model.name, &taken);
        names.push((model.name.clone(), b));
    }
    names
}

/// Translate a validated refinement chain into one component per model.
pub fn translate_chain(chain: &RefinementChain) -> Result<Translation, TranslateError> {
    let report = validate_chain(chain);
    if !report.is_valid() {
        return Err(TranslateError::Invalid(report));
    }

    let component_names = component_names(chain);
    let component_of = |model: &str| -> String {
        component_names
            .iter()
            .find(|(m, _)| m == model)
            .expect("every model got a component name")
            .1
            .clone()
    };

    // Element symbols are assigned chain-wide in declaration order, so that
    // forward references within a model resolve when its formulas rewrite.
    let mut symbols = SymbolMap::new();
    for model in chain.models() {
        let names = model
            .concepts
            .iter()
            .map(|c| &c.name)
            .chain(model.individuals.iter().filter_map(|i| i.name.as_ref()));
        for name in names {
            let b = mangle(name, &|s| symbols.has_b_name(s));
            symbols.insert(name, &b)?;
        }
    }

    let mut components = Vec::new();
    let mut groups: Vec<DeclGroup> = Vec::new();
    let mut warnings = Vec::new();
    for model in chain.models() {
        let name = component_of(&model.name);
        let mut component = match &model.parent {
            None => BComponent::system(&name),
            Some(parent) => BComponent::refinement(&name, component_of(parent)),
        };
        let ctx = TranslationContext::new(chain, model, &symbols);

        let mut emit = |element: ElementId, additions: Vec<Addition>,
                        component: &mut BComponent| {
            if additions.is_empty() {
                return;
            }
            for addition in &additions {
                fold(component, addition.clone());
            }
            groups.push(DeclGroup {
                component: component.name.clone(),
                model: model.name.clone(),
                element,
                additions,
            });
        };

        for concept in &model.concepts {
            let additions = translate_concept(concept, &ctx, &mut warnings)?;
            emit(ElementId::Concept(concept.name.clone()), additions, &mut component);
        }
        for individual in &model.individuals {
            let additions = translate_individual(individual, &ctx, &mut warnings)?;
            if let Some(name) = &individual.name {
                emit(ElementId::Individual(name.clone()), additions, &mut component);
            }
        }
        let consumed: Vec<&str> = model
            .concepts
            .iter()
            .filter_map(|c| match &c.kind {
                crate::domain::ConceptKind::Defined(spec) => Some(&spec.defining_formulas),
                _ => None,
            })
            .flatten()
            .map(String::as_str)
            .collect();
        for (index, formula) in model.formulas.iter().enumerate() {
            if formula.label.as_deref().is_some_and(|l| consumed.contains(&l)) {
                continue;
            }
            let addition = translate_formula(formula, &ctx)?;
            emit(
                ElementId::Formula { label: formula.label.clone(), index },
                vec![addition],
                &mut component,
            );
        }
        component.check_structure()?;
        components.push(component);
    }
    Ok(Translation { components, groups, symbols, warnings })
}

/// Apply one addition to a component under construction.
fn fold(component: &mut BComponent, addition: Addition) {
    match addition {
        Addition::AbstractSet(s) => component.abstract_sets.push(s),
        Addition::EnumeratedSet(e) => component.enumerated_sets.push(e),
        Addition::SetItem { set, item } => component
            .enumerated_sets
            .iter_mut()
            .find(|e| e.name == set)
            .expect("items fold after their enumerated set")
            .items
            .push(item),
        Addition::Constant(c) => component.constants.push(c),
        Addition::Variable(v) => component.variables.push(v),
        Addition::Property(f) => component.properties.push(f),
        Addition::Invariant(f) => component.invariants.push(f),
        Addition::Initialisation(i) => component.initialisations.push(i),
    }
}
