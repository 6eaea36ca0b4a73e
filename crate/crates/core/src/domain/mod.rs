//! The domain metamodel: concepts, associations, individuals and the
//! refinement chains that organize them.
//!
//! Models reference each other by name. A concept's `parent`, an
//! association's `domain`/`range` and an individual's `individual_of` name a
//! concept declared in the same model or in any ancestor model of the chain.
//! Unnamed individuals cannot be named from elsewhere, so a maplet end is
//! either a [`IndividualRef::Named`] reference or an [`IndividualRef::Inline`]
//! anonymous individual carried in place — the latter is what the validator's
//! "ends must be named" rule exists to reject.

mod chain;
mod validate;

pub use chain::{resolve_chain, ChainError, RefinementChain};
pub use validate::{validate_chain, validate_model};

use crate::formula::Formula;
use serde::Serialize;
use std::fmt;

/// Cardinality limit of one side of an association. `0..*` by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cardinality {
    pub min: u32,
    pub max: Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Finite(u32),
    Unbounded,
}

impl Cardinality {
    pub const DEFAULT: Cardinality = Cardinality { min: 0, max: Bound::Unbounded };

    pub fn new(min: u32, max: Bound) -> Cardinality {
        Cardinality { min, max }
    }

    pub fn exactly_one() -> Cardinality {
        Cardinality { min: 1, max: Bound::Finite(1) }
    }

    pub fn at_most_one() -> Cardinality {
        Cardinality { min: 0, max: Bound::Finite(1) }
    }

    pub fn is_default(&self) -> bool {
        *self == Cardinality::DEFAULT
    }

    /// min ≤ max; `*` is above every finite bound.
    pub fn is_well_formed(&self) -> bool {
        match self.max {
            Bound::Finite(m) => self.min <= m,
            Bound::Unbounded => true,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            Bound::Finite(m) => write!(f, "{}..{}", self.min, m),
            Bound::Unbounded => write!(f, "{}..*", self.min),
        }
    }
}

/// A concept of the domain: a set of individuals. Associations and defined
/// concepts are concepts too; what they add lives in [`ConceptKind`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub name: String,
    /// TRUE when the extent of the concept can change from state to state.
    pub is_variable: bool,
    /// TRUE when all individuals of the concept are declared in the model.
    pub is_enumeration: bool,
    /// Name of the parent concept, when this one specializes another.
    pub parent: Option<String>,
    pub kind: ConceptKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConceptKind {
    Plain,
    Association(AssociationSpec),
    Defined(DefinedSpec),
}

/// An association is a concept whose individuals are maplets between a
/// domain and a range concept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationSpec {
    pub domain: String,
    pub range: String,
    /// How many domain individuals one range individual may be related to.
    pub domain_cardinality: Cardinality,
    /// How many range individuals one domain individual may be related to.
    pub range_cardinality: Cardinality,
}

/// A concept entirely characterized by logical formulas rather than by a
/// declared structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinedSpec {
    /// Labels of the defining formulas, which live in the same model. Never
    /// empty in a well-formed model.
    pub defining_formulas: Vec<String>,
}

impl Concept {
    pub fn plain(name: impl Into<String>) -> Concept {
        Concept {
            name: name.into(),
            is_variable: false,
            is_enumeration: false,
            parent: None,
            kind: ConceptKind::Plain,
        }
    }

    pub fn as_association(&self) -> Option<&AssociationSpec> {
        match &self.kind {
            ConceptKind::Association(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_association(&self) -> bool {
        matches!(self.kind, ConceptKind::Association(_))
    }

    pub fn is_defined(&self) -> bool {
        matches!(self.kind, ConceptKind::Defined(_))
    }
}

/// An individual (member) of a concept. `maplet: Some(..)` makes it a maplet
/// individual, the only kind allowed to stay unnamed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub name: Option<String>,
    pub is_variable: bool,
    /// Name of the concept this individual belongs to.
    pub individual_of: String,
    /// Name of a constant individual of the same concept.
    pub initial_value: Option<String>,
    pub maplet: Option<MapletSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapletSpec {
    pub antecedent: Option<IndividualRef>,
    pub image: Option<IndividualRef>,
}

/// Reference position for individuals. Anonymous individuals have no name
/// to refer to, so they can only appear inline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndividualRef {
    Named(String),
    Inline(Box<Individual>),
}

impl Individual {
    pub fn named(name: impl Into<String>, of: impl Into<String>) -> Individual {
        Individual {
            name: Some(name.into()),
            is_variable: false,
            individual_of: of.into(),
            initial_value: None,
            maplet: None,
        }
    }

    pub fn is_maplet(&self) -> bool {
        self.maplet.is_some()
    }
}

/// A logical formula attached to a model. Gluing formulas relate the data of
/// a model to the data of its ancestors and only make sense on models that
/// refine another one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalFormula {
    pub label: Option<String>,
    pub is_gluing: bool,
    pub assertion: Formula,
}

/// One level of a refinement chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainModel {
    pub name: String,
    /// Depth in the chain; strictly increases from parent to child.
    pub refinement_level: u32,
    /// Name of the model this one refines.
    pub parent: Option<String>,
    pub concepts: Vec<Concept>,
    pub individuals: Vec<Individual>,
    pub formulas: Vec<LogicalFormula>,
}

impl DomainModel {
    pub fn new(name: impl Into<String>) -> DomainModel {
        DomainModel {
            name: name.into(),
            refinement_level: 0,
            parent: None,
            concepts: Vec::new(),
            individuals: Vec::new(),
            formulas: Vec::new(),
        }
    }

    pub fn concept(&self, name: &str) -> Option<&Concept> {
        self.concepts.iter().find(|c| c.name == name)
    }

    pub fn individual(&self, name: &str) -> Option<&Individual> {
        self.individuals.iter().find(|i| i.name.as_deref() == Some(name))
    }

    pub fn formula_by_label(&self, label: &str) -> Option<&LogicalFormula> {
        self.formulas.iter().find(|f| f.label.as_deref() == Some(label))
    }
}

/// Identifier of a well-formedness rule. `C1`..`C11` are the structural
/// constraints; `REF` covers referential integrity: dangling references,
/// duplicate names, parent cycles and malformed auxiliary data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConstraintId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    Ref,
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintId::Ref => write!(f, "REF"),
            other => write!(f, "C{}", *other as u8 + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: ConstraintId,
    /// `model.element` path of the offending element.
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.constraint, self.subject, self.message)
    }
}

/// Result of validating a model: every violation found, in declaration
/// order, at most one per (constraint, element) pair. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn constraints(&self) -> Vec<ConstraintId> {
        let mut ids: Vec<ConstraintId> = self.violations.iter().map(|v| v.constraint).collect();
        ids.sort();
        ids.dedup();
        ids
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
