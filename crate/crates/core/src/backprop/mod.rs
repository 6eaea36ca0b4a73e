//! Back-propagation of B-side additions into the domain models.
//!
//! Proof work on the generated components regularly surfaces missing pieces:
//! a set that was never modelled, a constant the invariant needs, a stronger
//! property. Those additions are written down as deltas against the B side
//! (see [`crate::bsystem::delta`]) and propagated back here, so the domain
//! models remain the single source of truth.
//!
//! Each delta is matched against a rule keyed on the kind of addition and,
//! for declarations, on the shape of the typing formula that accompanies it:
//!
//! | rule  | B-side input                                | domain-side result                  |
//! |-------|---------------------------------------------|-------------------------------------|
//! | 1     | abstract set `CO`                           | constant concept                    |
//! | 2     | enumerated set `CO = {I1, I2}`              | enumeration with its individuals    |
//! | 3     | item `I3` added to an enumerated set        | individual of the enumeration       |
//! | 4, 6  | constant/variable `CO` with `CO <: PCO`     | concept refining `PCO`              |
//! | 5, 7  | constant/variable `elt` with `elt : CO`     | individual of `CO`                  |
//! | 8, 9  | constant/variable `AS : CO1 <op> CO2`       | association, cardinalities from op  |
//! | 10, 11| constant/variable `elt = ant \|-> im`       | maplet individual                   |
//! | 12    | initialisation `elt := init`                | initial value of `elt`              |
//!
//! A declaration stays *pending* until a typing formula arrives. If none does
//! — the name is only used inside ordinary formulas — the batch closes it as
//! a [`ConceptKind::Defined`](crate::domain::ConceptKind) concept whose
//! defining formulas are the batch formulas that mention it. Formulas that
//! type nothing and define nothing are adopted as logical formulas of the
//! target model; an INVARIANT formula that mentions elements of an ancestor
//! model is marked as gluing.
//!
//! Batches are transactional: the rules run on a scratch copy of the chain,
//! and the copy replaces nothing unless the enriched chain still validates.

mod engine;

use crate::bsystem::{Addition, BDelta, InitExpr};
use crate::domain::{RefinementChain, ValidationReport};
use crate::formula::{classify_typing_pattern, Formula, RewriteError, SymbolMap, TypingPattern};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Identifier of the rule that handled a delta, for change logs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    /// Formula adopted verbatim; it neither types nor defines anything.
    Formula,
    /// Declaration without a typing formula, closed as a defined concept.
    DefaultDefined,
    /// Addition that carries no domain information (e.g. `x := {}`).
    Skip,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::R5 => "R5",
            RuleId::R6 => "R6",
            RuleId::R7 => "R7",
            RuleId::R8 => "R8",
            RuleId::R9 => "R9",
            RuleId::R10 => "R10",
            RuleId::R11 => "R11",
            RuleId::R12 => "R12",
            RuleId::Formula => "FORMULA",
            RuleId::DefaultDefined => "DEFAULT_DEFINED",
            RuleId::Skip => "SKIP",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One entry of the change log produced by a batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainUpdate {
    /// Domain model that was changed.
    pub model: String,
    pub rule: RuleId,
    /// Domain-side name of the element concerned.
    pub subject: String,
    /// Human-readable description of the change.
    pub action: String,
}

impl fmt::Display for DomainUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.model, self.action)
    }
}

/// A declaration seen earlier in the batch that has not been typed yet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendingDecl {
    pub b_name: String,
    pub is_variable: bool,
}

#[derive(Debug, Error)]
pub enum BackpropError {
    #[error("unknown component '{0}'")]
    UnknownComponent(String),
    #[error("no domain element corresponds to '{0}'")]
    MissingCorrespondence(String),
    #[error("'{subject}': {message}")]
    Conflict { subject: String, message: String },
    #[error("'{0}' was declared but never typed, and no formula in the batch mentions it")]
    Untyped(String),
    #[error("unsupported delta: {0}")]
    Unsupported(String),
    #[error("the additions would leave the domain models invalid:\n{0}")]
    Rejected(ValidationReport),
}

impl From<RewriteError> for BackpropError {
    fn from(e: RewriteError) -> BackpropError {
        BackpropError::MissingCorrespondence(e.name)
    }
}

/// Result of a successfully applied batch. The caller swaps the enriched
/// chain in for the old one; on error nothing was changed anywhere.
#[derive(Debug)]
pub struct BackpropOutcome {
    pub chain: RefinementChain,
    /// The correspondence extended with the elements the batch created.
    pub symbols: SymbolMap,
    pub updates: Vec<DomainUpdate>,
}

/// Apply a batch of B-side additions to the chain, all or nothing.
///
/// `symbols` is the name correspondence of the translation that produced the
/// B side, typically [`Translation::symbols`](crate::translate::Translation).
/// Deltas are applied in order; declarations are matched with their typing
/// formulas, remaining formulas and initialisations are resolved when the
/// batch closes, and the enriched chain is validated before it is returned.
pub fn backprop_batch(
    chain: &RefinementChain,
    symbols: &SymbolMap,
    deltas: &[BDelta],
) -> Result<BackpropOutcome, BackpropError> {
    engine::Session::new(chain, symbols).run(deltas)
}

/// The rule a delta falls under, given the declarations currently pending.
///
/// This is the pure dispatch underlying [`backprop_batch`]: deterministic in
/// the delta and the pending window, with no access to the chain. Typing
/// formulas whose subject is not pending are classified by their clause
/// (PROPERTIES types constants, INVARIANT types variables); bare
/// declarations report the rule they fall back to at the end of the batch.
pub fn match_rule(delta: &BDelta, pending: &[PendingDecl]) -> RuleId {
    let pending_variable = |name: &str| {
        pending
            .iter()
            .find(|p| p.b_name == name)
            .map(|p| p.is_variable)
    };
    match &delta.addition {
        Addition::AbstractSet(_) => RuleId::R1,
        Addition::EnumeratedSet(_) => RuleId::R2,
        Addition::SetItem { .. } => RuleId::R3,
        Addition::Constant(_) | Addition::Variable(_) => RuleId::DefaultDefined,
        Addition::Property(f) | Addition::Invariant(f) => {
            let invariant = matches!(delta.addition, Addition::Invariant(_));
            let variable = |element: &str| pending_variable(element).unwrap_or(invariant);
            match classify_typing_pattern(f) {
                TypingPattern::Subset { element, .. } => {
                    if variable(&element) { RuleId::R6 } else { RuleId::R4 }
                }
                TypingPattern::Member { element, .. } => {
                    if variable(&element) { RuleId::R7 } else { RuleId::R5 }
                }
                TypingPattern::Relation { element, .. } => {
                    if variable(&element) { RuleId::R9 } else { RuleId::R8 }
                }
                TypingPattern::MapletEq { element, .. } => {
                    if variable(&element) { RuleId::R11 } else { RuleId::R10 }
                }
                TypingPattern::NonTyping => RuleId::Formula,
            }
        }
        Addition::Initialisation(init) => match &init.expr {
            InitExpr::Becomes(Formula::Name(_)) => RuleId::R12,
            InitExpr::Becomes(Formula::SetExtension(items)) if items.is_empty() => RuleId::Skip,
            InitExpr::BecomesIn(_) => RuleId::Skip,
            InitExpr::Becomes(_) => RuleId::R12,
        },
    }
}
