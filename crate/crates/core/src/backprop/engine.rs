//! The batch engine behind [`backprop_batch`](super::backprop_batch).
//!
//! A session owns a scratch copy of the chain and of the symbol map and
//! applies deltas in order. Declarations wait in a pending window until a
//! typing formula claims them; a pending name that another typing formula
//! *references* is promoted to a defined concept on the spot, from the batch
//! formulas seen so far. Initialisations and leftover formulas are resolved
//! when the batch closes, and the whole result is validated before anything
//! is handed back.

use super::{BackpropError, BackpropOutcome, DomainUpdate, RuleId};
use crate::bsystem::{Addition, BDelta, EnumeratedSet, InitExpr, Initialisation};
use crate::domain::{
    validate_chain, AssociationSpec, Concept, ConceptKind, DefinedSpec, DomainModel, Individual,
    IndividualRef, LogicalFormula, MapletSpec, RefinementChain,
};
use crate::formula::{
    classify_typing_pattern, rewrite_from_b, Formula, RelationOp, SymbolMap, TypingPattern,
};
use crate::translate::{cardinalities_for_operator, component_names, mangle};

pub(super) struct Session {
    chain: RefinementChain,
    symbols: SymbolMap,
    /// `(model, component)` pairs fixing which model each delta targets.
    components: Vec<(String, String)>,
    pending: Vec<PendingSlot>,
    stash: Vec<Stashed>,
    inits: Vec<(String, Initialisation)>,
    updates: Vec<DomainUpdate>,
}

/// A declared but not yet typed B name, with the domain name reserved for it.
struct PendingSlot {
    model: String,
    b_name: String,
    domain_name: String,
    is_variable: bool,
}

/// A batch formula that neither typed nor defined anything yet. It is kept
/// on the B side until the batch closes, because it may mention names whose
/// domain elements are still to be created.
struct Stashed {
    model: String,
    invariant: bool,
    formula: Formula,
    /// Set once the formula is claimed as a defining formula.
    label: Option<String>,
}

/// Where a B name currently points.
enum Site {
    Pending(usize),
    Element(String),
    Unknown,
}

impl Session {
    pub(super) fn new(chain: &RefinementChain, symbols: &SymbolMap) -> Session {
        Session {
            chain: chain.clone(),
            symbols: symbols.clone(),
            components: component_names(chain),
            pending: Vec::new(),
            stash: Vec::new(),
            inits: Vec::new(),
            updates: Vec::new(),
        }
    }

    pub(super) fn run(mut self, deltas: &[BDelta]) -> Result<BackpropOutcome, BackpropError> {
        for d in deltas {
            self.apply(d)?;
        }
        self.finish()
    }

    fn apply(&mut self, d: &BDelta) -> Result<(), BackpropError> {
        let model = self.target_model(d)?;
        match &d.addition {
            Addition::AbstractSet(name) => self.add_abstract_set(&model, name),
            Addition::EnumeratedSet(set) => self.add_enumerated_set(&model, set),
            Addition::SetItem { set, item } => self.add_set_item(&model, set, item),
            Addition::Constant(name) => self.declare(&model, name, false),
            Addition::Variable(name) => self.declare(&model, name, true),
            Addition::Property(f) => self.add_formula(&model, false, f),
            Addition::Invariant(f) => self.add_formula(&model, true, f),
            Addition::Initialisation(init) => {
                self.inits.push((model, init.clone()));
                Ok(())
            }
        }
    }

    fn finish(mut self) -> Result<BackpropOutcome, BackpropError> {
        // Declarations no typing formula claimed fall back to defined
        // concepts over the batch formulas that mention them.
        while !self.pending.is_empty() {
            self.promote(0)?;
        }
        let inits = std::mem::take(&mut self.inits);
        for (model, init) in &inits {
            self.apply_init(model, init)?;
        }
        // Everything still stashed becomes a logical formula of its model;
        // only now do all the batch-created names have domain counterparts.
        let stash = std::mem::take(&mut self.stash);
        for s in stash {
            let assertion = rewrite_from_b(&s.formula, &self.symbols)?;
            let is_gluing = s.invariant && self.mentions_ancestor(&s.model, &assertion);
            if s.label.is_none() {
                let shown = assertion.to_string();
                self.log(&s.model, RuleId::Formula, &shown, format!("added formula '{shown}'"));
            }
            let target = self.model_mut(&s.model);
            target.formulas.push(LogicalFormula { label: s.label, is_gluing, assertion });
        }
        let report = validate_chain(&self.chain);
        if !report.is_valid() {
            return Err(BackpropError::Rejected(report));
        }
        Ok(BackpropOutcome { chain: self.chain, symbols: self.symbols, updates: self.updates })
    }

    // Rules 1-3: sets carry their typing themselves.

    fn add_abstract_set(&mut self, model: &str, b: &str) -> Result<(), BackpropError> {
        let name = self.create_name(b)?;
        self.model_mut(model).concepts.push(Concept::plain(&name));
        self.log(model, RuleId::R1, &name, format!("added concept '{name}'"));
        Ok(())
    }

    fn add_enumerated_set(&mut self, model: &str, set: &EnumeratedSet) -> Result<(), BackpropError> {
        for (i, item) in set.items.iter().enumerate() {
            if set.items[..i].contains(item) {
                return Err(BackpropError::Conflict {
                    subject: item.clone(),
                    message: "listed twice in the enumerated set".into(),
                });
            }
        }
        let name = self.create_name(&set.name)?;
        self.model_mut(model)
            .concepts
            .push(Concept { is_enumeration: true, ..Concept::plain(&name) });
        for item in &set.items {
            let item_name = self.create_name(item)?;
            self.model_mut(model).individuals.push(Individual::named(&item_name, &name));
        }
        let n = set.items.len();
        self.log(model, RuleId::R2, &name, format!("added enumeration '{name}' with {n} individuals"));
        Ok(())
    }

    fn add_set_item(&mut self, model: &str, set: &str, item: &str) -> Result<(), BackpropError> {
        let set_name = match self.site(set) {
            Site::Element(d) => d,
            Site::Pending(_) => {
                return Err(BackpropError::Conflict {
                    subject: set.into(),
                    message: "declared in this batch, but not as an enumerated set".into(),
                })
            }
            Site::Unknown => return Err(BackpropError::MissingCorrespondence(set.into())),
        };
        let is_enumeration = self
            .find_concept(&set_name)
            .map(|(_, c)| c.is_enumeration && matches!(c.kind, ConceptKind::Plain));
        if is_enumeration != Some(true) {
            return Err(BackpropError::Conflict {
                subject: set_name,
                message: "is not an enumeration; items can only extend enumerations".into(),
            });
        }
        let item_name = self.create_name(item)?;
        self.model_mut(model).individuals.push(Individual::named(&item_name, &set_name));
        self.log(model, RuleId::R3, &item_name, format!("added individual '{item_name}' to enumeration '{set_name}'"));
        Ok(())
    }

    fn declare(&mut self, model: &str, b: &str, is_variable: bool) -> Result<(), BackpropError> {
        self.check_fresh(b)?;
        let domain_name = self.fresh_domain_name(b);
        self.pending.push(PendingSlot {
            model: model.into(),
            b_name: b.into(),
            domain_name,
            is_variable,
        });
        Ok(())
    }

    // Rules 4-11: a formula types a pending declaration, upgrades a defined
    // concept, or is stashed for the end of the batch.

    fn add_formula(&mut self, model: &str, invariant: bool, f: &Formula) -> Result<(), BackpropError> {
        match classify_typing_pattern(f) {
            TypingPattern::Subset { element, parent } => {
                self.type_subset(model, invariant, f, &element, &parent)
            }
            TypingPattern::Member { element, concept } => {
                self.type_member(model, invariant, f, &element, &concept)
            }
            TypingPattern::Relation { element, domain, range, op } => {
                self.type_relation(model, invariant, f, &element, &domain, &range, op)
            }
            TypingPattern::MapletEq { element, antecedent, image } => {
                self.type_maplet(model, invariant, f, &element, &antecedent, &image)
            }
            TypingPattern::NonTyping => {
                self.stash(model, invariant, f);
                Ok(())
            }
        }
    }

    fn type_subset(
        &mut self,
        model: &str,
        invariant: bool,
        f: &Formula,
        element: &str,
        parent: &str,
    ) -> Result<(), BackpropError> {
        let parent = self.resolve_referenced(parent)?;
        match self.site(element) {
            Site::Pending(i) => {
                let slot = self.take_pending(i, model, invariant, f, element)?;
                let rule = if slot.is_variable { RuleId::R6 } else { RuleId::R4 };
                let concept = Concept {
                    is_variable: slot.is_variable,
                    parent: Some(parent.clone()),
                    ..Concept::plain(&slot.domain_name)
                };
                self.model_mut(&slot.model).concepts.push(concept);
                let name = &slot.domain_name;
                self.log(&slot.model, rule, name, format!("added concept '{name}' refining '{parent}'"));
                Ok(())
            }
            Site::Element(name) => self.upgrade(&name, invariant, f, |slot| Upgrade::Concept {
                parent: Some(parent.clone()),
                kind: ConceptKind::Plain,
                rule: if slot { RuleId::R6 } else { RuleId::R4 },
            }),
            Site::Unknown => {
                self.stash(model, invariant, f);
                Ok(())
            }
        }
    }

    fn type_member(
        &mut self,
        model: &str,
        invariant: bool,
        f: &Formula,
        element: &str,
        concept: &str,
    ) -> Result<(), BackpropError> {
        let of = self.resolve_referenced(concept)?;
        if self.find_concept(&of).is_none() {
            // Membership in an individual types nothing; keep the formula.
            self.stash(model, invariant, f);
            return Ok(());
        }
        match self.site(element) {
            Site::Pending(i) => {
                let slot = self.take_pending(i, model, invariant, f, element)?;
                let rule = if slot.is_variable { RuleId::R7 } else { RuleId::R5 };
                let individual = Individual {
                    is_variable: slot.is_variable,
                    ..Individual::named(&slot.domain_name, &of)
                };
                self.model_mut(&slot.model).individuals.push(individual);
                let name = &slot.domain_name;
                self.log(&slot.model, rule, name, format!("added individual '{name}' of '{of}'"));
                Ok(())
            }
            Site::Element(name) => self.upgrade(&name, invariant, f, |slot| Upgrade::Individual {
                of: of.clone(),
                maplet: None,
                rule: if slot { RuleId::R7 } else { RuleId::R5 },
            }),
            Site::Unknown => {
                self.stash(model, invariant, f);
                Ok(())
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn type_relation(
        &mut self,
        model: &str,
        invariant: bool,
        f: &Formula,
        element: &str,
        domain: &str,
        range: &str,
        op: RelationOp,
    ) -> Result<(), BackpropError> {
        let domain = self.resolve_referenced(domain)?;
        let range = self.resolve_referenced(range)?;
        let (domain_cardinality, range_cardinality) = cardinalities_for_operator(op);
        let spec = AssociationSpec { domain, range, domain_cardinality, range_cardinality };
        match self.site(element) {
            Site::Pending(i) => {
                let slot = self.take_pending(i, model, invariant, f, element)?;
                let rule = if slot.is_variable { RuleId::R9 } else { RuleId::R8 };
                let concept = Concept {
                    is_variable: slot.is_variable,
                    kind: ConceptKind::Association(spec.clone()),
                    ..Concept::plain(&slot.domain_name)
                };
                self.model_mut(&slot.model).concepts.push(concept);
                let name = &slot.domain_name;
                self.log(
                    &slot.model,
                    rule,
                    name,
                    format!("added association '{name}' from '{}' to '{}'", spec.domain, spec.range),
                );
                Ok(())
            }
            Site::Element(name) => self.upgrade(&name, invariant, f, |slot| Upgrade::Concept {
                parent: None,
                kind: ConceptKind::Association(spec.clone()),
                rule: if slot { RuleId::R9 } else { RuleId::R8 },
            }),
            Site::Unknown => {
                self.stash(model, invariant, f);
                Ok(())
            }
        }
    }

    fn type_maplet(
        &mut self,
        model: &str,
        invariant: bool,
        f: &Formula,
        element: &str,
        antecedent: &str,
        image: &str,
    ) -> Result<(), BackpropError> {
        let ant = self.resolve_referenced(antecedent)?;
        let im = self.resolve_referenced(image)?;
        let maplet = MapletSpec {
            antecedent: Some(IndividualRef::Named(ant.clone())),
            image: Some(IndividualRef::Named(im.clone())),
        };
        match self.site(element) {
            Site::Pending(i) => {
                let slot = self.take_pending(i, model, invariant, f, element)?;
                let rule = if slot.is_variable { RuleId::R11 } else { RuleId::R10 };
                let of = self.infer_association(&slot.model, &ant, &im, &slot.domain_name)?;
                let individual = Individual {
                    is_variable: slot.is_variable,
                    maplet: Some(maplet),
                    ..Individual::named(&slot.domain_name, &of)
                };
                self.model_mut(&slot.model).individuals.push(individual);
                let name = &slot.domain_name;
                self.log(&slot.model, rule, name, format!("added maplet individual '{name}' = {ant} |-> {im}"));
                Ok(())
            }
            Site::Element(name) => {
                // An individual of an association that was typed earlier by a
                // membership formula receives its ends here.
                if let Some((holder, ind)) = self.find_individual(&name) {
                    if ind.maplet.is_some() {
                        return Err(BackpropError::Conflict {
                            subject: name,
                            message: "is already a maplet; conflicting ends".into(),
                        });
                    }
                    let holder = holder.to_string();
                    let rule = if ind.is_variable { RuleId::R11 } else { RuleId::R10 };
                    let of = ind.individual_of.clone();
                    let of_is_association =
                        self.find_concept(&of).is_some_and(|(_, c)| c.is_association());
                    if !of_is_association {
                        return Err(BackpropError::Conflict {
                            subject: name,
                            message: format!("is an individual of '{of}', which is not an association"),
                        });
                    }
                    self.individual_mut(&holder, &name).maplet = Some(maplet);
                    self.log(&holder, rule, &name, format!("set maplet '{name}' = {ant} |-> {im}"));
                    return Ok(());
                }
                self.upgrade(&name, invariant, f, |slot| Upgrade::Individual {
                    of: String::new(), // filled in by the maplet inference below
                    maplet: Some(maplet.clone()),
                    rule: if slot { RuleId::R11 } else { RuleId::R10 },
                })
            }
            Site::Unknown => {
                self.stash(model, invariant, f);
                Ok(())
            }
        }
    }

    /// Replace a defined concept by the element a later typing formula gives
    /// it. Anything that already has a real type cannot be re-typed.
    fn upgrade(
        &mut self,
        name: &str,
        invariant: bool,
        f: &Formula,
        build: impl Fn(bool) -> Upgrade,
    ) -> Result<(), BackpropError> {
        let Some((holder, concept)) = self.find_concept(name) else {
            return Err(BackpropError::Conflict {
                subject: name.into(),
                message: "is already typed; conflicting reclassification".into(),
            });
        };
        if !concept.is_defined() {
            return Err(BackpropError::Conflict {
                subject: name.into(),
                message: "is already typed; conflicting reclassification".into(),
            });
        }
        let holder = holder.to_string();
        let is_variable = concept.is_variable;
        if !invariant && is_variable {
            return Err(BackpropError::Conflict {
                subject: name.into(),
                message: "a variable cannot be typed in PROPERTIES".into(),
            });
        }
        if invariant && !is_variable && !self.mentions_variable(f) {
            return Err(BackpropError::Conflict {
                subject: name.into(),
                message: "a constant typed in INVARIANT must involve at least one variable".into(),
            });
        }
        // The defining formulas stay behind as ordinary model formulas;
        // their labels simply stop being referenced.
        match build(is_variable) {
            Upgrade::Concept { parent, kind, rule } => {
                let c = self.concept_mut(&holder, name);
                c.parent = parent;
                c.kind = kind;
                self.log(&holder, rule, name, format!("re-typed defined concept '{name}'"));
            }
            Upgrade::Individual { of, maplet, rule } => {
                let of = if of.is_empty() {
                    let (ant, im) = maplet_ends(maplet.as_ref().expect("maplet upgrades carry ends"));
                    self.infer_association(&holder, &ant, &im, name)?
                } else {
                    of
                };
                let position = self
                    .model_mut(&holder)
                    .concepts
                    .iter()
                    .position(|c| c.name == name)
                    .expect("concept found above");
                self.model_mut(&holder).concepts.remove(position);
                let individual = Individual {
                    is_variable,
                    maplet,
                    ..Individual::named(name, &of)
                };
                self.model_mut(&holder).individuals.push(individual);
                self.log(&holder, rule, name, format!("re-typed defined concept '{name}' as an individual of '{of}'"));
            }
        }
        Ok(())
    }

    // Rule 12 and the benign initialisations.

    fn apply_init(&mut self, model: &str, init: &Initialisation) -> Result<(), BackpropError> {
        let Some(subject) = self.symbols.to_domain(&init.variable).map(str::to_string) else {
            return Err(BackpropError::MissingCorrespondence(init.variable.clone()));
        };
        match &init.expr {
            InitExpr::Becomes(Formula::Name(value)) => {
                let Some(value) = self.symbols.to_domain(value).map(str::to_string) else {
                    return Err(BackpropError::MissingCorrespondence(value.clone()));
                };
                let Some((holder, ind)) = self.find_individual(&subject) else {
                    return Err(BackpropError::Conflict {
                        subject,
                        message: "initialisation targets no individual".into(),
                    });
                };
                if !ind.is_variable {
                    return Err(BackpropError::Conflict {
                        subject,
                        message: "only a variable individual takes an initial value".into(),
                    });
                }
                if ind.initial_value.is_some() {
                    return Err(BackpropError::Conflict {
                        subject,
                        message: "is already initialised".into(),
                    });
                }
                let holder = holder.to_string();
                self.individual_mut(&holder, &subject).initial_value = Some(value.clone());
                self.log(&holder, RuleId::R12, &subject, format!("set initial value of '{subject}' to '{value}'"));
                Ok(())
            }
            InitExpr::Becomes(Formula::SetExtension(items)) if items.is_empty() => {
                let subject_is_variable_concept =
                    self.find_concept(&subject).is_some_and(|(_, c)| c.is_variable);
                if !subject_is_variable_concept {
                    return Err(BackpropError::Conflict {
                        subject,
                        message: "only variable concepts start out empty".into(),
                    });
                }
                self.log(model, RuleId::Skip, &subject, format!("ignored '{subject} := {{}}'; variable concepts start empty"));
                Ok(())
            }
            InitExpr::BecomesIn(Formula::Name(set)) => {
                let of = self.symbols.to_domain(set);
                let matches = self
                    .find_individual(&subject)
                    .is_some_and(|(_, i)| Some(i.individual_of.as_str()) == of);
                if !matches {
                    return Err(BackpropError::Conflict {
                        subject,
                        message: format!("'::' initialisation does not match the individual's concept '{set}'"),
                    });
                }
                self.log(model, RuleId::Skip, &subject, format!("ignored '{subject} :: {set}'; it adds no domain information"));
                Ok(())
            }
            other => {
                let shown = match other {
                    InitExpr::Becomes(f) => format!("{subject} := {f}"),
                    InitExpr::BecomesIn(f) => format!("{subject} :: {f}"),
                };
                Err(BackpropError::Unsupported(format!(
                    "initialisation '{shown}' does not name a constant individual"
                )))
            }
        }
    }

    // Pending window management.

    /// The defined-concept fallback: close a pending declaration over the
    /// batch formulas that mention it. Used both when another typing formula
    /// references the name and when the batch ends.
    fn promote(&mut self, index: usize) -> Result<String, BackpropError> {
        let slot = self.pending.remove(index);
        let mut labels = Vec::new();
        for i in 0..self.stash.len() {
            if self.stash[i].model != slot.model || !self.stash[i].formula.mentions(&slot.b_name) {
                continue;
            }
            let label = match &self.stash[i].label {
                Some(l) => l.clone(),
                None => {
                    let l = self.fresh_label(&slot.model, &slot.domain_name);
                    self.stash[i].label = Some(l.clone());
                    l
                }
            };
            labels.push(label);
        }
        if labels.is_empty() {
            return Err(BackpropError::Untyped(slot.b_name));
        }
        let concept = Concept {
            is_variable: slot.is_variable,
            kind: ConceptKind::Defined(DefinedSpec { defining_formulas: labels }),
            ..Concept::plain(&slot.domain_name)
        };
        self.symbols
            .insert(&slot.domain_name, &slot.b_name)
            .expect("both names were checked fresh at declaration");
        self.model_mut(&slot.model).concepts.push(concept);
        let name = slot.domain_name.clone();
        self.log(&slot.model, RuleId::DefaultDefined, &name, format!("added defined concept '{name}'"));
        Ok(name)
    }

    /// Claim a pending slot for a typing rule: enforce the clause discipline
    /// and bind the reserved domain name.
    fn take_pending(
        &mut self,
        index: usize,
        model: &str,
        invariant: bool,
        f: &Formula,
        b_name: &str,
    ) -> Result<PendingSlot, BackpropError> {
        let slot = &self.pending[index];
        if slot.model != model {
            return Err(BackpropError::Conflict {
                subject: b_name.into(),
                message: format!(
                    "declared in the component of '{}' but typed in the component of '{model}'",
                    slot.model
                ),
            });
        }
        if !invariant && slot.is_variable {
            return Err(BackpropError::Conflict {
                subject: b_name.into(),
                message: "a variable cannot be typed in PROPERTIES".into(),
            });
        }
        if invariant && !slot.is_variable && !self.mentions_variable(f) {
            return Err(BackpropError::Conflict {
                subject: b_name.into(),
                message: "a constant typed in INVARIANT must involve at least one variable".into(),
            });
        }
        let slot = self.pending.remove(index);
        self.symbols
            .insert(&slot.domain_name, &slot.b_name)
            .expect("both names were checked fresh at declaration");
        Ok(slot)
    }

    /// Resolve a B name used (not typed) by a formula. Pending names are
    /// promoted on the spot: the reference proves the declaration is meant
    /// to stand on its own, so it gets its defined-concept form now.
    fn resolve_referenced(&mut self, b: &str) -> Result<String, BackpropError> {
        match self.site(b) {
            Site::Element(d) => Ok(d),
            Site::Pending(i) => self.promote(i),
            Site::Unknown => Err(BackpropError::MissingCorrespondence(b.into())),
        }
    }

    fn site(&self, b: &str) -> Site {
        if let Some(i) = self.pending.iter().position(|p| p.b_name == b) {
            return Site::Pending(i);
        }
        match self.symbols.to_domain(b) {
            Some(d) => Site::Element(d.to_string()),
            None => Site::Unknown,
        }
    }

    /// Check a freshly declared B name and reserve a domain name for it.
    fn create_name(&mut self, b: &str) -> Result<String, BackpropError> {
        self.check_fresh(b)?;
        let name = self.fresh_domain_name(b);
        self.symbols.insert(&name, b).expect("both sides checked fresh");
        Ok(name)
    }

    fn check_fresh(&self, b: &str) -> Result<(), BackpropError> {
        if self.symbols.has_b_name(b) {
            return Err(BackpropError::Conflict {
                subject: b.into(),
                message: "already corresponds to a domain element".into(),
            });
        }
        if self.pending.iter().any(|p| p.b_name == b) {
            return Err(BackpropError::Conflict {
                subject: b.into(),
                message: "declared twice in this batch".into(),
            });
        }
        Ok(())
    }

    /// Domain name for a new element. The B name is used verbatim when it is
    /// free on the domain side; otherwise it gets a numeric suffix (a domain
    /// element of that name must exist under a different B name).
    fn fresh_domain_name(&self, b: &str) -> String {
        mangle(b, &|candidate| {
            self.symbols.to_b(candidate).is_some()
                || self.pending.iter().any(|p| p.domain_name == candidate)
                || self
                    .chain
                    .models()
                    .iter()
                    .any(|m| m.concept(candidate).is_some() || m.individual(candidate).is_some())
        })
    }

    fn fresh_label(&self, model: &str, base: &str) -> String {
        let taken = |label: &str| {
            self.chain
                .model(model)
                .is_some_and(|m| m.formula_by_label(label).is_some())
                || self.stash.iter().any(|s| s.model == model && s.label.as_deref() == Some(label))
        };
        let mut k = 1;
        loop {
            let candidate = format!("{base}_def{k}");
            if !taken(&candidate) {
                return candidate;
            }
            k += 1;
        }
    }

    // Lookups and bookkeeping.

    /// The unique association whose domain and range admit the two ends.
    fn infer_association(
        &self,
        model: &str,
        ant: &str,
        im: &str,
        subject: &str,
    ) -> Result<String, BackpropError> {
        let m = self.chain.model(model).expect("target model exists");
        let end_concept = |end: &str| -> Result<String, BackpropError> {
            match self.chain.find_individual(m, end) {
                Some((_, i)) => Ok(i.individual_of.clone()),
                None => Err(BackpropError::Conflict {
                    subject: subject.into(),
                    message: format!("maplet end '{end}' is not an individual"),
                }),
            }
        };
        let ant_of = end_concept(ant)?;
        let im_of = end_concept(im)?;
        let mut candidates: Vec<String> = Vec::new();
        for scope_model in self.chain.scope(m) {
            for c in &scope_model.concepts {
                if let Some(spec) = c.as_association() {
                    if self.chain.concept_descends_from(m, &ant_of, &spec.domain)
                        && self.chain.concept_descends_from(m, &im_of, &spec.range)
                    {
                        candidates.push(c.name.clone());
                    }
                }
            }
        }
        match candidates.len() {
            1 => Ok(candidates.pop().expect("one candidate")),
            0 => Err(BackpropError::Conflict {
                subject: subject.into(),
                message: format!("no association in scope relates '{ant_of}' to '{im_of}'"),
            }),
            _ => Err(BackpropError::Conflict {
                subject: subject.into(),
                message: format!(
                    "ambiguous maplet: {} all admit '{ant}' |-> '{im}'; add a membership formula first",
                    candidates.join(", ")
                ),
            }),
        }
    }

    fn stash(&mut self, model: &str, invariant: bool, f: &Formula) {
        self.stash.push(Stashed {
            model: model.into(),
            invariant,
            formula: f.clone(),
            label: None,
        });
    }

    fn target_model(&self, d: &BDelta) -> Result<String, BackpropError> {
        match &d.target {
            None => Ok(self.chain.root().name.clone()),
            Some(component) => self
                .components
                .iter()
                .find(|(_, b)| b == component)
                .map(|(m, _)| m.clone())
                .ok_or_else(|| BackpropError::UnknownComponent(component.clone())),
        }
    }

    fn mentions_variable(&self, f: &Formula) -> bool {
        f.free_names().iter().any(|b| {
            self.symbols
                .to_domain(b)
                .is_some_and(|d| self.element_is_variable(d))
        })
    }

    fn element_is_variable(&self, name: &str) -> bool {
        self.chain.models().iter().any(|m| {
            m.concept(name).is_some_and(|c| c.is_variable)
                || m.individual(name).is_some_and(|i| i.is_variable)
        })
    }

    /// True when the (domain-side) formula names an element declared in a
    /// strict ancestor of the model: the mark of a gluing invariant.
    fn mentions_ancestor(&self, model: &str, f: &Formula) -> bool {
        let Some(m) = self.chain.model(model) else { return false };
        let ancestors = self.chain.ancestors(m);
        f.free_names()
            .iter()
            .any(|n| ancestors.iter().any(|a| a.concept(n).is_some() || a.individual(n).is_some()))
    }

    fn find_concept(&self, name: &str) -> Option<(&str, &Concept)> {
        self.chain
            .models()
            .iter()
            .find_map(|m| m.concept(name).map(|c| (m.name.as_str(), c)))
    }

    fn find_individual(&self, name: &str) -> Option<(&str, &Individual)> {
        self.chain
            .models()
            .iter()
            .find_map(|m| m.individual(name).map(|i| (m.name.as_str(), i)))
    }

    fn model_mut(&mut self, name: &str) -> &mut DomainModel {
        self.chain.model_mut(name).expect("target model exists")
    }

    fn concept_mut(&mut self, model: &str, name: &str) -> &mut Concept {
        self.model_mut(model)
            .concepts
            .iter_mut()
            .find(|c| c.name == name)
            .expect("concept was just looked up")
    }

    fn individual_mut(&mut self, model: &str, name: &str) -> &mut Individual {
        self.model_mut(model)
            .individuals
            .iter_mut()
            .find(|i| i.name.as_deref() == Some(name))
            .expect("individual was just looked up")
    }

    fn log(&mut self, model: &str, rule: RuleId, subject: &str, action: String) {
        self.updates.push(DomainUpdate {
            model: model.into(),
            rule,
            subject: subject.into(),
            action,
        });
    }
}

enum Upgrade {
    Concept { parent: Option<String>, kind: ConceptKind, rule: RuleId },
    Individual { of: String, maplet: Option<MapletSpec>, rule: RuleId },
}

fn maplet_ends(maplet: &MapletSpec) -> (String, String) {
    let name = |end: &Option<IndividualRef>| match end {
        Some(IndividualRef::Named(n)) => n.clone(),
        _ => unreachable!("maplet upgrades are built from two names"),
    };
    (name(&maplet.antecedent), name(&maplet.image))
}
