//! Seeded generation of valid domain artifacts.
//!
//! The test suites need corpora that no hand-written fixture set covers:
//! hundreds of valid refinement chains for translation round trips, and
//! formulas exercising every AST shape for parser/printer round trips. The
//! [`Generator`] produces both, driven entirely by one `u64` seed through a
//! [`StdRng`], so any failing case can be replayed from its seed.
//!
//! Generated chains stay inside the fragment that survives a full round
//! trip through the B side. That adds a few restrictions beyond plain
//! validity:
//!
//! * association cardinalities come from the eight operator-expressible
//!   pairs, and associations have no parent;
//! * maplet individuals either carry two named ends or none (and in the
//!   latter case record no maplet spec at all);
//! * defining formulas mention their concept and nothing else that is a
//!   defined concept of the same model;
//! * formulas placed in INVARIANT mention ancestor-model elements exactly
//!   when they are gluing.

use crate::domain::{
    resolve_chain, AssociationSpec, Concept, ConceptKind, DefinedSpec, DomainModel, Individual,
    IndividualRef, LogicalFormula, MapletSpec, RefinementChain,
};
use crate::formula::{CompareOp, Formula, Quantifier, RelationOp};
use crate::translate::{cardinalities_for_operator, OPERATOR_FLAGS};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// A reproducible source of valid chains and well-formed formulas.
pub struct Generator {
    rng: StdRng,
    counter: u32,
}

/// What the generator remembers about a declared concept.
#[derive(Clone)]
struct ConceptInfo {
    name: String,
    variable: bool,
    defined: bool,
    /// `(domain, range)` when the concept is an association.
    ends: Option<(String, String)>,
    level: usize,
}

#[derive(Clone)]
struct IndividualInfo {
    name: String,
    of: String,
    variable: bool,
    level: usize,
}

/// Everything declared so far, across all models of the chain being built.
#[derive(Default)]
struct Scope {
    concepts: Vec<ConceptInfo>,
    individuals: Vec<IndividualInfo>,
}

impl Scope {
    /// Concepts that can serve as a parent or as an association end:
    /// plain or enumerated, never defined, never an association.
    fn set_like(&self) -> Vec<ConceptInfo> {
        self.concepts
            .iter()
            .filter(|c| !c.defined && c.ends.is_none())
            .cloned()
            .collect()
    }

    fn associations(&self) -> Vec<ConceptInfo> {
        self.concepts.iter().filter(|c| c.ends.is_some()).cloned().collect()
    }

    /// Names a formula of `level` may mention: everything except defined
    /// concepts of the same model, which would capture the formula as a
    /// defining formula on the way back from B.
    fn mentionable(&self, level: usize) -> Vec<(String, bool, usize)> {
        let concepts = self
            .concepts
            .iter()
            .filter(|c| !(c.defined && c.level == level))
            .map(|c| (c.name.clone(), c.variable, c.level));
        let individuals =
            self.individuals.iter().map(|i| (i.name.clone(), i.variable, i.level));
        concepts.chain(individuals).collect()
    }
}

impl Generator {
    pub fn new(seed: u64) -> Generator {
        Generator { rng: StdRng::seed_from_u64(seed), counter: 0 }
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn pick<T: Clone>(&mut self, xs: &[T]) -> Option<T> {
        xs.choose(&mut self.rng).cloned()
    }

    /// A valid refinement chain of one to four models.
    pub fn chain(&mut self) -> RefinementChain {
        let depth = self.rng.gen_range(1..=4);
        let mut scope = Scope::default();
        let mut models: Vec<DomainModel> = Vec::new();
        for level in 0..depth {
            let mut model = DomainModel::new(self.fresh("M"));
            model.parent = models.last().map(|m| m.name.clone());
            self.fill(&mut model, &mut scope, level);
            models.push(model);
        }
        resolve_chain(models).expect("generated chains are linear and rooted")
    }

    fn fill(&mut self, model: &mut DomainModel, scope: &mut Scope, level: usize) {
        // Abstract constant concepts; every model gets at least one so the
        // formula generators always have vocabulary.
        for _ in 0..self.rng.gen_range(1..=2) {
            let name = self.fresh("CO");
            model.concepts.push(Concept::plain(&name));
            scope.concepts.push(ConceptInfo {
                name,
                variable: false,
                defined: false,
                ends: None,
                level,
            });
        }

        if self.chance(0.5) {
            self.enumeration(model, scope, level);
        }
        for _ in 0..self.rng.gen_range(0..=2) {
            self.subconcept(model, scope, level);
        }
        for _ in 0..self.rng.gen_range(0..=2) {
            self.association(model, scope, level);
        }
        if self.chance(0.5) {
            self.defined_concept(model, scope, level);
        }
        for _ in 0..self.rng.gen_range(1..=3) {
            self.individual(model, scope, level);
        }
        for _ in 0..self.rng.gen_range(0..=2) {
            self.maplet(model, scope, level);
        }
        for _ in 0..self.rng.gen_range(0..=2) {
            let f = self.standalone_formula(scope, level);
            model.formulas.push(f);
        }
        if level > 0 {
            for _ in 0..self.rng.gen_range(0..=2) {
                let f = self.gluing_formula(scope, level);
                model.formulas.push(f);
            }
        }
    }

    fn enumeration(&mut self, model: &mut DomainModel, scope: &mut Scope, level: usize) {
        let name = self.fresh("EN");
        model.concepts.push(Concept { is_enumeration: true, ..Concept::plain(&name) });
        for _ in 0..self.rng.gen_range(1..=3) {
            let item = self.fresh("e");
            model.individuals.push(Individual::named(&item, &name));
            scope.individuals.push(IndividualInfo {
                name: item,
                of: name.clone(),
                variable: false,
                level,
            });
        }
        scope.concepts.push(ConceptInfo { name, variable: false, defined: false, ends: None, level });
    }

    fn subconcept(&mut self, model: &mut DomainModel, scope: &mut Scope, level: usize) {
        let Some(parent) = self.pick(&scope.set_like()) else { return };
        // Only concepts with a parent may be variable.
        let variable = self.chance(0.4);
        let name = self.fresh("SUB");
        model.concepts.push(Concept {
            is_variable: variable,
            parent: Some(parent.name),
            ..Concept::plain(&name)
        });
        scope.concepts.push(ConceptInfo { name, variable, defined: false, ends: None, level });
    }

    fn association(&mut self, model: &mut DomainModel, scope: &mut Scope, level: usize) {
        let ends = scope.set_like();
        let (Some(domain), Some(range)) = (self.pick(&ends), self.pick(&ends)) else { return };
        // A constant association may only relate constant concepts.
        let variable = domain.variable || range.variable || self.chance(0.4);
        let (op, _) = self.pick(&OPERATOR_FLAGS).expect("operator table is nonempty");
        let (domain_cardinality, range_cardinality) = cardinalities_for_operator(op);
        let name = self.fresh("AS");
        model.concepts.push(Concept {
            is_variable: variable,
            kind: ConceptKind::Association(AssociationSpec {
                domain: domain.name.clone(),
                range: range.name.clone(),
                domain_cardinality,
                range_cardinality,
            }),
            ..Concept::plain(&name)
        });
        scope.concepts.push(ConceptInfo {
            name,
            variable,
            defined: false,
            ends: Some((domain.name, range.name)),
            level,
        });
    }

    fn defined_concept(&mut self, model: &mut DomainModel, scope: &mut Scope, level: usize) {
        let name = self.fresh("DF");
        let variable = self.chance(0.3);
        let mut labels = Vec::new();
        for _ in 0..self.rng.gen_range(1..=2) {
            let label = self.fresh("def");
            let body = self.defining_body(&name, variable, scope, level);
            model.formulas.push(LogicalFormula {
                label: Some(label.clone()),
                is_gluing: false,
                assertion: body,
            });
            labels.push(label);
        }
        model.concepts.push(Concept {
            is_variable: variable,
            kind: ConceptKind::Defined(DefinedSpec { defining_formulas: labels }),
            ..Concept::plain(&name)
        });
        scope.concepts.push(ConceptInfo { name, variable, defined: true, ends: None, level });
    }

    /// A non-typing formula that mentions `subject`. When the subject is
    /// variable the formula will sit in INVARIANT, so it must not mention
    /// ancestor-model elements (that is the mark of a gluing invariant).
    fn defining_body(
        &mut self,
        subject: &str,
        subject_variable: bool,
        scope: &Scope,
        level: usize,
    ) -> Formula {
        let others: Vec<ConceptInfo> = scope
            .set_like()
            .into_iter()
            .filter(|c| !c.variable && (!subject_variable || c.level == level))
            .collect();
        let card_of_subject = Formula::Apply {
            func: Box::new(Formula::name("card")),
            args: vec![Formula::name(subject)],
        };
        match self.pick(&others) {
            Some(other) if self.chance(0.6) => Formula::Equal(
                Box::new(Formula::name(subject)),
                Box::new(Formula::RelSet {
                    op: RelationOp::TotalFunction,
                    domain: Box::new(Formula::name(other.name)),
                    range: Box::new(Formula::name("BOOL")),
                }),
            ),
            _ => Formula::Compare {
                op: CompareOp::Ge,
                lhs: Box::new(card_of_subject),
                rhs: Box::new(Formula::Int(self.rng.gen_range(0..=3))),
            },
        }
    }

    fn individual(&mut self, model: &mut DomainModel, scope: &mut Scope, level: usize) {
        let Some(of) = self.pick(&scope.concepts) else { return };
        let variable = self.chance(0.4);
        let name = self.fresh(if variable { "v" } else { "i" });
        let initial_value = if variable && self.chance(0.5) {
            let constants: Vec<String> = scope
                .individuals
                .iter()
                .filter(|i| !i.variable && i.of == of.name)
                .map(|i| i.name.clone())
                .collect();
            self.pick(&constants)
        } else {
            None
        };
        model.individuals.push(Individual {
            is_variable: variable,
            initial_value,
            ..Individual::named(&name, &of.name)
        });
        scope.individuals.push(IndividualInfo { name, of: of.name, variable, level });
    }

    fn maplet(&mut self, model: &mut DomainModel, scope: &mut Scope, level: usize) {
        let Some(assoc) = self.pick(&scope.associations()) else { return };
        let (domain, range) = assoc.ends.clone().expect("associations carry ends");
        let variable = self.chance(0.5);
        // A constant maplet must have constant ends.
        let antecedent = self.end_individual(model, scope, level, &domain, !variable);
        let image = self.end_individual(model, scope, level, &range, !variable);
        let name = self.fresh("m");
        let initial_value = if variable && self.chance(0.4) {
            let constants: Vec<String> = scope
                .individuals
                .iter()
                .filter(|i| !i.variable && i.of == assoc.name)
                .map(|i| i.name.clone())
                .collect();
            self.pick(&constants)
        } else {
            None
        };
        model.individuals.push(Individual {
            name: Some(name.clone()),
            is_variable: variable,
            individual_of: assoc.name.clone(),
            initial_value,
            maplet: Some(MapletSpec {
                antecedent: Some(IndividualRef::Named(antecedent)),
                image: Some(IndividualRef::Named(image)),
            }),
        });
        scope.individuals.push(IndividualInfo { name, of: assoc.name, variable, level });
    }

    /// An individual usable as a maplet end for `concept`: an existing one
    /// when available, a fresh constant one otherwise.
    fn end_individual(
        &mut self,
        model: &mut DomainModel,
        scope: &mut Scope,
        level: usize,
        concept: &str,
        must_be_constant: bool,
    ) -> String {
        let existing: Vec<String> = scope
            .individuals
            .iter()
            .filter(|i| i.of == concept && !(must_be_constant && i.variable))
            .map(|i| i.name.clone())
            .collect();
        if let Some(name) = self.pick(&existing) {
            if self.chance(0.6) {
                return name;
            }
        }
        let name = self.fresh("n");
        model.individuals.push(Individual::named(&name, concept));
        scope.individuals.push(IndividualInfo {
            name: name.clone(),
            of: concept.into(),
            variable: false,
            level,
        });
        name
    }

    /// A plain (non-gluing, non-defining) formula. It either mentions only
    /// constants — then it may reach across models — or mentions a variable
    /// and stays within its own model, since a non-gluing formula that ends
    /// up in INVARIANT must not look like a gluing invariant.
    fn standalone_formula(&mut self, scope: &Scope, level: usize) -> LogicalFormula {
        let pool = scope.mentionable(level);
        let local_variables: Vec<&(String, bool, usize)> =
            pool.iter().filter(|(_, variable, l)| *variable && *l == level).collect();

        let assertion = if !local_variables.is_empty() && self.chance(0.5) {
            let (subject, _, _) = self.pick(&local_variables).expect("nonempty").clone();
            let locals: Vec<String> = pool
                .iter()
                .filter(|(_, _, l)| *l == level)
                .map(|(n, _, _)| n.clone())
                .collect();
            let other = self.pick(&locals).expect("the subject itself is local");
            self.constraint_shape(&subject, &other)
        } else {
            let constants: Vec<String> = pool
                .iter()
                .filter(|(_, variable, _)| !variable)
                .map(|(n, _, _)| n.clone())
                .collect();
            match self.pick(&constants) {
                Some(a) => {
                    let b = self.pick(&constants).expect("nonempty");
                    self.constraint_shape(&a, &b)
                }
                // A model whose scope is all-variable still gets a formula.
                None => Formula::Compare {
                    op: CompareOp::Ge,
                    lhs: Box::new(Formula::Int(1)),
                    rhs: Box::new(Formula::Int(0)),
                },
            }
        };
        LogicalFormula { label: None, is_gluing: false, assertion }
    }

    /// Non-typing constraint shapes over two element names.
    fn constraint_shape(&mut self, a: &str, b: &str) -> Formula {
        let card = |n: &str| Formula::Apply {
            func: Box::new(Formula::name("card")),
            args: vec![Formula::name(n)],
        };
        match self.rng.gen_range(0..3) {
            0 => Formula::Compare {
                op: if self.chance(0.5) { CompareOp::Le } else { CompareOp::Ge },
                lhs: Box::new(card(a)),
                rhs: Box::new(Formula::Int(self.rng.gen_range(0..=5))),
            },
            1 => Formula::Compare {
                op: CompareOp::Le,
                lhs: Box::new(card(a)),
                rhs: Box::new(card(b)),
            },
            _ => {
                let var = self.fresh("q");
                Formula::Quantified {
                    q: Quantifier::Forall,
                    vars: vec![var.clone()],
                    body: Box::new(Formula::Implies(
                        Box::new(Formula::Member(
                            Box::new(Formula::name(&var)),
                            Box::new(Formula::name(a)),
                        )),
                        Box::new(Formula::Member(
                            Box::new(Formula::name(var)),
                            Box::new(Formula::name(b)),
                        )),
                    )),
                }
            }
        }
    }

    /// A gluing formula: an equation between a local element and an element
    /// of an ancestor model.
    fn gluing_formula(&mut self, scope: &Scope, level: usize) -> LogicalFormula {
        let pool = scope.mentionable(level);
        let locals: Vec<String> =
            pool.iter().filter(|(_, _, l)| *l == level).map(|(n, _, _)| n.clone()).collect();
        let ancestors: Vec<String> =
            pool.iter().filter(|(_, _, l)| *l < level).map(|(n, _, _)| n.clone()).collect();
        let local = self.pick(&locals).expect("every model declares a concept");
        let ancestor = self.pick(&ancestors).expect("every model declares a concept");
        let assertion = Formula::Equal(
            Box::new(Formula::name(local)),
            Box::new(Formula::name(ancestor)),
        );
        let label = if self.chance(0.3) { Some(self.fresh("g")) } else { None };
        LogicalFormula { label, is_gluing: true, assertion }
    }

    /// A well-formed formula exercising the whole AST. Unlike [`chain`],
    /// nothing constrains the vocabulary: the output is for parser/printer
    /// and rewriting round trips.
    ///
    /// [`chain`]: Generator::chain
    pub fn formula(&mut self) -> Formula {
        let depth = self.rng.gen_range(1..=3);
        self.predicate(depth)
    }

    fn predicate(&mut self, depth: u32) -> Formula {
        if depth == 0 {
            return self.atom_predicate(0);
        }
        match self.rng.gen_range(0..6) {
            0 => Formula::And(
                Box::new(self.predicate(depth - 1)),
                Box::new(self.predicate(depth - 1)),
            ),
            1 => Formula::Implies(
                Box::new(self.predicate(depth - 1)),
                Box::new(self.predicate(depth - 1)),
            ),
            2 => {
                let vars = self.bound_vars();
                Formula::Quantified {
                    q: if self.chance(0.5) { Quantifier::Forall } else { Quantifier::Exists },
                    vars,
                    body: Box::new(self.predicate(depth - 1)),
                }
            }
            _ => self.atom_predicate(depth),
        }
    }

    fn atom_predicate(&mut self, depth: u32) -> Formula {
        let lhs = Box::new(self.expression(depth));
        let rhs = Box::new(self.expression(depth));
        match self.rng.gen_range(0..5) {
            0 => Formula::Equal(lhs, rhs),
            1 => Formula::Member(lhs, rhs),
            2 => Formula::Subset(lhs, rhs),
            3 => Formula::Compare {
                op: self
                    .pick(&[CompareOp::Lt, CompareOp::Gt, CompareOp::Le, CompareOp::Ge])
                    .expect("nonempty"),
                lhs,
                rhs,
            },
            _ => Formula::Bool(self.chance(0.5)),
        }
    }

    fn expression(&mut self, depth: u32) -> Formula {
        if depth == 0 {
            return if self.chance(0.7) {
                Formula::Name(self.leaf_name())
            } else {
                Formula::Int(self.rng.gen_range(0..=9))
            };
        }
        let sub = |gen: &mut Self| Box::new(gen.expression(depth - 1));
        match self.rng.gen_range(0..12) {
            0 => Formula::Apply {
                func: Box::new(Formula::Name(self.function_name())),
                args: (0..self.rng.gen_range(1..=2)).map(|_| self.expression(depth - 1)).collect(),
            },
            1 => Formula::Image {
                rel: Box::new(if self.chance(0.5) {
                    Formula::Name(self.leaf_name())
                } else {
                    Formula::Inverse(Box::new(Formula::Name(self.leaf_name())))
                }),
                arg: sub(self),
            },
            2 => Formula::Maplet(sub(self), sub(self)),
            3 => Formula::RelSet {
                op: self.pick(&RelationOp::ALL).expect("nonempty"),
                domain: sub(self),
                range: sub(self),
            },
            4 => Formula::Compose(sub(self), sub(self)),
            5 => Formula::Inverse(Box::new(Formula::Name(self.leaf_name()))),
            6 => Formula::Product(sub(self), sub(self)),
            7 => Formula::Sum(sub(self), sub(self)),
            8 => Formula::Diff(sub(self), sub(self)),
            9 => Formula::SetExtension(
                (0..self.rng.gen_range(0..=2)).map(|_| self.expression(depth - 1)).collect(),
            ),
            10 => Formula::Comprehension {
                vars: self.bound_vars(),
                pred: Box::new(self.atom_predicate(depth - 1)),
            },
            _ => self.expression(0),
        }
    }

    fn bound_vars(&mut self) -> Vec<String> {
        (0..self.rng.gen_range(1..=2)).map(|_| self.fresh("x")).collect()
    }

    fn leaf_name(&mut self) -> String {
        self.pick(&["a", "b", "c", "S", "T", "FB", "in_l", "out"])
            .expect("nonempty")
            .to_string()
    }

    fn function_name(&mut self) -> String {
        self.pick(&["card", "dom", "ran", "f", "vec_to_in"]).expect("nonempty").to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::validate_chain;
    use crate::formula::parse_formula;
    use crate::translate::translate_chain;

    #[test]
    fn chains_are_valid_for_many_seeds() {
        for seed in 0..120 {
            let chain = Generator::new(seed).chain();
            let report = validate_chain(&chain);
            assert!(report.is_valid(), "seed {seed}:\n{report}");
        }
    }

    #[test]
    fn chains_are_reproducible() {
        let a = Generator::new(7).chain();
        let b = Generator::new(7).chain();
        assert_eq!(a, b);
    }

    #[test]
    fn successive_chains_from_one_generator_differ() {
        let mut gen = Generator::new(7);
        assert_ne!(gen.chain(), gen.chain());
    }

    #[test]
    fn the_corpus_covers_every_element_kind() {
        let mut enumeration = false;
        let mut association = false;
        let mut defined = false;
        let mut subconcept = false;
        let mut maplet = false;
        let mut initialised = false;
        let mut variable_individual = false;
        let mut gluing = false;
        let mut standalone = false;
        let mut deep = false;
        for seed in 0..150 {
            let chain = Generator::new(seed).chain();
            deep |= chain.models().len() >= 3;
            for m in chain.models() {
                for c in &m.concepts {
                    enumeration |= c.is_enumeration;
                    association |= c.is_association();
                    defined |= c.is_defined();
                    subconcept |= c.parent.is_some();
                }
                for i in &m.individuals {
                    maplet |= i.maplet.is_some();
                    initialised |= i.initial_value.is_some();
                    variable_individual |= i.is_variable;
                }
                for f in &m.formulas {
                    gluing |= f.is_gluing;
                    standalone |= f.label.is_none() && !f.is_gluing;
                }
            }
        }
        assert!(
            enumeration
                && association
                && defined
                && subconcept
                && maplet
                && initialised
                && variable_individual
                && gluing
                && standalone
                && deep,
            "coverage: enumeration={enumeration} association={association} defined={defined} \
             subconcept={subconcept} maplet={maplet} initialised={initialised} \
             variable_individual={variable_individual} gluing={gluing} standalone={standalone} \
             deep={deep}"
        );
    }

    #[test]
    fn generated_chains_translate_cleanly() {
        for seed in 0..40 {
            let chain = Generator::new(seed).chain();
            if let Err(e) = translate_chain(&chain) {
                panic!("seed {seed}: {e}");
            }
        }
    }

    #[test]
    fn formulas_print_and_parse_back() {
        let mut gen = Generator::new(99);
        for i in 0..300 {
            let f = gen.formula();
            let text = f.to_string();
            match parse_formula(&text) {
                Ok(parsed) => assert_eq!(parsed, f, "case {i}: reparse of '{text}' changed"),
                Err(e) => panic!("case {i}: '{text}' does not parse back: {e}"),
            }
        }
    }

    #[test]
    fn formulas_are_reproducible() {
        let mut a = Generator::new(3);
        let mut b = Generator::new(3);
        for _ in 0..20 {
            assert_eq!(a.formula(), b.formula());
        }
    }
}
