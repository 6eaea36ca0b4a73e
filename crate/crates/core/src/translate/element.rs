//! Translation of single domain elements into B additions.

use super::relation::{derive_relation_kind, residual_formula};
use super::{TranslateError, TranslationContext, Warning};
use crate::bsystem::{Addition, EnumeratedSet, InitExpr, Initialisation};
use crate::domain::{Concept, ConceptKind, Individual, IndividualRef, LogicalFormula};
use crate::formula::{rewrite_to_b, Formula};

/// True when the concept will appear as an enumerated set in the SETS
/// clause (rather than as a constant with a subset property).
pub(super) fn translated_as_enumerated_set(concept: &Concept) -> bool {
    concept.is_enumeration
        && concept.parent.is_none()
        && matches!(concept.kind, ConceptKind::Plain)
}

fn declaration(is_variable: bool, name: &str) -> Addition {
    if is_variable {
        Addition::Variable(name.to_string())
    } else {
        Addition::Constant(name.to_string())
    }
}

fn empty_set_init(variable: &str) -> Addition {
    Addition::Initialisation(Initialisation {
        variable: variable.to_string(),
        expr: InitExpr::Becomes(Formula::SetExtension(vec![])),
    })
}

/// Translate one concept into B declarations.
///
/// An abstract constant plain concept becomes an abstract set; an
/// enumeration becomes an enumerated set whose items arrive with the
/// individuals; a concept with a parent becomes a constant or variable with
/// a subset formula; a defined concept becomes a constant or variable typed
/// by its defining formulas; an association additionally gets its relation
/// typing. Variable concepts start out empty.
pub fn translate_concept(
    concept: &Concept,
    ctx: &TranslationContext,
    warnings: &mut Vec<Warning>,
) -> Result<Vec<Addition>, TranslateError> {
    let o_co = ctx.b(&concept.name)?;
    let mut additions = Vec::new();
    match &concept.kind {
        ConceptKind::Plain if translated_as_enumerated_set(concept) => {
            additions.push(Addition::EnumeratedSet(EnumeratedSet {
                name: o_co,
                items: Vec::new(),
            }));
        }
        ConceptKind::Plain => match &concept.parent {
            // Constant by C8; variable abstract concepts never validate.
            None => additions.push(Addition::AbstractSet(o_co)),
            Some(parent) => {
                additions.push(declaration(concept.is_variable, &o_co));
                additions.push(ctx.place(
                    false,
                    Formula::Subset(
                        Box::new(Formula::name(&concept.name)),
                        Box::new(Formula::name(parent)),
                    ),
                )?);
                if concept.is_variable {
                    additions.push(empty_set_init(&o_co));
                }
            }
        },
        ConceptKind::Association(spec) => {
            let o_dom = ctx.b(&spec.domain)?;
            let o_ran = ctx.b(&spec.range)?;
            let kind = derive_relation_kind(spec.domain_cardinality, spec.range_cardinality);
            additions.push(declaration(concept.is_variable, &o_co));
            additions.push(ctx.place(
                false,
                Formula::Member(
                    Box::new(Formula::name(&concept.name)),
                    Box::new(Formula::RelSet {
                        op: kind.op,
                        domain: Box::new(Formula::name(&spec.domain)),
                        range: Box::new(Formula::name(&spec.range)),
                    }),
                ),
            )?);
            for residual in kind.residuals {
                // Residuals are built directly over B names; they introduce
                // no domain vocabulary of their own.
                let formula = residual_formula(residual, &o_co, &o_dom, &o_ran);
                additions.push(ctx.place_rewritten(
                    ctx.any_variable(&[&concept.name, &spec.domain, &spec.range]),
                    formula,
                ));
            }
            if let Some(parent) = &concept.parent {
                additions.push(ctx.place(
                    false,
                    Formula::Subset(
                        Box::new(Formula::name(&concept.name)),
                        Box::new(Formula::name(parent)),
                    ),
                )?);
            }
            if concept.is_variable {
                additions.push(empty_set_init(&o_co));
            }
        }
        ConceptKind::Defined(spec) => {
            additions.push(declaration(concept.is_variable, &o_co));
            for label in &spec.defining_formulas {
                let lf = ctx
                    .model
                    .formula_by_label(label)
                    .expect("defining formulas resolve in validated models");
                additions.push(translate_formula(lf, ctx)?);
            }
            if concept.is_variable {
                warnings.push(Warning {
                    subject: format!("{}.{}", ctx.model.name, concept.name),
                    message: "variable defined concept gets no initialisation; its value is \
                              constrained by its defining formulas only"
                        .into(),
                });
            }
        }
    }
    Ok(additions)
}

/// Translate one individual into B declarations.
///
/// Individuals of a same-model enumeration become items of the enumerated
/// set. Other named individuals become constants or variables with a
/// membership formula; maplets with two named ends additionally pin the
/// pair, and variables get an initialisation — their initial value when
/// they have one, a nondeterministic choice plus a warning otherwise.
/// Unnamed individuals produce no declarations.
pub fn translate_individual(
    individual: &Individual,
    ctx: &TranslationContext,
    warnings: &mut Vec<Warning>,
) -> Result<Vec<Addition>, TranslateError> {
    let Some(name) = &individual.name else {
        // Validated unnamed individuals are constant both-ended maplets;
        // they exist only to be inlined and declare nothing.
        return Ok(Vec::new());
    };
    let o_i = ctx.b(name)?;
    let o_co = ctx.b(&individual.individual_of)?;
    let (concept_model, concept) = ctx
        .chain
        .find_concept(ctx.model, &individual.individual_of)
        .expect("individual_of resolves in validated models");

    if translated_as_enumerated_set(concept)
        && concept_model.name == ctx.model.name
        && !individual.is_variable
        && individual.maplet.is_none()
    {
        return Ok(vec![Addition::SetItem { set: o_co, item: o_i }]);
    }

    let mut additions = vec![declaration(individual.is_variable, &o_i)];
    additions.push(ctx.place(
        false,
        Formula::Member(
            Box::new(Formula::name(name)),
            Box::new(Formula::name(&individual.individual_of)),
        ),
    )?);

    if let Some(maplet) = &individual.maplet {
        match (&maplet.antecedent, &maplet.image) {
            (Some(IndividualRef::Named(a)), Some(IndividualRef::Named(b))) => {
                additions.push(ctx.place(
                    false,
                    Formula::Equal(
                        Box::new(Formula::name(name)),
                        Box::new(Formula::Maplet(
                            Box::new(Formula::name(a)),
                            Box::new(Formula::name(b)),
                        )),
                    ),
                )?);
            }
            (None, None) => {}
            _ => warnings.push(Warning {
                subject: format!("{}.{name}", ctx.model.name),
                message: "maplet ends are only translated when both are references to named \
                          individuals; the pair is not pinned in B"
                    .into(),
            }),
        }
    }

    if individual.is_variable {
        let init = match &individual.initial_value {
            Some(init) => InitExpr::Becomes(Formula::name(ctx.b(init)?)),
            None => {
                warnings.push(Warning {
                    subject: format!("{}.{name}", ctx.model.name),
                    message: format!(
                        "variable individual has no initial value; initialised with any \
                         element of {o_co}"
                    ),
                });
                InitExpr::BecomesIn(Formula::name(&o_co))
            }
        };
        additions.push(Addition::Initialisation(Initialisation { variable: o_i, expr: init }));
    }
    Ok(additions)
}

/// Translate one logical formula into a PROPERTIES or INVARIANT entry.
///
/// Gluing formulas and formulas mentioning at least one variable element go
/// to INVARIANT; formulas over constants and sets only go to PROPERTIES.
pub fn translate_formula(
    formula: &LogicalFormula,
    ctx: &TranslationContext,
) -> Result<Addition, TranslateError> {
    ctx.place(formula.is_gluing, formula.assertion.clone())
}

impl TranslationContext<'_> {
    pub(super) fn b(&self, domain_name: &str) -> Result<String, TranslateError> {
        match self.symbols.to_b(domain_name) {
            Some(b) => Ok(b.to_string()),
            None => Err(TranslateError::Rewrite(crate::formula::RewriteError {
                name: domain_name.to_string(),
            })),
        }
    }

    fn is_variable_name(&self, name: &str) -> bool {
        if let Some((_, c)) = self.chain.find_concept(self.model, name) {
            return c.is_variable;
        }
        if let Some((_, i)) = self.chain.find_individual(self.model, name) {
            return i.is_variable;
        }
        false
    }

    pub(super) fn any_variable(&self, names: &[&str]) -> bool {
        names.iter().any(|n| self.is_variable_name(n))
    }

    /// Rewrite a domain-side formula and route it to the right clause.
    fn place(&self, gluing: bool, formula: Formula) -> Result<Addition, TranslateError> {
        let invariant =
            gluing || formula.free_names().iter().any(|n| self.is_variable_name(n));
        let rewritten = rewrite_to_b(&formula, self.symbols)?;
        Ok(Self::entry(invariant, rewritten))
    }

    /// Route an already-rewritten formula to the right clause.
    pub(super) fn place_rewritten(&self, invariant: bool, formula: Formula) -> Addition {
        Self::entry(invariant, formula)
    }

    fn entry(invariant: bool, formula: Formula) -> Addition {
        if invariant {
            Addition::Invariant(formula)
        } else {
            Addition::Property(formula)
        }
    }
}
