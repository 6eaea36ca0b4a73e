//! Ordering a collection of models into a refinement chain.

use super::{Concept, DomainModel, Individual};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("no domain models given")]
    Empty,
    #[error("duplicate model name '{0}'")]
    DuplicateModel(String),
    #[error("model '{model}' refines '{parent}', which is not in the collection")]
    MissingParent { model: String, parent: String },
    #[error("no root model: every model refines another one (refinement cycle through '{0}')")]
    Cycle(String),
    #[error("models {} all refine '{parent}'; a refinement chain is linear", children.join(", "))]
    Branching { parent: String, children: Vec<String> },
    #[error("models '{0}' and '{1}' are both roots; a workspace holds one chain")]
    MultipleRoots(String, String),
}

/// A linear sequence of models, root first, each refining its predecessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementChain {
    models: Vec<DomainModel>,
}

impl RefinementChain {
    /// Wrap models that are already in root-first order. Levels and parent
    /// links are taken as given; [`validate_model`](super::validate_model)
    /// will complain about inconsistencies.
    pub fn from_ordered(models: Vec<DomainModel>) -> RefinementChain {
        RefinementChain { models }
    }

    pub fn models(&self) -> &[DomainModel] {
        &self.models
    }

    pub fn models_mut(&mut self) -> &mut Vec<DomainModel> {
        &mut self.models
    }

    pub fn root(&self) -> &DomainModel {
        &self.models[0]
    }

    pub fn model(&self, name: &str) -> Option<&DomainModel> {
        self.models.iter().find(|m| m.name == name)
    }

    pub fn model_mut(&mut self, name: &str) -> Option<&mut DomainModel> {
        self.models.iter_mut().find(|m| m.name == name)
    }

    /// The model itself followed by its ancestors, nearest first. Falls back
    /// to just the model when a parent link dangles.
    pub fn scope<'a>(&'a self, model: &'a DomainModel) -> Vec<&'a DomainModel> {
        let mut out = vec![model];
        let mut current = model;
        while let Some(parent) = current.parent.as_deref() {
            match self.model(parent) {
                // A self-referencing or repeated model would loop; the
                // validator reports it, we just stop walking.
                Some(p) if !out.iter().any(|m| m.name == p.name) => {
                    out.push(p);
                    current = p;
                }
                _ => break,
            }
        }
        out
    }

    /// Strict ancestors of the model, nearest first.
    pub fn ancestors<'a>(&'a self, model: &'a DomainModel) -> Vec<&'a DomainModel> {
        self.scope(model)[1..].to_vec()
    }

    pub fn find_concept<'a>(&'a self, from: &'a DomainModel, name: &str) -> Option<(&'a DomainModel, &'a Concept)> {
        self.scope(from)
            .into_iter()
            .find_map(|m| m.concept(name).map(|c| (m, c)))
    }

    pub fn find_individual<'a>(&'a self, from: &'a DomainModel, name: &str) -> Option<(&'a DomainModel, &'a Individual)> {
        self.scope(from)
            .into_iter()
            .find_map(|m| m.individual(name).map(|i| (m, i)))
    }

    /// True when concept `name` equals `ancestor` or specializes it through
    /// the parent relation, resolving through the scope of `from`.
    pub fn concept_descends_from(&self, from: &DomainModel, name: &str, ancestor: &str) -> bool {
        let mut seen: Vec<String> = Vec::new();
        let mut current = name.to_string();
        loop {
            if current == ancestor {
                return true;
            }
            if seen.contains(&current) {
                return false; // parent cycle; reported elsewhere
            }
            let Some((_, c)) = self.find_concept(from, &current) else {
                return false;
            };
            seen.push(current);
            match &c.parent {
                Some(p) => current = p.clone(),
                None => return false,
            }
        }
    }
}

/// Order a collection of models into a chain by following `refines` links.
/// Levels are assigned by depth: the root gets 0, each refinement one more
/// than its parent.
pub fn resolve_chain(models: Vec<DomainModel>) -> Result<RefinementChain, ChainError> {
    if models.is_empty() {
        return Err(ChainError::Empty);
    }
    for (i, m) in models.iter().enumerate() {
        if models[..i].iter().any(|other| other.name == m.name) {
            return Err(ChainError::DuplicateModel(m.name.clone()));
        }
    }
    for m in &models {
        if let Some(p) = m.parent.as_deref() {
            if !models.iter().any(|other| other.name == p) {
                return Err(ChainError::MissingParent { model: m.name.clone(), parent: p.to_string() });
            }
        }
    }
    let mut roots = models.iter().filter(|m| m.parent.is_none());
    let root = match (roots.next(), roots.next()) {
        (Some(r), None) => r.name.clone(),
        (Some(a), Some(b)) => return Err(ChainError::MultipleRoots(a.name.clone(), b.name.clone())),
        (None, _) => return Err(ChainError::Cycle(models[0].name.clone())),
    };
    // Follow child links from the root; each model must have exactly one
    // refining model for the chain to be linear.
    let mut ordered: Vec<DomainModel> = Vec::with_capacity(models.len());
    let mut remaining: Vec<DomainModel> = models;
    let mut current = root;
    loop {
        let idx = remaining.iter().position(|m| m.name == current).expect("model present");
        let mut model = remaining.swap_remove(idx);
        model.refinement_level = ordered.len() as u32;
        ordered.push(model);
        let mut children = remaining.iter().filter(|m| m.parent.as_deref() == Some(&current));
        match (children.next(), children.next()) {
            (None, _) => break,
            (Some(c), None) => current = c.name.clone(),
            (Some(a), Some(b)) => {
                let mut names = vec![a.name.clone(), b.name.clone()];
                names.extend(
                    children.map(|m| m.name.clone()),
                );
                names.sort();
                return Err(ChainError::Branching { parent: current, children: names });
            }
        }
    }
    if !remaining.is_empty() {
        // Leftover models point at each other in a cycle.
        let mut names: Vec<String> = remaining.iter().map(|m| m.name.clone()).collect();
        names.sort();
        return Err(ChainError::Cycle(names.remove(0)));
    }
    Ok(RefinementChain { models: ordered })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(name: &str, parent: Option<&str>) -> DomainModel {
        DomainModel { parent: parent.map(String::from), ..DomainModel::new(name) }
    }

    #[test]
    fn orders_models_root_first_and_assigns_levels() {
        let chain = resolve_chain(vec![
            model("Saturn_3", Some("Saturn_2")),
            model("Saturn_1", None),
            model("Saturn_4", Some("Saturn_3")),
            model("Saturn_2", Some("Saturn_1")),
        ])
        .unwrap();
        let names: Vec<&str> = chain.models().iter().map(|m| m.name.as_str()).collect();
        assert_eq!(names, ["Saturn_1", "Saturn_2", "Saturn_3", "Saturn_4"]);
        let levels: Vec<u32> = chain.models().iter().map(|m| m.refinement_level).collect();
        assert_eq!(levels, [0, 1, 2, 3]);
    }

    #[test]
    fn single_model_chain() {
        let chain = resolve_chain(vec![model("M", None)]).unwrap();
        assert_eq!(chain.root().name, "M");
    }

    #[test]
    fn rejects_empty_and_duplicates() {
        assert_eq!(resolve_chain(vec![]), Err(ChainError::Empty));
        assert_eq!(
            resolve_chain(vec![model("M", None), model("M", None)]),
            Err(ChainError::DuplicateModel("M".into()))
        );
    }

    #[test]
    fn rejects_missing_parent() {
        assert_eq!(
            resolve_chain(vec![model("B", Some("A"))]),
            Err(ChainError::MissingParent { model: "B".into(), parent: "A".into() })
        );
    }

    #[test]
    fn rejects_cycles() {
        let err = resolve_chain(vec![model("A", Some("B")), model("B", Some("A"))]).unwrap_err();
        assert!(matches!(err, ChainError::Cycle(_)));
        // A detached cycle next to a valid root is also a cycle.
        let err = resolve_chain(vec![
            model("R", None),
            model("A", Some("B")),
            model("B", Some("A")),
        ])
        .unwrap_err();
        assert_eq!(err, ChainError::Cycle("A".into()));
    }

    #[test]
    fn rejects_branching_and_multiple_roots() {
        let err = resolve_chain(vec![
            model("R", None),
            model("L", Some("R")),
            model("Q", Some("R")),
        ])
        .unwrap_err();
        assert_eq!(
            err,
            ChainError::Branching { parent: "R".into(), children: vec!["L".into(), "Q".into()] }
        );
        let err = resolve_chain(vec![model("A", None), model("B", None)]).unwrap_err();
        assert_eq!(err, ChainError::MultipleRoots("A".into(), "B".into()));
    }

    #[test]
    fn scope_walks_ancestors_nearest_first() {
        let chain = resolve_chain(vec![
            model("A", None),
            model("B", Some("A")),
            model("C", Some("B")),
        ])
        .unwrap();
        let c = chain.model("C").unwrap();
        let names: Vec<&str> = chain.scope(c).iter().map(|m| m.name.as_str()).collect();
        assert_eq!(names, ["C", "B", "A"]);
    }
}
