//! Name correspondence between domain models and B components.
//!
//! A [`SymbolMap`] is a bijection between domain-side names and B-side
//! names. Moving a formula across the boundary replaces every free name
//! through the map and touches nothing else, so the operator structure of
//! the formula is preserved exactly. Builtin names (`BOOL`, `dom`, ...) pass
//! through unmapped unless the map deliberately shadows them.

use super::{is_builtin, Formula};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolMapError {
    #[error("domain name '{0}' is already mapped")]
    DomainNameTaken(String),
    #[error("B name '{0}' is already in use")]
    BNameTaken(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no correspondence for name '{name}'")]
pub struct RewriteError {
    pub name: String,
}

/// Bijective name correspondence. Insertion order does not matter; lookups
/// and iteration are deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolMap {
    to_b: BTreeMap<String, String>,
    to_domain: BTreeMap<String, String>,
}

impl SymbolMap {
    pub fn new() -> SymbolMap {
        SymbolMap::default()
    }

    /// Identity correspondence over the given names.
    pub fn identity<I, S>(names: I) -> SymbolMap
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut m = SymbolMap::new();
        for n in names {
            let n = n.into();
            // Identity pairs cannot collide unless the name repeats, in
            // which case the pair is already present.
            let _ = m.insert(n.clone(), n);
        }
        m
    }

    pub fn insert(&mut self, domain: impl Into<String>, b: impl Into<String>) -> Result<(), SymbolMapError> {
        let domain = domain.into();
        let b = b.into();
        if self.to_b.get(&domain) == Some(&b) {
            return Ok(());
        }
        if self.to_b.contains_key(&domain) {
            return Err(SymbolMapError::DomainNameTaken(domain));
        }
        if self.to_domain.contains_key(&b) {
            return Err(SymbolMapError::BNameTaken(b));
        }
        self.to_b.insert(domain.clone(), b.clone());
        self.to_domain.insert(b, domain);
        Ok(())
    }

    pub fn to_b(&self, domain: &str) -> Option<&str> {
        self.to_b.get(domain).map(String::as_str)
    }

    pub fn to_domain(&self, b: &str) -> Option<&str> {
        self.to_domain.get(b).map(String::as_str)
    }

    pub fn has_b_name(&self, b: &str) -> bool {
        self.to_domain.contains_key(b)
    }

    pub fn len(&self) -> usize {
        self.to_b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_b.is_empty()
    }

    /// Pairs in ascending order of the domain name.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.to_b.iter().map(|(d, b)| (d.as_str(), b.as_str()))
    }
}

/// Replace every free domain name by its B name. Names the map does not
/// cover are an error unless they are builtins, which pass through.
pub fn rewrite_to_b(f: &Formula, map: &SymbolMap) -> Result<Formula, RewriteError> {
    rewrite(f, &mut |name| {
        if let Some(b) = map.to_b(name) {
            Ok(b.to_string())
        } else if is_builtin(name) {
            Ok(name.to_string())
        } else {
            Err(RewriteError { name: name.to_string() })
        }
    })
}

/// Inverse of [`rewrite_to_b`] over the same map.
pub fn rewrite_from_b(f: &Formula, map: &SymbolMap) -> Result<Formula, RewriteError> {
    rewrite(f, &mut |name| {
        if let Some(d) = map.to_domain(name) {
            Ok(d.to_string())
        } else if is_builtin(name) {
            Ok(name.to_string())
        } else {
            Err(RewriteError { name: name.to_string() })
        }
    })
}

/// Quantifier and comprehension variables are local: they are never looked
/// up, and shadowed occurrences of mapped names stay untouched.
fn rewrite(
    f: &Formula,
    lookup: &mut impl FnMut(&str) -> Result<String, RewriteError>,
) -> Result<Formula, RewriteError> {
    fn go(
        f: &Formula,
        bound: &mut Vec<String>,
        lookup: &mut impl FnMut(&str) -> Result<String, RewriteError>,
    ) -> Result<Formula, RewriteError> {
        Ok(match f {
            Formula::Name(n) => {
                if bound.iter().any(|b| b == n) {
                    Formula::Name(n.clone())
                } else {
                    Formula::Name(lookup(n)?)
                }
            }
            Formula::Int(_) | Formula::Bool(_) => f.clone(),
            Formula::Apply { func, args } => Formula::Apply {
                func: Box::new(go(func, bound, lookup)?),
                args: args.iter().map(|a| go(a, bound, lookup)).collect::<Result<_, _>>()?,
            },
            Formula::Image { rel, arg } => Formula::Image {
                rel: Box::new(go(rel, bound, lookup)?),
                arg: Box::new(go(arg, bound, lookup)?),
            },
            Formula::Maplet(a, b) => {
                Formula::Maplet(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Equal(a, b) => {
                Formula::Equal(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Member(a, b) => {
                Formula::Member(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Subset(a, b) => {
                Formula::Subset(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::RelSet { op, domain, range } => Formula::RelSet {
                op: *op,
                domain: Box::new(go(domain, bound, lookup)?),
                range: Box::new(go(range, bound, lookup)?),
            },
            Formula::Compose(a, b) => {
                Formula::Compose(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Inverse(a) => Formula::Inverse(Box::new(go(a, bound, lookup)?)),
            Formula::Product(a, b) => {
                Formula::Product(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Sum(a, b) => {
                Formula::Sum(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Diff(a, b) => {
                Formula::Diff(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Compare { op, lhs, rhs } => Formula::Compare {
                op: *op,
                lhs: Box::new(go(lhs, bound, lookup)?),
                rhs: Box::new(go(rhs, bound, lookup)?),
            },
            Formula::And(a, b) => {
                Formula::And(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(go(a, bound, lookup)?), Box::new(go(b, bound, lookup)?))
            }
            Formula::Quantified { q, vars, body } => {
                let depth = bound.len();
                bound.extend(vars.iter().cloned());
                let body = go(body, bound, lookup)?;
                bound.truncate(depth);
                Formula::Quantified { q: *q, vars: vars.clone(), body: Box::new(body) }
            }
            Formula::SetExtension(items) => Formula::SetExtension(
                items.iter().map(|i| go(i, bound, lookup)).collect::<Result<_, _>>()?,
            ),
            Formula::Comprehension { vars, pred } => {
                let depth = bound.len();
                bound.extend(vars.iter().cloned());
                let pred = go(pred, bound, lookup)?;
                bound.truncate(depth);
                Formula::Comprehension { vars: vars.clone(), pred: Box::new(pred) }
            }
        })
    }
    go(f, &mut Vec::new(), lookup)
}
