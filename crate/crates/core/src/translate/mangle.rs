//! Deterministic mapping of domain names onto B identifiers.

use crate::formula::is_builtin;

/// Keywords of the B clause syntax plus the names the formula language
/// treats as built in. None of these may name a translated element.
const B_KEYWORDS: [&str; 24] = [
    "SYSTEM",
    "MACHINE",
    "REFINEMENT",
    "REFINES",
    "SETS",
    "CONSTANTS",
    "ABSTRACT_CONSTANTS",
    "CONCRETE_CONSTANTS",
    "PROPERTIES",
    "VARIABLES",
    "ABSTRACT_VARIABLES",
    "CONCRETE_VARIABLES",
    "INVARIANT",
    "INITIALISATION",
    "OPERATIONS",
    "ASSERTIONS",
    "DEFINITIONS",
    "END",
    "BEGIN",
    "PRE",
    "THEN",
    "ANY",
    "WHERE",
    "SELECT",
];

pub fn is_reserved_b_name(name: &str) -> bool {
    B_KEYWORDS.contains(&name) || is_builtin(name) || name == "TRUE" || name == "FALSE"
}

/// Map a domain name onto a free B identifier.
///
/// Names that already are valid identifiers pass through unchanged when
/// free; otherwise characters outside `[A-Za-z0-9_]` become `_`, a leading
/// non-letter gains an `x` prefix, and reserved or taken candidates get the
/// smallest numeric suffix that frees them. The result only depends on the
/// name and on which identifiers `taken` rejects, so a fixed insertion
/// order gives a fixed outcome.
pub fn mangle(name: &str, taken: &dyn Fn(&str) -> bool) -> String {
    let mut base: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if !base.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
        base.insert(0, 'x');
    }
    if !is_reserved_b_name(&base) && !taken(&base) {
        return base;
    }
    let mut k = 1usize;
    loop {
        let candidate = format!("{base}_{k}");
        if !is_reserved_b_name(&candidate) && !taken(&candidate) {
            return candidate;
        }
        k += 1;
    }
}
