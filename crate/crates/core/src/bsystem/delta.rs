//! The `.delta` surface syntax for additions to B components.

use super::{EnumeratedSet, InitExpr, Initialisation};
use crate::formula::{parse_formula, Formula};
use serde::Serialize;
use thiserror::Error;

/// One addition to one component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BDelta {
    /// Component the addition targets; `None` means the root component.
    pub target: Option<String>,
    pub addition: Addition,
}

/// What was added.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Addition {
    AbstractSet(String),
    EnumeratedSet(EnumeratedSet),
    SetItem { set: String, item: String },
    Constant(String),
    Variable(String),
    Property(Formula),
    Invariant(Formula),
    Initialisation(Initialisation),
}

impl Addition {
    /// Stable upper-case tag for logs and reports.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Addition::AbstractSet(_) => "ABSTRACT_SET",
            Addition::EnumeratedSet(_) => "ENUMERATED_SET",
            Addition::SetItem { .. } => "SET_ITEM",
            Addition::Constant(_) => "CONSTANT",
            Addition::Variable(_) => "VARIABLE",
            Addition::Property(_) => "PROPERTY",
            Addition::Invariant(_) => "INVARIANT",
            Addition::Initialisation(_) => "INITIALISATION",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("line {line}: {message}")]
pub struct DeltaParseError {
    pub line: usize,
    pub message: String,
}

/// Parse a `.delta` file into the additions it describes.
///
/// The syntax is line-oriented; `//` starts a comment. Each statement is one
/// of
///
/// ```text
/// component NAME            -- following additions target component NAME
/// add set S                 -- abstract set
/// add set CO = {I1, I2}     -- enumerated set
/// add item I3 of CO         -- item joining an enumerated set
/// add constant c
/// add variable v
/// add property  <formula>
/// add invariant <formula>
/// add init v := <expression>
/// add init v :: <expression>
/// ```
///
/// The `add` prefix is optional. Statements may share a line separated by
/// `;`, but a `;` only ends a statement when the next word is a statement
/// keyword — `;` is also the composition operator inside formulas. Until a
/// `component` statement appears, additions target the root component.
/// Only additions exist: `remove ...` is rejected.
pub fn parse_deltas(text: &str) -> Result<Vec<BDelta>, DeltaParseError> {
    let mut deltas = Vec::new();
    let mut target: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find("//") {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        for statement in split_statements(content) {
            let statement = statement.trim();
            if statement.is_empty() {
                continue;
            }
            if let Some(addition) = parse_statement(statement, line, &mut target)? {
                deltas.push(BDelta { target: target.clone(), addition });
            }
        }
    }
    Ok(deltas)
}

const KEYWORDS: [&str; 10] = [
    "add", "remove", "component", "set", "item", "constant", "variable", "property",
    "invariant", "init",
];

/// Split a line at every `;` that starts a new statement.
fn split_statements(line: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut start = 0;
    let mut depth = 0i32;
    for (i, b) in line.bytes().enumerate() {
        match b {
            b'(' | b'{' | b'[' => depth += 1,
            b')' | b'}' | b']' => depth -= 1,
            b';' if depth == 0 => {
                let next_word: String = line[i + 1..]
                    .trim_start()
                    .chars()
                    .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
                    .collect();
                if KEYWORDS.contains(&next_word.as_str()) {
                    parts.push(&line[start..i]);
                    start = i + 1;
                }
            }
            _ => {}
        }
    }
    parts.push(&line[start..]);
    parts
}

fn parse_statement(
    statement: &str,
    line: usize,
    target: &mut Option<String>,
) -> Result<Option<Addition>, DeltaParseError> {
    let fail = |message: String| DeltaParseError { line, message };
    let (mut head, mut rest) = split_word(statement);
    if head == "add" {
        (head, rest) = split_word(rest);
    }
    let addition = match head {
        "remove" => return Err(fail("only additions are supported".into())),
        "component" => {
            *target = Some(identifier(rest, line)?);
            return Ok(None);
        }
        "set" => match rest.split_once('=') {
            None => Addition::AbstractSet(identifier(rest, line)?),
            Some((name, items)) => {
                let items = items.trim();
                let inner = items
                    .strip_prefix('{')
                    .and_then(|s| s.strip_suffix('}'))
                    .ok_or_else(|| fail(format!("expected '{{items}}' after '=', found '{items}'")))?;
                let items = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| identifier(s, line))
                    .collect::<Result<Vec<_>, _>>()?;
                Addition::EnumeratedSet(EnumeratedSet { name: identifier(name, line)?, items })
            }
        },
        "item" => match rest.split_once(" of ") {
            Some((item, set)) => Addition::SetItem {
                set: identifier(set, line)?,
                item: identifier(item, line)?,
            },
            None => return Err(fail(format!("expected 'item NAME of SET', found '{rest}'"))),
        },
        "constant" => Addition::Constant(identifier(rest, line)?),
        "variable" => Addition::Variable(identifier(rest, line)?),
        "property" => Addition::Property(formula(rest, line)?),
        "invariant" => Addition::Invariant(formula(rest, line)?),
        "init" => {
            let (variable, expr) = if let Some((v, e)) = rest.split_once(":=") {
                (v, InitExpr::Becomes(formula(e, line)?))
            } else if let Some((v, e)) = rest.split_once("::") {
                (v, InitExpr::BecomesIn(formula(e, line)?))
            } else {
                return Err(fail(format!("expected ':=' or '::' in initialisation '{rest}'")));
            };
            Addition::Initialisation(Initialisation {
                variable: identifier(variable, line)?,
                expr,
            })
        }
        other => return Err(fail(format!("unknown delta statement '{other}'"))),
    };
    Ok(Some(addition))
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim();
    match s.find(char::is_whitespace) {
        Some(pos) => (&s[..pos], s[pos..].trim_start()),
        None => (s, ""),
    }
}

fn identifier(s: &str, line: usize) -> Result<String, DeltaParseError> {
    let s = s.trim();
    let mut chars = s.chars();
    let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if valid {
        Ok(s.to_string())
    } else {
        Err(DeltaParseError { line, message: format!("expected an identifier, found '{s}'") })
    }
}

fn formula(s: &str, line: usize) -> Result<Formula, DeltaParseError> {
    parse_formula(s).map_err(|e| DeltaParseError { line, message: e.to_string() })
}
