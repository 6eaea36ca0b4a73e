//! Parsing of `.dom` model files.
//!
//! The format is line oriented: one declaration per line, `//` starts a
//! comment, blank lines separate nothing. The first declaration is the
//! header naming the model:
//!
//! ```text
//! domainmodel Saturn_2 refines Saturn_1
//!
//! concept MI subconceptof T_IN
//! definedconcept VIN where vin_def
//! association FB from T_IN to T_OUT rangecard 0..1
//!
//! individual in variable of T_IN init in0
//! maplet m of FB = in0 |-> out0
//!
//! formula vin_def: VIN = MI --> BOOL
//! formula gluing: in_l = in
//! ```
//!
//! Everything after the `:` of a `formula` line is formula text in the
//! notation of [`crate::formula`]. The head of the line carries the optional
//! `gluing` marker and the optional label — the colon always terminates the
//! head, so `formula gluing:` is a gluing formula without a label.
//!
//! Refinement levels are not written down; they are derived from the
//! `refines` clauses when the workspace is ordered into a chain.

use super::ModelParseError;
use crate::domain::{
    AssociationSpec, Bound, Cardinality, Concept, ConceptKind, DefinedSpec, DomainModel,
    Individual, IndividualRef, LogicalFormula, MapletSpec,
};
use crate::formula::parse_formula;

/// Keywords of the declaration grammar. They cannot name model elements.
pub(super) const KEYWORDS: &[&str] = &[
    "domainmodel",
    "refines",
    "concept",
    "definedconcept",
    "association",
    "individual",
    "maplet",
    "formula",
    "variable",
    "enumeration",
    "subconceptof",
    "where",
    "from",
    "to",
    "of",
    "init",
    "domaincard",
    "rangecard",
    "gluing",
];

pub(super) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

/// Parse one model file. The declarations keep their order within each kind
/// (concepts, individuals, formulas); [`serialize_domain_model`] writes them
/// back in exactly that order.
///
/// [`serialize_domain_model`]: super::serialize_domain_model
pub fn parse_domain_model(text: &str) -> Result<DomainModel, ModelParseError> {
    let mut model: Option<DomainModel> = None;
    for (index, raw) in text.lines().enumerate() {
        let mut line = Line::new(index + 1, raw);
        let Some((at, keyword)) = line.next_word() else { continue };
        let Some(m) = model.as_mut() else {
            if keyword != "domainmodel" {
                return Err(line.error(at, "expected the 'domainmodel' header first"));
            }
            let mut m = DomainModel::new(line.identifier("a model name")?);
            if line.take("refines") {
                m.parent = Some(line.identifier("a parent model name")?);
            }
            line.finish()?;
            model = Some(m);
            continue;
        };
        match keyword {
            "domainmodel" => {
                return Err(line.error(at, "a file holds a single model"));
            }
            "concept" => {
                let c = concept(&mut line)?;
                m.concepts.push(c);
            }
            "definedconcept" => {
                let c = defined_concept(&mut line)?;
                m.concepts.push(c);
            }
            "association" => {
                let c = association(&mut line)?;
                m.concepts.push(c);
            }
            "individual" => {
                let i = individual(&mut line)?;
                m.individuals.push(i);
            }
            "maplet" => {
                let i = maplet(&mut line)?;
                m.individuals.push(i);
            }
            "formula" => {
                let f = formula(&mut line)?;
                m.formulas.push(f);
            }
            other => {
                return Err(line.error(at, format!("unknown keyword '{other}'")));
            }
        }
    }
    model.ok_or(ModelParseError {
        line: 1,
        column: 1,
        message: "missing 'domainmodel' header".into(),
    })
}

fn concept(line: &mut Line) -> Result<Concept, ModelParseError> {
    let mut c = Concept::plain(line.identifier("a concept name")?);
    c.is_variable = line.take("variable");
    c.is_enumeration = line.take("enumeration");
    if line.take("subconceptof") {
        c.parent = Some(line.identifier("a parent concept name")?);
    }
    line.finish()?;
    Ok(c)
}

fn defined_concept(line: &mut Line) -> Result<Concept, ModelParseError> {
    let mut c = Concept::plain(line.identifier("a concept name")?);
    c.is_variable = line.take("variable");
    line.expect("where")?;
    let (mut at, rest) = line.rest();
    let mut labels = Vec::new();
    for part in rest.split(',') {
        let label = part.trim();
        let indent = part.len() - part.trim_start().len();
        if !is_identifier(label) {
            return Err(line.error(at + indent, "expected a formula label"));
        }
        labels.push(label.to_string());
        at += part.len() + 1;
    }
    c.kind = ConceptKind::Defined(DefinedSpec { defining_formulas: labels });
    Ok(c)
}

fn association(line: &mut Line) -> Result<Concept, ModelParseError> {
    let mut c = Concept::plain(line.identifier("an association name")?);
    c.is_variable = line.take("variable");
    if line.take("subconceptof") {
        c.parent = Some(line.identifier("a parent association name")?);
    }
    line.expect("from")?;
    let domain = line.identifier("a domain concept name")?;
    line.expect("to")?;
    let range = line.identifier("a range concept name")?;
    let mut spec = AssociationSpec {
        domain,
        range,
        domain_cardinality: Cardinality::DEFAULT,
        range_cardinality: Cardinality::DEFAULT,
    };
    let mut seen = [false, false];
    loop {
        let which = if line.take("domaincard") {
            0
        } else if line.take("rangecard") {
            1
        } else {
            break;
        };
        if seen[which] {
            return Err(line.error_here("the cardinality is given twice"));
        }
        seen[which] = true;
        let card = cardinality(line)?;
        if which == 0 {
            spec.domain_cardinality = card;
        } else {
            spec.range_cardinality = card;
        }
    }
    line.finish()?;
    c.kind = ConceptKind::Association(spec);
    Ok(c)
}

fn cardinality(line: &mut Line) -> Result<Cardinality, ModelParseError> {
    let Some((at, word)) = line.next_word() else {
        return Err(line.error_here("expected a cardinality like 1..3 or 0..*"));
    };
    let parsed = word.split_once("..").and_then(|(min, max)| {
        let min: u32 = min.parse().ok()?;
        let max = match max {
            "*" => Bound::Unbounded,
            n => Bound::Finite(n.parse().ok()?),
        };
        Some(Cardinality::new(min, max))
    });
    parsed.ok_or_else(|| line.error(at, format!("'{word}' is not a cardinality like 1..3 or 0..*")))
}

fn individual(line: &mut Line) -> Result<Individual, ModelParseError> {
    let name = line.identifier("an individual name")?;
    let is_variable = line.take("variable");
    line.expect("of")?;
    let mut i = Individual { is_variable, ..Individual::named(name, line.identifier("a concept name")?) };
    if line.take("init") {
        i.initial_value = Some(line.identifier("an individual name")?);
    }
    line.finish()?;
    Ok(i)
}

fn maplet(line: &mut Line) -> Result<Individual, ModelParseError> {
    // The name is optional; its absence shows in the next word being one of
    // the clause keywords.
    let name = match line.peek_word() {
        Some("variable" | "of") | None => None,
        Some(_) => Some(line.identifier("a maplet name")?),
    };
    let is_variable = line.take("variable");
    line.expect("of")?;
    let of = line.identifier("an association name")?;
    let ends = if line.take("=") {
        let antecedent = line.identifier("an individual name")?;
        line.expect("|->")?;
        let image = line.identifier("an individual name")?;
        MapletSpec {
            antecedent: Some(IndividualRef::Named(antecedent)),
            image: Some(IndividualRef::Named(image)),
        }
    } else {
        MapletSpec { antecedent: None, image: None }
    };
    let initial_value =
        if line.take("init") { Some(line.identifier("an individual name")?) } else { None };
    line.finish()?;
    Ok(Individual {
        name,
        is_variable,
        individual_of: of,
        initial_value,
        maplet: Some(ends),
    })
}

fn formula(line: &mut Line) -> Result<LogicalFormula, ModelParseError> {
    // The colon terminates the head; everything after it is formula text.
    let Some(colon) = line.find(':') else {
        return Err(line.error_here("missing ':' after the formula head"));
    };
    let mut is_gluing = false;
    let mut label = None;
    while let Some((at, word)) = line.next_word_before(colon) {
        if word == "gluing" && !is_gluing && label.is_none() {
            is_gluing = true;
        } else if label.is_none() && is_identifier(word) {
            label = Some(word.to_string());
        } else {
            return Err(line.error(at, format!("unexpected '{word}' in the formula head")));
        }
    }
    let text = line.after(colon);
    let assertion = parse_formula(text).map_err(|e| ModelParseError {
        line: line.number,
        column: line.column(colon + 1) + e.col - 1,
        message: e.message,
    })?;
    Ok(LogicalFormula { label, is_gluing, assertion })
}

/// Cursor over one comment-stripped line, tracking byte positions so every
/// error can point at a column.
struct Line<'a> {
    number: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Line<'a> {
    fn new(number: usize, raw: &'a str) -> Line<'a> {
        let text = match raw.find("//") {
            Some(i) => &raw[..i],
            None => raw,
        };
        Line { number, text, pos: 0 }
    }

    fn column(&self, byte: usize) -> usize {
        self.text[..byte.min(self.text.len())].chars().count() + 1
    }

    fn error(&self, byte: usize, message: impl Into<String>) -> ModelParseError {
        ModelParseError { line: self.number, column: self.column(byte), message: message.into() }
    }

    fn error_here(&self, message: impl Into<String>) -> ModelParseError {
        self.error(self.pos, message)
    }

    fn next_word(&mut self) -> Option<(usize, &'a str)> {
        self.next_word_before(self.text.len())
    }

    /// Next word that starts before `end`. Words are delimited by
    /// whitespace; a ':' also ends a word (and stands alone as one), so the
    /// colon of a formula head needs no space before it.
    fn next_word_before(&mut self, end: usize) -> Option<(usize, &'a str)> {
        let rest = &self.text[self.pos..];
        let trimmed = rest.trim_start();
        let start = self.pos + (rest.len() - trimmed.len());
        if trimmed.is_empty() || start >= end {
            self.pos = start;
            return None;
        }
        let len = if trimmed.starts_with(':') {
            1
        } else {
            trimmed.find(|c: char| c.is_whitespace() || c == ':').unwrap_or(trimmed.len())
        };
        let len = len.min(end - start);
        self.pos = start + len;
        Some((start, &self.text[start..start + len]))
    }

    fn peek_word(&self) -> Option<&'a str> {
        let mut copy = Line { number: self.number, text: self.text, pos: self.pos };
        copy.next_word().map(|(_, w)| w)
    }

    fn take(&mut self, word: &str) -> bool {
        if self.peek_word() == Some(word) {
            self.next_word();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: &str) -> Result<(), ModelParseError> {
        match self.next_word() {
            Some((_, w)) if w == want => Ok(()),
            Some((at, w)) => Err(self.error(at, format!("expected '{want}', found '{w}'"))),
            None => Err(self.error(self.text.len(), format!("expected '{want}'"))),
        }
    }

    fn identifier(&mut self, what: &str) -> Result<String, ModelParseError> {
        match self.next_word() {
            Some((_, w)) if is_identifier(w) => Ok(w.to_string()),
            Some((at, w)) => Err(self.error(at, format!("expected {what}, found '{w}'"))),
            None => Err(self.error(self.text.len(), format!("expected {what}"))),
        }
    }

    fn finish(&mut self) -> Result<(), ModelParseError> {
        match self.next_word() {
            None => Ok(()),
            Some((at, w)) => Err(self.error(at, format!("unexpected '{w}'"))),
        }
    }

    /// Remaining text from the cursor, trimmed on the left, with the byte
    /// position where it starts.
    fn rest(&mut self) -> (usize, &'a str) {
        let rest = &self.text[self.pos..];
        let trimmed = rest.trim_start();
        let start = self.pos + (rest.len() - trimmed.len());
        self.pos = self.text.len();
        (start, trimmed.trim_end())
    }

    fn find(&self, c: char) -> Option<usize> {
        self.text[self.pos..].find(c).map(|i| self.pos + i)
    }

    fn after(&self, byte: usize) -> &'a str {
        &self.text[byte + 1..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> DomainModel {
        parse_domain_model(text).unwrap()
    }

    fn err(text: &str) -> ModelParseError {
        parse_domain_model(text).unwrap_err()
    }

    #[test]
    fn header_with_and_without_refines() {
        let m = parse("domainmodel Saturn_1");
        assert_eq!(m.name, "Saturn_1");
        assert_eq!(m.parent, None);
        assert!(m.concepts.is_empty() && m.individuals.is_empty() && m.formulas.is_empty());

        let m = parse("domainmodel Saturn_2 refines Saturn_1");
        assert_eq!(m.parent.as_deref(), Some("Saturn_1"));
    }

    #[test]
    fn concepts_individuals_and_initial_values() {
        let m = parse(
            "domainmodel Saturn_1\n\
             concept T_IN\n\
             individual in variable of T_IN init in0\n\
             individual in0 of T_IN\n",
        );
        assert_eq!(m.concepts, [Concept::plain("T_IN")]);
        assert_eq!(
            m.individuals,
            [
                Individual {
                    is_variable: true,
                    initial_value: Some("in0".into()),
                    ..Individual::named("in", "T_IN")
                },
                Individual::named("in0", "T_IN"),
            ]
        );
    }

    #[test]
    fn concept_flags_and_parents() {
        let m = parse(
            "domainmodel M\n\
             concept CO variable enumeration subconceptof P\n\
             concept Q enumeration\n",
        );
        assert_eq!(
            m.concepts[0],
            Concept {
                is_variable: true,
                is_enumeration: true,
                parent: Some("P".into()),
                ..Concept::plain("CO")
            }
        );
        assert!(m.concepts[1].is_enumeration && !m.concepts[1].is_variable);
    }

    #[test]
    fn functional_association_with_range_cardinality() {
        let m = parse("domainmodel M\nassociation VBF from VIN to VOUT rangecard 0..1\n");
        let spec = m.concepts[0].as_association().unwrap();
        assert_eq!(spec.domain, "VIN");
        assert_eq!(spec.range, "VOUT");
        assert!(spec.domain_cardinality.is_default());
        assert_eq!(spec.range_cardinality, Cardinality::at_most_one());
    }

    #[test]
    fn association_cardinalities_in_either_order() {
        let a = parse("domainmodel M\nassociation A from X to Y domaincard 1..* rangecard 2..3\n");
        let b = parse("domainmodel M\nassociation A from X to Y rangecard 2..3 domaincard 1..*\n");
        assert_eq!(a.concepts, b.concepts);
        let spec = a.concepts[0].as_association().unwrap();
        assert_eq!(spec.domain_cardinality, Cardinality::new(1, Bound::Unbounded));
        assert_eq!(spec.range_cardinality, Cardinality::new(2, Bound::Finite(3)));
    }

    #[test]
    fn defined_concepts_list_their_formula_labels() {
        let m = parse(
            "domainmodel M\n\
             definedconcept VIN where vin_def\n\
             definedconcept W variable where a, b\n",
        );
        let labels = |i: usize| match &m.concepts[i].kind {
            ConceptKind::Defined(spec) => spec.defining_formulas.clone(),
            other => panic!("expected a defined concept, got {other:?}"),
        };
        assert_eq!(labels(0), ["vin_def"]);
        assert_eq!(labels(1), ["a", "b"]);
        assert!(m.concepts[1].is_variable);
    }

    #[test]
    fn maplets_with_and_without_names_and_ends() {
        let m = parse(
            "domainmodel M\n\
             maplet m of FB = in0 |-> out0\n\
             maplet of FB\n\
             maplet mv variable of FB init m0\n",
        );
        assert_eq!(
            m.individuals[0],
            Individual {
                maplet: Some(MapletSpec {
                    antecedent: Some(IndividualRef::Named("in0".into())),
                    image: Some(IndividualRef::Named("out0".into())),
                }),
                ..Individual::named("m", "FB")
            }
        );
        assert_eq!(m.individuals[1].name, None);
        assert!(m.individuals[1].maplet.as_ref().unwrap().antecedent.is_none());
        assert_eq!(m.individuals[2].initial_value.as_deref(), Some("m0"));
        assert!(m.individuals[2].is_variable);
    }

    #[test]
    fn formula_heads_take_gluing_and_labels() {
        let m = parse(
            "domainmodel M\n\
             formula: x > y\n\
             formula gluing: in_l = vec_to_in(s_in_l)\n\
             formula vin_def: VIN = agents_in --> BOOL\n\
             formula gluing g2: a = b\n",
        );
        let heads: Vec<(Option<&str>, bool)> =
            m.formulas.iter().map(|f| (f.label.as_deref(), f.is_gluing)).collect();
        assert_eq!(heads, [(None, false), (None, true), (Some("vin_def"), false), (Some("g2"), true)]);
        assert_eq!(m.formulas[1].assertion.to_string(), "in_l = vec_to_in(s_in_l)");
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let m = parse(
            "// a saturn fragment\n\
             domainmodel M // header\n\
             \n\
             concept T // trailing comment\n",
        );
        assert_eq!(m.concepts, [Concept::plain("T")]);
    }

    #[test]
    fn errors_point_at_line_and_column() {
        assert_eq!(err("concept T\n").line, 1);
        let e = err("domainmodel M\nconcpet T\n");
        assert_eq!((e.line, e.column), (2, 1));
        assert!(e.message.contains("concpet"));

        // Unexpected trailing word.
        let e = err("domainmodel M\nconcept T T2\n");
        assert_eq!((e.line, e.column), (2, 11));

        // A keyword cannot name an element.
        let e = err("domainmodel M\nconcept formula\n");
        assert_eq!((e.line, e.column), (2, 9));

        // Formula errors are offset to the line's coordinates.
        let e = err("domainmodel M\nformula bad: x = (y\n");
        assert_eq!(e.line, 2);
        assert_eq!(e.column, 20);

        let e = err("domainmodel M\nassociation A from X to Y domaincard 1..x\n");
        assert_eq!((e.line, e.column), (2, 38));

        let e = err("");
        assert_eq!((e.line, e.column), (1, 1));

        let e = err("domainmodel M\ndomainmodel N\n");
        assert_eq!((e.line, e.column), (2, 1));
    }

    #[test]
    fn missing_clauses_are_reported() {
        assert!(err("domainmodel M\nindividual k T\n").message.contains("'of'"));
        assert!(err("domainmodel M\nmaplet m of\n").message.contains("association name"));
        assert!(err("domainmodel M\nformula g x = y\n").message.contains("':'"));
        assert!(err("domainmodel M\ndefinedconcept V where\n").message.contains("label"));
        assert!(err("domainmodel M\nassociation A from X\n").message.contains("'to'"));
    }

    proptest! {
        // The parser must reject or accept, never panic, whatever the input.
        #[test]
        fn parser_never_panics(text in "\\PC*") {
            let _ = parse_domain_model(&text);
        }

        #[test]
        fn parser_never_panics_on_keyword_soup(
            words in proptest::collection::vec(
                proptest::sample::select(KEYWORDS.to_vec()), 0..12),
            lines in 1usize..4,
        ) {
            let text = words
                .chunks(lines)
                .map(|c| c.join(" "))
                .collect::<Vec<_>>()
                .join("\n");
            let _ = parse_domain_model(&text);
        }
    }
}
