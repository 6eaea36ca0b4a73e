//! Recursive descent parser for the formula syntax.
//!
//! Binding strength, loosest first: `=>` (right associative), `&`, the
//! predicate operators `= : <: < > <= >=` (non associative), the relation
//! types `<-> +-> --> >+> >-> +->> -->> >->>`, `|->`, `;`, `+ -`, `*`, then
//! the postfix operators `~`, application and image. Composition chains are
//! kept left associative.

use super::lexer::{lex, Spanned, Tok};
use super::{CompareOp, Formula, Quantifier, RelationOp};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("column {col}: {message}")]
pub struct ParseError {
    /// 1-based column in the formula text.
    pub col: usize,
    pub message: String,
}

pub fn parse_formula(input: &str) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, end_col: input.len() + 1 };
    let f = p.implies()?;
    if let Some(t) = p.peek() {
        return Err(ParseError {
            col: t.col,
            message: format!("unexpected {}", t.tok.describe()),
        });
    }
    Ok(f)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek().map(|t| &t.tok) == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError {
                col: t.col,
                message: format!("expected {what}, found {}", t.tok.describe()),
            }),
            None => Err(ParseError {
                col: self.end_col,
                message: format!("expected {what}, found end of formula"),
            }),
        }
    }

    fn error_here(&self, message: String) -> ParseError {
        let col = self.peek().map(|t| t.col).unwrap_or(self.end_col);
        ParseError { col, message }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.predicate()?;
        while self.eat(&Tok::And) {
            let rhs = self.predicate()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn predicate(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.relation()?;
        let op = match self.peek().map(|t| &t.tok) {
            Some(Tok::Eq) => Some(PredOp::Eq),
            Some(Tok::Colon) => Some(PredOp::Member),
            Some(Tok::SubsetOf) => Some(PredOp::Subset),
            Some(Tok::Lt) => Some(PredOp::Cmp(CompareOp::Lt)),
            Some(Tok::Gt) => Some(PredOp::Cmp(CompareOp::Gt)),
            Some(Tok::Le) => Some(PredOp::Cmp(CompareOp::Le)),
            Some(Tok::Ge) => Some(PredOp::Cmp(CompareOp::Ge)),
            _ => None,
        };
        let Some(op) = op else { return Ok(lhs) };
        self.pos += 1;
        let rhs = self.relation()?;
        Ok(match op {
            PredOp::Eq => Formula::Equal(Box::new(lhs), Box::new(rhs)),
            PredOp::Member => Formula::Member(Box::new(lhs), Box::new(rhs)),
            PredOp::Subset => Formula::Subset(Box::new(lhs), Box::new(rhs)),
            PredOp::Cmp(op) => Formula::Compare { op, lhs: Box::new(lhs), rhs: Box::new(rhs) },
        })
    }

    fn relation(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.maplet()?;
        loop {
            let op = match self.peek().map(|t| &t.tok) {
                Some(Tok::Rel) => RelationOp::Relation,
                Some(Tok::PartialFn) => RelationOp::PartialFunction,
                Some(Tok::TotalFn) => RelationOp::TotalFunction,
                Some(Tok::PartialInj) => RelationOp::PartialInjection,
                Some(Tok::TotalInj) => RelationOp::TotalInjection,
                Some(Tok::PartialSurj) => RelationOp::PartialSurjection,
                Some(Tok::TotalSurj) => RelationOp::TotalSurjection,
                Some(Tok::TotalBij) => RelationOp::TotalBijection,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.maplet()?;
            lhs = Formula::RelSet { op, domain: Box::new(lhs), range: Box::new(rhs) };
        }
        Ok(lhs)
    }

    fn maplet(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.composition()?;
        while self.eat(&Tok::Maplet) {
            let rhs = self.composition()?;
            lhs = Formula::Maplet(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn composition(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.additive()?;
        while self.eat(&Tok::Semicolon) {
            let rhs = self.additive()?;
            lhs = Formula::Compose(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.multiplicative()?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.multiplicative()?;
                lhs = Formula::Sum(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Minus) {
                let rhs = self.multiplicative()?;
                lhs = Formula::Diff(Box::new(lhs), Box::new(rhs));
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.postfix()?;
        while self.eat(&Tok::Star) {
            let rhs = self.postfix()?;
            lhs = Formula::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.atom()?;
        loop {
            if self.eat(&Tok::Tilde) {
                f = Formula::Inverse(Box::new(f));
            } else if self.eat(&Tok::LParen) {
                let mut args = vec![self.implies()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.implies()?);
                }
                self.expect(Tok::RParen, "')'")?;
                f = Formula::Apply { func: Box::new(f), args };
            } else if self.eat(&Tok::LBracket) {
                let arg = self.implies()?;
                self.expect(Tok::RBracket, "']'")?;
                f = Formula::Image { rel: Box::new(f), arg: Box::new(arg) };
            } else {
                break;
            }
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Name(n)) => {
                self.bump();
                Ok(Formula::Name(n))
            }
            Some(Tok::Int(i)) => {
                self.bump();
                Ok(Formula::Int(i))
            }
            Some(Tok::True) => {
                self.bump();
                Ok(Formula::Bool(true))
            }
            Some(Tok::False) => {
                self.bump();
                Ok(Formula::Bool(false))
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.implies()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Bang) => {
                self.bump();
                self.quantified(Quantifier::Forall)
            }
            Some(Tok::Hash) => {
                self.bump();
                self.quantified(Quantifier::Exists)
            }
            Some(Tok::LBrace) => {
                self.bump();
                self.braced()
            }
            Some(tok) => Err(self.error_here(format!("unexpected {}", tok.describe()))),
            None => Err(self.error_here("unexpected end of formula".to_string())),
        }
    }

    /// After `!` or `#`: either `x.(P)` or `(x, y).(P)`.
    fn quantified(&mut self, q: Quantifier) -> Result<Formula, ParseError> {
        let vars = if self.eat(&Tok::LParen) {
            let mut vars = vec![self.var_name()?];
            while self.eat(&Tok::Comma) {
                vars.push(self.var_name()?);
            }
            self.expect(Tok::RParen, "')'")?;
            vars
        } else {
            vec![self.var_name()?]
        };
        self.expect(Tok::Dot, "'.'")?;
        self.expect(Tok::LParen, "'(' before quantifier body")?;
        let body = self.implies()?;
        self.expect(Tok::RParen, "')' after quantifier body")?;
        Ok(Formula::Quantified { q, vars, body: Box::new(body) })
    }

    fn var_name(&mut self) -> Result<String, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Name(n)) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.error_here("expected a variable name".to_string())),
        }
    }

    /// After `{`: empty set, set in extension, or comprehension.
    fn braced(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::RBrace) {
            return Ok(Formula::SetExtension(Vec::new()));
        }
        // `{x | P}` or `{x, y | P}`: only names may precede the bar.
        if self.looks_like_comprehension() {
            let mut vars = vec![self.var_name()?];
            while self.eat(&Tok::Comma) {
                vars.push(self.var_name()?);
            }
            self.expect(Tok::Bar, "'|'")?;
            let pred = self.implies()?;
            self.expect(Tok::RBrace, "'}'")?;
            return Ok(Formula::Comprehension { vars, pred: Box::new(pred) });
        }
        let mut items = vec![self.implies()?];
        while self.eat(&Tok::Comma) {
            items.push(self.implies()?);
        }
        self.expect(Tok::RBrace, "'}'")?;
        Ok(Formula::SetExtension(items))
    }

    fn looks_like_comprehension(&self) -> bool {
        // Scan `name (, name)*` and check the token that follows is `|`.
        let mut i = self.pos;
        loop {
            match self.toks.get(i).map(|t| &t.tok) {
                Some(Tok::Name(_)) => i += 1,
                _ => return false,
            }
            match self.toks.get(i).map(|t| &t.tok) {
                Some(Tok::Bar) => return true,
                Some(Tok::Comma) => i += 1,
                _ => return false,
            }
        }
    }
}

enum PredOp {
    Eq,
    Member,
    Subset,
    Cmp(CompareOp),
}
