//! Tokenizer for the formula surface syntax.

use super::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Name(String),
    Int(i64),
    True,
    False,
    // multi-character operators, longest first when they share a prefix
    TotalBij,    // >->>
    PartialSurj, // +->>
    TotalSurj,   // -->>
    PartialInj,  // >+>
    TotalInj,    // >->
    PartialFn,   // +->
    TotalFn,     // -->
    Rel,         // <->
    Maplet,      // |->
    Le,          // <=
    Ge,          // >=
    SubsetOf,    // <:
    Implies,     // =>
    Colon,       // :
    Eq,          // =
    Lt,          // <
    Gt,          // >
    And,         // &
    Semicolon,   // ;
    Tilde,       // ~
    Star,        // *
    Plus,        // +
    Minus,       // -
    Bang,        // !
    Hash,        // #
    Dot,         // .
    Comma,       // ,
    Bar,         // |
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("identifier '{n}'"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::True => "TRUE".into(),
            Tok::False => "FALSE".into(),
            other => format!("'{}'", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::TotalBij => ">->>",
            Tok::PartialSurj => "+->>",
            Tok::TotalSurj => "-->>",
            Tok::PartialInj => ">+>",
            Tok::TotalInj => ">->",
            Tok::PartialFn => "+->",
            Tok::TotalFn => "-->",
            Tok::Rel => "<->",
            Tok::Maplet => "|->",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::SubsetOf => "<:",
            Tok::Implies => "=>",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::And => "&",
            Tok::Semicolon => ";",
            Tok::Tilde => "~",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Bang => "!",
            Tok::Hash => "#",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Bar => "|",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Name(_) | Tok::Int(_) | Tok::True | Tok::False => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    /// 1-based column of the first character in the input.
    pub col: usize,
}

const OPERATORS: &[(&str, Tok)] = &[
    (">->>", Tok::TotalBij),
    ("+->>", Tok::PartialSurj),
    ("-->>", Tok::TotalSurj),
    (">+>", Tok::PartialInj),
    (">->", Tok::TotalInj),
    ("+->", Tok::PartialFn),
    ("-->", Tok::TotalFn),
    ("<->", Tok::Rel),
    ("|->", Tok::Maplet),
    ("<=", Tok::Le),
    (">=", Tok::Ge),
    ("<:", Tok::SubsetOf),
    ("=>", Tok::Implies),
    (":", Tok::Colon),
    ("=", Tok::Eq),
    ("<", Tok::Lt),
    (">", Tok::Gt),
    ("&", Tok::And),
    (";", Tok::Semicolon),
    ("~", Tok::Tilde),
    ("*", Tok::Star),
    ("+", Tok::Plus),
    ("-", Tok::Minus),
    ("!", Tok::Bang),
    ("#", Tok::Hash),
    (".", Tok::Dot),
    (",", Tok::Comma),
    ("|", Tok::Bar),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("[", Tok::LBracket),
    ("]", Tok::RBracket),
];

pub fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let col = i + 1;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &input[start..i];
            let tok = match word {
                "TRUE" => Tok::True,
                "FALSE" => Tok::False,
                _ => Tok::Name(word.to_string()),
            };
            toks.push(Spanned { tok, col });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let text = &input[start..i];
            let value: i64 = text.parse().map_err(|_| ParseError {
                col,
                message: format!("integer literal '{text}' out of range"),
            })?;
            toks.push(Spanned { tok: Tok::Int(value), col });
            continue;
        }
        let rest = &input[i..];
        let mut matched = None;
        for (text, tok) in OPERATORS {
            if rest.starts_with(text) {
                matched = Some((text.len(), tok.clone()));
                break;
            }
        }
        match matched {
            Some((len, tok)) => {
                toks.push(Spanned { tok, col });
                i += len;
            }
            None => {
                return Err(ParseError {
                    col,
                    message: format!("unknown operator or character '{c}'"),
                })
            }
        }
    }
    Ok(toks)
}
