use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::LogicError;

/// Boolean expression over named atoms.
///
/// Values built by the parser or by [`Formula::and`] / [`Formula::or`] are
/// canonical: n-ary nodes are flattened and never hold fewer than two
/// children.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

/// True when `name` is a legal atom identifier (`T` and `F` are reserved).
pub fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "T" && name != "F"
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction, flattening nested conjunctions.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap_or(Formula::True),
            _ => Formula::And(out),
        }
    }

    /// Disjunction, flattening nested disjunctions.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap_or(Formula::False),
            _ => Formula::Or(out),
        }
    }

    pub fn parse(text: &str) -> Result<Self, LogicError> {
        parse_formula(text)
    }

    /// Atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_atoms(&mut seen, &mut out);
        out
    }

    fn collect_atoms(&self, seen: &mut BTreeSet<String>, out: &mut Vec<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                if seen.insert(a.clone()) {
                    out.push(a.clone());
                }
            }
            Formula::Not(c) => c.collect_atoms(seen, out),
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    c.collect_atoms(seen, out);
                }
            }
        }
    }

    /// Evaluates under a truth assignment; every atom must be assigned.
    pub fn evaluate(&self, world: &BTreeMap<String, bool>) -> Result<bool, LogicError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => *world
                .get(a)
                .ok_or_else(|| LogicError::MissingAtom(a.clone()))?,
            Formula::Not(c) => !c.evaluate(world)?,
            Formula::And(cs) => {
                let mut v = true;
                for c in cs {
                    v &= c.evaluate(world)?;
                }
                v
            }
            Formula::Or(cs) => {
                let mut v = false;
                for c in cs {
                    v |= c.evaluate(world)?;
                }
                v
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(_) => 0,
            Formula::And(_) => 1,
            _ => 2,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({})", self)
        } else {
            write!(f, "{}", self)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("T"),
            Formula::False => f.write_str("F"),
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(c) => {
                f.write_str("~")?;
                c.write_child(f, 2)
            }
            Formula::And(cs) | Formula::Or(cs) => {
                let (sep, min) = if matches!(self, Formula::And(_)) {
                    (" & ", 2)
                } else {
                    (" | ", 1)
                };
                if cs.is_empty() {
                    return f.write_str(if min == 2 { "T" } else { "F" });
                }
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    c.write_child(f, min)?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Formula {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Open,
    Close,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Result<Option<(usize, Token)>, LogicError> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.text[start..].chars().next() else {
            return Ok(None);
        };
        let tok = match c {
            '~' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::Open,
            ')' => Token::Close,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let rest = &self.text[start..];
                let len = rest
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .unwrap_or(rest.len());
                self.pos += len;
                return Ok(Some((start, Token::Ident(rest[..len].to_string()))));
            }
            _ => {
                return Err(LogicError::Syntax {
                    offset: start,
                    message: alloc::format!("unexpected character `{c}`"),
                })
            }
        };
        self.pos += c.len_utf8();
        Ok(Some((start, tok)))
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, message: &str) -> LogicError {
        LogicError::Syntax {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Formula, LogicError> {
        let mut parts = alloc::vec![self.term()?];
        while self.peek() == Some(&Token::Or) {
            self.at += 1;
            parts.push(self.term()?);
        }
        Ok(Formula::or(parts))
    }

    fn term(&mut self) -> Result<Formula, LogicError> {
        let mut parts = alloc::vec![self.factor()?];
        while self.peek() == Some(&Token::And) {
            self.at += 1;
            parts.push(self.factor()?);
        }
        Ok(Formula::and(parts))
    }

    fn factor(&mut self) -> Result<Formula, LogicError> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.at += 1;
                Ok(Formula::not(self.factor()?))
            }
            Some(Token::Ident(name)) => {
                self.at += 1;
                Ok(match name.as_str() {
                    "T" => Formula::True,
                    "F" => Formula::False,
                    _ => Formula::Atom(name),
                })
            }
            Some(Token::Open) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error("expected `)`"));
                }
                self.at += 1;
                Ok(inner)
            }
            Some(_) => Err(self.error("expected an operand")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a formula with precedence `~` over `&` over `|`.
pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    let mut lexer = Lexer { text, pos: 0 };
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next()? {
        tokens.push(t);
    }
    if tokens.is_empty() {
        return Err(LogicError::EmptyFormula);
    }
    let mut parser = Parser {
        tokens,
        at: 0,
        end: text.len(),
    };
    let f = parser.expr()?;
    if parser.at != parser.tokens.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(f)
}

/// Formula with atoms resolved to bit positions of a world mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Compiled {
    Const(bool),
    Atom(u32),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

impl Compiled {
    pub(crate) fn eval(&self, mask: u64) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Atom(i) => mask >> i & 1 == 1,
            Compiled::Not(c) => !c.eval(mask),
            Compiled::And(cs) => cs.iter().all(|c| c.eval(mask)),
            Compiled::Or(cs) => cs.iter().any(|c| c.eval(mask)),
        }
    }

    pub(crate) fn compile(
        f: &Formula,
        index: &dyn Fn(&str) -> Option<u32>,
    ) -> Result<Self, LogicError> {
        Ok(match f {
            Formula::True => Compiled::Const(true),
            Formula::False => Compiled::Const(false),
            Formula::Atom(a) => {
                Compiled::Atom(index(a).ok_or_else(|| LogicError::UnknownAtom(a.clone()))?)
            }
            Formula::Not(c) => Compiled::Not(Box::new(Self::compile(c, index)?)),
            Formula::And(cs) => Compiled::And(
                cs.iter()
                    .map(|c| Self::compile(c, index))
                    .collect::<Result<_, _>>()?,
            ),
            Formula::Or(cs) => Compiled::Or(
                cs.iter()
                    .map(|c| Self::compile(c, index))
                    .collect::<Result<_, _>>()?,
            ),
        })
    }
}
