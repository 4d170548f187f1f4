//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence from tightest: unary operators, `&`, `|`, then `->` (right
//! associative). `/\` and `\/` are accepted as aliases of `&` and `|`.

use super::formula::{Formula, LinkKind, Nominal, Sign};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at position {pos}")]
    Lex { pos: usize, found: char },
    #[error("at position {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("identifier `{name}` at position {pos} is reserved")]
    Reserved { pos: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Lex { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::Reserved { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Rel(Sign),
    Not,
    And,
    Or,
    Implies,
    Dia(Sign),
    Box(Sign),
    Global,
    Add(LinkKind),
    Flip(Sign),
    LParen,
    RParen,
    Comma,
    Colon,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            other => format!("operator {other:?}"),
        }
    }
}

// Longest first so that maximal munch falls out of the scan order.
const FIXED: &[(&str, Tok)] = &[
    ("(++)", Tok::Add(LinkKind::Plus)),
    ("(--)", Tok::Add(LinkKind::Minus)),
    ("(+-)", Tok::Add(LinkKind::Either)),
    ("(+)", Tok::Flip(Sign::Plus)),
    ("(-)", Tok::Flip(Sign::Minus)),
    ("<+>", Tok::Dia(Sign::Plus)),
    ("<->", Tok::Dia(Sign::Minus)),
    ("[+]", Tok::Box(Sign::Plus)),
    ("[-]", Tok::Box(Sign::Minus)),
    ("[A]", Tok::Global),
    ("->", Tok::Implies),
    ("/\\", Tok::And),
    ("\\/", Tok::Or),
    ("~", Tok::Not),
    ("&", Tok::And),
    ("|", Tok::Or),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    (",", Tok::Comma),
    (":", Tok::Colon),
];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let mut pos = 0;
    'outer: while pos < src.len() {
        let rest = &src[pos..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        if rest.starts_with("R+(") || rest.starts_with("R-(") {
            let sign = if rest.as_bytes()[1] == b'+' {
                Sign::Plus
            } else {
                Sign::Minus
            };
            toks.push((pos, Tok::Rel(sign)));
            toks.push((pos + 2, Tok::LParen));
            pos += 3;
            continue;
        }
        for (text, tok) in FIXED {
            if rest.starts_with(text) {
                toks.push((pos, tok.clone()));
                pos += text.len();
                continue 'outer;
            }
        }
        if is_ident_start(c) {
            let len = rest
                .find(|ch: char| !is_ident_char(ch))
                .unwrap_or(rest.len());
            toks.push((pos, Tok::Ident(rest[..len].to_string())));
            pos += len;
            continue;
        }
        return Err(ParseError::Lex { pos, found: c });
    }
    toks.push((src.len(), Tok::End));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn nominal(&mut self) -> Result<Nominal, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                check_reserved(&name, pos)?;
                Ok(Nominal::new(name))
            }
            _ => self.fail("a nominal"),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        let tok = self.peek().clone();
        if matches!(
            tok,
            Tok::End | Tok::RParen | Tok::Comma | Tok::Colon | Tok::And | Tok::Or | Tok::Implies
        ) {
            return self.fail("a formula");
        }
        self.bump();
        let f = match tok {
            Tok::Not => Formula::not(self.unary()?),
            Tok::Dia(s) => Formula::diamond(s, self.unary()?),
            Tok::Box(s) => Formula::boxed(s, self.unary()?),
            Tok::Global => Formula::global(self.unary()?),
            Tok::Add(k) => Formula::add_link(k, self.unary()?),
            Tok::Flip(s) => Formula::flip(s, self.unary()?),
            Tok::LParen => {
                let inner = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                inner
            }
            Tok::Rel(s) => {
                self.expect(Tok::LParen, "`(`")?;
                let i = self.nominal()?;
                self.expect(Tok::Comma, "`,`")?;
                let j = self.nominal()?;
                self.expect(Tok::RParen, "`)`")?;
                Formula::Rel(s, i, j)
            }
            Tok::Ident(name) if name == "lb" && *self.peek() == Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Formula::local_balance(inner)
            }
            Tok::Ident(name) if name == "T" => Formula::top(),
            Tok::Ident(name) if name == "F" => Formula::bottom(),
            Tok::Ident(name) => {
                check_reserved(&name, pos)?;
                Formula::prop(name)
            }
            Tok::End
            | Tok::RParen
            | Tok::Comma
            | Tok::Colon
            | Tok::And
            | Tok::Or
            | Tok::Implies => unreachable!(),
        };
        Ok(f)
    }
}

fn check_reserved(name: &str, pos: usize) -> Result<(), ParseError> {
    if name.starts_with("__") {
        return Err(ParseError::Reserved {
            pos,
            name: name.to_string(),
        });
    }
    Ok(())
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    Ok(f)
}

/// Parses a bare identifier usable as a nominal or agent name.
pub fn parse_ident(src: &str) -> Result<String, ParseError> {
    let s = src.trim();
    let offset = src.len() - src.trim_start().len();
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, c)) if is_ident_start(c) => {}
        Some((i, c)) => {
            return Err(ParseError::Lex {
                pos: offset + i,
                found: c,
            })
        }
        None => {
            return Err(ParseError::Syntax {
                pos: offset,
                expected: "an identifier".into(),
                found: "end of input".into(),
            })
        }
    }
    if let Some((i, c)) = chars.find(|(_, c)| !is_ident_char(*c)) {
        return Err(ParseError::Lex {
            pos: offset + i,
            found: c,
        });
    }
    check_reserved(s, offset)?;
    Ok(s.to_string())
}
