//! Concrete ASCII syntax for types and terms.
//!
//! ```text
//! type  ::= 'Pi' tyvar '.' type | arrow
//! arrow ::= atom ('->' arrow)?
//! atom  ::= SORT | 'a | '(' type ')'
//!
//! term  ::= 'lam' x ':' type '.' term | 'Lam' tyvar '.' term | app
//! app   ::= postfix+                      (left-associative juxtaposition)
//! postfix ::= atom ('{' type '}')*
//! atom  ::= x | '#' c | '(' term ')'
//! ```
//!
//! `λ`, `Λ`, `Π` and `→` are accepted as synonyms. A `Pi`/`Lam` binder may be
//! written with or without the quote; inside its scope the bare name refers to
//! the type variable.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::context::Context;
use super::term::Term;
use super::types::{SortEnv, Type};
use super::typing::{type_of, TypeError};

/// A syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

/// Failures of [`parse_type`] and [`parse_term`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown sort `{name}` at {position}")]
    UnknownSort { name: String, position: usize },
    #[error("unbound identifier `{name}` at {position}")]
    Unbound { name: String, position: usize },
    #[error("ill-typed term: {0}")]
    IllTyped(#[from] TypeError),
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    TyVar(String),
    Const(String),
    Lam,
    BigLam,
    Pi,
    Arrow,
    Dot,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("identifier `{s}`"),
            Tok::TyVar(s) => alloc::format!("type variable `'{s}`"),
            Tok::Const(s) => alloc::format!("constant `#{s}`"),
            Tok::Lam => "`lam`".into(),
            Tok::BigLam => "`Lam`".into(),
            Tok::Pi => "`Pi`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let take_ident = |start: usize, chars: &mut core::iter::Peekable<core::str::CharIndices<'_>>| {
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if is_ident_char(c) {
                end = i + c.len_utf8();
                chars.next();
            } else {
                break;
            }
        }
        text[start..end].to_string()
    };
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '(' | ')' | '{' | '}' | '.' | ':' | 'λ' | 'Λ' | 'Π' | '→' => {
                chars.next();
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '.' => Tok::Dot,
                    ':' => Tok::Colon,
                    'λ' => Tok::Lam,
                    'Λ' => Tok::BigLam,
                    'Π' => Tok::Pi,
                    _ => Tok::Arrow,
                }
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some((_, '>')) => Tok::Arrow,
                    _ => return Err(SyntaxError { position: pos, message: "expected `->`".into() }),
                }
            }
            '\'' | '#' => {
                chars.next();
                match chars.peek() {
                    Some(&(start, c2)) if is_ident_start(c2) => {
                        let name = take_ident(start, &mut chars);
                        if c == '\'' {
                            Tok::TyVar(name)
                        } else {
                            Tok::Const(name)
                        }
                    }
                    _ => {
                        return Err(SyntaxError {
                            position: pos,
                            message: alloc::format!("expected a name after `{c}`"),
                        })
                    }
                }
            }
            c if is_ident_start(c) => {
                let name = take_ident(pos, &mut chars);
                match name.as_str() {
                    "lam" => Tok::Lam,
                    "Lam" => Tok::BigLam,
                    "Pi" => Tok::Pi,
                    _ => Tok::Ident(name),
                }
            }
            other => {
                return Err(SyntaxError { position: pos, message: alloc::format!("unexpected character `{other}`") })
            }
        };
        out.push((tok, pos));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    sorts: &'a SortEnv,
    ctx: Option<&'a Context>,
    tyvars: Vec<String>,
    vars: Vec<(String, Type)>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, sorts: &'a SortEnv, ctx: Option<&'a Context>) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len(), sorts, ctx, tyvars: Vec::new(), vars: Vec::new() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        SyntaxError { position: self.offset(), message: message.into() }.into()
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(alloc::format!("expected {wanted}, found {}", t.describe())),
            None => self.error(alloc::format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.unexpected("end of input"))
        } else {
            Ok(())
        }
    }

    fn binder_tyvar(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::TyVar(v)) | Some(Tok::Ident(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.unexpected("a type variable")),
        }
    }

    fn parse_type(&mut self) -> Result<Type, ParseError> {
        if self.peek() == Some(&Tok::Pi) {
            self.pos += 1;
            let var = self.binder_tyvar()?;
            self.expect(Tok::Dot)?;
            self.tyvars.push(var.clone());
            let body = self.parse_type();
            self.tyvars.pop();
            return Ok(Type::Forall(var, Box::new(body?)));
        }
        let domain = self.parse_type_atom()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let codomain = self.parse_type()?;
            Ok(Type::arrow(domain, codomain))
        } else {
            Ok(domain)
        }
    }

    fn parse_type_atom(&mut self) -> Result<Type, ParseError> {
        let position = self.offset();
        match self.peek().cloned() {
            Some(Tok::TyVar(v)) => {
                self.pos += 1;
                Ok(Type::Var(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.tyvars.contains(&name) {
                    Ok(Type::Var(name))
                } else if self.sorts.contains(&name) {
                    Ok(Type::Sort(name))
                } else {
                    Err(ParseError::UnknownSort { name, position })
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let ty = self.parse_type()?;
                self.expect(Tok::RParen)?;
                Ok(ty)
            }
            _ => Err(self.unexpected("a type")),
        }
    }

    fn parse_term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Lam) => {
                self.pos += 1;
                let var = match self.peek().cloned() {
                    Some(Tok::Ident(v)) => {
                        self.pos += 1;
                        v
                    }
                    _ => return Err(self.unexpected("a variable name")),
                };
                self.expect(Tok::Colon)?;
                let ty = self.parse_type()?;
                self.expect(Tok::Dot)?;
                self.vars.push((var.clone(), ty.clone()));
                let body = self.parse_term();
                self.vars.pop();
                Ok(Term::abs(var, ty, body?))
            }
            Some(Tok::BigLam) => {
                self.pos += 1;
                let var = self.binder_tyvar()?;
                self.expect(Tok::Dot)?;
                self.tyvars.push(var.clone());
                let body = self.parse_term();
                self.tyvars.pop();
                Ok(Term::ty_abs(var, body?))
            }
            _ => {
                let mut term = self.parse_postfix()?;
                while self.starts_atom() {
                    let arg = self.parse_postfix()?;
                    term = Term::app(term, arg);
                }
                // A trailing abstraction extends to the end: `f lam x:e. x`.
                if matches!(self.peek(), Some(Tok::Lam) | Some(Tok::BigLam)) {
                    let arg = self.parse_term()?;
                    term = Term::app(term, arg);
                }
                Ok(term)
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Const(_)) | Some(Tok::LParen))
    }

    fn parse_postfix(&mut self) -> Result<Term, ParseError> {
        let mut term = self.parse_atom()?;
        while self.peek() == Some(&Tok::LBrace) {
            self.pos += 1;
            let ty = self.parse_type()?;
            self.expect(Tok::RBrace)?;
            term = Term::ty_app(term, ty);
        }
        Ok(term)
    }

    fn parse_atom(&mut self) -> Result<Term, ParseError> {
        let position = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some((_, ty)) = self.vars.iter().rev().find(|(n, _)| *n == name) {
                    return Ok(Term::var(name, ty.clone()));
                }
                match self.ctx.and_then(|c| c.variable(&name)) {
                    Some(ty) => Ok(Term::var(name, ty.clone())),
                    None => Err(ParseError::Unbound { name, position }),
                }
            }
            Some(Tok::Const(name)) => {
                self.pos += 1;
                match self.ctx.and_then(|c| c.constant(&name)) {
                    Some(ty) => Ok(Term::constant(name, ty.clone())),
                    None => Err(ParseError::Unbound { name: alloc::format!("#{name}"), position }),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let term = self.parse_term()?;
                self.expect(Tok::RParen)?;
                Ok(term)
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

/// Parses a type over the given sorts.
pub fn parse_type(text: &str, sorts: &SortEnv) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, sorts, None)?;
    let ty = p.parse_type()?;
    p.finish()?;
    Ok(ty)
}

/// Parses a term over `ctx` and checks that it is well typed.
pub fn parse_term(text: &str, ctx: &Context) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, ctx.sorts(), Some(ctx))?;
    let term = p.parse_term()?;
    p.finish()?;
    type_of(ctx, &term)?;
    Ok(term)
}
