//! Lexical entries: a principal term per word plus optional coercion
//! morphisms, each declared rigid or flexible.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment
//! sorts: T P Pl F
//! pred t3 : T -> Pl
//! word Liverpool : T = #lpl
//!   morph Id : T -> T = lam x:T. x   [flexible]
//!   morph t3 : T -> Pl = #t3         [flexible]
//! ```
//!
//! A `#` that starts a line, or is not followed by a name, begins a comment;
//! `#name` is a constant. Constants must be declared with `pred` (the type
//! need not end in `t`). The rigidity flag defaults to flexible.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::kernel::{
    annotated_type, fresh_name, parse_term, parse_type, type_of, Context, ParseError, SortEnv, SortError, Term, Type,
    TypeError,
};
use crate::logic::{self, logical_signature, to_formula, Formula, LogicError, AND, IOTA};
use crate::reduction::{normalize, ReductionError, DEFAULT_FUEL};

/// Leaf markers handled by the composition engine; lexicons may not define them.
pub const RESERVED_WORDS: [&str; 2] = ["AND", "THE"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rigidity {
    Rigid,
    Flexible,
}

impl fmt::Display for Rigidity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rigidity::Rigid => "rigid",
            Rigidity::Flexible => "flexible",
        })
    }
}

/// A coercion `term : source → target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub term: Term,
    pub source: Type,
    pub target: Type,
    pub rigidity: Rigidity,
}

impl Morphism {
    /// The flexible identity on `ty`, used when an entry declares none.
    pub fn implicit_identity(name: impl Into<String>, ty: Type) -> Morphism {
        Morphism {
            name: name.into(),
            term: Term::identity(ty.clone()),
            source: ty.clone(),
            target: ty,
            rigidity: Rigidity::Flexible,
        }
    }

    pub fn is_rigid(&self) -> bool {
        self.rigidity == Rigidity::Rigid
    }

    /// `source = target` and the term is `λx. x`.
    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.term == Term::identity(self.source.clone())
    }
}

/// A word with its principal term and optional morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub principal: Term,
    pub principal_type: Type,
    pub morphisms: Vec<Morphism>,
}

impl LexEntry {
    /// The type morphisms depart from: `σ` when the principal term is a
    /// predicate `σ → t` (a common noun, whose referent is built with `ι`),
    /// the principal type otherwise.
    pub fn referent_type(&self) -> &Type {
        self.principal_type.predicate_domain().unwrap_or(&self.principal_type)
    }

    pub fn morphism(&self, name: &str) -> Option<&Morphism> {
        self.morphisms.iter().find(|m| m.name == name)
    }

    fn declares_identity_on(&self, ty: &Type) -> bool {
        self.morphisms.iter().any(|m| m.is_identity() && m.source == *ty)
    }
}

/// Sorts, non-logical constants and entries.
#[derive(Debug, Clone)]
pub struct Lexicon {
    sorts: SortEnv,
    predicates: Vec<(String, Type)>,
    entries: Vec<LexEntry>,
    index: BTreeMap<String, usize>,
    context: Context,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("no `sorts:` line before first declaration")]
    NoSorts,
    #[error("`sorts:` declared twice")]
    SortsRedeclared,
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("constant `{0}` declared twice or shadows a logical constant")]
    DuplicateConstant(String),
    #[error("word `{0}` defined twice")]
    DuplicateWord(String),
    #[error("`{0}` is reserved")]
    ReservedWord(String),
    #[error("morphism `{name}` declared twice for `{word}`")]
    DuplicateMorphism { word: String, name: String },
    #[error("`morph` outside of a word entry")]
    MorphismOutsideEntry,
    #[error("morphism `{name}` has non-arrow type `{ty}`")]
    NotArrow { name: String, ty: Type },
    #[error("morphism `{name}` departs from `{found}`, but `{word}` denotes `{expected}`")]
    MorphismSource { word: String, name: String, expected: Type, found: Type },
    #[error("`{what}` is declared `{declared}` but its term has type `{actual}`")]
    DeclaredTypeMismatch { what: String, declared: Type, actual: Type },
}

/// A lexicon error with its 1-based line (0 when built programmatically).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct LexiconError {
    pub line: usize,
    pub kind: LexiconErrorKind,
}

impl Lexicon {
    /// An empty lexicon over `sorts`, with the logical signature in scope.
    pub fn new(sorts: SortEnv) -> Lexicon {
        Lexicon {
            context: logical_signature(&sorts),
            sorts,
            predicates: Vec::new(),
            entries: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn sorts(&self) -> &SortEnv {
        &self.sorts
    }

    /// Logical signature plus declared predicates.
    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn predicates(&self) -> &[(String, Type)] {
        &self.predicates
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn entry(&self, word: &str) -> Option<&LexEntry> {
        self.index.get(word).map(|&i| &self.entries[i])
    }

    pub fn declare_predicate(&mut self, name: impl Into<String>, ty: Type) -> Result<(), LexiconErrorKind> {
        let name = name.into();
        match self.context.declare_constant(name.clone(), ty.clone()) {
            Ok(()) => {}
            Err(TypeError::Redeclared(n)) => return Err(LexiconErrorKind::DuplicateConstant(n)),
            Err(e) => return Err(e.into()),
        }
        self.predicates.push((name, ty));
        Ok(())
    }

    /// Validates and adds an entry.
    pub fn add_entry(&mut self, entry: LexEntry) -> Result<(), LexiconErrorKind> {
        if RESERVED_WORDS.contains(&entry.word.as_str()) {
            return Err(LexiconErrorKind::ReservedWord(entry.word));
        }
        if self.index.contains_key(&entry.word) {
            return Err(LexiconErrorKind::DuplicateWord(entry.word));
        }
        self.check_principal(&entry.word, &entry.principal, &entry.principal_type)?;
        let mut entry = entry;
        let morphisms = core::mem::take(&mut entry.morphisms);
        let mut checked = entry;
        for m in morphisms {
            self.check_morphism(&checked, &m)?;
            checked.morphisms.push(m);
        }
        self.index.insert(checked.word.clone(), self.entries.len());
        self.entries.push(checked);
        Ok(())
    }

    fn check_principal(&self, word: &str, principal: &Term, declared: &Type) -> Result<(), LexiconErrorKind> {
        if let Some(sort) = self.sorts.undeclared_in(declared) {
            return Err(TypeError::UnknownSort(sort).into());
        }
        let actual = type_of(&self.context, principal)?;
        if actual != *declared {
            return Err(LexiconErrorKind::DeclaredTypeMismatch {
                what: word.to_string(),
                declared: declared.clone(),
                actual,
            });
        }
        Ok(())
    }

    fn check_morphism(&self, entry: &LexEntry, m: &Morphism) -> Result<(), LexiconErrorKind> {
        if entry.morphism(&m.name).is_some() {
            return Err(LexiconErrorKind::DuplicateMorphism { word: entry.word.clone(), name: m.name.clone() });
        }
        let declared = Type::arrow(m.source.clone(), m.target.clone());
        self.check_principal(&m.name, &m.term, &declared)?;
        if m.source != *entry.referent_type() {
            return Err(LexiconErrorKind::MorphismSource {
                word: entry.word.clone(),
                name: m.name.clone(),
                expected: entry.referent_type().clone(),
                found: m.source.clone(),
            });
        }
        Ok(())
    }
}

/// Splits off a trailing comment: `#` at line start or not followed by a name.
fn strip_comment(line: &str) -> &str {
    if line.trim_start().starts_with('#') {
        return "";
    }
    let bytes: Vec<(usize, char)> = line.char_indices().collect();
    for (k, &(i, c)) in bytes.iter().enumerate() {
        if c == '#' {
            let next = bytes.get(k + 1).map(|&(_, n)| n);
            if !matches!(next, Some(n) if n.is_alphabetic() || n == '_') {
                return &line[..i];
            }
        }
    }
    line
}

fn split_decl(rest: &str) -> Result<(&str, &str), LexiconErrorKind> {
    let (name, ty) = rest.split_once(':').ok_or_else(|| LexiconErrorKind::Syntax("expected `NAME : TYPE`".into()))?;
    let name = name.trim();
    if name.is_empty() || name.contains(char::is_whitespace) || name.contains(['(', ')']) {
        return Err(LexiconErrorKind::Syntax(alloc::format!("invalid name `{name}`")));
    }
    Ok((name, ty.trim()))
}

struct Loader {
    lexicon: Option<Lexicon>,
    pending: Option<LexEntry>,
}

impl Loader {
    fn lexicon(&mut self) -> Result<&mut Lexicon, LexiconErrorKind> {
        self.lexicon.as_mut().ok_or(LexiconErrorKind::NoSorts)
    }

    fn flush(&mut self) -> Result<(), LexiconErrorKind> {
        if let Some(entry) = self.pending.take() {
            self.lexicon()?.add_entry(entry)?;
        }
        Ok(())
    }

    fn line(&mut self, line: &str) -> Result<(), LexiconErrorKind> {
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "sorts:" | "sorts" => {
                let rest = if keyword == "sorts" {
                    rest.strip_prefix(':').ok_or_else(|| LexiconErrorKind::Syntax("expected `sorts:`".into()))?
                } else {
                    rest
                };
                if self.lexicon.is_some() {
                    return Err(LexiconErrorKind::SortsRedeclared);
                }
                self.lexicon = Some(Lexicon::new(SortEnv::new(rest.split_whitespace())?));
                Ok(())
            }
            "pred" => {
                self.flush()?;
                let (name, ty) = split_decl(rest)?;
                let lex = self.lexicon()?;
                let ty = parse_type(ty, lex.sorts())?;
                lex.declare_predicate(name, ty)
            }
            "word" => {
                self.flush()?;
                let (word, rest) = split_decl(rest)?;
                let (ty, term) = rest
                    .split_once('=')
                    .ok_or_else(|| LexiconErrorKind::Syntax("expected `word W : TYPE = TERM`".into()))?;
                let lex = self.lexicon()?;
                let principal_type = parse_type(ty.trim(), lex.sorts())?;
                let principal = parse_term(term.trim(), lex.context())?;
                let entry = LexEntry { word: word.to_string(), principal, principal_type, morphisms: Vec::new() };
                if lex.entry(word).is_some() {
                    return Err(LexiconErrorKind::DuplicateWord(word.to_string()));
                }
                if RESERVED_WORDS.contains(&word) {
                    return Err(LexiconErrorKind::ReservedWord(word.to_string()));
                }
                lex.check_principal(word, &entry.principal, &entry.principal_type)?;
                self.pending = Some(entry);
                Ok(())
            }
            "morph" => {
                let (name, rest) = split_decl(rest)?;
                let (rest, rigidity) = match rest.rfind('[') {
                    Some(i) if rest.trim_end().ends_with(']') => {
                        let flag = rest[i + 1..].trim_end().trim_end_matches(']').trim();
                        let rigidity = match flag {
                            "rigid" => Rigidity::Rigid,
                            "flexible" => Rigidity::Flexible,
                            other => {
                                return Err(LexiconErrorKind::Syntax(alloc::format!("unknown rigidity `{other}`")))
                            }
                        };
                        (&rest[..i], rigidity)
                    }
                    _ => (rest, Rigidity::Flexible),
                };
                let (ty, term) = rest
                    .split_once('=')
                    .ok_or_else(|| LexiconErrorKind::Syntax("expected `morph M : TYPE = TERM`".into()))?;
                let lex = self.lexicon.as_ref().ok_or(LexiconErrorKind::NoSorts)?;
                let ty = parse_type(ty.trim(), lex.sorts())?;
                let (source, target) = match &ty {
                    Type::Arrow(s, t) => ((**s).clone(), (**t).clone()),
                    _ => return Err(LexiconErrorKind::NotArrow { name: name.to_string(), ty }),
                };
                let term = parse_term(term.trim(), lex.context())?;
                let m = Morphism { name: name.to_string(), term, source, target, rigidity };
                let entry = self.pending.as_ref().ok_or(LexiconErrorKind::MorphismOutsideEntry)?;
                lex.check_morphism(entry, &m)?;
                self.pending.as_mut().unwrap().morphisms.push(m);
                Ok(())
            }
            other => Err(LexiconErrorKind::Syntax(alloc::format!("unknown directive `{other}`"))),
        }
    }
}

/// Parses and fully validates a lexicon.
pub fn load_lexicon(text: &str) -> Result<Lexicon, LexiconError> {
    let mut loader = Loader { lexicon: None, pending: None };
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        last = i + 1;
        loader.line(line).map_err(|kind| LexiconError { line: i + 1, kind })?;
    }
    loader.flush().map_err(|kind| LexiconError { line: last, kind })?;
    loader.lexicon.ok_or(LexiconError { line: last, kind: LexiconErrorKind::NoSorts })
}

/// Writes a lexicon back in the text format accepted by [`load_lexicon`].
pub fn serialize_lexicon(lexicon: &Lexicon) -> String {
    let mut out = String::new();
    out.push_str("sorts:");
    for s in lexicon.sorts().individuals() {
        let _ = write!(out, " {s}");
    }
    out.push('\n');
    for (name, ty) in lexicon.predicates() {
        let _ = writeln!(out, "pred {name} : {ty}");
    }
    for entry in lexicon.entries() {
        let _ = writeln!(out, "word {} : {} = {}", entry.word, entry.principal_type, entry.principal);
        for m in &entry.morphisms {
            let _ = writeln!(
                out,
                "  morph {} : {} = {} [{}]",
                m.name,
                Type::arrow(m.source.clone(), m.target.clone()),
                m.term,
                m.rigidity
            );
        }
    }
    out
}

/// The polymorphic conjunction
/// `Λα Λβ λP:α→t λQ:β→t Λξ λx:ξ λf:ξ→α λg:ξ→β. & (P (f x)) (Q (g x))`.
pub fn poly_and() -> Term {
    let (a, b, xi) = (Type::var("a"), Type::var("b"), Type::var("xi"));
    let p = Term::var("P", Type::predicate(a.clone()));
    let q = Term::var("Q", Type::predicate(b.clone()));
    let x = Term::var("x", xi.clone());
    let f = Term::var("f", Type::arrow(xi.clone(), a.clone()));
    let g = Term::var("g", Type::arrow(xi.clone(), b.clone()));
    let body = Term::apps(
        logic::logical_constant(AND),
        [Term::app(p, Term::app(f, x.clone())), Term::app(q, Term::app(g, x))],
    );
    let inner = Term::ty_abs(
        "xi",
        Term::abs(
            "x",
            xi.clone(),
            Term::abs("f", Type::arrow(xi.clone(), a.clone()), Term::abs("g", Type::arrow(xi, b.clone()), body)),
        ),
    );
    Term::ty_abs("a", Term::ty_abs("b", Term::abs("P", Type::predicate(a), Term::abs("Q", Type::predicate(b), inner))))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IotaError {
    #[error("predicate has type `{found}`, expected `{expected}`")]
    SortMismatch { expected: Type, found: Type },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// `λx. M x` → `M` when `x` is not free in `M`, repeatedly at the top.
fn eta_contract(term: Term) -> Term {
    let mut cur = term;
    loop {
        let contracted = match &cur {
            Term::Abs { var, body, .. } => match &**body {
                Term::App(m, arg)
                    if matches!(&**arg, Term::Var { name, .. } if name == var) && !m.has_free_var(var) =>
                {
                    Some((**m).clone())
                }
                _ => None,
            },
            _ => None,
        };
        match contracted {
            Some(next) => cur = next,
            None => return cur,
        }
    }
}

/// The definite description `ι{sort} predicate` and its presupposition
/// `predicate(ι{sort} predicate)`.
///
/// The predicate is normalized and η-contracted first, so the noun
/// `λx:v. assi x` yields `ι{v} assi`.
pub fn iota(sort: &Type, predicate: &Term) -> Result<(Term, Formula), IotaError> {
    let found = annotated_type(predicate)?;
    let expected = Type::predicate(sort.clone());
    if found != expected {
        return Err(IotaError::SortMismatch { expected, found });
    }
    let (pred, _) = normalize(predicate, DEFAULT_FUEL)?;
    let pred = eta_contract(pred);
    let description = Term::app(Term::ty_app(logic::logical_constant(IOTA), sort.clone()), pred.clone());
    let (presupposition, _) = normalize(&Term::app(pred, description.clone()), DEFAULT_FUEL)?;
    Ok((description, to_formula(&presupposition)?))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{word}` denotes `{expected}`, not `{found}`")]
pub struct CandidateError {
    pub word: String,
    pub expected: Type,
    pub found: Type,
}

/// Declared morphisms of `entry` from `from` to `to`, in declaration order;
/// when `from = to` and no identity is declared, a flexible identity is
/// appended.
pub fn candidates(entry: &LexEntry, from: &Type, to: &Type) -> Result<Vec<Morphism>, CandidateError> {
    if from != entry.referent_type() {
        return Err(CandidateError {
            word: entry.word.clone(),
            expected: entry.referent_type().clone(),
            found: from.clone(),
        });
    }
    let mut out: Vec<Morphism> =
        entry.morphisms.iter().filter(|m| m.source == *from && m.target == *to).cloned().collect();
    if from == to && !entry.declares_identity_on(from) {
        let name = fresh_name("Id", |n| entry.morphism(n).is_some());
        out.push(Morphism::implicit_identity(name, from.clone()));
    }
    Ok(out)
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_lexicon(self))
    }
}
