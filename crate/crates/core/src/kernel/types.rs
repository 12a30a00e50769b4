use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::names::fresh_name;

/// Name of the sort of propositions, always present.
pub const PROP: &str = "t";

/// A type: sorts, type variables, arrows and universal quantification.
///
/// Equality (`==`) is α-equivalence: `Pi 'a. 'a -> t` equals `Pi 'b. 'b -> t`.
#[derive(Clone, Debug)]
pub enum Type {
    Sort(String),
    Var(String),
    Arrow(Box<Type>, Box<Type>),
    Forall(String, Box<Type>),
}

impl Type {
    pub fn sort(name: impl Into<String>) -> Type {
        Type::Sort(name.into())
    }

    /// The sort `t` of propositions.
    pub fn prop() -> Type {
        Type::Sort(PROP.to_string())
    }

    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(domain: Type, codomain: Type) -> Type {
        Type::Arrow(Box::new(domain), Box::new(codomain))
    }

    pub fn forall(var: impl Into<String>, body: Type) -> Type {
        Type::Forall(var.into(), Box::new(body))
    }

    /// `σ → t`, the type of predicates over `σ`.
    pub fn predicate(over: Type) -> Type {
        Type::arrow(over, Type::prop())
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Type::Sort(s) if s == PROP)
    }

    /// Domain and codomain when this is an arrow.
    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(d, c) => Some((d, c)),
            _ => None,
        }
    }

    /// The argument type when this is `σ → t`.
    pub fn predicate_domain(&self) -> Option<&Type> {
        match self {
            Type::Arrow(d, c) if c.is_prop() => Some(d),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn has_free_var(&self, name: &str) -> bool {
        match self {
            Type::Sort(_) => false,
            Type::Var(v) => v == name,
            Type::Arrow(d, c) => d.has_free_var(name) || c.has_free_var(name),
            Type::Forall(v, body) => v != name && body.has_free_var(name),
        }
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Type::Sort(_) => {}
            Type::Var(v) => {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
            Type::Arrow(d, c) => {
                d.collect_free(bound, out);
                c.collect_free(bound, out);
            }
            Type::Forall(v, body) => {
                bound.push(v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Sort names referenced by this type.
    pub fn sorts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_sorts(&mut out);
        out
    }

    fn collect_sorts(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Sort(s) => {
                out.insert(s.clone());
            }
            Type::Var(_) => {}
            Type::Arrow(d, c) => {
                d.collect_sorts(out);
                c.collect_sorts(out);
            }
            Type::Forall(_, body) => body.collect_sorts(out),
        }
    }

    /// Capture-avoiding substitution of `replacement` for the free type
    /// variable `var`.
    pub fn subst(&self, var: &str, replacement: &Type) -> Type {
        if !self.has_free_var(var) {
            return self.clone();
        }
        match self {
            Type::Sort(_) => self.clone(),
            Type::Var(v) => {
                if v == var {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            Type::Arrow(d, c) => Type::arrow(d.subst(var, replacement), c.subst(var, replacement)),
            Type::Forall(v, body) => {
                // v != var here, otherwise var would not be free.
                if replacement.has_free_var(v) {
                    let avoid = replacement.free_vars();
                    let body_vars = body.free_vars();
                    let renamed = fresh_name(v, |n| n == var || avoid.contains(n) || body_vars.contains(n));
                    let body = body.subst(v, &Type::Var(renamed.clone()));
                    Type::forall(renamed, body.subst(var, replacement))
                } else {
                    Type::forall(v.clone(), body.subst(var, replacement))
                }
            }
        }
    }

    /// α-equivalence.
    pub fn alpha_eq(&self, other: &Type) -> bool {
        TypeScope::default().types_eq(self, other)
    }

    /// Renders with `Π`, `→` and bare type variable names.
    pub fn unicode(&self) -> UnicodeType<'_> {
        UnicodeType(self)
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, unicode: bool) -> fmt::Result {
        match self {
            Type::Sort(s) => f.write_str(s),
            Type::Var(v) => {
                if unicode {
                    f.write_str(v)
                } else {
                    write!(f, "'{v}")
                }
            }
            Type::Arrow(d, c) => {
                if matches!(**d, Type::Arrow(..) | Type::Forall(..)) {
                    f.write_str("(")?;
                    d.fmt_with(f, unicode)?;
                    f.write_str(")")?;
                } else {
                    d.fmt_with(f, unicode)?;
                }
                f.write_str(if unicode { "→" } else { " -> " })?;
                c.fmt_with(f, unicode)
            }
            Type::Forall(v, body) => {
                if unicode {
                    write!(f, "Π{v}. ")?;
                } else {
                    write!(f, "Pi '{v}. ")?;
                }
                body.fmt_with(f, unicode)
            }
        }
    }
}

impl PartialEq for Type {
    fn eq(&self, other: &Type) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for Type {}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

/// Unicode rendering of a [`Type`].
#[derive(Debug, Clone, Copy)]
pub struct UnicodeType<'a>(&'a Type);

impl fmt::Display for UnicodeType<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, true)
    }
}

/// Paired stacks of bound type variable names, for comparing under binders.
#[derive(Debug, Default, Clone)]
pub(crate) struct TypeScope {
    left: Vec<String>,
    right: Vec<String>,
}

impl TypeScope {
    pub(crate) fn push(&mut self, left: &str, right: &str) {
        self.left.push(left.to_string());
        self.right.push(right.to_string());
    }

    pub(crate) fn pop(&mut self) {
        self.left.pop();
        self.right.pop();
    }

    pub(crate) fn types_eq(&mut self, a: &Type, b: &Type) -> bool {
        match (a, b) {
            (Type::Sort(x), Type::Sort(y)) => x == y,
            (Type::Var(x), Type::Var(y)) => {
                let i = self.left.iter().rposition(|v| v == x);
                let j = self.right.iter().rposition(|v| v == y);
                match (i, j) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Type::Arrow(d1, c1), Type::Arrow(d2, c2)) => self.types_eq(d1, d2) && self.types_eq(c1, c2),
            (Type::Forall(x, b1), Type::Forall(y, b2)) => {
                self.push(x, y);
                let eq = self.types_eq(b1, b2);
                self.pop();
                eq
            }
            _ => false,
        }
    }
}

/// The declared sorts. `t` is always present and at least one individual
/// sort is required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortEnv {
    individuals: Vec<String>,
}

/// Invalid sort declarations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("sort `{0}` declared twice")]
    Duplicate(String),
    #[error("no individual sort declared")]
    NoIndividualSort,
    #[error("`{0}` is not a valid sort name")]
    InvalidName(String),
}

impl SortEnv {
    /// Builds an environment from individual sort names; `t` is added
    /// implicitly and may also be listed.
    pub fn new<I, S>(individuals: I) -> Result<SortEnv, SortError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in individuals {
            let name = name.into();
            if !super::syntax::is_identifier(&name) {
                return Err(SortError::InvalidName(name));
            }
            if name == PROP {
                continue;
            }
            if out.contains(&name) {
                return Err(SortError::Duplicate(name));
            }
            out.push(name);
        }
        if out.is_empty() {
            return Err(SortError::NoIndividualSort);
        }
        Ok(SortEnv { individuals: out })
    }

    pub fn contains(&self, name: &str) -> bool {
        name == PROP || self.individuals.iter().any(|s| s == name)
    }

    /// Individual sorts in declaration order (excludes `t`).
    pub fn individuals(&self) -> &[String] {
        &self.individuals
    }

    /// First undeclared sort referenced by `ty`, if any.
    pub fn undeclared_in(&self, ty: &Type) -> Option<String> {
        ty.sorts().into_iter().find(|s| !self.contains(s))
    }
}
