use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::names::fresh_name;
use super::types::{Type, TypeScope};

/// Church-style terms: every variable and constant carries its type.
///
/// Variables are identified by name; the type checker enforces that every
/// occurrence agrees with its binder. Equality (`==`) is α-equivalence.
#[derive(Clone, Debug)]
pub enum Term {
    Var { name: String, ty: Type },
    Const { name: String, ty: Type },
    App(Box<Term>, Box<Term>),
    Abs { var: String, ty: Type, body: Box<Term> },
    TyApp(Box<Term>, Type),
    TyAbs { var: String, body: Box<Term> },
}

impl Term {
    pub fn var(name: impl Into<String>, ty: Type) -> Term {
        Term::Var { name: name.into(), ty }
    }

    pub fn constant(name: impl Into<String>, ty: Type) -> Term {
        Term::Const { name: name.into(), ty }
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application of `fun` to every argument in turn.
    pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn abs(var: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Abs { var: var.into(), ty, body: Box::new(body) }
    }

    pub fn ty_app(fun: Term, arg: Type) -> Term {
        Term::TyApp(Box::new(fun), arg)
    }

    pub fn ty_abs(var: impl Into<String>, body: Term) -> Term {
        Term::TyAbs { var: var.into(), body: Box::new(body) }
    }

    /// `λx:σ. x`
    pub fn identity(ty: Type) -> Term {
        Term::abs("x", ty.clone(), Term::var("x", ty))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Term::Abs { var, body, .. }
            if matches!(&**body, Term::Var { name, .. } if name == var))
    }

    /// Free term variables with the type annotation of their first occurrence.
    pub fn free_vars(&self) -> BTreeMap<String, Type> {
        let mut out = BTreeMap::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeMap<String, Type>) {
        match self {
            Term::Var { name, ty } => {
                if !bound.contains(&name.as_str()) && !out.contains_key(name) {
                    out.insert(name.clone(), ty.clone());
                }
            }
            Term::Const { .. } => {}
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Abs { var, body, .. } => {
                bound.push(var);
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::TyApp(f, _) => f.collect_free(bound, out),
            Term::TyAbs { body, .. } => body.collect_free(bound, out),
        }
    }

    pub fn has_free_var(&self, name: &str) -> bool {
        match self {
            Term::Var { name: n, .. } => n == name,
            Term::Const { .. } => false,
            Term::App(f, a) => f.has_free_var(name) || a.has_free_var(name),
            Term::Abs { var, body, .. } => var != name && body.has_free_var(name),
            Term::TyApp(f, _) => f.has_free_var(name),
            Term::TyAbs { body, .. } => body.has_free_var(name),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Free type variables occurring in annotations.
    pub fn free_type_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_tyvars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_tyvars<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut add = |ty: &Type, bound: &Vec<&'a str>| {
            for v in ty.free_vars() {
                if !bound.contains(&v.as_str()) {
                    out.insert(v);
                }
            }
        };
        match self {
            Term::Var { ty, .. } | Term::Const { ty, .. } => add(ty, bound),
            Term::App(f, a) => {
                f.collect_free_tyvars(bound, out);
                a.collect_free_tyvars(bound, out);
            }
            Term::Abs { ty, body, .. } => {
                add(ty, bound);
                body.collect_free_tyvars(bound, out);
            }
            Term::TyApp(f, ty) => {
                add(ty, bound);
                f.collect_free_tyvars(bound, out);
            }
            Term::TyAbs { var, body } => {
                bound.push(var);
                body.collect_free_tyvars(bound, out);
                bound.pop();
            }
        }
    }

    fn has_free_type_var(&self, name: &str) -> bool {
        match self {
            Term::Var { ty, .. } | Term::Const { ty, .. } => ty.has_free_var(name),
            Term::App(f, a) => f.has_free_type_var(name) || a.has_free_type_var(name),
            Term::Abs { ty, body, .. } => ty.has_free_var(name) || body.has_free_type_var(name),
            Term::TyApp(f, ty) => ty.has_free_var(name) || f.has_free_type_var(name),
            Term::TyAbs { var, body } => var != name && body.has_free_type_var(name),
        }
    }

    /// Names of every term variable occurring anywhere, bound or free.
    pub(crate) fn all_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var { name, .. } => {
                out.insert(name.clone());
            }
            Term::Const { .. } => {}
            Term::App(f, a) => {
                f.all_var_names(out);
                a.all_var_names(out);
            }
            Term::Abs { var, body, .. } => {
                out.insert(var.clone());
                body.all_var_names(out);
            }
            Term::TyApp(f, _) | Term::TyAbs { body: f, .. } => f.all_var_names(out),
        }
    }

    /// Constant names with their annotated types, first occurrence wins.
    pub fn constants(&self) -> BTreeMap<String, Type> {
        let mut out = BTreeMap::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeMap<String, Type>) {
        match self {
            Term::Var { .. } => {}
            Term::Const { name, ty } => {
                out.entry(name.clone()).or_insert_with(|| ty.clone());
            }
            Term::App(f, a) => {
                f.collect_constants(out);
                a.collect_constants(out);
            }
            Term::Abs { body, .. } | Term::TyAbs { body, .. } => body.collect_constants(out),
            Term::TyApp(f, _) => f.collect_constants(out),
        }
    }

    /// Capture-avoiding substitution of `value` for the free variable `var`.
    ///
    /// No type check is made; see [`super::subst_term`] for the checked form.
    pub fn substitute(&self, var: &str, value: &Term) -> Term {
        if !self.has_free_var(var) {
            return self.clone();
        }
        match self {
            Term::Var { name, .. } => {
                if name == var {
                    value.clone()
                } else {
                    self.clone()
                }
            }
            Term::Const { .. } => self.clone(),
            Term::App(f, a) => Term::app(f.substitute(var, value), a.substitute(var, value)),
            Term::Abs { var: y, ty, body } => {
                if value.has_free_var(y) {
                    let value_fv = value.free_vars();
                    let body_fv = body.free_vars();
                    let z = fresh_name(y, |n| n == var || value_fv.contains_key(n) || body_fv.contains_key(n));
                    let renamed = body.substitute(y, &Term::var(z.clone(), ty.clone()));
                    Term::abs(z, ty.clone(), renamed.substitute(var, value))
                } else {
                    Term::abs(y.clone(), ty.clone(), body.substitute(var, value))
                }
            }
            Term::TyApp(f, ty) => Term::ty_app(f.substitute(var, value), ty.clone()),
            Term::TyAbs { var: a, body } => {
                if value.has_free_type_var(a) {
                    let value_ftv = value.free_type_vars();
                    let body_ftv = body.free_type_vars();
                    let b = fresh_name(a, |n| value_ftv.contains(n) || body_ftv.contains(n));
                    let renamed = body.subst_type(a, &Type::Var(b.clone()));
                    Term::ty_abs(b, renamed.substitute(var, value))
                } else {
                    Term::ty_abs(a.clone(), body.substitute(var, value))
                }
            }
        }
    }

    /// Capture-avoiding substitution of `replacement` for the free type
    /// variable `var` in every annotation.
    pub fn subst_type(&self, var: &str, replacement: &Type) -> Term {
        if !self.has_free_type_var(var) {
            return self.clone();
        }
        match self {
            Term::Var { name, ty } => Term::var(name.clone(), ty.subst(var, replacement)),
            Term::Const { name, ty } => Term::constant(name.clone(), ty.subst(var, replacement)),
            Term::App(f, a) => Term::app(f.subst_type(var, replacement), a.subst_type(var, replacement)),
            Term::Abs { var: x, ty, body } => {
                Term::abs(x.clone(), ty.subst(var, replacement), body.subst_type(var, replacement))
            }
            Term::TyApp(f, ty) => Term::ty_app(f.subst_type(var, replacement), ty.subst(var, replacement)),
            Term::TyAbs { var: a, body } => {
                if replacement.has_free_var(a) {
                    let avoid = replacement.free_vars();
                    let body_ftv = body.free_type_vars();
                    let b = fresh_name(a, |n| n == var || avoid.contains(n) || body_ftv.contains(n));
                    let renamed = body.subst_type(a, &Type::Var(b.clone()));
                    Term::ty_abs(b, renamed.subst_type(var, replacement))
                } else {
                    Term::ty_abs(a.clone(), body.subst_type(var, replacement))
                }
            }
        }
    }

    /// α-equivalence over both term and type binders.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        AlphaScope::default().terms_eq(self, other)
    }

    /// Decomposes `h {T} a b ...` into its head and the argument spine.
    pub fn spine(&self) -> (&Term, Vec<SpineArg<'_>>) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Term::App(f, a) => {
                    args.push(SpineArg::Term(a));
                    cur = f;
                }
                Term::TyApp(f, ty) => {
                    args.push(SpineArg::Type(ty));
                    cur = f;
                }
                _ => break,
            }
        }
        args.reverse();
        (cur, args)
    }

    /// Renders with λ, Λ, Π, → and superscript binder types.
    pub fn unicode(&self) -> UnicodeTerm<'_> {
        UnicodeTerm(self)
    }
}

/// One argument in an application spine.
#[derive(Debug, Clone, Copy)]
pub enum SpineArg<'a> {
    Term(&'a Term),
    Type(&'a Type),
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for Term {}

#[derive(Default)]
struct AlphaScope {
    left: Vec<String>,
    right: Vec<String>,
    types: TypeScope,
}

impl AlphaScope {
    fn terms_eq(&mut self, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Var { name: x, ty: tx }, Term::Var { name: y, ty: ty_ }) => {
                let i = self.left.iter().rposition(|v| v == x);
                let j = self.right.iter().rposition(|v| v == y);
                let same = match (i, j) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                };
                same && self.types.types_eq(tx, ty_)
            }
            (Term::Const { name: x, ty: tx }, Term::Const { name: y, ty: ty_ }) => {
                x == y && self.types.types_eq(tx, ty_)
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => self.terms_eq(f1, f2) && self.terms_eq(a1, a2),
            (Term::Abs { var: x, ty: tx, body: b1 }, Term::Abs { var: y, ty: ty_, body: b2 }) => {
                if !self.types.types_eq(tx, ty_) {
                    return false;
                }
                self.left.push(x.clone());
                self.right.push(y.clone());
                let eq = self.terms_eq(b1, b2);
                self.left.pop();
                self.right.pop();
                eq
            }
            (Term::TyApp(f1, t1), Term::TyApp(f2, t2)) => self.types.types_eq(t1, t2) && self.terms_eq(f1, f2),
            (Term::TyAbs { var: x, body: b1 }, Term::TyAbs { var: y, body: b2 }) => {
                self.types.push(x, y);
                let eq = self.terms_eq(b1, b2);
                self.types.pop();
                eq
            }
            _ => false,
        }
    }
}

// Rendering. The ASCII form (Display) re-parses to an α-equivalent term.

fn needs_parens_as_fun(t: &Term) -> bool {
    matches!(t, Term::Abs { .. } | Term::TyAbs { .. })
}

fn needs_parens_as_arg(t: &Term) -> bool {
    matches!(t, Term::App(..) | Term::Abs { .. } | Term::TyAbs { .. })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { name, .. } => f.write_str(name),
            Term::Const { name, .. } => write!(f, "#{name}"),
            Term::App(fun, arg) => {
                if needs_parens_as_fun(fun) {
                    write!(f, "({fun})")?;
                } else {
                    write!(f, "{fun}")?;
                }
                if needs_parens_as_arg(arg) {
                    write!(f, " ({arg})")
                } else {
                    write!(f, " {arg}")
                }
            }
            Term::Abs { var, ty, body } => {
                if matches!(ty, Type::Forall(..)) {
                    write!(f, "lam {var}:({ty}). {body}")
                } else {
                    write!(f, "lam {var}:{ty}. {body}")
                }
            }
            Term::TyApp(fun, ty) => {
                if matches!(**fun, Term::App(..) | Term::Abs { .. } | Term::TyAbs { .. }) {
                    write!(f, "({fun}){{{ty}}}")
                } else {
                    write!(f, "{fun}{{{ty}}}")
                }
            }
            Term::TyAbs { var, body } => write!(f, "Lam '{var}. {body}"),
        }
    }
}

/// Unicode rendering of a [`Term`].
#[derive(Debug, Clone, Copy)]
pub struct UnicodeTerm<'a>(&'a Term);

fn unicode_const(name: &str) -> &str {
    match name {
        "and" => "&",
        "or" => "∨",
        "implies" => "⇒",
        "exists" => "∃",
        "forall" => "∀",
        "iota" => "ι",
        other => other,
    }
}

fn superscript(ty: &Type) -> String {
    match ty {
        Type::Sort(_) | Type::Var(_) => ty.unicode().to_string(),
        _ => alloc::format!("{{{}}}", ty.unicode()),
    }
}

impl fmt::Display for UnicodeTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Term::Var { name, .. } => f.write_str(name),
            Term::Const { name, .. } => f.write_str(unicode_const(name)),
            Term::App(fun, arg) => {
                if needs_parens_as_fun(fun) {
                    write!(f, "({})", fun.unicode())?;
                } else {
                    write!(f, "{}", fun.unicode())?;
                }
                if needs_parens_as_arg(arg) {
                    write!(f, "({})", arg.unicode())
                } else {
                    write!(f, " {}", arg.unicode())
                }
            }
            Term::Abs { var, ty, body } => {
                write!(f, "λ{var}^{}. {}", superscript(ty), body.unicode())
            }
            Term::TyApp(fun, ty) => {
                if matches!(**fun, Term::App(..) | Term::Abs { .. } | Term::TyAbs { .. }) {
                    write!(f, "({}){{{}}}", fun.unicode(), ty.unicode())
                } else {
                    write!(f, "{}{{{}}}", fun.unicode(), ty.unicode())
                }
            }
            Term::TyAbs { var, body } => write!(f, "Λ{var}. {}", body.unicode()),
        }
    }
}
