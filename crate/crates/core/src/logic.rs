//! Logical constants, and the reading of closed normal terms of type `t` as
//! many-sorted formulae.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::kernel::{annotated_type, fresh_name, Context, SortEnv, SpineArg, Term, Type, TypeError};
use crate::reduction::is_normal;

pub const AND: &str = "and";
pub const OR: &str = "or";
pub const IMPLIES: &str = "implies";
pub const EXISTS: &str = "exists";
pub const FORALL: &str = "forall";
pub const IOTA: &str = "iota";

/// Names reserved by the logical signature.
pub const LOGICAL_CONSTANTS: [&str; 6] = [AND, OR, IMPLIES, EXISTS, FORALL, IOTA];

/// `t → (t → t)`
pub fn connective_type() -> Type {
    Type::arrow(Type::prop(), Type::arrow(Type::prop(), Type::prop()))
}

/// `Πα. (α → t) → t`
pub fn quantifier_type() -> Type {
    Type::forall("a", Type::arrow(Type::predicate(Type::var("a")), Type::prop()))
}

/// `Πα. (α → t) → α`
pub fn choice_type() -> Type {
    Type::forall("a", Type::arrow(Type::predicate(Type::var("a")), Type::var("a")))
}

pub fn signature_type(name: &str) -> Option<Type> {
    match name {
        AND | OR | IMPLIES => Some(connective_type()),
        EXISTS | FORALL => Some(quantifier_type()),
        IOTA => Some(choice_type()),
        _ => None,
    }
}

/// The constant `name` of the logical signature, typed.
///
/// # Panics
/// If `name` is not one of [`LOGICAL_CONSTANTS`].
pub fn logical_constant(name: &str) -> Term {
    let ty = signature_type(name).expect("not a logical constant");
    Term::constant(name, ty)
}

/// A context holding the connectives, the polymorphic quantifiers and the
/// choice function `ι` over the given sorts.
pub fn logical_signature(sorts: &SortEnv) -> Context {
    let mut ctx = Context::new(sorts.clone());
    for name in LOGICAL_CONSTANTS {
        ctx.declare_constant(name, signature_type(name).unwrap()).expect("fresh context");
    }
    ctx
}

/// A many-sorted formula. Equality is α-equivalence.
#[derive(Debug, Clone)]
pub enum Formula {
    Atom { pred: LogicTerm, args: Vec<LogicTerm> },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists { var: String, sort: Type, body: Box<Formula> },
    Forall { var: String, sort: Type, body: Box<Formula> },
}

/// Terms inside atoms. Variables and constants keep their types so that a
/// formula can be turned back into a λ-term.
#[derive(Debug, Clone)]
pub enum LogicTerm {
    Const {
        name: String,
        ty: Type,
    },
    Var {
        name: String,
        ty: Type,
    },
    Apply {
        head: Box<LogicTerm>,
        args: Vec<LogicTerm>,
    },
    TypeApply {
        term: Box<LogicTerm>,
        ty: Type,
    },
    /// `ι{sort} predicate`
    Description {
        sort: Type,
        predicate: Box<LogicTerm>,
    },
    Lambda {
        var: String,
        ty: Type,
        body: Box<LogicTerm>,
    },
    TypeLambda {
        var: String,
        body: Box<LogicTerm>,
    },
    /// A subterm of type `t` in argument position.
    Proposition(Box<Formula>),
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        formula_to_term(self).alpha_eq(&formula_to_term(other))
    }
}

impl Eq for Formula {}

impl PartialEq for LogicTerm {
    fn eq(&self, other: &LogicTerm) -> bool {
        logic_to_term(self).alpha_eq(&logic_to_term(other))
    }
}

impl Eq for LogicTerm {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogicError {
    #[error("term is open: free variable `{0}`")]
    Open(String),
    #[error("term has type `{0}`, not `t`")]
    NotProposition(Type),
    #[error("term is not in normal form")]
    NotNormal,
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Reads a closed β-normal term of type `t` as a formula.
///
/// `Q{σ} p` with `p` not an abstraction is read as `Q{σ}(λx:σ. p x)`.
pub fn to_formula(term: &Term) -> Result<Formula, LogicError> {
    if let Some((name, _)) = term.free_vars().into_iter().next() {
        return Err(LogicError::Open(name));
    }
    let ty = annotated_type(term)?;
    if !ty.is_prop() {
        return Err(LogicError::NotProposition(ty));
    }
    if !is_normal(term) {
        return Err(LogicError::NotNormal);
    }
    formula_of(term)
}

/// Reads a closed β-normal term of any type as a logic term.
pub fn to_logic_term(term: &Term) -> Result<LogicTerm, LogicError> {
    if let Some((name, _)) = term.free_vars().into_iter().next() {
        return Err(LogicError::Open(name));
    }
    if !is_normal(term) {
        return Err(LogicError::NotNormal);
    }
    logic_term(term)
}

fn formula_of(term: &Term) -> Result<Formula, LogicError> {
    let (head, args) = term.spine();
    if let Term::Const { name, .. } = head {
        match (name.as_str(), args.as_slice()) {
            (AND | OR | IMPLIES, [SpineArg::Term(a), SpineArg::Term(b)]) => {
                let (a, b) = (Box::new(formula_of(a)?), Box::new(formula_of(b)?));
                return Ok(match name.as_str() {
                    AND => Formula::And(a, b),
                    OR => Formula::Or(a, b),
                    _ => Formula::Implies(a, b),
                });
            }
            (EXISTS | FORALL, [SpineArg::Type(sort), SpineArg::Term(p)]) => {
                let (var, body) = match p {
                    Term::Abs { var, body, .. } => (var.clone(), formula_of(body)?),
                    _ => {
                        let mut used = BTreeSet::new();
                        p.all_var_names(&mut used);
                        let var = fresh_name("x", |n| used.contains(n));
                        let applied = Term::app((*p).clone(), Term::var(var.clone(), (*sort).clone()));
                        (var, formula_of(&applied)?)
                    }
                };
                let (sort, body) = ((*sort).clone(), Box::new(body));
                return Ok(if name == EXISTS {
                    Formula::Exists { var, sort, body }
                } else {
                    Formula::Forall { var, sort, body }
                });
            }
            _ => {}
        }
    }
    // Atom: everything up to the last type argument forms the predicate.
    let split = args.iter().rposition(|a| matches!(a, SpineArg::Type(_))).map_or(0, |i| i + 1);
    let pred = fold_spine(head, &args[..split])?;
    let args = args[split..]
        .iter()
        .map(|a| match a {
            SpineArg::Term(t) => logic_term(t),
            SpineArg::Type(_) => unreachable!("split after the last type argument"),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Formula::Atom { pred, args })
}

fn fold_spine(head: &Term, args: &[SpineArg<'_>]) -> Result<LogicTerm, LogicError> {
    let (mut cur, rest) = match (head, args) {
        (Term::Const { name, .. }, [SpineArg::Type(sort), SpineArg::Term(p), rest @ ..]) if name == IOTA => {
            let d = LogicTerm::Description { sort: (*sort).clone(), predicate: Box::new(logic_term(p)?) };
            (d, rest)
        }
        _ => (logic_leaf(head)?, args),
    };
    let mut pending: Vec<LogicTerm> = Vec::new();
    for arg in rest {
        match arg {
            SpineArg::Term(t) => pending.push(logic_term(t)?),
            SpineArg::Type(ty) => {
                if !pending.is_empty() {
                    cur = LogicTerm::Apply { head: Box::new(cur), args: core::mem::take(&mut pending) };
                }
                cur = LogicTerm::TypeApply { term: Box::new(cur), ty: (*ty).clone() };
            }
        }
    }
    if !pending.is_empty() {
        cur = LogicTerm::Apply { head: Box::new(cur), args: pending };
    }
    Ok(cur)
}

fn logic_leaf(term: &Term) -> Result<LogicTerm, LogicError> {
    Ok(match term {
        Term::Const { name, ty } => LogicTerm::Const { name: name.clone(), ty: ty.clone() },
        Term::Var { name, ty } => LogicTerm::Var { name: name.clone(), ty: ty.clone() },
        Term::Abs { var, ty, body } => {
            LogicTerm::Lambda { var: var.clone(), ty: ty.clone(), body: Box::new(logic_term(body)?) }
        }
        Term::TyAbs { var, body } => LogicTerm::TypeLambda { var: var.clone(), body: Box::new(logic_term(body)?) },
        Term::App(..) | Term::TyApp(..) => {
            let (head, args) = term.spine();
            fold_spine(head, &args)?
        }
    })
}

fn logic_term(term: &Term) -> Result<LogicTerm, LogicError> {
    if annotated_type(term)?.is_prop() {
        return Ok(LogicTerm::Proposition(Box::new(formula_of(term)?)));
    }
    logic_leaf(term)
}

/// Rebuilds the λ-term a formula stands for.
pub fn formula_to_term(formula: &Formula) -> Term {
    let binary = |name: &str, a: &Formula, b: &Formula| {
        Term::apps(logical_constant(name), [formula_to_term(a), formula_to_term(b)])
    };
    let quantified = |name: &str, var: &str, sort: &Type, body: &Formula| {
        Term::app(
            Term::ty_app(logical_constant(name), sort.clone()),
            Term::abs(var, sort.clone(), formula_to_term(body)),
        )
    };
    match formula {
        Formula::Atom { pred, args } => Term::apps(logic_to_term(pred), args.iter().map(logic_to_term)),
        Formula::And(a, b) => binary(AND, a, b),
        Formula::Or(a, b) => binary(OR, a, b),
        Formula::Implies(a, b) => binary(IMPLIES, a, b),
        Formula::Exists { var, sort, body } => quantified(EXISTS, var, sort, body),
        Formula::Forall { var, sort, body } => quantified(FORALL, var, sort, body),
    }
}

fn logic_to_term(t: &LogicTerm) -> Term {
    match t {
        LogicTerm::Const { name, ty } => Term::constant(name.clone(), ty.clone()),
        LogicTerm::Var { name, ty } => Term::var(name.clone(), ty.clone()),
        LogicTerm::Apply { head, args } => Term::apps(logic_to_term(head), args.iter().map(logic_to_term)),
        LogicTerm::TypeApply { term, ty } => Term::ty_app(logic_to_term(term), ty.clone()),
        LogicTerm::Description { sort, predicate } => {
            Term::app(Term::ty_app(logical_constant(IOTA), sort.clone()), logic_to_term(predicate))
        }
        LogicTerm::Lambda { var, ty, body } => Term::abs(var.clone(), ty.clone(), logic_to_term(body)),
        LogicTerm::TypeLambda { var, body } => Term::ty_abs(var.clone(), logic_to_term(body)),
        LogicTerm::Proposition(f) => formula_to_term(f),
    }
}

/// Output notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    Unicode,
    #[default]
    Ascii,
}

/// Renders a formula. Quantifiers bind weakest, then `=>`, `|`, `&`; binary
/// connectives nest to the right without parentheses. A bound variable that
/// would shadow an enclosing binder or clash with a constant is renamed.
pub fn render_formula(formula: &Formula, style: Style) -> String {
    let mut taken = BTreeSet::new();
    formula.collect_names(&mut taken);
    let mut r = Renderer { style, scope: Vec::new(), constants: taken, out: String::new() };
    r.formula(formula);
    r.out
}

/// Renders a term appearing inside a formula.
pub fn render_logic_term(term: &LogicTerm, style: Style) -> String {
    let mut taken = BTreeSet::new();
    term.collect_names(&mut taken);
    let mut r = Renderer { style, scope: Vec::new(), constants: taken, out: String::new() };
    r.term(term);
    r.out
}

impl Formula {
    /// Constant names and free variable names, which binders must not reuse.
    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { pred, args } => {
                pred.collect_names(out);
                args.iter().for_each(|a| a.collect_names(out));
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => body.collect_names(out),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Exists { .. } | Formula::Forall { .. } => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Atom { .. } => 4,
        }
    }
}

impl LogicTerm {
    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            LogicTerm::Const { name, .. } => {
                out.insert(name.clone());
            }
            LogicTerm::Var { .. } => {}
            LogicTerm::Apply { head, args } => {
                head.collect_names(out);
                args.iter().for_each(|a| a.collect_names(out));
            }
            LogicTerm::TypeApply { term, .. } => term.collect_names(out),
            LogicTerm::Description { predicate, .. } => predicate.collect_names(out),
            LogicTerm::Lambda { body, .. } | LogicTerm::TypeLambda { body, .. } => body.collect_names(out),
            LogicTerm::Proposition(f) => f.collect_names(out),
        }
    }
}

struct Renderer {
    style: Style,
    /// (original, displayed) names of enclosing binders.
    scope: Vec<(String, String)>,
    constants: BTreeSet<String>,
    out: String,
}

impl Renderer {
    fn unicode(&self) -> bool {
        self.style == Style::Unicode
    }

    fn ty(&mut self, ty: &Type) {
        if self.unicode() {
            let _ = write!(self.out, "{}", ty.unicode());
        } else {
            let _ = write!(self.out, "{ty}");
        }
    }

    fn bind(&mut self, var: &str) -> String {
        let scope = &self.scope;
        let constants = &self.constants;
        let shown = fresh_name(var, |n| constants.contains(n) || scope.iter().any(|(_, shown)| shown == n));
        // keep the original spelling when it is free to use
        let shown =
            if !constants.contains(var) && !scope.iter().any(|(_, s)| s == var) { var.to_string() } else { shown };
        self.scope.push((var.to_string(), shown.clone()));
        shown
    }

    fn var_name(&self, var: &str) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(orig, _)| orig == var)
            .map_or_else(|| var.to_string(), |(_, shown)| shown.clone())
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Atom { pred, args } => {
                self.head(pred);
                if !args.is_empty() {
                    self.args(args);
                }
            }
            Formula::And(a, b) => self.binary(f, a, b, if self.unicode() { " ∧ " } else { " & " }),
            Formula::Or(a, b) => self.binary(f, a, b, if self.unicode() { " ∨ " } else { " | " }),
            Formula::Implies(a, b) => self.binary(f, a, b, if self.unicode() { " ⇒ " } else { " => " }),
            Formula::Exists { var, sort, body } | Formula::Forall { var, sort, body } => {
                let q = match (f, self.unicode()) {
                    (Formula::Exists { .. }, true) => "∃",
                    (Formula::Exists { .. }, false) => "exists ",
                    (_, true) => "∀",
                    (_, false) => "forall ",
                };
                self.out.push_str(q);
                let shown = self.bind(var);
                self.out.push_str(&shown);
                self.out.push(':');
                self.ty(sort);
                self.out.push_str(". ");
                self.formula(body);
                self.scope.pop();
            }
        }
    }

    fn binary(&mut self, parent: &Formula, left: &Formula, right: &Formula, op: &str) {
        let p = parent.precedence();
        let lp = left.precedence();
        let rp = right.precedence();
        self.operand(left, lp == 0 || lp <= p);
        self.out.push_str(op);
        self.operand(right, rp == 0 || rp < p);
    }

    fn operand(&mut self, f: &Formula, parens: bool) {
        if parens {
            self.out.push('(');
            self.formula(f);
            self.out.push(')');
        } else {
            self.formula(f);
        }
    }

    fn args(&mut self, args: &[LogicTerm]) {
        self.out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.term(a);
        }
        self.out.push(')');
    }

    fn head(&mut self, t: &LogicTerm) {
        if matches!(t, LogicTerm::Lambda { .. } | LogicTerm::TypeLambda { .. } | LogicTerm::Proposition(_)) {
            self.out.push('(');
            self.term(t);
            self.out.push(')');
        } else {
            self.term(t);
        }
    }

    fn term(&mut self, t: &LogicTerm) {
        match t {
            LogicTerm::Const { name, .. } => {
                let shown = if self.unicode() {
                    match name.as_str() {
                        AND => "∧",
                        OR => "∨",
                        IMPLIES => "⇒",
                        EXISTS => "∃",
                        FORALL => "∀",
                        IOTA => "ι",
                        other => other,
                    }
                } else {
                    name.as_str()
                };
                self.out.push_str(shown);
            }
            LogicTerm::Var { name, .. } => {
                let shown = self.var_name(name);
                self.out.push_str(&shown);
            }
            LogicTerm::Apply { head, args } => {
                self.head(head);
                self.args(args);
            }
            LogicTerm::TypeApply { term, ty } => {
                self.head(term);
                self.out.push('{');
                self.ty(ty);
                self.out.push('}');
            }
            LogicTerm::Description { sort, predicate } => {
                self.out.push_str(if self.unicode() { "ι[" } else { "iota[" });
                self.ty(sort);
                self.out.push_str("](");
                self.term(predicate);
                self.out.push(')');
            }
            LogicTerm::Lambda { var, ty, body } => {
                self.out.push_str(if self.unicode() { "λ" } else { "lam " });
                let shown = self.bind(var);
                self.out.push_str(&shown);
                self.out.push(':');
                self.ty(ty);
                self.out.push_str(". ");
                self.term(body);
                self.scope.pop();
            }
            LogicTerm::TypeLambda { var, body } => {
                if self.unicode() {
                    let _ = write!(self.out, "Λ{var}. ");
                } else {
                    let _ = write!(self.out, "Lam '{var}. ");
                }
                self.term(body);
            }
            LogicTerm::Proposition(f) => self.formula(f),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self, Style::Ascii))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_term;

    fn ctx() -> Context {
        let sorts = SortEnv::new(["e"]).unwrap();
        let mut ctx = logical_signature(&sorts);
        let e = Type::sort("e");
        ctx.declare_constant("club", Type::predicate(e.clone())).unwrap();
        ctx.declare_constant("P", Type::predicate(e.clone())).unwrap();
        ctx.declare_constant("Q", Type::predicate(e.clone())).unwrap();
        ctx.declare_constant("a", e.clone()).unwrap();
        ctx.declare_constant("b", e.clone()).unwrap();
        ctx.declare_constant("Leeds", e.clone()).unwrap();
        ctx.declare_constant("defeated", Type::arrow(e.clone(), Type::predicate(e))).unwrap();
        ctx
    }

    fn formula(src: &str) -> Formula {
        to_formula(&parse_term(src, &ctx()).unwrap()).unwrap()
    }

    #[test]
    fn signature_types() {
        let sig = logical_signature(&SortEnv::new(["e"]).unwrap());
        assert_eq!(sig.constant(AND).unwrap().to_string(), "t -> t -> t");
        assert_eq!(sig.constant(EXISTS).unwrap().to_string(), "Pi 'a. ('a -> t) -> t");
        assert_eq!(sig.constant(IOTA).unwrap().to_string(), "Pi 'a. ('a -> t) -> 'a");
    }

    #[test]
    fn leeds_formula() {
        let f = formula("#exists{e} (lam x:e. #and (#club x) (#defeated x #Leeds))");
        assert_eq!(render_formula(&f, Style::Ascii), "exists x:e. club(x) & defeated(x, Leeds)");
        assert_eq!(render_formula(&f, Style::Unicode), "∃x:e. club(x) ∧ defeated(x, Leeds)");
    }

    #[test]
    fn connective_of_atoms() {
        let f = formula("#and (#P #a) (#Q #b)");
        assert_eq!(f.to_string(), "P(a) & Q(b)");
    }

    #[test]
    fn eta_expansion_on_demand() {
        let short = formula("#exists{e} #club");
        let long = formula("#exists{e} (lam x:e. #club x)");
        assert_eq!(short, long);
        assert_eq!(short.to_string(), "exists x:e. club(x)");
    }

    #[test]
    fn shadowed_binders_render_distinctly() {
        let f = formula("#exists{e} (lam x:e. #exists{e} (lam x:e. #defeated x x))");
        assert_eq!(f.to_string(), "exists x:e. exists x1:e. defeated(x1, x1)");
        let g = formula("#exists{e} (lam x:e. #exists{e} (lam y:e. #defeated x y))");
        assert_eq!(g.to_string(), "exists x:e. exists y:e. defeated(x, y)");
    }

    #[test]
    fn binders_avoid_constant_names() {
        let f = formula("#exists{e} (lam a:e. #defeated a #a)");
        assert_eq!(f.to_string(), "exists a1:e. defeated(a1, a)");
    }

    #[test]
    fn precedence_and_parentheses() {
        let f = formula("#implies (#or (#P #a) (#Q #a)) (#and (#and (#P #a) (#P #b)) (#Q #b))");
        assert_eq!(f.to_string(), "P(a) | Q(a) => (P(a) & P(b)) & Q(b)");
        let g = formula("#and (#exists{e} #P) (#Q #a)");
        assert_eq!(g.to_string(), "(exists x:e. P(x)) & Q(a)");
    }

    #[test]
    fn descriptions() {
        let f = formula("#club (#iota{e} #club)");
        assert_eq!(f.to_string(), "club(iota[e](club))");
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = ctx();
        let open = Term::app(Term::constant("club", Type::predicate(Type::sort("e"))), Term::var("x", Type::sort("e")));
        assert!(matches!(to_formula(&open), Err(LogicError::Open(_))));
        let not_t = parse_term("#a", &c).unwrap();
        assert!(matches!(to_formula(&not_t), Err(LogicError::NotProposition(_))));
        let redex = parse_term("(lam x:e. #club x) #a", &c).unwrap();
        assert_eq!(to_formula(&redex), Err(LogicError::NotNormal));
    }

    #[test]
    fn formula_back_to_term() {
        let src = "#exists{e} (lam x:e. #and (#club x) (#defeated x #Leeds))";
        let t = parse_term(src, &ctx()).unwrap();
        assert_eq!(formula_to_term(&to_formula(&t).unwrap()), t);
    }
}
