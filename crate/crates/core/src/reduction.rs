//! β- and type-β-reduction with step traces.
//!
//! The default strategy is leftmost-outermost. [`normalize_by`] accepts an
//! arbitrary redex selector, which the confluence tests use to pick redexes
//! at random.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kernel::Term;

/// Step budget used when none is given.
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// `(λx. τ) u → τ[u/x]`
    Beta,
    /// `(Λα. τ){U} → τ[U/α]`
    TypeBeta,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Beta => "beta",
            Rule::TypeBeta => "type-beta",
        })
    }
}

/// Child indices from the root: 0 is the function (or body), 1 the argument.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path(pub Vec<usize>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Step {
    pub position: Path,
    pub rule: Rule,
    pub result: Term,
}

/// Every contraction performed by a normalization, in order.
#[derive(Debug, Clone, Default)]
pub struct ReductionTrace {
    pub steps: Vec<Step>,
}

impl ReductionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            writeln!(f, "{} {} at {} ⇒ {}", i + 1, step.rule, step.position, step.result)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("fuel exhausted after {0} steps without reaching a normal form")]
    FuelExhausted(usize),
    #[error("fuel must be at least 1")]
    NoFuel,
    #[error("no redex at {0}")]
    NoRedex(String),
}

fn redex_rule(term: &Term) -> Option<Rule> {
    match term {
        Term::App(f, _) if matches!(**f, Term::Abs { .. }) => Some(Rule::Beta),
        Term::TyApp(f, _) if matches!(**f, Term::TyAbs { .. }) => Some(Rule::TypeBeta),
        _ => None,
    }
}

fn contract(term: &Term) -> Option<(Term, Rule)> {
    match term {
        Term::App(f, arg) => match &**f {
            Term::Abs { var, body, .. } => Some((body.substitute(var, arg), Rule::Beta)),
            _ => None,
        },
        Term::TyApp(f, ty) => match &**f {
            Term::TyAbs { var, body } => Some((body.subst_type(var, ty), Rule::TypeBeta)),
            _ => None,
        },
        _ => None,
    }
}

fn children(term: &Term) -> Vec<&Term> {
    match term {
        Term::Var { .. } | Term::Const { .. } => Vec::new(),
        Term::App(f, a) => alloc::vec![&**f, &**a],
        Term::Abs { body, .. } | Term::TyAbs { body, .. } => alloc::vec![&**body],
        Term::TyApp(f, _) => alloc::vec![&**f],
    }
}

/// Positions of every redex, in leftmost-outermost (pre-order) order.
pub fn redexes(term: &Term) -> Vec<Path> {
    fn walk(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Path>) {
        if redex_rule(t).is_some() {
            out.push(Path(path.clone()));
        }
        for (i, child) in children(t).into_iter().enumerate() {
            path.push(i);
            walk(child, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(term, &mut Vec::new(), &mut out);
    out
}

fn leftmost_outermost(t: &Term, path: &mut Vec<usize>) -> bool {
    if redex_rule(t).is_some() {
        return true;
    }
    for (i, child) in children(t).into_iter().enumerate() {
        path.push(i);
        if leftmost_outermost(child, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Contracts the redex at `path`.
pub fn contract_at(term: &Term, path: &Path) -> Option<(Term, Rule)> {
    fn go(t: &Term, path: &[usize]) -> Option<(Term, Rule)> {
        let Some((&first, rest)) = path.split_first() else {
            return contract(t);
        };
        match (t, first) {
            (Term::App(f, a), 0) => go(f, rest).map(|(f2, r)| (Term::app(f2, (**a).clone()), r)),
            (Term::App(f, a), 1) => go(a, rest).map(|(a2, r)| (Term::app((**f).clone(), a2), r)),
            (Term::Abs { var, ty, body }, 0) => go(body, rest).map(|(b, r)| (Term::abs(var.clone(), ty.clone(), b), r)),
            (Term::TyAbs { var, body }, 0) => go(body, rest).map(|(b, r)| (Term::ty_abs(var.clone(), b), r)),
            (Term::TyApp(f, ty), 0) => go(f, rest).map(|(f2, r)| (Term::ty_app(f2, ty.clone()), r)),
            _ => None,
        }
    }
    go(term, &path.0)
}

/// Contracts the leftmost-outermost redex; `None` on a normal form.
pub fn reduce_step(term: &Term) -> Option<(Term, Path, Rule)> {
    let mut path = Vec::new();
    if !leftmost_outermost(term, &mut path) {
        return None;
    }
    let path = Path(path);
    let (next, rule) = contract_at(term, &path)?;
    Some((next, path, rule))
}

pub fn is_normal(term: &Term) -> bool {
    let mut path = Vec::new();
    !leftmost_outermost(term, &mut path)
}

/// Normal-order normalization within `fuel` contractions.
pub fn normalize(term: &Term, fuel: usize) -> Result<(Term, ReductionTrace), ReductionError> {
    if fuel == 0 {
        return Err(ReductionError::NoFuel);
    }
    let mut trace = ReductionTrace::default();
    let mut current = term.clone();
    while let Some((next, position, rule)) = reduce_step(&current) {
        if trace.steps.len() == fuel {
            return Err(ReductionError::FuelExhausted(fuel));
        }
        trace.steps.push(Step { position, rule, result: next.clone() });
        current = next;
    }
    Ok((current, trace))
}

/// Normalizes contracting, at each step, the redex chosen by `select` from the
/// non-empty list of current redex positions (pre-order).
pub fn normalize_by(
    term: &Term,
    fuel: usize,
    mut select: impl FnMut(&[Path]) -> usize,
) -> Result<(Term, ReductionTrace), ReductionError> {
    if fuel == 0 {
        return Err(ReductionError::NoFuel);
    }
    let mut trace = ReductionTrace::default();
    let mut current = term.clone();
    loop {
        let positions = redexes(&current);
        if positions.is_empty() {
            return Ok((current, trace));
        }
        if trace.steps.len() == fuel {
            return Err(ReductionError::FuelExhausted(fuel));
        }
        let position = positions[select(&positions) % positions.len()].clone();
        let (next, rule) =
            contract_at(&current, &position).ok_or_else(|| ReductionError::NoRedex(alloc::format!("{position}")))?;
        trace.steps.push(Step { position, rule, result: next.clone() });
        current = next;
    }
}
