use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::tree::{ParseTree, TreePath};
use crate::kernel::{annotated_type, Term, Type, TypeError};
use crate::lexicon::{candidates, iota, poly_and, LexEntry, Lexicon, Morphism, RESERVED_WORDS};
use crate::logic::{to_formula, Formula, LogicError};
use crate::reduction::{normalize, ReductionError, ReductionTrace, DEFAULT_FUEL};

const AND_WORD: &str = "AND";
const THE_WORD: &str = "THE";

/// A morphism inserted for the argument at `path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsedMorphism {
    pub word: String,
    pub path: TreePath,
    pub morphism: String,
}

impl fmt::Display for UsedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}@{}", self.word, self.morphism, self.path)
    }
}

/// One resolved sense assignment.
#[derive(Debug, Clone)]
pub struct Reading {
    /// β-normal, closed.
    pub term: Term,
    pub ty: Type,
    /// Present when `ty` is `t`.
    pub formula: Option<Formula>,
    pub used_morphisms: Vec<UsedMorphism>,
    pub presuppositions: Vec<Formula>,
    /// Normalization of the composed term.
    pub trace: ReductionTrace,
}

impl Reading {
    pub fn morphism_names(&self) -> Vec<&str> {
        self.used_morphisms.iter().map(|m| m.morphism.as_str()).collect()
    }
}

/// A morphism tuple refused at a copredication node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub path: TreePath,
    /// (word, morphism) per conjunct.
    pub assignment: Vec<(String, String)>,
    pub constraint: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Felicitous,
    Infelicitous,
    TypeError,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Felicitous => "FELICITOUS",
            Status::Infelicitous => "INFELICITOUS",
            Status::TypeError => "TYPE-ERROR",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    pub readings: Vec<Reading>,
    pub rejection_log: Vec<Rejection>,
    pub notes: Vec<String>,
    /// Set when `status` is [`Status::TypeError`].
    pub error: Option<ComposeError>,
}

impl Verdict {
    /// Distinct constraint messages of the rejection log, in order.
    pub fn reasons(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rejection_log {
            if !out.contains(&r.constraint.as_str()) {
                out.push(&r.constraint);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("type error at {path}: {message}")]
    TypeError { path: TreePath, message: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoercionError {
    #[error("`{0}` is not a function type")]
    NotAFunction(Type),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Matches `pattern` against `target`, binding the inference variables `vars`.
fn match_type(
    pattern: &Type,
    target: &Type,
    vars: &[String],
    subst: &mut BTreeMap<String, Type>,
    bound: &mut Vec<(String, String)>,
) -> bool {
    match (pattern, target) {
        (Type::Var(p), _) if vars.contains(p) && !bound.iter().any(|(l, _)| l == p) => {
            if bound.iter().any(|(_, r)| target.has_free_var(r)) {
                return false;
            }
            match subst.get(p) {
                Some(u) => u == target,
                None => {
                    subst.insert(p.clone(), target.clone());
                    true
                }
            }
        }
        (Type::Var(p), Type::Var(q)) => {
            let i = bound.iter().rposition(|(l, _)| l == p);
            let j = bound.iter().rposition(|(_, r)| r == q);
            match (i, j) {
                (Some(i), Some(j)) => i == j,
                (None, None) => p == q,
                _ => false,
            }
        }
        (Type::Sort(a), Type::Sort(b)) => a == b,
        (Type::Arrow(d1, c1), Type::Arrow(d2, c2)) => {
            match_type(d1, d2, vars, subst, bound) && match_type(c1, c2, vars, subst, bound)
        }
        (Type::Forall(x, b1), Type::Forall(y, b2)) => {
            bound.push((x.clone(), y.clone()));
            let ok = match_type(b1, b2, vars, subst, bound);
            bound.pop();
            ok
        }
        _ => false,
    }
}

/// Applies `fun` to `arg`, or, when the argument type does not fit, to `m arg`
/// for every morphism `m` of `arg_entry` reaching the expected domain.
///
/// A polymorphic `fun` is instantiated by matching its domain against the
/// argument (or morphism target) type. A direct fit reports the entry's
/// declared identity, if any, as the morphism used.
pub fn apply_with_coercion(
    fun: &Term,
    arg: &Term,
    arg_entry: Option<&LexEntry>,
) -> Result<Vec<(Term, Option<Morphism>)>, CoercionError> {
    let fun_ty = annotated_type(fun)?;
    let arg_ty = annotated_type(arg)?;
    let entry = arg_entry.filter(|e| *e.referent_type() == arg_ty);

    let mut vars = Vec::new();
    let mut body = &fun_ty;
    while let Type::Forall(v, b) = body {
        vars.push(v.clone());
        body = b;
    }
    let Type::Arrow(domain, _) = body else {
        return Err(CoercionError::NotAFunction(fun_ty));
    };
    let instantiate = |target: &Type| -> Option<Term> {
        if vars.is_empty() {
            return (**domain == *target).then(|| fun.clone());
        }
        let mut subst = BTreeMap::new();
        if !match_type(domain, target, &vars, &mut subst, &mut Vec::new()) {
            return None;
        }
        let mut t = fun.clone();
        for v in &vars {
            t = Term::ty_app(t, subst.get(v)?.clone());
        }
        Some(t)
    };

    if let Some(f) = instantiate(&arg_ty) {
        let identity = entry.and_then(|e| e.morphisms.iter().find(|m| m.is_identity() && m.source == arg_ty).cloned());
        return Ok(vec![(Term::app(f, arg.clone()), identity)]);
    }
    let Some(entry) = entry else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    if vars.is_empty() {
        let ms = candidates(entry, &arg_ty, domain).unwrap_or_default();
        for m in ms {
            out.push((Term::app(fun.clone(), Term::app(m.term.clone(), arg.clone())), Some(m)));
        }
    } else {
        for m in entry.morphisms.iter().filter(|m| m.source == arg_ty) {
            if let Some(f) = instantiate(&m.target) {
                out.push((Term::app(f, Term::app(m.term.clone(), arg.clone())), Some(m.clone())));
            }
        }
    }
    Ok(out)
}

/// Binary structure of a copredication group; leaves are conjuncts in order.
#[derive(Debug, Clone)]
enum Shape {
    Leaf,
    And(Box<Shape>, Box<Shape>),
}

/// `((AND p q))` shapes: returns the group shape and its conjunct subtrees.
fn and_group<'t>(tree: &'t ParseTree, path: &TreePath) -> Option<(Shape, Vec<(&'t ParseTree, TreePath)>)> {
    let ParseTree::Node(inner, right) = tree else { return None };
    let ParseTree::Node(marker, left) = &**inner else { return None };
    if !marker.is_leaf(AND_WORD) {
        return None;
    }
    let mut leaves = Vec::new();
    let side = |t: &'t ParseTree, p: TreePath, leaves: &mut Vec<_>| match and_group(t, &p) {
        Some((shape, sub)) => {
            leaves.extend(sub);
            shape
        }
        None => {
            leaves.push((t, p));
            Shape::Leaf
        }
    };
    let l = side(left, path.child(0).child(1), &mut leaves);
    let r = side(right, path.child(1), &mut leaves);
    Some((Shape::And(Box::new(l), Box::new(r)), leaves))
}

/// The first pair of distinct morphisms where one is rigid: (rigid, other).
fn rigidity_violation<'m>(tuple: &[&'m Morphism]) -> Option<(&'m Morphism, &'m Morphism)> {
    for (i, a) in tuple.iter().enumerate() {
        for b in &tuple[i + 1..] {
            if a.name != b.name && (a.is_rigid() || b.is_rigid()) {
                return Some(if a.is_rigid() { (a, b) } else { (b, a) });
            }
        }
    }
    None
}

/// Every choice of one element per list, first list most significant.
fn tuples<T>(lists: &[Vec<T>]) -> Vec<Vec<&T>> {
    let mut out: Vec<Vec<&T>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list {
                let mut t = prefix.clone();
                t.push(item);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Builds `Λand{α}{β} P Q {ξ} x f g`, nesting for inner groups.
fn build_and(
    shape: &Shape,
    next: &mut usize,
    preds: &[(&Term, &Type)],
    morphs: &[&Morphism],
    xi: &Type,
    x: Term,
) -> Term {
    let Shape::And(l, r) = shape else { unreachable!("called on a conjunction") };
    let side = |s: &Shape, next: &mut usize| -> (Term, Type, Term) {
        match s {
            Shape::Leaf => {
                let i = *next;
                *next += 1;
                (preds[i].0.clone(), preds[i].1.clone(), morphs[i].term.clone())
            }
            Shape::And(..) => {
                let body = build_and(s, next, preds, morphs, xi, Term::var("y", xi.clone()));
                (Term::abs("y", xi.clone(), body), xi.clone(), Term::identity(xi.clone()))
            }
        }
    };
    let (pl, al, fl) = side(l, next);
    let (pr, ar, fr) = side(r, next);
    let conj = Term::apps(Term::ty_app(Term::ty_app(poly_and(), al), ar), [pl, pr]);
    Term::apps(Term::ty_app(conj, xi.clone()), [x, fl, fr])
}

struct Group<'a> {
    shape: &'a Shape,
    /// Conjunct terms with their domains.
    preds: Vec<(&'a Term, &'a Type)>,
    arg: &'a Term,
    arg_ty: &'a Type,
    entry: Option<&'a LexEntry>,
    word: String,
    path: TreePath,
}

/// Enumerates admissible morphism tuples for one group; fails when some
/// conjunct has no candidate morphism at all.
fn copredicate(g: &Group<'_>, log: &mut Vec<Rejection>) -> Result<Vec<(Term, Vec<Morphism>)>, String> {
    let cands: Vec<Vec<Morphism>> = g
        .preds
        .iter()
        .map(|(_, domain)| match g.entry {
            Some(e) => candidates(e, g.arg_ty, domain).unwrap_or_default(),
            None if *domain == g.arg_ty => vec![Morphism::implicit_identity("Id", g.arg_ty.clone())],
            None => Vec::new(),
        })
        .collect();
    if let Some(i) = cands.iter().position(Vec::is_empty) {
        return Err(format!("no morphism from `{}` to `{}` for {}", g.arg_ty, g.preds[i].1, g.word));
    }
    let mut out = Vec::new();
    for tuple in tuples(&cands) {
        if let Some((rigid, other)) = rigidity_violation(&tuple) {
            log.push(Rejection {
                path: g.path.clone(),
                assignment: tuple.iter().map(|m| (g.word.clone(), m.name.clone())).collect(),
                constraint: format!("rigid {} excludes {}", rigid.name, other.name),
            });
            continue;
        }
        let term = build_and(g.shape, &mut 0, &g.preds, &tuple, g.arg_ty, g.arg.clone());
        out.push((term, tuple.into_iter().cloned().collect()));
    }
    Ok(out)
}

/// A composed subterm before normalization.
#[derive(Debug, Clone)]
struct Partial {
    term: Term,
    ty: Type,
    /// Entry whose morphisms may coerce this term.
    entry: Option<usize>,
    used: Vec<UsedMorphism>,
    presuppositions: Vec<Formula>,
}

struct Engine<'l> {
    lex: &'l Lexicon,
    index: BTreeMap<&'l str, usize>,
    log: Vec<Rejection>,
    notes: Vec<String>,
    error: Option<ComposeError>,
    groups: usize,
}

impl<'l> Engine<'l> {
    fn new(lex: &'l Lexicon) -> Engine<'l> {
        let index = lex.entries().iter().enumerate().map(|(i, e)| (e.word.as_str(), i)).collect();
        Engine { lex, index, log: Vec::new(), notes: Vec::new(), error: None, groups: 0 }
    }

    fn fail(&mut self, path: &TreePath, message: String) {
        if self.error.is_none() {
            self.error = Some(ComposeError::TypeError { path: path.clone(), message });
        }
    }

    fn entry(&self, idx: Option<usize>) -> Option<&'l LexEntry> {
        idx.map(|i| &self.lex.entries()[i])
    }

    fn node(&mut self, tree: &ParseTree, path: &TreePath) -> Result<Vec<Partial>, ComposeError> {
        match tree {
            ParseTree::Leaf(word) => {
                if RESERVED_WORDS.contains(&word.as_str()) {
                    self.fail(path, format!("`{word}` needs arguments"));
                    return Ok(Vec::new());
                }
                let idx = *self.index.get(word.as_str()).ok_or_else(|| ComposeError::UnknownWord(word.clone()))?;
                let entry = &self.lex.entries()[idx];
                Ok(vec![Partial {
                    term: entry.principal.clone(),
                    ty: entry.principal_type.clone(),
                    entry: Some(idx),
                    used: Vec::new(),
                    presuppositions: Vec::new(),
                }])
            }
            ParseTree::Node(f, a) => {
                if f.is_leaf(THE_WORD) {
                    return self.definite(a, path);
                }
                if let Some((shape, leaves)) = and_group(f, &path.child(0)) {
                    return self.copredication(&shape, &leaves, a, path);
                }
                if f.is_leaf(AND_WORD) || and_group(tree, path).is_some() {
                    self.fail(path, "copredication needs two conjuncts and a shared argument".into());
                    return Ok(Vec::new());
                }
                self.application(f, a, path)
            }
        }
    }

    fn definite(&mut self, noun: &ParseTree, path: &TreePath) -> Result<Vec<Partial>, ComposeError> {
        let mut out = Vec::new();
        for p in self.node(noun, &path.child(1))? {
            let Some(sort) = p.ty.predicate_domain() else {
                self.fail(path, format!("`THE` expects a predicate, found `{}`", p.ty));
                continue;
            };
            match iota(sort, &p.term) {
                Ok((term, presupposition)) => {
                    let mut presuppositions = p.presuppositions;
                    presuppositions.push(presupposition);
                    out.push(Partial { term, ty: sort.clone(), entry: p.entry, used: p.used, presuppositions });
                }
                Err(e) => self.fail(path, e.to_string()),
            }
        }
        Ok(out)
    }

    fn application(&mut self, f: &ParseTree, a: &ParseTree, path: &TreePath) -> Result<Vec<Partial>, ComposeError> {
        let funs = self.node(f, &path.child(0))?;
        let args = self.node(a, &path.child(1))?;
        let mut out = Vec::new();
        for fun in &funs {
            for arg in &args {
                let entry = self.entry(arg.entry);
                match apply_with_coercion(&fun.term, &arg.term, entry) {
                    Ok(results) if results.is_empty() => {
                        let via = entry.map_or(String::new(), |e| format!(" (no morphism of `{}` fits)", e.word));
                        self.fail(path, format!("cannot apply `{}` to `{}`{via}", fun.ty, arg.ty));
                    }
                    Ok(results) => {
                        for (term, m) in results {
                            let ty = match annotated_type(&term) {
                                Ok(ty) => ty,
                                Err(e) => {
                                    self.fail(path, e.to_string());
                                    continue;
                                }
                            };
                            let mut used = fun.used.clone();
                            used.extend(arg.used.iter().cloned());
                            if let (Some(m), Some(e)) = (m, entry) {
                                used.push(UsedMorphism { word: e.word.clone(), path: path.child(1), morphism: m.name });
                            }
                            let mut presuppositions = fun.presuppositions.clone();
                            presuppositions.extend(arg.presuppositions.iter().cloned());
                            out.push(Partial { term, ty, entry: None, used, presuppositions });
                        }
                    }
                    Err(e) => self.fail(path, e.to_string()),
                }
            }
        }
        Ok(out)
    }

    fn copredication(
        &mut self,
        shape: &Shape,
        leaves: &[(&ParseTree, TreePath)],
        a: &ParseTree,
        path: &TreePath,
    ) -> Result<Vec<Partial>, ComposeError> {
        self.groups += 1;
        if leaves.len() > 2 {
            self.notes.push(format!(
                "{} conjuncts share the argument at {}: rigidity checked across every pair",
                leaves.len(),
                path.child(1)
            ));
        }
        let arg_path = path.child(1);
        let args = self.node(a, &arg_path)?;
        let mut conjuncts = Vec::new();
        for (tree, p) in leaves {
            conjuncts.push(self.node(tree, p)?);
        }
        let mut out = Vec::new();
        for arg in &args {
            let entry = self.entry(arg.entry).filter(|e| *e.referent_type() == arg.ty);
            let word = entry.map_or_else(|| a.to_string(), |e| e.word.clone());
            'combo: for combo in tuples(&conjuncts) {
                let mut domains = Vec::new();
                for (c, (_, p)) in combo.iter().zip(leaves) {
                    match c.ty.predicate_domain() {
                        Some(d) => domains.push(d),
                        None => {
                            self.fail(p, format!("conjunct of type `{}` is not a predicate", c.ty));
                            continue 'combo;
                        }
                    }
                }
                let group = Group {
                    shape,
                    preds: combo.iter().zip(&domains).map(|(c, d)| (&c.term, *d)).collect(),
                    arg: &arg.term,
                    arg_ty: &arg.ty,
                    entry,
                    word: word.clone(),
                    path: path.clone(),
                };
                let built = match copredicate(&group, &mut self.log) {
                    Ok(built) => built,
                    Err(message) => {
                        self.fail(path, message);
                        continue;
                    }
                };
                for (term, morphisms) in built {
                    let mut used = arg.used.clone();
                    let mut presuppositions = arg.presuppositions.clone();
                    for c in &combo {
                        used.extend(c.used.iter().cloned());
                        presuppositions.extend(c.presuppositions.iter().cloned());
                    }
                    if let Some(e) = entry {
                        used.extend(morphisms.into_iter().map(|m| UsedMorphism {
                            word: e.word.clone(),
                            path: arg_path.clone(),
                            morphism: m.name,
                        }));
                    }
                    out.push(Partial { term, ty: Type::prop(), entry: None, used, presuppositions });
                }
            }
        }
        Ok(out)
    }
}

fn finish(parts: Vec<Partial>, fuel: usize) -> Result<Vec<Reading>, ComposeError> {
    let mut readings: Vec<Reading> = Vec::new();
    for p in parts {
        let (term, trace) = normalize(&p.term, fuel)?;
        if readings.iter().any(|r| r.term == term) {
            continue;
        }
        let formula = if p.ty.is_prop() { Some(to_formula(&term)?) } else { None };
        let mut presuppositions: Vec<Formula> = Vec::new();
        for f in p.presuppositions {
            if !presuppositions.contains(&f) {
                presuppositions.push(f);
            }
        }
        readings.push(Reading { term, ty: p.ty, formula, used_morphisms: p.used, presuppositions, trace });
    }
    Ok(readings)
}

/// Composes `tree` and classifies the outcome.
pub fn felicity_with_fuel(tree: &ParseTree, lex: &Lexicon, fuel: usize) -> Verdict {
    let mut engine = Engine::new(lex);
    let result = engine.node(tree, &TreePath::default()).and_then(|parts| finish(parts, fuel));
    let mut notes = core::mem::take(&mut engine.notes);
    if engine.groups > 1 {
        notes.push(format!("{} copredication nodes: rigidity checked independently per node", engine.groups));
    }
    let (status, readings, error) = match result {
        Err(e) => (Status::TypeError, Vec::new(), Some(e)),
        Ok(readings) if !readings.is_empty() => (Status::Felicitous, readings, None),
        Ok(_) if !engine.log.is_empty() => (Status::Infelicitous, Vec::new(), None),
        Ok(_) => {
            let error = engine.error.take().unwrap_or(ComposeError::TypeError {
                path: TreePath::default(),
                message: "no well-typed reading".into(),
            });
            (Status::TypeError, Vec::new(), Some(error))
        }
    };
    Verdict { status, readings, rejection_log: engine.log, notes, error }
}

pub fn felicity(tree: &ParseTree, lex: &Lexicon) -> Verdict {
    felicity_with_fuel(tree, lex, DEFAULT_FUEL)
}

/// All readings of `tree`, in enumeration order, deduplicated up to
/// α-equivalence. An infelicitous tree has no readings; a tree with no
/// well-typed assignment is an error.
pub fn compose_with_fuel(tree: &ParseTree, lex: &Lexicon, fuel: usize) -> Result<Vec<Reading>, ComposeError> {
    let verdict = felicity_with_fuel(tree, lex, fuel);
    match verdict.error {
        Some(e) => Err(e),
        None => Ok(verdict.readings),
    }
}

pub fn compose(tree: &ParseTree, lex: &Lexicon) -> Result<Vec<Reading>, ComposeError> {
    compose_with_fuel(tree, lex, DEFAULT_FUEL)
}

/// Readings of `P ∧ Q` over `shared`, one per admissible pair of morphisms of
/// `entry`.
pub fn resolve_copredication(p: &Term, q: &Term, shared: &Term, entry: &LexEntry) -> Vec<Reading> {
    let (Ok(pt), Ok(qt), Ok(xi)) = (annotated_type(p), annotated_type(q), annotated_type(shared)) else {
        return Vec::new();
    };
    let (Some(alpha), Some(beta)) = (pt.predicate_domain(), qt.predicate_domain()) else {
        return Vec::new();
    };
    let shape = Shape::And(Box::new(Shape::Leaf), Box::new(Shape::Leaf));
    let group = Group {
        shape: &shape,
        preds: vec![(p, alpha), (q, beta)],
        arg: shared,
        arg_ty: &xi,
        entry: Some(entry).filter(|e| *e.referent_type() == xi),
        word: entry.word.clone(),
        path: TreePath::default(),
    };
    let mut log = Vec::new();
    let mut readings: Vec<Reading> = Vec::new();
    for (term, morphisms) in copredicate(&group, &mut log).unwrap_or_default() {
        let Ok((term, trace)) = normalize(&term, DEFAULT_FUEL) else { continue };
        if readings.iter().any(|r| r.term == term) {
            continue;
        }
        let used = morphisms
            .into_iter()
            .map(|m| UsedMorphism { word: entry.word.clone(), path: TreePath::default(), morphism: m.name })
            .collect();
        readings.push(Reading {
            formula: to_formula(&term).ok(),
            term,
            ty: Type::prop(),
            used_morphisms: used,
            presuppositions: Vec::new(),
            trace,
        });
    }
    readings
}
