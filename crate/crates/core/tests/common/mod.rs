#![allow(dead_code)]

use mgl_core::{Context, SortEnv, Term, Type};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A closed well-typed term with the context it was built in.
#[derive(Debug, Clone)]
pub struct Sample {
    pub ctx: Context,
    pub term: Term,
    pub ty: Type,
}

/// Type-directed generator of well-typed terms rich in β and type-β redexes.
///
/// Term binders are drawn from `x`, `y`, `z` so that shadowing and capture
/// situations arise; binders of type-variable type and type binders get
/// unique names.
pub struct TermGen<'r> {
    rng: &'r mut ChaCha8Rng,
    sorts: Vec<String>,
    counter: usize,
    max_depth: usize,
}

fn leaf_const_name(ty: &Type) -> Option<String> {
    match ty {
        Type::Sort(s) => Some(format!("c_{s}")),
        Type::Arrow(d, c) => match (&**d, &**c) {
            (Type::Sort(a), _) if a == "t" => None,
            (Type::Sort(a), Type::Sort(b)) if b == "t" => Some(format!("p_{a}")),
            (Type::Sort(a), Type::Sort(b)) => Some(format!("f_{a}_{b}")),
            _ => None,
        },
        _ => None,
    }
}

pub fn sample_context(sorts: &[String]) -> Context {
    let env = SortEnv::new(sorts.iter().cloned()).unwrap();
    let mut ctx = Context::new(env);
    ctx.declare_constant("c_t", Type::prop()).unwrap();
    for a in sorts {
        ctx.declare_constant(format!("c_{a}"), Type::sort(a.clone())).unwrap();
        ctx.declare_constant(format!("p_{a}"), Type::predicate(Type::sort(a.clone()))).unwrap();
        for b in sorts {
            ctx.declare_constant(format!("f_{a}_{b}"), Type::arrow(Type::sort(a.clone()), Type::sort(b.clone())))
                .unwrap();
        }
    }
    ctx
}

impl<'r> TermGen<'r> {
    pub fn new(rng: &'r mut ChaCha8Rng, max_depth: usize) -> TermGen<'r> {
        let n = rng.gen_range(1..=4);
        let sorts = (0..n).map(|i| format!("s{i}")).collect();
        TermGen { rng, sorts, counter: 0, max_depth }
    }

    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    fn fresh(&mut self, stem: &str) -> String {
        self.counter += 1;
        format!("{stem}{}", self.counter)
    }

    fn base(&mut self, tyvars: &[String]) -> Type {
        let k = self.rng.gen_range(0..self.sorts.len() + 1 + tyvars.len());
        if k < self.sorts.len() {
            Type::sort(self.sorts[k].clone())
        } else if k == self.sorts.len() {
            Type::prop()
        } else {
            Type::var(tyvars[k - self.sorts.len() - 1].clone())
        }
    }

    /// A small monomorphic-or-open type over the sorts and `tyvars`.
    pub fn random_type(&mut self, tyvars: &[String], depth: usize) -> Type {
        if depth == 0 || self.rng.gen_bool(0.55) {
            return self.base(tyvars);
        }
        if self.rng.gen_bool(0.1) {
            let a = self.fresh("a");
            let mut inner = tyvars.to_vec();
            inner.push(a.clone());
            let dom = Type::var(a.clone());
            let cod = if self.rng.gen_bool(0.5) { Type::var(a.clone()) } else { self.random_type(&inner, 0) };
            return Type::forall(a, Type::arrow(dom, cod));
        }
        let d = self.random_type(tyvars, depth - 1);
        let c = self.random_type(tyvars, depth - 1);
        Type::arrow(d, c)
    }

    fn binder(&mut self, ty: &Type) -> String {
        if ty.free_vars().is_empty() {
            ["x", "y", "z"].choose(self.rng).unwrap().to_string()
        } else {
            self.fresh("u")
        }
    }

    /// A closed well-typed term with β and type-β redexes at the root.
    pub fn sample(&mut self) -> Sample {
        let ty = self.random_type(&[], 2);
        let depth = self.rng.gen_range(1..=self.max_depth);
        let term = self.redex(&ty, depth, &mut Vec::new(), &mut Vec::new(), true);
        Sample { ctx: sample_context(&self.sorts), term, ty }
    }

    fn lookup(env: &[(String, Type)], ty: &Type) -> Vec<String> {
        let mut seen: Vec<&str> = Vec::new();
        let mut out = Vec::new();
        for (name, t) in env.iter().rev() {
            if seen.contains(&name.as_str()) {
                continue;
            }
            seen.push(name);
            if t == ty {
                out.push(name.clone());
            }
        }
        out
    }

    pub fn term(&mut self, ty: &Type, depth: usize, env: &mut Vec<(String, Type)>, tyvars: &mut Vec<String>) -> Term {
        if depth == 0 {
            return self.leaf(ty, env, tyvars);
        }
        match self.rng.gen_range(0..8) {
            0 | 1 => self.redex(ty, depth, env, tyvars, false),
            2 => {
                let a = self.random_type(tyvars, 1);
                let f = self.term(&Type::arrow(a.clone(), ty.clone()), depth - 1, env, tyvars);
                let x = self.term(&a, depth - 1, env, tyvars);
                Term::app(f, x)
            }
            3 | 4 => self.structural(ty, depth, env, tyvars),
            _ => self.leaf(ty, env, tyvars),
        }
    }

    /// `(λx.b) a`, `(Λα.λf.λx. f x){σ} F X` or `(Λα.λu:α. u-ish){τ} M`.
    fn redex(
        &mut self,
        ty: &Type,
        depth: usize,
        env: &mut Vec<(String, Type)>,
        tyvars: &mut Vec<String>,
        both: bool,
    ) -> Term {
        let d = depth.saturating_sub(1);
        let kind = if both { self.rng.gen_range(1..3) } else { self.rng.gen_range(0..3) };
        match kind {
            0 => {
                let a = self.random_type(tyvars, 1);
                let x = self.binder(&a);
                env.push((x.clone(), a.clone()));
                let body = self.term(ty, d, env, tyvars);
                env.pop();
                let arg = self.term(&a, d, env, tyvars);
                Term::app(Term::abs(x, a, body), arg)
            }
            1 => {
                let a = self.random_type(tyvars, 1);
                let alpha = self.fresh("a");
                let va = Type::var(alpha.clone());
                let fty = Type::arrow(va.clone(), ty.clone());
                let apply = Term::ty_abs(
                    alpha,
                    Term::abs(
                        "f",
                        fty.clone(),
                        Term::abs("x", va.clone(), Term::app(Term::var("f", fty), Term::var("x", va))),
                    ),
                );
                let f = self.term(&Type::arrow(a.clone(), ty.clone()), d, env, tyvars);
                let x = self.term(&a, d, env, tyvars);
                Term::apps(Term::ty_app(apply, a), [f, x])
            }
            _ => {
                let alpha = self.fresh("a");
                let va = Type::var(alpha.clone());
                let u = self.fresh("u");
                env.push((u.clone(), va.clone()));
                tyvars.push(alpha.clone());
                let body = self.term(&va, d, env, tyvars);
                tyvars.pop();
                env.pop();
                let poly = Term::ty_abs(alpha, Term::abs(u, va, body));
                let arg = self.term(ty, d, env, tyvars);
                Term::app(Term::ty_app(poly, ty.clone()), arg)
            }
        }
    }

    fn structural(&mut self, ty: &Type, depth: usize, env: &mut Vec<(String, Type)>, tyvars: &mut Vec<String>) -> Term {
        match ty {
            Type::Arrow(d, c) => {
                let x = self.binder(d);
                env.push((x.clone(), (**d).clone()));
                let body = self.term(c, depth.saturating_sub(1), env, tyvars);
                env.pop();
                Term::abs(x, (**d).clone(), body)
            }
            Type::Forall(a, body) => {
                let fresh = self.fresh("a");
                let va = Type::var(fresh.clone());
                let body = body.subst(a, &va);
                let inner = match &body {
                    // Bind the inhabitant together with the type variable so
                    // that `fresh` is always usable.
                    Type::Arrow(d, c) if **d == va => {
                        let u = self.fresh("u");
                        env.push((u.clone(), va.clone()));
                        tyvars.push(fresh.clone());
                        let inner = self.term(c, depth.saturating_sub(1), env, tyvars);
                        tyvars.pop();
                        env.pop();
                        Term::abs(u, va, inner)
                    }
                    _ => self.term(&body, depth.saturating_sub(1), env, tyvars),
                };
                Term::ty_abs(fresh, inner)
            }
            Type::Sort(s) if s == "t" => {
                let a = self.sorts.choose(self.rng).unwrap().clone();
                let p = Term::constant(format!("p_{a}"), Type::predicate(Type::sort(a.clone())));
                Term::app(p, self.term(&Type::sort(a), depth.saturating_sub(1), env, tyvars))
            }
            Type::Sort(b) => {
                let a = self.sorts.choose(self.rng).unwrap().clone();
                let f = Term::constant(format!("f_{a}_{b}"), Type::arrow(Type::sort(a.clone()), ty.clone()));
                Term::app(f, self.term(&Type::sort(a), depth.saturating_sub(1), env, tyvars))
            }
            Type::Var(_) => self.leaf(ty, env, tyvars),
        }
    }

    fn leaf(&mut self, ty: &Type, env: &mut Vec<(String, Type)>, tyvars: &mut Vec<String>) -> Term {
        let vars = Self::lookup(env, ty);
        let konst = leaf_const_name(ty);
        if !vars.is_empty() && (konst.is_none() || self.rng.gen_bool(0.6)) {
            return Term::var(vars.choose(self.rng).unwrap().clone(), ty.clone());
        }
        if let Some(name) = konst {
            return Term::constant(name, ty.clone());
        }
        match ty {
            Type::Arrow(..) | Type::Forall(..) => self.structural(ty, 0, env, tyvars),
            _ => panic!("no inhabitant of {ty} in scope"),
        }
    }
}

pub fn random_sample(seed: u64, max_depth: usize) -> Sample {
    let mut r = rng(seed);
    TermGen::new(&mut r, max_depth).sample()
}

/// Depth of the term tree.
pub fn depth(term: &Term) -> usize {
    match term {
        Term::Var { .. } | Term::Const { .. } => 0,
        Term::App(f, a) => 1 + depth(f).max(depth(a)),
        Term::Abs { body, .. } | Term::TyAbs { body, .. } => 1 + depth(body),
        Term::TyApp(f, _) => 1 + depth(f),
    }
}

/// A random copredication instance: a lexicon text, a tree, and everything the
/// brute-force oracle needs.
#[derive(Debug, Clone)]
pub struct Instance {
    pub lexicon: String,
    pub tree: String,
    pub xi: String,
    /// Target sort of each conjunct, left to right.
    pub conjuncts: Vec<(String, String)>,
    /// (name, target, rigid, is_identity)
    pub morphisms: Vec<(String, String, bool, bool)>,
    /// Nesting: 0 = binary, 1 = right-nested, 2 = left-nested.
    pub shape: u8,
    /// Argument is `(THE n)` over a noun.
    pub definite: bool,
}

pub fn random_instance(r: &mut ChaCha8Rng) -> Instance {
    let xi = "xi".to_string();
    let facets: Vec<String> = (0..r.gen_range(1..=3)).map(|i| format!("a{i}")).collect();
    let mut targets = vec![xi.clone()];
    targets.extend(facets.iter().cloned());
    let definite = r.gen_bool(0.5);

    let mut morphisms = Vec::new();
    let mut has_identity = false;
    for i in 0..r.gen_range(0..=4) {
        let target = targets.choose(r).unwrap().clone();
        let rigid = r.gen_bool(0.35);
        let identity = target == xi && !has_identity && r.gen_bool(0.6);
        has_identity |= identity;
        let name = if identity { "Id".to_string() } else { format!("m{i}") };
        morphisms.push((name, target, rigid, identity));
    }

    let shape = r.gen_range(0..3u8);
    let n = if shape == 0 { 2 } else { 3 };
    let mut reachable = vec![xi.clone()];
    reachable.extend(morphisms.iter().map(|m| m.1.clone()));
    let conjuncts: Vec<(String, String)> = (0..n)
        .map(|i| {
            let pool = if r.gen_bool(0.85) { &reachable } else { &targets };
            (format!("p{i}"), pool.choose(r).unwrap().clone())
        })
        .collect();

    let mut lx = String::new();
    lx.push_str(&format!("sorts: {xi} {}\n", facets.join(" ")));
    lx.push_str(&format!("pred c : {}\n", if definite { format!("{xi} -> t") } else { xi.clone() }));
    for (name, target, _, identity) in &morphisms {
        if !identity {
            lx.push_str(&format!("pred {name} : {xi} -> {target}\n"));
        }
    }
    for (p, target) in &conjuncts {
        lx.push_str(&format!("pred {p} : {target} -> t\n"));
    }
    if definite {
        lx.push_str(&format!("word n : {xi} -> t = lam x:{xi}. #c x\n"));
    } else {
        lx.push_str(&format!("word n : {xi} = #c\n"));
    }
    for (name, target, rigid, identity) in &morphisms {
        let flag = if *rigid { "rigid" } else { "flexible" };
        let term = if *identity { format!("lam x:{xi}. x") } else { format!("#{name}") };
        lx.push_str(&format!("  morph {name} : {xi} -> {target} = {term} [{flag}]\n"));
    }
    for (p, target) in &conjuncts {
        lx.push_str(&format!("word {p} : {target} -> t = #{p}\n"));
    }

    let arg = if definite { "(THE n)" } else { "n" };
    let tree = match shape {
        0 => format!("((AND p0 p1) {arg})"),
        1 => format!("((AND p0 (AND p1 p2)) {arg})"),
        _ => format!("((AND (AND p0 p1) p2) {arg})"),
    };
    Instance { lexicon: lx, tree, xi, conjuncts, morphisms, shape, definite }
}

/// What exhaustive enumeration predicts for an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    /// Some conjunct has no morphism reaching its domain.
    Untypable,
    /// Candidates exist, every tuple violates rigidity.
    Rejected,
    /// Expected readings as ascii formulae, one per admissible tuple, with
    /// the morphism names used.
    Readings(Vec<(String, Vec<String>)>),
}

/// Brute force: every tuple of (declared or implicit-identity) morphisms that
/// type-checks, filtered by "equal or both flexible" on every pair.
pub fn oracle(inst: &Instance) -> Expected {
    let has_identity = inst.morphisms.iter().any(|m| m.3);
    let cands: Vec<Vec<(String, bool, bool)>> = inst
        .conjuncts
        .iter()
        .map(|(_, dom)| {
            let mut c: Vec<(String, bool, bool)> =
                inst.morphisms.iter().filter(|m| &m.1 == dom).map(|m| (m.0.clone(), m.2, m.3)).collect();
            if dom == &inst.xi && !has_identity {
                c.push(("Id".to_string(), false, true));
            }
            c
        })
        .collect();
    if cands.iter().any(Vec::is_empty) {
        return Expected::Untypable;
    }
    let arg = if inst.definite { "iota[xi](c)".to_string() } else { "c".to_string() };
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    let mut idx = vec![0usize; cands.len()];
    loop {
        let tuple: Vec<&(String, bool, bool)> = idx.iter().zip(&cands).map(|(&i, c)| &c[i]).collect();
        let ok = tuple.iter().enumerate().all(|(i, a)| tuple[i + 1..].iter().all(|b| a.0 == b.0 || (!a.1 && !b.1)));
        if ok {
            let atoms: Vec<String> = tuple
                .iter()
                .zip(&inst.conjuncts)
                .map(|(m, (p, _))| if m.2 { format!("{p}({arg})") } else { format!("{p}({}({arg}))", m.0) })
                .collect();
            let formula = match inst.shape {
                2 => format!("({} & {}) & {}", atoms[0], atoms[1], atoms[2]),
                _ => atoms.join(" & "),
            };
            if !out.iter().any(|(f, _)| *f == formula) {
                out.push((formula, tuple.iter().map(|m| m.0.clone()).collect()));
            }
        }
        let mut k = cands.len();
        loop {
            if k == 0 {
                return if out.is_empty() { Expected::Rejected } else { Expected::Readings(out) };
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Nameless types: type variables are indices into the enclosing type
/// binders (terms' `Λ` and types' `Π` share one index space).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DbType {
    Sort(String),
    Bound(usize),
    Free(String),
    Arrow(Box<DbType>, Box<DbType>),
    Forall(Box<DbType>),
}

/// Nameless terms with separate index spaces for term and type binders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Db {
    Bound(usize),
    Free(String, DbType),
    Const(String, DbType),
    App(Box<Db>, Box<Db>),
    Lam(DbType, Box<Db>),
    TyApp(Box<Db>, DbType),
    TyLam(Box<Db>),
}

fn position(scope: &[String], name: &str) -> Option<usize> {
    scope.iter().rev().position(|n| n == name)
}

pub fn db_type(ty: &Type, tvs: &mut Vec<String>) -> DbType {
    match ty {
        Type::Sort(s) => DbType::Sort(s.clone()),
        Type::Var(a) => match position(tvs, a) {
            Some(i) => DbType::Bound(i),
            None => DbType::Free(a.clone()),
        },
        Type::Arrow(d, c) => DbType::Arrow(Box::new(db_type(d, tvs)), Box::new(db_type(c, tvs))),
        Type::Forall(a, b) => {
            tvs.push(a.clone());
            let b = db_type(b, tvs);
            tvs.pop();
            DbType::Forall(Box::new(b))
        }
    }
}

pub fn db_term(term: &Term) -> Db {
    fn go(t: &Term, vars: &mut Vec<String>, tvs: &mut Vec<String>) -> Db {
        match t {
            Term::Var { name, ty } => match position(vars, name) {
                Some(i) => Db::Bound(i),
                None => Db::Free(name.clone(), db_type(ty, tvs)),
            },
            Term::Const { name, ty } => Db::Const(name.clone(), db_type(ty, tvs)),
            Term::App(f, a) => Db::App(Box::new(go(f, vars, tvs)), Box::new(go(a, vars, tvs))),
            Term::Abs { var, ty, body } => {
                let ty = db_type(ty, tvs);
                vars.push(var.clone());
                let body = go(body, vars, tvs);
                vars.pop();
                Db::Lam(ty, Box::new(body))
            }
            Term::TyApp(f, ty) => Db::TyApp(Box::new(go(f, vars, tvs)), db_type(ty, tvs)),
            Term::TyAbs { var, body } => {
                tvs.push(var.clone());
                let body = go(body, vars, tvs);
                tvs.pop();
                Db::TyLam(Box::new(body))
            }
        }
    }
    go(term, &mut Vec::new(), &mut Vec::new())
}

fn ty_shift(ty: &DbType, d: isize, c: usize) -> DbType {
    match ty {
        DbType::Bound(i) if *i >= c => DbType::Bound((*i as isize + d) as usize),
        DbType::Arrow(a, b) => DbType::Arrow(Box::new(ty_shift(a, d, c)), Box::new(ty_shift(b, d, c))),
        DbType::Forall(b) => DbType::Forall(Box::new(ty_shift(b, d, c + 1))),
        other => other.clone(),
    }
}

fn ty_subst(ty: &DbType, j: usize, s: &DbType) -> DbType {
    match ty {
        DbType::Bound(i) if *i == j => s.clone(),
        DbType::Arrow(a, b) => DbType::Arrow(Box::new(ty_subst(a, j, s)), Box::new(ty_subst(b, j, s))),
        DbType::Forall(b) => DbType::Forall(Box::new(ty_subst(b, j + 1, &ty_shift(s, 1, 0)))),
        other => other.clone(),
    }
}

/// Maps every type inside a term, tracking the type-binder depth.
fn map_types(t: &Db, c: usize, f: &impl Fn(&DbType, usize) -> DbType) -> Db {
    match t {
        Db::Bound(i) => Db::Bound(*i),
        Db::Free(n, ty) => Db::Free(n.clone(), f(ty, c)),
        Db::Const(n, ty) => Db::Const(n.clone(), f(ty, c)),
        Db::App(a, b) => Db::App(Box::new(map_types(a, c, f)), Box::new(map_types(b, c, f))),
        Db::Lam(ty, b) => Db::Lam(f(ty, c), Box::new(map_types(b, c, f))),
        Db::TyApp(a, ty) => Db::TyApp(Box::new(map_types(a, c, f)), f(ty, c)),
        Db::TyLam(b) => Db::TyLam(Box::new(map_types(b, c + 1, f))),
    }
}

fn shift(t: &Db, d: isize, c: usize) -> Db {
    match t {
        Db::Bound(i) if *i >= c => Db::Bound((*i as isize + d) as usize),
        Db::App(a, b) => Db::App(Box::new(shift(a, d, c)), Box::new(shift(b, d, c))),
        Db::Lam(ty, b) => Db::Lam(ty.clone(), Box::new(shift(b, d, c + 1))),
        Db::TyApp(a, ty) => Db::TyApp(Box::new(shift(a, d, c)), ty.clone()),
        Db::TyLam(b) => Db::TyLam(Box::new(shift(b, d, c))),
        other => other.clone(),
    }
}

pub fn db_subst(t: &Db, j: usize, s: &Db) -> Db {
    match t {
        Db::Bound(i) if *i == j => s.clone(),
        Db::App(a, b) => Db::App(Box::new(db_subst(a, j, s)), Box::new(db_subst(b, j, s))),
        Db::Lam(ty, b) => Db::Lam(ty.clone(), Box::new(db_subst(b, j + 1, &shift(s, 1, 0)))),
        Db::TyApp(a, ty) => Db::TyApp(Box::new(db_subst(a, j, s)), ty.clone()),
        Db::TyLam(b) => {
            let s = map_types(s, 0, &|ty, c| ty_shift(ty, 1, c));
            Db::TyLam(Box::new(db_subst(b, j, &s)))
        }
        other => other.clone(),
    }
}

/// Substitutes the free term variable `name` (not an index).
pub fn db_subst_free(t: &Db, name: &str, s: &Db) -> Db {
    fn go(t: &Db, name: &str, s: &Db, depth: usize) -> Db {
        match t {
            Db::Free(n, _) if n == name => shift(s, depth as isize, 0),
            Db::App(a, b) => Db::App(Box::new(go(a, name, s, depth)), Box::new(go(b, name, s, depth))),
            Db::Lam(ty, b) => Db::Lam(ty.clone(), Box::new(go(b, name, s, depth + 1))),
            Db::TyApp(a, ty) => Db::TyApp(Box::new(go(a, name, s, depth)), ty.clone()),
            Db::TyLam(b) => {
                let s = map_types(s, 0, &|ty, c| ty_shift(ty, 1, c));
                Db::TyLam(Box::new(go(b, name, &s, depth)))
            }
            other => other.clone(),
        }
    }
    go(t, name, s, 0)
}

fn beta(body: &Db, arg: &Db) -> Db {
    shift(&db_subst(body, 0, &shift(arg, 1, 0)), -1, 0)
}

fn type_beta(body: &Db, ty: &DbType) -> Db {
    let ty = ty_shift(ty, 1, 0);
    let substituted = map_types(body, 0, &|t, c| ty_subst(t, c, &ty_shift(&ty, c as isize, 0)));
    map_types(&substituted, 0, &|t, c| ty_shift(t, -1, c))
}

/// One leftmost-outermost step.
pub fn db_step(t: &Db) -> Option<Db> {
    match t {
        Db::App(f, a) => {
            if let Db::Lam(_, body) = &**f {
                return Some(beta(body, a));
            }
            if let Some(f2) = db_step(f) {
                return Some(Db::App(Box::new(f2), a.clone()));
            }
            db_step(a).map(|a2| Db::App(f.clone(), Box::new(a2)))
        }
        Db::TyApp(f, ty) => {
            if let Db::TyLam(body) = &**f {
                return Some(type_beta(body, ty));
            }
            db_step(f).map(|f2| Db::TyApp(Box::new(f2), ty.clone()))
        }
        Db::Lam(ty, b) => db_step(b).map(|b2| Db::Lam(ty.clone(), Box::new(b2))),
        Db::TyLam(b) => db_step(b).map(|b2| Db::TyLam(Box::new(b2))),
        _ => None,
    }
}

pub fn db_normalize(t: &Db, fuel: usize) -> Option<Db> {
    let mut cur = t.clone();
    for _ in 0..=fuel {
        match db_step(&cur) {
            Some(next) => cur = next,
            None => return Some(cur),
        }
    }
    None
}

/// Renames every bound term and type variable to a globally fresh name.
pub fn rename_bound(term: &Term, counter: &mut usize) -> Term {
    fn ty(t: &Type, tmap: &mut Vec<(String, String)>, counter: &mut usize) -> Type {
        match t {
            Type::Sort(_) => t.clone(),
            Type::Var(a) => match tmap.iter().rev().find(|(o, _)| o == a) {
                Some((_, n)) => Type::var(n.clone()),
                None => t.clone(),
            },
            Type::Arrow(d, c) => Type::arrow(ty(d, tmap, counter), ty(c, tmap, counter)),
            Type::Forall(a, b) => {
                *counter += 1;
                let n = format!("r{counter}");
                tmap.push((a.clone(), n.clone()));
                let b = ty(b, tmap, counter);
                tmap.pop();
                Type::forall(n, b)
            }
        }
    }
    fn go(t: &Term, map: &mut Vec<(String, String)>, tmap: &mut Vec<(String, String)>, counter: &mut usize) -> Term {
        match t {
            Term::Var { name, ty: vt } => {
                let name = map.iter().rev().find(|(o, _)| o == name).map_or(name.clone(), |(_, n)| n.clone());
                Term::var(name, ty(vt, tmap, counter))
            }
            Term::Const { name, ty: ct } => Term::constant(name.clone(), ty(ct, tmap, counter)),
            Term::App(f, a) => Term::app(go(f, map, tmap, counter), go(a, map, tmap, counter)),
            Term::Abs { var, ty: vt, body } => {
                let vt = ty(vt, tmap, counter);
                *counter += 1;
                let n = format!("v{counter}");
                map.push((var.clone(), n.clone()));
                let body = go(body, map, tmap, counter);
                map.pop();
                Term::abs(n, vt, body)
            }
            Term::TyApp(f, a) => Term::ty_app(go(f, map, tmap, counter), ty(a, tmap, counter)),
            Term::TyAbs { var, body } => {
                *counter += 1;
                let n = format!("r{counter}");
                tmap.push((var.clone(), n.clone()));
                let body = go(body, map, tmap, counter);
                tmap.pop();
                Term::ty_abs(n, body)
            }
        }
    }
    go(term, &mut Vec::new(), &mut Vec::new(), counter)
}

/// Runs the composer on an instance and compares with [`oracle`]: same status
/// and, when felicitous, the same readings in the same order.
pub fn compare_with_oracle(inst: &Instance) -> Result<(), String> {
    use mgl_core::{felicity, load_lexicon, parse_tree, render_formula, Status, Style};
    let lex = load_lexicon(&inst.lexicon).map_err(|e| e.to_string())?;
    let tree = parse_tree(&inst.tree).map_err(|e| e.to_string())?;
    let v = felicity(&tree, &lex);
    let context = || format!("\n{}{}", inst.lexicon, inst.tree);
    match oracle(inst) {
        Expected::Untypable if v.status != Status::TypeError => {
            Err(format!("expected a type error, got {}{}", v.status, context()))
        }
        Expected::Rejected if v.status != Status::Infelicitous => {
            Err(format!("expected infelicitous, got {}{}", v.status, context()))
        }
        Expected::Rejected if !v.rejection_log.iter().all(|r| r.constraint.starts_with("rigid ")) => {
            Err(format!("rejection not attributed to rigidity{}", context()))
        }
        Expected::Readings(expected) => {
            let got: Vec<(String, Vec<String>)> = v
                .readings
                .iter()
                .map(|r| {
                    let f = r.formula.as_ref().map_or(String::new(), |f| render_formula(f, Style::Ascii));
                    (f, r.morphism_names().into_iter().map(String::from).collect())
                })
                .collect();
            if v.status != Status::Felicitous || got != expected {
                return Err(format!("{}: got {got:?}, expected {expected:?}{}", v.status, context()));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}
