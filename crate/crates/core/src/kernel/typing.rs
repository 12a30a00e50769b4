use alloc::string::String;
use alloc::vec::Vec;

use super::context::Context;
use super::term::Term;
use super::types::Type;

/// Typing failures.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constant `#{0}`")]
    UnknownConstant(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("`{name}` is annotated `{found}` but declared `{declared}`")]
    AnnotationMismatch { name: String, declared: Type, found: Type },
    #[error("argument mismatch: expected `{expected}`, found `{found}`")]
    ApplicationMismatch { expected: Type, found: Type },
    #[error("`{0}` is not a function type")]
    NotAFunction(Type),
    #[error("`{0}` is not a universal type")]
    NotPolymorphic(Type),
    #[error("cannot generalize over '{tyvar}: free variable `{var}` has type `{ty}`")]
    SideCondition { tyvar: String, var: String, ty: Type },
    #[error("`{0}` is declared twice")]
    Redeclared(String),
}

/// Computes the type of `term` in `ctx`, checking every rule.
pub fn type_of(ctx: &Context, term: &Term) -> Result<Type, TypeError> {
    Checker { ctx: Some(ctx), locals: Vec::new() }.synth(term)
}

/// Computes the type of `term` from its own annotations, trusting the types
/// carried by constants and free variables.
pub fn annotated_type(term: &Term) -> Result<Type, TypeError> {
    Checker { ctx: None, locals: Vec::new() }.synth(term)
}

struct Checker<'c> {
    ctx: Option<&'c Context>,
    locals: Vec<(String, Type)>,
}

impl Checker<'_> {
    fn check_sorts(&self, ty: &Type) -> Result<(), TypeError> {
        match self.ctx.and_then(|c| c.sorts().undeclared_in(ty)) {
            Some(sort) => Err(TypeError::UnknownSort(sort)),
            None => Ok(()),
        }
    }

    fn synth(&mut self, term: &Term) -> Result<Type, TypeError> {
        match term {
            Term::Var { name, ty } => {
                let declared = match self.locals.iter().rev().find(|(n, _)| n == name) {
                    Some((_, declared)) => declared.clone(),
                    None => match self.ctx {
                        Some(ctx) => {
                            ctx.variable(name).cloned().ok_or_else(|| TypeError::UnboundVariable(name.clone()))?
                        }
                        None => {
                            self.check_sorts(ty)?;
                            ty.clone()
                        }
                    },
                };
                if !declared.alpha_eq(ty) {
                    return Err(TypeError::AnnotationMismatch { name: name.clone(), declared, found: ty.clone() });
                }
                Ok(declared)
            }
            Term::Const { name, ty } => {
                if let Some(ctx) = self.ctx {
                    let declared = ctx.constant(name).ok_or_else(|| TypeError::UnknownConstant(name.clone()))?;
                    if !declared.alpha_eq(ty) {
                        return Err(TypeError::AnnotationMismatch {
                            name: name.clone(),
                            declared: declared.clone(),
                            found: ty.clone(),
                        });
                    }
                }
                Ok(ty.clone())
            }
            Term::App(f, a) => {
                let fun_ty = self.synth(f)?;
                let arg_ty = self.synth(a)?;
                match fun_ty {
                    Type::Arrow(domain, codomain) => {
                        if domain.alpha_eq(&arg_ty) {
                            Ok(*codomain)
                        } else {
                            Err(TypeError::ApplicationMismatch { expected: *domain, found: arg_ty })
                        }
                    }
                    other => Err(TypeError::NotAFunction(other)),
                }
            }
            Term::Abs { var, ty, body } => {
                self.check_sorts(ty)?;
                self.locals.push((var.clone(), ty.clone()));
                let body_ty = self.synth(body);
                self.locals.pop();
                Ok(Type::arrow(ty.clone(), body_ty?))
            }
            Term::TyApp(f, ty) => {
                self.check_sorts(ty)?;
                match self.synth(f)? {
                    Type::Forall(var, body) => Ok(body.subst(&var, ty)),
                    other => Err(TypeError::NotPolymorphic(other)),
                }
            }
            Term::TyAbs { var, body } => {
                for (name, ty) in body.free_vars() {
                    // Free variables of the body get their binding type from the
                    // enclosing scope or the context, not from the annotation.
                    let bound_ty = self
                        .locals
                        .iter()
                        .rev()
                        .find(|(n, _)| *n == name)
                        .map(|(_, t)| t.clone())
                        .or_else(|| self.ctx.and_then(|c| c.variable(&name).cloned()))
                        .unwrap_or(ty);
                    if bound_ty.has_free_var(var) {
                        return Err(TypeError::SideCondition { tyvar: var.clone(), var: name, ty: bound_ty });
                    }
                }
                let body_ty = self.synth(body)?;
                Ok(Type::Forall(var.clone(), alloc::boxed::Box::new(body_ty)))
            }
        }
    }
}
