//! Types, terms, typing, substitution and α-equivalence.

mod context;
mod names;
mod syntax;
mod term;
mod types;
mod typing;

pub(crate) use names::fresh_name;

pub use context::Context;
pub use syntax::{parse_term, parse_type, ParseError, SyntaxError};
pub use term::{SpineArg, Term, UnicodeTerm};
pub use types::{SortEnv, SortError, Type, UnicodeType, PROP};
pub use typing::{annotated_type, type_of, TypeError};

/// Either side of an α-equivalence or type substitution.
pub trait Binding: Sized {
    fn alpha_equiv(&self, other: &Self) -> bool;
    fn subst_type(&self, tyvar: &str, replacement: &Type) -> Self;
}

impl Binding for Type {
    fn alpha_equiv(&self, other: &Type) -> bool {
        self.alpha_eq(other)
    }

    fn subst_type(&self, tyvar: &str, replacement: &Type) -> Type {
        self.subst(tyvar, replacement)
    }
}

impl Binding for Term {
    fn alpha_equiv(&self, other: &Term) -> bool {
        self.alpha_eq(other)
    }

    fn subst_type(&self, tyvar: &str, replacement: &Type) -> Term {
        Term::subst_type(self, tyvar, replacement)
    }
}

/// True iff `a` and `b` differ only in the names of bound term and type
/// variables.
pub fn alpha_equiv<B: Binding>(a: &B, b: &B) -> bool {
    a.alpha_equiv(b)
}

/// Capture-avoiding substitution of a type for a free type variable, in a
/// type or in every annotation of a term.
pub fn subst_type<B: Binding>(target: &B, tyvar: &str, replacement: &Type) -> B {
    target.subst_type(tyvar, replacement)
}

/// Capture-avoiding `body[var := value]`.
///
/// Fails when `value`'s type differs from the type `var` is used at in `body`.
pub fn subst_term(body: &Term, var: &str, value: &Term) -> Result<Term, TypeError> {
    if let Some(expected) = body.free_vars().remove(var) {
        let found = annotated_type(value)?;
        if !expected.alpha_eq(&found) {
            return Err(TypeError::ApplicationMismatch { expected, found });
        }
    }
    Ok(body.substitute(var, value))
}
