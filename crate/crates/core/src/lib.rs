//! A second-order many-sorted typed λ-calculus with a word-anchored lexicon of
//! coercion morphisms.
//!
//! The crate turns binary parse trees of words into many-sorted formulae:
//! leaves are replaced by the principal terms of their lexical entries, type
//! mismatches are repaired with the optional morphisms declared by the argument
//! word, and copredications are conjoined with a polymorphic `and` under the
//! rigid/flexible discipline.
//!
//! Everything here is `no_std` + `alloc`; file IO and the command line driver
//! live in the companion `mgl` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod composition;
pub mod kernel;
pub mod lexicon;
pub mod logic;
pub mod reduction;

pub use composition::{
    apply_with_coercion, compose, compose_with_fuel, felicity, felicity_with_fuel, parse_tree, resolve_copredication,
    CoercionError, ComposeError, ParseTree, Reading, Rejection, Status, TreePath, UsedMorphism, Verdict,
};
pub use kernel::{
    alpha_equiv, parse_term, parse_type, subst_term, subst_type, type_of, Context, ParseError, SortEnv, Term, Type,
    TypeError,
};
pub use lexicon::{
    candidates, iota, load_lexicon, poly_and, serialize_lexicon, LexEntry, Lexicon, LexiconError, Morphism, Rigidity,
};
pub use logic::{
    logical_signature, render_formula, render_logic_term, to_formula, to_logic_term, Formula, LogicTerm, Style,
};
pub use reduction::{normalize, reduce_step, ReductionError, ReductionTrace, Rule, DEFAULT_FUEL};
