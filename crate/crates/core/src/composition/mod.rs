//! From parse trees to readings.
//!
//! Leaves become principal terms, `THE` routes its noun through `ι`, and
//! `((AND p q) np)` conjoins `p` and `q` over the shared argument with the
//! polymorphic `and`. Every other node is an application, repaired with the
//! argument word's morphisms when the types disagree.
//!
//! Rigidity is checked once per copredication group (all conjuncts sharing one
//! argument occurrence): a tuple of morphisms is admissible iff every two of
//! them are the same morphism or both flexible.

mod engine;
mod tree;

pub use engine::{
    apply_with_coercion, compose, compose_with_fuel, felicity, felicity_with_fuel, resolve_copredication,
    CoercionError, ComposeError, Reading, Rejection, Status, UsedMorphism, Verdict,
};
pub use tree::{parse_tree, ParseTree, TreePath, TreeSyntaxError};
