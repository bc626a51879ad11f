//! Finite lattices and their congruence lattices.
//!
//! Lattices are built from a small expression language (chains, named
//! lattices, ordinal sums, horizontal sums, products and duals) or loaded
//! from a cover list. For any lattice the crate computes its congruences,
//! the congruence lattice `Con(L)`, and a canonical code that identifies the
//! lattice up to isomorphism. On top of that sit an exhaustive enumerator of
//! small lattices and a census of congruence lattice sizes.

pub mod canonical;
pub mod census;
pub mod congruence;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod io;
pub mod lattice;

pub use canonical::{canonical_code, canonical_form, is_isomorphic, CanonicalCode, CANONICAL_BOUND};
pub use congruence::{
    all_congruences, congruence_join, congruence_lattice, congruence_meet, is_congruence, make_congruence,
    principal_congruence, quotient, Congruence,
};
pub use construct::{chain, direct_product, horizontal_sum, named, ordinal_sum, ordinal_sum_all, Named};
pub use enumerate::{count_lattices, enumerate_lattices, EnumeratedLattice, ENUMERATION_BOUND};
pub use error::{Error, Result};
pub use expr::{build, parse_expr, LatticeExpr};
pub use lattice::{validate_lattice, Lattice};
