//! Exact lattice algorithms for orders on ℤᴺ and their embeddings into the
//! lexicographic order, plus numerical checks on trigonometric polynomials.
//!
//! - [`lattice`]: integer matrices, normal forms, subgroups, `ℚ(√d)` scalars.
//! - [`order`]: orders given by a chain of pure subgroups with level functionals.
//! - [`embedding`]: unimodular maps carrying an order into the lexicographic one.
//! - [`torus`]: trigonometric polynomials, Hardy predicates, Jensen checks.

pub mod embedding;
pub mod lattice;
pub mod order;
pub mod torus;

pub use embedding::{
    embed, verify_embedding, verify_map, EmbedError, EmbeddingResult, UnimodularMap,
};
pub use lattice::{IntMatrix, IntVector, LatticeError, Scalar, ScalarFunctional, Sign, Subgroup};
pub use order::{lex_order, random_order, Level, OrderError, OrderSpec, ValidationReport};
pub use torus::{QuadratureOptions, TorusError, TrigPoly, Verdict};
