//! Exact homological algebra over graded polynomial rings.
//!
//! The crate computes Koszul complexes, Tor groups, connecting homomorphisms
//! and the symmetric-exterior model complex over Z, Q and prime fields, all
//! with exact arithmetic, and packages the identities a regular sequence is
//! supposed to satisfy as machine-checkable verdicts with certificates.
//!
//! Layering, bottom to top:
//!
//! * [`ring`], [`matrix`], [`homology`]: exact scalars, sparse matrices,
//!   Smith and Hermite forms, subquotient homology with cycle classes.
//! * [`poly`]: weighted-graded polynomial rings, graded pieces,
//!   multiplication matrices, regular-sequence checking.
//! * [`exterior`]: the exterior algebra on the sequence symbols with its
//!   Koszul differential and shuffle coproduct.
//! * [`modules`]: ideal powers, filtration quotients, short exact sequences
//!   and square-zero extensions built from them.
//! * [`tor`]: Koszul-tensor complexes, Tor groups, induced maps, connecting
//!   homomorphisms and the homology-level product.
//! * [`model`]: the rank-n model complex built directly in monomial bases,
//!   used as an independent oracle for the Tor computations.
//! * [`suite`]: named checks, dependency-aware runner, certificates.
//! * [`config`]: run configuration, the flat config grammar and rendering.
//!
//! [`reference`] holds deliberately naive dense implementations used only to
//! cross-check the engine; nothing in the main path calls into it.

pub mod config;
pub mod exterior;
pub mod homology;
pub mod matrix;
pub mod model;
pub mod modules;
pub mod poly;
pub mod reference;
pub mod report;
pub mod ring;
pub mod suite;
pub mod tor;

pub mod book;

pub use homology::{subquotient_homology, ModuleInvariants};
pub use matrix::{ExactMatrix, LiftStrategy};
pub use ring::{BaseRing, Scalar};
