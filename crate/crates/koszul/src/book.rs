//! The guide, mounted as documentation modules so that every code block in
//! `book/src/*.md` compiles and runs with the test suite.  `mdbook build
//! book` renders the same files as HTML; this wiring is what keeps the two
//! from drifting apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}

#[doc = include_str!("../../../book/src/exterior.md")]
pub mod exterior_algebra {}

#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology_primitives {}

#[doc = include_str!("../../../book/src/towers.md")]
pub mod towers {}

#[doc = include_str!("../../../book/src/connecting.md")]
pub mod connecting_maps {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model_complex {}

#[doc = include_str!("../../../book/src/certificates.md")]
pub mod certificates {}
