//! The guide in `book/` as doctests. mdbook cannot resolve crate
//! dependencies when it tests listings, so each chapter is included as the
//! docs of an empty module and `cargo test --doc` runs its Rust blocks.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/triangles.md")]
pub mod triangles {}

#[doc = include_str!("../../../book/src/tetrahedra.md")]
pub mod tetrahedra {}

#[doc = include_str!("../../../book/src/wigner.md")]
pub mod wigner {}

#[doc = include_str!("../../../book/src/sampling.md")]
pub mod sampling {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
