//! The book chapters, included as rustdoc so that `cargo test` compiles
//! and runs every snippet in the guide; see `book/` for the mdbook
//! sources.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/groupoids.md")]
pub mod groupoids {}

#[doc = include_str!("../../../book/src/convolution.md")]
pub mod convolution {}

#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}

#[doc = include_str!("../../../book/src/cores.md")]
pub mod cores {}

#[doc = include_str!("../../../book/src/weyl.md")]
pub mod weyl_groupoid {}

#[doc = include_str!("../../../book/src/crossed.md")]
pub mod crossed {}

#[doc = include_str!("../../../book/src/leavitt.md")]
pub mod leavitt_algebras {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod task_files {}
