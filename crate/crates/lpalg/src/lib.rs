//! Desk-scale computational workbench for finite étale groupoids and their
//! reduced L^p-operator algebras.
//!
//! Everything algebraic runs over exact Gaussian rationals: convolution,
//! cores, admissible pairs, crossed products, and Leavitt normal forms are
//! decided with no tolerances. Operator norms on `ℓ^p` for `p ∉ {1, 2}`
//! are certified intervals (power-iteration lower bounds, interpolation
//! upper bounds), never bare numbers.
//!
//! Module map:
//!
//! - [`groupoid`]: finite étale groupoids, group actions, bisections, germ
//!   groupoids, isomorphism search, continuous orbit equivalence.
//! - [`groupoid_algebra`]: the convolution algebra `C_c(G)`, regular
//!   representations, I- and λ-norms, the coefficient map `j`, the
//!   conditional expectation onto units.
//! - [`lp_norms`]: certified `ℓ^p → ℓ^p` operator norms, Lamperti
//!   isometries, hermitian elements, C*-cores, finite spectra.
//! - [`weyl`]: admissible pairs, the bisection ↔ pair correspondence, and
//!   the Weyl groupoid with its reconstruction of principal inputs.
//! - [`crossed_product`]: regular covariant representations, reduced
//!   crossed products, their conditional expectation and core.
//! - [`leavitt`]: the Leavitt algebras `L_n` with a confluent normal form,
//!   matrices over them, and the generator-level homomorphism checks.
//! - [`cli`]: the batch task-file front end.
//! - [`catalog`] and [`sampling`]: the named desk-scale catalog and seeded
//!   random generators used by the test sweeps.
//!
//! The `guide` module embeds the mdbook chapters from `book/` so the
//! guide's snippets run as doc-tests.

pub mod catalog;
pub mod cli;
pub mod crossed_product;
pub mod groupoid;
pub mod groupoid_algebra;
pub mod guide;
pub mod leavitt;
pub mod linalg;
pub mod lp_norms;
pub mod sampling;
pub mod scalar;
pub mod weyl;
