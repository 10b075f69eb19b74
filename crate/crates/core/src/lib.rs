//! Exact finite-level verification of lower central series computations in
//! free-by-cyclic groups `F_n ⋊_φ Z`.
//!
//! The crate is organized bottom-up:
//!
//! * [`words`]: run-length free-group words, commutators, a literal parser.
//! * [`fbc`]: normal forms and identities in `F_n ⋊_φ Z`.
//! * [`magnus`]: truncated Magnus expansions, weights and `γ_n(F)` membership.
//! * [`liemod`]: Lyndon bases, Witt dimensions, Lie and tensor power matrices.
//! * [`latmod`]: integer matrices, SNF/HNF, compound matrices, norm sequences,
//!   image chains and mapping-torus homology.
//! * [`lcs`]: the engine computing `γ_n(G) ∩ F` modulo `γ_c(F)`.
//! * [`cli`]: configuration, orchestration and reports.

pub mod cli;
pub mod error;
pub mod fbc;
pub mod latmod;
pub mod lcs;
pub mod liemod;
pub mod magnus;
pub mod words;

pub use error::{Error, Result};
pub use num_bigint;
