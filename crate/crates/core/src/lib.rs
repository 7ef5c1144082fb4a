//! Continuity and semicontinuity bounds for the von Neumann entropy,
//! relative entropy, conditional entropy, mutual information and
//! entanglement of formation under rank and energy constraints, together
//! with the numerical machinery they rest on (dense Hermitian algebra, Gibbs
//! states of infinite spectra, convex-roof optimization) and a seeded
//! randomized harness that checks every bound on sampled states.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod campaign;
pub mod entropy;
pub mod eof;
pub mod error;
pub mod gibbs;
pub mod io;
pub mod jordan;
pub mod operator;
mod par;
pub mod scalar;
pub mod spectrum;
pub mod stategen;

pub use error::{Error, Result};
