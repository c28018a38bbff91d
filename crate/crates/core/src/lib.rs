//! Proper rational maps between balls and generalized balls.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: sparse complex polynomials in graded-lex order.
//! - [`maps`]: rational maps, ball automorphisms and the standard constructions
//!   (tensor products, juxtaposition, descendants, tensor powers, fixtures).
//! - [`hermitian`]: the Hermitian form `‖p‖²_l − |q|²`, division by the sphere
//!   defining function, signature and ranks.
//! - [`invariance`]: membership in the Hermitian invariant group, torus and
//!   permutation stabilizers, structural detection and rank bounds.
//! - [`realize`]: constructions of proper maps with prescribed finite groups.
//! - [`sampling`]: the numeric sphere-sampling oracle.
//! - [`analysis`]: the combined report used by the command-line tool.

pub mod analysis;
pub mod error;
pub mod hermitian;
pub mod invariance;
pub mod linalg;
pub mod maps;
pub mod poly;
pub mod realize;
pub mod sampling;
mod tol;

pub use error::{Error, Result};
pub use hermitian::{HermitianForm, Signature};
pub use maps::{BallAutomorphism, RationalMap, Subspace};
pub use poly::{MultiIndex, Polynomial};
pub use tol::Tolerances;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
