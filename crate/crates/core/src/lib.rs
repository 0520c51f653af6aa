//! Certified existence of realizations of simplicial complexes with
//! prescribed squared edge lengths.
//!
//! Given an approximate rational realization, [`prover::prove_existence`]
//! checks, in exact rational and interval arithmetic, sufficient conditions
//! for a nearby realization with exactly the desired lengths and no
//! self-intersections. [`embed::heuristic_embed`] produces such starting
//! realizations from abstract data.

pub mod complex;
pub mod embed;
pub mod error;
pub mod lcp;
pub mod linalg;
pub mod prover;
pub mod rational;

pub use complex::{AbstractSimplicialComplex, CollisionDistance, Realization, SquaredLengthSpec};
pub use embed::EmbedConfig;
pub use error::{ArithError, ComplexError, EmbedError, LcpError, LinalgError};
pub use linalg::RatMatrix;
pub use prover::{prove_existence, ProofReport, ProverConfig, Stage, Verdict};
pub use rational::{Certainty, RatInterval, Rational};
