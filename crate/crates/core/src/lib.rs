//! Computational toolkit for Thompson's group V and the Brin-Thompson group 2V
//! acting on regular languages, the subshifts of finite type induced by those
//! actions, the corresponding rewriting of flow orbits in the mapping torus,
//! and Bowen-Franks groups of integer matrices.
//!
//! The crate is organized around the pipeline
//!
//! ```text
//! group element  ->  local rule on a language  ->  vertex shift (hull)
//!                                              ->  flow-orbit rewriting
//!                                              ->  Bowen-Franks invariants
//! ```
//!
//! Every construction comes with a brute-force verifier that sweeps all
//! inputs up to a caller-chosen size, so correctness at desk scale is a
//! checked property rather than an assumption.

pub mod bowenfranks;
pub mod flow;
pub mod lang;
pub mod subshift;
pub mod thompson;
pub mod veelike;
