//! Core library of the kaos2b toolchain.
//!
//! The crate is organised around three data models and the passes between
//! them:
//!
//! * [`domain`] — ontology-style domain models arranged in a refinement
//!   chain, plus structural validation;
//! * [`formula`] — the logical formula language shared by domain models and
//!   B components (parser, printer, symbol rewriting);
//! * [`bsystem`] — B System components and the textual deltas that describe
//!   additions to them;
//! * [`translate`] — the forward pass from a refinement chain to B System
//!   components;
//! * [`backprop`] — the reverse pass that folds B-side additions back into
//!   the domain models they came from;
//! * [`gen`] — seeded generators for randomised testing.

pub mod backprop;
pub mod bsystem;
pub mod domain;
pub mod formula;
pub mod frontend;
pub mod gen;
pub mod translate;
