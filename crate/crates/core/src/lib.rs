//! Exact homology computations for Kontsevich's graph complexes and their
//! hairy variants.

pub mod cli;
pub mod exact;
pub mod gc;
pub mod graphkit;
pub mod hgc;
pub mod homology;
pub mod mclie;
mod ops;
