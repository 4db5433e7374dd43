//! Desk-scale workbench for finitely generated groups: exact word metrics
//! on Cayley balls, four-point hyperbolicity constants, Rips flag
//! complexes, integral simplicial homology, finite-subgroup enumeration,
//! and a certified equivariant contraction engine with an independent
//! trace verifier.
//!
//! All metric quantities are exact non-negative integers; hyperbolicity
//! constants are exact half-integers ([`HalfInt`]). Nothing in the metric
//! layer uses floating point.

pub mod cayley;
pub mod complex;
pub mod contraction;
pub mod equivariant;
pub mod error;
pub mod groups;
pub mod half;
pub mod hyperbolicity;

pub use half::HalfInt;
