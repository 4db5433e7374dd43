//! Simplicial machinery: Rips flag complexes (implicit — the complex is
//! the flag closure of its proximity graph and is never materialized as a
//! simplex list), explicit finite complexes, barycentric subdivision,
//! reduced integral homology via Smith normal form, and greedy
//! collapsibility.

mod collapse;
mod explicit;
mod flag;
mod homology;

pub use collapse::{greedy_collapse, CollapseOutcome};
pub use explicit::{order_complex, ExplicitComplex};
pub use flag::{rips_complex, FlagComplex};
pub use homology::{reduced_homology, smith_invariants, HomologyGroup, HomologyProfile};
