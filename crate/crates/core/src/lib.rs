//! Exact arithmetic in the Sylow p-subgroup W_n of Sym(p^n), realized on
//! truncated polynomial layers, together with the graded Lie algebra of its
//! lower central series.
//!
//! What the crate computes, all over F_p with exact equality:
//!
//! - [`polyring`]: the layer ring F_p[x_1..x_m]/(x_i^p - x_i), with the
//!   Taylor expansion of coordinate shifts;
//! - [`wreath`]: group elements in layered normal form, their permutation
//!   action on F_p^n, multiplication, inverses and commutators;
//! - [`structure`]: the p-degree grading, saturated subgroups, upper and
//!   lower central series, normal closures and the normal-subgroup index
//!   bound;
//! - [`liealg`]: the associated graded Lie algebra, its bracket, centers and
//!   powers, and the degree-preserving correspondence with the group;
//! - [`chains`]: the normalizer chain out of the canonical regular abelian
//!   subgroup, its Lie idealizer mirror, and the restricted-partition
//!   counts that predict their growth;
//! - [`oracle`]: brute-force permutation and linear-algebra routes used to
//!   cross-check all of the above at desk scale;
//! - [`text`]: the published grammars for polynomials, elements, Lie
//!   elements and subgroup files;
//! - [`report`] and [`verify`]: the machine-readable views and the
//!   self-check suite behind the command line and the browser demo.

pub mod chains;
pub mod error;
pub mod liealg;
pub mod oracle;
pub mod params;
pub mod polyring;
pub mod report;
pub mod structure;
pub mod text;
pub mod verify;
pub mod wreath;

pub use error::{Error, Result};
pub use params::PrimeParams;
