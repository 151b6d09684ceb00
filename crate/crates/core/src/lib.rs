//! Exact computations for one-sided topological Markov shifts and the
//! circle actions on their Cuntz-Krieger algebras.
//!
//! Every circle action fixing the diagonal is represented by an integer
//! valued locally constant function (its classifier); cocycle conjugacy of
//! actions is cohomology of classifiers, and the order on actions is the
//! positive cone of the ordered cohomology group. On top of that the crate
//! provides finite-state transducers for continuous orbit maps, the transfer
//! maps they induce, the matrix moves generating strong shift and flow
//! equivalence, and integer invariants deciding flow equivalence and
//! continuous orbit equivalence.
//!
//! All arithmetic is exact (arbitrary precision integers and rationals).

pub mod actions;
pub mod classify;
pub mod cohomology;
mod error;
pub mod format;
pub mod intlat;
pub mod moves;
pub mod random;
pub mod selftest;
pub mod sft;
pub mod transducer;

pub use error::{Error, Result};
