//! Locally constant functions, coboundaries and the ordered cohomology
//! group, handled through representatives.

mod decide;
mod function;

pub use decide::{OrderUnit, Positivity, Vanishing};
pub use function::{LocallyConstantFunction, Ring};
pub(crate) use function::same_presentation;
