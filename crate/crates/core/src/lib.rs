//! Exact computations for the graphical representations of the Ising model
//! on finite graphs: the loop-O(1) model, traced sourceless single and double
//! random currents, and the FK-Ising random cluster model, all built as unions
//! of independent percolation configurations.
//!
//! Every probability is an exact rational. Non-monotonicity and FKG failures
//! are certified by exact (or outward-rounded interval) comparisons; scans
//! that find nothing are reported as evidence, never as proofs.

pub mod arith;
pub mod checkers;
pub mod error;
pub mod events;
pub mod graph;
pub mod measures;
pub mod report;
pub mod sampler;
pub mod theta;

pub use error::{Error, Result};

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}
