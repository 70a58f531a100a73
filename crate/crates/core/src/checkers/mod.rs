//! Positive association, stochastic domination and monotonicity checks on
//! exact distributions.

mod domination;
mod fkg;
pub(crate) mod flow;
mod scan;

pub use domination::{
    stochastic_domination, up_set_mass, CouplingEntry, DominationReport, UpSetWitness, Verdict,
};
pub use fkg::{fkg_pair_gap, fkg_report, lattice_condition, FkgReport, LatticeReport, PairGap};
pub use scan::{
    monotonicity_scan, union_preservation_test, GridGaps, MonotonicityScan, ScanStep,
    UnionPreservation, UnionVerdict,
};
