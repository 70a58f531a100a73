use serde::Serialize;

use super::domination::{stochastic_domination, DominationReport};
use super::fkg::{fkg_pair_gap, PairGap};
use crate::arith::rational::serde_fraction;
use crate::arith::{validate_grid, Rational};
use crate::error::Result;
use crate::events::Event;
use crate::measures::{union, Dist};
use crate::par_map;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanStep {
    #[serde(with = "serde_fraction")]
    pub x1: Rational,
    #[serde(with = "serde_fraction")]
    pub x2: Rational,
    pub report: DominationReport,
}

/// Domination checks between consecutive grid points. A clean scan is
/// evidence on the grid only, not a proof of monotonicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityScan {
    pub steps: Vec<ScanStep>,
}

impl MonotonicityScan {
    pub fn failures(&self) -> impl Iterator<Item = &ScanStep> {
        self.steps.iter().filter(|s| !s.report.dominates())
    }

    pub fn is_clean(&self) -> bool {
        self.failures().next().is_none()
    }
}

pub fn monotonicity_scan<F>(family: F, grid: &[Rational]) -> Result<MonotonicityScan>
where
    F: Fn(&Rational) -> Result<Dist> + Sync + Send,
{
    validate_grid(grid)?;
    let laws = par_map(grid, |x| family(x));
    let laws: Vec<Dist> = laws.into_iter().collect::<Result<_>>()?;
    let pairs: Vec<usize> = (1..grid.len()).collect();
    let reports = par_map(&pairs, |&i| stochastic_domination(&laws[i - 1], &laws[i]));
    let steps = pairs
        .iter()
        .zip(reports)
        .map(|(&i, r)| {
            Ok(ScanStep {
                x1: grid[i - 1].clone(),
                x2: grid[i].clone(),
                report: r?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(MonotonicityScan { steps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnionVerdict {
    /// Both inputs scan clean and so does their union.
    Preserved,
    /// Both inputs scan clean but the union does not.
    Violated,
    /// An input family already fails its scan, so nothing is claimed.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridGaps {
    #[serde(with = "serde_fraction")]
    pub x: Rational,
    pub gaps: Vec<PairGap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionPreservation {
    pub verdict: UnionVerdict,
    pub first_clean: bool,
    pub second_clean: bool,
    pub union_scan: MonotonicityScan,
    /// Pairwise gaps of the union law on the supplied events, reported as
    /// evidence only.
    pub union_gaps: Vec<GridGaps>,
}

/// Scans two families and their independent union on the same grid.
pub fn union_preservation_test<F1, F2>(
    first: F1,
    second: F2,
    grid: &[Rational],
    events: &[Event],
) -> Result<UnionPreservation>
where
    F1: Fn(&Rational) -> Result<Dist> + Sync + Send,
    F2: Fn(&Rational) -> Result<Dist> + Sync + Send,
{
    let first_clean = monotonicity_scan(&first, grid)?.is_clean();
    let second_clean = monotonicity_scan(&second, grid)?.is_clean();
    let joint = |x: &Rational| union(&first(x)?, &second(x)?);
    let union_scan = monotonicity_scan(joint, grid)?;

    let mut union_gaps = Vec::new();
    if !events.is_empty() {
        for x in grid {
            let d = joint(x)?;
            let mut gaps = Vec::new();
            for (i, a) in events.iter().enumerate() {
                for b in &events[i..] {
                    gaps.push(PairGap {
                        first: a.label(),
                        second: b.label(),
                        gap: fkg_pair_gap(&d, a, b)?,
                    });
                }
            }
            union_gaps.push(GridGaps { x: x.clone(), gaps });
        }
    }

    let verdict = if !(first_clean && second_clean) {
        UnionVerdict::Inconclusive
    } else if union_scan.is_clean() {
        UnionVerdict::Preserved
    } else {
        UnionVerdict::Violated
    };
    Ok(UnionPreservation {
        verdict,
        first_clean,
        second_clean,
        union_scan,
        union_gaps,
    })
}
