use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::interval::Interval;
use super::rational::{serde_fraction, Rational};
use crate::error::{Error, Result};
use crate::par_map;

/// Interior dyadic points `k / 2^bits`, `k = 1 .. 2^bits - 1`.
pub fn dyadic_grid(bits: u32) -> Vec<Rational> {
    let den = BigInt::one() << bits as usize;
    (1u64..(1u64 << bits))
        .map(|k| Rational::new(BigInt::from(k), den.clone()))
        .collect()
}

/// Checks that a grid is strictly increasing inside `(0, 1)`.
pub fn validate_grid(grid: &[Rational]) -> Result<()> {
    let one = Rational::one();
    for x in grid {
        if x <= &Rational::zero() || x >= &one {
            return Err(Error::InvalidGrid(format!("point {x} outside (0, 1)")));
        }
    }
    if let Some(w) = grid.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(format!(
            "{} is not below {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Two grid points with `x1 < x2` and `f(x1) > f(x2)`, compared exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecreasingPair {
    #[serde(with = "serde_fraction")]
    pub x1: Rational,
    #[serde(with = "serde_fraction")]
    pub x2: Rational,
    #[serde(with = "serde_fraction")]
    pub f1: Rational,
    #[serde(with = "serde_fraction")]
    pub f2: Rational,
}

/// Scans consecutive grid points for an exact decrease of `f`.
///
/// A decrease anywhere on the grid implies one between neighbours, so the
/// consecutive scan is complete for the grid. `None` does not prove that `f`
/// is monotone.
pub fn find_decreasing_pair<F>(f: F, grid: &[Rational]) -> Result<Option<DecreasingPair>>
where
    F: Fn(&Rational) -> Result<Rational> + Sync + Send,
{
    validate_grid(grid)?;
    let values = par_map(grid, |x| f(x))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(first_decrease(grid, &values))
}

pub(crate) fn first_decrease(grid: &[Rational], values: &[Rational]) -> Option<DecreasingPair> {
    (0..values.len().saturating_sub(1))
        .find(|&i| values[i] > values[i + 1])
        .map(|i| DecreasingPair {
            x1: grid[i].clone(),
            x2: grid[i + 1].clone(),
            f1: values[i].clone(),
            f2: values[i + 1].clone(),
        })
}

/// Working precision schedule for interval evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrecisionSchedule {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionSchedule {
    fn default() -> Self {
        PrecisionSchedule {
            start_bits: 96,
            max_bits: 4096,
        }
    }
}

/// A decrease certified by disjoint enclosures: every value in `f1` exceeds
/// every value in `f2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedDecrease {
    pub x1: Rational,
    pub x2: Rational,
    pub f1: Interval,
    pub f2: Interval,
}

impl CertifiedDecrease {
    pub fn precision_bits(&self) -> u32 {
        self.f1.precision()
    }
}

/// Interval-arithmetic analogue of [`find_decreasing_pair`] for functions
/// that are not rational at the grid points.
///
/// All points are evaluated at `start_bits`; a neighbouring pair whose
/// midpoints decrease is re-evaluated at doubling precision until its
/// enclosures separate or `max_bits` is reached.
pub fn certify_decreasing_pair<F>(
    f: F,
    grid: &[Rational],
    schedule: PrecisionSchedule,
) -> Result<Option<CertifiedDecrease>>
where
    F: Fn(&Rational, u32) -> Result<Interval> + Sync + Send,
{
    validate_grid(grid)?;
    let coarse = par_map(grid, |x| f(x, schedule.start_bits))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    for i in 0..grid.len().saturating_sub(1) {
        let (mut a, mut b) = (coarse[i].clone(), coarse[i + 1].clone());
        let mut bits = schedule.start_bits;
        loop {
            if a.certainly_greater(&b) {
                return Ok(Some(CertifiedDecrease {
                    x1: grid[i].clone(),
                    x2: grid[i + 1].clone(),
                    f1: a,
                    f2: b,
                }));
            }
            if a.midpoint() <= b.midpoint() || b.certainly_greater(&a) || bits >= schedule.max_bits
            {
                break;
            }
            bits = (bits * 2).min(schedule.max_bits);
            a = f(&grid[i], bits)?;
            b = f(&grid[i + 1], bits)?;
        }
    }
    Ok(None)
}
