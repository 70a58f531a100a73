use num_traits::Zero;
use serde::Serialize;

use crate::arith::rational::serde_fraction;
use crate::arith::Rational;
use crate::error::Result;
use crate::events::{require_increasing, Event};
use crate::graph::EdgeSet;
use crate::measures::Dist;

/// `P(A ∩ B) - P(A) P(B)` for increasing events; a negative value certifies
/// that the law is not positively associated.
pub fn fkg_pair_gap(d: &Dist, a: &Event, b: &Event) -> Result<Rational> {
    require_increasing(a)?;
    require_increasing(b)?;
    let g = d.graph();
    a.validate(g)?;
    b.validate(g)?;
    let (mut pa, mut pb, mut pab) = (Rational::zero(), Rational::zero(), Rational::zero());
    for (w, v) in d.support() {
        let (ha, hb) = (a.holds(g, w), b.holds(g, w));
        if ha {
            pa += v;
        }
        if hb {
            pb += v;
        }
        if ha && hb {
            pab += v;
        }
    }
    let z = d.normalizer();
    Ok(pab / z - (pa / z) * (pb / z))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub holds: bool,
    /// First incomparable support pair, in bitmask order, with
    /// `P(w ∨ w') P(w ∧ w') < P(w) P(w')`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<(EdgeSet, EdgeSet)>,
}

/// Checks the FKG lattice condition over all pairs of support points.
/// Pairs with a point outside the support hold trivially.
pub fn lattice_condition(d: &Dist) -> LatticeReport {
    let iw = d.integer_weights();
    let index: std::collections::HashMap<EdgeSet, usize> =
        iw.sets.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let weight = |w: EdgeSet| index.get(&w).map(|&i| &iw.weights[i]);
    for (i, &w1) in iw.sets.iter().enumerate() {
        for (j, &w2) in iw.sets.iter().enumerate().skip(i + 1) {
            if w1.is_subset(w2) || w2.is_subset(w1) {
                continue;
            }
            let rhs = &iw.weights[i] * &iw.weights[j];
            let ok = match (weight(w1 | w2), weight(w1 & w2)) {
                (Some(a), Some(b)) => a * b >= rhs,
                _ => false,
            };
            if !ok {
                return LatticeReport {
                    holds: false,
                    violation: Some((w1, w2)),
                };
            }
        }
    }
    LatticeReport {
        holds: true,
        violation: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairGap {
    pub first: String,
    pub second: String,
    #[serde(with = "serde_fraction")]
    pub gap: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FkgReport {
    pub gaps: Vec<PairGap>,
    pub lattice: LatticeReport,
}

impl FkgReport {
    /// The most negative gap, if any pair is negatively correlated.
    pub fn worst_violation(&self) -> Option<&PairGap> {
        self.gaps
            .iter()
            .filter(|g| g.gap < Rational::zero())
            .min_by(|a, b| a.gap.cmp(&b.gap))
    }
}

/// Pairwise gaps over all unordered pairs of `events` plus the lattice condition.
pub fn fkg_report(d: &Dist, events: &[Event]) -> Result<FkgReport> {
    let mut gaps = Vec::new();
    for (i, a) in events.iter().enumerate() {
        for b in &events[i..] {
            gaps.push(PairGap {
                first: a.label(),
                second: b.label(),
                gap: fkg_pair_gap(d, a, b)?,
            });
        }
    }
    Ok(FkgReport {
        gaps,
        lattice: lattice_condition(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::error::Error;
    use crate::graph::{generalized_theta, theta_segments};
    use crate::measures::{bernoulli, double_current, loop_o1};
    use std::sync::Arc;

    #[test]
    fn product_measure_satisfies_lattice_condition() {
        let g = Arc::new(generalized_theta(&[1, 2, 2], None).unwrap());
        assert!(lattice_condition(&bernoulli(&g, &rat(1, 3)).unwrap()).holds);
    }

    #[test]
    fn loop_model_fails_lattice_condition() {
        let g = Arc::new(generalized_theta(&[1, 1, 1], None).unwrap());
        let report = lattice_condition(&loop_o1(&g, &rat(1, 2)).unwrap());
        assert!(!report.holds);
        let (w1, w2) = report.violation.unwrap();
        assert_eq!((w1.len(), w2.len()), (2, 2));
        assert!(!g.is_even(w1 | w2));
    }

    #[test]
    fn double_current_fails_lattice_condition() {
        let g = Arc::new(generalized_theta(&[2, 2, 2], None).unwrap());
        assert!(!lattice_condition(&double_current(&g, &rat(1, 2)).unwrap()).holds);
    }

    #[test]
    fn loop_model_theta_gap_is_negative() {
        let g = Arc::new(generalized_theta(&[2, 2, 2], None).unwrap());
        let segs = theta_segments(&[2, 2, 2]);
        let x1 = Event::all_open(segs[0] | segs[1]);
        let x2 = Event::all_open(segs[1] | segs[2]);
        let d = loop_o1(&g, &rat(1, 10)).unwrap();
        let gap = fkg_pair_gap(&d, &x1, &x2).unwrap();
        assert!(gap < Rational::zero());
    }

    #[test]
    fn non_increasing_events_are_rejected() {
        let g = Arc::new(generalized_theta(&[1, 1, 1], None).unwrap());
        let d = loop_o1(&g, &rat(1, 2)).unwrap();
        let odd = Event::predicate(&g, "odd", |_, w| w.len() % 2 == 1);
        let r = fkg_pair_gap(&d, &odd, &Event::edge_open(1));
        assert!(matches!(r, Err(Error::NotIncreasing(_))));
    }
}
