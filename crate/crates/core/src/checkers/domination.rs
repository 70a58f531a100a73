use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::flow::FlowNetwork;
use crate::arith::rational::serde_fraction;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::graph::EdgeSet;
use crate::measures::Dist;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Dominates,
    Fails,
}

/// An up-set, given by its minimal elements, that the lower law charges
/// strictly more than the upper law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpSetWitness {
    pub minimal: Vec<EdgeSet>,
    #[serde(with = "serde_fraction")]
    pub lower_mass: Rational,
    #[serde(with = "serde_fraction")]
    pub upper_mass: Rational,
    #[serde(with = "serde_fraction")]
    pub gap: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CouplingEntry {
    pub lower: EdgeSet,
    pub upper: EdgeSet,
    #[serde(with = "serde_fraction")]
    pub mass: Rational,
}

/// Outcome of a stochastic domination check: a monotone coupling when the
/// upper law dominates, otherwise a violating up-set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominationReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<UpSetWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<Vec<CouplingEntry>>,
}

impl DominationReport {
    pub fn dominates(&self) -> bool {
        self.verdict == Verdict::Dominates
    }
}

/// Mass that `d` puts on the up-set generated by `minimal`.
pub fn up_set_mass(d: &Dist, minimal: &[EdgeSet]) -> Rational {
    let hit = d
        .support()
        .filter(|(w, _)| minimal.iter().any(|m| m.is_subset(*w)))
        .fold(Rational::zero(), |acc, (_, v)| acc + v);
    hit / d.normalizer()
}

fn minimal_elements(mut sets: Vec<EdgeSet>) -> Vec<EdgeSet> {
    sets.sort_by_key(|s| (s.len(), *s));
    let mut out: Vec<EdgeSet> = Vec::new();
    for s in sets {
        if !out.iter().any(|m| m.is_subset(s)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// Decides whether `upper` stochastically dominates `lower` by searching for
/// a coupling supported on pairs `A ⊆ B`, as a maximum flow from the lower
/// support to the upper support. Arithmetic is exact throughout.
pub fn stochastic_domination(lower: &Dist, upper: &Dist) -> Result<DominationReport> {
    if **lower.graph() != **upper.graph() {
        return Err(Error::GraphMismatch);
    }
    let lo = lower.integer_weights();
    let hi = upper.integer_weights();
    let (nl, nh) = (lo.sets.len(), hi.sets.len());
    let (source, sink) = (0, nl + nh + 1);
    let total: BigInt = &lo.total * &hi.total;

    let mut net = FlowNetwork::new(nl + nh + 2);
    for (i, w) in lo.weights.iter().enumerate() {
        net.add_edge(source, 1 + i, w * &hi.total);
    }
    for (j, w) in hi.weights.iter().enumerate() {
        net.add_edge(1 + nl + j, sink, w * &lo.total);
    }
    // middle arcs are never saturated by a flow below `total`, so minimum
    // cuts of value < total avoid them
    let unbounded = &total + BigInt::from(1);
    let mut middle = Vec::new();
    for (i, a) in lo.sets.iter().enumerate() {
        for (j, b) in hi.sets.iter().enumerate() {
            if a.is_subset(*b) {
                middle.push((i, j, net.add_edge(1 + i, 1 + nl + j, unbounded.clone())));
            }
        }
    }

    let flow = net.max_flow(source, sink);
    if flow == total {
        let coupling = middle
            .into_iter()
            .filter_map(|(i, j, arc)| {
                let f = net.flow_on(arc);
                (!f.is_zero()).then(|| CouplingEntry {
                    lower: lo.sets[i],
                    upper: hi.sets[j],
                    mass: Rational::new(f, total.clone()),
                })
            })
            .collect();
        return Ok(DominationReport {
            verdict: Verdict::Dominates,
            witness: None,
            coupling: Some(coupling),
        });
    }

    let side = net.residual_reachable(source);
    let reached: Vec<EdgeSet> = (0..nl)
        .filter(|&i| side[1 + i])
        .map(|i| lo.sets[i])
        .collect();
    let minimal = minimal_elements(reached);
    let lower_mass = up_set_mass(lower, &minimal);
    let upper_mass = up_set_mass(upper, &minimal);
    let gap = &lower_mass - &upper_mass;
    debug_assert!(gap > Rational::zero());
    Ok(DominationReport {
        verdict: Verdict::Fails,
        witness: Some(UpSetWitness {
            minimal,
            lower_mass,
            upper_mass,
            gap,
        }),
        coupling: None,
    })
}
