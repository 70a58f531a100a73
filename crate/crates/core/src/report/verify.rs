use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;

use super::battery::{scan_battery, BatteryGraph};
use crate::arith::{dyadic_grid, rat, to_fraction, Rational};
use crate::checkers::{union_preservation_test, UnionVerdict};
use crate::error::{Error, Result};
use crate::events::Event;
use crate::graph::generalized_theta;
use crate::measures::{
    bernoulli, double_cluster, double_current, double_current_lis, double_loop, loop_o1, prob,
    push_uniform_even, random_cluster, single_current, union, union_bernoulli, CurrentParams,
};
use crate::theta::{
    counter_pair_table, counter_subgraph_table, theta_pair_table, COUNTER_ROWS_EXPECTED,
    LX1_EXPECTED, LX2_EXPECTED, LX3_EXPECTED,
};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    NewCoupling,
    Cor1,
    EdgeIdentities,
    SumThm,
    LisEquivalence,
    AppendixTables,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::NewCoupling,
        Suite::Cor1,
        Suite::EdgeIdentities,
        Suite::SumThm,
        Suite::LisEquivalence,
        Suite::AppendixTables,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Suite::NewCoupling => "newcoupling",
            Suite::Cor1 => "cor1",
            Suite::EdgeIdentities => "edge-identities",
            Suite::SumThm => "sumthm",
            Suite::LisEquivalence => "lis-equivalence",
            Suite::AppendixTables => "appendix-tables",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|t| t.tag() == s)
            .ok_or_else(|| crate::error::parse_err(s, "unknown suite"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: String, passed: bool) -> Self {
        Check {
            name,
            passed,
            detail: None,
        }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn label(b: &BatteryGraph, x: &Rational) -> String {
    format!("{} x={}", b.name, to_fraction(x))
}

fn grid_cases<F>(battery: &[BatteryGraph], xs: &[Rational], f: F) -> Result<Vec<Check>>
where
    F: Fn(&BatteryGraph, &Rational) -> Result<Vec<Check>> + Sync + Send,
{
    let cases: Vec<(usize, usize)> = (0..battery.len())
        .flat_map(|i| (0..xs.len()).map(move |j| (i, j)))
        .collect();
    let results = crate::par_map(&cases, |&(i, j)| f(&battery[i], &xs[j]));
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn new_coupling(b: &BatteryGraph, x: &Rational) -> Result<Vec<Check>> {
    let pushed = push_uniform_even(&double_current(&b.graph, x)?)?;
    let ok = pushed.same_law(&loop_o1(&b.graph, x)?);
    Ok(vec![Check::new(label(b, x), ok)])
}

fn cor1(b: &BatteryGraph, x: &Rational) -> Result<Vec<Check>> {
    let g = &b.graph;
    let dc = double_current(g, x)?;
    let lp = loop_o1(g, x)?;
    let rc = random_cluster(g, x)?;
    let half = rat(1, 2);
    let mut out = Vec::new();
    for e in 0..g.edge_count() {
        let cyc = Event::edge_open_cyclic(e);
        let l = prob(&lp, &Event::edge_open(e))?;
        let a = &half * prob(&dc, &cyc)?;
        let c = &half * prob(&rc, &cyc)?;
        out.push(
            Check::new(format!("{} e={e}", label(b, x)), a == l && l == c).with_detail(format!(
                "{} / {} / {}",
                to_fraction(&a),
                to_fraction(&l),
                to_fraction(&c)
            )),
        );
    }
    Ok(out)
}

fn edge_identities(b: &BatteryGraph, x: &Rational) -> Result<Vec<Check>> {
    let g = &b.graph;
    let lp = loop_o1(g, x)?;
    let dl = double_loop(g, x)?;
    let ps = [rat(1, 3), x.clone(), x * x];
    let with_p: Vec<_> = ps
        .iter()
        .map(|p| union_bernoulli(&lp, p))
        .collect::<Result<_>>()?;
    let one = Rational::one();
    let two = &one + &one;
    let mut out = Vec::new();
    for e in 0..g.edge_count() {
        let ev = Event::edge_open(e);
        let l = prob(&lp, &ev)?;
        let mut ok = prob(&dl, &ev)? == &l * (&two - &l);
        for (p, d) in ps.iter().zip(&with_p) {
            ok &= prob(d, &ev)? == &l + p * (&one - &l);
        }
        out.push(Check::new(format!("{} e={e}", label(b, x)), ok));
    }
    Ok(out)
}

fn lis_equivalence(b: &BatteryGraph, x: &Rational) -> Result<Vec<Check>> {
    let g = &b.graph;
    let dc = double_current(g, x)?;
    let rc = random_cluster(g, x)?;
    let dcl = double_cluster(g, x)?;
    Ok(vec![
        Check::new(
            format!("{} lis", label(b, x)),
            double_current_lis(g, x)?.same_law(&dc),
        ),
        Check::new(
            format!("{} cluster pair", label(b, x)),
            union(&rc, &rc)?.same_law(&dcl),
        ),
    ])
}

/// Pythagorean points where the single current is exact.
fn pythagorean_ts() -> Vec<Rational> {
    vec![rat(1, 3), rat(1, 2), rat(2, 3)]
}

fn single_pair(b: &BatteryGraph, t: &Rational) -> Result<Vec<Check>> {
    let params = CurrentParams::from_t(t.clone())?;
    let sc = single_current(&b.graph, &params)?;
    let ok = union(&sc, &sc)?.same_law(&double_current(&b.graph, params.x())?);
    Ok(vec![Check::new(
        format!("{} single pair t={}", b.name, to_fraction(t)),
        ok,
    )])
}

fn appendix_tables() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (n, m) in [(1, 1), (2, 2), (3, 2), (2, 5)] {
        out.push(Check::new(
            format!("lX1 theta[{n},{m},{n}]"),
            theta_pair_table(n, m, false)?.matches(&LX1_EXPECTED),
        ));
        out.push(Check::new(
            format!("lX2 theta[{n},{m},{n}]"),
            theta_pair_table(n, m, true)?.matches(&LX2_EXPECTED),
        ));
    }
    for (n, m) in [(1, 2), (2, 2), (3, 2), (5, 4)] {
        out.push(Check::new(
            format!("lX3 counter({n},{m})"),
            counter_pair_table(n, m)?.matches(&LX3_EXPECTED),
        ));
        let rows = counter_subgraph_table(n, m)?;
        let shapes: Vec<_> = rows.iter().map(|r| r.shape()).collect();
        let sizes_ok = rows
            .iter()
            .all(|r| r.edges as u32 == r.n_coeff * n + r.m_coeff * m);
        out.push(Check::new(
            format!("subgraph table counter({n},{m})"),
            shapes == COUNTER_ROWS_EXPECTED && sizes_ok,
        ));
    }
    Ok(out)
}

fn sum_thm() -> Result<Vec<Check>> {
    let grid = dyadic_grid(4);
    let mut out = Vec::new();
    let theta111 = Arc::new(generalized_theta(&[1, 1, 1], None)?);
    let mut cases: Vec<(String, Arc<crate::graph::Graph>, &str, &str)> = Vec::new();
    for b in scan_battery()? {
        for (f1, f2) in [
            ("bernoulli", "bernoulli"),
            ("random-cluster", "random-cluster"),
            ("random-cluster", "bernoulli"),
        ] {
            cases.push((b.name.clone(), b.graph.clone(), f1, f2));
        }
    }
    cases.push(("theta[1,1,1]".into(), theta111, "loop", "bernoulli"));
    for (name, g, f1, f2) in cases {
        let family = |tag: &str| {
            let g = g.clone();
            let tag = tag.to_string();
            move |x: &Rational| match tag.as_str() {
                "bernoulli" => bernoulli(&g, x),
                "random-cluster" => random_cluster(&g, x),
                _ => loop_o1(&g, x),
            }
        };
        let events: Vec<Event> = (0..g.edge_count().min(3)).map(Event::edge_open).collect();
        let r = union_preservation_test(family(f1), family(f2), &grid, &events)?;
        let min_gap = r
            .union_gaps
            .iter()
            .flat_map(|gg| gg.gaps.iter().map(|p| p.gap.clone()))
            .min();
        let detail = format!(
            "{:?}; smallest union gap on edge events {}",
            r.verdict,
            min_gap
                .map(|g| to_fraction(&g))
                .unwrap_or_else(|| "-".into())
        );
        out.push(
            Check::new(
                format!("{name} {f1} ∪ {f2}"),
                r.verdict == UnionVerdict::Preserved,
            )
            .with_detail(detail),
        );
    }
    Ok(out)
}

/// Runs one identity suite. Failures are reported in the result, not as errors.
pub fn verify(suite: Suite, battery: &[BatteryGraph], xs: &[Rational]) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::NewCoupling => grid_cases(battery, xs, new_coupling)?,
        Suite::Cor1 => grid_cases(battery, xs, cor1)?,
        Suite::EdgeIdentities => grid_cases(battery, xs, edge_identities)?,
        Suite::LisEquivalence => {
            let mut c = grid_cases(battery, xs, lis_equivalence)?;
            c.extend(grid_cases(battery, &pythagorean_ts(), single_pair)?);
            c
        }
        Suite::SumThm => sum_thm()?,
        Suite::AppendixTables => appendix_tables()?,
    };
    Ok(SuiteReport { suite, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn small() -> Vec<BatteryGraph> {
        vec![
            BatteryGraph::new("theta[1,1,1]", generalized_theta(&[1, 1, 1], None).unwrap()),
            BatteryGraph::new("tree", Graph::new(3, vec![(0, 1), (1, 2)]).unwrap()),
        ]
    }

    #[test]
    fn suites_pass_on_small_graphs() {
        let xs = [rat(1, 2)];
        for suite in Suite::ALL {
            let r = verify(suite, &small(), &xs).unwrap();
            assert!(
                r.passed(),
                "{suite}: {:?}",
                r.failures().collect::<Vec<_>>()
            );
            assert!(!r.checks.is_empty());
        }
    }

    #[test]
    fn cor1_on_a_tree_is_degenerate() {
        let r = verify(Suite::Cor1, &small()[1..], &[rat(1, 4)]).unwrap();
        assert!(r.passed());
        assert!(r
            .checks
            .iter()
            .all(|c| c.detail.as_deref() == Some("0/1 / 0/1 / 0/1")));
    }

    #[test]
    fn suite_tags_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.tag().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
