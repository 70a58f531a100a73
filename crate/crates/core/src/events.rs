//! Events and statistics over edge configurations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::arith::Rational;
use crate::error::{parse_err, Error, Result};
use crate::graph::{cyclic_edges, EdgeSet, Graph};
use crate::measures::Dist;

type PredicateFn = dyn Fn(&Graph, EdgeSet) -> bool + Send + Sync;

/// A named custom predicate.
#[derive(Clone)]
pub struct Predicate {
    name: String,
    test: Arc<PredicateFn>,
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Predicate")
            .field("name", &self.name)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum EventKind {
    /// Some vertex of `from` is joined to some vertex of `to` by open edges.
    Connect {
        from: Vec<usize>,
        to: Vec<usize>,
    },
    EdgeOpen(usize),
    /// The edge is open and lies on a cycle of open edges.
    EdgeOpenCyclic(usize),
    AllOpen(EdgeSet),
    Predicate(Predicate),
}

/// A reified predicate over configurations, with a flag recording whether it
/// is known to be increasing (closed under opening edges).
#[derive(Clone, Debug)]
pub struct Event {
    kind: EventKind,
    declared_increasing: bool,
}

impl Event {
    pub fn connect(from: Vec<usize>, to: Vec<usize>) -> Self {
        Event {
            kind: EventKind::Connect { from, to },
            declared_increasing: true,
        }
    }

    /// `{a <-> b}` for the marked vertices of `g`.
    pub fn connect_marks(g: &Graph) -> Result<Self> {
        Ok(Event::connect(vec![g.mark("a")?], vec![g.mark("b")?]))
    }

    pub fn edge_open(e: usize) -> Self {
        Event {
            kind: EventKind::EdgeOpen(e),
            declared_increasing: true,
        }
    }

    pub fn all_open(set: EdgeSet) -> Self {
        Event {
            kind: EventKind::AllOpen(set),
            declared_increasing: true,
        }
    }

    /// `e` is open and lies on a cycle of open edges. A cycle through `e`
    /// survives opening more edges, so the event is increasing.
    pub fn edge_open_cyclic(e: usize) -> Self {
        Event {
            kind: EventKind::EdgeOpenCyclic(e),
            declared_increasing: true,
        }
    }

    /// Custom predicate. It is flagged increasing only if the exhaustive
    /// covering-pair check on `g` passes.
    pub fn predicate<F>(g: &Graph, name: &str, test: F) -> Self
    where
        F: Fn(&Graph, EdgeSet) -> bool + Send + Sync + 'static,
    {
        let mut ev = Event {
            kind: EventKind::Predicate(Predicate {
                name: name.to_string(),
                test: Arc::new(test),
            }),
            declared_increasing: false,
        };
        ev.declared_increasing = check_increasing(&ev, g)
            .map(|c| c.increasing)
            .unwrap_or(false);
        ev
    }

    pub fn kind(&self) -> &EventKind {
        &self.kind
    }

    pub fn is_declared_increasing(&self) -> bool {
        self.declared_increasing
    }

    /// Parses `connect:a,b`, `edge:3`, `edge-cyclic:3` or `allopen:0,1,2`.
    /// Connect endpoints are mark names or vertex ids; `+` joins several
    /// vertices into a set, as in `connect:0+1,5`.
    pub fn parse(spec: &str, g: &Graph) -> Result<Self> {
        let (tag, rest) = spec
            .split_once(':')
            .ok_or_else(|| parse_err(spec, "expected `kind:args`"))?;
        let index = |s: &str| -> Result<usize> {
            s.trim()
                .parse()
                .map_err(|_| parse_err(spec, format!("bad index `{s}`")))
        };
        let vertex_set = |s: &str| -> Result<Vec<usize>> {
            s.split('+')
                .map(|t| match t.trim() {
                    "a" | "b" => g.mark(t.trim()),
                    other => index(other),
                })
                .collect()
        };
        let ev = match tag {
            "connect" => {
                let (from, to) = rest
                    .split_once(',')
                    .ok_or_else(|| parse_err(spec, "connect needs two endpoints"))?;
                Event::connect(vertex_set(from)?, vertex_set(to)?)
            }
            "edge" => Event::edge_open(index(rest)?),
            "edge-cyclic" => Event::edge_open_cyclic(index(rest)?),
            "allopen" => Event::all_open(
                rest.split(',')
                    .map(index)
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .collect(),
            ),
            _ => return Err(parse_err(spec, format!("unknown event kind `{tag}`"))),
        };
        ev.validate(g)?;
        Ok(ev)
    }

    /// Checks that every referenced vertex and edge exists in `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        match &self.kind {
            EventKind::Connect { from, to } => {
                for &v in from.iter().chain(to) {
                    g.check_vertex(v)?;
                }
                Ok(())
            }
            EventKind::EdgeOpen(e) | EventKind::EdgeOpenCyclic(e) => g.edge(*e).map(|_| ()),
            EventKind::AllOpen(set) => g.check_edge_set(*set),
            EventKind::Predicate(_) => Ok(()),
        }
    }

    pub fn evaluate(&self, g: &Graph, open: EdgeSet) -> Result<bool> {
        self.validate(g)?;
        g.check_edge_set(open)?;
        Ok(self.holds(g, open))
    }

    /// Unchecked evaluation; callers validate once up front.
    pub fn holds(&self, g: &Graph, open: EdgeSet) -> bool {
        match &self.kind {
            EventKind::Connect { from, to } => g.components(open).sets_connected(from, to),
            EventKind::EdgeOpen(e) => open.contains(*e),
            EventKind::EdgeOpenCyclic(e) => open.contains(*e) && cyclic_edges(g, open).contains(*e),
            EventKind::AllOpen(set) => set.is_subset(open),
            EventKind::Predicate(p) => (p.test)(g, open),
        }
    }

    pub fn label(&self) -> String {
        let join = |vs: &[usize]| {
            vs.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("+")
        };
        match &self.kind {
            EventKind::Connect { from, to } => format!("connect:{},{}", join(from), join(to)),
            EventKind::EdgeOpen(e) => format!("edge:{e}"),
            EventKind::EdgeOpenCyclic(e) => format!("edge-cyclic:{e}"),
            EventKind::AllOpen(set) => format!(
                "allopen:{}",
                set.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            EventKind::Predicate(p) => format!("predicate:{}", p.name),
        }
    }
}

/// Verdict of a monotonicity check, with the lexicographically first
/// violating pair `(smaller, larger)` when the event is not increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncreasingCheck {
    pub increasing: bool,
    pub witness: Option<(EdgeSet, EdgeSet)>,
}

fn truth_table(ev: &Event, g: &Graph) -> Result<Vec<bool>> {
    ev.validate(g)?;
    Ok(g.all_subsets()?.map(|w| ev.holds(g, w)).collect())
}

/// Checks every covering pair `w ⊂ w ∪ {e}`: `|E| 2^(|E|-1)` comparisons.
pub fn check_increasing(ev: &Event, g: &Graph) -> Result<IncreasingCheck> {
    let table = truth_table(ev, g)?;
    let n = g.edge_count();
    for (bits, &holds) in table.iter().enumerate() {
        if !holds {
            continue;
        }
        let w = EdgeSet::from_bits(bits as u64);
        for e in 0..n {
            if !w.contains(e) && !table[w.with(e).bits() as usize] {
                return Ok(IncreasingCheck {
                    increasing: false,
                    witness: Some((w, w.with(e))),
                });
            }
        }
    }
    Ok(IncreasingCheck {
        increasing: true,
        witness: None,
    })
}

/// Checks every comparable pair `w ⊆ w'`: `3^|E|` comparisons. Agrees with
/// [`check_increasing`] on the verdict; used to cross-check it.
pub fn check_increasing_exhaustive(ev: &Event, g: &Graph) -> Result<IncreasingCheck> {
    let table = truth_table(ev, g)?;
    let full = g.full_set().bits();
    for (bits, &holds) in table.iter().enumerate() {
        if !holds {
            continue;
        }
        let base = bits as u64;
        let free = full & !base;
        let mut extra = free;
        loop {
            let upper = base | extra;
            if !table[upper as usize] {
                return Ok(IncreasingCheck {
                    increasing: false,
                    witness: Some((EdgeSet::from_bits(base), EdgeSet::from_bits(upper))),
                });
            }
            if extra == 0 {
                break;
            }
            extra = (extra - 1) & free;
        }
    }
    Ok(IncreasingCheck {
        increasing: true,
        witness: None,
    })
}

/// Integer-valued statistics of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    /// Number of open edges lying on an open cycle.
    CyclicCount,
    EdgeCount,
}

impl Statistic {
    pub fn value(self, g: &Graph, open: EdgeSet) -> usize {
        match self {
            Statistic::CyclicCount => cyclic_edges(g, open).len(),
            Statistic::EdgeCount => open.len(),
        }
    }
}

/// Exact law of a statistic under `d`.
pub fn statistic_dist(d: &Dist, s: Statistic) -> BTreeMap<usize, Rational> {
    let g = d.graph();
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    for (w, weight) in d.support() {
        *out.entry(s.value(g, w)).or_insert_with(Rational::zero) += weight;
    }
    for v in out.values_mut() {
        *v /= d.normalizer();
    }
    out
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub(crate) fn require_increasing(ev: &Event) -> Result<()> {
    if ev.declared_increasing {
        Ok(())
    } else {
        Err(Error::NotIncreasing(ev.label()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{pow, rat};
    use crate::graph::{generalized_theta, theta_segments};
    use crate::measures::{bernoulli, point_mass};

    fn triangle_plus_pendant() -> Graph {
        Graph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let g = triangle_plus_pendant();
        let s = EdgeSet::from_edges([0, 3]);
        assert!(Event::all_open(s).evaluate(&g, s).unwrap());
        let path = EdgeSet::from_edges([0, 1]);
        assert!(!Event::edge_open_cyclic(0).evaluate(&g, path).unwrap());
        assert!(Event::edge_open_cyclic(0)
            .evaluate(&g, EdgeSet::from_edges([0, 1, 2]))
            .unwrap());

        let c = generalized_theta(&[2, 2, 2, 2], Some((2, 3))).unwrap();
        let segs = theta_segments(&[2, 2, 2, 2]);
        let ab = Event::connect_marks(&c).unwrap();
        // upper n-path with upper m-path: a on the loop, b isolated
        assert!(!ab.evaluate(&c, segs[0] | segs[2]).unwrap());
        assert!(ab.evaluate(&c, segs[2] | segs[3]).unwrap());
    }

    #[test]
    fn evaluation_rejects_foreign_indices() {
        let g = triangle_plus_pendant();
        assert!(Event::edge_open(9).evaluate(&g, EdgeSet::EMPTY).is_err());
        assert!(Event::connect(vec![0], vec![11])
            .evaluate(&g, EdgeSet::EMPTY)
            .is_err());
        assert!(Event::edge_open(0)
            .evaluate(&g, EdgeSet::singleton(30))
            .is_err());
    }

    #[test]
    fn parse_event_specs() {
        let g = generalized_theta(&[2, 2, 2, 2], Some((2, 3))).unwrap();
        let (a, b) = (g.mark("a").unwrap(), g.mark("b").unwrap());
        let ev = Event::parse("connect:a,b", &g).unwrap();
        assert_eq!(ev.label(), format!("connect:{a},{b}"));
        assert_eq!(Event::parse("edge:3", &g).unwrap().label(), "edge:3");
        assert!(Event::parse("edge-cyclic:3", &g)
            .unwrap()
            .is_declared_increasing());
        let ev = Event::parse("allopen:0,1,2", &g).unwrap();
        assert_eq!(ev.label(), "allopen:0,1,2");
        assert_eq!(
            Event::parse("connect:0+1,b", &g).unwrap().label(),
            format!("connect:0+1,{b}")
        );
        assert!(Event::parse("edge:99", &g).is_err());
        assert!(Event::parse("bogus:1", &g).is_err());
        assert!(Event::parse("connect:a", &g).is_err());
        let plain = Graph::complete(3).unwrap();
        assert!(matches!(
            Event::parse("connect:a,b", &plain),
            Err(Error::MissingMark(_))
        ));
    }

    #[test]
    fn standard_events_are_increasing() {
        let g = generalized_theta(&[2, 2, 2, 2], Some((2, 3))).unwrap();
        for ev in [
            Event::connect_marks(&g).unwrap(),
            Event::edge_open(5),
            Event::all_open(EdgeSet::from_edges([1, 4])),
            Event::edge_open_cyclic(0),
        ] {
            assert!(check_increasing(&ev, &g).unwrap().increasing, "{ev}");
        }
        let g = triangle_plus_pendant();
        for e in 0..4 {
            let ev = Event::edge_open_cyclic(e);
            assert!(check_increasing(&ev, &g).unwrap().increasing);
            assert!(check_increasing_exhaustive(&ev, &g).unwrap().increasing);
        }
    }

    #[test]
    fn cyclic_count_event_is_not_increasing() {
        // triangle 0-1-2 plus a second edge between 0 and 1
        let g = Graph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 1)]).unwrap();
        let ev = Event::predicate(&g, "cyclic-count=3", |g, w| {
            Statistic::CyclicCount.value(g, w) == 3
        });
        assert!(!ev.is_declared_increasing());
        let check = check_increasing(&ev, &g).unwrap();
        assert!(!check.increasing);
        // the triangle holds; adding the parallel edge makes all four cyclic
        assert_eq!(
            check.witness,
            Some((EdgeSet::from_bits(0b0111), EdgeSet::from_bits(0b1111)))
        );
        assert!(!check_increasing_exhaustive(&ev, &g).unwrap().increasing);

        // with a pendant edge instead, the same statistic event is increasing
        let g = triangle_plus_pendant();
        let ev = Event::predicate(&g, "cyclic-count=3", |g, w| {
            Statistic::CyclicCount.value(g, w) == 3
        });
        assert!(ev.is_declared_increasing());
    }

    #[test]
    fn statistic_laws() {
        let g = Arc::new(triangle_plus_pendant());
        let p = rat(1, 3);
        let law = statistic_dist(&bernoulli(&g, &p).unwrap(), Statistic::EdgeCount);
        let q = rat(2, 3);
        let binom = [1, 4, 6, 4, 1];
        for (k, c) in binom.iter().enumerate() {
            let expected = rat(*c, 1) * pow(&p, k as u64) * pow(&q, 4 - k as u64);
            assert_eq!(law[&k], expected);
        }
        let law = statistic_dist(
            &point_mass(&g, EdgeSet::EMPTY).unwrap(),
            Statistic::CyclicCount,
        );
        assert_eq!(law.len(), 1);
        assert_eq!(law[&0], rat(1, 1));
    }
}
