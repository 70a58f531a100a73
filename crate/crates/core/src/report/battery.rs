use std::sync::Arc;

use rand::Rng;

use crate::arith::{rat, Rational};
use crate::error::Result;
use crate::graph::{generalized_theta, Graph};
use crate::sampler::stream_rng;
use crate::theta::counter_graph;

pub const BATTERY_SEED: u64 = 20_190_101;
pub const RANDOM_GRAPHS: usize = 20;

#[derive(Clone, Debug)]
pub struct BatteryGraph {
    pub name: String,
    pub graph: Arc<Graph>,
}

impl BatteryGraph {
    pub fn new(name: impl Into<String>, graph: Graph) -> Self {
        BatteryGraph {
            name: name.into(),
            graph: Arc::new(graph),
        }
    }
}

/// `x` values used by the identity suites.
pub fn standard_xs() -> Vec<Rational> {
    vec![rat(1, 10), rat(1, 4), rat(1, 2), rat(3, 4), rat(9, 10)]
}

/// Multigraph on 3 to 6 vertices with at most `max_edges` edges; roughly one
/// graph in five gets a self-loop.
pub fn random_graph<R: Rng>(rng: &mut R, max_edges: usize) -> Result<Graph> {
    let v = rng.random_range(3..=6usize);
    let e = rng.random_range(v..=max_edges.max(v));
    let mut edges = Vec::with_capacity(e);
    let with_loop = rng.random_range(0..5) == 0;
    for i in 0..e {
        let a = rng.random_range(0..v);
        let b = if with_loop && i == 0 {
            a
        } else {
            (a + rng.random_range(1..v)) % v
        };
        edges.push((a, b));
    }
    Graph::new(v, edges)
}

pub fn k5_minus_edge() -> Result<Graph> {
    let k5 = Graph::complete(5)?;
    Graph::new(5, k5.edges()[1..].to_vec())
}

/// theta[1,1,1], theta[2,3,2], counter(2,2), K4, K5 minus an edge and
/// `RANDOM_GRAPHS` seeded random multigraphs with at most 10 edges.
pub fn standard_battery() -> Result<Vec<BatteryGraph>> {
    let mut out = vec![
        BatteryGraph::new("theta[1,1,1]", generalized_theta(&[1, 1, 1], None)?),
        BatteryGraph::new("theta[2,3,2]", generalized_theta(&[2, 3, 2], None)?),
        BatteryGraph::new("counter(2,2)", counter_graph(2, 2)?),
        BatteryGraph::new("K4", Graph::complete(4)?),
        BatteryGraph::new("K5-e", k5_minus_edge()?),
    ];
    let mut rng = stream_rng(BATTERY_SEED, 0);
    for i in 0..RANDOM_GRAPHS {
        out.push(BatteryGraph::new(
            format!("random#{i}"),
            random_graph(&mut rng, 10)?,
        ));
    }
    Ok(out)
}

/// Graphs with at most 8 edges used for grid scans.
pub fn scan_battery() -> Result<Vec<BatteryGraph>> {
    Ok(vec![
        BatteryGraph::new("theta[1,1,1]", generalized_theta(&[1, 1, 1], None)?),
        BatteryGraph::new("theta[1,2,2]", generalized_theta(&[1, 2, 2], None)?),
        BatteryGraph::new("K4", Graph::complete(4)?),
        BatteryGraph::new("counter(2,2)", counter_graph(2, 2)?),
    ])
}
