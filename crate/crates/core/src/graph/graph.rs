use serde::{Deserialize, Serialize};

use super::edgeset::{EdgeSet, MAX_EDGES};
use crate::error::{Error, Result};

/// Enumeration caps for operations that walk exponentially large spaces.
///
/// Exceeding a cap is a typed error; nothing is silently truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest edge count for which all `2^|E|` subsets may be enumerated.
    pub subset_edges: usize,
    /// Largest cycle-space dimension whose span may be enumerated.
    pub cycle_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subset_edges: 24,
            cycle_dim: 20,
        }
    }
}

/// Optional named vertices `a` and `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marks {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
}

/// A finite multigraph. Parallel edges and self-loops are allowed and edge
/// indices follow insertion order.
#[derive(Clone, Debug)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    marks: Marks,
    limits: Limits,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.edges == other.edges
            && self.marks == other.marks
    }
}

impl Eq for Graph {}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    marks: Marks,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.len() > MAX_EDGES {
            return Err(Error::TooManyEdges {
                edges: edges.len(),
                max: MAX_EDGES,
            });
        }
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
        }
        Ok(Graph {
            vertex_count,
            edges,
            marks: Marks::default(),
            limits: Limits::default(),
        })
    }

    pub fn with_marks(mut self, a: usize, b: usize) -> Result<Self> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        self.marks = Marks {
            a: Some(a),
            b: Some(b),
        };
        Ok(self)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    /// Complete graph on `k` vertices, edges in lexicographic order.
    pub fn complete(k: usize) -> Result<Self> {
        let edges = (0..k)
            .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
            .collect();
        Graph::new(k, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<(usize, usize)> {
        self.edges.get(e).copied().ok_or(Error::EdgeOutOfRange {
            edge: e,
            edge_count: self.edges.len(),
        })
    }

    pub fn marks(&self) -> Marks {
        self.marks
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Resolves a mark name (`a` or `b`) to its vertex.
    pub fn mark(&self, name: &str) -> Result<usize> {
        let v = match name {
            "a" => self.marks.a,
            "b" => self.marks.b,
            _ => None,
        };
        v.ok_or_else(|| Error::MissingMark(name.to_string()))
    }

    pub fn full_set(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count,
            })
        }
    }

    pub fn check_edge_set(&self, set: EdgeSet) -> Result<()> {
        if set.is_subset(self.full_set()) {
            Ok(())
        } else {
            let edge = (set - self.full_set()).iter().next().unwrap_or(0);
            Err(Error::EdgeOutOfRange {
                edge,
                edge_count: self.edges.len(),
            })
        }
    }

    /// Fails unless all `2^|E|` subsets may be enumerated.
    pub fn check_subset_cap(&self) -> Result<()> {
        let cap = self.limits.subset_edges;
        if self.edges.len() > cap {
            return Err(Error::CapExceeded {
                what: "edge subset space",
                size: self.edges.len(),
                cap,
            });
        }
        Ok(())
    }

    /// Iterates over all `2^|E|` edge subsets in increasing bitmask order.
    pub fn all_subsets(&self) -> Result<impl Iterator<Item = EdgeSet>> {
        self.check_subset_cap()?;
        let n = self.edges.len();
        Ok((0..1u64 << n).map(EdgeSet::from_bits))
    }

    /// Vertex degrees in the spanning subgraph `(V, set)`; a self-loop adds two.
    pub fn degrees(&self, set: EdgeSet) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in set.iter() {
            let (u, v) = self.edges[e];
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn is_even(&self, set: EdgeSet) -> bool {
        self.degrees(set).iter().all(|d| d % 2 == 0)
    }

    /// Union-find labels of the spanning subgraph `(V, set)`.
    pub fn components(&self, set: EdgeSet) -> Components {
        let mut dsu = DisjointSets::new(self.vertex_count);
        for e in set.iter() {
            let (u, v) = self.edges[e];
            dsu.union(u, v);
        }
        Components { dsu }
    }

    /// Whether `u` and `v` are joined by a path of edges in `set`.
    pub fn is_connected(&self, set: EdgeSet, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.check_edge_set(set)?;
        Ok(self.components(set).same(u, v))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text)?;
        let graph = Graph::new(
            raw.vertices,
            raw.edges.into_iter().map(|[u, v]| (u, v)).collect(),
        )?;
        for v in [raw.marks.a, raw.marks.b].into_iter().flatten() {
            graph.check_vertex(v)?;
        }
        Ok(Graph {
            marks: raw.marks,
            ..graph
        })
    }

    pub fn to_json(&self) -> String {
        let raw = GraphJson {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            marks: self.marks,
        };
        serde_json::to_string(&raw).expect("graph serializes")
    }
}

/// Builds two hub vertices (0 and 1) joined by internally disjoint paths of
/// the given lengths. Segment `i` occupies a contiguous block of edge indices,
/// running from hub 0 to hub 1.
///
/// With `marked = Some((i, j))`, marks `a` and `b` are placed at the midpoints
/// of segments `i` and `j`, which must have even length.
pub fn generalized_theta(lengths: &[u32], marked: Option<(usize, usize)>) -> Result<Graph> {
    if lengths.len() < 2 {
        return Err(Error::InvalidSegments(format!(
            "need at least two segments, got {}",
            lengths.len()
        )));
    }
    if lengths.contains(&0) {
        return Err(Error::InvalidSegments(
            "segment lengths must be positive".into(),
        ));
    }
    let total: u64 = lengths.iter().map(|&l| l as u64).sum();
    if total > MAX_EDGES as u64 {
        return Err(Error::TooManyEdges {
            edges: total as usize,
            max: MAX_EDGES,
        });
    }
    if let Some((i, j)) = marked {
        if i == j || i >= lengths.len() || j >= lengths.len() {
            return Err(Error::InvalidSegments(format!(
                "marked segments ({i}, {j}) must be two distinct segments"
            )));
        }
        for s in [i, j] {
            if !lengths[s].is_multiple_of(2) {
                return Err(Error::OddMarkedSegment {
                    segment: s,
                    length: lengths[s],
                });
            }
        }
    }

    let mut edges = Vec::with_capacity(total as usize);
    let mut next_vertex = 2;
    let mut midpoints = vec![None; lengths.len()];
    for (s, &len) in lengths.iter().enumerate() {
        let mut prev = 0;
        for step in 1..len {
            let v = next_vertex;
            next_vertex += 1;
            edges.push((prev, v));
            if 2 * step == len {
                midpoints[s] = Some(v);
            }
            prev = v;
        }
        edges.push((prev, 1));
    }
    let graph = Graph::new(next_vertex, edges)?;
    match marked {
        Some((i, j)) => graph.with_marks(
            midpoints[i].expect("even segment has a midpoint"),
            midpoints[j].expect("even segment has a midpoint"),
        ),
        None => Ok(graph),
    }
}

/// Edge sets of the segments of a graph built by [`generalized_theta`].
pub fn theta_segments(lengths: &[u32]) -> Vec<EdgeSet> {
    let mut offset = 0usize;
    lengths
        .iter()
        .map(|&len| {
            let set = EdgeSet::from_edges(offset..offset + len as usize);
            offset += len as usize;
            set
        })
        .collect()
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false when `u` and `v` were already joined.
    pub fn union(&mut self, u: usize, v: usize) -> bool {
        let (mut ru, mut rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        if self.size[ru] < self.size[rv] {
            std::mem::swap(&mut ru, &mut rv);
        }
        self.parent[rv] = ru;
        self.size[ru] += self.size[rv];
        true
    }
}

/// Connected components of a spanning subgraph.
#[derive(Clone, Debug)]
pub struct Components {
    dsu: DisjointSets,
}

impl Components {
    pub fn same(&mut self, u: usize, v: usize) -> bool {
        self.dsu.find(u) == self.dsu.find(v)
    }

    pub fn label(&mut self, v: usize) -> usize {
        self.dsu.find(v)
    }

    /// Whether some vertex of `from` shares a component with some vertex of `to`.
    pub fn sets_connected(&mut self, from: &[usize], to: &[usize]) -> bool {
        let roots: Vec<usize> = from.iter().map(|&u| self.dsu.find(u)).collect();
        to.iter().any(|&v| {
            let r = self.dsu.find(v);
            roots.contains(&r)
        })
    }

    pub fn count(&mut self) -> usize {
        let n = self.dsu.parent.len();
        (0..n).filter(|&v| self.dsu.find(v) == v).count()
    }
}
