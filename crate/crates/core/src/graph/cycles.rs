use std::collections::VecDeque;

use super::edgeset::EdgeSet;
use super::graph::{DisjointSets, Graph};
use crate::error::{Error, Result};

/// Fundamental cycles of a spanning forest: a basis of the even subgraphs
/// under symmetric difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasis {
    cycles: Vec<EdgeSet>,
}

impl CycleBasis {
    pub fn cycles(&self) -> &[EdgeSet] {
        &self.cycles
    }

    /// `|E| - |V| + #components` of the underlying spanning subgraph.
    pub fn dimension(&self) -> usize {
        self.cycles.len()
    }

    /// Union of the supports of all basis cycles, i.e. every edge lying on a cycle.
    pub fn support(&self) -> EdgeSet {
        self.cycles.iter().fold(EdgeSet::EMPTY, |acc, &c| acc | c)
    }

    /// The span element selected by the bits of `index`.
    pub fn combination(&self, index: u64) -> EdgeSet {
        self.cycles
            .iter()
            .enumerate()
            .filter(|(i, _)| index >> i & 1 == 1)
            .fold(EdgeSet::EMPTY, |acc, (_, &c)| acc ^ c)
    }

    /// Iterates the full span (`2^d` even subgraphs).
    pub fn span(&self) -> EvenSubgraphs<'_> {
        self.span_range(0, 1u64 << self.cycles.len())
    }

    /// Iterates the span elements with Gray-code ranks in `start..end`.
    /// Disjoint ranges yield disjoint sets of even subgraphs.
    pub fn span_range(&self, start: u64, end: u64) -> EvenSubgraphs<'_> {
        let end = end.min(1u64 << self.cycles.len());
        EvenSubgraphs {
            basis: &self.cycles,
            current: self.combination(start ^ (start >> 1)),
            next: start,
            end,
        }
    }
}

/// Gray-code walk over a cycle span: each step toggles one basis cycle.
pub struct EvenSubgraphs<'a> {
    basis: &'a [EdgeSet],
    current: EdgeSet,
    next: u64,
    end: u64,
}

impl Iterator for EvenSubgraphs<'_> {
    type Item = EdgeSet;

    fn next(&mut self) -> Option<EdgeSet> {
        if self.next >= self.end {
            return None;
        }
        let out = self.current;
        self.next += 1;
        if self.next < self.end {
            let flip = self.next.trailing_zeros() as usize;
            self.current = self.current ^ self.basis[flip];
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end.saturating_sub(self.next)) as usize;
        (n, Some(n))
    }
}

/// Cycle basis of the whole graph.
pub fn cycle_space_basis(g: &Graph) -> CycleBasis {
    cycle_basis_of(g, g.full_set())
}

/// Cycle basis of the spanning subgraph `(V, open)`.
pub fn cycle_basis_of(g: &Graph, open: EdgeSet) -> CycleBasis {
    let n = g.vertex_count();
    let mut dsu = DisjointSets::new(n);
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut non_tree = Vec::new();
    for e in open.iter() {
        let (u, v) = g.edges()[e];
        if dsu.union(u, v) {
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        } else {
            non_tree.push(e);
        }
    }

    // root_path[v]: forest edges between v and the root of its tree
    let mut root_path = vec![EdgeSet::EMPTY; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    root_path[w] = root_path[u].with(e);
                    queue.push_back(w);
                }
            }
        }
    }

    let cycles = non_tree
        .into_iter()
        .map(|e| {
            let (u, v) = g.edges()[e];
            EdgeSet::singleton(e) ^ root_path[u] ^ root_path[v]
        })
        .collect();
    CycleBasis { cycles }
}

fn check_dimension(g: &Graph, basis: &CycleBasis) -> Result<()> {
    let cap = g.limits().cycle_dim;
    if basis.dimension() > cap {
        return Err(Error::CapExceeded {
            what: "cycle space dimension",
            size: basis.dimension(),
            cap,
        });
    }
    Ok(())
}

/// All even subgraphs of `g`, each exactly once.
pub fn even_subgraphs(g: &Graph) -> Result<Vec<EdgeSet>> {
    even_subgraphs_of(g, g.full_set())
}

/// All even subgraphs contained in `open`.
pub fn even_subgraphs_of(g: &Graph, open: EdgeSet) -> Result<Vec<EdgeSet>> {
    g.check_edge_set(open)?;
    let basis = cycle_basis_of(g, open);
    check_dimension(g, &basis)?;
    Ok(basis.span().collect())
}

/// Edges of `open` that lie on a cycle of `(V, open)`; the rest are bridges.
pub fn cyclic_edges(g: &Graph, open: EdgeSet) -> EdgeSet {
    cycle_basis_of(g, open).support()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generalized_theta;

    fn path(k: usize) -> Graph {
        Graph::new(k + 1, (0..k).map(|i| (i, i + 1)).collect()).unwrap()
    }

    #[test]
    fn tree_has_trivial_cycle_space() {
        let g = path(4);
        let basis = cycle_space_basis(&g);
        assert_eq!(basis.dimension(), 0);
        assert_eq!(even_subgraphs(&g).unwrap(), vec![EdgeSet::EMPTY]);
    }

    #[test]
    fn triple_edge_has_dimension_two() {
        let g = generalized_theta(&[1, 1, 1], None).unwrap();
        assert_eq!(cycle_space_basis(&g).dimension(), 2);
    }

    #[test]
    fn counter_graph_has_eight_even_subgraphs() {
        let g = generalized_theta(&[2, 2, 2, 2], Some((2, 3))).unwrap();
        assert_eq!(cycle_space_basis(&g).dimension(), 3);
        let mut sizes: Vec<usize> = even_subgraphs(&g)
            .unwrap()
            .iter()
            .map(|s| s.len())
            .collect();
        sizes.sort();
        // (n, m) = (2, 2): {0, 2n, 2m, n+m x4, 2n+2m}
        assert_eq!(sizes, vec![0, 4, 4, 4, 4, 4, 4, 8]);
    }

    #[test]
    fn theta_even_subgraphs_are_the_three_loops() {
        let g = generalized_theta(&[2, 3, 4], None).unwrap();
        let mut sizes: Vec<usize> = even_subgraphs(&g)
            .unwrap()
            .iter()
            .map(|s| s.len())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![0, 5, 6, 7]);
    }

    #[test]
    fn self_loops_and_isolated_vertices() {
        let g = Graph::new(4, vec![(0, 0), (1, 2), (1, 2)]).unwrap();
        let basis = cycle_space_basis(&g);
        // components {0}, {1, 2}, {3}: 3 edges - 4 vertices + 3 components
        assert_eq!(basis.dimension(), 2);
        assert!(basis.cycles().contains(&EdgeSet::singleton(0)));
        assert!(basis.cycles().iter().all(|&c| g.is_even(c)));
    }

    #[test]
    fn span_ranges_partition_the_span() {
        let g = Graph::complete(5).unwrap();
        let basis = cycle_space_basis(&g);
        let all: Vec<EdgeSet> = basis.span().collect();
        let mut parts: Vec<EdgeSet> = basis.span_range(0, 5).collect();
        parts.extend(basis.span_range(5, 40));
        parts.extend(basis.span_range(40, 1 << 6));
        assert_eq!(parts, all);
    }

    #[test]
    fn cyclic_edges_examples() {
        let g = path(3);
        assert_eq!(cyclic_edges(&g, g.full_set()), EdgeSet::EMPTY);
        // triangle 0-1-2 plus pendant edge 2-3
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(
            cyclic_edges(&g, g.full_set()),
            EdgeSet::from_edges([0, 1, 2])
        );
        let g = Graph::complete(4).unwrap();
        for even in even_subgraphs(&g).unwrap() {
            assert_eq!(cyclic_edges(&g, even), even);
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let g = Graph::complete(8)
            .unwrap()
            .with_limits(crate::graph::Limits {
                subset_edges: 24,
                cycle_dim: 10,
            });
        // K8: 28 - 8 + 1 = 21
        assert!(matches!(
            even_subgraphs(&g),
            Err(Error::CapExceeded {
                size: 21,
                cap: 10,
                ..
            })
        ));
    }
}
