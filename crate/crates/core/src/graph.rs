//! Simple undirected graphs on dense vertex indices.

use std::collections::BTreeSet;

/// Undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list, dropping loops and duplicate edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            if u != v {
                sets[u].insert(v);
                sets[v].insert(u);
            }
        }
        Graph {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `keep`, together with the new-to-old vertex map.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]));
        (Graph::from_edges(keep.len(), edges), keep.to_vec())
    }

    /// Smallest-last vertex order: repeatedly delete a vertex of minimum
    /// remaining degree and return the deletions reversed, together with the
    /// degeneracy (largest minimum degree seen during the deletions).
    pub fn smallest_last_order(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let max_deg = self.max_degree();
        let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); max_deg + 1];
        for v in 0..n {
            buckets[deg[v]].insert(v);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut degeneracy = 0;
        let mut low = 0;
        for _ in 0..n {
            low = low.min(max_deg);
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop_first().expect("non-empty bucket");
            degeneracy = degeneracy.max(low);
            removed[v] = true;
            order.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    buckets[deg[w]].remove(&w);
                    deg[w] -= 1;
                    buckets[deg[w]].insert(w);
                    low = low.min(deg[w]);
                }
            }
        }
        order.reverse();
        (order, degeneracy)
    }

    pub fn degeneracy(&self) -> usize {
        self.smallest_last_order().1
    }

    /// Connected components as lists of vertices, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_cycle_counts() {
        let k5 = Graph::complete(5);
        assert_eq!(k5.edge_count(), 10);
        assert_eq!(k5.degeneracy(), 4);
        let c6 = Graph::cycle(6);
        assert_eq!(c6.edge_count(), 6);
        assert_eq!(c6.degeneracy(), 2);
        assert!(c6.has_edge(5, 0));
    }

    #[test]
    fn smallest_last_is_a_permutation() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]);
        let (order, d) = g.smallest_last_order();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..6).collect::<Vec<_>>());
        assert_eq!(d, 2);
    }

    #[test]
    fn components_split() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
    }

    #[test]
    fn loops_and_duplicates_dropped() {
        let g = Graph::from_edges(3, [(0, 0), (0, 1), (1, 0)]);
        assert_eq!(g.edge_count(), 1);
    }
}
