//! Proper colorings of intersection graphs and the quantities behind the
//! coloring bounds.

mod bounds;
mod regions;
mod sparsify;

pub use bounds::{
    beta_of_alpha, bound_table, bound_table_csv, delta_of_alpha, p_good, p_good_exact, BoundParams, BoundRow,
    SPARSE_ALPHA_LIMIT,
};
pub use regions::{color_regions, color_regions_traced, extend_k4_minus_edge, PeelStep};
pub use sparsify::{sparsify_experiment, SparsifyOutcome};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::ContactFamily;
use crate::graph::Graph;

/// Largest graph accepted by [`exact_chromatic`].
pub const EXACT_LIMIT: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    /// Color of each vertex (curve), indexed by id.
    pub assignment: Vec<usize>,
    /// Number of distinct colors used.
    pub palette_size: usize,
}

impl Coloring {
    pub fn new(assignment: Vec<usize>) -> Self {
        let mut used = assignment.clone();
        used.sort_unstable();
        used.dedup();
        Coloring {
            palette_size: used.len(),
            assignment,
        }
    }

    /// Edges whose ends share a color.
    pub fn conflicts(&self, g: &Graph) -> Vec<(usize, usize)> {
        g.edges()
            .filter(|&(u, v)| self.assignment[u] == self.assignment[v])
            .collect()
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.assignment.len() == g.vertex_count() && self.conflicts(g).is_empty()
    }

    /// Scans every pair of curves sharing a contact point, without building
    /// the intersection graph.
    pub fn is_proper_for(&self, f: &ContactFamily) -> bool {
        self.assignment.len() == f.curve_count()
            && f.contacts.iter().all(|p| {
                p.members.iter().enumerate().all(|(i, &a)| {
                    p.members[i + 1..]
                        .iter()
                        .all(|&b| a == b || self.assignment[a] != self.assignment[b])
                })
            })
    }
}

/// Greedy coloring along `order` (smallest-last when `None`). With the
/// smallest-last order at most `degeneracy + 1` colors are used.
pub fn greedy_coloring(g: &Graph, order: Option<&[usize]>) -> Coloring {
    let owned;
    let order = match order {
        Some(o) => o,
        None => {
            owned = g.smallest_last_order().0;
            &owned
        }
    };
    let n = g.vertex_count();
    let mut color = vec![usize::MAX; n];
    let mut taken = Vec::new();
    for &v in order {
        taken.clear();
        taken.resize(g.degree(v) + 1, false);
        for &w in g.neighbors(v) {
            if color[w] < taken.len() {
                taken[color[w]] = true;
            }
        }
        color[v] = taken.iter().position(|&t| !t).unwrap_or(taken.len());
    }
    // Vertices missing from a partial order are colored last.
    for v in 0..n {
        if color[v] == usize::MAX {
            let used: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).collect();
            color[v] = (0..).find(|c| !used.contains(c)).unwrap_or(0);
        }
    }
    Coloring::new(color)
}

fn max_clique(adj: &[u32], cand: u32, size: usize, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + cand.count_ones() as usize <= *best {
        return;
    }
    let v = cand.trailing_zeros() as usize;
    max_clique(adj, cand & adj[v], size + 1, best);
    max_clique(adj, cand & !(1 << v), size, best);
}

/// Clique number, exact, for graphs within [`EXACT_LIMIT`].
pub fn clique_number(g: &Graph) -> Result<usize> {
    let adj = bitsets(g)?;
    let mut best = 0;
    let all = if g.vertex_count() == 32 {
        u32::MAX
    } else {
        (1u32 << g.vertex_count()) - 1
    };
    max_clique(&adj, all, 0, &mut best);
    Ok(best)
}

fn bitsets(g: &Graph) -> Result<Vec<u32>> {
    let n = g.vertex_count();
    if n > EXACT_LIMIT {
        return Err(Error::SizeGuard(format!(
            "exact coloring accepts at most {EXACT_LIMIT} vertices, got {n}"
        )));
    }
    Ok((0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect())
}

struct Search<'a> {
    adj: &'a [u32],
    color: Vec<usize>,
    best: usize,
    floor: usize,
}

impl Search<'_> {
    fn run(&mut self, colored: usize, used: usize) {
        if self.best <= self.floor || used >= self.best {
            return;
        }
        let n = self.adj.len();
        if colored == n {
            self.best = used;
            return;
        }
        // Uncolored vertex with the most distinct neighbor colors.
        let mut pick = None;
        let mut pick_sat = 0;
        for v in (0..n).filter(|&v| self.color[v] == usize::MAX) {
            let mut seen = 0u32;
            let mut nb = self.adj[v];
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if self.color[w] != usize::MAX {
                    seen |= 1 << self.color[w];
                }
            }
            let sat = seen.count_ones() as usize;
            if pick.is_none() || sat > pick_sat {
                pick = Some((v, seen));
                pick_sat = sat;
            }
        }
        let (v, seen) = pick.expect("uncolored vertex");
        for c in 0..=used.min(self.best - 1) {
            if c < 32 && seen & (1 << c) != 0 {
                continue;
            }
            self.color[v] = c;
            self.run(colored + 1, used.max(c + 1));
            self.color[v] = usize::MAX;
            if self.best <= self.floor {
                return;
            }
        }
    }
}

/// Chromatic number by branch and bound with a clique lower bound.
pub fn exact_chromatic(g: &Graph) -> Result<usize> {
    let adj = bitsets(g)?;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(0);
    }
    let floor = clique_number(g)?;
    let mut s = Search {
        adj: &adj,
        color: vec![usize::MAX; n],
        best: greedy_coloring(g, None).palette_size,
        floor,
    };
    s.run(0, 0);
    Ok(s.best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_on_small_graphs() {
        let k4 = Graph::complete(4);
        let c = greedy_coloring(&k4, None);
        assert_eq!(c.palette_size, 4);
        assert!(c.is_proper(&k4));
        let c6 = Graph::cycle(6);
        assert_eq!(greedy_coloring(&c6, None).palette_size, 2);
        let order: Vec<usize> = (0..6).collect();
        assert!(greedy_coloring(&c6, Some(&order)).is_proper(&c6));
    }

    #[test]
    fn exact_values() {
        assert_eq!(exact_chromatic(&Graph::complete(4)).unwrap(), 4);
        assert_eq!(exact_chromatic(&Graph::cycle(5)).unwrap(), 3);
        assert_eq!(exact_chromatic(&Graph::cycle(8)).unwrap(), 2);
        assert_eq!(exact_chromatic(&Graph::new(3)).unwrap(), 1);
        assert_eq!(exact_chromatic(&Graph::new(0)).unwrap(), 0);
        assert!(matches!(exact_chromatic(&Graph::new(31)), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn exact_beats_greedy_on_crown() {
        // Crown graph: greedy in index order uses 4 colors, chi is 2.
        let edges = (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, 4 + j)));
        let g = Graph::from_edges(8, edges);
        let order = [0, 4, 1, 5, 2, 6, 3, 7];
        assert!(greedy_coloring(&g, Some(&order)).palette_size > 2);
        assert_eq!(exact_chromatic(&g).unwrap(), 2);
    }

    #[test]
    fn clique_of_wheel() {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (i, 5)));
        let g = Graph::from_edges(6, edges);
        assert_eq!(clique_number(&g).unwrap(), 3);
        assert_eq!(exact_chromatic(&g).unwrap(), 4);
    }
}
