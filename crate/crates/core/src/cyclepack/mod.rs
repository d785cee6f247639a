//! Integral and fractional packings of vertex-disjoint directed cycles.

mod corpus;
mod packing;

pub use corpus::{sweep_triangulations, triangulation_corpus, SweepReport, Triangulation};
pub use packing::{
    enumerate_cycles, nu_exact, nu_star, pack, ratio_report, FractionalPacking, PackingResult,
    RatioReport, CONJECTURED_RATIO, PROVEN_RATIO,
};

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed graph without loops or parallel arcs; antiparallel pairs are
/// allowed. The optional rotation lists, per vertex, the neighbors in the
/// underlying graph in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDigraph {
    pub labels: Vec<String>,
    pub out: Vec<Vec<usize>>,
    pub rotation: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[serde(untagged)]
pub enum VertexId {
    Int(i64),
    Name(String),
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexId::Int(i) => write!(f, "{i}"),
            VertexId::Name(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphFile {
    pub vertices: Vec<VertexId>,
    pub arcs: Vec<(VertexId, VertexId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<String, Vec<VertexId>>>,
}

impl PlanarDigraph {
    /// Builds and checks a digraph from arcs on `0..n`.
    pub fn new(n: usize, arcs: &[(usize, usize)], rotation: Option<Vec<Vec<usize>>>) -> Result<Self> {
        let mut out = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for &(u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::Parse(format!("arc ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidFamily(format!("loop at vertex {u}")));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidFamily(format!("parallel arc ({u}, {v})")));
            }
            out[u].push(v);
        }
        for o in &mut out {
            o.sort_unstable();
        }
        let g = PlanarDigraph {
            labels: (0..n).map(|i| i.to_string()).collect(),
            out,
            rotation,
        };
        g.check()?;
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Sorted neighbor lists of the underlying simple graph.
    pub fn underlying(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for (u, outs) in self.out.iter().enumerate() {
            for &v in outs {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    fn check(&self) -> Result<()> {
        let n = self.vertex_count();
        let adj = self.underlying();
        let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        if n >= 3 && edges > 3 * n - 6 {
            return Err(Error::InvalidFamily(format!(
                "{edges} edges on {n} vertices cannot be planar"
            )));
        }
        if let Some(rot) = &self.rotation {
            if rot.len() != n {
                return Err(Error::MissingRotation("rotation must list every vertex".into()));
            }
            for (v, r) in rot.iter().enumerate() {
                let mut sorted = r.clone();
                sorted.sort_unstable();
                if sorted != adj[v] {
                    return Err(Error::MissingRotation(format!(
                        "rotation at `{}` is not a permutation of its neighbors",
                        self.labels[v]
                    )));
                }
            }
            if !euler_holds(rot) {
                return Err(Error::InvalidFamily("rotation system is not planar".into()));
            }
        }
        Ok(())
    }

    pub fn from_file(file: DigraphFile) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in file.vertices.iter().enumerate() {
            if index.insert(v.to_string(), i).is_some() {
                return Err(Error::Parse(format!("duplicate vertex `{v}`")));
            }
        }
        let lookup = |v: &VertexId| {
            index
                .get(&v.to_string())
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown vertex `{v}`")))
        };
        let arcs = file
            .arcs
            .iter()
            .map(|(u, v)| Ok((lookup(u)?, lookup(v)?)))
            .collect::<Result<Vec<_>>>()?;
        let rotation = match &file.rotation {
            None => None,
            Some(map) => {
                let mut rot = vec![Vec::new(); file.vertices.len()];
                for (key, seq) in map {
                    let v = *index
                        .get(key)
                        .ok_or_else(|| Error::Parse(format!("unknown vertex `{key}`")))?;
                    rot[v] = seq.iter().map(lookup).collect::<Result<_>>()?;
                }
                Some(rot)
            }
        };
        let mut g = PlanarDigraph::new(file.vertices.len(), &arcs, None)?;
        g.labels = file.vertices.iter().map(|v| v.to_string()).collect();
        g.rotation = rotation;
        g.check()?;
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DigraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn to_file(&self) -> DigraphFile {
        let id = |v: usize| VertexId::Name(self.labels[v].clone());
        DigraphFile {
            vertices: (0..self.vertex_count()).map(id).collect(),
            arcs: self
                .out
                .iter()
                .enumerate()
                .flat_map(|(u, outs)| outs.iter().map(move |&v| (id(u), id(v))))
                .collect(),
            rotation: self.rotation.as_ref().map(|rot| {
                rot.iter()
                    .enumerate()
                    .map(|(v, r)| (self.labels[v].clone(), r.iter().map(|&w| id(w)).collect()))
                    .collect()
            }),
        }
    }
}

/// Face tracing on a rotation system: `V - E + F = 2` on every component.
pub(crate) fn euler_holds(rot: &[Vec<usize>]) -> bool {
    let n = rot.len();
    let pos: Vec<HashMap<usize, usize>> = rot
        .iter()
        .map(|r| r.iter().enumerate().map(|(i, &w)| (w, i)).collect())
        .collect();
    let mut used: Vec<Vec<bool>> = rot.iter().map(|r| vec![false; r.len()]).collect();
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = ncomp;
        while let Some(v) = stack.pop() {
            for &w in &rot[v] {
                if comp[w] == usize::MAX {
                    comp[w] = ncomp;
                    stack.push(w);
                }
            }
        }
        ncomp += 1;
    }
    // Vertices minus edges, plus one face for each isolated vertex.
    let mut chi = vec![0i64; ncomp];
    let mut half_edges = vec![0i64; ncomp];
    for v in 0..n {
        chi[comp[v]] += if rot[v].is_empty() { 2 } else { 1 };
        half_edges[comp[v]] += rot[v].len() as i64;
    }
    for c in 0..ncomp {
        chi[c] -= half_edges[c] / 2;
    }
    for v in 0..n {
        for i in 0..rot[v].len() {
            if used[v][i] {
                continue;
            }
            chi[comp[v]] += 1;
            let (mut a, mut j) = (v, i);
            while !used[a][j] {
                used[a][j] = true;
                let b = rot[a][j];
                let Some(&back) = pos[b].get(&a) else {
                    return false;
                };
                a = b;
                j = (back + 1) % rot[b].len();
            }
        }
    }
    chi.iter().all(|&x| x == 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"vertices": ["a", "b", 3], "arcs": [["a", "b"], ["b", "a"], ["b", 3]],
                       "rotation": {"a": ["b"], "b": [3, "a"], "3": ["b"]}}"#;
        let g = PlanarDigraph::from_json(text).unwrap();
        assert_eq!((g.vertex_count(), g.arc_count()), (3, 3));
        let again = PlanarDigraph::from_file(g.to_file()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PlanarDigraph::new(2, &[(0, 1), (0, 1)], None).is_err());
        assert!(PlanarDigraph::new(2, &[(0, 0)], None).is_err());
        let k5: Vec<_> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        assert!(PlanarDigraph::new(5, &k5, None).is_err());
        assert!(PlanarDigraph::from_json(r#"{"vertices": [1], "arcs": [[1, 2]]}"#).is_err());
    }

    #[test]
    fn euler_on_k4_rotations() {
        // K4 drawn with 3 in the middle of triangle 0, 1, 2 (counterclockwise).
        let good = vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]];
        assert!(euler_holds(&good));
        let bad = vec![vec![1, 2, 3], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]];
        assert!(!euler_holds(&bad));
        assert!(euler_holds(&[vec![], vec![]]));
    }
}
