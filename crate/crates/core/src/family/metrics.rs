//! Distances, intersection graphs and family statistics.

use std::collections::HashSet;

use serde::Serialize;

use super::{ContactFamily, CurveId};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{serde_opt_rational, Rational};

/// Containment forest with depths and DFS intervals.
///
/// `tin`/`tout` give constant-time ancestor tests; `depth` drives the
/// lowest-common-ancestor walk used for distances.
#[derive(Clone, Debug)]
pub struct Forest {
    parent: Vec<Option<CurveId>>,
    depth: Vec<usize>,
    tin: Vec<usize>,
    tout: Vec<usize>,
}

impl Forest {
    pub fn new(parent: &[Option<CurveId>]) -> Result<Self> {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for (c, p) in parent.iter().enumerate() {
            match p {
                Some(p) if *p >= n => {
                    return Err(Error::InvalidFamily(format!("parent {p} out of range")))
                }
                Some(p) => children[*p].push(c),
                None => roots.push(c),
            }
        }
        let mut depth = vec![0; n];
        let mut tin = vec![usize::MAX; n];
        let mut tout = vec![0; n];
        let mut clock = 0;
        // Iterative DFS; (vertex, next child index).
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for &r in &roots {
            tin[r] = clock;
            clock += 1;
            stack.push((r, 0));
            while let Some(top) = stack.last_mut() {
                let (v, i) = *top;
                if i < children[v].len() {
                    top.1 += 1;
                    let w = children[v][i];
                    depth[w] = depth[v] + 1;
                    tin[w] = clock;
                    clock += 1;
                    stack.push((w, 0));
                } else {
                    tout[v] = clock;
                    stack.pop();
                }
            }
        }
        if let Some(c) = tin.iter().position(|&t| t == usize::MAX) {
            return Err(Error::InvalidFamily(format!(
                "containment cycle through curve {c}"
            )));
        }
        Ok(Forest {
            parent: parent.to_vec(),
            depth,
            tin,
            tout,
        })
    }

    pub fn depth(&self, c: CurveId) -> usize {
        self.depth[c]
    }

    pub fn parent(&self, c: CurveId) -> Option<CurveId> {
        self.parent[c]
    }

    /// True when `a` is a proper ancestor of `b` (region of `a` contains `b`).
    pub fn is_proper_ancestor(&self, a: CurveId, b: CurveId) -> bool {
        a != b && self.tin[a] <= self.tin[b] && self.tout[b] <= self.tout[a]
    }

    /// Lowest common ancestor (inclusive), or `None` for different trees.
    pub fn lca(&self, mut a: CurveId, mut b: CurveId) -> Option<CurveId> {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a]?;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b]?;
        }
        while a != b {
            a = self.parent[a]?;
            b = self.parent[b]?;
        }
        Some(a)
    }

    /// Calls `visit` on every curve of the separating set of `a` and `b`:
    /// the curves other than `a`, `b` whose region contains exactly one of
    /// them. These are the tree-path vertices strictly between `a` and `b`
    /// other than their common ancestor.
    pub fn for_each_separating(&self, a: CurveId, b: CurveId, mut visit: impl FnMut(CurveId)) {
        let top = self.lca(a, b);
        for start in [a, b] {
            if Some(start) == top {
                continue;
            }
            let mut x = self.parent[start];
            while let Some(c) = x {
                if Some(c) == top {
                    break;
                }
                visit(c);
                x = self.parent[c];
            }
        }
    }

    pub fn distance(&self, a: CurveId, b: CurveId) -> usize {
        let mut d = 0;
        self.for_each_separating(a, b, |_| d += 1);
        d
    }

    pub fn separating_set(&self, a: CurveId, b: CurveId) -> Vec<CurveId> {
        let mut out = Vec::new();
        self.for_each_separating(a, b, |c| out.push(c));
        out.sort_unstable();
        out
    }
}

/// Unordered intersecting pairs `(a, b)`, `a < b`, sorted.
pub(crate) fn intersecting_pairs(f: &ContactFamily) -> Vec<(CurveId, CurveId)> {
    let mut set = HashSet::new();
    for p in &f.contacts {
        for (i, &a) in p.members.iter().enumerate() {
            for &b in &p.members[i + 1..] {
                if a != b {
                    set.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    let mut pairs: Vec<_> = set.into_iter().collect();
    pairs.sort_unstable();
    pairs
}

fn require_valid(f: &ContactFamily) -> Result<()> {
    let report = super::validate_family(f, super::ValidateOptions::default());
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidFamily(report.summary()))
    }
}

pub fn intersection_graph(f: &ContactFamily) -> Result<Graph> {
    require_valid(f)?;
    Ok(Graph::from_edges(f.curve_count(), intersecting_pairs(f)))
}

pub fn distance(f: &ContactFamily, a: CurveId, b: CurveId) -> Result<usize> {
    let n = f.curve_count();
    for c in [a, b] {
        if c >= n {
            return Err(Error::UnknownCurve(c.to_string()));
        }
    }
    if a == b {
        return Err(Error::Precondition("distance needs two distinct curves".into()));
    }
    Ok(Forest::new(&f.parent)?.distance(a, b))
}

pub fn average_distance(f: &ContactFamily) -> Result<Rational> {
    let forest = Forest::new(&f.parent)?;
    let pairs = intersecting_pairs(f);
    if pairs.is_empty() {
        return Err(Error::Undefined("average distance without intersecting pairs"));
    }
    let total: usize = pairs.iter().map(|&(a, b)| forest.distance(a, b)).sum();
    Ok(Rational::new(total as i64, pairs.len() as i64))
}

/// Intersecting pairs with exactly one member strictly inside `c`.
pub fn count_c_crossing_pairs(f: &ContactFamily, c: CurveId) -> Result<usize> {
    if c >= f.curve_count() {
        return Err(Error::UnknownCurve(c.to_string()));
    }
    let forest = Forest::new(&f.parent)?;
    Ok(intersecting_pairs(f)
        .into_iter()
        .filter(|&(a, b)| {
            a != c && b != c && forest.is_proper_ancestor(c, a) != forest.is_proper_ancestor(c, b)
        })
        .count())
}

/// c-crossing counts for every curve at once: a pair is c-crossing exactly
/// when `c` separates it, so each pair credits its separating set.
pub fn crossing_counts(f: &ContactFamily) -> Result<Vec<usize>> {
    let forest = Forest::new(&f.parent)?;
    let mut counts = vec![0; f.curve_count()];
    for (a, b) in intersecting_pairs(f) {
        forest.for_each_separating(a, b, |c| counts[c] += 1);
    }
    Ok(counts)
}

/// Comparison of the c-crossing count of `c` with `2 e k |N(c)|`, where
/// `k` is the touching number of the subfamily induced by `c` and its
/// neighbors. Every c-crossing pair meets on `c`, so the count is the same
/// in the induced subfamily.
#[derive(Clone, Debug, Serialize)]
pub struct CrossingCheck {
    pub curve: String,
    pub count: usize,
    pub neighbors: usize,
    pub k_induced: usize,
    pub bound: f64,
    pub holds: bool,
}

pub fn crossing_check(f: &ContactFamily, c: CurveId) -> Result<CrossingCheck> {
    let count = count_c_crossing_pairs(f, c)?;
    let mut closed = vec![false; f.curve_count()];
    closed[c] = true;
    for p in f.contacts.iter().filter(|p| p.contains(c)) {
        for &m in &p.members {
            closed[m] = true;
        }
    }
    let neighbors = closed.iter().filter(|&&x| x).count() - 1;
    let k_induced = f
        .contacts
        .iter()
        .map(|p| p.members.iter().filter(|&&m| closed[m]).count())
        .filter(|&s| s >= 2)
        .max()
        .unwrap_or(0);
    let bound = 2.0 * std::f64::consts::E * k_induced as f64 * neighbors as f64;
    Ok(CrossingCheck {
        curve: f.names[c].clone(),
        count,
        neighbors,
        k_induced,
        bound,
        holds: count as f64 <= bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyStats {
    pub n: usize,
    pub m: usize,
    pub k_effective: usize,
    /// Average distance divided by `k_effective`.
    #[serde(with = "serde_opt_rational")]
    pub alpha: Option<Rational>,
    #[serde(with = "serde_opt_rational")]
    pub avg_distance: Option<Rational>,
    pub max_distance: Option<usize>,
}

pub fn family_stats(f: &ContactFamily) -> Result<FamilyStats> {
    let forest = Forest::new(&f.parent)?;
    let pairs = intersecting_pairs(f);
    let k_effective = f.k_effective();
    let m = pairs.len();
    let (mut total, mut max) = (0usize, 0usize);
    for &(a, b) in &pairs {
        let d = forest.distance(a, b);
        total += d;
        max = max.max(d);
    }
    let defined = m > 0;
    Ok(FamilyStats {
        n: f.curve_count(),
        m,
        k_effective,
        alpha: defined.then(|| Rational::new(total as i64, (k_effective * m) as i64)),
        avg_distance: defined.then(|| Rational::new(total as i64, m as i64)),
        max_distance: defined.then_some(max),
    })
}
