//! Deterministic and seeded instance generators.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{ContactFamily, FamilyBuilder, FamilyKind, Forest};

/// `k` regions through one center point, each also touching a wrapper
/// region at a private point. The intersection graph is `K_{k+1}`.
pub fn gen_point_clique(k: usize) -> Result<ContactFamily> {
    if k < 2 {
        return Err(Error::Precondition("point clique needs k >= 2".into()));
    }
    let mut b = FamilyBuilder::new(FamilyKind::Regions, k);
    let slices: Vec<_> = (0..k).map(|i| b.curve(format!("s{i}"), None)).collect();
    let wrapper = b.curve("w", None);
    let center = b.contact("center", slices.clone(), Some(slices.clone()));
    let private: Vec<_> = slices
        .iter()
        .map(|&s| b.contact(format!("q{s}"), vec![s, wrapper], Some(vec![s, wrapper])))
        .collect();
    for (&s, &q) in slices.iter().zip(&private) {
        b.boundary(s, vec![center, q]);
    }
    b.boundary(wrapper, private.iter().rev().copied().collect());
    Ok(b.build())
}

/// Curve `c` holding two chains of `k - 2` nested curves, plus `n - 2k + 4`
/// outside curves. Each outside curve touches each chain at one point that
/// also lies on `c` and on every curve of the chain.
pub fn gen_fpb_extremal(n: usize, k: usize) -> Result<ContactFamily> {
    if k < 3 || n < 2 * k - 2 {
        return Err(Error::Precondition(format!(
            "fpb-extremal needs k >= 3 and n >= 2k - 2 (got n = {n}, k = {k})"
        )));
    }
    let mut b = FamilyBuilder::new(FamilyKind::Curves, k);
    let c = b.curve("c", None);
    let mut nests = Vec::new();
    for label in ["a", "b"] {
        let mut chain = Vec::with_capacity(k - 2);
        let mut parent = c;
        for i in 1..=k - 2 {
            parent = b.curve(format!("{label}{i}"), Some(parent));
            chain.push(parent);
        }
        nests.push((label, chain));
    }
    for j in 1..=n + 4 - 2 * k {
        let o = b.curve(format!("o{j}"), None);
        for (label, chain) in &nests {
            let mut members = vec![o, c];
            members.extend(chain);
            b.contact(format!("x{j}{label}"), members, None);
        }
    }
    Ok(b.build())
}

/// Random laminar family of `n` curves with contact points closed under
/// separation. Each point is `{a, b}` together with every curve separating
/// `a` from `b`; points on more than `k` curves are rejected.
pub fn gen_random_curves(n: usize, k: usize, seed: u64, nest_prob: f64) -> Result<ContactFamily> {
    if n < 2 || k < 2 {
        return Err(Error::Precondition("random curves need n >= 2 and k >= 2".into()));
    }
    if !(0.0..=1.0).contains(&nest_prob) {
        return Err(Error::Precondition("nest probability must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = FamilyBuilder::new(FamilyKind::Curves, k);
    let mut parent = Vec::with_capacity(n);
    for i in 0..n {
        let p = (i > 0 && rng.random_bool(nest_prob)).then(|| rng.random_range(0..i));
        parent.push(p);
        b.curve(format!("c{i}"), p);
    }
    let forest = Forest::new(&parent)?;
    let mut seen = HashSet::new();
    let target = 2 * n;
    for _ in 0..20 * n {
        if seen.len() >= target {
            break;
        }
        let a = rng.random_range(0..n);
        let c = rng.random_range(0..n);
        if a == c {
            continue;
        }
        let mut members = forest.separating_set(a, c);
        if members.len() + 2 > k {
            continue;
        }
        members.push(a);
        members.push(c);
        members.sort_unstable();
        if seen.insert(members.clone()) {
            b.contact(format!("p{}", seen.len() - 1), members, None);
        }
    }
    Ok(b.build())
}

/// Two concentric rings of `k` regions. The inner ring `u0..` meets at a
/// big contact point `v`, the outer ring `z0..` at a big contact point `y`,
/// and `u_i` touches `z_i` and `z_{i+1}` at private points. Every region
/// has exactly `k + 1` others touching it, every face of the contact graph
/// is a hexagon, and every region is bad, so only the quad reduction applies.
pub fn gen_bad_quad_fixture(k: usize) -> Result<ContactFamily> {
    if k < 490 {
        return Err(Error::Precondition("bad-quad fixture needs k >= 490".into()));
    }
    Ok(double_ring(k))
}

pub(crate) fn double_ring(k: usize) -> ContactFamily {
    let mut b = FamilyBuilder::new(FamilyKind::Regions, k);
    let u: Vec<_> = (0..k).map(|i| b.curve(format!("u{i}"), None)).collect();
    let z: Vec<_> = (0..k).map(|i| b.curve(format!("z{i}"), None)).collect();
    let v = b.contact("v", u.clone(), Some(u.clone()));
    let y = b.contact("y", z.clone(), Some(z.iter().rev().copied().collect()));
    let mut straight = Vec::with_capacity(k);
    let mut slanted = Vec::with_capacity(k);
    for i in 0..k {
        let j = (i + 1) % k;
        straight.push(b.contact(format!("a{i}"), vec![u[i], z[i]], Some(vec![u[i], z[i]])));
        slanted.push(b.contact(format!("b{i}"), vec![u[i], z[j]], Some(vec![u[i], z[j]])));
    }
    for i in 0..k {
        b.boundary(u[i], vec![v, straight[i], slanted[i]]);
        b.boundary(z[i], vec![y, straight[i], slanted[(i + k - 1) % k]]);
    }
    b.build()
}

/// Region family read off a random stacked triangulation on `n` vertices:
/// each vertex is a region, a random set of edge-disjoint inner triangles
/// become triple points and every remaining edge becomes a point shared by
/// its two ends. The result is simple and 3-touching.
pub fn gen_random_regions(n: usize, seed: u64) -> Result<ContactFamily> {
    if n < 3 {
        return Err(Error::Precondition("random regions need n >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rot: Vec<Vec<usize>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2]];
    for x in 3..n {
        let fi = rng.random_range(0..faces.len());
        let [a, b, c] = faces[fi];
        for (at, after) in [(a, b), (b, c), (c, a)] {
            let pos = rot[at].iter().position(|&w| w == after).expect("face edge in rotation");
            rot[at].insert(pos + 1, x);
        }
        rot.push(vec![a, b, c]);
        faces[fi] = [a, b, x];
        faces.push([b, c, x]);
        faces.push([c, a, x]);
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.shuffle(&mut rng);
    let mut covered = HashSet::new();
    let mut triples = Vec::new();
    for fi in order {
        let [a, b, c] = faces[fi];
        let edges = [key(a, b), key(b, c), key(c, a)];
        if rng.random_bool(0.5) && edges.iter().all(|e| !covered.contains(e)) {
            covered.extend(edges);
            triples.push(faces[fi]);
        }
    }
    triples.sort_unstable();

    let mut fb = FamilyBuilder::new(FamilyKind::Regions, 3);
    for i in 0..n {
        fb.curve(format!("r{i}"), None);
    }
    // Triple points are keyed by every rotation of their ccw vertex order.
    let mut triple_at = BTreeMap::new();
    for &[a, b, c] in &triples {
        let id = fb.contact(format!("t{a}_{b}_{c}"), vec![a, b, c], Some(vec![a, b, c]));
        for t in [(a, b, c), (b, c, a), (c, a, b)] {
            triple_at.insert(t, id);
        }
    }
    let mut edge_at = BTreeMap::new();
    for (u, nbrs) in rot.iter().enumerate() {
        for &w in nbrs {
            let e = key(u, w);
            if u < w && !covered.contains(&e) {
                let id = fb.contact(format!("e{u}_{w}"), vec![u, w], Some(vec![u, w]));
                edge_at.insert(e, id);
            }
        }
    }
    for (a, nbrs) in rot.iter().enumerate() {
        let d = nbrs.len();
        let mut seq = Vec::new();
        for i in 0..d {
            let (x, y) = (nbrs[i], nbrs[(i + 1) % d]);
            if let Some(&e) = edge_at.get(&key(a, x)) {
                seq.push(e);
            }
            if let Some(&t) = triple_at.get(&(a, x, y)) {
                seq.push(t);
            }
        }
        fb.boundary(a, seq);
    }
    Ok(fb.build())
}

/// Parameters of one generator run.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum GenSpec {
    PointClique { k: usize },
    FpbExtremal { n: usize, k: usize },
    Random { n: usize, k: usize, seed: u64, nest_prob: f64 },
    BadQuad { k: usize },
    RandomRegions { n: usize, seed: u64 },
}

impl GenSpec {
    pub fn generate(&self) -> Result<ContactFamily> {
        match *self {
            GenSpec::PointClique { k } => gen_point_clique(k),
            GenSpec::FpbExtremal { n, k } => gen_fpb_extremal(n, k),
            GenSpec::Random {
                n,
                k,
                seed,
                nest_prob,
            } => gen_random_curves(n, k, seed, nest_prob),
            GenSpec::BadQuad { k } => gen_bad_quad_fixture(k),
            GenSpec::RandomRegions { n, seed } => gen_random_regions(n, seed),
        }
    }

    /// Same generator with a different seed, for batch runs.
    pub fn with_seed(&self, seed: u64) -> GenSpec {
        match self.clone() {
            GenSpec::Random { n, k, nest_prob, .. } => GenSpec::Random {
                n,
                k,
                seed,
                nest_prob,
            },
            GenSpec::RandomRegions { n, .. } => GenSpec::RandomRegions { n, seed },
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{count_c_crossing_pairs, family_stats, intersection_graph, validate_family, ValidateOptions};
    use crate::region_graph::{build_contact_graph, loose_neighbors, trace_faces};

    fn strict() -> ValidateOptions {
        ValidateOptions { require_simple: true }
    }

    #[test]
    fn point_clique_shape() {
        for k in [2, 3, 7] {
            let f = gen_point_clique(k).unwrap();
            assert!(validate_family(&f, strict()).is_valid());
            assert_eq!(f.k_effective(), k);
            let g = intersection_graph(&f).unwrap();
            assert_eq!(g.edge_count(), k * (k + 1) / 2);
            let pg = build_contact_graph(&f).unwrap();
            assert_eq!((pg.vertex_count(), pg.edge_count()), (2 * k + 2, 3 * k));
            let faces = trace_faces(&pg);
            assert!(faces.is_plane(&pg));
            assert_eq!(faces.faces.len(), k);
            assert!(faces.faces.iter().all(|f| f.degree() == 6));
            for s in 0..k {
                assert_eq!(loose_neighbors(&pg, s).unwrap().len(), k);
            }
        }
        assert!(gen_point_clique(1).is_err());
    }

    #[test]
    fn fpb_counts() {
        let f = gen_fpb_extremal(100, 10).unwrap();
        assert!(validate_family(&f, ValidateOptions::default()).is_valid());
        assert_eq!(f.k_effective(), 10);
        assert_eq!(count_c_crossing_pairs(&f, 0).unwrap(), 2 * 8 * 84);
        let s = family_stats(&f).unwrap();
        assert_eq!(s.m, 2 * 8 * 84 + 84 + 2 * 8 + 8 * 7);
        let small = gen_fpb_extremal(4, 3).unwrap();
        assert_eq!(small.curve_count(), 5);
        assert!(gen_fpb_extremal(3, 3).is_err());
        assert!(gen_fpb_extremal(10, 2).is_err());
    }

    #[test]
    fn random_curves_valid_and_deterministic() {
        let f = gen_random_curves(50, 8, 1, 0.5).unwrap();
        assert!(validate_family(&f, ValidateOptions::default()).is_valid());
        assert!(f.k_effective() <= 8);
        assert_eq!(f, gen_random_curves(50, 8, 1, 0.5).unwrap());
        assert_eq!(f.to_json(), gen_random_curves(50, 8, 1, 0.5).unwrap().to_json());
        let flat = gen_random_curves(30, 5, 2, 0.0).unwrap();
        assert_eq!(family_stats(&flat).unwrap().max_distance.unwrap_or(0), 0);
    }

    #[test]
    fn double_ring_is_hexagonal() {
        let k = 20;
        let f = double_ring(k);
        assert!(validate_family(&f, strict()).is_valid());
        let g = build_contact_graph(&f).unwrap();
        let faces = trace_faces(&g);
        assert!(faces.is_plane(&g));
        assert_eq!(faces.faces.len(), 2 * k);
        assert!(faces.faces.iter().all(|f| f.degree() == 6));
        for d in g.disks() {
            assert_eq!(loose_neighbors(&g, d).unwrap().len(), k + 1);
        }
        assert!(gen_bad_quad_fixture(489).is_err());
    }

    #[test]
    fn random_regions_plane_and_simple() {
        for seed in 0..5 {
            let f = gen_random_regions(60, seed).unwrap();
            let r = validate_family(&f, strict());
            assert!(r.is_valid(), "{}", r.summary());
            let g = build_contact_graph(&f).unwrap();
            let faces = trace_faces(&g);
            assert!(faces.is_plane(&g));
            assert!(g.is_connected());
            assert_eq!(intersection_graph(&f).unwrap().edge_count(), 3 * 60 - 6);
        }
    }
}
