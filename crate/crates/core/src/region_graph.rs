//! Plane bipartite contact graph of a region family.
//!
//! One disk vertex per region and one contact vertex per contact point; a
//! region is joined to every contact point on its boundary. Rotations are
//! counterclockwise. Faces are traced by arriving on a dart `u -> v` and
//! leaving on the neighbor that follows `u` in the rotation at `v`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{ContactFamily, ContactId, CurveId, FamilyKind};

/// Contact vertices of degree at least this are big.
pub const BIG_DEGREE: usize = 72;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum VertexKind {
    Disk(CurveId),
    Contact(ContactId),
}

#[derive(Clone, Debug)]
pub struct PlaneBipartiteGraph {
    kinds: Vec<VertexKind>,
    rotation: Vec<Vec<usize>>,
    /// `back[v][i]` is the position of `v` in the rotation of `rotation[v][i]`.
    back: Vec<Vec<usize>>,
}

impl PlaneBipartiteGraph {
    /// Checks bipartiteness, simplicity and rotation consistency.
    pub fn from_parts(kinds: Vec<VertexKind>, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let n = kinds.len();
        if rotation.len() != n {
            return Err(Error::Precondition("one rotation per vertex required".into()));
        }
        let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &w) in rot.iter().enumerate() {
                if w >= n {
                    return Err(Error::Precondition(format!("vertex {w} out of range")));
                }
                if matches!(
                    (kinds[v], kinds[w]),
                    (VertexKind::Disk(_), VertexKind::Disk(_))
                        | (VertexKind::Contact(_), VertexKind::Contact(_))
                ) {
                    return Err(Error::Precondition(format!("edge {v}-{w} is not bipartite")));
                }
                if pos.insert((v, w), i).is_some() {
                    return Err(Error::Precondition(format!("parallel edge {v}-{w}")));
                }
            }
        }
        let mut back = Vec::with_capacity(n);
        for (v, rot) in rotation.iter().enumerate() {
            let mut b = Vec::with_capacity(rot.len());
            for &w in rot {
                match pos.get(&(w, v)) {
                    Some(&j) => b.push(j),
                    None => {
                        return Err(Error::Precondition(format!(
                            "edge {v}-{w} missing from the rotation at {w}"
                        )))
                    }
                }
            }
            back.push(b);
        }
        Ok(PlaneBipartiteGraph {
            kinds,
            rotation,
            back,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn is_disk(&self, v: usize) -> bool {
        matches!(self.kinds[v], VertexKind::Disk(_))
    }

    pub fn is_contact(&self, v: usize) -> bool {
        matches!(self.kinds[v], VertexKind::Contact(_))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn disks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.is_disk(v))
    }

    pub fn contacts(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.is_contact(v))
    }

    /// Dart following `rotation[v][i]` (the dart `v -> rotation[v][i]`) on its face,
    /// as `(vertex, index)`.
    pub fn next_dart(&self, v: usize, i: usize) -> (usize, usize) {
        let w = self.rotation[v][i];
        let j = self.back[v][i];
        (w, (j + 1) % self.rotation[w].len())
    }

    /// Vertices of each connected component, each sorted, ordered by smallest member.
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
                for &w in &self.rotation[v] {
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

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn shortest_distance(&self, s: usize, t: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                return Some(dist[v]);
            }
            for &w in &self.rotation[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

pub fn build_contact_graph(f: &ContactFamily) -> Result<PlaneBipartiteGraph> {
    if f.kind != FamilyKind::Regions {
        return Err(Error::Precondition("contact graph needs a region family".into()));
    }
    let n = f.curve_count();
    let bo = f
        .boundary_order
        .as_ref()
        .ok_or_else(|| Error::MissingRotation("boundary_order".into()))?;
    let mut kinds: Vec<VertexKind> = (0..n).map(VertexKind::Disk).collect();
    kinds.extend((0..f.contacts.len()).map(VertexKind::Contact));
    let mut rotation: Vec<Vec<usize>> = Vec::with_capacity(kinds.len());
    for seq in bo.iter().take(n) {
        rotation.push(seq.iter().map(|&p| n + p).collect());
    }
    if bo.len() != n {
        return Err(Error::MissingRotation("boundary_order length".into()));
    }
    for p in &f.contacts {
        let order = p
            .cyclic_order
            .as_ref()
            .ok_or_else(|| Error::MissingRotation(format!("order of contact `{}`", p.name)))?;
        rotation.push(order.clone());
    }
    PlaneBipartiteGraph::from_parts(kinds, rotation)
}

#[derive(Clone, Debug, Serialize)]
pub struct Face {
    /// Boundary walk as vertices; the walk uses darts `walk[i] -> walk[i+1]`.
    pub walk: Vec<usize>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.walk.len()
    }
}

#[derive(Clone, Debug)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    /// `corner[v][i]` is the face containing the dart `v -> rotation[v][i]`.
    pub corner: Vec<Vec<usize>>,
    /// Component index of each face.
    pub component: Vec<usize>,
}

impl FaceSet {
    pub fn degree_sum(&self) -> usize {
        self.faces.iter().map(Face::degree).sum()
    }

    /// Distinct faces around `v`.
    pub fn faces_at(&self, v: usize) -> BTreeSet<usize> {
        self.corner[v].iter().copied().collect()
    }

    /// `V - E + F` for each component.
    pub fn euler_characteristics(&self, g: &PlaneBipartiteGraph) -> Vec<i64> {
        let comps = g.components();
        let mut chi = vec![0i64; comps.len()];
        for (i, comp) in comps.iter().enumerate() {
            let edges: usize = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
            chi[i] += comp.len() as i64 - edges as i64;
        }
        for &c in &self.component {
            chi[c] += 1;
        }
        chi
    }

    pub fn is_plane(&self, g: &PlaneBipartiteGraph) -> bool {
        self.euler_characteristics(g).iter().all(|&c| c == 2)
    }
}

/// Traces every face. Isolated vertices get one empty face each, so that
/// every component satisfies `V - E + F = 2` when the rotation is planar.
pub fn trace_faces(g: &PlaneBipartiteGraph) -> FaceSet {
    let n = g.vertex_count();
    let comps = g.components();
    let mut comp_of = vec![0; n];
    for (i, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = i;
        }
    }
    let mut corner: Vec<Vec<usize>> = (0..n).map(|v| vec![usize::MAX; g.degree(v)]).collect();
    let mut faces = Vec::new();
    let mut component = Vec::new();
    for v in 0..n {
        if g.degree(v) == 0 {
            faces.push(Face { walk: Vec::new() });
            component.push(comp_of[v]);
            continue;
        }
        for i in 0..g.degree(v) {
            if corner[v][i] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut walk = Vec::new();
            let (mut x, mut j) = (v, i);
            while corner[x][j] == usize::MAX {
                corner[x][j] = id;
                walk.push(x);
                (x, j) = g.next_dart(x, j);
            }
            faces.push(Face { walk });
            component.push(comp_of[v]);
        }
    }
    FaceSet {
        faces,
        corner,
        component,
    }
}

pub fn loose_neighbors(g: &PlaneBipartiteGraph, v: usize) -> Result<BTreeSet<usize>> {
    if !g.is_disk(v) {
        return Err(Error::Precondition(format!("vertex {v} is not a disk vertex")));
    }
    Ok(g.rotation(v)
        .iter()
        .flat_map(|&p| g.rotation(p).iter().copied())
        .filter(|&w| w != v)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Vertex { vertex: usize },
    Edge { u: usize, v: usize },
    Face { face: usize, degree: usize },
    Component { components: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Check {
    fn from(witness: Option<Witness>) -> Self {
        Check {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// Local structure that a smallest family without a `(k+1)`-coloring would
/// have. A failing check names a vertex, edge or face where the family can
/// be reduced (or where the instance is degenerate).
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub k: usize,
    pub connected: Check,
    pub faces_at_least_six: Check,
    pub disks_have_k_plus_one_loose_neighbors: Check,
    pub min_degree_two_and_contacts_at_most_k: Check,
    pub every_edge_has_endpoint_of_degree_three: Check,
    pub small_disks_have_big_neighbor: Check,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        [
            &self.connected,
            &self.faces_at_least_six,
            &self.disks_have_k_plus_one_loose_neighbors,
            &self.min_degree_two_and_contacts_at_most_k,
            &self.every_edge_has_endpoint_of_degree_three,
            &self.small_disks_have_big_neighbor,
        ]
        .iter()
        .all(|c| c.holds)
    }
}

pub fn structure_report(g: &PlaneBipartiteGraph, faces: &FaceSet, k: usize) -> StructureReport {
    let comps = g.components().len();
    let connected = Check::from((comps > 1).then_some(Witness::Component { components: comps }));

    let small_face = faces
        .faces
        .iter()
        .enumerate()
        .find(|(_, f)| f.degree() < 6)
        .map(|(i, f)| Witness::Face {
            face: i,
            degree: f.degree(),
        });

    let few_loose = g
        .disks()
        .find(|&v| loose_neighbors(g, v).map(|s| s.len()).unwrap_or(0) <= k)
        .map(|vertex| Witness::Vertex { vertex });

    let bad_degree = (0..g.vertex_count())
        .find(|&v| g.degree(v) < 2 || (g.is_contact(v) && g.degree(v) > k))
        .map(|vertex| Witness::Vertex { vertex });

    let two_two = (0..g.vertex_count())
        .flat_map(|u| g.rotation(u).iter().map(move |&v| (u, v)))
        .find(|&(u, v)| u < v && g.degree(u) <= 2 && g.degree(v) <= 2)
        .map(|(u, v)| Witness::Edge { u, v });

    let no_big = g
        .disks()
        .find(|&v| g.degree(v) <= 7 && !g.rotation(v).iter().any(|&w| g.degree(w) >= BIG_DEGREE))
        .map(|vertex| Witness::Vertex { vertex });

    StructureReport {
        k,
        connected,
        faces_at_least_six: Check::from(small_face),
        disks_have_k_plus_one_loose_neighbors: Check::from(few_loose),
        min_degree_two_and_contacts_at_most_k: Check::from(bad_degree),
        every_edge_has_endpoint_of_degree_three: Check::from(two_two),
        small_disks_have_big_neighbor: Check::from(no_big),
    }
}

/// Text dump, one vertex per line:
/// `<index> <disk|contact> <name> : <rotation neighbors...>`.
/// Lines starting with `#` are comments.
pub fn write_dump(g: &PlaneBipartiteGraph, f: &ContactFamily) -> String {
    let mut out = String::from("# contactlab plane graph v1\n");
    for v in 0..g.vertex_count() {
        let (tag, name) = match g.kind(v) {
            VertexKind::Disk(c) => ("disk", f.names[c].as_str()),
            VertexKind::Contact(p) => ("contact", f.contacts[p].name.as_str()),
        };
        let _ = write!(out, "{v} {tag} {name} :");
        for w in g.rotation(v) {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out
}

/// Parses [`write_dump`] output. Names are returned per vertex.
pub fn parse_dump(text: &str) -> Result<(PlaneBipartiteGraph, Vec<String>)> {
    let mut kinds = Vec::new();
    let mut rotation = Vec::new();
    let mut names = Vec::new();
    let (mut disks, mut contacts) = (0, 0);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Parse(format!("graph dump line {}: `{line}`", lineno + 1));
        let (head, tail) = line.split_once(':').ok_or_else(bad)?;
        let mut parts = head.split_whitespace();
        let index: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if index != kinds.len() {
            return Err(bad());
        }
        let kind = match parts.next() {
            Some("disk") => {
                disks += 1;
                VertexKind::Disk(disks - 1)
            }
            Some("contact") => {
                contacts += 1;
                VertexKind::Contact(contacts - 1)
            }
            _ => return Err(bad()),
        };
        names.push(parts.next().ok_or_else(bad)?.to_string());
        let rot = tail
            .split_whitespace()
            .map(|s| s.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        kinds.push(kind);
        rotation.push(rot);
    }
    Ok((PlaneBipartiteGraph::from_parts(kinds, rotation)?, names))
}
