//! Exact discharging on the contact graph of a region family.
//!
//! Every vertex starts with `2 d(v) - 6` and every face with `d(f) - 6`,
//! which sums to `-12` on a connected plane graph. Seven local rules then
//! move charge. All rules read the original graph only (degrees, face
//! degrees, bad vertices), so their order does not matter.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{validate_family, ContactFamily, ContactId, CurveId, FamilyKind, ValidateOptions};
use crate::rational::{serde_rational, Rational};
use crate::region_graph::{
    build_contact_graph, loose_neighbors, structure_report, trace_faces, FaceSet,
    PlaneBipartiteGraph, StructureReport, VertexKind,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DischargeConstants {
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    /// Degree from which a vertex is big.
    pub big: usize,
    /// Smallest touching number covered by the reduction guarantee.
    pub k_threshold: usize,
}

impl Default for DischargeConstants {
    fn default() -> Self {
        DischargeConstants {
            epsilon: Rational::new(1, 4),
            big: 72,
            k_threshold: 490,
        }
    }
}

impl DischargeConstants {
    /// `big = 18 / epsilon` and `k_threshold = 7 big - 14`.
    pub fn is_consistent(&self) -> bool {
        Rational::from_integer(self.big as i64) == Rational::from_integer(18) / self.epsilon
            && self.k_threshold + 14 == 7 * self.big
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Big contact vertex pays each disk neighbor, with flank shares when the
    /// neighbor has another big neighbor.
    BigContactSpread,
    /// Big contact vertex pays epsilon to each bad neighbor.
    BigContactBadBonus,
    /// Small contact vertex of degree at least 4 pays 1/2 to each neighbor.
    SmallContactHalf,
    /// Contact 3-vertex next to a 3+-vertex pays epsilon to its 2-neighbors.
    ContactThreeEpsilon,
    /// Disk of degree at least 4 pays `1 + epsilon` to each neighbor of degree at most 3.
    HighDiskSupport,
    /// Disk 3-vertex pays its neighbors of degree at most 3.
    DiskThreeSupport,
    /// Face of degree at least 8 pays 1/2 to each incident disk vertex.
    LargeFaceHalf,
}

impl Rule {
    pub fn code(self) -> &'static str {
        match self {
            Rule::BigContactSpread => "big-contact-spread",
            Rule::BigContactBadBonus => "big-contact-bad-bonus",
            Rule::SmallContactHalf => "small-contact-half",
            Rule::ContactThreeEpsilon => "contact-three-epsilon",
            Rule::HighDiskSupport => "high-disk-support",
            Rule::DiskThreeSupport => "disk-three-support",
            Rule::LargeFaceHalf => "large-face-half",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "site", content = "id", rename_all = "lowercase")]
pub enum Site {
    Vertex(usize),
    Face(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub rule: Rule,
    pub source: Site,
    pub sink: Site,
    #[serde(with = "serde_rational")]
    pub amount: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeState {
    pub vertex_charge: Vec<Rational>,
    pub face_charge: Vec<Rational>,
    pub transfer_log: Vec<Transfer>,
}

impl ChargeState {
    pub fn total(&self) -> Rational {
        self.vertex_charge
            .iter()
            .chain(&self.face_charge)
            .fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn charge(&self, site: Site) -> Rational {
        match site {
            Site::Vertex(v) => self.vertex_charge[v],
            Site::Face(f) => self.face_charge[f],
        }
    }

    /// Sites with negative charge, vertices first.
    pub fn negative_sites(&self) -> Vec<(Site, Rational)> {
        let verts = self
            .vertex_charge
            .iter()
            .enumerate()
            .map(|(v, c)| (Site::Vertex(v), *c));
        let faces = self
            .face_charge
            .iter()
            .enumerate()
            .map(|(f, c)| (Site::Face(f), *c));
        verts.chain(faces).filter(|(_, c)| *c < Rational::zero()).collect()
    }
}

fn charges_unchecked(g: &PlaneBipartiteGraph, faces: &FaceSet) -> ChargeState {
    ChargeState {
        vertex_charge: (0..g.vertex_count())
            .map(|v| Rational::from_integer(2 * g.degree(v) as i64 - 6))
            .collect(),
        face_charge: faces
            .faces
            .iter()
            .map(|f| Rational::from_integer(f.degree() as i64 - 6))
            .collect(),
        transfer_log: Vec::new(),
    }
}

pub fn initial_charges(g: &PlaneBipartiteGraph, faces: &FaceSet) -> Result<ChargeState> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(charges_unchecked(g, faces))
}

fn is_bad(g: &PlaneBipartiteGraph, faces: &FaceSet, v: usize) -> bool {
    if !g.is_disk(v) || g.degree(v) != 3 {
        return false;
    }
    let thin = g
        .rotation(v)
        .iter()
        .filter(|&&u| {
            g.is_contact(u) && g.degree(u) == 2 && g.rotation(u).iter().all(|&x| g.degree(x) == 3)
        })
        .count();
    thin >= 2 && faces.corner[v].iter().all(|&f| faces.faces[f].degree() == 6)
}

/// Disk 3-vertices next to two contact 2-vertices whose neighbors all have
/// degree 3, with every incident face of degree 6.
pub fn classify_bad_vertices(g: &PlaneBipartiteGraph, faces: &FaceSet) -> Vec<usize> {
    g.disks().filter(|&v| is_bad(g, faces, v)).collect()
}

fn vertex_transfers(
    g: &PlaneBipartiteGraph,
    bad: &[bool],
    consts: &DischargeConstants,
    v: usize,
) -> Vec<Transfer> {
    let eps = consts.epsilon;
    let one = Rational::one();
    let half = Rational::new(1, 2);
    let deg = |x: usize| g.degree(x);
    let big = |x: usize| deg(x) >= consts.big;
    let rot = g.rotation(v);
    let mut out = Vec::new();
    let mut pay = |rule, sink: usize, amount: Rational| {
        out.push(Transfer {
            rule,
            source: Site::Vertex(v),
            sink: Site::Vertex(sink),
            amount,
        })
    };
    let d = rot.len();
    if g.is_contact(v) {
        if big(v) {
            for i in 0..d {
                let (u1, u2, u3) = (rot[(i + d - 1) % d], rot[i], rot[(i + 1) % d]);
                let bigs = g.rotation(u2).iter().filter(|&&x| big(x)).count();
                if bigs == 1 {
                    pay(Rule::BigContactSpread, u2, Rational::from_integer(2) - eps);
                } else {
                    pay(Rule::BigContactSpread, u2, one);
                    pay(Rule::BigContactSpread, u1, (one - eps) / 2);
                    pay(Rule::BigContactSpread, u3, (one - eps) / 2);
                }
            }
            for &u in rot {
                if bad[u] {
                    pay(Rule::BigContactBadBonus, u, eps);
                }
            }
        } else if d >= 4 {
            for &u in rot {
                pay(Rule::SmallContactHalf, u, half);
            }
        } else if d == 3 && rot.iter().any(|&u| deg(u) >= 3) {
            for &u in rot {
                if deg(u) == 2 {
                    pay(Rule::ContactThreeEpsilon, u, eps);
                }
            }
        }
    } else if d >= 4 {
        for &u in rot {
            if deg(u) <= 3 {
                pay(Rule::HighDiskSupport, u, one + eps);
            }
        }
    } else if d == 3 {
        for &u in rot {
            if deg(u) > 3 {
                continue;
            }
            let far_is_high = deg(u) == 2 && g.rotation(u).iter().any(|&x| x != v && deg(x) >= 4);
            let amount = if deg(u) == 3 || far_is_high { one - eps } else { one };
            pay(Rule::DiskThreeSupport, u, amount);
        }
    }
    out
}

fn face_transfers(g: &PlaneBipartiteGraph, faces: &FaceSet, f: usize) -> Vec<Transfer> {
    let face = &faces.faces[f];
    if face.degree() < 8 {
        return Vec::new();
    }
    let mut disks: Vec<usize> = face.walk.iter().copied().filter(|&v| g.is_disk(v)).collect();
    disks.sort_unstable();
    disks.dedup();
    disks
        .into_iter()
        .map(|v| Transfer {
            rule: Rule::LargeFaceHalf,
            source: Site::Face(f),
            sink: Site::Vertex(v),
            amount: Rational::new(1, 2),
        })
        .collect()
}

/// Applies every rule at every site. The log is sorted by `(rule, source, sink)`.
pub fn apply_rules(
    g: &PlaneBipartiteGraph,
    faces: &FaceSet,
    charges: &ChargeState,
    consts: &DischargeConstants,
) -> ChargeState {
    let mut bad = vec![false; g.vertex_count()];
    for v in classify_bad_vertices(g, faces) {
        bad[v] = true;
    }
    let mut log: Vec<Transfer> = (0..g.vertex_count())
        .into_par_iter()
        .flat_map_iter(|v| vertex_transfers(g, &bad, consts, v))
        .chain(
            (0..faces.faces.len())
                .into_par_iter()
                .flat_map_iter(|f| face_transfers(g, faces, f)),
        )
        .collect();
    log.sort_by(|a, b| (a.rule, a.source, a.sink).cmp(&(b.rule, b.source, b.sink)));
    let mut next = ChargeState {
        vertex_charge: charges.vertex_charge.clone(),
        face_charge: charges.face_charge.clone(),
        transfer_log: Vec::new(),
    };
    for t in &log {
        for (site, sign) in [(t.source, -1), (t.sink, 1)] {
            let slot = match site {
                Site::Vertex(v) => &mut next.vertex_charge[v],
                Site::Face(f) => &mut next.face_charge[f],
            };
            *slot += t.amount * sign;
        }
    }
    next.transfer_log = log;
    next
}

/// A big contact vertex with three consecutive bad neighbors, if any.
pub fn three_consecutive_bad(
    g: &PlaneBipartiteGraph,
    faces: &FaceSet,
    consts: &DischargeConstants,
) -> Option<(usize, [usize; 3])> {
    let bad = bad_mask(g, faces);
    g.contacts()
        .filter(|&v| g.degree(v) >= consts.big)
        .find_map(|v| {
            let rot = g.rotation(v);
            let d = rot.len();
            (0..d)
                .map(|i| [rot[i], rot[(i + 1) % d], rot[(i + 2) % d]])
                .find(|t| t.iter().all(|&x| bad[x]))
                .map(|t| (v, t))
        })
}

fn bad_mask(g: &PlaneBipartiteGraph, faces: &FaceSet) -> Vec<bool> {
    let mut bad = vec![false; g.vertex_count()];
    for v in classify_bad_vertices(g, faces) {
        bad[v] = true;
    }
    bad
}

#[derive(Clone, Debug, Serialize)]
pub struct SiteRow {
    pub site: Site,
    pub label: String,
    pub degree: usize,
    #[serde(with = "serde_rational")]
    pub initial: Rational,
    #[serde(with = "serde_rational")]
    pub received: Rational,
    #[serde(with = "serde_rational")]
    pub given: Rational,
    #[serde(with = "serde_rational")]
    pub final_charge: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct DischargeReport {
    pub constants: DischargeConstants,
    #[serde(with = "serde_rational")]
    pub initial_total: Rational,
    #[serde(with = "serde_rational")]
    pub final_total: Rational,
    pub negative_sites: Vec<(Site, String)>,
    pub structure: StructureReport,
    /// Big contact vertex and three consecutive bad neighbors, when present.
    pub three_consecutive_bad: Option<(usize, [usize; 3])>,
    /// The local conditions under which every final charge is nonnegative.
    pub local_conditions_hold: bool,
    /// Negative sites only occur when some local condition fails.
    pub consistent: bool,
    pub transfers: usize,
}

pub struct Discharge {
    pub report: DischargeReport,
    pub initial: ChargeState,
    pub last: ChargeState,
    pub rows: Vec<SiteRow>,
}

/// Runs charges and rules on a connected plane graph and checks conservation.
pub fn verify_discharging(
    g: &PlaneBipartiteGraph,
    faces: &FaceSet,
    k: usize,
    consts: &DischargeConstants,
) -> Result<Discharge> {
    let initial = initial_charges(g, faces)?;
    let last = apply_rules(g, faces, &initial, consts);
    let structure = structure_report(g, faces, k);
    let triple = three_consecutive_bad(g, faces, consts);
    let local_conditions_hold = structure.faces_at_least_six.holds
        && structure.min_degree_two_and_contacts_at_most_k.holds
        && structure.every_edge_has_endpoint_of_degree_three.holds
        && structure.small_disks_have_big_neighbor.holds
        && triple.is_none();
    let negative = last.negative_sites();
    let rows = site_rows(g, faces, &initial, &last);
    let report = DischargeReport {
        constants: consts.clone(),
        initial_total: initial.total(),
        final_total: last.total(),
        negative_sites: negative
            .iter()
            .map(|(s, c)| (*s, crate::rational::format_rational(c)))
            .collect(),
        structure,
        three_consecutive_bad: triple,
        local_conditions_hold,
        consistent: negative.is_empty() || !local_conditions_hold,
        transfers: last.transfer_log.len(),
    };
    Ok(Discharge {
        report,
        initial,
        last,
        rows,
    })
}

fn site_rows(
    g: &PlaneBipartiteGraph,
    faces: &FaceSet,
    initial: &ChargeState,
    last: &ChargeState,
) -> Vec<SiteRow> {
    let nv = g.vertex_count();
    let nf = faces.faces.len();
    let mut received = vec![Rational::zero(); nv + nf];
    let mut given = vec![Rational::zero(); nv + nf];
    let slot = |s: Site| match s {
        Site::Vertex(v) => v,
        Site::Face(f) => nv + f,
    };
    for t in &last.transfer_log {
        given[slot(t.source)] += t.amount;
        received[slot(t.sink)] += t.amount;
    }
    let mut rows = Vec::with_capacity(nv + nf);
    for v in 0..nv {
        let label = match g.kind(v) {
            VertexKind::Disk(_) => "disk",
            VertexKind::Contact(_) => "contact",
        };
        rows.push(SiteRow {
            site: Site::Vertex(v),
            label: label.into(),
            degree: g.degree(v),
            initial: initial.vertex_charge[v],
            received: received[v],
            given: given[v],
            final_charge: last.vertex_charge[v],
        });
    }
    for f in 0..nf {
        rows.push(SiteRow {
            site: Site::Face(f),
            label: "face".into(),
            degree: faces.faces[f].degree(),
            initial: initial.face_charge[f],
            received: received[nv + f],
            given: given[nv + f],
            final_charge: last.face_charge[f],
        });
    }
    rows
}

pub fn rows_to_csv(rows: &[SiteRow]) -> String {
    use crate::rational::format_rational as fr;
    let mut out = String::from("site,id,kind,degree,initial,received,given,final\n");
    for r in rows {
        let (site, id) = match r.site {
            Site::Vertex(v) => ("vertex", v),
            Site::Face(f) => ("face", f),
        };
        out.push_str(&format!(
            "{site},{id},{},{},{},{},{},{}\n",
            r.label,
            r.degree,
            fr(&r.initial),
            fr(&r.received),
            fr(&r.given),
            fr(&r.final_charge)
        ));
    }
    out
}

/// Reduction found in a region family, in curve and contact ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Reducible {
    /// A region meeting at most `k` others.
    LowDegreeDisk { disk: CurveId, loose_count: usize },
    /// Four regions `u, w, u2p, w2p` around a big contact point `anchor`
    /// whose removal leaves lists of sizes at least 2, 3, 3, 2.
    BadQuad {
        u: CurveId,
        w: CurveId,
        u2p: CurveId,
        w2p: CurveId,
        anchor: ContactId,
    },
}

/// Quad of graph vertices located around a big contact vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadVertices {
    pub u: usize,
    pub w: usize,
    pub u2p: usize,
    pub w2p: usize,
    pub anchor: usize,
}

fn other_neighbor(g: &PlaneBipartiteGraph, x: usize, not: usize) -> Option<usize> {
    let rot = g.rotation(x);
    (rot.len() == 2).then(|| if rot[0] == not { rot[1] } else { rot[0] })
}

fn share_contact(g: &PlaneBipartiteGraph, a: usize, b: usize) -> bool {
    g.rotation(a).iter().any(|p| g.rotation(b).contains(p))
}

/// Given consecutive bad neighbors `u = rot[i]`, `w = rot[i + 1]` of the big
/// contact vertex `v`, reads the hexagonal face through `u -> v -> w` to find
/// the disk `u2p` adjacent to both through contact 2-vertices, and follows
/// the other thin contact of `w` to `w2p`.
fn derive_quad(g: &PlaneBipartiteGraph, faces: &FaceSet, v: usize, i: usize) -> Option<QuadVertices> {
    let rot = g.rotation(v);
    let (u, w) = (rot[i], rot[(i + 1) % rot.len()]);
    let j = g.rotation(u).iter().position(|&x| x == v)?;
    let face = &faces.faces[faces.corner[u][j]];
    if face.degree() != 6 {
        return None;
    }
    let t = (0..6).find(|&t| face.walk[t] == u && face.walk[(t + 1) % 6] == v)?;
    let at = |s: usize| face.walk[(t + s) % 6];
    if at(2) != w {
        return None;
    }
    let (w1, u2p) = (at(3), at(4));
    let w2 = *g.rotation(w).iter().find(|&&x| x != v && x != w1)?;
    let w2p = other_neighbor(g, w2, w)?;
    let quad = [u, w, u2p, w2p];
    let distinct = (0..4).all(|a| (a + 1..4).all(|b| quad[a] != quad[b]));
    let shape_ok = distinct
        && quad.iter().all(|&x| g.is_disk(x))
        && share_contact(g, u, u2p)
        && share_contact(g, w, u2p)
        && share_contact(g, w, w2p)
        && !share_contact(g, u, w2p);
    shape_ok.then_some(QuadVertices {
        u,
        w,
        u2p,
        w2p,
        anchor: v,
    })
}

/// Scans big contact vertices for three consecutive bad neighbors and
/// derives the removable quad from the first such triple.
pub fn find_bad_quad(
    g: &PlaneBipartiteGraph,
    faces: &FaceSet,
    consts: &DischargeConstants,
) -> Option<QuadVertices> {
    let bad = bad_mask(g, faces);
    for v in g.contacts().filter(|&v| g.degree(v) >= consts.big) {
        let rot = g.rotation(v);
        let d = rot.len();
        for i in 0..d {
            if bad[rot[i]] && bad[rot[(i + 1) % d]] && bad[rot[(i + 2) % d]] {
                if let Some(q) = derive_quad(g, faces, v, i) {
                    return Some(q);
                }
            }
        }
    }
    None
}

pub(crate) fn check_reducible_preconditions(f: &ContactFamily, k: usize) -> Result<()> {
    if f.kind != FamilyKind::Regions {
        return Err(Error::Precondition("reductions need a region family".into()));
    }
    let report = validate_family(f, ValidateOptions { require_simple: true });
    if !report.is_valid() {
        return Err(Error::InvalidFamily(report.summary()));
    }
    if f.k_effective() > k {
        return Err(Error::Precondition(format!(
            "family is not {k}-touching (a point lies on {} regions)",
            f.k_effective()
        )));
    }
    Ok(())
}

fn vertex_curve(g: &PlaneBipartiteGraph, v: usize) -> CurveId {
    match g.kind(v) {
        VertexKind::Disk(c) | VertexKind::Contact(c) => c,
    }
}

/// Finds a region meeting at most `k` others or, failing that, a removable
/// quad around a big contact point.
pub fn find_reducible(f: &ContactFamily, k: usize) -> Result<Reducible> {
    let consts = DischargeConstants::default();
    if k < consts.k_threshold {
        return Err(Error::Precondition(format!(
            "reductions are guaranteed only for k >= {}",
            consts.k_threshold
        )));
    }
    check_reducible_preconditions(f, k)?;
    let g = build_contact_graph(f)?;
    let faces = trace_faces(&g);
    if !faces.is_plane(&g) {
        return Err(Error::Precondition("rotation system is not planar".into()));
    }
    for v in g.disks() {
        let loose = loose_neighbors(&g, v)?.len();
        if loose <= k {
            return Ok(Reducible::LowDegreeDisk {
                disk: vertex_curve(&g, v),
                loose_count: loose,
            });
        }
    }
    match find_bad_quad(&g, &faces, &consts) {
        Some(q) => Ok(Reducible::BadQuad {
            u: vertex_curve(&g, q.u),
            w: vertex_curve(&g, q.w),
            u2p: vertex_curve(&g, q.u2p),
            w2p: vertex_curve(&g, q.w2p),
            anchor: vertex_curve(&g, q.anchor),
        }),
        None => Err(Error::GuaranteeViolated(
            "every region meets more than k others and no removable quad exists".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region_graph::VertexKind;

    fn hexagon() -> PlaneBipartiteGraph {
        let kinds = (0..6)
            .map(|i| if i % 2 == 0 { VertexKind::Disk(i) } else { VertexKind::Contact(i) })
            .collect();
        let rot = (0..6).map(|i| vec![(i + 5) % 6, (i + 1) % 6]).collect();
        PlaneBipartiteGraph::from_parts(kinds, rot).unwrap()
    }

    #[test]
    fn constants_are_consistent() {
        let c = DischargeConstants::default();
        assert!(c.is_consistent());
        assert_eq!(c.big, 72);
        assert_eq!(c.k_threshold, 490);
    }

    #[test]
    fn hexagon_charges() {
        let g = hexagon();
        let faces = trace_faces(&g);
        let init = initial_charges(&g, &faces).unwrap();
        assert!(init.vertex_charge.iter().all(|&c| c == Rational::from_integer(-2)));
        assert!(init.face_charge.iter().all(|c| c.is_zero()));
        assert_eq!(init.total(), Rational::from_integer(-12));
        let after = apply_rules(&g, &faces, &init, &DischargeConstants::default());
        assert!(after.transfer_log.is_empty());
        assert_eq!(after.total(), Rational::from_integer(-12));
    }

    #[test]
    fn path_is_a_tree_with_total_minus_twelve() {
        let kinds = vec![VertexKind::Disk(0), VertexKind::Contact(0), VertexKind::Disk(1)];
        let g = PlaneBipartiteGraph::from_parts(kinds, vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        let faces = trace_faces(&g);
        assert_eq!(faces.faces.len(), 1);
        let init = initial_charges(&g, &faces).unwrap();
        assert_eq!(init.total(), Rational::from_integer(-12));
    }

    #[test]
    fn disconnected_rejected() {
        let kinds = vec![VertexKind::Disk(0), VertexKind::Disk(1)];
        let g = PlaneBipartiteGraph::from_parts(kinds, vec![vec![], vec![]]).unwrap();
        let faces = trace_faces(&g);
        assert!(matches!(initial_charges(&g, &faces), Err(Error::Disconnected)));
    }

    #[test]
    fn rule_codes_are_distinct() {
        let rules = [
            Rule::BigContactSpread,
            Rule::BigContactBadBonus,
            Rule::SmallContactHalf,
            Rule::ContactThreeEpsilon,
            Rule::HighDiskSupport,
            Rule::DiskThreeSupport,
            Rule::LargeFaceHalf,
        ];
        let mut codes: Vec<_> = rules.iter().map(|r| r.code()).collect();
        codes.dedup();
        assert_eq!(codes.len(), 7);
    }
}
