//! Combinatorial model of touching families.
//!
//! Curves (or regions) are dense indices into [`ContactFamily::names`]. The
//! containment order is a forest given by [`ContactFamily::parent`]; the
//! touching structure is the list of [`ContactPoint`]s. Region families also
//! carry rotation data (boundary order of contacts around each region, and
//! cyclic order of regions around each contact) so that their contact graph
//! can be embedded.

mod io;
mod metrics;
mod replicate;
mod validate;

pub use io::{FamilyFile, ContactFile};
pub use metrics::{
    average_distance, count_c_crossing_pairs, crossing_counts, crossing_check, distance,
    family_stats, intersection_graph, CrossingCheck, FamilyStats, Forest,
};
pub use replicate::replicate;
pub use validate::{validate_family, ValidateOptions, ValidationReport, Violation};

use serde::{Deserialize, Serialize};

pub type CurveId = usize;
pub type ContactId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Pairwise disjoint interiors; no nesting.
    Regions,
    /// Pairwise non-crossing closed curves; nesting allowed.
    Curves,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactPoint {
    pub name: String,
    pub members: Vec<CurveId>,
    /// Counterclockwise order of the members around the point.
    pub cyclic_order: Option<Vec<CurveId>>,
}

impl ContactPoint {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, c: CurveId) -> bool {
        self.members.contains(&c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactFamily {
    pub kind: FamilyKind,
    pub names: Vec<String>,
    pub parent: Vec<Option<CurveId>>,
    pub contacts: Vec<ContactPoint>,
    /// Regions only: counterclockwise sequence of contacts on each boundary.
    pub boundary_order: Option<Vec<Vec<ContactId>>>,
    pub declared_k: usize,
}

impl ContactFamily {
    pub fn empty(kind: FamilyKind, declared_k: usize) -> Self {
        ContactFamily {
            kind,
            names: Vec::new(),
            parent: Vec::new(),
            contacts: Vec::new(),
            boundary_order: None,
            declared_k,
        }
    }

    pub fn curve_count(&self) -> usize {
        self.names.len()
    }

    pub fn curve_by_name(&self, name: &str) -> Option<CurveId> {
        self.names.iter().position(|n| n == name)
    }

    /// Largest number of curves through a single point (0 without contacts).
    pub fn k_effective(&self) -> usize {
        self.contacts.iter().map(ContactPoint::multiplicity).max().unwrap_or(0)
    }

    /// For each curve, the contacts it lies on, in contact order.
    pub fn incidence(&self) -> Vec<Vec<ContactId>> {
        let mut inc = vec![Vec::new(); self.curve_count()];
        for (p, point) in self.contacts.iter().enumerate() {
            for &c in &point.members {
                if inc[c].last() != Some(&p) {
                    inc[c].push(p);
                }
            }
        }
        inc
    }

    /// The subfamily on the curves with `keep[c] == true`.
    ///
    /// Contacts keep their surviving members and are dropped once fewer than
    /// two remain; rotation data is restricted accordingly. Parents that are
    /// removed are replaced by their nearest kept ancestor. Returns the
    /// subfamily and the map from new curve ids to old ones.
    pub fn restrict(&self, keep: &[bool]) -> (ContactFamily, Vec<CurveId>) {
        let mut new_id = vec![usize::MAX; self.curve_count()];
        let mut old_of = Vec::new();
        for c in 0..self.curve_count() {
            if keep[c] {
                new_id[c] = old_of.len();
                old_of.push(c);
            }
        }
        let lift = |mut p: Option<CurveId>| {
            let mut guard = 0;
            while let Some(q) = p {
                if keep[q] || guard > self.curve_count() {
                    break;
                }
                p = self.parent[q];
                guard += 1;
            }
            p.filter(|&q| keep[q]).map(|q| new_id[q])
        };
        let names = old_of.iter().map(|&c| self.names[c].clone()).collect();
        let parent = old_of.iter().map(|&c| lift(self.parent[c])).collect();
        let mut new_contact = vec![usize::MAX; self.contacts.len()];
        let mut contacts = Vec::new();
        for (p, point) in self.contacts.iter().enumerate() {
            let members: Vec<CurveId> = point
                .members
                .iter()
                .filter(|&&c| keep[c])
                .map(|&c| new_id[c])
                .collect();
            if members.len() < 2 {
                continue;
            }
            new_contact[p] = contacts.len();
            let cyclic_order = point.cyclic_order.as_ref().map(|o| {
                o.iter().filter(|&&c| keep[c]).map(|&c| new_id[c]).collect()
            });
            contacts.push(ContactPoint {
                name: point.name.clone(),
                members,
                cyclic_order,
            });
        }
        let boundary_order = self.boundary_order.as_ref().map(|bo| {
            old_of
                .iter()
                .map(|&c| {
                    bo[c]
                        .iter()
                        .filter(|&&p| new_contact[p] != usize::MAX)
                        .map(|&p| new_contact[p])
                        .collect()
                })
                .collect()
        });
        (
            ContactFamily {
                kind: self.kind,
                names,
                parent,
                contacts,
                boundary_order,
                declared_k: self.declared_k,
            },
            old_of,
        )
    }
}

impl ContactFamily {
    /// Places `other` beside `self`. Ids of `other` are shifted and its curve
    /// and contact names get `prefix`.
    pub fn disjoint_union(
        &self,
        other: &ContactFamily,
        prefix: &str,
    ) -> Result<ContactFamily, crate::Error> {
        if self.kind != other.kind {
            return Err(crate::Error::Precondition("union of families of different kinds".into()));
        }
        let (n, np) = (self.curve_count(), self.contacts.len());
        let mut out = self.clone();
        out.names.extend(other.names.iter().map(|s| format!("{prefix}{s}")));
        out.parent.extend(other.parent.iter().map(|p| p.map(|p| p + n)));
        out.contacts.extend(other.contacts.iter().map(|p| ContactPoint {
            name: format!("{prefix}{}", p.name),
            members: p.members.iter().map(|c| c + n).collect(),
            cyclic_order: p.cyclic_order.as_ref().map(|o| o.iter().map(|c| c + n).collect()),
        }));
        out.boundary_order = match (&self.boundary_order, &other.boundary_order) {
            (Some(a), Some(b)) => {
                let mut all = a.clone();
                all.extend(b.iter().map(|seq| seq.iter().map(|p| p + np).collect()));
                Some(all)
            }
            _ => None,
        };
        out.declared_k = self.declared_k.max(other.declared_k);
        Ok(out)
    }
}

/// Incremental construction of families, used by the generators.
#[derive(Debug)]
pub struct FamilyBuilder {
    family: ContactFamily,
}

impl FamilyBuilder {
    pub fn new(kind: FamilyKind, declared_k: usize) -> Self {
        let mut family = ContactFamily::empty(kind, declared_k);
        if kind == FamilyKind::Regions {
            family.boundary_order = Some(Vec::new());
        }
        FamilyBuilder { family }
    }

    pub fn curve(&mut self, name: impl Into<String>, parent: Option<CurveId>) -> CurveId {
        let f = &mut self.family;
        f.names.push(name.into());
        f.parent.push(parent);
        if let Some(bo) = f.boundary_order.as_mut() {
            bo.push(Vec::new());
        }
        f.names.len() - 1
    }

    pub fn contact(
        &mut self,
        name: impl Into<String>,
        members: Vec<CurveId>,
        cyclic_order: Option<Vec<CurveId>>,
    ) -> ContactId {
        self.family.contacts.push(ContactPoint {
            name: name.into(),
            members,
            cyclic_order,
        });
        self.family.contacts.len() - 1
    }

    pub fn boundary(&mut self, curve: CurveId, order: Vec<ContactId>) {
        if let Some(bo) = self.family.boundary_order.as_mut() {
            bo[curve] = order;
        }
    }

    pub fn build(self) -> ContactFamily {
        self.family
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_touching() -> ContactFamily {
        let mut b = FamilyBuilder::new(FamilyKind::Regions, 2);
        let a = b.curve("a", None);
        let c = b.curve("b", None);
        let p = b.contact("p", vec![a, c], Some(vec![a, c]));
        b.boundary(a, vec![p]);
        b.boundary(c, vec![p]);
        b.build()
    }

    #[test]
    fn builder_and_incidence() {
        let f = two_touching();
        assert_eq!(f.curve_count(), 2);
        assert_eq!(f.k_effective(), 2);
        assert_eq!(f.incidence(), vec![vec![0], vec![0]]);
        assert_eq!(f.curve_by_name("b"), Some(1));
    }

    #[test]
    fn restrict_drops_singleton_contacts() {
        let f = two_touching();
        let (g, map) = f.restrict(&[true, false]);
        assert_eq!(g.curve_count(), 1);
        assert!(g.contacts.is_empty());
        assert_eq!(g.boundary_order, Some(vec![vec![]]));
        assert_eq!(map, vec![0]);
    }

    #[test]
    fn restrict_lifts_parents() {
        let mut b = FamilyBuilder::new(FamilyKind::Curves, 3);
        let x = b.curve("x", None);
        let y = b.curve("y", Some(x));
        let z = b.curve("z", Some(y));
        b.contact("p", vec![x, y, z], None);
        let (g, _) = b.build().restrict(&[true, false, true]);
        assert_eq!(g.parent, vec![None, Some(0)]);
        assert_eq!(g.contacts[0].members, vec![0, 1]);
    }
}
