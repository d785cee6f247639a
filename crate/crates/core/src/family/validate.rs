//! Structural checks on a family. Validation never fails; it reports.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{ContactFamily, FamilyKind, Forest};

#[derive(Clone, Copy, Debug, Default)]
pub struct ValidateOptions {
    /// Report every pair of curves sharing two or more contact points.
    pub require_simple: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    MultiplicityBelowTwo { contact: String, count: usize },
    MultiplicityAboveK { contact: String, count: usize, k: usize },
    DuplicateMember { contact: String, curve: String },
    ContainmentCycle { curve: String },
    NestedRegion { curve: String },
    SeparationClosure { contact: String, curve: String, missing: String },
    MissingOrder { contact: String },
    OrderNotPermutation { contact: String },
    MissingBoundaryOrder,
    BoundaryOrderMismatch { curve: String, detail: String },
    SimplicityViolated { a: String, b: String, shared: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Whether any two curves share at most one contact point.
    pub simple: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        match self.violations.first() {
            None => "valid".to_string(),
            Some(v) => format!("{} violation(s), first: {v:?}", self.violations.len()),
        }
    }
}

pub fn validate_family(f: &ContactFamily, opts: ValidateOptions) -> ValidationReport {
    let name = |c: usize| f.names[c].clone();
    let mut violations = Vec::new();

    for p in &f.contacts {
        let mut seen = HashSet::new();
        for &c in &p.members {
            if !seen.insert(c) {
                violations.push(Violation::DuplicateMember {
                    contact: p.name.clone(),
                    curve: name(c),
                });
            }
        }
        if seen.len() < 2 {
            violations.push(Violation::MultiplicityBelowTwo {
                contact: p.name.clone(),
                count: seen.len(),
            });
        }
        if seen.len() > f.declared_k {
            violations.push(Violation::MultiplicityAboveK {
                contact: p.name.clone(),
                count: seen.len(),
                k: f.declared_k,
            });
        }
        if let Some(order) = &p.cyclic_order {
            let mut a = order.clone();
            let mut b = p.members.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                violations.push(Violation::OrderNotPermutation {
                    contact: p.name.clone(),
                });
            }
        } else if f.kind == FamilyKind::Regions {
            violations.push(Violation::MissingOrder {
                contact: p.name.clone(),
            });
        }
    }

    match Forest::new(&f.parent) {
        Ok(forest) => closure_violations(f, &forest, &mut violations),
        Err(_) => {
            for c in cycle_members(&f.parent) {
                violations.push(Violation::ContainmentCycle { curve: name(c) });
            }
        }
    }

    if f.kind == FamilyKind::Regions {
        for (c, p) in f.parent.iter().enumerate() {
            if p.is_some() {
                violations.push(Violation::NestedRegion { curve: name(c) });
            }
        }
        boundary_violations(f, &mut violations);
    }

    let shared = shared_point_counts(f);
    let simple = shared.values().all(|&s| s <= 1);
    if opts.require_simple {
        let mut bad: Vec<_> = shared.into_iter().filter(|&(_, s)| s >= 2).collect();
        bad.sort_unstable();
        for ((a, b), s) in bad {
            violations.push(Violation::SimplicityViolated {
                a: name(a),
                b: name(b),
                shared: s,
            });
        }
    }

    ValidationReport { violations, simple }
}

/// For a point `P` and a pair `a, b` in `P`, every curve separating them
/// must lie on `P`. Checked per point in one pass: below the common
/// ancestor `H` of all members (or up to the roots when members lie in
/// different trees), every ancestor of a member must itself be a member.
fn closure_violations(f: &ContactFamily, forest: &Forest, out: &mut Vec<Violation>) {
    for p in &f.contacts {
        if p.members.len() < 2 {
            continue;
        }
        let members: HashSet<usize> = p.members.iter().copied().collect();
        let mut top = Some(p.members[0]);
        for &m in &p.members[1..] {
            top = top.and_then(|t| forest.lca(t, m));
        }
        for &a in &p.members {
            if Some(a) == top {
                continue;
            }
            let mut x = forest.parent(a);
            while let Some(c) = x {
                if Some(c) == top {
                    break;
                }
                if !members.contains(&c) {
                    out.push(Violation::SeparationClosure {
                        contact: p.name.clone(),
                        curve: f.names[a].clone(),
                        missing: f.names[c].clone(),
                    });
                    break;
                }
                x = forest.parent(c);
            }
        }
    }
}

fn cycle_members(parent: &[Option<usize>]) -> Vec<usize> {
    let n = parent.len();
    // 0 = unvisited, 1 = on current walk, 2 = done.
    let mut state = vec![0u8; n];
    let mut on_cycle = vec![false; n];
    for s in 0..n {
        let mut walk = Vec::new();
        let mut x = Some(s);
        while let Some(v) = x {
            if v >= n || state[v] == 2 {
                break;
            }
            if state[v] == 1 {
                let start = walk.iter().position(|&w| w == v).unwrap_or(0);
                for &w in &walk[start..] {
                    on_cycle[w] = true;
                }
                break;
            }
            state[v] = 1;
            walk.push(v);
            x = parent[v];
        }
        for w in walk {
            state[w] = 2;
        }
    }
    (0..n).filter(|&c| on_cycle[c]).collect()
}

fn boundary_violations(f: &ContactFamily, out: &mut Vec<Violation>) {
    let Some(bo) = &f.boundary_order else {
        if !f.contacts.is_empty() {
            out.push(Violation::MissingBoundaryOrder);
        }
        return;
    };
    let incidence = f.incidence();
    for (c, seq) in bo.iter().enumerate() {
        let mut listed = seq.clone();
        listed.sort_unstable();
        let before = listed.len();
        listed.dedup();
        if listed.len() != before {
            out.push(Violation::BoundaryOrderMismatch {
                curve: f.names[c].clone(),
                detail: "contact listed twice".into(),
            });
        }
        if listed != incidence[c] {
            out.push(Violation::BoundaryOrderMismatch {
                curve: f.names[c].clone(),
                detail: "listed contacts differ from the contacts containing the region".into(),
            });
        }
    }
}

fn shared_point_counts(f: &ContactFamily) -> HashMap<(usize, usize), usize> {
    let mut shared = HashMap::new();
    for p in &f.contacts {
        let mut m = p.members.clone();
        m.sort_unstable();
        m.dedup();
        for (i, &a) in m.iter().enumerate() {
            for &b in &m[i + 1..] {
                *shared.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    shared
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyBuilder;

    fn kinds(r: &ValidationReport) -> Vec<&'static str> {
        r.violations
            .iter()
            .map(|v| match v {
                Violation::MultiplicityBelowTwo { .. } => "below_two",
                Violation::MultiplicityAboveK { .. } => "above_k",
                Violation::DuplicateMember { .. } => "duplicate",
                Violation::ContainmentCycle { .. } => "cycle",
                Violation::NestedRegion { .. } => "nested",
                Violation::SeparationClosure { .. } => "closure",
                Violation::MissingOrder { .. } => "missing_order",
                Violation::OrderNotPermutation { .. } => "order",
                Violation::MissingBoundaryOrder => "missing_boundary",
                Violation::BoundaryOrderMismatch { .. } => "boundary",
                Violation::SimplicityViolated { .. } => "simple",
            })
            .collect()
    }

    #[test]
    fn single_member_point() {
        let mut b = FamilyBuilder::new(FamilyKind::Curves, 3);
        let a = b.curve("a", None);
        b.contact("p", vec![a], None);
        let r = validate_family(&b.build(), ValidateOptions::default());
        assert_eq!(kinds(&r), vec!["below_two"]);
    }

    #[test]
    fn too_many_curves_at_point() {
        let mut b = FamilyBuilder::new(FamilyKind::Curves, 2);
        let ids: Vec<_> = (0..3).map(|i| b.curve(format!("c{i}"), None)).collect();
        b.contact("p", ids, None);
        let r = validate_family(&b.build(), ValidateOptions::default());
        assert_eq!(kinds(&r), vec!["above_k"]);
    }

    #[test]
    fn two_shared_points_break_simplicity() {
        let mut b = FamilyBuilder::new(FamilyKind::Regions, 2);
        let x = b.curve("x", None);
        let y = b.curve("y", None);
        let p = b.contact("p", vec![x, y], Some(vec![x, y]));
        let q = b.contact("q", vec![x, y], Some(vec![x, y]));
        b.boundary(x, vec![p, q]);
        b.boundary(y, vec![q, p]);
        let f = b.build();
        let loose = validate_family(&f, ValidateOptions::default());
        assert!(loose.is_valid());
        assert!(!loose.simple);
        let strict = validate_family(&f, ValidateOptions { require_simple: true });
        assert_eq!(kinds(&strict), vec!["simple"]);
    }

    #[test]
    fn closure_needs_separating_curve() {
        let mut b = FamilyBuilder::new(FamilyKind::Curves, 3);
        let x = b.curve("x", None);
        let y = b.curve("y", Some(x));
        let o = b.curve("o", None);
        b.contact("p", vec![o, y], None);
        let r = validate_family(&b.build(), ValidateOptions::default());
        assert_eq!(kinds(&r), vec!["closure"]);
    }

    #[test]
    fn parent_cycle_reported() {
        let mut f = ContactFamily::empty(FamilyKind::Curves, 2);
        f.names = vec!["a".into(), "b".into(), "c".into()];
        f.parent = vec![Some(1), Some(0), Some(0)];
        let r = validate_family(&f, ValidateOptions::default());
        assert_eq!(kinds(&r), vec!["cycle", "cycle"]);
    }

    #[test]
    fn regions_cannot_nest() {
        let mut b = FamilyBuilder::new(FamilyKind::Regions, 2);
        let x = b.curve("x", None);
        b.curve("y", Some(x));
        let r = validate_family(&b.build(), ValidateOptions::default());
        assert_eq!(kinds(&r), vec!["nested"]);
    }

    #[test]
    fn boundary_must_match_incidence() {
        let mut b = FamilyBuilder::new(FamilyKind::Regions, 2);
        let x = b.curve("x", None);
        let y = b.curve("y", None);
        let p = b.contact("p", vec![x, y], Some(vec![y, x]));
        b.boundary(x, vec![p]);
        let r = validate_family(&b.build(), ValidateOptions::default());
        assert_eq!(kinds(&r), vec!["boundary"]);
    }

    #[test]
    fn order_must_permute_members() {
        let mut b = FamilyBuilder::new(FamilyKind::Regions, 3);
        let x = b.curve("x", None);
        let y = b.curve("y", None);
        let p = b.contact("p", vec![x, y], Some(vec![x, x]));
        b.boundary(x, vec![p]);
        b.boundary(y, vec![p]);
        let r = validate_family(&b.build(), ValidateOptions::default());
        assert_eq!(kinds(&r), vec!["order"]);
    }
}
