//! Replacing every curve by concentric copies.

use super::{ContactFamily, ContactPoint, CurveId, FamilyKind};
use crate::error::{Error, Result};

/// Replaces each curve `c` by `ell` nested copies `c#1 ⊃ c#2 ⊃ … ⊃ c#ell`.
///
/// `c#1` takes the place of `c` under the innermost copy of its parent and
/// former children hang under `c#ell`. Each contact point keeps its id and
/// receives every copy of every member; for `ell >= 2` one extra point
/// `c#chain` is added per original curve, lying on all of its copies.
/// Copy `i` of curve `c` gets id `c * ell + (i - 1)`.
pub fn replicate(f: &ContactFamily, ell: usize) -> Result<ContactFamily> {
    if ell == 0 {
        return Err(Error::Precondition("replication factor must be positive".into()));
    }
    if f.kind != FamilyKind::Curves {
        return Err(Error::Precondition("replication applies to curve families".into()));
    }
    if ell == 1 {
        return Ok(f.clone());
    }
    let copy = |c: CurveId, i: usize| c * ell + i;
    let n = f.curve_count();
    let mut names = Vec::with_capacity(n * ell);
    let mut parent = Vec::with_capacity(n * ell);
    for c in 0..n {
        for i in 0..ell {
            names.push(format!("{}#{}", f.names[c], i + 1));
            parent.push(if i == 0 {
                f.parent[c].map(|p| copy(p, ell - 1))
            } else {
                Some(copy(c, i - 1))
            });
        }
    }
    let mut contacts: Vec<ContactPoint> = f
        .contacts
        .iter()
        .map(|p| ContactPoint {
            name: p.name.clone(),
            members: p
                .members
                .iter()
                .flat_map(|&c| (0..ell).map(move |i| copy(c, i)))
                .collect(),
            cyclic_order: None,
        })
        .collect();
    for c in 0..n {
        contacts.push(ContactPoint {
            name: format!("{}#chain", f.names[c]),
            members: (0..ell).map(|i| copy(c, i)).collect(),
            cyclic_order: None,
        });
    }
    Ok(ContactFamily {
        kind: FamilyKind::Curves,
        names,
        parent,
        contacts,
        boundary_order: None,
        declared_k: f.declared_k * ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{family_stats, validate_family, FamilyBuilder, ValidateOptions};

    fn pair() -> ContactFamily {
        let mut b = FamilyBuilder::new(FamilyKind::Curves, 2);
        let x = b.curve("x", None);
        let y = b.curve("y", None);
        b.contact("p", vec![x, y], None);
        b.build()
    }

    #[test]
    fn identity_for_one() {
        assert_eq!(replicate(&pair(), 1).unwrap(), pair());
    }

    #[test]
    fn pair_doubled() {
        let g = replicate(&pair(), 2).unwrap();
        let s = family_stats(&g).unwrap();
        assert_eq!((s.n, s.m), (4, 6));
        assert_eq!(g.declared_k, 4);
        assert!(validate_family(&g, ValidateOptions::default()).is_valid());
    }

    #[test]
    fn rejects_zero_and_regions() {
        assert!(replicate(&pair(), 0).is_err());
        let regions = ContactFamily::empty(FamilyKind::Regions, 2);
        assert!(replicate(&regions, 2).is_err());
    }

    #[test]
    fn children_move_under_innermost_copy() {
        let mut b = FamilyBuilder::new(FamilyKind::Curves, 2);
        let x = b.curve("x", None);
        let y = b.curve("y", Some(x));
        b.contact("p", vec![x, y], None);
        let g = replicate(&b.build(), 3).unwrap();
        assert_eq!(g.parent[3], Some(2));
        assert_eq!(g.names[2], "x#3");
        assert!(validate_family(&g, ValidateOptions::default()).is_valid());
    }
}
