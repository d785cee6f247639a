//! JSON instance format.
//!
//! ```json
//! {
//!   "kind": "regions" | "curves",
//!   "k": 3,
//!   "curves": ["a", "b"],
//!   "parent": {"b": "a"},
//!   "contacts": [{"id": "p", "members": ["a", "b"], "order": ["a", "b"]}],
//!   "boundary_order": {"a": ["p"], "b": ["p"]}
//! }
//! ```
//!
//! Unknown keys are rejected. Curve ids are assigned in file order.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{ContactFamily, ContactPoint, CurveId, FamilyKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub kind: FamilyKind,
    pub k: usize,
    pub curves: Vec<String>,
    #[serde(default)]
    pub parent: BTreeMap<String, String>,
    pub contacts: Vec<ContactFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_order: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactFile {
    pub id: String,
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

impl ContactFamily {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: FamilyFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn from_file(file: FamilyFile) -> Result<Self> {
        let mut ids: HashMap<&str, CurveId> = HashMap::new();
        for (i, name) in file.curves.iter().enumerate() {
            if ids.insert(name.as_str(), i).is_some() {
                return Err(Error::Parse(format!("duplicate curve id `{name}`")));
            }
        }
        let lookup = |name: &str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| Error::UnknownCurve(name.to_string()))
        };
        let mut parent = vec![None; file.curves.len()];
        for (child, par) in &file.parent {
            parent[lookup(child)?] = Some(lookup(par)?);
        }
        let mut contact_ids: HashMap<&str, usize> = HashMap::new();
        let mut contacts = Vec::with_capacity(file.contacts.len());
        for (i, c) in file.contacts.iter().enumerate() {
            if contact_ids.insert(c.id.as_str(), i).is_some() {
                return Err(Error::Parse(format!("duplicate contact id `{}`", c.id)));
            }
            let members = c
                .members
                .iter()
                .map(|m| lookup(m))
                .collect::<Result<Vec<_>>>()?;
            let cyclic_order = match &c.order {
                Some(o) => Some(o.iter().map(|m| lookup(m)).collect::<Result<Vec<_>>>()?),
                None => None,
            };
            contacts.push(ContactPoint {
                name: c.id.clone(),
                members,
                cyclic_order,
            });
        }
        let boundary_order = match file.boundary_order {
            Some(map) => {
                let mut bo = vec![Vec::new(); file.curves.len()];
                for (curve, seq) in &map {
                    let c = lookup(curve)?;
                    bo[c] = seq
                        .iter()
                        .map(|p| {
                            contact_ids.get(p.as_str()).copied().ok_or_else(|| {
                                Error::Parse(format!("unknown contact id `{p}`"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                }
                Some(bo)
            }
            None => None,
        };
        Ok(ContactFamily {
            kind: file.kind,
            names: file.curves,
            parent,
            contacts,
            boundary_order,
            declared_k: file.k,
        })
    }

    pub fn to_file(&self) -> FamilyFile {
        let name = |c: CurveId| self.names[c].clone();
        let parent = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (name(c), name(p))))
            .collect();
        let contacts = self
            .contacts
            .iter()
            .map(|p| ContactFile {
                id: p.name.clone(),
                members: p.members.iter().map(|&c| name(c)).collect(),
                order: p
                    .cyclic_order
                    .as_ref()
                    .map(|o| o.iter().map(|&c| name(c)).collect()),
            })
            .collect();
        let boundary_order = self.boundary_order.as_ref().map(|bo| {
            bo.iter()
                .enumerate()
                .map(|(c, seq)| {
                    (
                        name(c),
                        seq.iter().map(|&p| self.contacts[p].name.clone()).collect(),
                    )
                })
                .collect()
        });
        FamilyFile {
            kind: self.kind,
            k: self.declared_k,
            curves: self.names.clone(),
            parent,
            contacts,
            boundary_order,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("family serializes")
    }

    /// Contact ids must be unique for the JSON form to round-trip.
    pub fn has_unique_contact_names(&self) -> bool {
        let mut seen = HashSet::new();
        self.contacts.iter().all(|p| seen.insert(p.name.as_str()))
    }
}
