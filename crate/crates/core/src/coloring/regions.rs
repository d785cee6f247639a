//! `(k + 1)`-coloring of simple `k`-touching region families by peeling
//! reducible configurations and coloring them back in reverse.

use serde::Serialize;

use super::{greedy_coloring, Coloring};
use crate::discharging::{check_reducible_preconditions, find_bad_quad, DischargeConstants};
use crate::error::{Error, Result};
use crate::family::{intersection_graph, ContactFamily, CurveId};
use crate::region_graph::{build_contact_graph, trace_faces};

/// Chooses colors for a quad `u, w, u2p, w2p` from their lists so that all
/// pairs differ except possibly `u` and `w2p`. Needs list sizes of at least
/// 2, 3, 3 and 2.
pub fn extend_k4_minus_edge(lists: [&[usize]; 4]) -> Result<[usize; 4]> {
    let need = [2, 3, 3, 2];
    for (i, (l, n)) in lists.iter().zip(need).enumerate() {
        let mut distinct = l.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() < n {
            return Err(Error::Precondition(format!(
                "list {i} has {} colors, needs {n}",
                distinct.len()
            )));
        }
    }
    let trimmed: Vec<Vec<usize>> = lists
        .iter()
        .map(|l| {
            let mut d = l.to_vec();
            d.sort_unstable();
            d.dedup();
            d.truncate(3);
            d
        })
        .collect();
    for &a in &trimmed[0] {
        for &b in trimmed[1].iter().filter(|&&b| b != a) {
            for &c in trimmed[2].iter().filter(|&&c| c != a && c != b) {
                if let Some(&d) = trimmed[3].iter().find(|&&d| d != b && d != c) {
                    return Ok([a, b, c, d]);
                }
            }
        }
    }
    Err(Error::GuaranteeViolated("no extension of the quad lists".into()))
}

/// One deletion of the peeling phase, in original curve ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum PeelStep {
    Single { curve: CurveId, loose: usize },
    Quad { u: CurveId, w: CurveId, u2p: CurveId, w2p: CurveId },
}

pub fn color_regions(f: &ContactFamily, k: usize) -> Result<Coloring> {
    color_regions_traced(f, k).map(|(c, _)| c)
}

/// Like [`color_regions`], also returning the deletions in peeling order.
/// Below the reduction threshold this falls back to smallest-last greedy
/// and the trace is empty.
pub fn color_regions_traced(f: &ContactFamily, k: usize) -> Result<(Coloring, Vec<PeelStep>)> {
    check_reducible_preconditions(f, k)?;
    let graph = intersection_graph(f)?;
    let consts = DischargeConstants::default();
    if k < consts.k_threshold {
        return Ok((greedy_coloring(&graph, None), Vec::new()));
    }
    let steps = peel(f, k, &consts)?;
    let n = f.curve_count();
    let mut color: Vec<Option<usize>> = vec![None; n];
    let available = |color: &[Option<usize>], v: usize| -> Vec<usize> {
        let mut taken = vec![false; k + 1];
        for &w in graph.neighbors(v) {
            if let Some(c) = color[w] {
                taken[c] = true;
            }
        }
        (0..=k).filter(|&c| !taken[c]).collect()
    };
    for step in steps.iter().rev() {
        match *step {
            PeelStep::Single { curve, .. } => {
                let free = available(&color, curve);
                let c = *free.first().ok_or_else(|| {
                    Error::GuaranteeViolated(format!("no free color for `{}`", f.names[curve]))
                })?;
                color[curve] = Some(c);
            }
            PeelStep::Quad { u, w, u2p, w2p } => {
                let quad = [u, w, u2p, w2p];
                let lists: Vec<Vec<usize>> = quad.iter().map(|&x| available(&color, x)).collect();
                let pick = extend_k4_minus_edge([&lists[0], &lists[1], &lists[2], &lists[3]])
                    .map_err(|e| Error::GuaranteeViolated(format!("quad extension failed: {e}")))?;
                for (x, c) in quad.into_iter().zip(pick) {
                    color[x] = Some(c);
                }
            }
        }
    }
    let assignment: Vec<usize> = color
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::GuaranteeViolated("uncolored region".into())))
        .collect::<Result<_>>()?;
    let coloring = Coloring::new(assignment);
    if !coloring.is_proper(&graph) {
        return Err(Error::GuaranteeViolated("coloring is not proper".into()));
    }
    Ok((coloring, steps))
}

/// Deletes regions with at most `k` others touching them; when none is
/// left, locates a removable quad in the contact graph of what remains.
fn peel(f: &ContactFamily, k: usize, consts: &DischargeConstants) -> Result<Vec<PeelStep>> {
    let n = f.curve_count();
    let incidence = f.incidence();
    let mut alive_at: Vec<usize> = f.contacts.iter().map(|p| p.members.len()).collect();
    // In a simple family distinct contacts of a region reach distinct regions.
    let mut loose: Vec<usize> = incidence
        .iter()
        .map(|ps| ps.iter().map(|&p| alive_at[p] - 1).sum())
        .collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut stack: Vec<CurveId> = (0..n).rev().filter(|&v| loose[v] <= k).collect();
    let mut steps = Vec::with_capacity(n);

    let mut remove = |x: CurveId,
                      alive: &mut Vec<bool>,
                      loose: &mut Vec<usize>,
                      stack: &mut Vec<CurveId>| {
        alive[x] = false;
        for &p in &incidence[x] {
            alive_at[p] -= 1;
            for &m in &f.contacts[p].members {
                if alive[m] {
                    loose[m] -= 1;
                    if loose[m] == k {
                        stack.push(m);
                    }
                }
            }
        }
    };

    while remaining > 0 {
        if let Some(x) = stack.pop() {
            if !alive[x] {
                continue;
            }
            steps.push(PeelStep::Single {
                curve: x,
                loose: loose[x],
            });
            remove(x, &mut alive, &mut loose, &mut stack);
            remaining -= 1;
            continue;
        }
        let (sub, map) = f.restrict(&alive);
        let g = build_contact_graph(&sub)?;
        let faces = trace_faces(&g);
        let q = find_bad_quad(&g, &faces, consts).ok_or_else(|| {
            Error::GuaranteeViolated(format!(
                "{remaining} regions each touch more than {k} others and no removable quad exists"
            ))
        })?;
        let quad = [map[q.u], map[q.w], map[q.u2p], map[q.w2p]];
        steps.push(PeelStep::Quad {
            u: quad[0],
            w: quad[1],
            u2p: quad[2],
            w2p: quad[3],
        });
        for x in quad {
            remove(x, &mut alive, &mut loose, &mut stack);
        }
        remaining -= 4;
    }
    Ok(steps)
}
