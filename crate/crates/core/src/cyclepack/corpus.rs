//! Exhaustive sweep over every orientation pattern of small embedded
//! triangulations: each edge is absent, oriented either way, or doubled.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::packing::{enumerate_cycles, nu_exact, nu_star};
use super::{euler_holds, PlanarDigraph};
use crate::error::{Error, Result};
use crate::rational::{big_to_f64, format_big};

/// Straight-line triangulation with counterclockwise rotations derived from
/// the coordinates.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub name: &'static str,
    pub coords: Vec<(f64, f64)>,
    pub edges: Vec<(usize, usize)>,
}

impl Triangulation {
    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    /// Rotation of the subgraph formed by `present` edges.
    pub fn rotation(&self, present: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut rot = vec![Vec::new(); n];
        for &(u, v) in present {
            rot[u].push(v);
            rot[v].push(u);
        }
        for (v, r) in rot.iter_mut().enumerate() {
            let (x0, y0) = self.coords[v];
            r.sort_by(|&a, &b| {
                let ta = (self.coords[a].1 - y0).atan2(self.coords[a].0 - x0);
                let tb = (self.coords[b].1 - y0).atan2(self.coords[b].0 - x0);
                ta.total_cmp(&tb)
            });
        }
        rot
    }
}

pub fn triangulation_corpus() -> Vec<Triangulation> {
    vec![
        Triangulation {
            name: "triangle",
            coords: vec![(0.0, 0.0), (10.0, 0.0), (5.0, 10.0)],
            edges: vec![(0, 1), (1, 2), (0, 2)],
        },
        Triangulation {
            name: "k4",
            coords: vec![(0.0, 0.0), (10.0, 0.0), (5.0, 10.0), (5.0, 3.0)],
            edges: vec![(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)],
        },
        Triangulation {
            name: "k5-minus-edge",
            coords: vec![(0.0, 0.0), (10.0, 0.0), (5.0, 4.0), (5.0, 1.5), (5.0, 10.0)],
            edges: vec![
                (0, 1),
                (0, 4),
                (1, 4),
                (0, 2),
                (1, 2),
                (2, 4),
                (0, 3),
                (1, 3),
                (2, 3),
            ],
        },
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub instances: usize,
    pub with_cycles: usize,
    pub max_ratio: String,
    pub max_ratio_value: f64,
    /// Triangulation name and arcs of the first instance reaching the maximum.
    pub argmax: Option<(String, Vec<(usize, usize)>)>,
    pub uncertified: usize,
    pub violations: usize,
}

struct Outcome {
    ratio: Option<BigRational>,
    certified: bool,
}

fn solve(n: usize, arcs: &[(usize, usize)]) -> Result<Outcome> {
    let g = PlanarDigraph::new(n, arcs, None)?;
    let cycles = enumerate_cycles(&g, usize::MAX)?;
    let nu = nu_exact(n, &cycles).len();
    let frac = nu_star(n, &cycles)?;
    let certified = frac.certify(n, &cycles);
    if nu == 0 {
        return Ok(Outcome {
            ratio: (!frac.value.is_zero()).then(|| frac.value.clone()),
            certified,
        });
    }
    Ok(Outcome {
        ratio: Some(frac.value / BigRational::from_integer(BigInt::from(nu))),
        certified,
    })
}

fn arcs_for(t: &Triangulation, mut code: usize) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    for &(u, v) in &t.edges {
        match code % 4 {
            1 => arcs.push((u, v)),
            2 => arcs.push((v, u)),
            3 => arcs.extend([(u, v), (v, u)]),
            _ => {}
        }
        code /= 4;
    }
    arcs
}

/// Runs every orientation pattern of every corpus triangulation with at
/// most `max_vertices` vertices and records the largest `nu* / nu`.
pub fn sweep_triangulations(max_vertices: usize) -> Result<SweepReport> {
    let corpus: Vec<Triangulation> = triangulation_corpus()
        .into_iter()
        .filter(|t| t.vertex_count() <= max_vertices)
        .collect();
    for t in &corpus {
        if !euler_holds(&t.rotation(&t.edges)) {
            return Err(Error::InvalidFamily(format!("corpus triangulation `{}` is not plane", t.name)));
        }
    }
    let mut report = SweepReport {
        instances: 0,
        with_cycles: 0,
        max_ratio: "0".into(),
        max_ratio_value: 0.0,
        argmax: None,
        uncertified: 0,
        violations: 0,
    };
    let mut best = BigRational::zero();
    for t in &corpus {
        let total = 1usize << (2 * t.edges.len());
        let outcomes: Vec<(usize, Outcome)> = (0..total)
            .into_par_iter()
            .map(|code| solve(t.vertex_count(), &arcs_for(t, code)).map(|o| (code, o)))
            .collect::<Result<_>>()?;
        for (code, o) in outcomes {
            report.instances += 1;
            if !o.certified {
                report.uncertified += 1;
            }
            let Some(r) = o.ratio else { continue };
            report.with_cycles += 1;
            if big_to_f64(&r) > super::PROVEN_RATIO {
                report.violations += 1;
            }
            if r > best {
                best = r;
                report.argmax = Some((t.name.to_string(), arcs_for(t, code)));
            }
        }
    }
    report.max_ratio = format_big(&best);
    report.max_ratio_value = big_to_f64(&best);
    Ok(report)
}
