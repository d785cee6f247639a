//! Batch runs: average-distance scans over generated families and the
//! validate, measure, bound, color, discharge pipeline on one instance.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{
    bound_table, color_regions, exact_chromatic, greedy_coloring, BoundRow, SPARSE_ALPHA_LIMIT,
};
use crate::discharging::{find_reducible, verify_discharging, DischargeConstants, Reducible};
use crate::error::{Error, Result};
use crate::family::{
    crossing_check, crossing_counts, family_stats, intersection_graph, validate_family,
    ContactFamily, FamilyKind, FamilyStats, ValidateOptions, ValidationReport,
};
use crate::generators::GenSpec;
use crate::rational::{format_rational, to_f64};
use crate::region_graph::{build_contact_graph, trace_faces};

#[derive(Clone, Debug, Serialize)]
pub struct ScanItem {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub alpha: Option<String>,
    pub alpha_value: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub spec: GenSpec,
    pub count: usize,
    pub defined: usize,
    pub max_alpha: Option<f64>,
    pub mean_alpha: Option<f64>,
    pub half_line: f64,
    pub limit_line: f64,
    /// Items whose average distance exceeds `k / 2`.
    pub above_half: Vec<usize>,
    /// Items above the proven limit; must be empty.
    pub above_limit: Vec<usize>,
    pub items: Vec<ScanItem>,
}

impl ScanReport {
    pub fn within_limit(&self) -> bool {
        self.above_limit.is_empty()
    }
}

/// Seed of batch item `i`.
pub fn item_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add(i as u64)
}

/// Generates `count` families from `spec` (item `i` uses seed `seed + i`),
/// and reports their average distance ratios. Families above `1/2` are
/// written to `witness_dir` when given.
pub fn cmd_scan_conjecture(
    spec: &GenSpec,
    count: usize,
    seed: u64,
    witness_dir: Option<&Path>,
) -> Result<ScanReport> {
    let results: Vec<(ScanItem, Option<ContactFamily>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = item_seed(seed, i);
            let f = spec.with_seed(s).generate()?;
            let stats = family_stats(&f)?;
            let alpha_value = stats.alpha.map(|a| to_f64(&a));
            let keep = alpha_value.is_some_and(|a| a > 0.5);
            Ok((
                ScanItem {
                    index: i,
                    seed: s,
                    n: stats.n,
                    m: stats.m,
                    k: stats.k_effective,
                    alpha: stats.alpha.map(|a| format_rational(&a)),
                    alpha_value,
                },
                keep.then_some(f),
            ))
        })
        .collect::<Result<_>>()?;
    let alphas: Vec<f64> = results.iter().filter_map(|(it, _)| it.alpha_value).collect();
    let mut report = ScanReport {
        spec: spec.clone(),
        count,
        defined: alphas.len(),
        max_alpha: alphas.iter().copied().reduce(f64::max),
        mean_alpha: (!alphas.is_empty()).then(|| alphas.iter().sum::<f64>() / alphas.len() as f64),
        half_line: 0.5,
        limit_line: SPARSE_ALPHA_LIMIT,
        above_half: Vec::new(),
        above_limit: Vec::new(),
        items: Vec::with_capacity(count),
    };
    for (item, witness) in results {
        if let Some(a) = item.alpha_value {
            if a > 0.5 {
                report.above_half.push(item.index);
            }
            if a > SPARSE_ALPHA_LIMIT {
                report.above_limit.push(item.index);
            }
        }
        if let (Some(dir), Some(f)) = (witness_dir, witness) {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("witness-{}.json", item.index)), f.to_json())?;
        }
        report.items.push(item);
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringSummary {
    pub method: &'static str,
    pub k: usize,
    pub palette_size: usize,
    pub proper: bool,
    /// Exact chromatic number for small instances.
    pub chromatic_number: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingSummary {
    pub max_count: usize,
    pub max_curve: Option<String>,
    /// Smallest value of `bound - count` over all curves.
    pub min_margin: Option<f64>,
    pub all_hold: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DischargeSummary {
    pub initial_total: String,
    pub final_total: String,
    pub negative_sites: usize,
    pub local_conditions_hold: bool,
    pub consistent: bool,
    pub reducible: Option<Reducible>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PipelineReport {
    pub validation: Option<ValidationReport>,
    pub stats: Option<FamilyStats>,
    pub bounds: Option<Vec<BoundRow>>,
    pub coloring: Option<ColoringSummary>,
    pub crossing: Option<CrossingSummary>,
    pub discharge: Option<DischargeSummary>,
    /// `(stage, message)` for every stage that failed.
    pub errors: Vec<(String, String)>,
    pub exit_code: i32,
}

impl PipelineReport {
    fn fail(&mut self, stage: &str, e: &Error) {
        self.errors.push((stage.to_string(), e.to_string()));
        self.exit_code = self.exit_code.max(e.exit_code());
    }
}

/// Runs every stage on the family in `text`. A failing stage is recorded
/// and the stages depending on it are skipped.
pub fn cmd_pipeline(text: &str) -> PipelineReport {
    let mut report = PipelineReport::default();
    let f = match ContactFamily::from_json(text) {
        Ok(f) => f,
        Err(e) => {
            report.fail("parse", &e);
            return report;
        }
    };
    let validation = validate_family(&f, ValidateOptions::default());
    let valid = validation.is_valid();
    let simple = validation.simple;
    if !valid {
        report.fail("validate", &Error::InvalidFamily(validation.summary()));
    }
    report.validation = Some(validation);
    if !valid {
        return report;
    }
    let stats = match family_stats(&f) {
        Ok(s) => s,
        Err(e) => {
            report.fail("stats", &e);
            return report;
        }
    };
    report.bounds = Some(bound_table(&stats, f.kind, simple));
    let k = f.declared_k.max(stats.k_effective);
    report.stats = Some(stats);
    match pipeline_coloring(&f, k, simple) {
        Ok(c) => {
            if !c.proper {
                report.fail("color", &Error::GuaranteeViolated("improper coloring".into()));
            }
            report.coloring = Some(c);
        }
        Err(e) => report.fail("color", &e),
    }
    match f.kind {
        FamilyKind::Curves => match pipeline_crossing(&f) {
            Ok(c) => report.crossing = Some(c),
            Err(e) => report.fail("crossing", &e),
        },
        FamilyKind::Regions => match pipeline_discharge(&f, k, simple) {
            Ok(d) => {
                if !d.consistent {
                    report.fail(
                        "discharge",
                        &Error::GuaranteeViolated("negative charge under the local conditions".into()),
                    );
                }
                report.discharge = Some(d);
            }
            Err(e) => report.fail("discharge", &e),
        },
    }
    report
}

fn pipeline_coloring(f: &ContactFamily, k: usize, simple: bool) -> Result<ColoringSummary> {
    let g = intersection_graph(f)?;
    let (method, coloring) = if f.kind == FamilyKind::Regions && simple {
        let method = if k >= DischargeConstants::default().k_threshold {
            "peeling"
        } else {
            "greedy"
        };
        (method, color_regions(f, k)?)
    } else {
        ("greedy", greedy_coloring(&g, None))
    };
    let chromatic_number = exact_chromatic(&g).ok();
    Ok(ColoringSummary {
        method,
        k,
        palette_size: coloring.palette_size,
        proper: coloring.is_proper(&g) && coloring.is_proper_for(f),
        chromatic_number,
    })
}

fn pipeline_crossing(f: &ContactFamily) -> Result<CrossingSummary> {
    let counts = crossing_counts(f)?;
    let (max_curve, max_count) = counts
        .iter()
        .enumerate()
        .max_by_key(|&(c, &x)| (x, std::cmp::Reverse(c)))
        .map(|(c, &x)| (Some(f.names[c].clone()), x))
        .unwrap_or((None, 0));
    let mut min_margin: Option<f64> = None;
    let mut all_hold = true;
    for c in 0..f.curve_count() {
        let check = crossing_check(f, c)?;
        all_hold &= check.holds;
        let margin = check.bound - check.count as f64;
        min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
    }
    Ok(CrossingSummary {
        max_count,
        max_curve,
        min_margin,
        all_hold,
    })
}

fn pipeline_discharge(f: &ContactFamily, k: usize, simple: bool) -> Result<DischargeSummary> {
    let g = build_contact_graph(f)?;
    let faces = trace_faces(&g);
    let consts = DischargeConstants::default();
    let d = verify_discharging(&g, &faces, k, &consts)?;
    let reducible = if simple && k >= consts.k_threshold {
        Some(find_reducible(f, k)?)
    } else {
        None
    };
    Ok(DischargeSummary {
        initial_total: format_rational(&d.report.initial_total),
        final_total: format_rational(&d.report.final_total),
        negative_sites: d.report.negative_sites.len(),
        local_conditions_hold: d.report.local_conditions_hold,
        consistent: d.report.consistent,
        reducible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_point_clique;

    #[test]
    fn empty_scan() {
        let r = cmd_scan_conjecture(&GenSpec::FpbExtremal { n: 50, k: 10 }, 0, 1, None).unwrap();
        assert_eq!(r.count, 0);
        assert!(r.items.is_empty() && r.max_alpha.is_none());
    }

    #[test]
    fn fig6_scan_within_limit() {
        for n in [50, 100, 200] {
            let r = cmd_scan_conjecture(&GenSpec::FpbExtremal { n, k: 10 }, 1, 0, None).unwrap();
            assert!(r.within_limit());
        }
    }

    #[test]
    fn pipeline_on_malformed_input() {
        let r = cmd_pipeline("{not json");
        assert_eq!(r.exit_code, 2);
        assert_eq!(r.errors[0].0, "parse");
    }

    #[test]
    fn pipeline_on_small_clique() {
        let f = gen_point_clique(5).unwrap();
        let r = cmd_pipeline(&f.to_json());
        assert_eq!(r.exit_code, 0, "{:?}", r.errors);
        let c = r.coloring.unwrap();
        assert_eq!((c.palette_size, c.chromatic_number), (6, Some(6)));
    }
}
