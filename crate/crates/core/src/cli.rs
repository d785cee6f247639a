//! Command-line interface. Every subcommand renders its report to a string
//! so runs can be compared byte for byte.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coloring::{
    bound_table, bound_table_csv, color_regions, delta_of_alpha, greedy_coloring,
    sparsify_experiment, BoundParams,
};
use crate::cyclepack::{pack, ratio_report, PlanarDigraph};
use crate::discharging::{rows_to_csv, verify_discharging, DischargeConstants};
use crate::error::{Error, Result};
use crate::family::{
    crossing_counts, family_stats, intersection_graph, validate_family, ContactFamily, FamilyKind,
    FamilyStats, ValidateOptions,
};
use crate::generators::GenSpec;
use crate::rational::{rat, to_f64};
use crate::region_graph::{build_contact_graph, trace_faces};
use crate::scan::{cmd_pipeline, cmd_scan_conjecture};

#[derive(Debug, Parser)]
#[command(name = "contactlab", version, about = "Touching families of Jordan regions and curves")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenType {
    PointClique,
    FpbExtremal,
    Random,
    BadQuad,
    RandomRegions,
}

#[derive(Clone, Debug, Args)]
pub struct GenArgs {
    #[arg(long = "type", value_enum)]
    pub kind: GenType,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, env = "CONTACTLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub nest_prob: f64,
}

impl GenArgs {
    pub fn spec(&self) -> GenSpec {
        let (n, k, seed) = (self.n, self.k, self.seed);
        match self.kind {
            GenType::PointClique => GenSpec::PointClique { k },
            GenType::FpbExtremal => GenSpec::FpbExtremal { n, k },
            GenType::Random => GenSpec::Random {
                n,
                k,
                seed,
                nest_prob: self.nest_prob,
            },
            GenType::BadQuad => GenSpec::BadQuad { k },
            GenType::RandomRegions => GenSpec::RandomRegions { n, seed },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ColorMode {
    /// Peeling algorithm for simple region families.
    Kplus1,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a family and print it as JSON.
    Generate(GenArgs),
    /// Check the structural conditions of a family.
    Validate {
        input: PathBuf,
        /// Also require any two curves to share at most one point.
        #[arg(long)]
        simple: bool,
    },
    /// Size, touching number and distance statistics.
    Stats {
        input: PathBuf,
        /// Include the number of pairs separated by each curve.
        #[arg(long)]
        crossing: bool,
    },
    /// Color the intersection graph.
    Color {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ColorMode::Kplus1)]
        mode: ColorMode,
        /// Touching number to color for; defaults to the declared one.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the discharging rules on a region family.
    Discharge {
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Write per-site charges as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte-Carlo sparsification experiment on a curve family.
    Sparsify {
        input: PathBuf,
        /// Sampling scale; defaults to the optimal value for the family.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, env = "CONTACTLAB_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Table of chromatic number bounds, for a family or for given alpha and k.
    Bounds {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        k: Option<usize>,
    },
    /// Integral and fractional directed cycle packing.
    Cyclepack {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        report: ReportFormat,
    },
    /// Average distance ratios over a batch of generated families.
    ScanConjecture {
        #[command(flatten)]
        generator: GenArgs,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Directory for families whose ratio exceeds 1/2.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Validate, measure, bound, color and discharge one instance.
    Pipeline { input: PathBuf },
}

/// Rendered report plus the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, code: 0 }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn read_family(path: &PathBuf) -> Result<ContactFamily> {
    ContactFamily::from_json(&std::fs::read_to_string(path)?)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Generate(args) => Ok(Outcome::ok(args.spec().generate()?.to_json() + "\n")),
        Command::Validate { input, simple } => {
            let f = read_family(input)?;
            let report = validate_family(&f, ValidateOptions { require_simple: *simple });
            let code = if report.is_valid() { 0 } else { 1 };
            Ok(Outcome {
                body: json(&report)?,
                code,
            })
        }
        Command::Stats { input, crossing } => {
            let f = read_family(input)?;
            #[derive(Serialize)]
            struct StatsOut {
                #[serde(flatten)]
                stats: FamilyStats,
                #[serde(skip_serializing_if = "Option::is_none")]
                crossing: Option<BTreeMap<String, usize>>,
            }
            let crossing = if *crossing {
                let counts = crossing_counts(&f)?;
                Some(f.names.iter().cloned().zip(counts).collect())
            } else {
                None
            };
            Ok(Outcome::ok(json(&StatsOut {
                stats: family_stats(&f)?,
                crossing,
            })?))
        }
        Command::Color { input, mode, k } => color(&read_family(input)?, *mode, *k),
        Command::Discharge { input, k, csv } => {
            let f = read_family(input)?;
            let k = k.unwrap_or(f.declared_k.max(f.k_effective()));
            let g = build_contact_graph(&f)?;
            let faces = trace_faces(&g);
            let d = verify_discharging(&g, &faces, k, &DischargeConstants::default())?;
            if let Some(path) = csv {
                std::fs::write(path, rows_to_csv(&d.rows))?;
            }
            let code = if d.report.consistent { 0 } else { 1 };
            Ok(Outcome {
                body: json(&d.report)?,
                code,
            })
        }
        Command::Sparsify {
            input,
            delta,
            trials,
            seed,
        } => {
            let f = read_family(input)?;
            let delta = match delta {
                Some(d) => *d,
                None => {
                    let alpha = family_stats(&f)?
                        .alpha
                        .ok_or(Error::Undefined("sparsification without intersecting pairs"))?;
                    delta_of_alpha(to_f64(&alpha).min(1.0))?
                }
            };
            Ok(Outcome::ok(json(&sparsify_experiment(&f, delta, *trials, *seed)?)?))
        }
        Command::Bounds { input, alpha, k } => {
            let rows = match (input, alpha) {
                (Some(path), _) => {
                    let f = read_family(path)?;
                    let simple = validate_family(&f, ValidateOptions::default()).simple;
                    bound_table(&family_stats(&f)?, f.kind, simple)
                }
                (None, Some(a)) => {
                    BoundParams::new(*a)?;
                    // Scaled to an exact rational with six decimals.
                    let alpha = rat((a * 1e6).round() as i64, 1_000_000);
                    let stats = FamilyStats {
                        n: 0,
                        m: 0,
                        k_effective: k.unwrap_or(1),
                        alpha: Some(alpha),
                        avg_distance: None,
                        max_distance: None,
                    };
                    bound_table(&stats, FamilyKind::Curves, false)
                }
                (None, None) => {
                    return Err(Error::Parse("bounds needs an input file or --alpha".into()))
                }
            };
            Ok(Outcome::ok(bound_table_csv(&rows)))
        }
        Command::Cyclepack {
            input,
            limit,
            report,
        } => {
            let g = PlanarDigraph::from_json(&std::fs::read_to_string(input)?)?;
            let packing = pack(&g, *limit)?;
            let ratio = ratio_report(&packing)?;
            let body = match report {
                ReportFormat::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        packing: &'a crate::cyclepack::PackingResult,
                        ratio: &'a crate::cyclepack::RatioReport,
                    }
                    json(&Out {
                        packing: &packing,
                        ratio: &ratio,
                    })?
                }
                ReportFormat::Csv => {
                    let mut s = String::from("cycle,weight,multiplicity,in_integral_packing\n");
                    for (i, c) in packing.cycles.iter().enumerate() {
                        s.push_str(&format!(
                            "{},{},{},{}\n",
                            c.join(" "),
                            crate::rational::format_big(&packing.fractional.weights[i]),
                            packing.multiplicities[i],
                            packing.nu_witness.contains(&i)
                        ));
                    }
                    s.push_str(&format!(
                        "# nu={} nu_star={} ratio={}\n",
                        ratio.nu,
                        crate::rational::format_big(&ratio.nu_star),
                        ratio.ratio.as_deref().unwrap_or("undefined")
                    ));
                    s
                }
            };
            Ok(Outcome::ok(body))
        }
        Command::ScanConjecture {
            generator,
            count,
            witness_dir,
        } => {
            let report =
                cmd_scan_conjecture(&generator.spec(), *count, generator.seed, witness_dir.as_deref())?;
            let code = if report.within_limit() { 0 } else { 1 };
            Ok(Outcome {
                body: json(&report)?,
                code,
            })
        }
        Command::Pipeline { input } => {
            let text = std::fs::read_to_string(input)?;
            let report = cmd_pipeline(&text);
            Ok(Outcome {
                body: json(&report)?,
                code: report.exit_code,
            })
        }
    }
}

fn color(f: &ContactFamily, mode: ColorMode, k: Option<usize>) -> Result<Outcome> {
    let g = intersection_graph(f)?;
    let k = k.unwrap_or(f.declared_k.max(f.k_effective()));
    let coloring = match mode {
        ColorMode::Kplus1 => {
            if f.kind != FamilyKind::Regions {
                return Err(Error::Precondition("kplus1 mode needs a region family".into()));
            }
            color_regions(f, k)?
        }
        ColorMode::Greedy => greedy_coloring(&g, None),
    };
    #[derive(Serialize)]
    struct Certificate {
        pairs_checked: usize,
        conflicts: Vec<(String, String)>,
        proper: bool,
    }
    #[derive(Serialize)]
    struct ColorOut {
        mode: &'static str,
        k: usize,
        palette_size: usize,
        coloring: BTreeMap<String, usize>,
        certificate: Certificate,
    }
    let conflicts: Vec<(String, String)> = coloring
        .conflicts(&g)
        .into_iter()
        .map(|(a, b)| (f.names[a].clone(), f.names[b].clone()))
        .collect();
    let proper = conflicts.is_empty() && coloring.is_proper_for(f);
    let out = ColorOut {
        mode: match mode {
            ColorMode::Kplus1 => "kplus1",
            ColorMode::Greedy => "greedy",
        },
        k,
        palette_size: coloring.palette_size,
        coloring: f.names.iter().cloned().zip(coloring.assignment.iter().copied()).collect(),
        certificate: Certificate {
            pairs_checked: g.edge_count(),
            conflicts,
            proper,
        },
    };
    Ok(Outcome {
        body: json(&out)?,
        code: if proper { 0 } else { 1 },
    })
}

/// Parses arguments, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.body),
                None => {
                    print!("{}", out.body);
                    Ok(())
                }
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
