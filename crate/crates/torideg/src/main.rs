//! Batch command-line surface over the torideg library: ingestion,
//! pipelines, JSON reports and SVG rendering.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use torideg::json;
use torideg::pipeline::{assemble, BuildOptions, MarkingMode, PipelineError, Stratification};
use torideg::polytope::LatticePolytope;
use torideg::svg::render_svg;
use torideg::worked;

#[derive(Parser)]
#[command(
    name = "torideg",
    about = "Flag triangulations, quasi-valuations and semi-toric degenerations of lattice polytopes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct CommonArgs {
    /// Polytope JSON file: {"dim": n, "vertices": [[int,...],...]}
    #[arg(long)]
    polytope: PathBuf,
    /// Marking mode: `barycentric`, `integral`, or a marking JSON file path
    #[arg(long, default_value = "barycentric")]
    marking: String,
    /// Extremal-degree multipliers, e.g. `P=2` or `3=2,7=4`
    #[arg(long)]
    multipliers: Vec<String>,
    /// Level bound for monoid truncations (default: dim + 2, or
    /// TORIDEG_LEVEL_BOUND)
    #[arg(long)]
    level_bound: Option<i64>,
    /// Degree bound for algebra truncations (default: 3)
    #[arg(long)]
    degree_bound: Option<i64>,
    /// Linearization of the face poset: `default` or `alt`
    #[arg(long, default_value = "default")]
    linearization: String,
    /// Directory to also write the report into
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Face lattice: faces, Hasse diagram, maximal chains, linearization
    Faces(CommonArgs),
    /// Build and verify the flag triangulation; report simplices and volumes
    Triangulate(CommonArgs),
    /// Quasi-valuation of graded points (from --point or stdin JSON)
    Nu {
        #[command(flatten)]
        common: CommonArgs,
        /// A graded point `m:(a,b,...)`; repeatable. Without it, stdin is
        /// read as JSON (one object or a list).
        #[arg(long)]
        point: Vec<String>,
        /// Treat all points as one formal sum instead of separate queries
        #[arg(long)]
        sum: bool,
    },
    /// Chain monoids, Hilbert bases, fan condition and component report
    Fan(CommonArgs),
    /// Generator set, kernel bases, weight vector and homogenization report
    Algebra(CommonArgs),
    /// Normality check of the polytope itself (no marking needed)
    Normality {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integral-case limit report: degree-one components and radical evidence
    Shadow(CommonArgs),
    /// SVG rendering of a two-dimensional triangulation
    Render(CommonArgs),
    /// Replay the bundled worked examples and report one verdict per check
    PaperExamples {
        /// List the assertion names without running them
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let msg = serde_json::json!({"error": e.to_string()});
            eprintln!("{}", serde_json::to_string_pretty(&msg).unwrap());
            ExitCode::from(1)
        }
    }
}

fn load_polytope(path: &PathBuf) -> Result<LatticePolytope, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Input(format!("cannot read {}: {e}", path.display())))?;
    json::parse_polytope(&text)
}

fn build(common: &CommonArgs) -> Result<Stratification, PipelineError> {
    let polytope = load_polytope(&common.polytope)?;
    let lattice = polytope.face_lattice();
    let mut multipliers = json::parse_multipliers(&common.multipliers, &lattice)?;
    let mode = match common.marking.as_str() {
        "barycentric" => MarkingMode::Barycentric,
        "integral" => MarkingMode::Integral,
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                PipelineError::Input(format!("cannot read marking {path}: {e}"))
            })?;
            let (marking, file_multipliers) = json::parse_marking(&text, &lattice)?;
            for (f, k) in file_multipliers {
                multipliers.entry(f).or_insert(k);
            }
            MarkingMode::Explicit(marking)
        }
    };
    let alternative_order = match common.linearization.as_str() {
        "default" => false,
        "alt" => true,
        other => {
            return Err(PipelineError::Input(format!(
                "unknown linearization `{other}`; use `default` or `alt`"
            )))
        }
    };
    assemble(polytope, mode, BuildOptions { multipliers, alternative_order })
}

fn level_bound(common: &CommonArgs, dim: usize) -> i64 {
    common
        .level_bound
        .or_else(|| {
            std::env::var("TORIDEG_LEVEL_BOUND")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(dim as i64 + 2)
        .max(1)
}

fn degree_bound(common: &CommonArgs) -> i64 {
    common.degree_bound.unwrap_or(3).max(1)
}

fn emit(
    report: &serde_json::Value,
    out: &Option<PathBuf>,
    name: &str,
) -> Result<(), PipelineError> {
    let text = serde_json::to_string_pretty(report).expect("report serialization");
    println!("{text}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .map_err(|e| PipelineError::Input(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        std::fs::write(&path, format!("{text}\n"))
            .map_err(|e| PipelineError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    match cli.command {
        Command::Faces(common) => {
            let s = build(&common)?;
            emit(&json::faces_report(&s.lattice), &common.out, "faces.json")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Triangulate(common) => {
            let s = build(&common)?;
            emit(&json::triangulation_report(&s), &common.out, "triangulation.json")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Nu { common, point, sum } => {
            let s = build(&common)?;
            let dim = s.lattice.dim();
            let terms = if point.is_empty() {
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| PipelineError::Input(format!("cannot read stdin: {e}")))?;
                json::parse_graded_points(&text, dim)?
            } else {
                point
                    .iter()
                    .map(|p| json::parse_point_flag(p, dim))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let report = if sum {
                json::nu_report(&s, &terms)?
            } else {
                let reports = terms
                    .iter()
                    .map(|t| json::nu_report(&s, std::slice::from_ref(t)))
                    .collect::<Result<Vec<_>, _>>()?;
                serde_json::Value::Array(reports)
            };
            emit(&report, &common.out, "nu.json")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fan(common) => {
            let s = build(&common)?;
            let bound = level_bound(&common, s.lattice.dim());
            emit(&json::fan_report(&s, bound)?, &common.out, "fan.json")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Algebra(common) => {
            let s = build(&common)?;
            let lb = level_bound(&common, s.lattice.dim());
            let db = degree_bound(&common);
            emit(&json::algebra_report(&s, lb, db)?, &common.out, "algebra.json")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Normality { polytope, out } => {
            let p = load_polytope(&polytope)?;
            emit(&json::normality_report(&p), &out, "normality.json")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Shadow(common) => {
            let s = build(&common)?;
            let lb = level_bound(&common, s.lattice.dim());
            let db = degree_bound(&common);
            emit(&json::shadow_report_json(&s, lb, db)?, &common.out, "shadow.json")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Render(common) => {
            let s = build(&common)?;
            let svg = render_svg(&s.tri)
                .map_err(|e| PipelineError::Input(e.to_string()))?;
            print!("{svg}");
            if let Some(dir) = &common.out {
                std::fs::create_dir_all(dir).map_err(|e| {
                    PipelineError::Input(format!("cannot create {}: {e}", dir.display()))
                })?;
                let path = dir.join("triangulation.svg");
                std::fs::write(&path, &svg).map_err(|e| {
                    PipelineError::Input(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::PaperExamples { list } => {
            if list {
                for name in worked::reference_names() {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let verdicts = worked::run_reference_checks();
            let mut all_pass = true;
            for v in &verdicts {
                let tag = if v.pass { "PASS" } else { "FAIL" };
                println!("{tag} {}: {}", v.name, v.detail);
                all_pass &= v.pass;
            }
            if all_pass {
                println!("all {} checks passed", verdicts.len());
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
