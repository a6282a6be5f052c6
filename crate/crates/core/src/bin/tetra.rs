//! `tetra`: metric reports, inequality checks, campaigns and unfoldings.
//!
//! Exit codes: 0 clean, 2 inequality violations, 3 engine or input error.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tetra::campaign::{campaign_with, write_csv, REFINE_ITERATIONS};
use tetra::generators::{GeneratorKind, GeneratorSpec};
use tetra::report::{check_inequalities, compute_report, margins, MetricReport};
use tetra::svg::{export_unfolding, UnfoldMode};
use tetra::{json, Config, SurfacePoint, Tetrahedron, TetraError};

const EXIT_VIOLATIONS: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "tetra", version, about = "Diameters and radii of tetrahedron surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Family {
    /// regular, isosceles, eps-thick, normal-eps-thick or random.
    #[arg(long, default_value = "random")]
    kind: GeneratorKind,
    /// Edge length (regular) or long-edge length (eps-thick kinds).
    #[arg(long, default_value_t = 1.0)]
    edge: f64,
    /// Triangle sides of the isosceles construction.
    #[arg(long, num_args = 3, value_names = ["P", "Q", "R"])]
    sides: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lower bound on volume / longest_edge³.
    #[arg(long, default_value_t = 1e-6)]
    quality_floor: f64,
}

impl Family {
    fn spec(&self) -> GeneratorSpec {
        let mut spec = GeneratorSpec::new(self.kind);
        spec.edge = self.edge;
        if let Some(s) = &self.sides {
            spec.sides = [s[0], s[1], s[2]];
        }
        spec.eps = self.eps;
        spec.seed = self.seed;
        spec.quality_floor = self.quality_floor;
        spec
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a tetrahedron and write it as JSON.
    Make {
        #[command(flatten)]
        family: Family,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compute Diam, diam, Rad, rad with witnesses.
    Metrics {
        #[arg(short, long)]
        input: PathBuf,
        /// Optimization tolerance, also used for the inequality check.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a metric report against every inequality.
    Check {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run a verification campaign; writes the CSV plus `.extremal.json` and
    /// `.violations.json` next to it.
    Campaign {
        #[command(flatten)]
        family: Family,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = REFINE_ITERATIONS)]
        refine_iterations: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the star or source unfolding as SVG.
    Unfold {
        #[arg(short, long)]
        input: PathBuf,
        /// `v:<vertex>` or `f:<face>:<b0>,<b1>,<b2>`.
        #[arg(long, default_value = "v:0")]
        source: SurfacePoint,
        #[arg(long, default_value = "star")]
        mode: UnfoldMode,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> TetraError {
    TetraError::InvalidParameter(format!("{}: {e}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, TetraError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, e))
}

fn write_json<T: serde::Serialize>(path: &Path, v: &T) -> Result<(), TetraError> {
    std::fs::write(path, json::to_string(v)?).map_err(|e| io_err(path, e))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn print_margins(report: &MetricReport, tol: f64) {
    for m in margins(&report.ratios, tol) {
        let status = if m.margin < 0.0 { "VIOLATED" } else { "ok" };
        println!("{:<24} value {:.12} bound {:.12} margin {:+.3e}  {status}", m.inequality, m.value, m.bound, m.margin);
    }
}

fn run(cli: Cli) -> Result<u8, TetraError> {
    match cli.command {
        Command::Make { family, output } => {
            let t = family.spec().generate(0)?;
            write_json(&output, &t)?;
            Ok(0)
        }
        Command::Metrics { input, tol, output } => {
            let t: Tetrahedron = read_json(&input)?;
            let cfg = Config::default().with_opt_tol(tol);
            let report = compute_report(&t, &cfg)?;
            write_json(&output, &report)?;
            print_margins(&report, tol);
            Ok(if check_inequalities(&report, tol).is_empty() { 0 } else { EXIT_VIOLATIONS })
        }
        Command::Check { input, tol } => {
            let report: MetricReport = read_json(&input)?;
            print_margins(&report, tol);
            let violations = check_inequalities(&report, tol);
            println!("{}", json::to_string(&violations)?.trim_end());
            Ok(if violations.is_empty() { 0 } else { EXIT_VIOLATIONS })
        }
        Command::Campaign {
            family,
            n,
            refine_iterations,
            tol,
            output,
        } => {
            let spec = family.spec();
            let cfg = Config::default().with_opt_tol(tol);
            let result = campaign_with(&spec, n, spec.seed, &cfg, refine_iterations)?;
            let file = File::create(&output).map_err(|e| io_err(&output, e))?;
            write_csv(&result.rows, BufWriter::new(file))?;
            let extremal = serde_json::json!({
                "model": result.model,
                "seed": result.seed,
                "extremal": json::to_value(&result.extremal)?,
                "refinement": json::to_value(&result.refinement)?,
            });
            write_json(&sibling(&output, "extremal.json"), &extremal)?;
            write_json(&sibling(&output, "violations.json"), &result.violations)?;
            let errors = result.errors();
            eprintln!(
                "{n} instances, {} violations, {errors} errors; min Diam/Rad {}",
                result.violations.len(),
                result.min_diam_over_rad().map_or(f64::NAN, |m| m.0)
            );
            Ok(if !result.violations.is_empty() {
                EXIT_VIOLATIONS
            } else if errors > 0 {
                EXIT_ERROR
            } else {
                0
            })
        }
        Command::Unfold {
            input,
            source,
            mode,
            output,
        } => {
            let t: Tetrahedron = read_json(&input)?;
            let meta = export_unfolding(&t, &source, mode, &output, &Config::default())?;
            if let Some(note) = &meta.note {
                eprintln!("note: {note}");
            }
            if !meta.simple {
                eprintln!("warning: unfolding outline is not simple");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, TetraError::AmbiguousCut { .. }) {
                eprintln!("note: perturb the source slightly or use --mode source, which perturbs automatically");
            }
            ExitCode::from(EXIT_ERROR)
        }
    }
}
