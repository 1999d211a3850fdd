//! Command-line front end. [`run`] parses arguments, writes human output
//! to `out` and diagnostics to `err`, and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; for `solve`, proven optimal |
//! | 1 | internal failure, or `verify-energy` outside tolerance |
//! | 2 | `solve` stopped at a time or node limit with an incumbent |
//! | 3 | `solve` finished without an incumbent |
//! | 4 | bad input: usage, unreadable or malformed files, bad sequences |

mod bench;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::energy::identity_study;
use crate::instance::{generate_masses, make_instance, parse_tsplib, read_instance, write_instance, Instance};
use crate::model::{build_milp, build_minlp, evaluate_tour, export_lp, export_mps, ModelVariant};
use crate::solver::{astar_search, solve, SolveConfig, SolveReport, SolveStatus};

pub use bench::{csv_header, csv_row, parse_manifest, BenchCell};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_NO_INCUMBENT: i32 = 3;
pub const EXIT_BAD_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ldtsp", version, about = "Load-dependent TSP solver suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveVariant {
    Core,
    Baseline1,
    Baseline2,
    Astar,
}

impl SolveVariant {
    pub fn name(self) -> &'static str {
        match self {
            SolveVariant::Core => "core",
            SolveVariant::Baseline1 => "baseline1",
            SolveVariant::Baseline2 => "baseline2",
            SolveVariant::Astar => "astar",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s, true).ok()
    }

    fn model(self) -> Option<ModelVariant> {
        match self {
            SolveVariant::Core => Some(ModelVariant::CoreMilp),
            SolveVariant::Baseline1 => Some(ModelVariant::Baseline1Milp),
            SolveVariant::Baseline2 => Some(ModelVariant::Baseline2MilpDfj),
            SolveVariant::Astar => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportVariant {
    Core,
    Baseline1,
    Baseline2,
    Minlp,
    Astar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Lp,
    Mps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an instance file from TSPLIB coordinates and seeded masses.
    Generate {
        tsplib: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10.0)]
        gamma: f64,
        #[arg(long, default_value_t = crate::instance::DEFAULT_ALPHA)]
        alpha: f64,
        /// One-based depot id; the last node by default.
        #[arg(long)]
        depot: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and report status, cost, bound and gap.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveVariant::Core)]
        variant: SolveVariant,
        /// Seconds.
        #[arg(long, default_value_t = 600.0)]
        time_limit: f64,
        #[arg(long, default_value_t = 1e-6)]
        gap_tol: f64,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        warm_start: Switch,
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Recorded in the CSV row.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Event log destination.
        #[arg(long)]
        log: Option<PathBuf>,
        /// CSV file to append a result row to.
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        omit_wall_time: bool,
    },
    /// Cost and mass schedule of a visiting order.
    Evaluate {
        instance: PathBuf,
        /// Comma-separated one-based target ids.
        #[arg(long)]
        sequence: String,
    },
    /// Write a model in LP or MPS format.
    Export {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportVariant::Core)]
        variant: ExportVariant,
        #[arg(long, value_enum, default_value_t = Format::Lp)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every cell of a manifest; write results.csv and plots.
    Bench {
        manifest: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Leave the wall-time column empty so reruns compare byte for byte.
        #[arg(long)]
        omit_wall_time: bool,
    },
    /// Check the energy identity on random heading profiles.
    VerifyEnergy {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        profiles: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Error with the exit code it maps to.
struct Failure {
    code: i32,
    msg: String,
}

fn bad_input(msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_BAD_INPUT,
        msg: msg.to_string(),
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: EXIT_FAILURE,
            msg: format!("{}: {e}", p.display()),
        }),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure {
            code: EXIT_FAILURE,
            msg: e.to_string(),
        }),
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Generate {
            tsplib,
            seed,
            gamma,
            alpha,
            depot,
            out: dest,
        } => {
            let text = fs::read_to_string(&tsplib).map_err(|e| bad_input(format!("{}: {e}", tsplib.display())))?;
            let nodes = parse_tsplib(&text).map_err(|e| bad_input(format!("{}: {e}", tsplib.display())))?;
            let depot = match depot {
                Some(0) => return Err(bad_input("depot ids are one-based")),
                Some(d) => Some(d - 1),
                None => None,
            };
            let masses = generate_masses(nodes.len().saturating_sub(1), seed);
            let inst = make_instance(nodes, depot, &masses, gamma, alpha).map_err(bad_input)?;
            write_output(dest.as_deref(), &write_instance(&inst), out)?;
            Ok(EXIT_OK)
        }
        Command::Solve {
            instance,
            variant,
            time_limit,
            gap_tol,
            warm_start,
            max_nodes,
            seed,
            log,
            out_csv,
            omit_wall_time,
        } => {
            let inst = load_instance(&instance).map_err(bad_input)?;
            if !(time_limit > 0.0 && time_limit.is_finite()) {
                return Err(bad_input("time limit must be positive"));
            }
            let cfg = SolveConfig {
                variant: variant.model().unwrap_or(ModelVariant::CoreMilp),
                time_limit: Duration::from_secs_f64(time_limit),
                gap_tolerance: gap_tol,
                warm_start: warm_start == Switch::On,
                seed,
                max_nodes: max_nodes.unwrap_or(usize::MAX),
                ..SolveConfig::default()
            };
            let report = run_solver(&inst, variant, &cfg).map_err(bad_input)?;
            print_summary(out, &report).map_err(io_failure)?;
            if let Some(path) = log {
                let text: String = report.events.iter().map(|e| format!("{e}\n")).collect();
                fs::write(&path, text).map_err(|e| io_failure(format!("{}: {e}", path.display())))?;
            }
            if let Some(path) = out_csv {
                let row = csv_row(&inst, variant, seed, &report, omit_wall_time);
                append_csv(&path, &row).map_err(|e| io_failure(format!("{}: {e}", path.display())))?;
            }
            Ok(match (report.status, &report.incumbent) {
                (_, None) => EXIT_NO_INCUMBENT,
                (SolveStatus::Optimal, _) => EXIT_OK,
                _ => EXIT_LIMIT,
            })
        }
        Command::Evaluate { instance, sequence } => {
            let inst = load_instance(&instance).map_err(bad_input)?;
            let order = parse_sequence(&sequence, inst.len()).map_err(bad_input)?;
            let (tour, cost) = evaluate_tour(&inst, &order).map_err(bad_input)?;
            let mut text = String::from("leg,from,to,distance,mass,energy\n");
            for (k, ((a, b), m)) in tour.legs().zip(&tour.masses).enumerate() {
                let d = inst.d(a, b);
                text.push_str(&format!("{},{},{},{},{},{}\n", k + 1, a + 1, b + 1, d, m, inst.alpha() * m * d));
            }
            text.push_str(&format!("total,{cost}\n"));
            out.write_all(text.as_bytes()).map_err(io_failure)?;
            Ok(EXIT_OK)
        }
        Command::Export {
            instance,
            variant,
            format,
            out: dest,
        } => {
            let inst = load_instance(&instance).map_err(bad_input)?;
            let model = match variant {
                ExportVariant::Core => build_milp(&inst, ModelVariant::CoreMilp),
                ExportVariant::Baseline1 => build_milp(&inst, ModelVariant::Baseline1Milp),
                ExportVariant::Baseline2 => build_milp(&inst, ModelVariant::Baseline2MilpDfj),
                ExportVariant::Minlp => Ok(build_minlp(&inst)),
                ExportVariant::Astar => return Err(bad_input("the tree search has no model to export")),
            }
            .map_err(bad_input)?;
            let text = match format {
                Format::Lp => export_lp(&model),
                Format::Mps => export_mps(&model).map_err(bad_input)?,
            };
            write_output(dest.as_deref(), &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Bench {
            manifest,
            out_dir,
            omit_wall_time,
        } => bench::run(&manifest, &out_dir, omit_wall_time, out),
        Command::VerifyEnergy { profiles, seed } => {
            let r = identity_study(profiles as usize, seed).map_err(|e| Failure {
                code: EXIT_FAILURE,
                msg: e.to_string(),
            })?;
            let ok = r.max_relative_moving <= 1e-4 && r.max_relative_still <= 1e-12;
            writeln!(
                out,
                "profiles={} max_rel_residual_moving={:e} max_rel_residual_still={:e} {}",
                r.profiles,
                r.max_relative_moving,
                r.max_relative_still,
                if ok { "PASS" } else { "FAIL" }
            )
            .map_err(io_failure)?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        msg: e.to_string(),
    }
}

pub fn run_solver(inst: &Instance, variant: SolveVariant, cfg: &SolveConfig) -> Result<SolveReport, String> {
    match variant {
        SolveVariant::Astar => astar_search(inst, cfg),
        _ => solve(inst, cfg),
    }
    .map_err(|e| e.to_string())
}

fn print_summary(out: &mut dyn Write, r: &SolveReport) -> std::io::Result<()> {
    let opt = |v: Option<f64>| v.map_or("none".to_string(), |v| format!("{v:.6}"));
    writeln!(out, "status: {}", r.status)?;
    writeln!(out, "cost: {}", opt(r.incumbent_cost))?;
    writeln!(out, "bound: {:.6}", r.best_bound)?;
    writeln!(out, "gap_pct: {}", opt(r.gap_percent))?;
    writeln!(out, "nodes: {}", r.nodes_explored)?;
    writeln!(out, "cuts: {}", r.cuts_added)?;
    writeln!(out, "time_s: {:.3}", r.wall_time)?;
    if let Some(t) = &r.incumbent {
        let ids: Vec<String> = t.order().iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "sequence: {}", ids.join(","))?;
    }
    Ok(())
}

fn append_csv(path: &Path, row: &str) -> std::io::Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{}", csv_header())?;
    }
    writeln!(f, "{row}")
}

/// One-based comma-separated ids to zero-based node indices.
fn parse_sequence(s: &str, n_nodes: usize) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok.parse::<usize>() {
                Ok(v) if (1..=n_nodes).contains(&v) => Ok(v - 1),
                _ => Err(format!("`{tok}` is not a node id in 1..={n_nodes}")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("ldtsp").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sequence_parsing() {
        assert_eq!(parse_sequence("2, 1,3", 4), Ok(vec![1, 0, 2]));
        assert!(parse_sequence("0,1", 4).is_err());
        assert!(parse_sequence("1,x", 4).is_err());
        assert!(parse_sequence("5", 4).is_err());
    }

    #[test]
    fn usage_errors_are_bad_input() {
        assert_eq!(call(&["verify-energy", "--profiles", "0"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["frobnicate"]).0, EXIT_BAD_INPUT);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn missing_files() {
        let (code, _, err) = call(&["generate", "/nonexistent/file.tsp"]);
        assert_eq!(code, EXIT_BAD_INPUT);
        assert!(err.contains("/nonexistent/file.tsp"));
        assert_eq!(call(&["solve", "/nonexistent/x.ldtsp"]).0, EXIT_BAD_INPUT);
    }
}
