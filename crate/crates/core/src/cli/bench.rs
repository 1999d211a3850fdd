//! Manifest-driven benchmark runs.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use super::{load_instance, run_solver, svg, Failure, SolveVariant, EXIT_BAD_INPUT, EXIT_FAILURE, EXIT_OK};
use crate::instance::Instance;
use crate::model::ModelVariant;
use crate::solver::{SolveConfig, SolveReport};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub instance: PathBuf,
    pub variant: SolveVariant,
    pub time_limit: f64,
    pub seed: u64,
}

pub fn csv_header() -> &'static str {
    "instance,variant,gamma,alpha,seed,status,cost,bound,gap_pct,nodes,cuts,lp_iters,wall_s"
}

pub fn csv_row(inst: &Instance, variant: SolveVariant, seed: u64, r: &SolveReport, omit_wall_time: bool) -> String {
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        inst.name(),
        variant.name(),
        inst.effective_gamma(),
        inst.alpha(),
        seed,
        r.status,
        opt(r.incumbent_cost),
        r.best_bound,
        opt(r.gap_percent),
        r.nodes_explored,
        r.cuts_added,
        r.lp_iterations,
        if omit_wall_time {
            String::new()
        } else {
            format!("{:.3}", r.wall_time)
        }
    )
}

/// Lines `instance_path,variant,time_limit[,seed]`; `#` starts a comment.
/// Relative paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<BenchCell>, String> {
    let mut cells = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| format!("manifest line {}: {m}", k + 1);
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if !(3..=4).contains(&f.len()) {
            return Err(err("expected instance_path,variant,time_limit[,seed]"));
        }
        let variant = SolveVariant::parse(f[1]).ok_or_else(|| err("unknown variant"))?;
        let time_limit: f64 = f[2].parse().map_err(|_| err("bad time limit"))?;
        if !(time_limit > 0.0 && time_limit.is_finite()) {
            return Err(err("time limit must be positive"));
        }
        let seed = match f.get(3) {
            Some(s) => s.parse().map_err(|_| err("bad seed"))?,
            None => 0,
        };
        let path = PathBuf::from(f[0]);
        cells.push(BenchCell {
            instance: if path.is_relative() { base.join(path) } else { path },
            variant,
            time_limit,
            seed,
        });
    }
    Ok(cells)
}

pub(super) fn run(manifest: &Path, out_dir: &Path, omit_wall_time: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = fs::read_to_string(manifest).map_err(|e| Failure {
        code: EXIT_BAD_INPUT,
        msg: format!("{}: {e}", manifest.display()),
    })?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let cells = parse_manifest(&text, base).map_err(|msg| Failure {
        code: EXIT_BAD_INPUT,
        msg,
    })?;
    let io = |e: std::io::Error| Failure {
        code: EXIT_FAILURE,
        msg: e.to_string(),
    };
    fs::create_dir_all(out_dir).map_err(io)?;

    let mut csv = format!("{}\n", csv_header());
    let mut curves = Vec::new();
    // (gamma label, variant) -> wall time
    let mut times: BTreeMap<(u64, &'static str), f64> = BTreeMap::new();
    let mut gammas: BTreeMap<u64, String> = BTreeMap::new();
    for cell in &cells {
        let label = format!("{}:{}", cell.instance.display(), cell.variant.name());
        let inst = match load_instance(&cell.instance) {
            Ok(i) => i,
            Err(e) => {
                csv.push_str(&format!("{},{},,,{},error,,,,,,,\n", cell.instance.display(), cell.variant.name(), cell.seed));
                writeln!(out, "{label}: {e}").map_err(io)?;
                continue;
            }
        };
        let cfg = SolveConfig {
            variant: match cell.variant {
                SolveVariant::Baseline1 => ModelVariant::Baseline1Milp,
                SolveVariant::Baseline2 => ModelVariant::Baseline2MilpDfj,
                _ => ModelVariant::CoreMilp,
            },
            time_limit: Duration::from_secs_f64(cell.time_limit),
            seed: cell.seed,
            ..SolveConfig::default()
        };
        match run_solver(&inst, cell.variant, &cfg) {
            Ok(r) => {
                let row = csv_row(&inst, cell.variant, cell.seed, &r, omit_wall_time);
                writeln!(out, "{row}").map_err(io)?;
                csv.push_str(&row);
                csv.push('\n');
                let pts: Vec<(f64, f64)> = r
                    .events
                    .iter()
                    .filter_map(|e| e.gap().map(|g| (e.elapsed, g)))
                    .collect();
                curves.push((format!("{} {}", inst.name(), cell.variant.name()), pts));
                let g = inst.effective_gamma();
                gammas.insert(g.to_bits(), g.to_string());
                *times.entry((g.to_bits(), cell.variant.name())).or_insert(0.0) += r.wall_time;
            }
            Err(e) => {
                csv.push_str(&format!(
                    "{},{},{},{},{},error,,,,,,,\n",
                    inst.name(),
                    cell.variant.name(),
                    inst.effective_gamma(),
                    inst.alpha(),
                    cell.seed
                ));
                writeln!(out, "{label}: {e}").map_err(io)?;
            }
        }
    }
    fs::write(out_dir.join("results.csv"), csv).map_err(io)?;

    let gap_svg = svg::line_chart("Optimality gap over time", "time (s)", "gap (%)", &curves);
    fs::write(out_dir.join("gap_vs_time.svg"), gap_svg).map_err(io)?;

    let mut order: Vec<u64> = gammas.keys().copied().collect();
    order.sort_by(|a, b| f64::from_bits(*a).total_cmp(&f64::from_bits(*b)));
    let categories: Vec<String> = order.iter().map(|g| gammas[g].clone()).collect();
    let mut variants: Vec<&'static str> = times.keys().map(|k| k.1).collect();
    variants.sort_unstable();
    variants.dedup();
    let series: Vec<(String, Vec<f64>)> = variants
        .iter()
        .map(|&v| (v.to_string(), order.iter().map(|g| times.get(&(*g, v)).copied().unwrap_or(0.0)).collect()))
        .collect();
    let bar = svg::bar_chart("Computation time by unladen mass factor", "gamma", "time (s)", &categories, &series);
    fs::write(out_dir.join("time_vs_gamma.svg"), bar).map_err(io)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parsing() {
        let cells = parse_manifest("# header\na.ldtsp, core, 5\n/abs/b.ldtsp,astar,1.5,7 # note\n\n", Path::new("/m")).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].instance, PathBuf::from("/m/a.ldtsp"));
        assert_eq!((cells[0].variant, cells[0].seed), (SolveVariant::Core, 0));
        assert_eq!((cells[1].variant, cells[1].time_limit, cells[1].seed), (SolveVariant::Astar, 1.5, 7));
        assert!(parse_manifest("a,core", Path::new(".")).is_err());
        assert!(parse_manifest("a,nope,1", Path::new(".")).is_err());
        assert!(parse_manifest("a,core,0", Path::new(".")).is_err());
    }
}
