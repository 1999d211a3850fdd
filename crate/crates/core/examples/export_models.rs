//! Writes every formulation of a small instance in LP and MPS format to a
//! directory (default `./models`).

use ldtsp::instance::random_instance;
use ldtsp::model::{build_milp, build_minlp, export_lp, export_mps, ModelVariant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "models".into());
    std::fs::create_dir_all(&dir)?;
    let inst = random_instance(4, 2.0, 1);
    let mut models = Vec::new();
    for v in [ModelVariant::CoreMilp, ModelVariant::Baseline1Milp, ModelVariant::Baseline2MilpDfj] {
        models.push(build_milp(&inst, v)?);
    }
    models.push(build_minlp(&inst));
    for m in &models {
        let stem = format!("{dir}/{}", m.variant.name());
        std::fs::write(format!("{stem}.lp"), export_lp(m))?;
        match export_mps(m) {
            Ok(text) => std::fs::write(format!("{stem}.mps"), text)?,
            Err(e) => println!("{}: no MPS ({e})", m.variant.name()),
        }
        println!("{}: {} variables, {} rows", m.variant.name(), m.n_vars(), m.constraints.len());
    }
    Ok(())
}
