use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::Args;
use ctap_core::protocol::metrics_for_distances;
use ctap_core::report::to_json;
use ctap_core::{pair_distances, DonorTriple, Position3D};

use crate::config::{material, FileConfig};

#[derive(Debug, Args)]
pub struct TripleArgs {
    /// Donor 1 position "x,y,z" in nm.
    #[arg(long, allow_hyphen_values = true)]
    p1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p3: Option<String>,
    #[arg(long)]
    adiabaticity: Option<f64>,
    #[arg(long = "bohr-nm")]
    bohr_nm: Option<f64>,
    #[arg(long = "hartree-mev")]
    hartree_mev: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: TripleArgs) -> Result<()> {
    let mut file = FileConfig::load(args.config.as_deref())?;
    let p1: Option<String> = file.pick_opt(args.p1, "p1")?;
    let p2: Option<String> = file.pick_opt(args.p2, "p2")?;
    let p3: Option<String> = file.pick_opt(args.p3, "p3")?;
    let a_target = file.pick(args.adiabaticity, "adiabaticity", 0.01)?;
    let bohr = file.pick_opt(args.bohr_nm, "bohr_nm")?;
    let hartree = file.pick_opt(args.hartree_mev, "hartree_mev")?;
    file.finish()?;

    let pos = |label: &str, v: Option<String>| -> Result<Position3D> {
        let v = v.ok_or_else(|| anyhow!("--{label} is required"))?;
        parse_position(&v).ok_or_else(|| anyhow!("--{label}: expected x,y,z in nm, got {v:?}"))
    };
    let triple = DonorTriple::new(pos("p1", p1)?, pos("p2", p2)?, pos("p3", p3)?)?;
    let params = material(bohr, hartree)?;
    let metrics = metrics_for_distances(&pair_distances(&triple), &params, a_target)?;
    print!("{}", to_json(&metrics));
    Ok(())
}

fn parse_position(s: &str) -> Option<Position3D> {
    let v: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse().ok())
        .collect::<Option<_>>()?;
    match v[..] {
        [x, y, z] => Some(Position3D::new(x, y, z)),
        _ => None,
    }
}
