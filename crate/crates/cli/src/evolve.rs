use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use ctap_core::propagator::{evolve, DEFAULT_STEPS, MAX_TRAJECTORY_SAMPLES};
use ctap_core::protocol::adiabaticity_analytic;
use ctap_core::report::{csv, fmt_sig9, to_json, trajectory_csv};
use ctap_core::{bright_energies, PulseSchedule};

use crate::config::{write, FileConfig};

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Peak 1-2 coupling in meV.
    #[arg(long)]
    w12: Option<f64>,
    /// Peak 2-3 coupling in meV.
    #[arg(long)]
    w23: Option<f64>,
    /// Constant 1-3 coupling in meV.
    #[arg(long)]
    omega13: Option<f64>,
    #[arg(long)]
    adiabaticity: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: EvolveArgs) -> Result<()> {
    let mut file = FileConfig::load(args.config.as_deref())?;
    let w12: Option<f64> = file.pick_opt(args.w12, "w12")?;
    let w23: Option<f64> = file.pick_opt(args.w23, "w23")?;
    let omega13 = file.pick(args.omega13, "omega13", 0.0)?;
    let a_target = file.pick(args.adiabaticity, "adiabaticity", 0.01)?;
    let steps = file.pick(args.steps, "steps", DEFAULT_STEPS)?;
    let out_dir = file.pick(args.out_dir, "out_dir", PathBuf::from("."))?;
    file.finish()?;

    let (Some(w12), Some(w23)) = (w12, w23) else {
        bail!("--w12 and --w23 are required");
    };
    if !(w12 > 0.0 && w23 > 0.0) {
        bail!("couplings must be positive (w12={w12}, w23={w23})");
    }
    let schedule = PulseSchedule::for_adiabaticity(w12, w23, a_target)?;
    let result = evolve(&schedule, omega13, steps, true)?;

    let t_max = schedule.t_max();
    let grid: Vec<f64> = (0..MAX_TRAJECTORY_SAMPLES)
        .map(|i| t_max * (i as f64 / (MAX_TRAJECTORY_SAMPLES - 1) as f64))
        .collect();
    let couplings: Vec<[f64; 3]> = grid
        .iter()
        .map(|&t| {
            let o12 = ctap_core::protocol::omega12(t, &schedule).expect("t in window");
            let o23 = ctap_core::protocol::omega23(t, &schedule).expect("t in window");
            [t, o12, o23]
        })
        .collect();
    let energies = couplings.iter().map(|&[t, o12, o23]| {
        let e = bright_energies(o12, o23);
        [t, e.minus, e.zero, e.plus]
    });
    let adiabaticity = grid
        .iter()
        .map(|&t| Ok([t, adiabaticity_analytic(t, &schedule)?]))
        .collect::<Result<Vec<_>>>()?;

    let trajectory = result.trajectory.as_deref().unwrap_or_default();
    write(&out_dir, "trajectory.csv", &trajectory_csv(trajectory))?;
    write(
        &out_dir,
        "eigenvalues.csv",
        &csv(["t_ns", "E_minus", "E_0", "E_plus"], energies),
    )?;
    write(
        &out_dir,
        "adiabaticity.csv",
        &csv(["t_ns", "A"], adiabaticity),
    )?;
    write(
        &out_dir,
        "couplings.csv",
        &csv(["t_ns", "W12", "W23"], couplings),
    )?;

    let summary = serde_json::json!({
        "w12": w12,
        "w23": w23,
        "omega13": omega13,
        "adiabaticity_target": a_target,
        "t_max": t_max,
        "fidelity": result.fidelity,
        "max_p2": result.max_p2,
        "norm_drift": result.norm_drift,
        "steps": result.steps,
    });
    write(&out_dir, "evolution.json", &to_json(&summary))?;
    println!(
        "fidelity={} max_p2={} t_max_ns={}",
        fmt_sig9(result.fidelity),
        fmt_sig9(result.max_p2),
        fmt_sig9(t_max)
    );
    Ok(())
}
