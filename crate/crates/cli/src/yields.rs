use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use ctap_core::exec::with_threads;
use ctap_core::report::{cdf_csv, fmt_sig9, sensitivity_csv, to_json};
use ctap_core::stats::{bohr_sensitivity, population_metrics, report_from_metrics};
use ctap_core::{
    builtin_strategies, builtin_strategy, parse_srim_range3d, Execution, ImplantStrategy,
    StraggleSource, TripleSampler,
};

use crate::config::{material, write, FileConfig};

pub const SENSITIVITY_BOHR_NM: [f64; 3] = [2.5, 3.0, 3.5];

#[derive(Debug, Args)]
pub struct YieldArgs {
    /// Preset name (P14keV, P7keV) or path to a strategy key=value file.
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    adiabaticity: Option<f64>,
    #[arg(long = "threshold-ns")]
    threshold_ns: Option<f64>,
    /// SRIM RANGE_3D file used as the straggle distribution.
    #[arg(long = "srim-file")]
    srim_file: Option<PathBuf>,
    #[arg(long = "bohr-nm")]
    bohr_nm: Option<f64>,
    #[arg(long = "hartree-mev")]
    hartree_mev: Option<f64>,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Run configuration as key=value lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: YieldArgs) -> Result<()> {
    let mut file = FileConfig::load(args.config.as_deref())?;
    let strategy_arg = file.pick(args.strategy, "strategy", "P14keV".to_string())?;
    let samples = file.pick(args.samples, "samples", 100_000usize)?;
    let seed = file.pick(args.seed, "seed", 0u64)?;
    let a_target = file.pick(args.adiabaticity, "adiabaticity", 0.01)?;
    let threshold = file.pick(args.threshold_ns, "threshold_ns", 1.0)?;
    let srim_file: Option<PathBuf> = file.pick_opt(args.srim_file, "srim_file")?;
    let bohr = file.pick_opt(args.bohr_nm, "bohr_nm")?;
    let hartree = file.pick_opt(args.hartree_mev, "hartree_mev")?;
    let out_dir = file.pick(args.out_dir, "out_dir", PathBuf::from("."))?;
    let threads = file.pick_opt(args.threads, "threads")?;
    file.finish()?;

    if samples < 1 {
        bail!("--samples must be at least 1");
    }
    if !(a_target > 0.0 && a_target < 1.0) {
        bail!("--adiabaticity must lie in (0, 1), got {a_target}");
    }
    if threads == Some(0) {
        bail!("--threads must be at least 1");
    }
    let params = material(bohr, hartree)?;
    let strategy = resolve_strategy(&strategy_arg)?;
    let source = match &srim_file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read SRIM file {}", path.display()))?;
            let samples =
                parse_srim_range3d(&text).with_context(|| format!("in {}", path.display()))?;
            StraggleSource::empirical(samples)?
        }
        None => StraggleSource::Parametric(strategy.clone()),
    };
    for w in source.warnings() {
        eprintln!("warning: {w}");
    }

    let (report, sensitivity) = with_threads(threads, || -> Result<_> {
        let exec = Execution::default();
        let sampler = TripleSampler::new(&source, &strategy, seed)?;
        let triples = sampler.population(samples, exec);
        let metrics = population_metrics(&triples, &params, a_target, exec)?;
        let report = report_from_metrics(&metrics, a_target, threshold)?;
        let sensitivity = bohr_sensitivity(
            &triples,
            &params,
            &SENSITIVITY_BOHR_NM,
            a_target,
            threshold,
            exec,
        )?;
        Ok((report, sensitivity))
    })?;

    write(&out_dir, "yield_report.json", &to_json(&report))?;
    write(&out_dir, "cdf.csv", &cdf_csv(&report))?;
    write(&out_dir, "sensitivity.csv", &sensitivity_csv(&sensitivity))?;
    println!(
        "yield={} j_ok={} n={}",
        fmt_sig9(report.yield_fraction),
        fmt_sig9(report.j_below_one_fraction),
        report.n_samples
    );
    Ok(())
}

fn resolve_strategy(arg: &str) -> Result<ImplantStrategy> {
    if builtin_strategies()
        .iter()
        .any(|s| s.name.eq_ignore_ascii_case(arg))
    {
        return Ok(builtin_strategy(arg)?);
    }
    let path = PathBuf::from(arg);
    if path.is_file() {
        let text = fs::read_to_string(&path)
            .with_context(|| format!("cannot read strategy file {}", path.display()))?;
        return ImplantStrategy::from_config(&text)
            .with_context(|| format!("in {}", path.display()));
    }
    Ok(builtin_strategy(arg)?)
}
