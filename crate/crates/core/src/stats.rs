//! Population statistics: empirical CDF of t_max, yield and J fractions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::physics::{pair_distances, DonorTriple, MaterialParams};
use crate::protocol::{metrics_for_distances, TripleMetrics};

pub const PERCENTILES: [u32; 7] = [1, 5, 25, 50, 75, 95, 99];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YieldReport {
    pub n_samples: usize,
    pub adiabaticity_target: f64,
    pub threshold: f64,
    pub yield_fraction: f64,
    pub j_below_one_fraction: f64,
    /// Stricter reading of J ≪ 1.
    pub j_below_tenth_fraction: f64,
    pub too_close_fraction: f64,
    pub tmax_percentiles: BTreeMap<u32, f64>,
    pub cdf: Vec<(f64, f64)>,
}

impl YieldReport {
    /// Right-continuous empirical CDF evaluated at `t`.
    pub fn cdf_at(&self, t: f64) -> f64 {
        let idx = self.cdf.partition_point(|&(v, _)| v <= t);
        if idx == 0 {
            0.0
        } else {
            self.cdf[idx - 1].1
        }
    }
}

pub fn population_metrics(
    triples: &[DonorTriple],
    params: &MaterialParams,
    a_target: f64,
    exec: Execution,
) -> Result<Vec<TripleMetrics>> {
    exec.map_indexed(triples.len(), |i| {
        metrics_for_distances(&pair_distances(&triples[i]), params, a_target)
    })
    .into_iter()
    .collect()
}

pub fn evaluate_population(
    triples: &[DonorTriple],
    params: &MaterialParams,
    a_target: f64,
    threshold: f64,
    exec: Execution,
) -> Result<YieldReport> {
    if triples.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    if !(a_target > 0.0 && a_target < 1.0) {
        return Err(invalid(
            "adiabaticity",
            format!("must lie in (0, 1), got {a_target}"),
        ));
    }
    let metrics = population_metrics(triples, params, a_target, exec)?;
    report_from_metrics(&metrics, a_target, threshold)
}

/// Builds the report from per-triple metrics. Too-close triples are counted
/// in the flag fraction but kept in the yield.
pub fn report_from_metrics(
    metrics: &[TripleMetrics],
    a_target: f64,
    threshold: f64,
) -> Result<YieldReport> {
    if metrics.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(invalid(
            "threshold",
            format!("must be > 0, got {threshold}"),
        ));
    }
    let n = metrics.len();
    let frac = |count: usize| count as f64 / n as f64;

    let mut t: Vec<f64> = metrics.iter().map(|m| m.t_max).collect();
    t.sort_by(f64::total_cmp);

    let tmax_percentiles = PERCENTILES
        .iter()
        .map(|&p| (p, nearest_rank(&t, p as f64)))
        .collect();

    Ok(YieldReport {
        n_samples: n,
        adiabaticity_target: a_target,
        threshold,
        yield_fraction: frac(t.partition_point(|&v| v <= threshold)),
        j_below_one_fraction: frac(metrics.iter().filter(|m| m.j_param < 1.0).count()),
        j_below_tenth_fraction: frac(metrics.iter().filter(|m| m.j_param < 0.1).count()),
        too_close_fraction: frac(metrics.iter().filter(|m| m.too_close_flag).count()),
        tmax_percentiles,
        cdf: cdf_of_sorted(&t),
    })
}

/// Nearest-rank percentile of an ascending slice.
pub fn nearest_rank(sorted: &[f64], percentile: f64) -> f64 {
    let n = sorted.len();
    let rank = ((percentile / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Right-continuous empirical CDF as `(value, fraction ≤ value)` over the
/// distinct values.
pub fn empirical_cdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    cdf_of_sorted(&v)
}

fn cdf_of_sorted(sorted: &[f64]) -> Vec<(f64, f64)> {
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        let frac = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 = frac,
            _ => out.push((x, frac)),
        }
    }
    out
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub bohr_nm: f64,
    pub yield_fraction: f64,
    pub j_below_one_fraction: f64,
}

/// Re-evaluates one population for several effective Bohr radii.
pub fn bohr_sensitivity(
    triples: &[DonorTriple],
    params: &MaterialParams,
    bohr_radii: &[f64],
    a_target: f64,
    threshold: f64,
    exec: Execution,
) -> Result<Vec<SensitivityRow>> {
    bohr_radii
        .iter()
        .map(|&a| {
            let r = evaluate_population(
                triples,
                &params.with_bohr_radius(a)?,
                a_target,
                threshold,
                exec,
            )?;
            Ok(SensitivityRow {
                bohr_nm: a,
                yield_fraction: r.yield_fraction,
                j_below_one_fraction: r.j_below_one_fraction,
            })
        })
        .collect()
}
