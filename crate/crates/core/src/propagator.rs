//! Fixed-step RK4 integration of `iħ dψ/dt = H(t) ψ` for the three-site chain.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::physics::{angular_frequency, HBAR_MEV_NS};
use crate::protocol::{PulseSchedule, StateVector3};

pub const DEFAULT_STEPS: usize = 20_000;
pub const MIN_STEPS: usize = 1_000;
pub const MAX_TRAJECTORY_SAMPLES: usize = 2_001;
/// Norm drift above which a run is rejected.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
/// Largest phase advance per step that [`recommended_steps`] allows.
const MAX_PHASE_PER_STEP: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t_ns: f64,
    pub populations: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionResult {
    #[serde(skip)]
    pub final_state: StateVector3,
    /// |⟨3|ψ(t_max)⟩|²
    pub fidelity: f64,
    pub max_p2: f64,
    pub norm_drift: f64,
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<TrajectorySample>>,
}

/// Step count that keeps the phase advance per step small, never below
/// [`DEFAULT_STEPS`].
pub fn recommended_steps(s: &PulseSchedule, omega13_peak: f64) -> usize {
    let w_max = s.w12_peak().max(s.w23_peak()) * 2f64.sqrt() + omega13_peak.abs();
    let phase = angular_frequency(w_max, HBAR_MEV_NS) * s.t_max();
    DEFAULT_STEPS.max((phase / MAX_PHASE_PER_STEP).ceil() as usize)
}

/// Evolves |1⟩ under the schedule with a constant Ω13 of `omega13_peak` meV.
pub fn evolve(
    s: &PulseSchedule,
    omega13_peak: f64,
    steps: usize,
    record: bool,
) -> Result<EvolutionResult> {
    evolve_from(s, omega13_peak, steps, record, StateVector3::site(0))
}

pub fn evolve_from(
    s: &PulseSchedule,
    omega13_peak: f64,
    steps: usize,
    record: bool,
    initial: StateVector3,
) -> Result<EvolutionResult> {
    if steps < MIN_STEPS {
        return Err(invalid(
            "steps",
            format!("must be >= {MIN_STEPS}, got {steps}"),
        ));
    }
    if !omega13_peak.is_finite() {
        return Err(invalid("omega13_peak", "must be finite"));
    }
    let dt = s.t_max() / steps as f64;
    let o13 = angular_frequency(omega13_peak, HBAR_MEV_NS);
    let rates = |t: f64| {
        let (w12, w23) = s.couplings_at(t);
        (
            angular_frequency(w12, HBAR_MEV_NS),
            angular_frequency(w23, HBAR_MEV_NS),
        )
    };

    let stride = steps.div_ceil(MAX_TRAJECTORY_SAMPLES - 1);
    let mut trajectory = record.then(|| Vec::with_capacity(steps / stride + 2));
    let mut psi = initial.0;
    let initial_norm = initial.norm_sqr();
    let mut max_p2 = psi[1].norm_sqr();
    let mut max_drift = 0.0f64;

    if let Some(tr) = trajectory.as_mut() {
        tr.push(sample(0.0, &psi));
    }
    for n in 0..steps {
        let t = n as f64 * dt;
        let (a12, a23) = rates(t);
        let (m12, m23) = rates(t + 0.5 * dt);
        let (b12, b23) = rates(t + dt);

        let k1 = deriv(&psi, a12, a23, o13);
        let k2 = deriv(&axpy(&psi, 0.5 * dt, &k1), m12, m23, o13);
        let k3 = deriv(&axpy(&psi, 0.5 * dt, &k2), m12, m23, o13);
        let k4 = deriv(&axpy(&psi, dt, &k3), b12, b23, o13);
        for i in 0..3 {
            psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }

        max_p2 = max_p2.max(psi[1].norm_sqr());
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        max_drift = max_drift.max((norm - initial_norm).abs());

        let done = n + 1;
        if let Some(tr) = trajectory.as_mut() {
            if done % stride == 0 || done == steps {
                let t_now = if done == steps {
                    s.t_max()
                } else {
                    done as f64 * dt
                };
                tr.push(sample(t_now, &psi));
            }
        }
    }

    if max_drift > NORM_DRIFT_LIMIT {
        return Err(Error::IntegrationFailure {
            drift: max_drift,
            limit: NORM_DRIFT_LIMIT,
            steps,
        });
    }
    let final_state = StateVector3(psi);
    Ok(EvolutionResult {
        fidelity: psi[2].norm_sqr(),
        max_p2,
        norm_drift: (final_state.norm_sqr() - 1.0).abs(),
        final_state,
        steps,
        trajectory,
    })
}

fn sample(t_ns: f64, psi: &[Complex64; 3]) -> TrajectorySample {
    TrajectorySample {
        t_ns,
        populations: psi.map(|a| a.norm_sqr()),
    }
}

/// `-i H ψ` with H in rad/ns.
#[inline]
fn deriv(psi: &[Complex64; 3], o12: f64, o23: f64, o13: f64) -> [Complex64; 3] {
    let h_psi = [
        psi[1] * o12 + psi[2] * o13,
        psi[0] * o12 + psi[2] * o23,
        psi[0] * o13 + psi[1] * o23,
    ];
    h_psi.map(|v| Complex64::new(v.im, -v.re))
}

#[inline]
fn axpy(psi: &[Complex64; 3], h: f64, k: &[Complex64; 3]) -> [Complex64; 3] {
    [psi[0] + k[0] * h, psi[1] + k[1] * h, psi[2] + k[2] * h]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub adiabaticity: f64,
    pub t_max: f64,
    pub fidelity: f64,
}

/// Runs one evolution per adiabaticity target, each with its own t_max.
pub fn fidelity_vs_adiabaticity_sweep(
    w12: f64,
    w23: f64,
    omega13_peak: f64,
    a_values: &[f64],
    exec: Execution,
) -> Result<Vec<SweepPoint>> {
    if a_values.is_empty() {
        return Err(invalid("a_values", "must not be empty"));
    }
    if let Some(bad) = a_values.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(invalid("a_values", format!("must be positive, got {bad}")));
    }
    if a_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("a_values", "must be strictly descending"));
    }
    let schedules = a_values
        .iter()
        .map(|&a| PulseSchedule::for_adiabaticity(w12, w23, a))
        .collect::<Result<Vec<_>>>()?;

    exec.map_indexed(schedules.len(), |i| {
        let s = &schedules[i];
        let r = evolve(s, omega13_peak, recommended_steps(s, omega13_peak), false)?;
        Ok(SweepPoint {
            adiabaticity: a_values[i],
            t_max: s.t_max(),
            fidelity: r.fidelity,
        })
    })
    .into_iter()
    .collect()
}
