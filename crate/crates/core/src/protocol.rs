//! Three-site adiabatic passage: pulse schedules, the instantaneous
//! eigensystem, the adiabaticity parameter and the analytic timing metrics.
//!
//! Couplings are energies in meV. Every formula that needs a rate goes
//! through [`angular_frequency`], so the closed-form and numerical routes
//! share one unit conversion.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::physics::{
    angular_frequency, tunnel_coupling, MaterialParams, PairDistances, HBAR_MEV_NS,
};

/// Pair separation below which the hydrogenic coupling is not trusted.
pub const TOO_CLOSE_NM: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseShape {
    /// `Ω12 = W12 sin²(πt / 2T)`, `Ω23 = W23 cos²(πt / 2T)`.
    #[default]
    SinSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    w12_peak: f64,
    w23_peak: f64,
    t_max: f64,
    shape: PulseShape,
}

impl PulseSchedule {
    /// Peaks may be zero (a switched-off device); `t_max` must be positive.
    pub fn new(w12_peak: f64, w23_peak: f64, t_max: f64) -> Result<Self> {
        if !(w12_peak.is_finite() && w12_peak >= 0.0) {
            return Err(invalid(
                "w12_peak",
                format!("must be finite and >= 0, got {w12_peak}"),
            ));
        }
        if !(w23_peak.is_finite() && w23_peak >= 0.0) {
            return Err(invalid(
                "w23_peak",
                format!("must be finite and >= 0, got {w23_peak}"),
            ));
        }
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(invalid("t_max", format!("must be > 0, got {t_max}")));
        }
        Ok(Self {
            w12_peak,
            w23_peak,
            t_max,
            shape: PulseShape::SinSquared,
        })
    }

    /// Schedule whose duration meets the target adiabaticity at its midpoint.
    pub fn for_adiabaticity(w12_peak: f64, w23_peak: f64, a_target: f64) -> Result<Self> {
        let t_max = tmax_for_adiabaticity(w12_peak, w23_peak, a_target)?;
        Self::new(w12_peak, w23_peak, t_max)
    }

    pub fn w12_peak(&self) -> f64 {
        self.w12_peak
    }

    pub fn w23_peak(&self) -> f64 {
        self.w23_peak
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn shape(&self) -> PulseShape {
        self.shape
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if t.is_finite() && (0.0..=self.t_max).contains(&t) {
            Ok(())
        } else {
            Err(Error::TimeOutOfRange {
                t,
                t_max: self.t_max,
            })
        }
    }

    /// `(Ω12(t), Ω23(t))` in meV without the domain check.
    pub(crate) fn couplings_at(&self, t: f64) -> (f64, f64) {
        match self.shape {
            PulseShape::SinSquared => {
                let phase = PI * t / (2.0 * self.t_max);
                let (s, c) = phase.sin_cos();
                (self.w12_peak * s * s, self.w23_peak * c * c)
            }
        }
    }

    /// Time derivatives of `(Ω12, Ω23)` in meV/ns.
    pub(crate) fn coupling_rates_at(&self, t: f64) -> (f64, f64) {
        match self.shape {
            PulseShape::SinSquared => {
                let k = PI / (2.0 * self.t_max);
                let s = (PI * t / self.t_max).sin();
                (self.w12_peak * k * s, -self.w23_peak * k * s)
            }
        }
    }
}

pub fn omega12(t: f64, s: &PulseSchedule) -> Result<f64> {
    s.check_time(t)?;
    Ok(s.couplings_at(t).0)
}

pub fn omega23(t: f64, s: &PulseSchedule) -> Result<f64> {
    s.check_time(t)?;
    Ok(s.couplings_at(t).1)
}

/// Amplitudes over the site basis |1⟩, |2⟩, |3⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector3(pub [Complex64; 3]);

impl StateVector3 {
    pub const fn site(index: usize) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 3];
        amps[index] = Complex64::new(1.0, 0.0);
        Self(amps)
    }

    pub fn from_real(a: [f64; 3]) -> Self {
        Self(a.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn amplitudes(&self) -> &[Complex64; 3] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-9
    }

    pub fn populations(&self) -> [f64; 3] {
        self.0.map(|a| a.norm_sqr())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self(self.0.map(|a| a * factor))
    }
}

/// Zero-energy eigenstate `(Ω23|1⟩ − Ω12|3⟩)/√(Ω12² + Ω23²)`.
pub fn dark_state(o12: f64, o23: f64) -> Result<StateVector3> {
    let norm = o12.hypot(o23);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateCouplings);
    }
    Ok(StateVector3::from_real([o23 / norm, 0.0, -o12 / norm]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenenergies {
    pub minus: f64,
    pub zero: f64,
    pub plus: f64,
}

impl Eigenenergies {
    pub fn gap(&self) -> f64 {
        self.plus - self.zero
    }
}

/// Eigenenergies of the nearest-neighbour Hamiltonian with Ω13 = 0.
pub fn bright_energies(o12: f64, o23: f64) -> Eigenenergies {
    let e = o12.hypot(o23);
    Eigenenergies {
        minus: -e,
        zero: 0.0,
        plus: e,
    }
}

/// Closed-form adiabaticity for the sin² schedule.
pub fn adiabaticity_analytic(t: f64, s: &PulseSchedule) -> Result<f64> {
    s.check_time(t)?;
    Ok(adiabaticity_closed_form(t, s))
}

pub(crate) fn adiabaticity_closed_form(t: f64, s: &PulseSchedule) -> f64 {
    let o12 = angular_frequency(s.w12_peak, HBAR_MEV_NS);
    let o23 = angular_frequency(s.w23_peak, HBAR_MEV_NS);
    let sum_sq = o12 * o12 + o23 * o23;
    if sum_sq == 0.0 {
        return 0.0;
    }
    let num = PI * o12 * o23 * (PI * t / s.t_max).sin().abs();
    num / (SQRT_2 * s.t_max * sum_sq.powf(1.5))
}

/// Adiabaticity from its definition `|⟨D+|∂H/∂t|D0⟩| / (E+ − E0)²`,
/// using a numerical diagonalisation of H(t).
///
/// Defined on the open interval `0 < t < t_max`.
pub fn adiabaticity_numeric(t: f64, s: &PulseSchedule) -> Result<f64> {
    if !(t.is_finite() && t > 0.0 && t < s.t_max) {
        return Err(Error::TimeOutOfRange { t, t_max: s.t_max });
    }
    let (w12, w23) = s.couplings_at(t);
    let (r12, r23) = s.coupling_rates_at(t);
    let o12 = angular_frequency(w12, HBAR_MEV_NS);
    let o23 = angular_frequency(w23, HBAR_MEV_NS);
    if o12 == 0.0 && o23 == 0.0 {
        return Err(Error::DegenerateCouplings);
    }
    let h = tridiagonal(o12, o23);
    let dh = tridiagonal(
        angular_frequency(r12, HBAR_MEV_NS),
        angular_frequency(r23, HBAR_MEV_NS),
    );

    let eig = SymmetricEigen::new(h);
    let vals = eig.eigenvalues;
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let (zero, plus) = (order[1], order[2]);
    let gap = vals[plus] - vals[zero];
    if gap.is_nan() || gap <= 0.0 {
        return Err(Error::DegenerateCouplings);
    }
    let d0: Vector3<f64> = eig.eigenvectors.column(zero).into_owned();
    let dp: Vector3<f64> = eig.eigenvectors.column(plus).into_owned();
    let element = dp.dot(&(dh * d0));
    Ok(element.abs() / (gap * gap))
}

fn tridiagonal(a12: f64, a23: f64) -> Matrix3<f64> {
    Matrix3::new(0.0, a12, 0.0, a12, 0.0, a23, 0.0, a23, 0.0)
}

/// Protocol duration (ns) that holds the peak adiabaticity at `a_target`.
pub fn tmax_for_adiabaticity(w12: f64, w23: f64, a_target: f64) -> Result<f64> {
    if !(w12 > 0.0 && w23 > 0.0 && w12.is_finite() && w23.is_finite()) {
        return Err(Error::NoPathway { w12, w23 });
    }
    check_adiabaticity(a_target)?;
    let o12 = angular_frequency(w12, HBAR_MEV_NS);
    let o23 = angular_frequency(w23, HBAR_MEV_NS);
    Ok(PI * o12 * o23 / (SQRT_2 * a_target * (o12 * o12 + o23 * o23).powf(1.5)))
}

fn check_adiabaticity(a_target: f64) -> Result<()> {
    if a_target.is_finite() && a_target > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            "adiabaticity",
            format!("must be > 0, got {a_target}"),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleMetrics {
    pub d12: f64,
    pub d23: f64,
    pub d13: f64,
    pub w12: f64,
    pub w23: f64,
    pub w13: f64,
    pub t_max: f64,
    pub j_param: f64,
    pub too_close_flag: bool,
}

/// t_max and J from the separations directly, in the expanded distance form.
///
/// J = Ω13 t_max is independent of E* and ħ; t_max picks up ħ because the
/// expression is written for energies in meV.
pub fn metrics_from_distances(
    d12: f64,
    d23: f64,
    d13: f64,
    params: &MaterialParams,
    a_target: f64,
) -> Result<TripleMetrics> {
    for (pair, d) in [("1-2", d12), ("2-3", d23), ("1-3", d13)] {
        if d.is_nan() || d <= 0.0 {
            return Err(Error::DegenerateGeometry { pair });
        }
    }
    check_adiabaticity(a_target)?;
    let a = params.bohr_radius();
    let f12 = d12 * (-d12 / a - 1.0).exp();
    let f23 = d23 * (-d23 / a - 1.0).exp();
    let denom = (f12 * f12 + f23 * f23).powf(1.5);

    let t_max = params.hbar() * PI * a * d12 * d23 * (-(d12 + d23) / a - 2.0).exp()
        / (4.0 * SQRT_2 * params.hartree() * a_target * denom);
    let j_param =
        PI * d12 * d23 * d13 * (-(d12 + d23 + d13) / a - 3.0).exp() / (SQRT_2 * a_target * denom);

    Ok(TripleMetrics {
        d12,
        d23,
        d13,
        w12: tunnel_coupling(d12, params),
        w23: tunnel_coupling(d23, params),
        w13: tunnel_coupling(d13, params),
        t_max,
        j_param,
        too_close_flag: d12.min(d23).min(d13) < TOO_CLOSE_NM,
    })
}

pub fn metrics_for_distances(
    d: &PairDistances,
    params: &MaterialParams,
    a_target: f64,
) -> Result<TripleMetrics> {
    metrics_from_distances(d.d12, d.d23, d.d13, params, a_target)
}

/// `(t_max, J)` by composing the coupling formula with
/// [`tmax_for_adiabaticity`] and `J = (W13/ħ) t_max`.
pub fn composed_tmax_and_j(
    d12: f64,
    d23: f64,
    d13: f64,
    params: &MaterialParams,
    a_target: f64,
) -> Result<(f64, f64)> {
    let t_max = tmax_for_adiabaticity(
        tunnel_coupling(d12, params),
        tunnel_coupling(d23, params),
        a_target,
    )?;
    let j = angular_frequency(tunnel_coupling(d13, params), params.hbar()) * t_max;
    Ok((t_max, j))
}
