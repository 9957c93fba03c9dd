//! Physical constants, donor geometry and the hydrogenic tunnel coupling.
//!
//! Units are nm / meV / ns throughout. Couplings are carried as energies;
//! [`angular_frequency`] is the single place an energy becomes a rate.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Reduced Planck constant in meV·ns.
pub const HBAR_MEV_NS: f64 = 6.582_12e-4;

pub const DEFAULT_BOHR_NM: f64 = 3.0;
pub const DEFAULT_HARTREE_MEV: f64 = 40.0;

/// Converts a coupling energy (meV) to an angular frequency (rad/ns).
#[inline]
pub fn angular_frequency(energy_mev: f64, hbar: f64) -> f64 {
    energy_mev / hbar
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    bohr_radius: f64,
    hartree: f64,
    hbar: f64,
}

impl MaterialParams {
    pub fn new(bohr_radius_nm: f64, hartree_mev: f64) -> Result<Self> {
        if !(bohr_radius_nm.is_finite() && bohr_radius_nm > 0.0) {
            return Err(invalid(
                "bohr_radius",
                format!("must be > 0, got {bohr_radius_nm}"),
            ));
        }
        if !(hartree_mev.is_finite() && hartree_mev > 0.0) {
            return Err(invalid(
                "hartree",
                format!("must be > 0, got {hartree_mev}"),
            ));
        }
        Ok(Self {
            bohr_radius: bohr_radius_nm,
            hartree: hartree_mev,
            hbar: HBAR_MEV_NS,
        })
    }

    /// Effective Bohr radius a*_B in nm.
    pub fn bohr_radius(&self) -> f64 {
        self.bohr_radius
    }

    /// Effective Hartree E* in meV.
    pub fn hartree(&self) -> f64 {
        self.hartree
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn with_bohr_radius(self, bohr_radius_nm: f64) -> Result<Self> {
        Self::new(bohr_radius_nm, self.hartree)
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self {
            bohr_radius: DEFAULT_BOHR_NM,
            hartree: DEFAULT_HARTREE_MEV,
            hbar: HBAR_MEV_NS,
        }
    }
}

/// Position in nm. `x` runs along the aperture line, `z` is depth below the surface.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Position3D) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Three donors labelled by the aperture they were implanted through.
///
/// Labels are never re-sorted by position: if straggle pushes donor 2 past
/// donor 3 along x, `p2` still refers to the middle aperture, and `d13`
/// always means the outer pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DonorTriple {
    pub p1: Position3D,
    pub p2: Position3D,
    pub p3: Position3D,
}

impl DonorTriple {
    pub fn new(p1: Position3D, p2: Position3D, p3: Position3D) -> Result<Self> {
        for (label, p) in [("p1", &p1), ("p2", &p2), ("p3", &p3)] {
            if !p.is_finite() {
                return Err(invalid(label, "coordinates must be finite"));
            }
        }
        Ok(Self { p1, p2, p3 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDistances {
    pub d12: f64,
    pub d23: f64,
    pub d13: f64,
}

impl PairDistances {
    pub fn min(&self) -> f64 {
        self.d12.min(self.d23).min(self.d13)
    }
}

pub fn pair_distances(triple: &DonorTriple) -> PairDistances {
    PairDistances {
        d12: triple.p1.distance(&triple.p2),
        d23: triple.p2.distance(&triple.p3),
        d13: triple.p1.distance(&triple.p3),
    }
}

/// Hydrogenic tunnel coupling `W(d) = 4 E* (d/a) exp(-d/a - 1)` in meV.
///
/// Peaks at `d = a` with value `4 E* / e²`, vanishes at both ends.
pub fn tunnel_coupling(d_nm: f64, params: &MaterialParams) -> f64 {
    let x = d_nm / params.bohr_radius;
    4.0 * params.hartree * x * (-x - 1.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn collinear_distances() {
        let t = DonorTriple::new(
            Position3D::new(0.0, 0.0, 0.0),
            Position3D::new(20.0, 0.0, 0.0),
            Position3D::new(40.0, 0.0, 0.0),
        )
        .unwrap();
        let d = pair_distances(&t);
        assert_eq!((d.d12, d.d23, d.d13), (20.0, 20.0, 40.0));
    }

    #[test]
    fn coincident_distances() {
        let p = Position3D::new(1.5, -2.0, 7.0);
        let d = pair_distances(&DonorTriple::new(p, p, p).unwrap());
        assert_eq!((d.d12, d.d23, d.d13), (0.0, 0.0, 0.0));
    }

    #[test]
    fn pythagorean_distances() {
        let t = DonorTriple::new(
            Position3D::new(0.0, 0.0, 0.0),
            Position3D::new(3.0, 4.0, 0.0),
            Position3D::new(3.0, 4.0, 12.0),
        )
        .unwrap();
        let d = pair_distances(&t);
        assert_eq!((d.d12, d.d23, d.d13), (5.0, 12.0, 13.0));
    }

    #[test]
    fn non_finite_position_rejected() {
        let ok = Position3D::default();
        assert!(DonorTriple::new(ok, Position3D::new(f64::NAN, 0.0, 0.0), ok).is_err());
    }

    #[test]
    fn coupling_at_bohr_radius() {
        let p = MaterialParams::default();
        let expected = 4.0 * p.hartree() * (-2.0f64).exp();
        assert!(close(tunnel_coupling(p.bohr_radius(), &p), expected, 1e-15));
        assert_eq!(tunnel_coupling(0.0, &p), 0.0);
    }

    #[test]
    fn coupling_at_twenty_nm() {
        // 40-digit evaluation: 0.49938753242962883250902129523647...
        let p = MaterialParams::new(3.0, 40.0).unwrap();
        assert!(close(
            tunnel_coupling(20.0, &p),
            0.499_387_532_429_628_8,
            1e-14
        ));
    }

    #[test]
    fn coupling_peak_by_grid_scan() {
        for &(a, e) in &[(3.0, 40.0), (2.5, 31.0), (7.0, 12.0)] {
            let p = MaterialParams::new(a, e).unwrap();
            let n = 20_000;
            let step = 10.0 * a / n as f64;
            let best = (0..=n)
                .map(|i| i as f64 * step)
                .max_by(|x, y| tunnel_coupling(*x, &p).total_cmp(&tunnel_coupling(*y, &p)))
                .unwrap();
            assert!((best - a).abs() <= step, "peak at {best}, expected {a}");
        }
    }

    #[test]
    fn coupling_decreasing_beyond_peak() {
        let p = MaterialParams::default();
        let mut prev = tunnel_coupling(p.bohr_radius(), &p);
        let mut d = p.bohr_radius();
        while d < 120.0 {
            d += 0.01;
            let w = tunnel_coupling(d, &p);
            assert!(w < prev, "not decreasing at d={d}");
            prev = w;
        }
    }

    #[test]
    fn material_params_validation() {
        assert!(MaterialParams::new(0.0, 40.0).is_err());
        assert!(MaterialParams::new(3.0, -1.0).is_err());
        assert!(MaterialParams::new(f64::INFINITY, 1.0).is_err());
        assert_eq!(MaterialParams::new(2.0, 1.0).unwrap().hbar(), HBAR_MEV_NS);
    }
}
