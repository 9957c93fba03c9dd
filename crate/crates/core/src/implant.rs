//! Donor placement by single-ion implantation through three apertures.
//!
//! Each triple is drawn from counter-addressed ChaCha streams keyed by
//! `(seed, sample index, aperture)`, so a population is the same whatever
//! order or thread count it is generated with.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::kv::KeyValues;
use crate::physics::{DonorTriple, Position3D};

/// Empirical sources smaller than this give unreliable statistics.
pub const MIN_EMPIRICAL_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplantStrategy {
    pub name: String,
    /// Beam energy in keV.
    pub energy: f64,
    pub oxide_thickness: f64,
    pub mean_depth: f64,
    pub lateral_straggle_sigma: f64,
    pub depth_straggle_sigma: f64,
    pub aperture_diameter: f64,
    pub aperture_pitch: f64,
}

impl ImplantStrategy {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("energy", self.energy),
            ("mean_depth", self.mean_depth),
            ("aperture_pitch", self.aperture_pitch),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be > 0, got {v}")));
            }
        }
        let non_negative = [
            ("oxide_thickness", self.oxide_thickness),
            ("lateral_straggle_sigma", self.lateral_straggle_sigma),
            ("depth_straggle_sigma", self.depth_straggle_sigma),
            ("aperture_diameter", self.aperture_diameter),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        if self.aperture_diameter >= self.aperture_pitch {
            return Err(invalid(
                "aperture_diameter",
                format!(
                    "apertures overlap: diameter {} >= pitch {}",
                    self.aperture_diameter, self.aperture_pitch
                ),
            ));
        }
        Ok(())
    }

    /// Reads a strategy from `key = value` text using the field names above.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut kv = KeyValues::parse(text)?;
        let s = Self {
            name: kv.take_required("name")?,
            energy: kv.take_f64("energy")?,
            oxide_thickness: kv.take_f64("oxide_thickness")?,
            mean_depth: kv.take_f64("mean_depth")?,
            lateral_straggle_sigma: kv.take_f64("lateral_straggle_sigma")?,
            depth_straggle_sigma: kv.take_f64("depth_straggle_sigma")?,
            aperture_diameter: kv.take_f64("aperture_diameter")?,
            aperture_pitch: kv.take_f64("aperture_pitch")?,
        };
        kv.finish()?;
        s.validate()?;
        Ok(s)
    }

    /// Aperture centres along x at 0, pitch, 2·pitch.
    pub fn aperture_centre(&self, aperture: usize) -> f64 {
        aperture as f64 * self.aperture_pitch
    }
}

/// The two presets: 14 keV P through 5 nm oxide and 7 keV P through 1.2 nm.
///
/// Straggle figures are 1σ; the 7 keV preset carries 40% less straggle.
pub fn builtin_strategies() -> Vec<ImplantStrategy> {
    vec![
        ImplantStrategy {
            name: "P14keV".into(),
            energy: 14.0,
            oxide_thickness: 5.0,
            mean_depth: 20.0,
            lateral_straggle_sigma: 11.0,
            depth_straggle_sigma: 11.0,
            aperture_diameter: 10.0,
            aperture_pitch: 20.0,
        },
        ImplantStrategy {
            name: "P7keV".into(),
            energy: 7.0,
            oxide_thickness: 1.2,
            mean_depth: 14.0,
            lateral_straggle_sigma: 11.0 * 0.6,
            depth_straggle_sigma: 11.0 * 0.6,
            aperture_diameter: 10.0,
            aperture_pitch: 20.0,
        },
    ]
}

pub fn builtin_strategy(name: &str) -> Result<ImplantStrategy> {
    let all = builtin_strategies();
    match all.iter().find(|s| s.name.eq_ignore_ascii_case(name)) {
        Some(s) => Ok(s.clone()),
        None => Err(Error::UnknownStrategy {
            name: name.into(),
            available: all
                .iter()
                .map(|s| s.name.as_str())
                .collect::<Vec<_>>()
                .join(", "),
        }),
    }
}

/// Final ion position relative to its entry point, in nm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StraggleSample {
    pub dx: f64,
    pub dy: f64,
    /// Depth below the surface.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StraggleSource {
    Parametric(ImplantStrategy),
    Empirical(Arc<Vec<StraggleSample>>),
}

impl StraggleSource {
    pub fn empirical(samples: Vec<StraggleSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySource);
        }
        Ok(StraggleSource::Empirical(Arc::new(samples)))
    }

    /// Non-fatal problems with the source.
    pub fn warnings(&self) -> Vec<String> {
        match self {
            StraggleSource::Empirical(s) if s.len() < MIN_EMPIRICAL_SAMPLES => vec![format!(
                "empirical straggle source has only {} samples (< {MIN_EMPIRICAL_SAMPLES}); statistics unreliable",
                s.len()
            )],
            _ => Vec::new(),
        }
    }
}

/// Draws donor triples for one strategy geometry.
#[derive(Debug, Clone)]
pub struct TripleSampler {
    key: <ChaCha8Rng as SeedableRng>::Seed,
    source: SourceDraw,
    geometry: ImplantStrategy,
}

#[derive(Debug, Clone)]
enum SourceDraw {
    Parametric {
        lateral: Normal<f64>,
        depth: Normal<f64>,
    },
    Empirical(Arc<Vec<StraggleSample>>),
}

impl TripleSampler {
    pub fn new(source: &StraggleSource, geometry: &ImplantStrategy, seed: u64) -> Result<Self> {
        geometry.validate()?;
        let draw = match source {
            StraggleSource::Parametric(p) => {
                p.validate()?;
                SourceDraw::Parametric {
                    lateral: Normal::new(0.0, p.lateral_straggle_sigma)
                        .map_err(|e| invalid("lateral_straggle_sigma", e.to_string()))?,
                    depth: Normal::new(p.mean_depth, p.depth_straggle_sigma)
                        .map_err(|e| invalid("depth_straggle_sigma", e.to_string()))?,
                }
            }
            StraggleSource::Empirical(s) if s.is_empty() => return Err(Error::EmptySource),
            StraggleSource::Empirical(s) => SourceDraw::Empirical(Arc::clone(s)),
        };
        Ok(Self {
            key: ChaCha8Rng::seed_from_u64(seed).get_seed(),
            source: draw,
            geometry: geometry.clone(),
        })
    }

    fn stream(&self, index: u64, aperture: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index.wrapping_mul(3).wrapping_add(aperture));
        rng
    }

    /// Triple number `index` of the population; a pure function of `(seed, index)`.
    pub fn sample(&self, index: u64) -> DonorTriple {
        let [p1, p2, p3] = [0u64, 1, 2].map(|k| self.place(index, k));
        DonorTriple { p1, p2, p3 }
    }

    fn place(&self, index: u64, aperture: u64) -> Position3D {
        let mut rng = self.stream(index, aperture);
        let radius = 0.5 * self.geometry.aperture_diameter;
        let (ex, ey) = uniform_disk(&mut rng, radius);
        let s = self.straggle(&mut rng);
        Position3D::new(
            self.geometry.aperture_centre(aperture as usize) + ex + s.dx,
            ey + s.dy,
            s.z,
        )
    }

    fn straggle(&self, rng: &mut ChaCha8Rng) -> StraggleSample {
        match &self.source {
            SourceDraw::Parametric { lateral, depth } => {
                let dx = lateral.sample(rng);
                let dy = lateral.sample(rng);
                // resample rather than clamp: no pile-up at the surface
                let mut z = depth.sample(rng);
                while z <= 0.0 {
                    z = depth.sample(rng);
                }
                StraggleSample { dx, dy, z }
            }
            SourceDraw::Empirical(samples) => samples[rng.random_range(0..samples.len())],
        }
    }

    /// Straggle-only draw for index `index`, used to synthesise SRIM-like data.
    pub fn straggle_sample(&self, index: u64) -> StraggleSample {
        let mut rng = self.stream(index, u64::MAX);
        self.straggle(&mut rng)
    }

    pub fn population(&self, n: usize, exec: Execution) -> Vec<DonorTriple> {
        exec.map_indexed(n, |i| self.sample(i as u64))
    }
}

fn uniform_disk(rng: &mut ChaCha8Rng, radius: f64) -> (f64, f64) {
    let u: f64 = rng.random();
    let theta: f64 = 2.0 * PI * rng.random::<f64>();
    let r = radius * u.sqrt();
    (r * theta.cos(), r * theta.sin())
}

pub fn sample_triple(
    source: &StraggleSource,
    geometry: &ImplantStrategy,
    seed: u64,
    index: u64,
) -> Result<DonorTriple> {
    Ok(TripleSampler::new(source, geometry, seed)?.sample(index))
}
