//! Reproducible random spherical tetrahedra.
//!
//! Each sample `i` draws from its own substream of a 64-bit linear
//! congruential generator, seeded from `(seed, i)`:
//!
//! ```text
//! state₀ = mix(seed ^ mix(i + 0x9E3779B97F4A7C15))
//! stateₙ₊₁ = stateₙ · 6364136223846793005 + 1442695040888963407   (mod 2⁶⁴)
//! uniform = (stateₙ₊₁ >> 11) · 2⁻⁵³                                ∈ [0, 1)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer. Normal deviates come from the
//! Box–Muller transform on consecutive uniforms `u₁, u₂`:
//! `√(−2 ln(1 − u₁)) · (cos 2πu₂, sin 2πu₂)`.
//!
//! A candidate is four normalized 4-vectors of standard normals. It is
//! rejected when its Gram determinant is below `min_margin` or any edge
//! length leaves `length_band`.

use std::f64::consts::PI;

use crate::error::{GeometryError, Result};
use crate::linalg::{norm, Vec4};
use crate::tetra::{
    gram_det, lengths_from_vertices, validate_lengths, TetLengths, TetValidity, TetVertices,
};

/// Redraws allowed per sample before giving up.
pub const REJECTION_BUDGET: usize = 10_000;

const LCG_MULTIPLIER: u64 = 6_364_136_223_846_793_005;
const LCG_INCREMENT: u64 = 1_442_695_040_888_963_407;
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The documented generator. State is plain data and is passed by value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const fn from_state(state: u64) -> Self {
        Self { state }
    }

    /// Substream for sample `index` of run `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        Self::from_state(mix(seed ^ mix(index.wrapping_add(GOLDEN_GAMMA))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A pair of independent standard normals.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        (r * c, r * s)
    }

    /// Uniform point on the unit 3-sphere.
    pub fn point_on_s3(&mut self) -> Vec4 {
        loop {
            let (a, b) = self.normal_pair();
            let (c, d) = self.normal_pair();
            let v = [a, b, c, d];
            let n = norm(&v);
            if n > 1e-12 {
                return v.map(|x| x / n);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    /// Smallest accepted Gram determinant.
    pub min_margin: f64,
    /// Open interval every edge length must lie in.
    pub length_band: (f64, f64),
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            count: 1,
            min_margin: 1e-6,
            length_band: (0.05, PI - 0.05),
        }
    }
}

impl SampleConfig {
    pub fn new(seed: u64, count: usize) -> Self {
        Self {
            seed,
            count,
            ..Self::default()
        }
    }

    pub fn check(&self) -> Result<()> {
        let (lo, hi) = self.length_band;
        if self.count == 0 {
            return Err(GeometryError::Domain(
                "sample count must be positive".into(),
            ));
        }
        if !(0.0 <= lo && lo < hi && hi <= PI) {
            return Err(GeometryError::Domain(format!(
                "length band ({lo}, {hi}) not inside (0, π)"
            )));
        }
        if !(self.min_margin >= 0.0 && self.min_margin < 1.0) {
            return Err(GeometryError::Domain(format!(
                "min_margin {} not in [0, 1)",
                self.min_margin
            )));
        }
        Ok(())
    }
}

/// A sample and the number of candidates drawn to obtain it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub lengths: TetLengths,
    pub attempts: usize,
}

/// Draws sample `index` of the run described by `config`.
pub fn sample_one(config: &SampleConfig, index: usize) -> Result<Draw> {
    let mut rng = Lcg64::substream(config.seed, index as u64);
    let (lo, hi) = config.length_band;
    for attempt in 1..=REJECTION_BUDGET {
        let verts = TetVertices([
            rng.point_on_s3(),
            rng.point_on_s3(),
            rng.point_on_s3(),
            rng.point_on_s3(),
        ]);
        let Ok(lengths) = lengths_from_vertices(&verts) else {
            continue;
        };
        if lengths.0.iter().any(|&l| l <= lo || l >= hi) {
            continue;
        }
        if gram_det(&lengths) < config.min_margin {
            continue;
        }
        if validate_lengths(&lengths) != TetValidity::Valid {
            continue;
        }
        return Ok(Draw {
            lengths,
            attempts: attempt,
        });
    }
    Err(GeometryError::Exhausted {
        index,
        attempts: REJECTION_BUDGET,
    })
}

/// `config.count` valid tetrahedra; a pure function of the config.
pub fn sample_tetrahedra(config: &SampleConfig) -> Result<Vec<TetLengths>> {
    config.check()?;
    (0..config.count)
        .map(|i| sample_one(config, i).map(|d| d.lengths))
        .collect()
}

/// Adds independent uniform noise in `[-magnitude, magnitude]` to every
/// length and re-validates.
pub fn perturb(lengths: &TetLengths, magnitude: f64, seed: u64) -> Result<TetLengths> {
    if !(magnitude >= 0.0 && magnitude.is_finite()) {
        return Err(GeometryError::Domain(format!(
            "perturbation magnitude {magnitude}"
        )));
    }
    let mut rng = Lcg64::substream(seed, 0);
    let mut out = *lengths;
    for x in out.0.iter_mut() {
        *x += (2.0 * rng.uniform() - 1.0) * magnitude;
    }
    match validate_lengths(&out) {
        TetValidity::Valid => Ok(out),
        other => Err(GeometryError::NotRealizable(format!(
            "perturbed lengths are {other:?}"
        ))),
    }
}
