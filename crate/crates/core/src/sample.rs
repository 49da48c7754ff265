//! Reproducible random Cauchy data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lax::{CauchyData, UEdgeData, VEdgeData};

/// `a`, `b` uniform in discs, `u`, `v` log-uniform in intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomRanges {
    pub a_radius: f64,
    pub b_radius: f64,
    pub u: [f64; 2],
    pub v: [f64; 2],
}

impl Default for RandomRanges {
    fn default() -> Self {
        RandomRanges {
            a_radius: 1.0,
            b_radius: 1.0,
            u: [0.7, 1.4],
            v: [0.7, 1.4],
        }
    }
}

impl RandomRanges {
    fn validate(&self) -> Result<()> {
        let ok = |lo: f64, hi: f64| lo > 0.0 && hi >= lo && hi.is_finite();
        if !(self.a_radius >= 0.0 && self.b_radius >= 0.0) || !ok(self.u[0], self.u[1]) || !ok(self.v[0], self.v[1]) {
            return Err(Error::InvalidInput(format!("bad random ranges {self:?}")));
        }
        Ok(())
    }
}

fn disc(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn log_uniform(rng: &mut impl Rng, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

pub fn random_cauchy(width: usize, height: usize, ranges: &RandomRanges, seed: u64) -> Result<CauchyData> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput("window dimensions must be positive".into()));
    }
    ranges.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let row0 = (0..width - 1)
        .map(|_| {
            let a = disc(&mut rng, ranges.a_radius);
            UEdgeData::new(a, log_uniform(&mut rng, ranges.u))
        })
        .collect::<Result<_>>()?;
    let col0 = (0..height - 1)
        .map(|_| {
            let b = disc(&mut rng, ranges.b_radius);
            VEdgeData::new(b, log_uniform(&mut rng, ranges.v))
        })
        .collect::<Result<_>>()?;
    Ok(CauchyData { row0, col0 })
}
