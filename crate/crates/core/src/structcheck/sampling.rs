//! Seeded sampling boxes, kept well inside the default domain windows.

use crate::lhsystems::{Chart, SystemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleBox {
    pub q: (f64, f64),
    pub p: (f64, f64),
    pub x: (f64, f64),
    /// Magnitude range of `y`; the sign is drawn separately.
    pub y_abs: (f64, f64),
    pub t: (f64, f64),
}

impl Default for SampleBox {
    fn default() -> Self {
        Self {
            q: (-2.0, 2.0),
            p: (-2.0, 2.0),
            x: (0.5, 3.0),
            y_abs: (0.1, 2.0),
            t: (0.5, 3.0),
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub bounds: SampleBox,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self::with_box(seed, SampleBox::default())
    }

    pub fn with_box(seed: u64, bounds: SampleBox) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bounds,
        }
    }

    fn uniform(&mut self, (lo, hi): (f64, f64)) -> f64 {
        lo + (hi - lo) * self.rng.gen::<f64>()
    }

    pub fn canonical(&mut self) -> [f64; 2] {
        [self.uniform(self.bounds.q), self.uniform(self.bounds.p)]
    }

    pub fn buchdahl(&mut self) -> [f64; 2] {
        let x = self.uniform(self.bounds.x);
        let y = self.uniform(self.bounds.y_abs);
        let sign = if self.rng.gen::<bool>() { 1.0 } else { -1.0 };
        [x, sign * y]
    }

    /// A phase-space point in the chart of `spec`.
    pub fn state(&mut self, spec: &SystemSpec) -> [f64; 2] {
        match spec.chart() {
            Chart::Canonical => self.canonical(),
            Chart::Buchdahl => self.buchdahl(),
        }
    }

    pub fn time(&mut self) -> f64 {
        self.uniform(self.bounds.t)
    }

    pub fn two_particle(&mut self) -> [f64; 4] {
        let [q1, p1] = self.canonical();
        let [q2, p2] = self.canonical();
        [q1, p1, q2, p2]
    }

    /// `(t, x)` for the point-symmetry checks.
    pub fn time_space(&mut self) -> [f64; 2] {
        [self.time(), self.uniform(self.bounds.x)]
    }
}
