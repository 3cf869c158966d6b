//! Seeded complex Gaussian generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::{ComplexMatrix, C64};

/// Draws i.i.d. complex standard normals (`E|z|^2 = 1`) from a ChaCha stream.
#[derive(Clone, Debug)]
pub struct ComplexNormal {
    rng: ChaCha8Rng,
}

impl ComplexNormal {
    pub fn seeded(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn sample(&mut self) -> C64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn real(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn vector(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.sample()).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.sample())
    }

    pub fn real_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(self.real(), 0.0))
    }
}
