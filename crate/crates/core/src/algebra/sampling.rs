use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{modified_gram_schmidt, norm, DenseMatrix};

/// Child seed for stream `index` of `seed` (splitmix64 finalizer over both).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded random stream. Equal seeds give bit-identical draws.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Sampler for the `index`-th child stream of `seed`.
    pub fn child(seed: u64, index: u64) -> Self {
        Self::new(derive_seed(seed, index))
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn gaussian_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.gaussian()).collect()
    }

    /// A fresh 64-bit seed for a nested sampler.
    pub fn next_seed(&mut self) -> u64 {
        self.rng.random()
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Uniform point on the unit sphere of `R^n`; near-zero Gaussian draws are redrawn.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        assert!(n > 0, "unit sphere of R^0 is empty");
        loop {
            let g = self.gaussian_vec(n);
            let r = norm(&g);
            if r >= 1e-8 {
                return g.into_iter().map(|v| v / r).collect();
            }
        }
    }

    /// Random orthogonal `n × n` matrix: Gram–Schmidt on Gaussian columns.
    pub fn orthogonal(&mut self, n: usize) -> DenseMatrix {
        loop {
            let cols: Vec<Vec<f64>> = (0..n).map(|_| self.gaussian_vec(n)).collect();
            let q = modified_gram_schmidt(&cols, 1e-8);
            if q.len() == n {
                return DenseMatrix::from_columns(&q);
            }
        }
    }

    /// Uniform unit vector in the span of the orthonormal `basis`.
    pub fn unit_in_span(&mut self, basis: &[Vec<f64>]) -> Vec<f64> {
        let coeffs = self.unit_vector(basis.len());
        let mut out = vec![0.0; basis[0].len()];
        for (c, b) in coeffs.iter().zip(basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }
}
