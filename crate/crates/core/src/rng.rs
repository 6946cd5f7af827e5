//! Small deterministic PRNG.
//!
//! Every random choice in the crate (generic coefficients, gamma phases,
//! detour midpoints, randomized test panels) flows from a single 64-bit seed
//! through this generator, so identical seeds reproduce identical artifacts
//! byte for byte.

use num_complex::Complex64;

/// splitmix64 stream.
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn next_range(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// Uniform on the closed unit disc, by rejection from the square.
    pub fn next_unit_disc(&mut self) -> Complex64 {
        loop {
            let re = 2.0 * self.next_f64() - 1.0;
            let im = 2.0 * self.next_f64() - 1.0;
            let z = Complex64::new(re, im);
            if z.norm_sqr() <= 1.0 {
                return z;
            }
        }
    }

    /// Uniform on the unit circle.
    pub fn next_unit_circle(&mut self) -> Complex64 {
        let t = self.next_f64() * std::f64::consts::TAU;
        Complex64::new(t.cos(), t.sin())
    }

    /// Derive an independent stream for a labeled subtask.
    pub fn fork(&mut self, label: u64) -> Rng {
        Rng(self.next_u64() ^ label.wrapping_mul(0xa0761d6478bd642f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn disc_samples_stay_in_disc() {
        let mut r = Rng::new(7);
        for _ in 0..1000 {
            assert!(r.next_unit_disc().norm() <= 1.0 + 1e-15);
        }
    }
}
