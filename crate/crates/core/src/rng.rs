//! Pinned pseudo-random generator.
//!
//! Every random decision in the crate (degree draws, neighbour selection,
//! channel noise, message contents) flows through [`SplitMix64`], a 64-bit
//! counter-based generator. The algorithm is fixed so that a seed means the
//! same thing in any implementation:
//!
//! ```text
//! state  <- state + 0x9E3779B97F4A7C15          (wrapping)
//! z      <- state
//! z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 (wrapping)
//! z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB (wrapping)
//! output <- z ^ (z >> 31)
//! ```
//!
//! Derived quantities:
//!
//! * uniform real in `[0, 1)`: `(next_u64() >> 11) * 2^-53`
//! * uniform integer in `0..n`: `(next_u64() as u128 * n) >> 64`
//! * standard normal: Box-Muller cosine branch on two fresh uniforms
//!   `u1 = 1 - next_f64()`, `u2 = next_f64()`
//!
//! Test vectors (seed 0): `0xE220A8397B1DCDAF`, `0x6E789E6AA1B965F4`,
//! `0x06C45D188009454F`.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed; equal to output number `stream` of a
/// generator seeded with `base`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    mix64(base.wrapping_add(GAMMA.wrapping_mul(stream.wrapping_add(1))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    pub fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..n`. `n` must be non-zero.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Rayleigh amplitude with unit mean power (`E[g^2] = 1`).
    pub fn rayleigh(&mut self) -> f64 {
        let u = 1.0 - self.next_f64();
        (-u.ln()).sqrt()
    }
}
