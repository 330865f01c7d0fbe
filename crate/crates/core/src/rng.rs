//! Deterministic pseudorandom numbers.
//!
//! All sampling in this crate goes through [`SplitMix64`]: a 64-bit-state
//! counter generator (Steele, Lea, Flood 2014). The algorithm is fixed on
//! purpose — every output of the library is a pure function of the seed, so
//! files written from the same seed are byte-identical across runs.

/// SplitMix64 generator. One `u64` of state, one output per increment.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, 1)` with 53 random mantissa bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw from `[-1, 1)`.
    pub fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Uniform index in `0..n`. Plain modular reduction: the bias is below
    /// 2^-53 for every `n` used here and the draw stays reproducible.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }
}

/// Derives an independent stream seed from a base seed and a stream tag.
///
/// Used to split one user-facing seed into per-purpose streams (training
/// start, testing start, ensemble sampling) without correlated draws.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = SplitMix64::new(seed ^ stream.wrapping_mul(0xA076_1D64_78BD_642F));
    rng.next_u64()
}
