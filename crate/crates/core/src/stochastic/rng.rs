//! Counter-based pseudo-random stream.
//!
//! Each `(seed, stream_id)` pair names an independent stream; the i-th
//! output is a pure function of `(seed, stream_id, i)`, so runs are
//! bit-reproducible, streams never share state, and a stream can jump ahead
//! in O(1). The generator is the SplitMix64 finalizer applied to a keyed
//! golden-ratio counter — statistically solid for Monte Carlo, and with no
//! cryptographic pretensions.

use num_bigint::BigUint;
use num_traits::Zero;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

// SplitMix64 finalizer: an invertible 64-bit mix with good avalanche.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A seekable, splittable random stream. See the module docs for the
/// reproducibility contract.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    key: u64,
    counter: u64,
    bit_buf: u64,
    bits_left: u32,
    spare_normal: Option<f64>,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        // Two mixing rounds decorrelate the key from structured seeds and
        // nearby stream ids.
        let key = mix(seed ^ mix(stream_id ^ GOLDEN));
        Self {
            seed,
            stream_id,
            key,
            counter: 0,
            bit_buf: 0,
            bits_left: 0,
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream with the same seed and a different stream id, for
    /// fanning work out deterministically.
    pub fn substream(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    pub fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter += 1;
        mix(self.key ^ c.wrapping_mul(GOLDEN))
    }

    /// Skips `delta` raw outputs in O(1). Buffered bits and a cached normal
    /// are discarded.
    pub fn skip(&mut self, delta: u64) {
        self.counter = self.counter.wrapping_add(delta);
        self.bits_left = 0;
        self.spare_normal = None;
    }

    /// Uniform on [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    // Uniform on (0, 1], safe as a logarithm argument.
    fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box–Muller; draws two uniforms per pair of
    /// normals and caches the second.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let r = (-2.0 * self.uniform_open().ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * self.uniform();
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// A fair bit, consumed LSB-first from buffered 64-bit words.
    pub fn bit(&mut self) -> bool {
        if self.bits_left == 0 {
            self.bit_buf = self.next_u64();
            self.bits_left = 64;
        }
        let b = self.bit_buf & 1 == 1;
        self.bit_buf >>= 1;
        self.bits_left -= 1;
        b
    }

    /// Uniform integer in `[0, bound)` by rejection (no modulo bias).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0) is empty");
        let zone = (u64::MAX / bound) * bound;
        loop {
            let r = self.next_u64();
            if r < zone {
                return r % bound;
            }
        }
    }

    /// Uniform big integer in `[0, bound)` by bit-level rejection; expected
    /// fewer than two attempts.
    pub fn below_biguint(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "below_biguint(0) is empty");
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let excess = words as u64 * 64 - bits;
        loop {
            let mut bytes = Vec::with_capacity(words * 8);
            for _ in 0..words {
                bytes.extend_from_slice(&self.next_u64().to_le_bytes());
            }
            let candidate = BigUint::from_bytes_le(&bytes) >> excess;
            if &candidate < bound {
                return candidate;
            }
        }
    }
}
