//! SplitMix64 with hierarchical seeding.
//!
//! The generator is Steele, Lea and Flood's SplitMix64: the 64-bit state
//! advances by `0x9e3779b97f4a7c15` and each output is the state passed
//! through the finalizer
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//! z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//! z =  z ^ (z >> 31)
//! ```
//!
//! (all arithmetic mod 2^64). Independent streams are split off with
//! [`derive`]: `derive(seed, label) = first(seed ^ first(label))`, where
//! `first(x)` is the first output of a generator seeded with `x`. The
//! simulator uses `scenario seed -> link (src << 16 | dst) -> transmission
//! index`, so every frame's randomness is reproducible in isolation.
//!
//! Uniform floats take the top 53 bits: `(next_u64() >> 11) * 2^-53`.

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` with probability `p`; consumes one draw unless `p` is 0 or 1.
    pub fn chance(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.next_f64() < p
        }
    }

    /// Uniform in `0..n` by rejection, `n > 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    pub fn fill_bytes(&mut self, out: &mut [u8]) {
        for chunk in out.chunks_mut(8) {
            let v = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&v[..chunk.len()]);
        }
    }

    pub fn derive(&self, label: u64) -> SplitMix64 {
        SplitMix64::new(derive(self.state, label))
    }
}

pub fn derive(seed: u64, label: u64) -> u64 {
    let first = |x: u64| SplitMix64::new(x).next_u64();
    first(seed ^ first(label))
}
