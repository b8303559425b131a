//! Counter-based pseudo-random generator for reproducible test matrices.
//!
//! Output `i` of a stream is a pure function of `(key, i)` (a SplitMix64-style
//! finalizer over the counter), so streams are splittable, trivially
//! parallelizable, and bit-identical on every platform. Not cryptographic.

use crate::pmath;

#[derive(Clone, Debug)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(key: u64, counter: u64) -> u64 {
    let mut z = key.wrapping_add(counter.wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng {
            key: mix(seed, 0x6a09_e667_f3bc_c909),
            counter: 0,
        }
    }

    /// Derive an independent child stream; `tag` distinguishes siblings.
    pub fn split(&self, tag: u64) -> Self {
        CounterRng {
            key: mix(self.key, tag.wrapping_add(0xbb67_ae85_84ca_a73b)),
            counter: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = mix(self.key, self.counter);
        self.counter += 1;
        v
    }

    /// Uniform draw from [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const DEN: f64 = (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64) / DEN
    }

    /// Standard normal draw via the Marsaglia polar method.
    ///
    /// Uses the portable `ln` so the sequence is platform-independent. One
    /// draw of the pair is discarded to keep the stream stateless apart from
    /// the counter.
    pub fn next_gaussian(&mut self) -> f64 {
        loop {
            let x = 2.0 * self.next_f64() - 1.0;
            let y = 2.0 * self.next_f64() - 1.0;
            let s = x * x + y * y;
            if s > 0.0 && s < 1.0 {
                return x * (-2.0 * pmath::ln(s) / s).sqrt();
            }
        }
    }
}
