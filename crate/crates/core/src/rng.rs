//! Deterministic, platform-independent random number generation.
//!
//! Benchmark instance generators must reproduce bit-identical instance
//! sets for a given seed on every platform, so we ship a fixed PCG32
//! implementation (O'Neill's PCG-XSH-RR 64/32) seeded through SplitMix64
//! instead of pulling in an external generator whose stream might change
//! across versions.

/// PCG-XSH-RR 64/32 with a fixed odd increment.
#[derive(Clone, Debug)]
pub struct Pcg32 {
    state: u64,
}

const PCG_MULT: u64 = 6364136223846793005;
const PCG_INC: u64 = 1442695040888963407;

fn splitmix64(x: &mut u64) -> u64 {
    *x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl Pcg32 {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let mut rng = Pcg32 {
            state: splitmix64(&mut sm),
        };
        rng.next_u32();
        rng
    }

    /// Derives an independent stream, used to give every instance of a
    /// generated set its own generator regardless of how much randomness
    /// earlier instances consumed.
    pub fn derive(seed: u64, stream: u64) -> Self {
        let mut sm = seed ^ stream.wrapping_mul(0xd6e8feb86659fd93);
        let _ = splitmix64(&mut sm);
        Pcg32::new(splitmix64(&mut sm))
    }

    pub fn next_u32(&mut self) -> u32 {
        let old = self.state;
        self.state = old.wrapping_mul(PCG_MULT).wrapping_add(PCG_INC);
        let xorshifted = (((old >> 18) ^ old) >> 27) as u32;
        let rot = (old >> 59) as u32;
        xorshifted.rotate_right(rot)
    }

    /// Uniform value in `[0, bound)` via Lemire-style rejection; `bound`
    /// must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        if bound == 1 {
            return 0;
        }
        // Two 32-bit draws give a 64-bit word; rejection keeps it unbiased.
        let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
        loop {
            let hi = self.next_u32() as u64;
            let lo = self.next_u32() as u64;
            let x = (hi << 32) | lo;
            if x <= zone {
                return x % bound;
            }
        }
    }

    /// Uniform value in `[lo, hi]` inclusive.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.below(hi - lo + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = Pcg32::new(7);
        let mut b = Pcg32::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u32(), b.next_u32());
        }
    }

    #[test]
    fn derived_streams_differ() {
        let mut a = Pcg32::derive(7, 0);
        let mut b = Pcg32::derive(7, 1);
        let same = (0..32).filter(|_| a.next_u32() == b.next_u32()).count();
        assert!(same < 4);
    }

    #[test]
    fn below_respects_bound() {
        let mut rng = Pcg32::new(3);
        for _ in 0..1000 {
            assert!(rng.below(10) < 10);
        }
        assert_eq!(rng.below(1), 0);
    }
}
