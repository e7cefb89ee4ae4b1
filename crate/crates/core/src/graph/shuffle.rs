//! Deterministic permutation generator for vertex-id randomization.
//!
//! The generator is pinned to SplitMix64-seeded xoshiro256** so that a given
//! seed produces the same permutation on every platform and in every future
//! version; relabeled graphs written to disk stay reproducible.

/// xoshiro256** seeded by expanding a 64-bit seed through SplitMix64.
pub struct Xoshiro256StarStar {
    s: [u64; 4],
}

impl Xoshiro256StarStar {
    pub fn new(seed: u64) -> Self {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        Self {
            s: [next(), next(), next(), next()],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform value in `0..bound` via rejection sampling (no modulo bias).
    fn next_index(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = (u64::MAX / bound) * bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}

/// Uniform random permutation of `0..nv` by Fisher-Yates.
/// `perm[old_id] = new_id` once the result is read as a mapping.
pub fn permutation(nv: usize, seed: u64) -> Vec<u32> {
    let mut rng = Xoshiro256StarStar::new(seed);
    let mut perm: Vec<u32> = (0..nv as u32).collect();
    for i in (1..nv).rev() {
        let j = rng.next_index(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}
