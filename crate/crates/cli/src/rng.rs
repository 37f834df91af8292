//! Counter-based SplitMix64.
//!
//! Output `i` (from 0) of the stream with key `s` is `mix(s + (i + 1)·γ)`
//! with `γ = 0x9E3779B97F4A7C15` and wrapping arithmetic, where
//!
//! ```text
//! mix(z): z = (z ^ (z >> 30))·0xBF58476D1CE4E5B9
//!         z = (z ^ (z >> 27))·0x94D049BB133111EB
//!         z ^ (z >> 31)
//! ```
//!
//! A child stream labelled `t` has key `mix(s ^ fnv1a64(t))`. Integers in
//! `[0, n)` are `next_u64() % n`; floats in `[0, 1)` are `(next_u64() >> 11)·2⁻⁵³`.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn fnv1a64(text: &str) -> u64 {
    text.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3))
}

#[derive(Clone, Debug)]
pub struct Rng {
    key: u64,
    counter: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self { key: seed, counter: 0 }
    }

    pub fn child(&self, label: &str) -> Self {
        Self::new(mix(self.key ^ fnv1a64(label)))
    }

    pub fn child_index(&self, label: &str, index: u64) -> Self {
        self.child(&format!("{label}#{index}"))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform in `[0, n)`; `n > 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1)`.
    pub fn signed_f64(&mut self) -> f64 {
        2.0 * self.unit_f64() - 1.0
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// `count` distinct values from `lo..=hi`, ascending.
    pub fn distinct(&mut self, lo: i64, hi: i64, count: usize) -> Vec<i64> {
        let mut pool: Vec<i64> = (lo..=hi).collect();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count.min(pool.len()) {
            let i = self.below(pool.len() as u64) as usize;
            out.push(pool.swap_remove(i));
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // SplitMix64 seeded with 0 starts 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4
        let mut r = Rng::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn children_are_independent_of_parent_position() {
        let mut a = Rng::new(9);
        let c1 = a.child("x").next_u64();
        a.next_u64();
        assert_eq!(a.child("x").next_u64(), c1);
        assert_ne!(Rng::new(9).child("y").next_u64(), c1);
    }

    #[test]
    fn ranges() {
        let mut r = Rng::new(3);
        for _ in 0..1000 {
            let v = r.range(-2, 2);
            assert!((-2..=2).contains(&v));
            let f = r.signed_f64();
            assert!((-1.0..1.0).contains(&f));
        }
        let d = r.distinct(1, 5, 5);
        assert_eq!(d, vec![1, 2, 3, 4, 5]);
    }
}
