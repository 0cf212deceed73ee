//! Small deterministic PRNG and the rational specialization pool.
//!
//! Reports must be reproducible from (config, seed) alone, so the generator
//! is pinned here rather than borrowed from an external crate whose stream
//! might change.

use crate::{rat, Coeff};

/// splitmix64: tiny, well-distributed, stable across platforms.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed.wrapping_add(0x9E3779B97F4A7C15) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Draws a proper fraction p/q with 1 <= p < q <= 13, random sign.
    pub fn small_rational(&mut self) -> Coeff {
        loop {
            let q = 2 + self.below(12) as i64; // 2..=13
            let p = 1 + self.below(q as u64 - 1) as i64; // 1..q
            if gcd(p, q) != 1 {
                continue;
            }
            let sign = if self.below(2) == 0 { 1 } else { -1 };
            return rat(sign * p, q);
        }
    }

    /// Draws an improper fraction p/q with q < p <= 13 (absolute value > 1).
    pub fn large_rational(&mut self) -> Coeff {
        loop {
            let q = 1 + self.below(6) as i64; // 1..=6
            let p = q + 1 + self.below(7) as i64; // q+1..=q+7
            if gcd(p, q) != 1 {
                continue;
            }
            let sign = if self.below(2) == 0 { 1 } else { -1 };
            return rat(sign * p, q);
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}
