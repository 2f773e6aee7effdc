//! Segmented bitset sieves for primality and squarefreeness.
//!
//! Construction is segmented (odds only for the prime sieve) so the hot loop
//! stays in cache, and segments are filled in parallel; queries afterwards
//! are read-only bitset lookups. A block-level popcount prefix makes π(n)
//! O(1).

use rayon::prelude::*;

const SEGMENT: usize = 1 << 18;

/// Exact primality for all n ≤ limit plus an O(1) prime-counting table.
pub struct PrimeSieve {
    limit: u64,
    /// bit i ⇔ (2i+1) is prime; bit 0 (n=1) cleared, 2 special-cased
    odd_bits: Vec<u64>,
    /// π(2·64·k+1) cumulative counts per 64-bit word, excluding the prime 2
    prefix: Vec<u32>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        assert!(limit >= 2, "prime sieve needs limit >= 2");
        let n_odds = (limit as usize).div_ceil(2) + 1;
        let n_words = n_odds.div_ceil(64);
        let mut odd_bits = vec![u64::MAX; n_words];

        // base primes up to sqrt(limit), found by a plain small sieve
        let root = (limit as f64).sqrt() as usize + 1;
        let mut small = vec![true; root + 1];
        let mut base: Vec<usize> = Vec::new();
        for p in (3..=root).step_by(2) {
            if small[p] {
                base.push(p);
                let mut m = p * p;
                while m <= root {
                    small[m] = false;
                    m += 2 * p;
                }
            }
        }

        odd_bits
            .par_chunks_mut(SEGMENT / 64)
            .enumerate()
            .for_each(|(chunk, words)| {
                let lo_bit = chunk * SEGMENT; // bit index of first odd in chunk
                let hi_bit = lo_bit + words.len() * 64;
                for &p in &base {
                    // first odd multiple of p at or after max(p², 2·lo_bit+1)
                    let mut m = p * p;
                    let lo_val = 2 * lo_bit + 1;
                    if m < lo_val {
                        m = lo_val.div_ceil(p) * p;
                        if m % 2 == 0 {
                            m += p;
                        }
                    }
                    let mut bit = m / 2;
                    while bit < hi_bit {
                        words[(bit - lo_bit) / 64] &= !(1u64 << (bit % 64));
                        bit += p;
                    }
                }
            });

        // clear n = 1 and everything beyond the limit
        odd_bits[0] &= !1;
        for bit in ((limit as usize + 2) / 2)..(n_words * 64) {
            odd_bits[bit / 64] &= !(1u64 << (bit % 64));
        }

        let mut prefix = Vec::with_capacity(n_words + 1);
        let mut acc = 0u32;
        prefix.push(0);
        for w in &odd_bits {
            acc += w.count_ones();
            prefix.push(acc);
        }

        PrimeSieve {
            limit,
            odd_bits,
            prefix,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "n={n} beyond sieve limit {}", self.limit);
        if n == 2 {
            return true;
        }
        if n < 2 || n.is_multiple_of(2) {
            return false;
        }
        let bit = (n / 2) as usize;
        self.odd_bits[bit / 64] >> (bit % 64) & 1 == 1
    }

    /// π(n), the number of primes ≤ n.
    pub fn pi(&self, n: u64) -> u64 {
        assert!(n <= self.limit);
        if n < 2 {
            return 0;
        }
        // odd primes ≤ n occupy bits 0..=(n−1)/2
        let bit = ((n - 1) / 2) as usize;
        let word = bit / 64;
        let mask = if bit % 64 == 63 {
            u64::MAX
        } else {
            (1u64 << (bit % 64 + 1)) - 1
        };
        let odd = self.prefix[word] as u64 + (self.odd_bits[word] & mask).count_ones() as u64;
        odd + 1 // the prime 2
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(2).chain(
            (1..=(self.limit as usize).saturating_sub(1) / 2)
                .map(|b| 2 * b as u64 + 1)
                .filter(move |&n| {
                    let bit = (n / 2) as usize;
                    self.odd_bits[bit / 64] >> (bit % 64) & 1 == 1
                }),
        )
    }
}

/// n is marked iff no p² divides n.
pub struct SquarefreeSieve {
    limit: u64,
    bits: Vec<u64>,
}

impl SquarefreeSieve {
    pub fn new(limit: u64) -> Self {
        assert!(limit >= 1);
        let n = limit as usize + 1;
        let n_words = n.div_ceil(64);
        let mut bits = vec![u64::MAX; n_words];
        bits[0] &= !1; // n = 0 is not in the domain

        let root = (limit as f64).sqrt() as usize + 1;
        let mut small = vec![true; root + 1];
        let mut squares: Vec<usize> = Vec::new();
        for p in 2..=root {
            if small[p] {
                squares.push(p * p);
                let mut m = 2 * p;
                while m <= root {
                    small[m] = false;
                    m += p;
                }
            }
        }

        bits.par_chunks_mut(SEGMENT / 64)
            .enumerate()
            .for_each(|(chunk, words)| {
                let lo = chunk * SEGMENT;
                let hi = lo + words.len() * 64;
                for &q in &squares {
                    let mut m = lo.div_ceil(q) * q;
                    if m == 0 {
                        m = q;
                    }
                    while m < hi {
                        words[(m - lo) / 64] &= !(1u64 << (m % 64));
                        m += q;
                    }
                }
            });

        for b in (n)..(n_words * 64) {
            bits[b / 64] &= !(1u64 << (b % 64));
        }

        SquarefreeSieve { limit, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        assert!((1..=self.limit).contains(&n));
        self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn count_up_to(&self, n: u64) -> u64 {
        assert!(n <= self.limit);
        let word = (n / 64) as usize;
        let mut acc: u64 = self.bits[..word].iter().map(|w| w.count_ones() as u64).sum();
        let mask = if n % 64 == 63 {
            u64::MAX
        } else {
            (1u64 << (n % 64 + 1)) - 1
        };
        acc += (self.bits[word] & mask).count_ones() as u64;
        acc
    }
}
