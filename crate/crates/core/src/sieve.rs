//! Prime tables built by a segmented sieve of Eratosthenes.
//!
//! [`SieveTable`] is the shared backbone: every other module asks it for
//! primes, primality and prime counts. It is immutable once built.

use crate::error::{Error, Result};

/// Default number of integers sieved per segment.
pub const DEFAULT_SEGMENT: usize = 1 << 18;

/// Largest supported limit. Beyond this the prime list alone outgrows desk memory.
pub const MAX_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_size: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_size: DEFAULT_SEGMENT,
        }
    }
}

/// Primes and primality flags over `[0, limit]`.
///
/// Flags are packed one bit per integer. `pi(x)` is answered by binary search
/// over the ascending prime list, which gives the same values as a dense
/// prefix-count array without its `4 * limit` bytes.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    bits: Vec<u64>,
    primes: Vec<u64>,
}

impl SieveTable {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_config(limit, SieveConfig::default())
    }

    pub fn with_config(limit: u64, config: SieveConfig) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!("sieve limit must be >= 2, got {limit}")));
        }
        if limit > MAX_LIMIT {
            return Err(Error::range("sieve limit", limit, MAX_LIMIT));
        }
        if config.segment_size < 64 {
            return Err(Error::invalid("segment size must be at least 64"));
        }
        let root = isqrt(limit);
        let base = simple_sieve(root);

        let words = (limit as usize + 1).div_ceil(64);
        let mut bits = vec![0u64; words];
        let mut primes = Vec::with_capacity(estimate_pi(limit));

        let seg = config.segment_size as u64;
        let mut composite = vec![false; config.segment_size];
        let mut lo = 0u64;
        while lo <= limit {
            let hi = (lo + seg - 1).min(limit);
            let len = (hi - lo + 1) as usize;
            composite[..len].iter_mut().for_each(|c| *c = false);
            for &p in &base {
                if p * p > hi {
                    break;
                }
                let mut m = (p * p).max(lo.div_ceil(p) * p);
                while m <= hi {
                    composite[(m - lo) as usize] = true;
                    m += p;
                }
            }
            for (i, &c) in composite[..len].iter().enumerate() {
                let n = lo + i as u64;
                if n >= 2 && !c {
                    bits[(n / 64) as usize] |= 1 << (n % 64);
                    primes.push(n);
                }
            }
            lo = hi + 1;
        }
        Ok(SieveTable {
            limit,
            bits,
            primes,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `<= limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= x` (clamped to the table).
    pub fn primes_upto(&self, x: u64) -> &[u64] {
        &self.primes[..self.primes.partition_point(|&p| p <= x)]
    }

    /// Primality of `n`; panics-free, errors when `n` is past the table.
    pub fn is_prime(&self, n: u64) -> Result<bool> {
        if n > self.limit {
            return Err(Error::range("n", n, self.limit));
        }
        Ok(self.bit(n))
    }

    #[inline]
    pub(crate) fn bit(&self, n: u64) -> bool {
        self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// `pi(x)`, the number of primes `<= x`.
    pub fn pi(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::range("x", x, self.limit));
        }
        Ok(self.primes.partition_point(|&p| p <= x) as u64)
    }

    /// Von Mangoldt function using the table's primes for factoring.
    /// `n` may exceed the limit as long as `sqrt(n)` does not.
    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("von Mangoldt is undefined at 0"));
        }
        if n <= self.limit {
            if self.bit(n) {
                return Ok((n as f64).ln());
            }
        } else if isqrt(n) > self.limit {
            return Err(Error::range("n", n, self.limit.saturating_mul(self.limit)));
        }
        Ok(prime_power_base(n, self.primes.iter().copied()).map_or(0.0, |p| (p as f64).ln()))
    }

    /// `Lambda(n)` for every `n` in `[0, limit]` (index 0 holds 0).
    pub fn mangoldt_table(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.limit as usize + 1];
        for &p in &self.primes {
            let lp = (p as f64).ln();
            let mut q = p;
            loop {
                out[q as usize] = lp;
                match q.checked_mul(p) {
                    Some(next) if next <= self.limit => q = next,
                    _ => break,
                }
            }
        }
        out
    }
}

/// `Lambda(n)` by trial division, independent of any table.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("von Mangoldt is undefined at 0"));
    }
    Ok(prime_power_base(n, 2..).map_or(0.0, |p| (p as f64).ln()))
}

/// If `n = p^j` with `j >= 1`, returns `p`. Candidate divisors must start
/// at 2 and be increasing; composite candidates are harmless.
fn prime_power_base(n: u64, candidates: impl Iterator<Item = u64>) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut smallest = n;
    for d in candidates {
        if d.saturating_mul(d) > n {
            break;
        }
        if n.is_multiple_of(d) {
            smallest = d;
            break;
        }
    }
    let mut m = n;
    while m.is_multiple_of(smallest) {
        m /= smallest;
    }
    (m == 1).then_some(smallest)
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Largest `r` with `r^k <= n`.
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn estimate_pi(n: u64) -> usize {
    if n < 17 {
        return 8;
    }
    let x = n as f64;
    (1.26 * x / x.ln()) as usize
}
