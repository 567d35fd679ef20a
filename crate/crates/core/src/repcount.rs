//! Exact counts of ordered prime representations
//! `N = p_1^k + ... + p_u^k` for `(k, u)` in `{(1, 2), (1, 3), (2, 5)}`.
//!
//! Everything runs in exact 64-bit integer arithmetic. Range counts are
//! built from sparse convolutions parallelised over disjoint output blocks,
//! so the result does not depend on the thread schedule.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sieve::{isqrt, SieveTable};

const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CountKind {
    /// `p_1 + p_2 = N`
    Goldbach2,
    /// `p_1 + p_2 + p_3 = N`
    Ternary,
    /// `p_1^2 + ... + p_5^2 = N`
    QuinarySquares,
}

impl CountKind {
    pub fn power(self) -> u32 {
        match self {
            CountKind::QuinarySquares => 2,
            _ => 1,
        }
    }

    pub fn parts(self) -> u32 {
        match self {
            CountKind::Goldbach2 => 2,
            CountKind::Ternary => 3,
            CountKind::QuinarySquares => 5,
        }
    }

    /// Smallest representable `N` (all parts equal to 2).
    pub fn min_sum(self) -> u64 {
        self.parts() as u64 * 2u64.pow(self.power())
    }
}

/// Representation counts for every `N <= limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    kind: CountKind,
    limit: u64,
    counts: Vec<u64>,
}

impl CountTable {
    pub fn kind(&self) -> CountKind {
        self.kind
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, n: u64) -> Result<u64> {
        self.counts
            .get(n as usize)
            .copied()
            .ok_or(Error::range("N", n, self.limit))
    }
}

fn need_sieve(sieve: &SieveTable, upto: u64) -> Result<()> {
    if upto > sieve.limit() {
        return Err(Error::range("prime bound", upto, sieve.limit()));
    }
    Ok(())
}

/// Sparse convolution `out[m] = sum_{x + y = m} wa(x) wb(y)` for `m <= limit`.
/// Both inputs are `(value, weight)` lists sorted by value.
pub(crate) fn sparse_convolve(a: &[(u64, u64)], b: &[(u64, u64)], limit: u64) -> Vec<u64> {
    let mut out = vec![0u64; limit as usize + 1];
    out.par_chunks_mut(BLOCK).enumerate().for_each(|(bi, chunk)| {
        let lo = (bi * BLOCK) as u64;
        let hi = lo + chunk.len() as u64;
        for &(x, wx) in a {
            if x >= hi {
                break;
            }
            let from = b.partition_point(|&(y, _)| x + y < lo);
            for &(y, wy) in &b[from..] {
                let m = x + y;
                if m >= hi {
                    break;
                }
                chunk[(m - lo) as usize] += wx * wy;
            }
        }
    });
    out
}

fn nonzero(v: &[u64]) -> Vec<(u64, u64)> {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i as u64, c))
        .collect()
}

fn prime_powers(sieve: &SieveTable, k: u32, limit: u64) -> Vec<(u64, u64)> {
    sieve
        .primes()
        .iter()
        .map_while(|&p| p.checked_pow(k).filter(|&v| v <= limit))
        .map(|v| (v, 1))
        .collect()
}

/// Ordered pairs of primes with `p_1 + p_2 = m`.
pub fn count_goldbach2(sieve: &SieveTable, m: u64) -> Result<u64> {
    if m < 4 {
        return Ok(0);
    }
    need_sieve(sieve, m - 2)?;
    Ok(sieve
        .primes_upto(m - 2)
        .iter()
        .filter(|&&p| sieve.bit(m - p))
        .count() as u64)
}

pub fn goldbach2_range(sieve: &SieveTable, x: u64) -> Result<CountTable> {
    need_sieve(sieve, x)?;
    let ps = prime_powers(sieve, 1, x);
    Ok(CountTable {
        kind: CountKind::Goldbach2,
        limit: x,
        counts: sparse_convolve(&ps, &ps, x),
    })
}

/// Ordered prime triples summing to `n`, by direct enumeration of `(p_1, p_2)`.
pub fn count_ternary(sieve: &SieveTable, n: u64) -> Result<u64> {
    if n < 6 {
        return Ok(0);
    }
    need_sieve(sieve, n - 4)?;
    let ps = sieve.primes_upto(n - 4);
    Ok(ps
        .par_iter()
        .map(|&p1| {
            let rest = n - p1;
            sieve
                .primes_upto(rest - 2)
                .iter()
                .filter(|&&p2| sieve.bit(rest - p2))
                .count() as u64
        })
        .sum())
}

/// Ternary counts for all `N <= x`: the prime indicator convolved with itself twice.
pub fn count_ternary_range(sieve: &SieveTable, x: u64) -> Result<CountTable> {
    need_sieve(sieve, x)?;
    let ps = prime_powers(sieve, 1, x);
    let pairs = sparse_convolve(&ps, &ps, x);
    Ok(CountTable {
        kind: CountKind::Ternary,
        limit: x,
        counts: sparse_convolve(&ps, &nonzero(&pairs), x),
    })
}

/// `r_2(m) = #{(p, p') : p^2 + p'^2 = m}` for `m <= limit`.
fn square_pairs(sieve: &SieveTable, limit: u64) -> Result<Vec<u64>> {
    need_sieve(sieve, isqrt(limit))?;
    let sq = prime_powers(sieve, 2, limit);
    Ok(sparse_convolve(&sq, &sq, limit))
}

/// Ordered 5-tuples of primes with `p_1^2 + ... + p_5^2 = n`, as
/// `sum_p (r_2 * r_2)(n - p^2)`.
pub fn count_quinary_squares(sieve: &SieveTable, n: u64) -> Result<u64> {
    if n < 20 {
        return Ok(0);
    }
    let r2 = square_pairs(sieve, n)?;
    let support = nonzero(&r2);
    Ok(sieve
        .primes_upto(isqrt(n))
        .par_iter()
        .map(|&p| {
            let m = n - p * p;
            support
                .iter()
                .take_while(|&&(s, _)| s <= m)
                .map(|&(s, w)| w * r2[(m - s) as usize])
                .sum::<u64>()
        })
        .sum())
}

pub fn quinary_range(sieve: &SieveTable, x: u64) -> Result<CountTable> {
    let r2 = square_pairs(sieve, x)?;
    let r4 = sparse_convolve(&nonzero(&r2), &nonzero(&r2), x);
    let sq = prime_powers(sieve, 2, x);
    Ok(CountTable {
        kind: CountKind::QuinarySquares,
        limit: x,
        counts: sparse_convolve(&sq, &nonzero(&r4), x),
    })
}

/// Representation counts of kind `kind` for all `N <= x`.
pub fn count_range(sieve: &SieveTable, kind: CountKind, x: u64) -> Result<CountTable> {
    match kind {
        CountKind::Goldbach2 => goldbach2_range(sieve, x),
        CountKind::Ternary => count_ternary_range(sieve, x),
        CountKind::QuinarySquares => quinary_range(sieve, x),
    }
}

pub fn count_single(sieve: &SieveTable, kind: CountKind, n: u64) -> Result<u64> {
    match kind {
        CountKind::Goldbach2 => count_goldbach2(sieve, n),
        CountKind::Ternary => count_ternary(sieve, n),
        CountKind::QuinarySquares => count_quinary_squares(sieve, n),
    }
}

/// Solutions of `p_1^2 + p_2^2 = p_3^2 + p_4^2` with all `p_i <= x`.
/// Returns `(total, total - diagonal)` where the diagonal solutions
/// `{p_3, p_4} = {p_1, p_2}` number `2 pi(x)^2 - pi(x)`.
pub fn count_foursquare_diag(sieve: &SieveTable, x: u64) -> Result<(u64, u64)> {
    if x < 2 {
        return Err(Error::invalid("X must be at least 2"));
    }
    need_sieve(sieve, x)?;
    let ps = sieve.primes_upto(x);
    let mut sums: Vec<u64> = ps
        .iter()
        .flat_map(|&p| ps.iter().map(move |&r| p * p + r * r))
        .collect();
    sums.sort_unstable();
    let total = sums
        .chunk_by(|a, b| a == b)
        .map(|run| (run.len() as u64).pow(2))
        .sum::<u64>();
    let pi = ps.len() as u64;
    Ok((total, total - (2 * pi * pi - pi)))
}

/// Unordered (multiset) representation counts, for diagnostics.
pub fn count_unordered(sieve: &SieveTable, kind: CountKind, n: u64) -> Result<u64> {
    let k = kind.power();
    let root = if k == 1 { n } else { isqrt(n) };
    need_sieve(sieve, root)?;
    let parts: Vec<u64> = sieve
        .primes_upto(root)
        .iter()
        .map(|&p| p.pow(k))
        .collect();
    fn go(parts: &[u64], from: usize, left: u32, target: u64) -> u64 {
        if left == 1 {
            return parts[from..].binary_search(&target).is_ok() as u64;
        }
        let mut total = 0;
        for i in from..parts.len() {
            // remaining parts are each >= parts[i]
            if parts[i] * left as u64 > target {
                break;
            }
            total += go(parts, i, left - 1, target - parts[i]);
        }
        total
    }
    Ok(go(&parts, 0, kind.parts(), n))
}

/// For a representation problem `N = p_1^k + (rest)`, the ordered counts of
/// the remaining `u - 1` parts for every `m <= limit`.
///
/// Sums over the tuple set that depend only on `p_1` (twisted sums,
/// angle-restricted counts) reduce to `sum_{p_1} w(p_1) rest[N - p_1^k]`.
#[derive(Debug, Clone)]
pub struct ComplementTable {
    kind: CountKind,
    limit: u64,
    /// `p_1^k` values in ascending order, paired with `p_1`.
    slots: Vec<(u64, u64)>,
    rest: Vec<u64>,
}

impl ComplementTable {
    pub fn new(sieve: &SieveTable, kind: CountKind, limit: u64) -> Result<Self> {
        let rest = match kind {
            CountKind::Goldbach2 => {
                return Err(Error::invalid("complement tables need at least three parts"))
            }
            CountKind::Ternary => goldbach2_range(sieve, limit)?.counts,
            CountKind::QuinarySquares => {
                let r2 = square_pairs(sieve, limit)?;
                sparse_convolve(&nonzero(&r2), &nonzero(&r2), limit)
            }
        };
        let k = kind.power();
        let slots = sieve
            .primes()
            .iter()
            .map_while(|&p| p.checked_pow(k).filter(|&v| v <= limit).map(|v| (v, p)))
            .collect();
        Ok(ComplementTable {
            kind,
            limit,
            slots,
            rest,
        })
    }

    pub fn ternary(sieve: &SieveTable, limit: u64) -> Result<Self> {
        Self::new(sieve, CountKind::Ternary, limit)
    }

    pub fn quinary(sieve: &SieveTable, limit: u64) -> Result<Self> {
        Self::new(sieve, CountKind::QuinarySquares, limit)
    }

    pub fn kind(&self) -> CountKind {
        self.kind
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Ordered count of the `u - 1` trailing parts summing to `m`.
    pub fn rest(&self, m: u64) -> Result<u64> {
        self.rest
            .get(m as usize)
            .copied()
            .ok_or(Error::range("m", m, self.limit))
    }

    fn check(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::range("N", n, self.limit));
        }
        Ok(())
    }

    /// `(p_1, rest(N - p_1^k))` for every admissible first part with a nonzero complement.
    pub fn first_slots(&self, n: u64) -> Result<Vec<(u64, u64)>> {
        self.check(n)?;
        Ok(self
            .slots
            .iter()
            .take_while(|&&(v, _)| v <= n)
            .map(|&(v, p)| (p, self.rest[(n - v) as usize]))
            .filter(|&(_, c)| c != 0)
            .collect())
    }

    /// `#J(N)`.
    pub fn total(&self, n: u64) -> Result<u64> {
        Ok(self.first_slots(n)?.iter().map(|&(_, c)| c).sum())
    }

    /// Number of tuples whose first part satisfies `keep`.
    pub fn masked_count(&self, n: u64, keep: impl Fn(u64) -> bool) -> Result<u64> {
        Ok(self
            .first_slots(n)?
            .iter()
            .filter(|&&(p, _)| keep(p))
            .map(|&(_, c)| c)
            .sum())
    }

    /// `sum over tuples of weight(p_1)`, accumulated with Neumaier summation.
    pub fn weighted_sum(&self, n: u64, weight: impl Fn(u64) -> Result<f64>) -> Result<f64> {
        let mut acc = crate::numeric::Neumaier::default();
        for (p, c) in self.first_slots(n)? {
            acc.add(weight(p)? * c as f64);
        }
        Ok(acc.value())
    }
}
