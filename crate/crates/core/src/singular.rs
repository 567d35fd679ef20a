//! Singular series and main terms for the ternary Goldbach, binary Goldbach
//! and five-squares problems.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, mobius};
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, gl_panel, graded_panels, Neumaier};
use crate::phase::pow_mod;
use crate::sieve::SieveTable;

/// A truncated Euler product. The true value lies in
/// `[value (1 - tail_bound), value (1 + tail_bound)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    /// Largest prime in the explicit partial product.
    pub cutoff: u64,
}

/// Bernoulli numbers `B_2, B_4, ..., B_20`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `zeta(x) - 1` for real `x >= 2` by Euler-Maclaurin summation.
pub fn zeta_minus_one(x: f64) -> f64 {
    debug_assert!(x >= 2.0);
    const N: u32 = 20;
    let nf = N as f64;
    let mut acc = Neumaier::default();
    for n in 2..N {
        acc.add((n as f64).powf(-x));
    }
    acc.add(nf.powf(1.0 - x) / (x - 1.0));
    acc.add(nf.powf(-x) / 2.0);
    // B_{2k}/(2k)! * x (x+1) ... (x+2k-2) * N^(-x-2k+1)
    let mut rising = x;
    let mut fact = 2.0;
    let mut power = nf.powf(-x - 1.0);
    for (k, &b) in BERNOULLI.iter().enumerate() {
        acc.add(b / fact * rising * power);
        let k2 = 2.0 * (k + 1) as f64;
        rising *= (x + k2 - 1.0) * (x + k2);
        fact *= (k2 + 1.0) * (k2 + 2.0);
        power /= nf * nf;
    }
    acc.value()
}

/// Prime zeta function `P(s) = sum_p p^(-s) = sum_m mu(m)/m log zeta(ms)`, `s >= 2`.
pub fn prime_zeta(s: f64) -> f64 {
    let mut acc = Neumaier::default();
    let mut m = 1u64;
    loop {
        let x = m as f64 * s;
        // log zeta(ms) ~ 2^(-ms); stop well below the leading 2^(-s)
        if x > s + 64.0 {
            break;
        }
        let mu = mobius(m);
        if mu != 0 {
            acc.add(mu as f64 / m as f64 * zeta_minus_one(x).ln_1p());
        }
        m += 1;
    }
    acc.value()
}

/// `C_2 = prod_{p >= 3} (1 - 1/(p-1)^2)`, exact over `primes` and accelerated
/// beyond them with `log(1 - 1/(p-1)^2) = sum_{s >= 2} (2 - 2^s)/s p^(-s)`.
pub fn twin_prime_constant(primes: &[u64]) -> SeriesValue {
    let mut log_c = Neumaier::default();
    let mut magnitude = 0.0;
    for &p in primes.iter().filter(|&&p| p >= 3) {
        let t = (-1.0 / ((p - 1) as f64).powi(2)).ln_1p();
        log_c.add(t);
        magnitude += t.abs();
    }
    let last = primes.last().copied().unwrap_or(2).max(2);
    let mut truncation = 0.0;
    for s in 2..200u32 {
        let sf = s as f64;
        // sum_{p > last} p^(-s)
        let mut partial = Neumaier::default();
        for &p in primes {
            partial.add((p as f64).powf(-sf));
        }
        let tail_ps = (prime_zeta(sf) - partial.value()).max(0.0);
        let coeff = (2.0 - 2f64.powi(s as i32)) / sf;
        let term = coeff * tail_ps;
        log_c.add(term);
        magnitude += term.abs();
        // remaining terms are bounded by a geometric series in 2/last
        let ratio = 2.0 / last as f64;
        let next = (2f64.powi(s as i32 + 1) / (sf + 1.0)) * (last as f64).powf(-sf) * ratio;
        if next < 1e-18 || tail_ps == 0.0 {
            truncation = 2.0 * next;
            break;
        }
    }
    let rounding = 64.0 * f64::EPSILON * magnitude;
    SeriesValue {
        value: log_c.value().exp(),
        tail_bound: (truncation + rounding).exp_m1(),
        cutoff: last,
    }
}

/// Which main term of the representation counts to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MainTermKind {
    /// `G N^2 / (2 log^3 N)`
    TernaryLog,
    /// `G` times the integral of `1/(log u log v log(N-u-v))` over the simplex.
    TernaryIntegral,
    /// `G_{2,5} pi^2 N^(3/2) / (24 log^5 N)`
    Quinary,
}

/// Euler products truncated at a fixed prime cutoff.
#[derive(Debug, Clone)]
pub struct SingularSeries {
    sieve: SieveTable,
    twin: SeriesValue,
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
fn legendre(a: i64, p: u64) -> i64 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `p * #{x in (Z/pZ)^*5 : x_1^2 + ... + x_5^2 = n mod p}` for an odd prime
/// `p`, from the quadratic Gauss sum `g` with `g^2 = (-1/p) p`.
fn quinary_scaled_count(p: u64, n: u64) -> i128 {
    assert!(p > 2, "odd primes only");
    let pi = p as i128;
    let eps: i128 = if p % 4 == 1 { 1 } else { -1 };
    // sum_{t != 0} e(-tN/p)
    let c0: i128 = if n.is_multiple_of(p) { pi - 1 } else { -1 };
    let chi = legendre(-((n % p) as i64), p) as i128;
    let even = 1 + 10 * eps * pi + 5 * pi * pi;
    let odd = 5 * eps * pi + 10 * pi * pi + eps * pi * pi * pi;
    (pi - 1).pow(5) - even * c0 + chi * odd
}

/// `#{x in (Z/pZ)^*5 : x_1^2 + ... + x_5^2 = n mod p}` for an odd prime `p`.
pub fn quinary_residue_count(p: u64, n: u64) -> u128 {
    let total = quinary_scaled_count(p, n);
    debug_assert_eq!(total % p as i128, 0);
    (total / p as i128) as u128
}

/// Local density `sigma_p(N)` of `x_1^2 + ... + x_5^2 = N` with units `x_i`.
/// Stable at `p^1` for odd `p` and at `8` for `p = 2`.
pub fn quinary_local_density(p: u64, n: u64) -> f64 {
    if p == 2 {
        // odd squares are 1 mod 8
        let hits = if n % 8 == 5 { 4u64.pow(5) } else { 0 };
        return 2f64.powi(5) * hits as f64 / 8f64.powi(4);
    }
    let base = (p as i128 - 1).pow(5);
    // sigma_p = p count / (p-1)^5 = 1 + (p count - (p-1)^5)/(p-1)^5
    1.0 + (quinary_scaled_count(p, n) - base) as f64 / base as f64
}

/// Bound on `|sigma_p(N) - 1|` for odd `p` not dividing `N`.
fn quinary_density_bound(p: f64) -> f64 {
    (p.powi(3) + 15.0 * p * p + 15.0 * p + 1.0) / (p - 1.0).powi(5)
}

fn ternary_factor(p: u64, n: u64) -> f64 {
    let d = (p - 1) as f64;
    if n.is_multiple_of(p) {
        1.0 - 1.0 / (d * d)
    } else {
        1.0 + 1.0 / (d * d * d)
    }
}

impl SingularSeries {
    pub fn new(cutoff: u64) -> Result<Self> {
        if cutoff < 100 {
            return Err(Error::invalid(format!("cutoff must be at least 100, got {cutoff}")));
        }
        let sieve = SieveTable::new(cutoff)?;
        let twin = twin_prime_constant(sieve.primes());
        Ok(SingularSeries { sieve, twin })
    }

    pub fn cutoff(&self) -> u64 {
        self.sieve.limit()
    }

    fn last_prime(&self) -> u64 {
        *self.sieve.primes().last().expect("cutoff >= 100")
    }

    /// Prime factors of `n` above the cutoff.
    fn large_factors(&self, n: u64) -> Vec<u64> {
        factorize(n)
            .into_iter()
            .map(|(p, _)| p)
            .filter(|&p| p > self.cutoff())
            .collect()
    }

    /// `G_{1,3}(N) = prod_{p | N} (1 - 1/(p-1)^2) prod_{p !| N} (1 + 1/(p-1)^3)`.
    pub fn ternary(&self, n: u64) -> Result<SeriesValue> {
        if n.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "the ternary series vanishes at even N = {n}"
            )));
        }
        let mut value: f64 = self.sieve.primes().iter().map(|&p| ternary_factor(p, n)).product();
        for p in self.large_factors(n) {
            value *= ternary_factor(p, n) / ternary_factor(p, n + 1);
        }
        // sum_{p > c} 1/(p-1)^3 <= int_{c-1}^inf dt/(t-1)^3
        let c = self.cutoff() as f64;
        Ok(SeriesValue {
            value,
            tail_bound: (1.0 / (2.0 * (c - 2.0).powi(2))).exp_m1(),
            cutoff: self.last_prime(),
        })
    }

    /// As [`Self::ternary`], with even `N` giving exactly zero.
    pub fn ternary_or_zero(&self, n: u64) -> SeriesValue {
        self.ternary(n).unwrap_or(SeriesValue {
            value: 0.0,
            tail_bound: 0.0,
            cutoff: self.last_prime(),
        })
    }

    /// `C_2` with its relative error estimate.
    pub fn twin_prime_constant(&self) -> SeriesValue {
        self.twin
    }

    /// Hardy-Littlewood main term `2 C_2 M/(log M)^2 prod_{p | M, p > 2} (p-1)/(p-2)`.
    pub fn hl_binary(&self, m: u64) -> Result<SeriesValue> {
        if m % 2 == 1 || m < 6 {
            return Err(Error::invalid(format!("M must be even and at least 6, got {m}")));
        }
        let local: f64 = factorize(m)
            .iter()
            .filter(|&&(p, _)| p > 2)
            .map(|&(p, _)| (p - 1) as f64 / (p - 2) as f64)
            .product();
        let mf = m as f64;
        Ok(SeriesValue {
            value: 2.0 * self.twin.value * mf / mf.ln().powi(2) * local,
            tail_bound: self.twin.tail_bound,
            cutoff: self.twin.cutoff,
        })
    }

    /// `G_{2,5}(N)` as the product of local densities, for `N = 5 mod 24`.
    pub fn quinary(&self, n: u64) -> Result<SeriesValue> {
        if n % 24 != 5 {
            return Err(Error::invalid(format!("N must be 5 mod 24, got {n}")));
        }
        let mut value: f64 = self
            .sieve
            .primes()
            .par_iter()
            .map(|&p| quinary_local_density(p, n))
            .collect::<Vec<_>>()
            .into_iter()
            .product();
        for p in self.large_factors(n) {
            value *= quinary_local_density(p, n);
        }
        // for t >= c, b(t) <= r(c)/(t-1)^2 with r(c) = b(c)(c-1)^2 decreasing
        let c = self.cutoff() as f64;
        let s = quinary_density_bound(c) * (c - 1.0);
        Ok(SeriesValue {
            value,
            tail_bound: s.exp_m1(),
            cutoff: self.last_prime(),
        })
    }

    pub fn main_term(&self, n: u64, kind: MainTermKind) -> Result<f64> {
        if n < 100 {
            return Err(Error::invalid(format!("main terms need N >= 100, got {n}")));
        }
        let nf = n as f64;
        let ln = nf.ln();
        Ok(match kind {
            MainTermKind::TernaryLog => self.ternary(n)?.value * nf * nf / (2.0 * ln.powi(3)),
            MainTermKind::TernaryIntegral => self.ternary(n)?.value * ternary_integral(n),
            MainTermKind::Quinary => {
                self.quinary(n)?.value * PI * PI * nf.powf(1.5) / (24.0 * ln.powi(5))
            }
        })
    }
}

/// `int int_{u, v >= 2, N - u - v >= 2} du dv / (log u log v log(N - u - v))`.
pub fn ternary_integral(n: u64) -> f64 {
    ternary_integral_with(n, 16)
}

pub(crate) fn ternary_integral_with(n: u64, order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let nf = n as f64;
    // inner(m) = int_2^{m-2} dv / (log v log(m - v))
    let inner = |m: f64| -> f64 {
        if m <= 4.0 {
            return 0.0;
        }
        graded_panels(2.0, m - 2.0, 2.0)
            .windows(2)
            .map(|w| gl_panel(&rule, w[0], w[1], |v| 1.0 / (v.ln() * (m - v).ln())))
            .sum()
    };
    graded_panels(2.0, nf - 4.0, 2.0)
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|w| gl_panel(&rule, w[0], w[1], |u| inner(nf - u) / u.ln()))
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}
