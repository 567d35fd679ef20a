//! Accurate reduction of `n * alpha` modulo 1 and the additive character `e(x)`.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// `(hi, lo)` with `hi + lo == a * b` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let hi = a * b;
    (hi, a.mul_add(b, -hi))
}

/// Fractional part of `n * alpha` in `[0, 1)`, carrying the rounding error of
/// the product so the phase stays accurate for `n` up to `2^53`.
#[inline]
pub fn frac_mul(n: u64, alpha: f64) -> f64 {
    debug_assert!(n < 1 << 53);
    let (hi, lo) = two_prod(n as f64, alpha);
    let r = (hi - hi.floor()) + lo;
    r - r.floor()
}

/// `e(x) = exp(2 pi i x)`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (TAU * x).sin_cos();
    Complex64::new(c, s)
}

/// `e(num / den)` with the numerator reduced exactly first.
#[inline]
pub fn e_rational(num: u64, den: u64) -> Complex64 {
    e((num % den) as f64 / den as f64)
}

/// `(a * b) mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}
