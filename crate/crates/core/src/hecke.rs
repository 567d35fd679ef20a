//! Ramanujan's tau function and symmetric-power coefficients of the
//! weight-12, level-1 cusp form `Delta = q prod (1 - q^n)^24`.
//!
//! `tau(n)` is the coefficient of `q^(n-1)` in `(eta^3)^8`, where
//! `eta^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2)` (with the `q^(1/8)` prefactor
//! dropped). The three squarings `eta^3 -> eta^6 -> eta^12 -> eta^24` are done
//! with number-theoretic transforms modulo five primes and recombined by CRT,
//! which is exact as long as `|tau(n)|` stays far below the modulus product.

use serde::Serialize;

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::phase::pow_mod;
use crate::sieve::SieveTable;

/// Largest supported table. `|tau(n)| <= d(n) n^(11/2)` stays below `2^124` here,
/// so values fit an `i128` and the five-prime CRT has ample headroom.
pub const MAX_LIMIT: u64 = 2_000_000;

const MODULI: [u64; 5] = [998_244_353, 167_772_161, 469_762_049, 754_974_721, 2_013_265_921];

/// Smallest generator of `(Z/pZ)^*`.
pub(crate) fn primitive_root(p: u64) -> u64 {
    let factors = factorize(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&(f, _)| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("prime modulus has a generator")
}

struct Ntt {
    p: u64,
    g: u64,
}

impl Ntt {
    fn new(p: u64) -> Self {
        Ntt {
            p,
            g: primitive_root(p),
        }
    }

    fn transform(&self, a: &mut [u64], invert: bool) {
        let n = a.len();
        let p = self.p;
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let mut w = pow_mod(self.g, (p - 1) / len as u64, p);
            if invert {
                w = pow_mod(w, p - 2, p);
            }
            let half = len / 2;
            let mut tw = Vec::with_capacity(half);
            let mut cur = 1u64;
            for _ in 0..half {
                tw.push(cur);
                cur = cur * w % p;
            }
            for block in a.chunks_mut(len) {
                let (lo, hi) = block.split_at_mut(half);
                for ((u, v), &t) in lo.iter_mut().zip(hi.iter_mut()).zip(&tw) {
                    let x = *u;
                    let y = *v * t % p;
                    *u = if x + y >= p { x + y - p } else { x + y };
                    *v = if x >= y { x - y } else { x + p - y };
                }
            }
            len <<= 1;
        }
        if invert {
            let inv = pow_mod(n as u64, p - 2, p);
            a.iter_mut().for_each(|x| *x = *x * inv % p);
        }
    }

    /// Square a polynomial modulo `p`, truncated to its first `a.len()` coefficients.
    fn square_truncated(&self, a: &[u64]) -> Vec<u64> {
        let len = a.len();
        let size = (2 * len - 1).next_power_of_two();
        let mut f = vec![0u64; size];
        f[..len].copy_from_slice(a);
        self.transform(&mut f, false);
        f.iter_mut().for_each(|x| *x = *x * *x % self.p);
        self.transform(&mut f, true);
        f.truncate(len);
        f
    }
}

/// `eta^3` coefficients for exponents `< len`.
fn eta_cubed(len: usize) -> Vec<i64> {
    let mut c = vec![0i64; len];
    for k in 0.. {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        c[e] = if k % 2 == 0 { 2 * k as i64 + 1 } else { -(2 * k as i64 + 1) };
    }
    c
}

/// Signed CRT reconstruction of a value known to be small in absolute value.
fn crt_signed(residues: &[u64; 5]) -> i128 {
    // Garner mixed-radix digits
    let mut v = [0u64; 5];
    for i in 0..5 {
        let m = MODULI[i];
        let mut x = residues[i] % m;
        let mut prefix = 1u64;
        for k in 0..i {
            let sub = v[k] % m * prefix % m;
            x = (x + m - sub) % m;
            prefix = prefix * (MODULI[k] % m) % m;
        }
        v[i] = x * pow_mod(prefix, m - 2, m) % m;
    }
    let top = MODULI[4];
    assert!(
        v[4] < 1 << 12 || v[4] > top - (1 << 12),
        "tau coefficient outside CRT headroom"
    );
    let mut value: u128 = 0;
    let mut radix: u128 = 1;
    for i in 0..5 {
        value = value.wrapping_add((v[i] as u128).wrapping_mul(radix));
        radix = radix.wrapping_mul(MODULI[i] as u128);
    }
    if v[4] < 1 << 12 {
        value as i128
    } else {
        // value - M, exact modulo 2^128 because the true result fits
        value.wrapping_sub(radix) as i128
    }
}

/// Table of `tau(n)`, `lambda_f(n) = tau(n)/n^(11/2)` and Sato-Tate angles.
#[derive(Debug, Clone)]
pub struct HeckeTable {
    limit: u64,
    tau: Vec<i128>,
    lambda: Vec<f64>,
    sieve: SieveTable,
    theta: Vec<f64>,
}

impl HeckeTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid("Hecke table limit must be at least 2"));
        }
        if limit > MAX_LIMIT {
            return Err(Error::range("Hecke table limit", limit, MAX_LIMIT));
        }
        let len = limit as usize;
        let eta3 = eta_cubed(len);
        let per_prime: Vec<Vec<u64>> = MODULI
            .iter()
            .map(|&p| {
                let ntt = Ntt::new(p);
                let mut f: Vec<u64> = eta3.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
                for _ in 0..3 {
                    f = ntt.square_truncated(&f);
                }
                f
            })
            .collect();
        let mut tau = vec![0i128; len + 1];
        for n in 1..=len {
            let r = std::array::from_fn(|i| per_prime[i][n - 1]);
            tau[n] = crt_signed(&r);
        }
        let lambda = tau
            .iter()
            .enumerate()
            .map(|(n, &t)| {
                if n == 0 {
                    0.0
                } else {
                    let n = n as f64;
                    t as f64 / (n.powi(5) * n.sqrt())
                }
            })
            .collect::<Vec<_>>();
        let sieve = SieveTable::new(limit)?;
        let theta = sieve
            .primes()
            .iter()
            .map(|&p| (lambda[p as usize] / 2.0).clamp(-1.0, 1.0).acos())
            .collect();
        Ok(HeckeTable {
            limit,
            tau,
            lambda,
            sieve,
            theta,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if n > self.limit {
            return Err(Error::range("n", n, self.limit));
        }
        Ok(())
    }

    pub fn tau(&self, n: u64) -> Result<i128> {
        self.check(n)?;
        Ok(self.tau[n as usize])
    }

    pub fn lambda(&self, n: u64) -> Result<f64> {
        self.check(n)?;
        Ok(self.lambda[n as usize])
    }

    /// Sato-Tate angle `theta_p = arccos(lambda_f(p)/2)` in `[0, pi]`.
    pub fn theta(&self, p: u64) -> Result<f64> {
        self.check(p)?;
        let idx = self
            .sieve
            .primes()
            .binary_search(&p)
            .map_err(|_| Error::invalid(format!("{p} is not prime")))?;
        Ok(self.theta[idx])
    }

    /// Primes covered by the table, paired with their angles.
    pub fn angles(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.sieve.primes().iter().copied().zip(self.theta.iter().copied())
    }

    pub fn sieve(&self) -> &SieveTable {
        &self.sieve
    }

    /// `lambda_{sym^j f}(p) = U_j(cos theta_p)`.
    pub fn sym_coeff(&self, j: u32, p: u64) -> Result<f64> {
        Ok(chebyshev_u(j, self.theta(p)?.cos()))
    }

    /// `(U_j^2, U_j^2 - 1)`: coefficients of `sym^j x sym^j` and of its adjoint part.
    pub fn rankin_selberg_coeff(&self, j: u32, p: u64) -> Result<(f64, f64)> {
        let u = self.sym_coeff(j, p)?;
        Ok((u * u, u * u - 1.0))
    }

    pub fn coeff(&self, mode: CoeffMode, j: u32, p: u64) -> Result<f64> {
        match mode {
            CoeffMode::Sym => self.sym_coeff(j, p),
            CoeffMode::Tensor => Ok(self.rankin_selberg_coeff(j, p)?.0),
            CoeffMode::Adjoint => Ok(self.rankin_selberg_coeff(j, p)?.1),
        }
    }
}

/// Chebyshev polynomial of the second kind by the three-term recurrence.
/// At `c = +-1` this yields the limit values `(+-1)^j (j + 1)`.
pub fn chebyshev_u(j: u32, c: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * c);
    if j == 0 {
        return prev;
    }
    for _ in 1..j {
        (prev, cur) = (cur, 2.0 * c * cur - prev);
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffMode {
    /// `U_j(cos theta_p)`
    Sym,
    /// `U_j(cos theta_p)^2`
    Tensor,
    /// `U_j(cos theta_p)^2 - 1`
    Adjoint,
}

impl std::str::FromStr for CoeffMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(CoeffMode::Sym),
            "tensor" => Ok(CoeffMode::Tensor),
            "adjoint" => Ok(CoeffMode::Adjoint),
            _ => Err(Error::invalid(format!("unknown coefficient mode {s:?}"))),
        }
    }
}

/// A real coefficient attached to each prime.
pub trait PrimeCoeff: Sync {
    fn at(&self, p: u64) -> Result<f64>;
}

/// The constant weight 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unit;

/// The constant weight 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl PrimeCoeff for Unit {
    fn at(&self, _: u64) -> Result<f64> {
        Ok(1.0)
    }
}

impl PrimeCoeff for Zero {
    fn at(&self, _: u64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Hecke-derived weight `p -> coeff(mode, j, p)`. Primes beyond the table
/// are a dependency error.
#[derive(Debug, Clone, Copy)]
pub struct HeckeCoeff<'a> {
    pub table: &'a HeckeTable,
    pub mode: CoeffMode,
    pub j: u32,
}

impl PrimeCoeff for HeckeCoeff<'_> {
    fn at(&self, p: u64) -> Result<f64> {
        if p > self.table.limit() {
            return Err(Error::Dependency(format!(
                "Hecke coefficient needed at p = {p} beyond table limit {}",
                self.table.limit()
            )));
        }
        self.table.coeff(self.mode, self.j, p)
    }
}

impl<F: Fn(u64) -> Result<f64> + Sync> PrimeCoeff for F {
    fn at(&self, p: u64) -> Result<f64> {
        self(p)
    }
}
