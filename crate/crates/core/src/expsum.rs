//! Exponential sums over primes, the minor-arc bound shapes they are compared
//! against, and the exact discrete form of the circle-method integral.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{classify_arc, classify_refined, dirichlet_approx, divisor_count, ArcLabel, RationalApprox};
use crate::error::{Error, Result};
use crate::hecke::PrimeCoeff;
use crate::phase::{e, e_rational, frac_mul, mul_mod};
use crate::repcount::{ComplementTable, CountKind};
use crate::sieve::{iroot, SieveTable};

const MAX_ARG: u64 = 1 << 53;

/// A frequency `alpha`, either a double or an exact rational `num/den`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Real(f64),
    Ratio(u64, u64),
}

impl Alpha {
    /// `e(n alpha)`, with `n alpha` reduced modulo 1 before the exponential.
    #[inline]
    pub fn phase(self, n: u64) -> Complex64 {
        match self {
            Alpha::Real(a) => e(frac_mul(n, a)),
            Alpha::Ratio(num, den) => e_rational(mul_mod(n % den, num % den, den), den),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Alpha::Real(a) => a,
            Alpha::Ratio(num, den) => num as f64 / den as f64,
        }
    }
}

impl From<f64> for Alpha {
    fn from(a: f64) -> Self {
        Alpha::Real(a)
    }
}

fn check_nk(n: u64, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if n >= MAX_ARG {
        return Err(Error::invalid(format!("N must be below 2^53, got {n}")));
    }
    Ok(())
}

/// Primes with `p^k <= n`.
fn prime_range(sieve: &SieveTable, n: u64, k: u32) -> Result<&[u64]> {
    check_nk(n, k)?;
    let root = iroot(n, k);
    if root > sieve.limit() {
        return Err(Error::range("N^(1/k)", root, sieve.limit()));
    }
    Ok(sieve.primes_upto(root))
}

/// `H(N, alpha) = sum_{p^k <= N} e(p^k alpha)`.
pub fn h_sum(sieve: &SieveTable, n: u64, k: u32, alpha: impl Into<Alpha>) -> Result<Complex64> {
    let alpha = alpha.into();
    Ok(prime_range(sieve, n, k)?
        .iter()
        .map(|&p| alpha.phase(p.pow(k)))
        .sum())
}

/// `T(N, alpha) = sum_{p^k <= N} coeff(p) e(p^k alpha)`.
pub fn t_sum(
    sieve: &SieveTable,
    n: u64,
    k: u32,
    alpha: impl Into<Alpha>,
    coeff: &dyn PrimeCoeff,
) -> Result<Complex64> {
    let alpha = alpha.into();
    prime_range(sieve, n, k)?
        .iter()
        .map(|&p| Ok(coeff.at(p)? * alpha.phase(p.pow(k))))
        .sum()
}

/// `sum_{m <= x} Lambda(m) a(m) e(m^k alpha)`, with `a = 1` when absent.
pub fn lambda_weighted_sum(
    sieve: &SieveTable,
    x: u64,
    k: u32,
    alpha: impl Into<Alpha>,
    coeff: Option<&(dyn Fn(u64) -> Result<f64> + Sync)>,
) -> Result<Complex64> {
    if x < 2 {
        return Err(Error::invalid("x must be at least 2"));
    }
    if x.checked_pow(k).is_none_or(|v| v >= MAX_ARG) {
        return Err(Error::invalid("x^k must be below 2^53"));
    }
    if x > sieve.limit() {
        return Err(Error::range("x", x, sieve.limit()));
    }
    let alpha = alpha.into();
    let mut total = Complex64::new(0.0, 0.0);
    for &p in sieve.primes_upto(x) {
        let log_p = (p as f64).ln();
        let mut m = p;
        loop {
            let a = match coeff {
                Some(f) => f(m)?,
                None => 1.0,
            };
            total += log_p * a * alpha.phase(m.pow(k));
            match m.checked_mul(p) {
                Some(next) if next <= x => m = next,
                _ => break,
            }
        }
    }
    Ok(total)
}

/// Implied constants of the minor-arc bound shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub epsilon1: f64,
    pub c_prime: f64,
    pub c_double_prime: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            epsilon1: 0.01,
            c_prime: 1.0,
            c_double_prime: 1.0,
        }
    }
}

/// Minor-arc bound shapes for `sum_{m <= x} Lambda(m) e(m^k alpha)`, all
/// implied constants set to 1. Diagnostic quantities only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinorBounds {
    /// Vaughan's bound for `k = 1`; Harman's `x^(1+eps)` form for `k >= 2`.
    pub vinogradov: f64,
    /// The `(log x)^c'` form with exponent `1/(2K^2)`.
    pub harman: f64,
    /// Ren's bound with the `d(q)^gamma_k` factor.
    pub ren: f64,
}

/// `K = 2^(k-1)`.
pub fn weyl_k(k: u32) -> f64 {
    2f64.powi(k as i32 - 1)
}

/// `gamma_k = 1/2 + log k / log 2`.
pub fn ren_gamma(k: u32) -> f64 {
    0.5 + (k as f64).ln() / std::f64::consts::LN_2
}

pub fn eval_minor_bounds(
    x: f64,
    k: u32,
    q: u64,
    offset: f64,
    params: &BoundParams,
) -> Result<MinorBounds> {
    if x.is_nan() || x < 16.0 || k == 0 || q == 0 {
        return Err(Error::invalid("need x >= 16, k >= 1, q >= 1"));
    }
    let (qf, lx, kk) = (q as f64, x.ln(), weyl_k(k).powi(2));
    let weyl = 1.0 / qf + x.powf(-0.5) + qf / x.powi(k as i32);
    let vinogradov = if k == 1 {
        x * lx.powi(3) * (1.0 / qf + x.powf(-0.4) + qf / x).sqrt()
    } else {
        x.powf(1.0 + params.epsilon1) * weyl.powf(1.0 / kk)
    };
    let harman = x * lx.powf(params.c_prime) * weyl.powf(1.0 / (2.0 * kk));
    let spread = qf * (1.0 + offset.abs() * x.powi(k as i32));
    let ren = (divisor_count(q) as f64).powf(ren_gamma(k))
        * (x.sqrt() * spread.sqrt() + x.powf(0.8) + x / spread.sqrt())
        * lx.powf(params.c_double_prime);
    Ok(MinorBounds {
        vinogradov,
        harman,
        ren,
    })
}

fn floor_pow(n: u64, e: f64) -> u64 {
    ((n as f64).powf(e) + 1e-9).floor().max(1.0) as u64
}

/// Primary dissection `(P, Q) = (N^(c(1 - delta)), N/P)` with `c = 2/3` for
/// `k = 1` and `c = 1/3` for `k = 2`.
pub fn hypothesis_arcs(n: u64, k: u32, delta: f64) -> Result<(u64, u64)> {
    if !(0.5..1.0).contains(&delta) {
        return Err(Error::invalid(format!("delta must lie in [1/2, 1), got {delta}")));
    }
    let c = match k {
        1 => 2.0 / 3.0,
        2 => 1.0 / 3.0,
        _ => return Err(Error::invalid("arc parameters are defined for k = 1, 2")),
    };
    let p = floor_pow(n, c * (1.0 - delta));
    Ok((p, n / p))
}

/// Refined dissection `(P', Q') = (N^(1/3), N/P')`.
pub fn refined_arcs(n: u64) -> (u64, u64) {
    let p = floor_pow(n, 1.0 / 3.0);
    (p, n / p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpSumSample {
    pub alpha: f64,
    pub k: u32,
    /// `T(N, alpha)` with the requested coefficients.
    pub value: Complex64,
    pub h_abs: f64,
    pub arc: ArcLabel,
    pub refined: ArcLabel,
    pub approx: RationalApprox,
    pub bounds: MinorBounds,
}

/// Evaluate sums and arc labels at `alpha = j/M`, `j < M`.
pub fn arc_experiment(
    sieve: &SieveTable,
    n: u64,
    k: u32,
    (p, big_q): (u64, u64),
    grid: u64,
    coeff: &dyn PrimeCoeff,
    params: &BoundParams,
) -> Result<Vec<ExpSumSample>> {
    if grid < 2 {
        return Err(Error::invalid("grid size must be at least 2"));
    }
    let (p2, q2) = refined_arcs(n);
    let x = (iroot(n, k) as f64).max(16.0);
    prime_range(sieve, n, k)?;
    (0..grid)
        .into_par_iter()
        .map(|j| {
            let alpha = j as f64 / grid as f64;
            let exact = Alpha::Ratio(j, grid);
            let approx = dirichlet_approx(alpha, big_q)?;
            Ok(ExpSumSample {
                alpha,
                k,
                value: t_sum(sieve, n, k, exact, coeff)?,
                h_abs: h_sum(sieve, n, k, exact)?.norm(),
                arc: classify_arc(alpha, p, big_q)?,
                refined: classify_refined(alpha, p, big_q, p2, q2)?,
                approx,
                bounds: eval_minor_bounds(x, k, approx.q, approx.offset, params)?,
            })
        })
        .collect()
}

fn kind_for(k: u32, u: u32) -> Result<CountKind> {
    match (k, u) {
        (1, 3) => Ok(CountKind::Ternary),
        (2, 5) => Ok(CountKind::QuinarySquares),
        _ => Err(Error::invalid(format!("(k, u) = ({k}, {u}) is not one of (1, 3), (2, 5)"))),
    }
}

/// `sum_{J(N)} coeff(p_1)` both by direct convolution (`exact`) and as the
/// integral of `T H^(u-1) e(-N alpha)` sampled at `M` equispaced points
/// (`dft`). Uses `M = uN + 1`.
pub fn parseval_count(
    sieve: &SieveTable,
    n: u64,
    k: u32,
    u: u32,
    coeff: &dyn PrimeCoeff,
) -> Result<(Complex64, Complex64)> {
    parseval_count_with(sieve, n, k, u, coeff, u as u64 * n + 1)
}

/// As [`parseval_count`] with an explicit number of sample points `m > uN`.
pub fn parseval_count_with(
    sieve: &SieveTable,
    n: u64,
    k: u32,
    u: u32,
    coeff: &dyn PrimeCoeff,
    m: u64,
) -> Result<(Complex64, Complex64)> {
    let kind = kind_for(k, u)?;
    if m <= u as u64 * n {
        return Err(Error::invalid(format!(
            "M = {m} aliases; need M >= uN + 1 = {}",
            u as u64 * n + 1
        )));
    }
    let ps = prime_range(sieve, n, k)?;
    let table = ComplementTable::new(sieve, kind, n.max(1))?;
    let exact = table.weighted_sum(n, |p| coeff.at(p))?;
    let weights: Vec<(u64, f64)> = ps
        .iter()
        .map(|&p| Ok((p.pow(k), coeff.at(p)?)))
        .collect::<Result<_>>()?;
    let dft = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut t = Complex64::new(0.0, 0.0);
            let mut h = Complex64::new(0.0, 0.0);
            for &(v, w) in &weights {
                let ph = e_rational(mul_mod(v, j, m), m);
                t += w * ph;
                h += ph;
            }
            t * h.powu(u - 1) * e_rational(m - mul_mod(n, j, m), m)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum::<Complex64>()
        / m as f64;
    Ok((Complex64::new(exact, 0.0), dft))
}
