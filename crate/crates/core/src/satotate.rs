//! Sato-Tate statistics of the angles `theta_p` of the discriminant form,
//! both over primes and over the first slot of prime-representation tuples,
//! together with smooth majorants and minorants of interval indicators.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{chebyshev_u, CoeffMode, HeckeTable};
use crate::numeric::Neumaier;
use crate::phase::frac_mul;
use crate::repcount::ComplementTable;

/// A closed interval `[lo, hi]` inside `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleInterval {
    lo: f64,
    hi: f64,
}

impl AngleInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo <= hi && hi <= PI) {
            return Err(Error::invalid(format!(
                "angle interval must satisfy 0 <= lo <= hi <= pi, got [{lo}, {hi}]"
            )));
        }
        Ok(AngleInterval { lo, hi })
    }

    pub fn full() -> Self {
        AngleInterval { lo: 0.0, hi: PI }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.lo <= theta && theta <= self.hi
    }
}

/// Sato-Tate measure `(2/pi) int_I sin^2`.
pub fn st_measure(i: &AngleInterval) -> f64 {
    (i.hi - i.lo) / PI - ((2.0 * i.hi).sin() - (2.0 * i.lo).sin()) / TAU
}

/// `#{p <= x : theta_p in I}`, endpoints included.
pub fn count_angles(hecke: &HeckeTable, x: u64, i: &AngleInterval) -> Result<u64> {
    if x > hecke.limit() {
        return Err(Error::range("x", x, hecke.limit()));
    }
    Ok(hecke
        .angles()
        .take_while(|&(p, _)| p <= x)
        .filter(|&(_, t)| i.contains(t))
        .count() as u64)
}

/// `sum over J(N)` of the chosen coefficient at `p_1`.
pub fn twisted_sum(
    table: &ComplementTable,
    hecke: &HeckeTable,
    n: u64,
    j: u32,
    mode: CoeffMode,
) -> Result<f64> {
    table.weighted_sum(n, |p| hecke.coeff(mode, j, p))
}

/// Tuples of `J(N)` whose first prime has `theta_{p_1} in I`.
pub fn count_j_with_angle(
    table: &ComplementTable,
    hecke: &HeckeTable,
    n: u64,
    i: &AngleInterval,
) -> Result<u64> {
    let mut total = 0;
    for (p, c) in table.first_slots(n)? {
        if i.contains(hecke.theta(p)?) {
            total += c;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquidistributionRow {
    pub n: u64,
    pub j_count: u64,
    pub j_angle: u64,
    /// `#J_{f,I}(N) / #J(N)`
    pub ratio: f64,
    /// `pi_{f,I}(N) / pi(N)`
    pub prime_ratio: f64,
    pub mu_st: f64,
    /// `|ratio - mu_st|`
    pub discrepancy: f64,
}

pub fn equidistribution_report(
    table: &ComplementTable,
    hecke: &HeckeTable,
    n_list: &[u64],
    i: &AngleInterval,
) -> Result<Vec<EquidistributionRow>> {
    let mu = st_measure(i);
    n_list
        .par_iter()
        .map(|&n| {
            let j_count = table.total(n)?;
            let j_angle = count_j_with_angle(table, hecke, n, i)?;
            let pi = hecke.sieve().pi(n.min(hecke.limit()))?;
            let prime_ratio = count_angles(hecke, n, i)? as f64 / pi as f64;
            let ratio = if j_count == 0 {
                0.0
            } else {
                j_angle as f64 / j_count as f64
            };
            Ok(EquidistributionRow {
                n,
                j_count,
                j_angle,
                ratio,
                prime_ratio,
                mu_st: mu,
                discrepancy: if j_count == 0 { 0.0 } else { (ratio - mu).abs() },
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Majorant,
    Minorant,
}

/// Largest truncation tail tolerated for the stored coefficients.
pub const TAIL_TOLERANCE: f64 = 1e-9;

/// Smooth approximation of `chi_I(theta)` of the form
/// `G(theta) = g(theta/2pi) + g(-theta/2pi)`, where `g` is the indicator of
/// `[a, b]` on the circle convolved with `R` boxes of width `delta/R`.
///
/// `g` equals 1 on `[a + delta/2, b - delta/2]`, vanishes outside
/// `[a - delta/2, b + delta/2]` and has Fourier coefficients
/// `hat chi(n) sinc(pi n delta / R)^R`. The majorant takes
/// `[a, b] = [lo/2pi - delta/2, hi/2pi + delta/2]`, the minorant
/// `[lo/2pi + delta/2, hi/2pi - delta/2]`.
#[derive(Debug, Clone)]
pub struct SmoothingFunction {
    interval: AngleInterval,
    side: Side,
    delta: f64,
    r: u32,
    a: f64,
    b: f64,
    /// `G(theta) = a_0 + 2 sum_{n >= 1} a_n cos(n theta)`
    a_coeffs: Vec<f64>,
    /// `G(theta) = sum_n cheb_n U_n(cos theta)` with `cheb_n = a_n - a_{n+2}`
    cheb_coeffs: Vec<f64>,
    tail_bound: f64,
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// CDF of the sum of `r` independent uniforms on `[0, 1]`.
fn irwin_hall_cdf(x: f64, r: u32) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= r as f64 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut binom = 1.0;
    let mut fact = 1.0;
    for k in 1..=r {
        fact *= k as f64;
    }
    for k in 0..=(x.floor() as u32) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * (x - k as f64).powi(r as i32);
        binom = binom * (r - k) as f64 / (k + 1) as f64;
    }
    (sum / fact).clamp(0.0, 1.0)
}

/// Smoothing width from the logarithmic choice
/// `1/delta = sqrt(log N) / log(12 log N)`, capped so that both the majorant
/// and the minorant of `I` are admissible.
pub fn default_delta(n: u64, i: &AngleInterval) -> Result<f64> {
    if n < 3 {
        return Err(Error::invalid("N must be at least 3"));
    }
    let ln = (n as f64).ln();
    let raw = (12.0 * ln).ln() / ln.sqrt();
    let width = (i.hi - i.lo) / TAU;
    if width <= 0.0 {
        return Err(Error::invalid("a degenerate interval has no minorant"));
    }
    Ok(raw.min(width / 2.0 * (1.0 - 1e-9)).min(0.25))
}

impl SmoothingFunction {
    pub fn new(interval: AngleInterval, delta: f64, r: u32, side: Side) -> Result<Self> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::invalid(format!("delta must lie in (0, 1/2), got {delta}")));
        }
        if !(1..=32).contains(&r) {
            return Err(Error::invalid(format!("R must lie in [1, 32], got {r}")));
        }
        let (lo, hi) = (interval.lo / TAU, interval.hi / TAU);
        let (a, b) = match side {
            Side::Majorant => (lo - delta / 2.0, hi + delta / 2.0),
            Side::Minorant => (lo + delta / 2.0, hi - delta / 2.0),
        };
        let len = b - a;
        if !(delta <= len && len <= 1.0 - delta) {
            return Err(Error::invalid(format!(
                "need delta <= b - a <= 1 - delta, got b - a = {len}, delta = {delta}"
            )));
        }
        let rf = r as f64;
        let scale = 2.0 / PI * (rf / (PI * delta)).powi(r as i32) / rf;
        let mut n_max = ((scale / TAIL_TOLERANCE).powf(1.0 / rf)).ceil().max(2.0) as usize;
        while n_max > 2 && scale / ((n_max - 1) as f64).powi(r as i32) < TAIL_TOLERANCE {
            n_max -= 1;
        }
        while scale / (n_max as f64).powi(r as i32) >= TAIL_TOLERANCE {
            n_max += 1;
        }
        let tail_bound = scale / (n_max as f64).powi(r as i32);
        let mid = (a + b) / 2.0;
        let mut a_coeffs = vec![0.0; n_max + 1];
        a_coeffs[0] = 2.0 * len;
        a_coeffs[1..].par_iter_mut().enumerate().for_each(|(i, c)| {
            let n = (i + 1) as u64;
            let nf = n as f64;
            // sin(2 pi n b) - sin(2 pi n a) = 2 cos(2 pi n mid) sin(pi n len)
            let cos_mid = (TAU * frac_signed(n, mid)).cos();
            let sin_len = (TAU * frac_signed(n, len / 2.0)).sin();
            *c = 2.0 * cos_mid * sin_len / (PI * nf) * sinc(PI * nf * delta / rf).powi(r as i32);
        });
        let cheb_coeffs = (0..=n_max)
            .map(|m| a_coeffs[m] - a_coeffs.get(m + 2).copied().unwrap_or(0.0))
            .collect();
        Ok(SmoothingFunction {
            interval,
            side,
            delta,
            r,
            a,
            b,
            a_coeffs,
            cheb_coeffs,
            tail_bound,
        })
    }

    pub fn interval(&self) -> &AngleInterval {
        &self.interval
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Circle endpoints `(a, b)`.
    pub fn endpoints(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// The constant term `b - a` of `g`.
    pub fn base(&self) -> f64 {
        self.b - self.a
    }

    pub fn n_max(&self) -> usize {
        self.a_coeffs.len() - 1
    }

    pub fn a_coeffs(&self) -> &[f64] {
        &self.a_coeffs
    }

    pub fn cheb_coeffs(&self) -> &[f64] {
        &self.cheb_coeffs
    }

    /// Bound on `sum_{n > n_max} |a_n|`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `min{2(b-a), 2/(n pi), (2/(n pi)) (R/(pi n delta))^R}`.
    pub fn coeff_bound(&self, n: usize) -> f64 {
        let nf = n as f64;
        let base = 2.0 / (nf * PI);
        let decay = base * (self.r as f64 / (PI * nf * self.delta)).powi(self.r as i32);
        (2.0 * self.base()).min(base).min(decay)
    }

    /// `g(y)` in closed form.
    pub fn circle(&self, y: f64) -> f64 {
        let w = self.delta / self.r as f64;
        let half = self.r as f64 / 2.0;
        let cdf = |x: f64| irwin_hall_cdf(x / w + half, self.r);
        let t = (y - self.a).rem_euclid(1.0);
        let len = self.b - self.a;
        let v = cdf(t) - cdf(t - len) + 1.0 - cdf(t + 1.0 - len) + cdf(t - 1.0);
        v.clamp(0.0, 1.0)
    }

    /// `G(theta) = g(theta/2pi) + g(-theta/2pi)` in closed form.
    pub fn eval(&self, theta: f64) -> f64 {
        let y = theta / TAU;
        self.circle(y) + self.circle(-y)
    }

    /// The truncated cosine series at `theta_i = 2 pi i / len`, `i < len`.
    pub fn series_grid(&self, len: usize) -> Vec<f64> {
        let mut bins = vec![Complex64::new(0.0, 0.0); len];
        for (n, &c) in self.a_coeffs.iter().enumerate().skip(1) {
            bins[n % len].re += c;
        }
        FftPlanner::new().plan_fft_inverse(len).process(&mut bins);
        bins.iter().map(|z| self.a_coeffs[0] + 2.0 * z.re).collect()
    }

    /// `sum_n cheb_n U_n(cos theta)` by Clenshaw's recurrence.
    pub fn eval_chebyshev(&self, theta: f64) -> f64 {
        let x = theta.cos();
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.cheb_coeffs.iter().rev() {
            (b1, b2) = (c + 2.0 * x * b1 - b2, b1);
        }
        b1
    }
}

/// `frac(n x)` for any real `x`, in `[0, 1)`.
fn frac_signed(n: u64, x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    frac_mul(n, if r >= 1.0 { 0.0 } else { r })
}

/// `sum over J(N)` of `G(theta_{p_1})`.
pub fn smoothed_count(
    table: &ComplementTable,
    hecke: &HeckeTable,
    n: u64,
    g: &SmoothingFunction,
) -> Result<f64> {
    table.weighted_sum(n, |p| Ok(g.eval(hecke.theta(p)?)))
}

/// The remainder quantity of the smoothed-count argument,
/// `sum_{n >= 1/delta} (4/(n pi)) (R/(pi n delta))^R |S_n| + sum_{n < 1/delta} (2/(n pi)) |S_n|`
/// with `S_n = sum over J(N)` of `U_n(cos theta_{p_1})`, truncated after `n_terms` terms.
pub fn a_term(
    table: &ComplementTable,
    hecke: &HeckeTable,
    n: u64,
    delta: f64,
    r: u32,
    n_terms: u32,
) -> Result<f64> {
    let slots: Vec<(f64, f64)> = table
        .first_slots(n)?
        .into_iter()
        .map(|(p, c)| Ok((hecke.theta(p)?.cos(), c as f64)))
        .collect::<Result<_>>()?;
    let cut = 1.0 / delta;
    let mut s = vec![Neumaier::default(); n_terms as usize + 1];
    for &(x, c) in &slots {
        let (mut prev, mut cur) = (1.0, 2.0 * x);
        for acc in s.iter_mut().skip(1) {
            acc.add(c * cur);
            (prev, cur) = (cur, 2.0 * x * cur - prev);
        }
    }
    let mut total = Neumaier::default();
    for (m, acc) in s.iter().enumerate().skip(1) {
        let mf = m as f64;
        let w = if mf >= cut {
            4.0 / (mf * PI) * (r as f64 / (PI * mf * delta)).powi(r as i32)
        } else {
            2.0 / (mf * PI)
        };
        total.add(w * acc.value().abs());
    }
    Ok(total.value())
}

/// `U_n(cos theta)` sums over the first slot, for diagnostics.
pub fn first_slot_chebyshev_sum(
    table: &ComplementTable,
    hecke: &HeckeTable,
    n: u64,
    j: u32,
) -> Result<f64> {
    table.weighted_sum(n, |p| Ok(chebyshev_u(j, hecke.theta(p)?.cos())))
}
