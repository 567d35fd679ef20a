//! End-to-end acceptance checks. Runs every criterion, prints one
//! `PASS`/`FAIL` line each and exits nonzero if any failed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wglab_core::arith::{divisor_count, divisors, gauss_parseval_check, gcd};
use wglab_core::expsum::{h_sum, parseval_count, Alpha};
use wglab_core::numeric::{gauss_legendre, gl_panel};
use wglab_core::repcount::{count_foursquare_diag, count_quinary_squares, count_ternary_range, quinary_range};
use wglab_core::satotate::{
    count_angles, count_j_with_angle, default_delta, st_measure, twisted_sum, TAIL_TOLERANCE,
};
use wglab_core::{
    AngleInterval, CoeffMode, ComplementTable, HeckeCoeff, HeckeTable, MainTermKind, ProbModel,
    Side, SieveTable, SingularSeries, SmoothingFunction, Unit,
};

const SEED: u64 = 0x5EED_0001;

struct Lab {
    sieve: SieveTable,
    hecke: HeckeTable,
    ternary: ComplementTable,
    quinary: ComplementTable,
    series: SingularSeries,
    model: ProbModel,
}

impl Lab {
    fn new() -> Self {
        let sieve = SieveTable::new(1_000_000).unwrap();
        Lab {
            hecke: HeckeTable::new(1_000_000).unwrap(),
            ternary: ComplementTable::ternary(&sieve, 101_000).unwrap(),
            quinary: ComplementTable::quinary(&sieve, 1_001_000).unwrap(),
            series: SingularSeries::new(100_000).unwrap(),
            model: ProbModel::new(101_000, 100_000).unwrap(),
            sieve,
        }
    }
}

/// Twenty odd `N` starting just above `10^d`.
fn odd_near(d: u32) -> Vec<u64> {
    (0..20).map(|i| 10u64.pow(d) + 1 + 2 * i).collect()
}

/// Twenty `N = 5 mod 24` starting just above `10^d`.
fn quinary_near(d: u32) -> Vec<u64> {
    let start = 10u64.pow(d);
    let first = start + (5 + 24 - start % 24) % 24;
    (0..20).map(|i| first + 24 * i).collect()
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.into_iter().collect();
    v.iter().sum::<f64>() / v.len() as f64
}

/// Primes up to `n` by trial division.
fn trial_primes(n: u64) -> Vec<u64> {
    (2..=n)
        .filter(|&m| (2..).take_while(|d| d * d <= m).all(|d| m % d != 0))
        .collect()
}

type Outcome = (bool, String);
type Criterion = (&'static str, fn(&Lab) -> Outcome);

fn exact_ternary(_: &Lab) -> Outcome {
    let start = Instant::now();
    let table = count_ternary_range(&SieveTable::new(2000).unwrap(), 2000).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let primes = trial_primes(2000);
    let is_prime = |m: u64| primes.binary_search(&m).is_ok();
    let mut mismatches = 0;
    for n in (1..=2000u64).step_by(2) {
        let mut brute = 0u64;
        for &p in &primes {
            for &q in &primes {
                if p + q < n && is_prime(n - p - q) {
                    brute += 1;
                }
            }
        }
        mismatches += (table.get(n).unwrap() != brute) as u32;
    }
    (
        mismatches == 0 && elapsed < 10.0,
        format!("{mismatches} mismatches over odd N <= 2000, range table built in {elapsed:.3}s"),
    )
}

fn exact_quinary(_: &Lab) -> Outcome {
    let start = Instant::now();
    let sieve = SieveTable::new(100).unwrap();
    let table = quinary_range(&sieve, 5000).unwrap();
    let singles: Vec<u64> = (0..=5000).map(|n| count_quinary_squares(&sieve, n).unwrap()).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let squares: Vec<u64> = trial_primes(70).iter().map(|p| p * p).collect();
    let mut brute = vec![0u64; 5001];
    for &a in &squares {
        for &b in &squares {
            for &c in &squares {
                for &d in &squares {
                    for &e in &squares {
                        let s = a + b + c + d + e;
                        if s <= 5000 {
                            brute[s as usize] += 1;
                        }
                    }
                }
            }
        }
    }
    let mismatches = (0..=5000)
        .filter(|&n| table.get(n as u64).unwrap() != brute[n] || singles[n] != brute[n])
        .count();
    (
        mismatches == 0 && elapsed < 60.0,
        format!("{mismatches} mismatches over N <= 5000, computed in {elapsed:.3}s"),
    )
}

fn character_parseval(_: &Lab) -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for q in 1..=100u64 {
        for d in divisors(q) {
            for a in (1..=q).filter(|&a| gcd(a, q) == 1) {
                for k in 1..=2 {
                    let (lhs, rhs) = gauss_parseval_check(q, d, a % q, k).unwrap();
                    worst = worst.max((lhs - rhs).abs() / rhs);
                    cases += 1;
                }
            }
        }
    }
    (worst <= 1e-6, format!("{cases} cases, max relative error {worst:.3e}"))
}

fn circle_parseval(lab: &Lab) -> Outcome {
    let mut worst = 0.0f64;
    let sym1 = HeckeCoeff { table: &lab.hecke, mode: CoeffMode::Sym, j: 1 };
    for n in (1..=500u64).step_by(2) {
        for coeff in [&Unit as &dyn wglab_core::PrimeCoeff, &sym1] {
            let (ex, dft) = parseval_count(&lab.sieve, n, 1, 3, coeff).unwrap();
            worst = worst.max((ex - dft).norm() / (1.0 + ex.norm()));
        }
    }
    for n in 0..=600u64 {
        for coeff in [&Unit as &dyn wglab_core::PrimeCoeff, &sym1] {
            let (ex, dft) = parseval_count(&lab.sieve, n, 2, 5, coeff).unwrap();
            worst = worst.max((ex - dft).norm() / (1.0 + ex.norm()));
        }
    }
    (worst <= 1e-6, format!("max |exact - dft|/(1 + |exact|) = {worst:.3e}"))
}

/// `tau(1..len)` from the truncated product `prod (1 - q^n)^24`.
fn tau_by_product(len: usize) -> Vec<i128> {
    let mut c = vec![0i128; len];
    c[0] = 1;
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                c[i] -= c[i - n];
            }
        }
    }
    c
}

fn hecke_suite(lab: &Lab) -> Outcome {
    let h = &lab.hecke;
    let oracle = tau_by_product(8);
    let small = [2u64, 3, 6]
        .iter()
        .all(|&n| h.tau(n).unwrap() == oracle[n as usize - 1])
        && h.tau(2).unwrap() == -24
        && h.tau(3).unwrap() == 252
        && h.tau(6).unwrap() == -6048;
    let recurrence = lab.sieve.primes_upto(200).iter().all(|&p| {
        let t = h.tau(p).unwrap();
        h.tau(p * p).unwrap() == t * t - (p as i128).pow(11)
    });
    let ramanujan = (1..=10_000u64).all(|n| h.lambda(n).unwrap().abs() <= divisor_count(n) as f64);
    let deligne = h.angles().all(|(p, _)| h.lambda(p).unwrap().abs() <= 2.0);
    (
        small && recurrence && ramanujan && deligne,
        format!(
            "oracle values {small}, p^2 recurrence {recurrence}, |lambda(n)| <= d(n) {ramanujan}, |lambda(p)| <= 2 up to 10^6 {deligne}"
        ),
    )
}

fn tensor_adjoint(lab: &Lab) -> Outcome {
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for n in [9u64, 101, 1_001, 5_001, 10_001, 20_001, 40_001, 60_001, 80_001, 100_001] {
        let count = lab.ternary.total(n).unwrap() as f64;
        for j in 0..5 {
            let t = twisted_sum(&lab.ternary, &lab.hecke, n, j, CoeffMode::Tensor).unwrap();
            let a = twisted_sum(&lab.ternary, &lab.hecke, n, j, CoeffMode::Adjoint).unwrap();
            // floating accumulation of sum c U^2 with U^2 <= (j+1)^2
            let scale = count * ((j + 1) as f64).powi(2);
            worst = worst.max((t - a - count).abs() / scale);
            pairs += 1;
        }
    }
    (
        pairs == 50 && worst <= 1e-12,
        format!("{pairs} (N, j) pairs, max |tensor - adjoint - #J| relative to #J (j+1)^2 = {worst:.3e}"),
    )
}

fn st_quadrature(i: &AngleInterval) -> f64 {
    let rule = gauss_legendre(20);
    let panels = 64;
    let h = (i.hi() - i.lo()) / panels as f64;
    (0..panels)
        .map(|k| {
            let a = i.lo() + k as f64 * h;
            gl_panel(&rule, a, a + h, |t| 2.0 / PI * t.sin().powi(2))
        })
        .sum()
}

fn sato_tate_measure(_: &Lab) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (x, y): (f64, f64) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..PI));
        let i = AngleInterval::new(x.min(y), x.max(y)).unwrap();
        worst = worst.max((st_measure(&i) - st_quadrature(&i)).abs());
    }
    let full = st_measure(&AngleInterval::full());
    let half = st_measure(&AngleInterval::new(0.0, PI / 2.0).unwrap());
    (
        worst <= 1e-10 && full == 1.0 && half == 0.5,
        format!("max |closed - quadrature| = {worst:.3e}, mu[0,pi] = {full}, mu[0,pi/2] = {half}"),
    )
}

fn smoothing_suite(_: &Lab) -> Outcome {
    const GRID: usize = 100_000;
    let mut failures = Vec::new();
    let mut worst_series = 0.0f64;
    let intervals = [(0.0, PI / 2.0), (PI / 3.0, 2.0 * PI / 3.0), (0.0, PI), (0.5, 2.5)];
    for &(lo, hi) in &intervals {
        let i = AngleInterval::new(lo, hi).unwrap();
        let delta = default_delta(100_001, &i).unwrap();
        for side in [Side::Majorant, Side::Minorant] {
            let g = SmoothingFunction::new(i, delta, 2, side).unwrap();
            let (a, b) = g.endpoints();
            let d = g.delta();
            let tag = format!("[{lo:.3}, {hi:.3}] {side:?}");
            // (1)-(3) for the circle function over one period starting at a - d/2
            for k in 0..GRID {
                let y = a - d / 2.0 + k as f64 / GRID as f64;
                let v = g.circle(y);
                let ok = if y >= a + d / 2.0 && y <= b - d / 2.0 {
                    (v - 1.0).abs() <= 1e-12
                } else if y >= b + d / 2.0 && y <= 1.0 + a - d / 2.0 {
                    v.abs() <= 1e-12
                } else {
                    (0.0..=1.0).contains(&v)
                };
                if !ok {
                    failures.push(format!("{tag}: g({y}) = {v}"));
                    break;
                }
            }
            // sandwich in theta outside the transition windows
            // transition windows are 2 pi delta wide in the angle
            let win = 2.0 * PI * d;
            for k in 0..=GRID {
                let t = PI * k as f64 / GRID as f64;
                if (t - lo).abs() < win || (t - hi).abs() < win {
                    continue;
                }
                let chi = i.contains(t) as u8 as f64;
                let v = g.eval(t);
                let ok = match side {
                    Side::Majorant => v >= chi - 1e-12,
                    Side::Minorant => v <= chi + 1e-12,
                };
                if !ok {
                    failures.push(format!("{tag}: G({t}) = {v} vs {chi}"));
                    break;
                }
            }
            // truncated Fourier series against the closed form on 10^5 points of [0, pi)
            let series = g.series_grid(2 * GRID);
            for (k, v) in series.iter().take(GRID).enumerate() {
                let t = 2.0 * PI * k as f64 / (2 * GRID) as f64;
                worst_series = worst_series.max((v - g.eval(t)).abs());
            }
            for n in 1..=g.n_max() {
                if g.a_coeffs()[n].abs() > g.coeff_bound(n) * (1.0 + 4.0 * f64::EPSILON) {
                    failures.push(format!("{tag}: |a_{n}| above bound"));
                    break;
                }
            }
            if g.tail_bound() >= TAIL_TOLERANCE {
                failures.push(format!("{tag}: tail {}", g.tail_bound()));
            }
        }
    }
    if worst_series > 1e-8 {
        failures.push(format!("series vs closed form {worst_series:.3e}"));
    }
    (
        failures.is_empty(),
        if failures.is_empty() {
            format!("8 functions, series/closed-form gap {worst_series:.3e}, tails < 1e-9")
        } else {
            failures.join("; ")
        },
    )
}

fn cancellation(lab: &Lab) -> Outcome {
    let r = |n: u64| {
        twisted_sum(&lab.ternary, &lab.hecke, n, 1, CoeffMode::Sym).unwrap().abs()
            / lab.ternary.total(n).unwrap() as f64
    };
    let w = |n: u64| {
        twisted_sum(&lab.quinary, &lab.hecke, n, 1, CoeffMode::Sym).unwrap().abs()
            / lab.quinary.total(n).unwrap() as f64
    };
    let (r3, r5) = (mean(odd_near(3).into_iter().map(r)), mean(odd_near(5).into_iter().map(r)));
    let (w4, w6) = (mean(quinary_near(4).into_iter().map(w)), mean(quinary_near(6).into_iter().map(w)));
    (
        r5 < r3 && w6 < w4,
        format!("ternary mean |r|/#J: 10^3 {r3:.4e} -> 10^5 {r5:.4e}; quinary mean |w|/#J: 10^4 {w4:.4e} -> 10^6 {w6:.4e}"),
    )
}

fn rankin_selberg(lab: &Lab) -> Outcome {
    let dev = |n: u64| {
        let t = twisted_sum(&lab.ternary, &lab.hecke, n, 1, CoeffMode::Tensor).unwrap();
        (t / lab.ternary.total(n).unwrap() as f64 - 1.0).abs()
    };
    let (d3, d5) = (mean(odd_near(3).into_iter().map(dev)), mean(odd_near(5).into_iter().map(dev)));
    (d5 < d3, format!("mean |r_tensor/#J - 1|: 10^3 {d3:.4e} -> 10^5 {d5:.4e}"))
}

fn equidistribution(lab: &Lab) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (lo, hi) in [(0.0, PI / 2.0), (PI / 3.0, 2.0 * PI / 3.0)] {
        let i = AngleInterval::new(lo, hi).unwrap();
        let mu = st_measure(&i);
        let disc = |n: u64| {
            let j = lab.ternary.total(n).unwrap() as f64;
            let ji = count_j_with_angle(&lab.ternary, &lab.hecke, n, &i).unwrap() as f64;
            (ji / j - mu).abs()
        };
        let (d3, d5) = (mean(odd_near(3).into_iter().map(disc)), mean(odd_near(5).into_iter().map(disc)));
        let cross = odd_near(5)
            .into_iter()
            .map(|n| {
                let j = lab.ternary.total(n).unwrap() as f64;
                let ji = count_j_with_angle(&lab.ternary, &lab.hecke, n, &i).unwrap() as f64;
                let pi_i = count_angles(&lab.hecke, n, &i).unwrap() as f64;
                (ji / j - pi_i / lab.sieve.pi(n).unwrap() as f64).abs()
            })
            .fold(0.0f64, f64::max);
        ok &= d5 < d3 && cross < 0.05;
        detail.push(format!(
            "[{lo:.3}, {hi:.3}] discrepancy {d3:.4e} -> {d5:.4e}, max prime-ratio gap {cross:.4e}"
        ));
    }
    (ok, detail.join("; "))
}

fn conjecture(lab: &Lab) -> Outcome {
    let m = &lab.model;
    let fixture = m.conjecture_ratio(9).unwrap();
    let conj = |d| mean(odd_near(d).into_iter().map(|n| (m.conjecture_ratio(n).unwrap() - 1.0).abs()));
    let gold = |d| {
        mean(odd_near(d).into_iter().map(|n| (m.goldbach_average_check(n).unwrap().ratio - 1.0).abs()))
    };
    let (c3, c5, g3, g5) = (conj(3), conj(5), gold(3), gold(5));
    (
        fixture == 112.0 / 90.0 && c5 < c3 && g5 < g3,
        format!(
            "N=9 ratio {fixture:.6} (112/90); mean |ratio - 1|: conjecture 10^3 {c3:.4} -> 10^5 {c5:.4}, Goldbach average 10^3 {g3:.4} -> 10^5 {g5:.4}"
        ),
    )
}

/// Observed on the first run and frozen.
const TERNARY_BAND: (f64, f64) = (0.922, 0.987);
const QUINARY_BAND: (f64, f64) = (55.0, 119.7);

fn main_term_band(lab: &Lab) -> Outcome {
    let ternary: Vec<f64> = (0..450u64)
        .map(|i| 10_001 + 200 * i)
        .map(|n| {
            lab.ternary.total(n).unwrap() as f64
                / lab.series.main_term(n, MainTermKind::TernaryIntegral).unwrap()
        })
        .collect();
    let quinary: Vec<f64> = (0..100u64)
        .map(|i| 10_013 + 24 * 413 * i)
        .filter(|&n| n <= 1_001_000)
        .map(|n| {
            lab.quinary.total(n).unwrap() as f64 / lab.series.main_term(n, MainTermKind::Quinary).unwrap()
        })
        .collect();
    let range = |v: &[f64]| {
        (
            v.iter().copied().fold(f64::INFINITY, f64::min),
            v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    let (t, q) = (range(&ternary), range(&quinary));
    let inside = |(lo, hi): (f64, f64), band: (f64, f64)| lo >= band.0 && hi <= band.1;
    (
        inside(t, TERNARY_BAND) && inside(q, QUINARY_BAND),
        format!(
            "ternary ratio in [{:.6}, {:.6}] over {} N (band {:?}); quinary ratio in [{:.6}, {:.6}] over {} N (band {:?})",
            t.0, t.1, ternary.len(), TERNARY_BAND, q.0, q.1, quinary.len(), QUINARY_BAND
        ),
    )
}

fn mean_values(lab: &Lab) -> Outcome {
    let mut worst = 0.0f64;
    for n in [101u64, 1001] {
        let m = 2 * n + 2;
        let ms = (0..m)
            .map(|j| h_sum(&lab.sieve, n, 1, Alpha::Ratio(j, m)).unwrap().norm_sqr())
            .sum::<f64>()
            / m as f64;
        worst = worst.max((ms - lab.sieve.pi(n).unwrap() as f64).abs());
    }
    let mut diag_ok = true;
    for x in [100u64, 1000, 10_000] {
        let (total, _) = count_foursquare_diag(&lab.sieve, x).unwrap();
        let pi = lab.sieve.pi(x).unwrap();
        diag_ok &= total >= 2 * pi * pi - pi;
    }
    (
        worst < 1e-8 && diag_ok,
        format!("max |mean square - pi(N)| = {worst:.3e}; diagonal lower bound holds {diag_ok}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("exact ternary counts", exact_ternary),
        ("exact quinary counts", exact_quinary),
        ("character Parseval identity", character_parseval),
        ("circle-method DFT identity", circle_parseval),
        ("Hecke suite", hecke_suite),
        ("tensor minus adjoint", tensor_adjoint),
        ("Sato-Tate measure", sato_tate_measure),
        ("smoothing functions", smoothing_suite),
        ("sym^1 cancellation trend", cancellation),
        ("Rankin-Selberg trend", rankin_selberg),
        ("angle equidistribution trend", equidistribution),
        ("independence ratio trend", conjecture),
        ("main-term bands", main_term_band),
        ("mean-value identities", mean_values),
    ];
    let start = Instant::now();
    let lab = Lab::new();
    println!("acceptance: tables built in {:.2}s (seed {SEED:#x})", start.elapsed().as_secs_f64());
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = check(&lab);
        failed += !ok as u32;
        println!(
            "{} {:>2} {name}: {detail} [{:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() as u32 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
