//! Elementary arithmetic for the circle method: Dirichlet approximation,
//! major/minor arc labels, and Dirichlet characters.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::{e_rational, mul_mod, pow_mod, two_prod};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorisation by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Number of divisors `d(n)`.
pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------
// Rational approximation

/// `alpha = a/q + offset` with `gcd(a, q) = 1`, `q <= Q` and `|offset| <= 1/(qQ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalApprox {
    pub a: u64,
    pub q: u64,
    pub offset: f64,
}

/// Largest `Q` accepted; keeps every convergent denominator exactly representable.
const MAX_DENOMINATOR: u64 = 1 << 52;

fn reduce_unit(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must be finite, got {alpha}")));
    }
    let r = alpha - alpha.floor();
    Ok(if r >= 1.0 { 0.0 } else { r })
}

/// `alpha * k - h` to double-double accuracy.
#[inline]
fn residual(alpha: f64, h: u64, k: u64) -> f64 {
    let (hi, lo) = two_prod(alpha, k as f64);
    (hi - h as f64) + lo
}

/// Continued-fraction convergents `h/k` of `alpha in [0, 1)` with `k <= max_q`.
///
/// Partial quotients are estimated in floating point and then corrected with
/// sign tests on the exact residuals `alpha*k - h`, so the list is the true
/// convergent sequence of the double `alpha`.
pub fn convergents(alpha: f64, max_q: u64) -> Vec<(u64, u64)> {
    let mut out = vec![(0u64, 1u64)];
    let (mut h0, mut k0) = (1u64, 0u64);
    let (mut h1, mut k1) = (0u64, 1u64);
    let mut r0 = -1.0f64;
    let mut r1 = alpha;
    while r1 != 0.0 {
        let est = (-r0 / r1).floor();
        if (est - 1.0) * k1 as f64 + k0 as f64 > max_q as f64 {
            break;
        }
        let mut a = est.max(1.0) as u64;
        let mut next;
        loop {
            let (h2, k2) = (a * h1 + h0, a * k1 + k0);
            next = (h2, k2, residual(alpha, h2, k2));
            let r2 = next.2;
            if r2 != 0.0 && r2.signum() == r1.signum() {
                // overshoot: crossed to the other side of alpha
                a -= 1;
            } else if r2.abs() >= r1.abs() {
                a += 1;
            } else {
                break;
            }
        }
        let (h2, k2, r2) = next;
        if k2 > max_q {
            break;
        }
        out.push((h2, k2));
        (h0, k0, h1, k1) = (h1, k1, h2, k2);
        (r0, r1) = (r1, r2);
    }
    out
}

/// Dirichlet approximation of `alpha` with denominators up to `big_q`: the
/// convergent with the largest denominator `<= big_q`.
pub fn dirichlet_approx(alpha: f64, big_q: u64) -> Result<RationalApprox> {
    if big_q == 0 || big_q > MAX_DENOMINATOR {
        return Err(Error::invalid(format!("Q must lie in [1, 2^52], got {big_q}")));
    }
    let alpha = reduce_unit(alpha)?;
    let &(a, q) = convergents(alpha, big_q).last().expect("0/1 is always present");
    Ok(RationalApprox {
        a,
        q,
        offset: alpha - a as f64 / q as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArcKind {
    /// `a` is normalised into `[0, q)`.
    Major { q: u64, a: u64 },
    Minor,
}

/// Which dissection produced the label: the primary `(P, Q)` split, or the
/// finer `(P', Q')` split applied to primary-minor points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArcLevel {
    Primary,
    Refined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArcLabel {
    pub kind: ArcKind,
    pub level: ArcLevel,
}

impl ArcLabel {
    pub fn is_major(&self) -> bool {
        matches!(self.kind, ArcKind::Major { .. })
    }
}

/// `|alpha - a/q| <= 1/(qQ)`, evaluated as `|alpha q - a| * Q <= 1`.
pub fn in_major_arc(alpha: f64, a: u64, q: u64, big_q: u64) -> bool {
    residual(alpha, a, q).abs() * big_q as f64 <= 1.0
}

fn check_pq(p: u64, big_q: u64) -> Result<()> {
    if p == 0 || 2 * p >= big_q {
        return Err(Error::invalid(format!("need 1 < 2P < Q, got P={p}, Q={big_q}")));
    }
    if big_q > MAX_DENOMINATOR {
        return Err(Error::invalid("Q too large"));
    }
    Ok(())
}

/// Label `alpha` (taken modulo 1) as lying in some `M(q, a)` with `q <= P`,
/// or on the minor arcs.
///
/// With `Q > 2P` any certifying `a/q` satisfies `|alpha - a/q| < 1/(2q^2)`, so
/// it is a convergent of `alpha`; only convergents need to be tested.
pub fn classify_arc(alpha: f64, p: u64, big_q: u64) -> Result<ArcLabel> {
    check_pq(p, big_q)?;
    let alpha = reduce_unit(alpha)?;
    let hits: Vec<(u64, u64)> = convergents(alpha, p)
        .into_iter()
        .filter(|&(a, q)| in_major_arc(alpha, a, q, big_q))
        .collect();
    // Arcs with distinct centres and q <= P < Q/2 are disjoint.
    assert!(
        hits.iter().all(|&(a, q)| (a % q, q) == (hits[0].0 % hits[0].1, hits[0].1)),
        "overlapping major arcs at alpha={alpha}: {hits:?}"
    );
    Ok(ArcLabel {
        kind: match hits.first() {
            Some(&(a, q)) => ArcKind::Major { q, a: a % q },
            None => ArcKind::Minor,
        },
        level: ArcLevel::Primary,
    })
}

/// Two-level dissection. Primary-major points keep their primary label;
/// primary-minor points are re-approximated with denominators up to `Q'`.
/// Those whose denominator exceeds `P'` form the set `n` (reported as
/// `Minor` at the refined level); the rest are labelled by their refined
/// approximation.
pub fn classify_refined(
    alpha: f64,
    p: u64,
    big_q: u64,
    p_refined: u64,
    q_refined: u64,
) -> Result<ArcLabel> {
    check_pq(p_refined, q_refined)?;
    let primary = classify_arc(alpha, p, big_q)?;
    if primary.is_major() {
        return Ok(primary);
    }
    let ra = dirichlet_approx(alpha, q_refined)?;
    let kind = if ra.q > p_refined {
        ArcKind::Minor
    } else {
        ArcKind::Major {
            q: ra.q,
            a: ra.a % ra.q,
        }
    };
    Ok(ArcLabel {
        kind,
        level: ArcLevel::Refined,
    })
}

// ---------------------------------------------------------------------------
// Dirichlet characters

/// A Dirichlet character stored as its table of values on `0..modulus`.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    /// Exponent of each cyclic factor's generator; all zero for the principal character.
    index: Vec<u64>,
    values: Vec<Complex64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.index.iter().all(|&j| j == 0)
    }
}

/// One cyclic factor of `(Z/q)^x`, seen through the residue `n mod modulus`.
struct CyclicFactor {
    modulus: u64,
    order: u64,
    /// `dlog[r]` for units `r` of `modulus`; `u64::MAX` marks non-units.
    dlog: Vec<u64>,
}

impl CyclicFactor {
    fn from_generator(modulus: u64, order: u64, gen: u64, sign_twist: bool) -> Self {
        let mut dlog = vec![u64::MAX; modulus as usize];
        let mut x = 1 % modulus;
        for j in 0..order {
            dlog[x as usize] = j;
            if sign_twist {
                dlog[((modulus - x) % modulus) as usize] = j;
            }
            x = mul_mod(x, gen, modulus);
        }
        CyclicFactor {
            modulus,
            order,
            dlog,
        }
    }

    /// The `{+1, -1}` factor of `(Z/2^e)^x` for `e >= 2`.
    fn sign_mod_power_of_two(modulus: u64) -> Self {
        let dlog = (0..modulus)
            .map(|r| match r % 4 {
                1 => 0,
                3 => 1,
                _ => u64::MAX,
            })
            .collect();
        CyclicFactor {
            modulus,
            order: 2,
            dlog,
        }
    }
}

fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = factorize(p - 1);
    (2..p)
        .find(|&g| fs.iter().all(|&(f, _)| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("every prime has a primitive root")
}

fn cyclic_factors(q: u64) -> Vec<CyclicFactor> {
    let mut out = Vec::new();
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => out.push(CyclicFactor::sign_mod_power_of_two(4)),
                _ => {
                    out.push(CyclicFactor::sign_mod_power_of_two(pe));
                    // 5 generates the residues = 1 mod 4; fold n and -n together
                    out.push(CyclicFactor::from_generator(pe, pe / 4, 5, true));
                }
            }
        } else {
            let mut g = primitive_root(p);
            if e > 1 && pow_mod(g, p - 1, p * p) == 1 {
                g += p;
            }
            out.push(CyclicFactor::from_generator(pe, pe / p * (p - 1), g, false));
        }
    }
    out
}

/// All `phi(q)` Dirichlet characters modulo `q`, principal character first.
pub fn characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    if q == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let factors = cyclic_factors(q);
    let lcm = factors.iter().fold(1u64, |l, f| l / gcd(l, f.order) * f.order);

    // dlog vector of each residue (None for non-units)
    let logs: Vec<Option<Vec<u64>>> = (0..q)
        .map(|n| {
            if gcd(n, q) != 1 {
                return None;
            }
            Some(
                factors
                    .iter()
                    .map(|f| f.dlog[(n % f.modulus) as usize])
                    .collect(),
            )
        })
        .collect();

    let count: u64 = factors.iter().map(|f| f.order).product();
    let mut out = Vec::with_capacity(count as usize);
    for flat in 0..count {
        let mut rest = flat;
        let index: Vec<u64> = factors
            .iter()
            .map(|f| {
                let j = rest % f.order;
                rest /= f.order;
                j
            })
            .collect();
        let values = logs
            .iter()
            .map(|l| match l {
                None => Complex64::new(0.0, 0.0),
                Some(l) => {
                    let num = factors
                        .iter()
                        .zip(&index)
                        .zip(l)
                        .map(|((f, &j), &x)| mul_mod(j * x % f.order, lcm / f.order, lcm))
                        .fold(0, |acc, t| (acc + t) % lcm);
                    e_rational(num, lcm)
                }
            })
            .collect();
        out.push(DirichletCharacter {
            modulus: q,
            index,
            values,
        });
    }
    Ok(out)
}

/// Parseval identity over characters modulo `m = q/d`:
/// `sum_chi |sum_{(h,m)=1} conj(chi(h)) e(a d^k h^k / q)|^2` against `phi(m)^2`.
pub fn gauss_parseval_check(q: u64, d: u64, a: u64, k: u32) -> Result<(f64, f64)> {
    if q == 0 || d == 0 || !q.is_multiple_of(d) {
        return Err(Error::invalid(format!("d={d} must divide q={q}")));
    }
    if gcd(a, q) != 1 {
        return Err(Error::invalid(format!("gcd(a={a}, q={q}) != 1")));
    }
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let m = q / d;
    let ad = mul_mod(a % q, pow_mod(d, k as u64, q), q);
    let units: Vec<u64> = (0..m).filter(|&h| gcd(h, m) == 1).collect();
    let phases: Vec<Complex64> = units
        .iter()
        .map(|&h| e_rational(mul_mod(ad, pow_mod(h, k as u64, q), q), q))
        .collect();
    let lhs = characters_mod(m)?
        .iter()
        .map(|chi| {
            units
                .iter()
                .zip(&phases)
                .map(|(&h, &ph)| chi.value(h).conj() * ph)
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum();
    let phi = units.len() as f64;
    Ok((lhs, phi * phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_arc(alpha: f64, p: u64, big_q: u64) -> ArcKind {
        let mut hits = Vec::new();
        for q in 1..=p {
            for a in 0..=q {
                if gcd(a, q) == 1 && in_major_arc(alpha, a, q, big_q) {
                    hits.push((q, a % q));
                }
            }
        }
        hits.dedup();
        assert!(hits.len() <= 1, "arcs overlap: {hits:?}");
        hits.first()
            .map_or(ArcKind::Minor, |&(q, a)| ArcKind::Major { q, a })
    }

    #[test]
    fn arithmetic_functions() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(1), 1);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn approx_examples() {
        let r = dirichlet_approx(1.0 / 3.0, 10).unwrap();
        assert_eq!((r.a, r.q, r.offset), (1, 3, 0.0));

        let r = dirichlet_approx(0.0, 100).unwrap();
        assert_eq!((r.a, r.q, r.offset), (0, 1, 0.0));

        let alpha = 2f64.sqrt() - 1.0;
        let r = dirichlet_approx(alpha, 12).unwrap();
        assert_eq!((r.a, r.q), (5, 12));
        assert!((r.offset - (alpha - 5.0 / 12.0)).abs() < 1e-15);
        assert!((r.offset + 0.0024531).abs() < 1e-6);
    }

    #[test]
    fn sqrt2_exhaustive_search() {
        // Every (a, q) with q <= 12 meeting |alpha - a/q| <= 1/(12 q): 5/12 is
        // among them and has the largest q.
        let alpha = 2f64.sqrt() - 1.0;
        let feasible: Vec<(u64, u64)> = (1..=12u64)
            .flat_map(|q| (0..=q).map(move |a| (a, q)))
            .filter(|&(a, q)| gcd(a, q) == 1 && (alpha - a as f64 / q as f64).abs() <= 1.0 / (12.0 * q as f64))
            .collect();
        assert!(feasible.contains(&(5, 12)));
        assert_eq!(feasible.iter().map(|f| f.1).max(), Some(12));
    }

    #[test]
    fn approx_rejects_bad_q() {
        assert!(dirichlet_approx(0.3, 0).is_err());
        assert!(dirichlet_approx(f64::NAN, 10).is_err());
    }

    #[test]
    fn convergents_of_golden_ratio_are_fibonacci() {
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let c = convergents(phi, 1000);
        let dens: Vec<u64> = c.iter().map(|&(_, k)| k).collect();
        assert_eq!(dens, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987]);
    }

    #[test]
    fn arc_examples() {
        let l = classify_arc(1.0 / 3.0, 10, 1000).unwrap();
        assert_eq!(l.kind, ArcKind::Major { q: 3, a: 1 });
        assert_eq!(l.level, ArcLevel::Primary);

        let golden = (1.0 + 5f64.sqrt()) / 2.0 - 1.0;
        assert_eq!(classify_arc(golden, 5, 50).unwrap().kind, ArcKind::Minor);
        assert_eq!(brute_force_arc(golden, 5, 50), ArcKind::Minor);

        let l = classify_arc(0.5 + 1.0 / 2e6, 10, 10_000).unwrap();
        assert_eq!(l.kind, ArcKind::Major { q: 2, a: 1 });

        assert_eq!(classify_arc(0.0, 3, 10).unwrap().kind, ArcKind::Major { q: 1, a: 0 });
        assert_eq!(classify_arc(0.99, 3, 10).unwrap().kind, ArcKind::Major { q: 1, a: 0 });
    }

    #[test]
    fn arc_parameter_order() {
        assert!(classify_arc(0.1, 5, 10).is_err());
        assert!(classify_arc(0.1, 0, 10).is_err());
        assert!(classify_arc(0.1, 4, 10).is_ok());
    }

    #[test]
    fn classify_matches_brute_force_on_grid() {
        for &(p, big_q) in &[(5u64, 50u64), (10, 1000), (31, 100), (7, 15)] {
            for j in 0..10_000u64 {
                let alpha = j as f64 / 10_000.0 + 1.234e-7;
                let fast = classify_arc(alpha, p, big_q).unwrap().kind;
                assert_eq!(fast, brute_force_arc(alpha - alpha.floor(), p, big_q), "alpha={alpha} P={p} Q={big_q}");
            }
        }
    }

    #[test]
    fn refined_level_golden_ratio() {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let n = 1_000_000u64;
        let (p, big_q) = (20u64, n / 20);
        let (pr, qr) = (100u64, n / 100);
        let label = classify_refined(golden, p, big_q, pr, qr).unwrap();
        let approx = dirichlet_approx(golden, qr).unwrap();
        assert_eq!(label.level, ArcLevel::Refined);
        // Fibonacci denominators up to 10^4 reach 6765 > P'
        assert!(approx.q > pr);
        assert_eq!(label.kind, ArcKind::Minor);

        let label = classify_refined(golden, p, big_q, 10_000, 100).unwrap_err();
        assert!(matches!(label, Error::InvalidArgument(_)));
    }

    #[test]
    fn character_counts() {
        let c1 = characters_mod(1).unwrap();
        assert_eq!(c1.len(), 1);
        assert_eq!(c1[0].value(0), Complex64::new(1.0, 0.0));
        assert_eq!(c1[0].value(17), Complex64::new(1.0, 0.0));

        let c3 = characters_mod(3).unwrap();
        assert_eq!(c3.len(), 2);
        assert!(c3[0].is_principal());
        assert!((c3[1].value(2) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        let c8 = characters_mod(8).unwrap();
        assert_eq!(c8.len(), 4);
        for chi in &c8 {
            for v in chi.values() {
                assert!(v.im.abs() < 1e-12);
            }
        }
        assert!(characters_mod(0).is_err());
    }

    #[test]
    fn characters_are_homomorphisms() {
        for q in 1..=60u64 {
            let chars = characters_mod(q).unwrap();
            assert_eq!(chars.len() as u64, euler_phi(q));
            for chi in &chars {
                assert!((chi.value(1) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
                for m in 0..q {
                    for n in 0..q {
                        let lhs = chi.value(m * n);
                        let rhs = chi.value(m) * chi.value(n);
                        assert!((lhs - rhs).norm() < 1e-10, "q={q}");
                    }
                    let v = chi.value(m);
                    if gcd(m, q) == 1 {
                        assert!((v.norm() - 1.0).abs() < 1e-12);
                    } else {
                        assert_eq!(v.norm(), 0.0);
                    }
                }
                // closed under conjugation
                assert!(chars.iter().any(|psi| (0..q).all(|n| (psi.value(n) - chi.value(n).conj()).norm() < 1e-10)));
            }
        }
    }

    #[test]
    fn second_orthogonality() {
        for q in 1..=60u64 {
            let chars = characters_mod(q).unwrap();
            let phi = euler_phi(q) as f64;
            for m in 0..q {
                for n in 0..q {
                    let s: Complex64 = chars.iter().map(|c| c.value(m) * c.value(n).conj()).sum();
                    let expect = if m == n && gcd(m, q) == 1 { phi } else { 0.0 };
                    assert!((s - Complex64::new(expect, 0.0)).norm() < 1e-10, "q={q} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn first_orthogonality() {
        for q in 1..=60u64 {
            let chars = characters_mod(q).unwrap();
            let phi = euler_phi(q) as f64;
            for (i, a) in chars.iter().enumerate() {
                for (j, b) in chars.iter().enumerate() {
                    let s: Complex64 = (0..q).map(|n| a.value(n) * b.value(n).conj()).sum();
                    let expect = if i == j { phi } else { 0.0 };
                    assert!((s - Complex64::new(expect, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn parseval_examples() {
        let (l, r) = gauss_parseval_check(5, 1, 1, 1).unwrap();
        assert_eq!(r, 16.0);
        assert!((l - 16.0).abs() < 1e-9);
        let (l, r) = gauss_parseval_check(12, 3, 5, 2).unwrap();
        assert_eq!(r, 4.0);
        assert!((l - 4.0).abs() < 1e-9);
        let (l, r) = gauss_parseval_check(9, 9, 1, 1).unwrap();
        assert_eq!((l, r), (1.0, 1.0));
        assert!(gauss_parseval_check(12, 3, 2, 1).is_err());
        assert!(gauss_parseval_check(12, 5, 1, 1).is_err());
    }

    #[test]
    fn parseval_brute_force_without_characters() {
        // Direct double sum over h1 = h2 after character orthogonality.
        let (q, d, a, k) = (12u64, 3u64, 5u64, 2u32);
        let m = q / d;
        let count = (0..m).filter(|&h| gcd(h, m) == 1).count() as f64;
        let (lhs, _) = gauss_parseval_check(q, d, a, k).unwrap();
        assert!((lhs - count * count).abs() < 1e-9);
    }
}
