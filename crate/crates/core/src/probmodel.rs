//! The uniform probability space of ordered compositions `N = n_1 + n_2 + n_3`
//! and the events "first part prime" (`A`) and "last two parts prime" (`A'`).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::repcount::ComplementTable;
use crate::sieve::SieveTable;
use crate::singular::SingularSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EventCounts {
    pub n: u64,
    /// `(N^2 - 3N + 2)/2` compositions into three positive parts.
    pub omega_size: u64,
    pub count_a: u64,
    pub count_aprime: u64,
    /// `#J_{1,3}(N)`
    pub count_both: u64,
}

impl EventCounts {
    pub fn p_a(&self) -> f64 {
        self.count_a as f64 / self.omega_size as f64
    }

    pub fn p_aprime(&self) -> f64 {
        self.count_aprime as f64 / self.omega_size as f64
    }

    pub fn p_both(&self) -> f64 {
        self.count_both as f64 / self.omega_size as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoldbachAverage {
    /// `sum_{n=2}^{(N-5)/2} #J_{1,2}(2n)`
    pub lhs: u64,
    /// `G_{1,3}(N) N^2 / (2 log^2 N)`
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjectureRow {
    pub counts: EventCounts,
    pub ratio: f64,
    pub goldbach: GoldbachAverage,
}

pub struct ProbModel {
    sieve: SieveTable,
    table: ComplementTable,
    /// `pair_prefix[m] = sum_{i <= m} #J_{1,2}(i)`
    pair_prefix: Vec<u64>,
    /// `even_prefix[m] = sum_{4 <= 2i <= m} #J_{1,2}(2i)`
    even_prefix: Vec<u64>,
    series: SingularSeries,
}

impl ProbModel {
    pub fn new(limit: u64, series_cutoff: u64) -> Result<Self> {
        let sieve = SieveTable::new(limit)?;
        let table = ComplementTable::ternary(&sieve, limit)?;
        let mut pair_prefix = Vec::with_capacity(limit as usize + 1);
        let mut even_prefix = Vec::with_capacity(limit as usize + 1);
        let (mut all, mut even) = (0u64, 0u64);
        for m in 0..=limit {
            let g = table.rest(m)?;
            all += g;
            if m % 2 == 0 {
                even += g;
            }
            pair_prefix.push(all);
            even_prefix.push(even);
        }
        Ok(ProbModel {
            sieve,
            table,
            pair_prefix,
            even_prefix,
            series: SingularSeries::new(series_cutoff)?,
        })
    }

    pub fn limit(&self) -> u64 {
        self.table.limit()
    }

    fn check(&self, n: u64) -> Result<()> {
        if n < 9 || n.is_multiple_of(2) {
            return Err(Error::invalid(format!("N must be odd and at least 9, got {n}")));
        }
        if n > self.limit() {
            return Err(Error::range("N", n, self.limit()));
        }
        Ok(())
    }

    pub fn event_counts(&self, n: u64) -> Result<EventCounts> {
        self.check(n)?;
        let count_a = self
            .sieve
            .primes_upto(n - 2)
            .iter()
            .map(|&p| n - p - 1)
            .sum();
        // n_1 in [2, N - 4], i.e. p_2 + p_3 = m for m in [4, N - 2]
        let count_aprime = self.pair_prefix[(n - 2) as usize] - self.pair_prefix[3];
        Ok(EventCounts {
            n,
            omega_size: (n - 1) * (n - 2) / 2,
            count_a,
            count_aprime,
            count_both: self.table.total(n)?,
        })
    }

    /// `P(A and A') / (P(A) P(A'))`.
    pub fn conjecture_ratio(&self, n: u64) -> Result<f64> {
        ratio_of(&self.event_counts(n)?)
    }

    pub fn goldbach_average_check(&self, n: u64) -> Result<GoldbachAverage> {
        self.check(n)?;
        let lhs = self.even_prefix[(n - 5) as usize];
        let nf = n as f64;
        let rhs = self.series.ternary(n)?.value * nf * nf / (2.0 * nf.ln().powi(2));
        Ok(GoldbachAverage {
            lhs,
            rhs,
            ratio: lhs as f64 / rhs,
        })
    }

    pub fn report(&self, n_list: &[u64]) -> Result<Vec<ConjectureRow>> {
        n_list
            .par_iter()
            .map(|&n| {
                let counts = self.event_counts(n)?;
                Ok(ConjectureRow {
                    counts,
                    ratio: ratio_of(&counts)?,
                    goldbach: self.goldbach_average_check(n)?,
                })
            })
            .collect()
    }
}

fn ratio_of(c: &EventCounts) -> Result<f64> {
    if c.count_a == 0 || c.count_aprime == 0 {
        return Err(Error::Undefined(format!("P(A) P(A') = 0 at N = {}", c.n)));
    }
    Ok(c.count_both as f64 * c.omega_size as f64 / (c.count_a as f64 * c.count_aprime as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcount::count_goldbach2;
    use std::sync::OnceLock;

    fn model() -> &'static ProbModel {
        static M: OnceLock<ProbModel> = OnceLock::new();
        M.get_or_init(|| ProbModel::new(2000, 1000).unwrap())
    }

    #[test]
    fn n9_fixture() {
        let m = model();
        let c = m.event_counts(9).unwrap();
        assert_eq!(
            c,
            EventCounts {
                n: 9,
                omega_size: 28,
                count_a: 15,
                count_aprime: 6,
                count_both: 4
            }
        );
        assert_eq!(m.conjecture_ratio(9).unwrap(), 112.0 / 90.0);
    }

    #[test]
    fn goldbach_average_small() {
        let m = model();
        let g = m.goldbach_average_check(11).unwrap();
        assert_eq!(g.lhs, 2);
        let s = SingularSeries::new(1000).unwrap();
        let rhs = s.ternary(11).unwrap().value * 121.0 / (2.0 * 11f64.ln().powi(2));
        assert!((g.rhs - rhs).abs() < 1e-12 * rhs);
    }

    /// Enumerate Omega directly.
    fn brute(s: &SieveTable, n: u64) -> (u64, u64, u64, u64) {
        let (mut omega, mut a, mut ap, mut both) = (0, 0, 0, 0);
        let prime = |x: u64| s.is_prime(x).unwrap();
        for n1 in 1..n {
            for n2 in 1..n - n1 {
                let n3 = n - n1 - n2;
                omega += 1;
                let in_a = prime(n1);
                let in_ap = n1 >= 2 && prime(n2) && prime(n3);
                a += in_a as u64;
                ap += in_ap as u64;
                both += (in_a && in_ap) as u64;
            }
        }
        (omega, a, ap, both)
    }

    #[test]
    fn closed_forms_match_enumeration() {
        let m = model();
        for n in (9..=199).step_by(2) {
            let c = m.event_counts(n).unwrap();
            assert_eq!(brute(&m.sieve, n), (c.omega_size, c.count_a, c.count_aprime, c.count_both), "N={n}");
            for p in [c.p_a(), c.p_aprime(), c.p_both()] {
                assert!((0.0..=1.0).contains(&p));
            }
            assert!(c.p_both() <= c.p_a() && c.p_both() <= c.p_aprime());
            let direct: u64 = (2..=(n - 5) / 2).map(|k| count_goldbach2(&m.sieve, 2 * k).unwrap()).sum();
            assert_eq!(m.goldbach_average_check(n).unwrap().lhs, direct);
        }
    }

    #[test]
    fn errors() {
        let m = model();
        assert!(matches!(m.event_counts(10), Err(Error::InvalidArgument(_))));
        assert!(matches!(m.event_counts(7), Err(Error::InvalidArgument(_))));
        assert!(m.event_counts(2001).unwrap_err().is_out_of_range());
        let zero = EventCounts { n: 9, omega_size: 28, count_a: 0, count_aprime: 6, count_both: 0 };
        assert!(matches!(ratio_of(&zero), Err(Error::Undefined(_))));
        let empty = EventCounts { count_both: 0, ..m.event_counts(9).unwrap() };
        assert_eq!(ratio_of(&empty).unwrap(), 0.0);
    }

    #[test]
    fn report_rows_in_order() {
        let m = model();
        let rows = m.report(&[1001, 9, 501]).unwrap();
        assert_eq!(rows.iter().map(|r| r.counts.n).collect::<Vec<_>>(), vec![1001, 9, 501]);
    }
}
