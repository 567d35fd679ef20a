//! Benchmark workloads for the `wglab` kernels; see `benches/kernels.rs`.

/// Problem sizes shared by the benchmarks so runs stay comparable.
pub mod sizes {
    pub const SIEVE_LIMIT: u64 = 10_000_000;
    pub const TERNARY_RANGE: u64 = 20_000;
    pub const HECKE_LIMIT: u64 = 100_000;
    pub const EXPSUM_N: u64 = 1_000_000;
    pub const EXPSUM_GRID: u64 = 256;
}
