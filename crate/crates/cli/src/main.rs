mod config;
mod report;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use thiserror::Error;

use wglab_core::arith::{classify_arc, dirichlet_approx};
use wglab_core::expsum::{arc_experiment, hypothesis_arcs};
use wglab_core::repcount::{count_range, count_single};
use wglab_core::satotate::{equidistribution_report, twisted_sum};
use wglab_core::sieve::iroot;
use wglab_core::{
    AngleInterval, ArcKind, BoundParams, CoeffMode, ComplementTable, CountKind, HeckeCoeff,
    HeckeTable, PrimeCoeff, ProbModel, SieveTable, SingularSeries, Unit,
};

use config::{Cli, CoeffArg, Command, CountArg, ExperimentConfig, Format, ModeArg, SeriesArg};
use report::{Cell, Report};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] wglab_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(wglab_core::Error::InvalidArgument(_)) | CliError::Usage(_) => 2,
            CliError::Core(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

type Result<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cli(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wglab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run_cli(cli: Cli) -> Result<()> {
    let config = match cli.command {
        Command::Replay { config } => {
            let text = fs::read_to_string(&config).map_err(io_err(&config))?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
            // output locations given on the command line win
            if cli.global.out.is_some() {
                cfg.global.out = cli.global.out;
            }
            cfg.global.config_out = cli.global.config_out;
            cfg
        }
        command => ExperimentConfig { command, global: cli.global },
    };
    run(&config)
}

fn run(config: &ExperimentConfig) -> Result<()> {
    let g = &config.global;
    if !(0.5..1.0).contains(&g.delta_hypothesis) {
        return Err(CliError::Usage(format!(
            "--delta-hypothesis must lie in [0.5, 1), got {}",
            g.delta_hypothesis
        )));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = pool.install(|| build_report(config))?;

    let doc = match (g.format, &g.out) {
        (Format::Json, _) => report.to_json(config),
        (Format::Csv, Some(_)) => report.to_csv(config),
        (Format::Csv, None) => report.to_csv_rows(),
    };
    match &g.out {
        Some(path) => report::write_atomic(path, &doc).map_err(io_err(path))?,
        None => print!("{doc}"),
    }
    if let Some(path) = &g.config_out {
        report::write_atomic(path, &report::to_pretty_json(config)).map_err(io_err(path))?;
    }
    Ok(())
}

fn bound_params(config: &ExperimentConfig) -> BoundParams {
    BoundParams {
        epsilon1: config.global.epsilon1,
        c_prime: config.global.c_prime,
        c_double_prime: config.global.c_double_prime,
    }
}

fn read_n_list(path: &Path) -> Result<Vec<u64>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let list = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<u64>()
                .map_err(|e| CliError::Usage(format!("{}: {l:?}: {e}", path.display())))
        })
        .collect::<Result<Vec<_>>>()?;
    if list.is_empty() {
        return Err(CliError::Usage(format!("{}: no values", path.display())));
    }
    Ok(list)
}

fn ternary_or_quinary(k: u32) -> Result<CountKind> {
    match k {
        1 => Ok(CountKind::Ternary),
        2 => Ok(CountKind::QuinarySquares),
        _ => Err(CliError::Usage(format!("--k must be 1 or 2, got {k}"))),
    }
}

fn arc_params(n: u64, k: u32, p: Option<u64>, q: Option<u64>, delta: f64) -> Result<(u64, u64)> {
    match (p, q) {
        (Some(p), Some(q)) => Ok((p, q)),
        _ => Ok(hypothesis_arcs(n, k, delta)?),
    }
}

fn arc_cells(kind: ArcKind) -> [Cell; 3] {
    match kind {
        ArcKind::Major { q, a } => ["major".into(), q.into(), a.into()],
        ArcKind::Minor => ["minor".into(), Cell::Empty, Cell::Empty],
    }
}

fn build_report(config: &ExperimentConfig) -> Result<Report> {
    match &config.command {
        Command::Sieve { limit } => {
            let sieve = SieveTable::new(*limit)?;
            let mut r = Report::new(&["p"]);
            for &p in sieve.primes() {
                r.push(vec![p.into()]);
            }
            Ok(r)
        }
        Command::Count { kind, n, range } => {
            let kind = match kind {
                CountArg::Ternary => CountKind::Ternary,
                CountArg::Goldbach2 => CountKind::Goldbach2,
                CountArg::Quinary => CountKind::QuinarySquares,
            };
            let top = range.or(*n).expect("clap requires --N or --range");
            let sieve = SieveTable::new(top.max(2))?;
            let mut r = Report::new(&["N", "count"]);
            match range {
                Some(x) => {
                    let table = count_range(&sieve, kind, *x)?;
                    for (m, &c) in table.counts().iter().enumerate() {
                        r.push(vec![(m as u64).into(), c.into()]);
                    }
                }
                None => {
                    let n = n.expect("checked above");
                    r.push(vec![n.into(), count_single(&sieve, kind, n)?.into()]);
                }
            }
            Ok(r)
        }
        Command::Arcs { n, k, p, q, grid } => {
            let (p, q) = arc_params(*n, *k, *p, *q, config.global.delta_hypothesis)?;
            if *grid < 2 {
                return Err(CliError::Usage("--grid must be at least 2".into()));
            }
            let rows = (0..*grid)
                .into_par_iter()
                .map(|j| {
                    let alpha = j as f64 / *grid as f64;
                    let label = classify_arc(alpha, p, q)?;
                    let approx = dirichlet_approx(alpha, q)?;
                    let [kind, q, a] = arc_cells(label.kind);
                    Ok(vec![alpha.into(), kind, q, a, approx.offset.into()])
                })
                .collect::<std::result::Result<Vec<_>, wglab_core::Error>>()?;
            let mut r = Report::new(&["alpha", "kind", "q", "a", "offset"]);
            rows.into_iter().for_each(|row| r.push(row));
            Ok(r)
        }
        Command::Expsum { n, k, p, q, grid, coeff } => {
            let arcs = arc_params(*n, *k, *p, *q, config.global.delta_hypothesis)?;
            let sieve = SieveTable::new(iroot(*n, *k).max(2))?;
            let hecke;
            let weight: &dyn PrimeCoeff = match coeff {
                CoeffArg::One => &Unit,
                CoeffArg::Sym1 => {
                    hecke = HeckeTable::new(iroot(*n, *k).max(2))?;
                    &HeckeCoeff { table: &hecke, mode: CoeffMode::Sym, j: 1 }
                }
            };
            let samples = arc_experiment(&sieve, *n, *k, arcs, *grid, weight, &bound_params(config))?;
            let mut r = Report::new(&[
                "alpha", "re", "im", "abs", "arckind", "q", "a", "vino", "harman", "ren",
            ]);
            for s in samples {
                let [kind, q, a] = arc_cells(s.arc.kind);
                r.push(vec![
                    s.alpha.into(),
                    s.value.re.into(),
                    s.value.im.into(),
                    s.value.norm().into(),
                    kind,
                    q,
                    a,
                    s.bounds.vinogradov.into(),
                    s.bounds.harman.into(),
                    s.bounds.ren.into(),
                ]);
            }
            Ok(r)
        }
        Command::Tau { limit } => {
            let hecke = HeckeTable::new(*limit)?;
            let sieve = hecke.sieve();
            let mut r = Report::new(&["n", "tau", "lambda", "theta"]);
            for m in 1..=*limit {
                let theta = if sieve.is_prime(m)? { Some(hecke.theta(m)?) } else { None };
                r.push(vec![m.into(), hecke.tau(m)?.into(), hecke.lambda(m)?.into(), theta.into()]);
            }
            Ok(r)
        }
        Command::Satotate { n_list, interval } => {
            let list = read_n_list(n_list)?;
            let i = AngleInterval::new(interval.0, interval.1)?;
            let top = *list.iter().max().unwrap();
            let sieve = SieveTable::new(top.max(2))?;
            let table = ComplementTable::ternary(&sieve, top)?;
            let hecke = HeckeTable::new(top.max(2))?;
            let mut r = Report::new(&[
                "N", "J", "J_I", "ratio", "prime_ratio", "mu_st", "discrepancy",
            ]);
            for row in equidistribution_report(&table, &hecke, &list, &i)? {
                r.push(vec![
                    row.n.into(),
                    row.j_count.into(),
                    row.j_angle.into(),
                    row.ratio.into(),
                    row.prime_ratio.into(),
                    row.mu_st.into(),
                    row.discrepancy.into(),
                ]);
            }
            Ok(r)
        }
        Command::Twisted { n, k, j, mode } => {
            let kind = ternary_or_quinary(*k)?;
            let sieve = SieveTable::new((*n).max(2))?;
            let table = ComplementTable::new(&sieve, kind, *n)?;
            let hecke = HeckeTable::new(iroot(*n, *k).max(2))?;
            let (mode, name) = match mode {
                ModeArg::Sym => (CoeffMode::Sym, "sym"),
                ModeArg::Tensor => (CoeffMode::Tensor, "tensor"),
                ModeArg::Adjoint => (CoeffMode::Adjoint, "adjoint"),
            };
            let value = twisted_sum(&table, &hecke, *n, *j, mode)?;
            let mut r = Report::new(&["N", "k", "j", "mode", "value", "count"]);
            r.push(vec![
                (*n).into(),
                u64::from(*k).into(),
                u64::from(*j).into(),
                name.into(),
                value.into(),
                table.total(*n)?.into(),
            ]);
            Ok(r)
        }
        Command::Singular { kind, n, cutoff } => {
            let series = SingularSeries::new(*cutoff)?;
            let v = match kind {
                SeriesArg::Ternary => series.ternary(*n)?,
                SeriesArg::Binary => series.hl_binary(*n)?,
                SeriesArg::Quinary => series.quinary(*n)?,
            };
            let mut r = Report::new(&["N", "value", "tail_bound", "cutoff"]);
            r.push(vec![(*n).into(), v.value.into(), v.tail_bound.into(), v.cutoff.into()]);
            Ok(r)
        }
        Command::Conjecture { n_list, cutoff } => {
            let list = read_n_list(n_list)?;
            let model = ProbModel::new(*list.iter().max().unwrap(), *cutoff)?;
            let mut r = Report::new(&[
                "N", "P_A", "P_Aprime", "P_both", "ratio", "goldbach_lhs", "goldbach_rhs",
            ]);
            for row in model.report(&list)? {
                let c = row.counts;
                r.push(vec![
                    c.n.into(),
                    c.p_a().into(),
                    c.p_aprime().into(),
                    c.p_both().into(),
                    row.ratio.into(),
                    row.goldbach.lhs.into(),
                    row.goldbach.rhs.into(),
                ]);
            }
            Ok(r)
        }
        Command::Replay { .. } => Err(CliError::Usage("a replayed config cannot replay".into())),
    }
}
