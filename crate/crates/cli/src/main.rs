//! `srk`: rational Krylov evaluation of Stieltjes matrix functions from the
//! command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use stieltjes_rk::acceptance::{run_criterion, CRITERIA};
use stieltjes_rk::error::Error;
use stieltjes_rk::experiments::{
    emit_bounds, fmt17, laplace_shift, run_experiment, seeded_factors, seeded_unit_block, trace_records, write_csv,
    write_gnuplot, ExperimentConfig, ExperimentId, TRACE_HEADER,
};
use stieltjes_rk::functions::StieltjesFunction;
use stieltjes_rk::kronfun::{
    kron_oracle, kron_trace, singular_decay_report, KronStrategy, KronTraceConfig, KroneckerProblem,
};
use stieltjes_rk::operators::{read_dense_matrix, read_operator, HermitianOperator, IntervalMode, SpectralInterval};
use stieltjes_rk::poles::bounds::GammaChoice;
use stieltjes_rk::poles::{cauchy_kron_poles, format_poles, read_pole_file};
use stieltjes_rk::rk::driver::strategy_poles;
use stieltjes_rk::rk::{funv_driver, DriverConfig, Strategy, TraceRow};

#[derive(Parser, Debug)]
#[command(name = "srk", version, about = "Rational Krylov methods for Stieltjes matrix functions")]
struct Cli {
    /// Seed for random vectors and factors.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest order diagonalized densely for intervals and oracles.
    #[arg(long, global = true, default_value_t = stieltjes_rk::operators::DEFAULT_DENSE_LIMIT)]
    dense_limit: usize,
    /// Also write a gnuplot script next to each CSV.
    #[arg(long, global = true)]
    gnuplot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Approximate f(A)v and trace the convergence.
    Funv(FunvArgs),
    /// Approximate f(I⊗A − Bᵀ⊗I) vec(U Vᵀ) in low-rank form.
    Kronfun(KronArgs),
    /// Print a pole sequence, one pole per line.
    Poles(PolesArgs),
    /// Rerun one of the convergence studies.
    Experiment(ExperimentArgs),
    /// Run the acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args, Debug)]
struct FunvArgs {
    /// MatrixMarket or diagonal file, or `tridiag:n` for tridiag(−1, 2, −1).
    #[arg(long)]
    matrix: String,
    /// e.g. `power:-0.5`, `phi:1`, `lambertw`, `inverse`.
    #[arg(long)]
    function: String,
    /// Strategy name or a pole file.
    #[arg(long, default_value = "eds")]
    poles: String,
    /// `a,b` or `auto`.
    #[arg(long, default_value = "auto")]
    interval: String,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    maxiter: usize,
    /// Checkpoint stride for non-nested strategies.
    #[arg(long, default_value_t = 4)]
    stride: usize,
    /// Pole shift η for Laplace-type strategies; `auto` uses a/2 when f(0⁺) = ∞.
    #[arg(long, default_value = "auto")]
    shift: String,
    /// Starting vector as an `n × 1` MatrixMarket file; seeded random otherwise.
    #[arg(long)]
    vector: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    oracle: Switch,
    /// Trace CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the final iterate as a one-column CSV.
    #[arg(long)]
    result: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct KronArgs {
    #[arg(long)]
    a: String,
    /// The SPD operator −B.
    #[arg(long)]
    b: String,
    /// Rank of the seeded random right-hand side.
    #[arg(long, default_value_t = 1, conflicts_with_all = ["ufile", "vfile"])]
    rank: usize,
    #[arg(long, requires = "vfile")]
    ufile: Option<PathBuf>,
    #[arg(long, requires = "ufile")]
    vfile: Option<PathBuf>,
    #[arg(long)]
    function: String,
    /// `laplace`, `cauchy-kron`, `eds`, `extended`, `polynomial` or a pole file.
    #[arg(long, default_value = "eds")]
    poles: String,
    #[arg(long, default_value_t = 20)]
    ell: usize,
    /// `a,b` enclosing the spectra of A and −B, or `auto`.
    #[arg(long, default_value = "auto")]
    interval: String,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    oracle: Switch,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Singular values of X with their decay bounds.
    #[arg(long)]
    svd_report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PolesArgs {
    /// `zolotarev`, `cauchy`, `cauchy-kron`, `eds-laplace`, `eds-cauchy`, `extended`, `polynomial`.
    strategy: String,
    /// `a,b`.
    #[arg(long)]
    interval: Option<String>,
    /// Take the interval from this operator instead.
    #[arg(long, conflicts_with = "interval")]
    matrix: Option<String>,
    #[arg(long, default_value_t = 10)]
    len: usize,
    /// Shift η applied to Laplace-type poles.
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// One of fig-lapl-1d, fig-cauchy-1d, fig-cauchy-1d-eig, fig-cauchy-1d-funcs,
    /// table-times, fig-lapl-2d, fig-cauchy-2d.
    id: ExperimentId,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    max_ell: Option<usize>,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Only the a-priori bound curves.
    #[arg(long)]
    bounds_only: bool,
}

#[derive(Args, Debug)]
struct AcceptArgs {
    /// Run only these criteria.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=11))]
    criterion: Vec<u8>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let res = match &cli.command {
        Command::Funv(a) => funv(&cli, a),
        Command::Kronfun(a) => kronfun(&cli, a),
        Command::Poles(a) => poles(a),
        Command::Experiment(a) => experiment(&cli, a),
        Command::Accept(a) => return accept(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_operator(src: &str) -> anyhow::Result<HermitianOperator> {
    if let Some(n) = src.strip_prefix("tridiag:") {
        let n: usize = n.parse().with_context(|| format!("bad order in `{src}`"))?;
        return Ok(HermitianOperator::laplacian_1d(n, 1.0)?);
    }
    read_operator(src).with_context(|| format!("reading {src}"))
}

fn parse_pair(s: &str) -> anyhow::Result<(f64, f64)> {
    let (a, b) = s.split_once(',').with_context(|| format!("expected `a,b`, got `{s}`"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

/// Exact extremes when affordable, Gershgorin discs otherwise.
fn resolve_interval(op: &HermitianOperator, spec: &str, dense_limit: usize) -> anyhow::Result<SpectralInterval> {
    if spec != "auto" {
        let (a, b) = parse_pair(spec)?;
        return Ok(SpectralInterval::new(a, b)?);
    }
    match op.spectral_interval(IntervalMode::ExactSmall { dense_limit }) {
        Err(Error::DenseLimit { .. }) => {
            eprintln!("note: order {} exceeds the dense limit; using Gershgorin bounds", op.order());
            Ok(op.spectral_interval(IntervalMode::Gershgorin { floor: None })?)
        }
        r => Ok(r?),
    }
}

fn write_trace(out: Option<&Path>, rows: &[TraceRow], gnuplot: bool, title: &str) -> anyhow::Result<()> {
    let recs = trace_records(rows);
    match out {
        Some(path) => {
            write_csv(path, &TRACE_HEADER, &recs)?;
            if gnuplot {
                let series = [
                    (path.to_path_buf(), "est_error".to_string(), 2),
                    (path.to_path_buf(), "true_error".to_string(), 3),
                    (path.to_path_buf(), "bound".to_string(), 4),
                ];
                write_gnuplot(&path.with_extension("gp"), title, &series)?;
            }
        }
        None => {
            println!("{}", TRACE_HEADER.join(","));
            for r in recs {
                println!("{}", r.join(","));
            }
        }
    }
    Ok(())
}

fn funv(cli: &Cli, args: &FunvArgs) -> anyhow::Result<()> {
    let op = load_operator(&args.matrix)?;
    let f = StieltjesFunction::parse(&args.function)?;
    let interval = resolve_interval(&op, &args.interval, cli.dense_limit)?;
    let strategy = if Path::new(&args.poles).is_file() {
        Strategy::Custom(read_pole_file(&args.poles)?)
    } else {
        Strategy::parse(&args.poles, &f)?
    };
    let v = match &args.vector {
        Some(p) => read_dense_matrix(p)?,
        None => seeded_unit_block(op.order(), 1, cli.seed),
    };
    let mut cfg = DriverConfig::new(interval);
    cfg.tol = args.tol;
    cfg.maxiter = args.maxiter;
    cfg.stride = args.stride;
    cfg.shift = match (args.shift.as_str(), &strategy) {
        ("auto", Strategy::Zolotarev | Strategy::EdsLaplace) => laplace_shift(&f, &interval),
        ("auto", _) => 0.0,
        (s, _) => s.parse().with_context(|| format!("bad shift `{s}`"))?,
    };
    if args.oracle == Switch::On {
        cfg.reference = Some(op.oracle_funv(&f, &v, cli.dense_limit)?);
    }
    let r = funv_driver(&op, &v, &f, &strategy, &cfg)?;
    eprintln!(
        "{} poles, interval [{:e}, {:e}], ell = {}, {}",
        strategy,
        interval.a(),
        interval.b(),
        r.ell,
        if r.converged { "converged" } else { "not converged" }
    );
    write_trace(args.out.as_deref(), &r.trace, cli.gnuplot, &format!("{} {}", f.label(), strategy))?;
    if let Some(p) = &args.result {
        let recs: Vec<Vec<String>> = r.x.column(0).iter().map(|x| vec![fmt17(*x)]).collect();
        write_csv(p, &["x"], &recs)?;
    }
    Ok(())
}

fn kronfun(cli: &Cli, args: &KronArgs) -> anyhow::Result<()> {
    let a = load_operator(&args.a)?;
    let bneg = load_operator(&args.b)?;
    let f = StieltjesFunction::parse(&args.function)?;
    let (uf, vf) = match (&args.ufile, &args.vfile) {
        (Some(u), Some(v)) => (read_dense_matrix(u)?, read_dense_matrix(v)?),
        _ => {
            if args.rank == 0 {
                bail!("rank must be positive");
            }
            seeded_factors(a.order(), bneg.order(), args.rank, cli.seed)
        }
    };
    let interval = if args.interval == "auto" {
        let ia = resolve_interval(&a, "auto", cli.dense_limit)?;
        let ib = resolve_interval(&bneg, "auto", cli.dense_limit)?;
        SpectralInterval::new(ia.a().min(ib.a()), ia.b().max(ib.b()))?
    } else {
        resolve_interval(&a, &args.interval, cli.dense_limit)?
    };
    let strategy = if Path::new(&args.poles).is_file() {
        KronStrategy::Custom(read_pole_file(&args.poles)?)
    } else {
        KronStrategy::parse(&args.poles)?
    };
    let prob = KroneckerProblem::new(a, bneg, uf, vf, f)?;
    let reference = match args.oracle {
        Switch::On => Some(kron_oracle(&prob, cli.dense_limit)?),
        Switch::Off => None,
    };
    let cfg = KronTraceConfig {
        interval,
        strategy: strategy.clone(),
        max_ell: args.ell,
        gamma: GammaChoice::Proven,
        reference: reference.clone(),
    };
    let (res, trace) = kron_trace(&prob, &cfg)?;
    eprintln!(
        "{} poles, interval [{:e}, {:e}], rank of X_ell <= {}",
        strategy,
        interval.a(),
        interval.b(),
        res.rank_bound()
    );
    write_trace(args.out.as_deref(), &trace, cli.gnuplot, &format!("{} {}", prob.function().label(), strategy))?;
    if let Some(path) = &args.svd_report {
        let x = reference.unwrap_or_else(|| res.to_dense());
        let report = singular_decay_report(&prob, &x, &interval, GammaChoice::Proven);
        let recs: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| vec![r.index.to_string(), fmt17(r.sigma), fmt17(r.bound.unwrap_or(f64::NAN))])
            .collect();
        write_csv(path, &["index", "sigma", "bound"], &recs)?;
        if report.violations > 0 {
            eprintln!("warning: {} singular values exceed their bound", report.violations);
        }
    }
    Ok(())
}

fn poles(args: &PolesArgs) -> anyhow::Result<()> {
    let interval = match (&args.interval, &args.matrix) {
        (Some(s), _) => {
            let (a, b) = parse_pair(s)?;
            SpectralInterval::new(a, b)?
        }
        (None, Some(m)) => resolve_interval(&load_operator(m)?, "auto", stieltjes_rk::operators::DEFAULT_DENSE_LIMIT)?,
        (None, None) if matches!(args.strategy.as_str(), "extended" | "polynomial") => SpectralInterval::new(1.0, 2.0)?,
        (None, None) => bail!("`{}` needs --interval or --matrix", args.strategy),
    };
    let seq = if args.strategy == "cauchy-kron" {
        cauchy_kron_poles(interval, args.len)?.0
    } else {
        if args.strategy == "eds" {
            bail!("choose `eds-laplace` or `eds-cauchy`");
        }
        let strategy = Strategy::parse(&args.strategy, &StieltjesFunction::inverse())?;
        let mut cfg = DriverConfig::new(interval);
        cfg.shift = args.shift;
        strategy_poles(&strategy, &cfg, args.len)?
    };
    let text = format_poles(seq.poles());
    match &args.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn experiment(cli: &Cli, args: &ExperimentArgs) -> anyhow::Result<()> {
    let mut cfg = ExperimentConfig::new(args.id, &args.out_dir);
    cfg.n = args.n;
    cfg.max_ell = args.max_ell;
    cfg.seed = cli.seed;
    cfg.gnuplot = cli.gnuplot;
    cfg.dense_limit = cli.dense_limit;
    let files = if args.bounds_only {
        emit_bounds(&cfg)?
    } else {
        let report = run_experiment(&cfg)?;
        for t in &report.timings {
            let iters = t.iterations.map_or("-".to_string(), |i| i.to_string());
            eprintln!("{:>8.0e} {:<12} {:>5} {:.3}s", t.tolerance, t.strategy, iters, t.seconds);
        }
        report.files
    };
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}

fn accept(args: &AcceptArgs) -> ExitCode {
    let ids: Vec<u8> =
        if args.criterion.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { args.criterion.clone() };
    let mut failed = 0;
    for id in ids {
        let outcome = run_criterion(id);
        println!("{outcome}");
        failed += !outcome.passed as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
