//! Desk-scale reruns of the convergence studies: 1D Laplace- and
//! Cauchy–Stieltjes functions, the iteration-count table, and the
//! Kronecker-structured 2D problems.
//!
//! Every run writes one CSV per strategy plus a bound curve, and optionally a
//! gnuplot script that plots them together.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::StieltjesFunction;
use crate::kronfun::{
    kron_oracle, kron_trace, singular_decay_report, KronStrategy, KronTraceConfig, KroneckerProblem,
    SingularDecayReport,
};
use crate::linalg::norm2;
use crate::operators::{BlockVector, HermitianOperator, IntervalMode, SpectralInterval, DEFAULT_DENSE_LIMIT};
use crate::poles::bounds::{
    cauchy_1d_bound, kron_cauchy_bound, kron_laplace_bound, laplace_1d_bound, sylvester_residual_bound, GammaChoice,
};
use crate::rk::driver::strategy_poles;
use crate::rk::{funv_driver, DriverConfig, RkDecomposition, Strategy, TraceRow};

/// Time step times diffusivity, `Δt·ε`, of the 1D heat-equation setup.
pub const DIFFUSION_SCALE: f64 = 1e-3;

/// Relative-error targets of the iteration table.
pub const TABLE_TOLERANCES: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentId {
    LaplaceOneD,
    CauchyOneD,
    CauchyOneDEig,
    CauchyOneDFuncs,
    TableTimes,
    LaplaceTwoD,
    CauchyTwoD,
}

impl ExperimentId {
    pub const ALL: [Self; 7] = [
        Self::LaplaceOneD,
        Self::CauchyOneD,
        Self::CauchyOneDEig,
        Self::CauchyOneDFuncs,
        Self::TableTimes,
        Self::LaplaceTwoD,
        Self::CauchyTwoD,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::LaplaceOneD => "fig-lapl-1d",
            Self::CauchyOneD => "fig-cauchy-1d",
            Self::CauchyOneDEig => "fig-cauchy-1d-eig",
            Self::CauchyOneDFuncs => "fig-cauchy-1d-funcs",
            Self::TableTimes => "table-times",
            Self::LaplaceTwoD => "fig-lapl-2d",
            Self::CauchyTwoD => "fig-cauchy-2d",
        }
    }

    /// Default problem size.
    pub fn default_n(self) -> usize {
        match self {
            Self::LaplaceOneD => 50_000,
            Self::CauchyOneD | Self::CauchyOneDFuncs => 10_000,
            Self::CauchyOneDEig => 50_000,
            Self::TableTimes => 100_000,
            Self::LaplaceTwoD | Self::CauchyTwoD => 300,
        }
    }

    /// Largest accepted size.
    pub fn max_n(self) -> usize {
        match self {
            Self::LaplaceTwoD | Self::CauchyTwoD => crate::kronfun::KRON_ORACLE_LIMIT,
            _ => 2_000_000,
        }
    }

    pub fn default_max_ell(self) -> usize {
        match self {
            Self::TableTimes => 400,
            Self::LaplaceTwoD | Self::CauchyTwoD => 30,
            _ => 50,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|id| id.name()).collect();
            Error::InvalidParameter(format!("unknown experiment `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub id: ExperimentId,
    pub n: Option<usize>,
    pub max_ell: Option<usize>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub gnuplot: bool,
    pub dense_limit: usize,
}

impl ExperimentConfig {
    pub fn new(id: ExperimentId, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            id,
            n: None,
            max_ell: None,
            seed: 1,
            out_dir: out_dir.into(),
            gnuplot: false,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }

    pub fn size(&self) -> usize {
        self.n.unwrap_or(self.id.default_n())
    }

    pub fn max_ell(&self) -> usize {
        self.max_ell.unwrap_or(self.id.default_max_ell())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.size();
        if n < 2 || n > self.id.max_n() {
            return Err(Error::InvalidParameter(format!(
                "n = {n} is outside [2, {}] for {}",
                self.id.max_n(),
                self.id
            )));
        }
        if self.max_ell() == 0 {
            return Err(Error::InvalidParameter("max-ell must be positive".into()));
        }
        Ok(())
    }
}

/// Convergence history of one strategy.
#[derive(Clone, Debug)]
pub struct StrategyTrace {
    /// `variant` (function or spectrum) and strategy, e.g. `phi1-zolotarev`.
    pub label: String,
    pub rows: Vec<TraceRow>,
}

/// One entry of the iteration table.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub tolerance: f64,
    pub strategy: String,
    /// `None` when the target was not met within the iteration budget.
    pub iterations: Option<usize>,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentReport {
    pub files: Vec<PathBuf>,
    pub traces: Vec<StrategyTrace>,
    pub bounds: Vec<(String, Vec<(usize, f64)>)>,
    pub timings: Vec<TimingRow>,
    pub singular: Vec<(String, SingularDecayReport)>,
}

/// `k` unit-norm columns with standard normal entries.
pub fn random_unit_block(n: usize, k: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut m = DMatrix::from_fn(n, k, |_, _| StandardNormal.sample(rng));
    for mut c in m.column_iter_mut() {
        let nrm = c.norm();
        c /= nrm;
    }
    m
}

/// [`random_unit_block`] from a fresh generator seeded with `seed`.
pub fn seeded_unit_block(n: usize, k: usize, seed: u64) -> DMatrix<f64> {
    random_unit_block(n, k, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Unit-column factors `U` (`n × k`) and `V` (`m × k`) drawn in that order
/// from one generator.
pub fn seeded_factors(n: usize, m: usize, k: usize, seed: u64) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uf = random_unit_block(n, k, &mut rng);
    let vf = random_unit_block(m, k, &mut rng);
    (uf, vf)
}

/// `h⁻² Δt ε · tridiag(−1, 2, −1)` with `h = 1/(n+1)`.
pub fn diffusion_operator(n: usize) -> Result<HermitianOperator> {
    let h = 1.0 / (n as f64 + 1.0);
    HermitianOperator::laplacian_1d(n, DIFFUSION_SCALE / (h * h))
}

/// Diagonal test spectra: `i` equispaced in `[1/n, 1]`, `ii` the shifted
/// Laplacian `tridiag(−1, 2 + 10⁻³, −1)`, `iii` 20 Chebyshev points in
/// `[10⁻³, 10⁻¹]` and the rest in `[10, 10³]`.
pub fn test_spectrum(kind: &str, n: usize) -> Result<Vec<f64>> {
    let cheb = |m: usize, lo: f64, hi: f64| -> Vec<f64> {
        (1..=m)
            .map(|k| {
                0.5 * (lo + hi) + 0.5 * (hi - lo) * ((2 * k - 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos()
            })
            .collect()
    };
    match kind {
        "i" => Ok((0..n).map(|j| 1.0 / n as f64 + (1.0 - 1.0 / n as f64) * j as f64 / (n - 1) as f64).collect()),
        "ii" => Ok((1..=n).map(|k| crate::operators::toeplitz_tridiag_eigenvalue(2.0 + 1e-3, -1.0, n, k)).collect()),
        "iii" if n > 20 => {
            let mut d = cheb(20, 1e-3, 1e-1);
            d.extend(cheb(n - 20, 10.0, 1e3));
            Ok(d)
        }
        _ => Err(Error::InvalidParameter(format!("unknown spectrum `{kind}` for n = {n}"))),
    }
}

/// Which a-priori bound a curve comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Laplace1d,
    Cauchy1d,
    KronLaplace,
    KronCauchy,
    Sylvester,
}

/// `(ℓ, bound)` for `ℓ = 1..=max_ell`. `shift` applies the Laplace bound to
/// `f(z + η)` on `[a − η, b − η]`, which is finite even when `f(0⁺) = ∞`.
pub fn bound_curve(
    kind: BoundKind,
    f: &StieltjesFunction,
    interval: &SpectralInterval,
    norm: f64,
    max_ell: usize,
    shift: f64,
    gamma: GammaChoice,
) -> Result<Vec<(usize, f64)>> {
    let (f_eff, iv) = if shift != 0.0 {
        if !(shift > 0.0 && shift < interval.a()) {
            return Err(Error::InvalidParameter(format!("shift {shift} must lie in (0, a = {})", interval.a())));
        }
        (f.clone().with_shift(f.shift() + shift), SpectralInterval::new(interval.a() - shift, interval.b() - shift)?)
    } else {
        (f.clone(), *interval)
    };
    (1..=max_ell)
        .map(|ell| {
            let b = match kind {
                BoundKind::Laplace1d => laplace_1d_bound(&f_eff, &iv, norm, ell, gamma)?,
                BoundKind::Cauchy1d => cauchy_1d_bound(f, interval, norm, ell)?,
                BoundKind::KronLaplace => kron_laplace_bound(&f_eff, &iv, norm, ell, gamma)?,
                BoundKind::KronCauchy => kron_cauchy_bound(f, interval, norm, ell)?,
                BoundKind::Sylvester => sylvester_residual_bound(interval, norm, ell),
            };
            Ok((ell, b))
        })
        .collect()
}

/// Formats with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Writes `rows` under `header` to `path` via a temporary file and rename.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("csv.tmp");
    {
        let mut w = csv::Writer::from_path(&tmp).map_err(csv_error)?;
        w.write_record(header).map_err(csv_error)?;
        for r in rows {
            w.write_record(r).map_err(csv_error)?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `ell,est_error,true_error,bound`.
pub fn trace_records(rows: &[TraceRow]) -> Vec<Vec<String>> {
    rows.iter().map(|r| vec![r.ell.to_string(), fmt17(r.est_error), fmt17(r.true_error), fmt17(r.bound)]).collect()
}

pub const TRACE_HEADER: [&str; 4] = ["ell", "est_error", "true_error", "bound"];

fn write_trace(path: &Path, rows: &[TraceRow]) -> Result<()> {
    let recs: Vec<Vec<String>> =
        rows.iter().map(|r| vec![r.ell.to_string(), fmt17(r.true_error), fmt17(r.bound)]).collect();
    write_csv(path, &["ell", "true_error", "bound"], &recs)
}

fn write_bounds(path: &Path, curve: &[(usize, f64)]) -> Result<()> {
    let recs: Vec<Vec<String>> = curve.iter().map(|(l, b)| vec![l.to_string(), fmt17(*b)]).collect();
    write_csv(path, &["ell", "bound"], &recs)
}

pub fn write_gnuplot(path: &Path, title: &str, series: &[(PathBuf, String, usize)]) -> Result<()> {
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset logscale y\nset key autotitle columnhead\n");
    s.push_str(&format!("set title '{title}'\nset xlabel 'iterations'\nset ylabel 'error'\n"));
    let items: Vec<String> = series
        .iter()
        .map(|(p, t, col)| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            let style = if t == "bound" { "lines dashtype 2" } else { "linespoints" };
            format!("'{name}' using 1:{col} with {style} title '{t}'")
        })
        .collect();
    s.push_str(&format!("plot {}\n", items.join(", \\\n     ")));
    fs::write(path, s)?;
    Ok(())
}

/// One 1D study: operator, vector, function and the strategies to compare.
struct OneD {
    variant: String,
    op: HermitianOperator,
    interval: SpectralInterval,
    v: BlockVector,
    f: StieltjesFunction,
    shift: f64,
    strategies: Vec<Strategy>,
    bound_kind: BoundKind,
}

fn one_d_traces(case: &OneD, max_ell: usize, dense_limit: usize) -> Result<Vec<StrategyTrace>> {
    let reference = case.op.oracle_funv(&case.f, &case.v, dense_limit)?;
    case.strategies
        .par_iter()
        .map(|s| {
            let mut cfg = DriverConfig::new(case.interval);
            cfg.tol = 0.0;
            cfg.maxiter = max_ell;
            cfg.stride = 1;
            cfg.reference = Some(reference.clone());
            if matches!(s, Strategy::Zolotarev | Strategy::EdsLaplace) {
                cfg.shift = case.shift;
            }
            let r = funv_driver(&case.op, &case.v, &case.f, s, &cfg)?;
            Ok(StrategyTrace { label: format!("{}-{}", case.variant, s), rows: r.trace })
        })
        .collect()
}

fn run_one_d(cfg: &ExperimentConfig, cases: Vec<OneD>, report: &mut ExperimentReport) -> Result<()> {
    let id = cfg.id.name();
    for case in cases {
        let traces = one_d_traces(&case, cfg.max_ell(), cfg.dense_limit)?;
        let curve = bound_curve(
            case.bound_kind,
            &case.f,
            &case.interval,
            norm2(&case.v),
            cfg.max_ell(),
            case.shift,
            GammaChoice::Proven,
        )?;
        let mut series = Vec::new();
        for t in &traces {
            let path = cfg.out_dir.join(format!("{id}-{}.csv", t.label));
            write_trace(&path, &t.rows)?;
            series.push((path.clone(), t.label.clone(), 2));
            report.files.push(path);
        }
        let bpath = cfg.out_dir.join(format!("{id}-{}-bounds.csv", case.variant));
        write_bounds(&bpath, &curve)?;
        series.push((bpath.clone(), "bound".into(), 2));
        report.files.push(bpath);
        if cfg.gnuplot {
            let gp = cfg.out_dir.join(format!("{id}-{}.gp", case.variant));
            write_gnuplot(&gp, &format!("{id} {}", case.variant), &series)?;
            report.files.push(gp);
        }
        report.traces.extend(traces);
        report.bounds.push((case.variant.clone(), curve));
    }
    Ok(())
}

fn exact_interval(op: &HermitianOperator, dense_limit: usize) -> Result<SpectralInterval> {
    op.spectral_interval(IntervalMode::ExactSmall { dense_limit })
}

/// Iteration counts and wall-clock time for a nested strategy to reach each
/// relative error in `tolerances`, plus the full trace up to the last target
/// (or `maxiter`).
pub fn iterations_to_tolerances(
    op: &HermitianOperator,
    v: &BlockVector,
    f: &StieltjesFunction,
    strategy: &Strategy,
    interval: SpectralInterval,
    reference: &BlockVector,
    tolerances: &[f64],
    maxiter: usize,
) -> Result<(Vec<TimingRow>, Vec<TraceRow>)> {
    if !strategy.is_nested() {
        return Err(Error::InvalidParameter(format!("strategy {strategy} is not nested")));
    }
    let poles = strategy_poles(strategy, &DriverConfig::new(interval), maxiter)?;
    let xnorm = norm2(reference);
    let start = Instant::now();
    let mut d = RkDecomposition::new(op, v)?;
    let mut hit: Vec<Option<(usize, f64)>> = vec![None; tolerances.len()];
    let mut trace = Vec::new();
    for (j, &p) in poles.poles().iter().enumerate() {
        if d.flagged().is_none() {
            d.extend(op, &[p])?;
        }
        let x = d.funv_with(|z| f.eval(z))?;
        let err = norm2(&(reference - &x));
        let elapsed = start.elapsed().as_secs_f64();
        trace.push(TraceRow { ell: j + 1, est_error: f64::NAN, true_error: err, bound: f64::NAN, dim: d.dim() });
        for (h, &tol) in hit.iter_mut().zip(tolerances) {
            if h.is_none() && err <= tol * xnorm {
                *h = Some((j + 1, elapsed));
            }
        }
        if hit.iter().all(Option::is_some) {
            break;
        }
    }
    let rows = tolerances
        .iter()
        .zip(&hit)
        .map(|(&tolerance, h)| TimingRow {
            tolerance,
            strategy: strategy.to_string(),
            iterations: h.map(|(i, _)| i),
            seconds: h.map_or(f64::NAN, |(_, s)| s),
        })
        .collect();
    Ok((rows, trace))
}

fn run_table(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> Result<()> {
    let n = cfg.size();
    let op = HermitianOperator::laplacian_1d(n, 1.0)?;
    let interval = exact_interval(&op, cfg.dense_limit)?;
    let v = seeded_unit_block(n, 1, cfg.seed);
    let f = StieltjesFunction::power(-0.5)?;
    let reference = op.oracle_funv(&f, &v, cfg.dense_limit)?;
    let maxiter = cfg.max_ell();
    // Strategies run one after another so the timings do not compete.
    for s in [Strategy::EdsCauchy, Strategy::Extended] {
        let (rows, trace) =
            iterations_to_tolerances(&op, &v, &f, &s, interval, &reference, &TABLE_TOLERANCES, maxiter)?;
        let path = cfg.out_dir.join(format!("table-times-{s}.csv"));
        write_trace(&path, &trace)?;
        report.files.push(path);
        report.traces.push(StrategyTrace { label: s.to_string(), rows: trace });
        report.timings.extend(rows);
    }
    let recs: Vec<Vec<String>> = report
        .timings
        .iter()
        .map(|t| {
            vec![
                fmt17(t.tolerance),
                t.strategy.clone(),
                t.iterations.map_or_else(|| "NaN".to_string(), |i| i.to_string()),
                fmt17(t.seconds),
            ]
        })
        .collect();
    let path = cfg.out_dir.join("table-times-summary.csv");
    write_csv(&path, &["tolerance", "strategy", "iterations", "seconds"], &recs)?;
    report.files.push(path);
    if cfg.gnuplot {
        let series: Vec<(PathBuf, String, usize)> = report.files[..2]
            .iter()
            .zip(["eds-cauchy", "extended"])
            .map(|(p, t)| (p.clone(), t.to_string(), 2))
            .collect();
        let gp = cfg.out_dir.join("table-times.gp");
        write_gnuplot(&gp, "table-times", &series)?;
        report.files.push(gp);
    }
    Ok(())
}

fn run_two_d(cfg: &ExperimentConfig, laplace: bool, report: &mut ExperimentReport) -> Result<()> {
    let n = cfg.size();
    let (a, f, strategies, kind) = if laplace {
        (
            diffusion_operator(n)?,
            StieltjesFunction::phi(1)?,
            vec![KronStrategy::Laplace, KronStrategy::Eds, KronStrategy::Extended, KronStrategy::Polynomial],
            BoundKind::KronLaplace,
        )
    } else {
        (
            HermitianOperator::laplacian_1d(n, 1.0)?,
            StieltjesFunction::power(-0.5)?,
            vec![KronStrategy::CauchyKron, KronStrategy::Eds, KronStrategy::Extended, KronStrategy::Polynomial],
            BoundKind::KronCauchy,
        )
    };
    let interval = exact_interval(&a, cfg.dense_limit)?;
    let (uf, vf) = seeded_factors(n, n, 1, cfg.seed);
    let prob = KroneckerProblem::new(a.clone(), a, uf, vf, f.clone())?;
    let x = kron_oracle(&prob, cfg.dense_limit)?;
    let max_ell = cfg.max_ell();
    let traces: Vec<StrategyTrace> = strategies
        .par_iter()
        .map(|s| {
            let tc = KronTraceConfig {
                interval,
                strategy: s.clone(),
                max_ell,
                gamma: GammaChoice::Proven,
                reference: Some(x.clone()),
            };
            let (_, rows) = kron_trace(&prob, &tc)?;
            Ok(StrategyTrace { label: s.to_string(), rows })
        })
        .collect::<Result<_>>()?;
    let id = cfg.id.name();
    let mut series = Vec::new();
    for t in &traces {
        let path = cfg.out_dir.join(format!("{id}-{}.csv", t.label));
        write_trace(&path, &t.rows)?;
        series.push((path.clone(), t.label.clone(), 2));
        report.files.push(path);
    }
    let curve = bound_curve(kind, &f, &interval, prob.rhs_norm(), max_ell, 0.0, GammaChoice::Proven)?;
    let bpath = cfg.out_dir.join(format!("{id}-bounds.csv"));
    write_bounds(&bpath, &curve)?;
    series.push((bpath.clone(), "bound".into(), 2));
    report.files.push(bpath);

    let svd = singular_decay_report(&prob, &x, &interval, GammaChoice::Proven);
    let recs: Vec<Vec<String>> = svd
        .rows
        .iter()
        .map(|r| vec![r.index.to_string(), fmt17(r.sigma), fmt17(r.bound.unwrap_or(f64::NAN))])
        .collect();
    let spath = cfg.out_dir.join(format!("{id}-singular-values.csv"));
    write_csv(&spath, &["index", "sigma", "bound"], &recs)?;
    report.files.push(spath.clone());
    if cfg.gnuplot {
        series.push((spath, "singular values".into(), 2));
        let gp = cfg.out_dir.join(format!("{id}.gp"));
        write_gnuplot(&gp, id, &series)?;
        report.files.push(gp);
    }
    report.traces.extend(traces);
    report.bounds.push((id.to_string(), curve));
    report.singular.push((id.to_string(), svd));
    Ok(())
}

/// The shift `η = a/2` used for Laplace-type poles when `f(0⁺) = ∞`.
pub fn laplace_shift(f: &StieltjesFunction, interval: &SpectralInterval) -> f64 {
    if f.at_zero_plus().is_finite() {
        0.0
    } else {
        interval.a() / 2.0
    }
}

/// Runs one experiment and writes its CSV files into `cfg.out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir)?;
    let n = cfg.size();
    let mut report = ExperimentReport::default();
    let cauchy_set = || vec![Strategy::Cauchy, Strategy::EdsCauchy, Strategy::Extended];
    match cfg.id {
        ExperimentId::LaplaceOneD => {
            let op = diffusion_operator(n)?;
            let interval = exact_interval(&op, cfg.dense_limit)?;
            let v = seeded_unit_block(n, 1, cfg.seed);
            let cases = [("phi1", StieltjesFunction::phi(1)?), ("lambertw", StieltjesFunction::lambertw_scaled())]
                .into_iter()
                .map(|(name, f)| OneD {
                    variant: name.into(),
                    op: op.clone(),
                    interval,
                    v: v.clone(),
                    shift: laplace_shift(&f, &interval),
                    f,
                    strategies: vec![Strategy::Zolotarev, Strategy::EdsLaplace, Strategy::Extended],
                    bound_kind: BoundKind::Laplace1d,
                })
                .collect();
            run_one_d(cfg, cases, &mut report)?;
        }
        ExperimentId::CauchyOneD => {
            let op = HermitianOperator::laplacian_1d(n, 1.0)?;
            let case = OneD {
                variant: format!("n{n}"),
                interval: exact_interval(&op, cfg.dense_limit)?,
                op,
                v: seeded_unit_block(n, 1, cfg.seed),
                f: StieltjesFunction::power(-0.5)?,
                shift: 0.0,
                strategies: cauchy_set(),
                bound_kind: BoundKind::Cauchy1d,
            };
            run_one_d(cfg, vec![case], &mut report)?;
        }
        ExperimentId::CauchyOneDEig => {
            let v = seeded_unit_block(n, 1, cfg.seed);
            let mut cases = Vec::new();
            for kind in ["i", "ii", "iii"] {
                let op = HermitianOperator::diagonal(test_spectrum(kind, n)?)?;
                cases.push(OneD {
                    variant: format!("spectrum-{kind}"),
                    interval: exact_interval(&op, cfg.dense_limit)?,
                    op,
                    v: v.clone(),
                    f: StieltjesFunction::power(-0.5)?,
                    shift: 0.0,
                    strategies: cauchy_set(),
                    bound_kind: BoundKind::Cauchy1d,
                });
            }
            run_one_d(cfg, cases, &mut report)?;
        }
        ExperimentId::CauchyOneDFuncs => {
            let op = HermitianOperator::laplacian_1d(n, 1.0)?;
            let interval = exact_interval(&op, cfg.dense_limit)?;
            let v = seeded_unit_block(n, 1, cfg.seed);
            let funcs = [
                ("expsqrt", StieltjesFunction::one_minus_exp_sqrt_over_z()),
                ("power-0.2", StieltjesFunction::power(-0.2)?),
                ("power-0.8", StieltjesFunction::power(-0.8)?),
            ];
            let cases = funcs
                .into_iter()
                .map(|(name, f)| OneD {
                    variant: name.into(),
                    op: op.clone(),
                    interval,
                    v: v.clone(),
                    f,
                    shift: 0.0,
                    strategies: cauchy_set(),
                    bound_kind: BoundKind::Cauchy1d,
                })
                .collect();
            run_one_d(cfg, cases, &mut report)?;
        }
        ExperimentId::TableTimes => run_table(cfg, &mut report)?,
        ExperimentId::LaplaceTwoD => run_two_d(cfg, true, &mut report)?,
        ExperimentId::CauchyTwoD => run_two_d(cfg, false, &mut report)?,
    }
    Ok(report)
}

/// Writes only the bound curves of an experiment, `(ell, bound)` per file.
pub fn emit_bounds(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir)?;
    let n = cfg.size();
    let id = cfg.id.name();
    let max_ell = cfg.max_ell();
    let mut out = Vec::new();
    let mut emit = |name: String, curve: Vec<(usize, f64)>| -> Result<()> {
        let p = cfg.out_dir.join(name);
        write_bounds(&p, &curve)?;
        out.push(p);
        Ok(())
    };
    match cfg.id {
        ExperimentId::LaplaceOneD => {
            let iv = exact_interval(&diffusion_operator(n)?, cfg.dense_limit)?;
            for (name, f) in [("phi1", StieltjesFunction::phi(1)?), ("lambertw", StieltjesFunction::lambertw_scaled())]
            {
                let eta = laplace_shift(&f, &iv);
                emit(
                    format!("{id}-{name}-bounds.csv"),
                    bound_curve(BoundKind::Laplace1d, &f, &iv, 1.0, max_ell, eta, GammaChoice::Proven)?,
                )?;
            }
        }
        ExperimentId::CauchyOneD | ExperimentId::TableTimes => {
            let iv = exact_interval(&HermitianOperator::laplacian_1d(n, 1.0)?, cfg.dense_limit)?;
            let f = StieltjesFunction::power(-0.5)?;
            emit(
                format!("{id}-bounds.csv"),
                bound_curve(BoundKind::Cauchy1d, &f, &iv, 1.0, max_ell, 0.0, GammaChoice::Proven)?,
            )?;
        }
        ExperimentId::CauchyOneDEig => {
            let f = StieltjesFunction::power(-0.5)?;
            for kind in ["i", "ii", "iii"] {
                let iv = exact_interval(&HermitianOperator::diagonal(test_spectrum(kind, n)?)?, cfg.dense_limit)?;
                emit(
                    format!("{id}-spectrum-{kind}-bounds.csv"),
                    bound_curve(BoundKind::Cauchy1d, &f, &iv, 1.0, max_ell, 0.0, GammaChoice::Proven)?,
                )?;
            }
        }
        ExperimentId::CauchyOneDFuncs => {
            let iv = exact_interval(&HermitianOperator::laplacian_1d(n, 1.0)?, cfg.dense_limit)?;
            for (name, f) in [
                ("expsqrt", StieltjesFunction::one_minus_exp_sqrt_over_z()),
                ("power-0.2", StieltjesFunction::power(-0.2)?),
                ("power-0.8", StieltjesFunction::power(-0.8)?),
            ] {
                emit(
                    format!("{id}-{name}-bounds.csv"),
                    bound_curve(BoundKind::Cauchy1d, &f, &iv, 1.0, max_ell, 0.0, GammaChoice::Proven)?,
                )?;
            }
        }
        ExperimentId::LaplaceTwoD => {
            let iv = exact_interval(&diffusion_operator(n)?, cfg.dense_limit)?;
            let f = StieltjesFunction::phi(1)?;
            emit(
                format!("{id}-bounds.csv"),
                bound_curve(BoundKind::KronLaplace, &f, &iv, 1.0, max_ell, 0.0, GammaChoice::Proven)?,
            )?;
        }
        ExperimentId::CauchyTwoD => {
            let iv = exact_interval(&HermitianOperator::laplacian_1d(n, 1.0)?, cfg.dense_limit)?;
            let f = StieltjesFunction::power(-0.5)?;
            emit(
                format!("{id}-bounds.csv"),
                bound_curve(BoundKind::KronCauchy, &f, &iv, 1.0, max_ell, 0.0, GammaChoice::Proven)?,
            )?;
        }
    }
    Ok(out)
}
