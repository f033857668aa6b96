//! Acceptance suite: eleven end-to-end checks of exactness, pole quality,
//! the a-priori bounds and the nested pole sequence.
//!
//! Each check returns a [`CriterionOutcome`] with the measured quantities, so
//! a failure shows by how much it failed.

use std::fmt;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::experiments::{diffusion_operator, iterations_to_tolerances, random_unit_block, seeded_unit_block};
use crate::functions::StieltjesFunction;
use crate::kronfun::{
    funm_diag, kron_fun, kron_oracle, kron_trace, singular_decay_report, sylvester_residual, KronStrategy,
    KronTraceConfig, KroneckerProblem,
};
use crate::operators::{funv_from_eigen, symmetric_eigen, HermitianOperator, IntervalMode, SpectralInterval};
use crate::poles::bounds::{rate_rho, sylvester_residual_bound, GammaChoice};
use crate::poles::{as_rational, zolotarev_poles, zolotarev_ratio, EdsState, EvalSet, PoleSequence};
use crate::rk::{exactness_check, funv_driver, DriverConfig, Strategy, TraceRow};

/// Seed shared by all randomized fixtures.
pub const ACCEPTANCE_SEED: u64 = 20_190_917;

/// Id, short name and runtime budget in seconds.
pub const CRITERIA: [(u8, &str, f64); 11] = [
    (1, "exactness", 10.0),
    (2, "zolotarev-bound", 5.0),
    (3, "cauchy-1d-bound", 60.0),
    (4, "laplace-1d-bound", 60.0),
    (5, "iteration-table", 600.0),
    (6, "funm-diag-oracle", 5.0),
    (7, "kron-cauchy-bound", 120.0),
    (8, "kron-laplace-bound", 120.0),
    (9, "sylvester-residual", 30.0),
    (10, "singular-value-decay", 60.0),
    (11, "eds-validity", 30.0),
];

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<22} {:7.2}s/{:.0}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.budget,
            self.detail
        )
    }
}

/// Least-squares slope of `ln y` against `x`.
pub fn log_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) =
        points.iter().fold((0.0, 0.0), |(n, d), &(x, y)| (n + (x - mx) * (y.ln() - my), d + (x - mx).powi(2)));
    num / den
}

/// Every row below its bound; returns the worst `error/bound` ratio.
fn worst_ratio(rows: &[TraceRow]) -> f64 {
    rows.iter().map(|r| r.true_error / r.bound).fold(f64::NEG_INFINITY, f64::max)
}

fn slope_of(rows: &[TraceRow]) -> f64 {
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.true_error > 0.0).map(|r| (r.ell as f64, r.true_error)).collect();
    log_slope(&pts)
}

struct Check {
    passed: bool,
    detail: String,
}

fn exactness() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED);
    let mut worst = 0.0f64;
    for trial in 0..25 {
        let n = rng.random_range(20..=200);
        let op = if trial % 2 == 0 {
            HermitianOperator::diagonal((0..n).map(|_| 10f64.powf(rng.random_range(-2.0..2.0))).collect())?
        } else {
            let d: Vec<f64> = (0..n).map(|_| rng.random_range(2.5..5.0)).collect();
            let e: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
            HermitianOperator::tridiagonal(d, e)?
        };
        let interval = op.spectral_interval(IntervalMode::ExactSmall { dense_limit: 400 })?;
        let len = rng.random_range(1..=8);
        let mut poles = zolotarev_poles(interval, len)?.into_vec();
        for _ in 0..rng.random_range(0..=2) {
            let at = rng.random_range(0..=poles.len());
            poles.insert(at, f64::INFINITY);
        }
        let v = random_unit_block(n, 1 + trial % 2, &mut rng);
        worst = worst.max(exactness_check(&op, &v, &PoleSequence::custom(poles), 400)?);
    }
    Ok(Check {
        passed: worst <= 1e-9,
        detail: format!("max relative error {worst:.2e} over 25 instances (limit 1e-9)"),
    })
}

fn zolotarev_bound() -> Result<Check> {
    let mut worst = 0.0f64;
    let mut ok = true;
    for (a, b) in [(1.0, 10.0), (1.0, 1000.0), (1e-3, 4.0)] {
        let iv = SpectralInterval::new(a, b)?;
        for ell in 1..=10 {
            let r = as_rational(&zolotarev_poles(iv, ell)?)?;
            let ratio = zolotarev_ratio(&r, EvalSet::interval(a, b)?, EvalSet::interval(-b, -a)?, 400)?;
            let bound = 4.0 * iv.rho().powi(ell as i32);
            worst = worst.max(ratio / bound);
            ok &= ratio <= bound;
        }
        let p1 = zolotarev_poles(iv, 1)?.poles()[0];
        let dev = (p1 + (a * b).sqrt()).abs();
        ok &= dev <= 1e-10;
    }
    Ok(Check { passed: ok, detail: format!("max ratio/(4ρ^ℓ) {worst:.3}; single pole at −√(ab)") })
}

/// Unscaled `tridiag(−1, 2, −1)` of order 2000 with `f = z^{−1/2}`.
fn cauchy_fixture(strategy: Strategy, max_ell: usize) -> Result<(Vec<TraceRow>, SpectralInterval)> {
    let n = 2000;
    let op = HermitianOperator::laplacian_1d(n, 1.0)?;
    let iv = op.spectral_interval(IntervalMode::ExactSmall { dense_limit: 0 })?;
    let v = seeded_unit_block(n, 1, ACCEPTANCE_SEED);
    let f = StieltjesFunction::power(-0.5)?;
    let mut cfg = DriverConfig::new(iv);
    cfg.tol = 0.0;
    cfg.maxiter = max_ell;
    cfg.stride = 1;
    cfg.reference = Some(op.oracle_funv(&f, &v, 0)?);
    Ok((funv_driver(&op, &v, &f, &strategy, &cfg)?.trace, iv))
}

fn cauchy_1d() -> Result<Check> {
    let (rows, iv) = cauchy_fixture(Strategy::Cauchy, 30)?;
    let ratio = worst_ratio(&rows);
    let slope = slope_of(&rows);
    let target = rate_rho(iv.a(), 4.0 * iv.b()).ln();
    let rel = slope / target;
    Ok(Check {
        passed: ratio <= 1.0 && (0.75..=1.25).contains(&rel),
        detail: format!("max error/bound {ratio:.3e}; slope {slope:.4} vs log ρ[a,4b] {target:.4} (ratio {rel:.3})"),
    })
}

fn laplace_1d() -> Result<Check> {
    let n = 2000;
    let op = diffusion_operator(n)?;
    let iv = op.spectral_interval(IntervalMode::ExactSmall { dense_limit: 0 })?;
    let v = seeded_unit_block(n, 1, ACCEPTANCE_SEED);
    let f = StieltjesFunction::phi(1)?;
    let mut cfg = DriverConfig::new(iv);
    cfg.tol = 0.0;
    cfg.maxiter = 30;
    cfg.stride = 1;
    cfg.reference = Some(op.oracle_funv(&f, &v, 0)?);
    let rows = funv_driver(&op, &v, &f, &Strategy::Zolotarev, &cfg)?.trace;
    let ratio = worst_ratio(&rows);
    Ok(Check { passed: ratio <= 1.0, detail: format!("max error/bound {ratio:.3e} over ℓ = 1..30") })
}

fn iteration_table() -> Result<Check> {
    let n = 100_000;
    let op = HermitianOperator::laplacian_1d(n, 1.0)?;
    let iv = op.spectral_interval(IntervalMode::ExactSmall { dense_limit: 0 })?;
    let v = seeded_unit_block(n, 1, ACCEPTANCE_SEED);
    let f = StieltjesFunction::power(-0.5)?;
    let x = op.oracle_funv(&f, &v, 0)?;
    let (eds, _) = iterations_to_tolerances(&op, &v, &f, &Strategy::EdsCauchy, iv, &x, &[1e-6], 60)?;
    let (ek, _) = iterations_to_tolerances(&op, &v, &f, &Strategy::Extended, iv, &x, &[1e-6], 400)?;
    let (e, k) = (eds[0].iterations, ek[0].iterations);
    let show = |i: Option<usize>, cap: usize| i.map_or(format!(">{cap}"), |i| i.to_string());
    Ok(Check {
        passed: e.is_some_and(|i| i <= 35) && k.is_none_or(|i| i >= 150),
        detail: format!("iterations to 1e-6: EDS {} (≤ 35), extended {} (≥ 150)", show(e, 60), show(k, 400)),
    })
}

fn funm_diag_oracle() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let m = 3 + trial % 4;
        let p = 3 + (trial / 4) % 4;
        let sym = |k: usize, shift: f64, rng: &mut ChaCha8Rng| {
            let g = DMatrix::from_fn(k, k, |_, _| StandardNormal.sample(rng));
            (&g + g.transpose()) * 0.5 + DMatrix::identity(k, k) * shift
        };
        let a = sym(m, 5.0, &mut rng);
        let b = sym(p, -5.0, &mut rng);
        let fw = DMatrix::from_fn(m, p, |_, _| StandardNormal.sample(&mut rng));
        // Brute force on the mp × mp Kronecker sum I ⊗ A − Bᵀ ⊗ I.
        let big = DMatrix::identity(p, p).kronecker(&a) - b.transpose().kronecker(&DMatrix::identity(m, m));
        let eig = symmetric_eigen(big)?;
        let vec = DMatrix::from_column_slice(m * p, 1, fw.as_slice());
        for f in [StieltjesFunction::inverse(), StieltjesFunction::power(-0.5)?, StieltjesFunction::phi(1)?] {
            let y = funm_diag(&f, &a, &b, &fw)?;
            let want = funv_from_eigen(&eig, |z| f.eval(z), &vec)?;
            let want = DMatrix::from_column_slice(m, p, want.as_slice());
            worst = worst.max((y - &want).norm() / want.norm());
        }
    }
    Ok(Check {
        passed: worst <= 1e-10,
        detail: format!("max relative error {worst:.2e} over 60 evaluations (limit 1e-10)"),
    })
}

/// `A = −B = tridiag(−1, 2, −1)` of order `n` with a random rank-one `F`.
fn kron_fixture(n: usize, f: StieltjesFunction) -> Result<(KroneckerProblem, SpectralInterval)> {
    let a = HermitianOperator::laplacian_1d(n, 1.0)?;
    let iv = a.spectral_interval(IntervalMode::ExactSmall { dense_limit: 0 })?;
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED);
    let uf = random_unit_block(n, 1, &mut rng);
    let vf = random_unit_block(n, 1, &mut rng);
    Ok((KroneckerProblem::new(a.clone(), a, uf, vf, f)?, iv))
}

fn kron_rows(
    prob: &KroneckerProblem,
    iv: SpectralInterval,
    strategy: KronStrategy,
    max_ell: usize,
) -> Result<Vec<TraceRow>> {
    let x = kron_oracle(prob, 1500)?;
    let cfg = KronTraceConfig { interval: iv, strategy, max_ell, gamma: GammaChoice::Proven, reference: Some(x) };
    Ok(kron_trace(prob, &cfg)?.1)
}

fn kron_cauchy() -> Result<Check> {
    let (prob, iv) = kron_fixture(300, StieltjesFunction::power(-0.5)?)?;
    let rows = kron_rows(&prob, iv, KronStrategy::CauchyKron, 20)?;
    let ratio = worst_ratio(&rows);
    let slope = slope_of(&rows);
    let target = rate_rho(iv.a(), 2.0 * iv.b()).ln();
    let rel = slope / target;
    Ok(Check {
        passed: ratio <= 1.0 && (0.75..=1.25).contains(&rel),
        detail: format!("max error/bound {ratio:.3e}; slope {slope:.4} vs log ρ[a,2b] {target:.4} (ratio {rel:.3})"),
    })
}

fn kron_laplace() -> Result<Check> {
    let (prob, iv) = kron_fixture(300, StieltjesFunction::phi(1)?)?;
    let rows = kron_rows(&prob, iv, KronStrategy::Laplace, 20)?;
    let ratio = worst_ratio(&rows);
    Ok(Check { passed: ratio <= 1.0, detail: format!("max error/bound {ratio:.3e} over ℓ = 1..20") })
}

fn sylvester() -> Result<Check> {
    let (prob, iv) = kron_fixture(200, StieltjesFunction::inverse())?;
    let fnorm = prob.rhs_norm();
    let mut worst = 0.0f64;
    for ell in 1..=15 {
        let (psi, xi) = KronStrategy::Laplace.poles(prob.function(), iv, ell)?;
        let res = sylvester_residual(&prob, &kron_fun(&prob, &psi, &xi, ell)?)?;
        worst = worst.max(res / sylvester_residual_bound(&iv, fnorm, ell));
    }
    Ok(Check { passed: worst <= 1.0, detail: format!("max residual/bound {worst:.3e} over ℓ = 1..15") })
}

fn singular_decay() -> Result<Check> {
    let mut parts = Vec::new();
    let mut ok = true;
    for f in [StieltjesFunction::power(-0.5)?, StieltjesFunction::phi(1)?] {
        let (prob, iv) = kron_fixture(300, f)?;
        let x = kron_oracle(&prob, 1500)?;
        let rep = singular_decay_report(&prob, &x, &iv, GammaChoice::Proven);
        let checked = rep.rows.iter().filter(|r| r.bound.is_some_and(|b| b >= rep.floor)).count();
        ok &= rep.violations == 0 && checked > 0;
        parts.push(format!(
            "{}: {} violations, {checked} indices above the rounding floor",
            prob.function().label(),
            rep.violations
        ));
    }
    Ok(Check { passed: ok, detail: parts.join("; ") })
}

fn eds_validity() -> Result<Check> {
    let mut worst = 0.0f64;
    for lower in [1e-2, 1e-4] {
        let mut st = EdsState::new(lower, crate::poles::eds::DEFAULT_ZETA)?;
        for j in 0..=30 {
            let s = st.s(j);
            let (sigma, next) = crate::poles::eds::eds_next(&st)?;
            if j >= 1 {
                worst = worst.max((st.g(sigma * sigma) - s).abs());
            }
            st = next;
        }
    }
    let (eds, iv) = cauchy_fixture(Strategy::EdsCauchy, 30)?;
    let (opt, _) = cauchy_fixture(Strategy::Cauchy, 30)?;
    let (se, so) = (slope_of(&eds), slope_of(&opt));
    let rel = se / so;
    let _ = iv;
    Ok(Check {
        passed: worst <= 1e-10 && (0.7..=1.3).contains(&rel),
        detail: format!(
            "max |g(t_j) − s_j| {worst:.2e}; EDS slope {se:.4} vs optimal-pole slope {so:.4} (ratio {rel:.3})"
        ),
    })
}

/// Runs criterion `id` (1 to 11).
pub fn run_criterion(id: u8) -> CriterionOutcome {
    let (_, name, budget) = CRITERIA.iter().copied().find(|c| c.0 == id).unwrap_or((id, "unknown", 0.0));
    let start = Instant::now();
    let check = match id {
        1 => exactness(),
        2 => zolotarev_bound(),
        3 => cauchy_1d(),
        4 => laplace_1d(),
        5 => iteration_table(),
        6 => funm_diag_oracle(),
        7 => kron_cauchy(),
        8 => kron_laplace(),
        9 => sylvester(),
        10 => singular_decay(),
        11 => eds_validity(),
        _ => Ok(Check { passed: false, detail: format!("no criterion {id}") }),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match check {
        Ok(c) if seconds > budget => (false, format!("{} (over the time budget)", c.detail)),
        Ok(c) => (c.passed, c.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome { id, name, passed, detail, seconds, budget }
}

/// Runs all criteria in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.0)).collect()
}
